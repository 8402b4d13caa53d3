use std::sync::Arc;

use evcodes::algebra::{AxisSpec, Field, PointSet};
use evcodes::codes::{
    build_code_positions, build_pair_codes, exact_min_weight, exact_rghw, exact_rghw_dual, exact_rghw_with, RghwMethod,
};
use evcodes::fengrao::{BasisContext, CodePairSpec};
use evcodes::monomial::MonomialOrder;
use proptest::prelude::*;

fn context(q: u32, m: usize) -> BasisContext {
    let f = Arc::new(Field::with_order(q).unwrap());
    BasisContext::new(PointSet::new(f, &vec![AxisSpec::FullField; m]).unwrap(), MonomialOrder::Deglex).unwrap()
}

// random nested position sets with 1 <= #L1 - #L2 <= 3
fn nested(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (Just(n), prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n), 1usize..=3).prop_map(
        |(n, in1, in2, extra)| {
            let mut l1: Vec<usize> = (1..=n).filter(|&p| in1[p - 1]).collect();
            let mut l2: Vec<usize> = l1.iter().copied().filter(|&p| in2[p - 1]).collect();
            if l1.is_empty() {
                l1.push(1);
            }
            while l1.len() - l2.len() > extra {
                let next = l1.iter().copied().find(|p| !l2.contains(p)).unwrap();
                l2.push(next);
                l2.sort_unstable();
            }
            if l1.len() == l2.len() {
                l2.pop();
            }
            (l1, l2)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn methods_agree_over_f3((l1, l2) in nested(9)) {
        let ctx = context(3, 2);
        let pair = CodePairSpec::from_positions(ctx.delta().clone(), l1, l2).unwrap();
        let (c1, c2) = build_pair_codes(&ctx, &pair).unwrap();
        let mut last = 0;
        for v in 1..=pair.ell() {
            let a = exact_rghw_with(&c1, &c2, v, RghwMethod::Subspaces).unwrap();
            let b = exact_rghw_with(&c1, &c2, v, RghwMethod::SupportSubsets).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a > last);
            last = a;
            let da = exact_rghw_dual(&c1, &c2, v, RghwMethod::Subspaces).unwrap();
            let db = exact_rghw_dual(&c1, &c2, v, RghwMethod::SupportSubsets).unwrap();
            prop_assert_eq!(da, db);
        }
    }

    #[test]
    fn methods_agree_over_f2_cube((l1, l2) in nested(8)) {
        let ctx = context(2, 3);
        let pair = CodePairSpec::from_positions(ctx.delta().clone(), l1, l2).unwrap();
        let (c1, c2) = build_pair_codes(&ctx, &pair).unwrap();
        for v in 1..=pair.ell() {
            prop_assert_eq!(
                exact_rghw_with(&c1, &c2, v, RghwMethod::Subspaces).unwrap(),
                exact_rghw_with(&c1, &c2, v, RghwMethod::SupportSubsets).unwrap()
            );
        }
    }
}

#[test]
fn zero_subcode_gives_minimum_distance() {
    let ctx = context(3, 2);
    for top in 1..=6 {
        let c1 = build_code_positions(&ctx, &(1..=top).collect::<Vec<_>>()).unwrap();
        let c2 = build_code_positions(&ctx, &[]).unwrap();
        assert_eq!(exact_rghw(&c1, &c2, 1).unwrap(), exact_min_weight(&c1).unwrap(), "top {top}");
    }
}

#[test]
fn full_space_weights_count_coordinates() {
    let ctx = context(2, 2);
    let c1 = build_code_positions(&ctx, &[1, 2, 3, 4]).unwrap();
    let zero = build_code_positions(&ctx, &[]).unwrap();
    for v in 1..=4 {
        assert_eq!(exact_rghw(&c1, &zero, v).unwrap(), v);
    }
    // avoiding the all-ones word still leaves three unit vectors
    let ones = build_code_positions(&ctx, &[1]).unwrap();
    assert_eq!(exact_rghw(&c1, &ones, 3).unwrap(), 3);
}
