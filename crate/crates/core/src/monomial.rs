//! Monomials, degree-compatible monomial orders, the box `Delta(s_1, ..., s_m)`
//! and the footprint counts `D` and `D_perp`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("arity mismatch: {0} vs {1} variables")]
    Arity(usize, usize),
    #[error("monomial {0} lies outside the box {1:?}")]
    OutsideBox(Monomial, Vec<usize>),
    #[error("the monomial set is empty")]
    EmptySet,
    #[error("weights must be positive and one per variable")]
    BadWeights,
    #[error("box bounds must be positive")]
    BadBounds,
}

/// `X_1^{i_1} ... X_m^{i_m}`, serialized as the exponent array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn in_box(&self, bounds: &[usize]) -> bool {
        self.0.len() == bounds.len() && self.0.iter().zip(bounds).all(|(&e, &s)| (e as usize) < s)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 2] = ["X", "Y"];
        let mut wrote = false;
        for (t, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if self.0.len() <= 2 { NAMES[t].to_string() } else { format!("X{}", t + 1) };
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Degree-compatible orders. Ties in (weighted) degree are broken by the
/// rightmost differing exponent: `a < b` when `b` has the larger exponent there.
/// In two variables this puts `X` before `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonomialOrder {
    Deglex,
    #[serde(rename = "wdeglex")]
    WeightedDeglex { weights: Vec<u32> },
}

impl MonomialOrder {
    pub fn weighted(weights: Vec<u32>) -> Result<Self, MonomialError> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(MonomialError::BadWeights);
        }
        Ok(MonomialOrder::WeightedDeglex { weights })
    }

    fn weight(&self, a: &Monomial) -> u64 {
        match self {
            MonomialOrder::Deglex => a.0.iter().map(|&e| e as u64).sum(),
            MonomialOrder::WeightedDeglex { weights } => {
                a.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w as u64).sum()
            }
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, MonomialError> {
        if a.arity() != b.arity() {
            return Err(MonomialError::Arity(a.arity(), b.arity()));
        }
        if let MonomialOrder::WeightedDeglex { weights } = self {
            if weights.len() != a.arity() {
                return Err(MonomialError::BadWeights);
            }
        }
        Ok(self.cmp_unchecked(a, b))
    }

    pub(crate) fn cmp_unchecked(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.weight(a).cmp(&self.weight(b)).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0).rev() {
                if x != y {
                    return x.cmp(y);
                }
            }
            Ordering::Equal
        })
    }
}

/// The box `Delta(s_1, ..., s_m)` enumerated increasingly under a monomial order.
/// Positions are 1-based, matching the basis numbering `b_1, ..., b_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSet {
    bounds: Vec<usize>,
    order: MonomialOrder,
    sorted: Vec<Monomial>,
    // mixed-radix index (last variable fastest) -> 1-based position
    position: Vec<usize>,
}

impl DeltaSet {
    pub fn new(bounds: &[usize], order: MonomialOrder) -> Result<Self, MonomialError> {
        if bounds.is_empty() || bounds.contains(&0) {
            return Err(MonomialError::BadBounds);
        }
        if let MonomialOrder::WeightedDeglex { weights } = &order {
            if weights.len() != bounds.len() || weights.contains(&0) {
                return Err(MonomialError::BadWeights);
            }
        }
        let n: usize = bounds.iter().product();
        let mut sorted: Vec<Monomial> = (0..n).map(|r| unrank(bounds, r)).collect();
        sorted.sort_by(|a, b| order.cmp_unchecked(a, b));
        let mut position = vec![0; n];
        for (k, m) in sorted.iter().enumerate() {
            position[rank(bounds, m)] = k + 1;
        }
        Ok(DeltaSet { bounds: bounds.to_vec(), order, sorted, position })
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.bounds.len()
    }

    /// `N_pos`, 1-based.
    pub fn monomial(&self, pos: usize) -> &Monomial {
        &self.sorted[pos - 1]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.sorted
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.in_box(&self.bounds)
    }

    /// 1-based position of `m`, if it lies in the box.
    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.contains(m).then(|| self.position[rank(&self.bounds, m)])
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, MonomialError> {
        self.order.compare(a, b)
    }

    fn check(&self, m: &Monomial) -> Result<(), MonomialError> {
        if m.arity() != self.arity() {
            return Err(MonomialError::Arity(m.arity(), self.arity()));
        }
        if !self.contains(m) {
            return Err(MonomialError::OutsideBox(m.clone(), self.bounds.clone()));
        }
        Ok(())
    }

    pub fn d(&self, m: &Monomial) -> Result<u64, MonomialError> {
        self.check(m)?;
        Ok(d_single_unchecked(&self.bounds, m))
    }

    pub fn d_perp(&self, m: &Monomial) -> Result<u64, MonomialError> {
        self.check(m)?;
        Ok(d_perp_single_unchecked(m))
    }

    pub fn d_set(&self, k: &[Monomial]) -> Result<u64, MonomialError> {
        d_set(&self.bounds, k)
    }

    pub fn d_perp_set(&self, k: &[Monomial]) -> Result<u64, MonomialError> {
        d_perp_set(&self.bounds, k)
    }
}

/// Mixed-radix rank of a monomial in the box, last variable fastest.
pub(crate) fn rank(bounds: &[usize], m: &Monomial) -> usize {
    m.0.iter().zip(bounds).fold(0, |acc, (&e, &s)| acc * s + e as usize)
}

pub(crate) fn unrank(bounds: &[usize], mut r: usize) -> Monomial {
    let mut exps = vec![0u32; bounds.len()];
    for (t, &s) in bounds.iter().enumerate().rev() {
        exps[t] = (r % s) as u32;
        r /= s;
    }
    Monomial(exps)
}

pub(crate) fn d_single_unchecked(bounds: &[usize], m: &Monomial) -> u64 {
    m.0.iter().zip(bounds).map(|(&e, &s)| (s - e as usize) as u64).product()
}

pub(crate) fn d_perp_single_unchecked(m: &Monomial) -> u64 {
    m.0.iter().map(|&e| e as u64 + 1).product()
}

fn check_set(bounds: &[usize], k: &[Monomial]) -> Result<(), MonomialError> {
    if k.is_empty() {
        return Err(MonomialError::EmptySet);
    }
    for m in k {
        if m.arity() != bounds.len() {
            return Err(MonomialError::Arity(m.arity(), bounds.len()));
        }
        if !m.in_box(bounds) {
            return Err(MonomialError::OutsideBox(m.clone(), bounds.to_vec()));
        }
    }
    Ok(())
}

/// The box in increasing order; `result[p - 1]` is the monomial at position `p`.
pub fn enumerate_delta(bounds: &[usize], order: MonomialOrder) -> Result<Vec<Monomial>, MonomialError> {
    Ok(DeltaSet::new(bounds, order)?.monomials().to_vec())
}

/// Above this many generators the counts fall back to scanning the box.
pub const INCLUSION_EXCLUSION_LIMIT: usize = 20;

/// `D(X^i) = prod (s_t - i_t)`.
pub fn d_single(bounds: &[usize], m: &Monomial) -> Result<u64, MonomialError> {
    check_set(bounds, std::slice::from_ref(m))?;
    Ok(d_single_unchecked(bounds, m))
}

/// `D_perp(X^i) = prod (i_t + 1)`.
pub fn d_perp_single(bounds: &[usize], m: &Monomial) -> Result<u64, MonomialError> {
    check_set(bounds, std::slice::from_ref(m))?;
    Ok(d_perp_single_unchecked(m))
}

/// Number of box monomials divisible by some member of `k`.
pub fn d_set(bounds: &[usize], k: &[Monomial]) -> Result<u64, MonomialError> {
    check_set(bounds, k)?;
    let k = dedup(k);
    if k.len() > INCLUSION_EXCLUSION_LIMIT {
        return Ok(d_set_scan(bounds, &k));
    }
    // sum over nonempty subsets of (-1)^{|T|+1} D(lcm T)
    let mut total: i64 = 0;
    for_each_subset(&k, |lcm, odd| {
        let v = d_single_unchecked(bounds, lcm) as i64;
        total += if odd { v } else { -v };
    }, Monomial::lcm);
    Ok(total as u64)
}

/// Number of box monomials dividing some member of `k`.
pub fn d_perp_set(bounds: &[usize], k: &[Monomial]) -> Result<u64, MonomialError> {
    check_set(bounds, k)?;
    let k = dedup(k);
    if k.len() > INCLUSION_EXCLUSION_LIMIT {
        return Ok(d_perp_set_scan(bounds, &k));
    }
    let mut total: i64 = 0;
    for_each_subset(&k, |gcd, odd| {
        let v = d_perp_single_unchecked(gcd) as i64;
        total += if odd { v } else { -v };
    }, Monomial::gcd);
    Ok(total as u64)
}

fn dedup(k: &[Monomial]) -> Vec<Monomial> {
    let mut v = k.to_vec();
    v.sort();
    v.dedup();
    v
}

// Depth-first walk over nonempty subsets, carrying the running lcm/gcd.
fn for_each_subset(
    k: &[Monomial],
    mut visit: impl FnMut(&Monomial, bool),
    combine: fn(&Monomial, &Monomial) -> Monomial,
) {
    fn rec(
        k: &[Monomial],
        start: usize,
        acc: &Monomial,
        size: usize,
        visit: &mut dyn FnMut(&Monomial, bool),
        combine: fn(&Monomial, &Monomial) -> Monomial,
    ) {
        for i in start..k.len() {
            let next = combine(acc, &k[i]);
            visit(&next, (size + 1) % 2 == 1);
            rec(k, i + 1, &next, size + 1, visit, combine);
        }
    }
    for i in 0..k.len() {
        visit(&k[i], true);
        rec(k, i + 1, &k[i], 1, &mut visit, combine);
    }
}

/// Direct scan of the box; the reference count for [`d_set`].
pub fn d_set_scan(bounds: &[usize], k: &[Monomial]) -> u64 {
    let n: usize = bounds.iter().product();
    (0..n)
        .map(|r| unrank(bounds, r))
        .filter(|nm| k.iter().any(|m| m.divides(nm)))
        .count() as u64
}

/// Direct scan of the box; the reference count for [`d_perp_set`].
pub fn d_perp_set_scan(bounds: &[usize], k: &[Monomial]) -> u64 {
    let n: usize = bounds.iter().product();
    (0..n)
        .map(|r| unrank(bounds, r))
        .filter(|nm| k.iter().any(|m| nm.divides(m)))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    // Position grid of the 6x6 deglex enumeration, top row Y^5 first, as drawn.
    const FIGURE_GRID: [[usize; 6]; 6] = [
        [21, 26, 30, 33, 35, 36],
        [15, 20, 25, 29, 32, 34],
        [10, 14, 19, 24, 28, 31],
        [6, 9, 13, 18, 23, 27],
        [3, 5, 8, 12, 17, 22],
        [1, 2, 4, 7, 11, 16],
    ];

    #[test]
    fn deglex_six_by_six_grid() {
        let ds = DeltaSet::new(&[6, 6], MonomialOrder::Deglex).unwrap();
        for (row, cells) in FIGURE_GRID.iter().enumerate() {
            let y = 5 - row as u32;
            for (x, &pos) in cells.iter().enumerate() {
                assert_eq!(ds.position(&mono(&[x as u32, y])), Some(pos));
                assert_eq!(ds.monomial(pos), &mono(&[x as u32, y]));
            }
        }
    }

    #[test]
    fn deglex_comparisons() {
        let o = MonomialOrder::Deglex;
        assert_eq!(o.compare(&mono(&[1, 0]), &mono(&[0, 1])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&mono(&[2, 1]), &mono(&[1, 2])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&mono(&[0, 0, 1]), &mono(&[3, 0, 0])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&mono(&[1]), &mono(&[1, 0])), Err(MonomialError::Arity(1, 2)));
    }

    #[test]
    fn weighted_order_tie_break() {
        let o = MonomialOrder::weighted(vec![1, 2]).unwrap();
        // 4 + 2 = 2 + 4, smaller Y exponent first
        assert_eq!(o.compare(&mono(&[4, 1]), &mono(&[2, 2])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&mono(&[6, 0]), &mono(&[4, 1])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&mono(&[0, 3]), &mono(&[2, 2])).unwrap(), Ordering::Greater);
        let ds = DeltaSet::new(&[8, 5], o).unwrap();
        assert!(ds.position(&mono(&[4, 1])).unwrap() < ds.position(&mono(&[2, 2])).unwrap());
        assert_eq!(MonomialOrder::weighted(vec![1, 0]), Err(MonomialError::BadWeights));
    }

    #[test]
    fn small_boxes() {
        let ds = DeltaSet::new(&[2], MonomialOrder::Deglex).unwrap();
        assert_eq!(ds.monomials(), &[mono(&[0]), mono(&[1])]);
    }

    #[test]
    fn footprint_values() {
        let b = [6, 6];
        assert_eq!(d_single(&b, &mono(&[4, 3])).unwrap(), 6);
        assert_eq!(d_single(&b, &mono(&[0, 0])).unwrap(), 36);
        assert_eq!(d_perp_single(&b, &mono(&[0, 0])).unwrap(), 1);
        assert_eq!(d_single(&[8, 5], &mono(&[2, 2])).unwrap(), 18);
        assert_eq!(d_perp_single(&[8, 5], &mono(&[2, 2])).unwrap(), 9);
        assert!(matches!(d_single(&b, &mono(&[6, 0])), Err(MonomialError::OutsideBox(..))));
    }

    #[test]
    fn footprint_sets() {
        let b = [6, 6];
        assert_eq!(d_set(&b, &[mono(&[3, 1]), mono(&[2, 2])]).unwrap(), 19);
        assert_eq!(d_set(&b, &[mono(&[3, 1]), mono(&[2, 2]), mono(&[1, 3])]).unwrap(), 22);
        assert_eq!(d_set(&b, &[mono(&[4, 3])]).unwrap(), 6);
        assert_eq!(d_set(&b, &[]), Err(MonomialError::EmptySet));
        assert_eq!(d_perp_set(&b, &[mono(&[3, 1]), mono(&[2, 2]), mono(&[1, 3])]).unwrap(), 13);
    }

    #[test]
    fn large_sets_use_scan() {
        let b = [6, 6];
        let k: Vec<Monomial> = (0..6).flat_map(|x| (0..4).map(move |y| mono(&[x, y]))).collect();
        assert!(k.len() > INCLUSION_EXCLUSION_LIMIT);
        assert_eq!(d_set(&b, &k).unwrap(), 36);
        assert_eq!(d_perp_set(&b, &k).unwrap(), 24);
    }

    #[test]
    fn singletons_and_monotonicity() {
        for bounds in [vec![6, 6], vec![8, 5], vec![3, 3, 3], vec![4, 2, 5], vec![10]] {
            let ds = DeltaSet::new(&bounds, MonomialOrder::Deglex).unwrap();
            for a in ds.monomials() {
                assert_eq!(ds.d(a).unwrap(), ds.d_set(std::slice::from_ref(a)).unwrap());
                assert_eq!(ds.d_perp(a).unwrap(), ds.d_perp_set(std::slice::from_ref(a)).unwrap());
                for b in ds.monomials() {
                    if a.divides(b) {
                        assert!(ds.d(a).unwrap() >= ds.d(b).unwrap());
                        assert!(ds.d_perp(a).unwrap() <= ds.d_perp(b).unwrap());
                    }
                }
            }
        }
    }

    fn box_and_sets() -> impl Strategy<Value = (Vec<usize>, Vec<Monomial>)> {
        prop_oneof![
            prop::collection::vec(1usize..=10, 2),
            prop::collection::vec(1usize..=4, 3),
        ]
        .prop_filter("n <= 100", |b| b.iter().product::<usize>() <= 100)
        .prop_flat_map(|bounds| {
            let n: usize = bounds.iter().product();
            let b2 = bounds.clone();
            prop::collection::vec(0..n, 1..=5)
                .prop_map(move |idx| (b2.clone(), idx.into_iter().map(|r| unrank(&b2, r)).collect()))
        })
    }

    proptest! {
        #[test]
        fn inclusion_exclusion_matches_scan((bounds, k) in box_and_sets()) {
            prop_assert_eq!(d_set(&bounds, &k).unwrap(), d_set_scan(&bounds, &k));
            prop_assert_eq!(d_perp_set(&bounds, &k).unwrap(), d_perp_set_scan(&bounds, &k));
        }

        #[test]
        fn enumeration_sorted_permutation(bounds in prop::collection::vec(1usize..=6, 1..=3),
                                          w in prop::collection::vec(1u32..=3, 3)) {
            let m = bounds.len();
            for order in [MonomialOrder::Deglex, MonomialOrder::weighted(w[..m].to_vec()).unwrap()] {
                let ds = DeltaSet::new(&bounds, order.clone()).unwrap();
                let n: usize = bounds.iter().product();
                prop_assert_eq!(ds.len(), n);
                for pair in ds.monomials().windows(2) {
                    prop_assert_eq!(order.compare(&pair[0], &pair[1]).unwrap(), Ordering::Less);
                }
                let mut seen: Vec<usize> = ds.monomials().iter().map(|m| rank(&bounds, m)).collect();
                seen.sort();
                prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
            }
        }
    }
}
