use serde::{Deserialize, Serialize};

use super::ConstructError;
use crate::fengrao::{
    min_union_subset, rghw_bound_dual, rghw_bound_primary, Bitset, BoundKind, CodePairSpec, FengRaoError,
    WeightEntry, WeightProfile,
};
use crate::monomial::{rank, DeltaSet, Monomial, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWithProfile {
    pub pair: CodePairSpec,
    pub profile: WeightProfile,
}

/// `(s - i)(s - j + v - 1) - v(v - 1)/2`.
pub fn small_primary_closed_form(s: u64, i: u64, j: u64, v: u64) -> u64 {
    (s - i) * (s - j + v - 1) - v * (v - 1) / 2
}

/// `(i + v)(j + 1) - v(v - 1)/2`.
pub fn small_dual_closed_form(i: u64, j: u64, v: u64) -> u64 {
    (i + v) * (j + 1) - v * (v - 1) / 2
}

fn square_side(delta: &DeltaSet) -> Result<usize, ConstructError> {
    let b = delta.bounds();
    if b.iter().any(|&s| s != b[0]) {
        return Err(ConstructError::Domain(format!("box {b:?} is not a cube")));
    }
    if *delta.order() != MonomialOrder::Deglex {
        return Err(ConstructError::Domain("construction requires deglex".into()));
    }
    Ok(b[0])
}

// L1 = {N <= top}, L2 = {N < bottom}
fn interval_pair(delta: &DeltaSet, top: &Monomial, bottom: &Monomial) -> Result<CodePairSpec, ConstructError> {
    let t = delta.position(top).ok_or_else(|| ConstructError::Domain(format!("{top} outside the box")))?;
    let b = delta.position(bottom).ok_or_else(|| ConstructError::Domain(format!("{bottom} outside the box")))?;
    if b > t {
        return Err(ConstructError::Domain(format!("bottom {bottom} comes after top {top}")));
    }
    Ok(CodePairSpec::from_positions(delta.clone(), (1..=t).collect(), (1..b).collect())?)
}

fn entry(v: usize, value: Option<u64>, kind: BoundKind) -> WeightEntry {
    WeightEntry { v, value, kind }
}

/// Two-variable line-segment pair between `X^j Y^i` and `X^i Y^j`.
pub fn small_codim_pair(delta: &DeltaSet, i: usize, j: usize) -> Result<PairWithProfile, ConstructError> {
    let s = square_side(delta)?;
    if delta.arity() != 2 {
        return Err(ConstructError::Domain("two variables required".into()));
    }
    if i > j || j >= s {
        return Err(ConstructError::Domain(format!("need 0 <= i <= j < s, got i = {i}, j = {j}, s = {s}")));
    }
    let (i32_, j32) = (i as u32, j as u32);
    let pair = interval_pair(delta, &Monomial(vec![i32_, j32]), &Monomial(vec![j32, i32_]))?;
    let ell = pair.ell();
    debug_assert_eq!(ell, j - i + 1);
    let (s, i, j) = (s as u64, i as u64, j as u64);
    let profile = WeightProfile {
        n: pair.n(),
        primary: (1..=ell)
            .map(|v| entry(v, Some(small_primary_closed_form(s, i, j, v as u64)), BoundKind::Exact))
            .collect(),
        dual: (1..=ell)
            .map(|v| entry(v, Some(small_dual_closed_form(i, j, v as u64)), BoundKind::LowerBound))
            .collect(),
    };
    Ok(PairWithProfile { pair, profile })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `d_z` carries the large value.
    PrimaryLarge,
    /// `d_x` carries the large value.
    DualLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPair {
    pub inner: PairWithProfile,
    pub sigma: usize,
    pub orientation: Orientation,
    pub i: usize,
    pub j: usize,
    /// `min D` over `L_1`, the minimum distance of `C(L_1)`.
    pub d_c1: u64,
    /// Set when `ell <= sigma - 1`, where `d(C(L_1)) < M_1` is guaranteed.
    pub impure: bool,
}

/// Segment on the anti-diagonal `i + j = sigma` (or its mirror image).
pub fn sigma_family(
    delta: &DeltaSet,
    sigma: usize,
    ell: usize,
    orientation: Orientation,
) -> Result<SigmaPair, ConstructError> {
    let s = square_side(delta)?;
    if sigma >= s {
        return Err(ConstructError::Domain(format!("sigma = {sigma} must be below s = {s}")));
    }
    if ell == 0 || ell > sigma + 1 {
        return Err(ConstructError::Domain(format!("ell = {ell} outside 1..={}", sigma + 1)));
    }
    if ell.is_multiple_of(2) != (sigma % 2 == 1) {
        return Err(ConstructError::Parity { sigma, ell });
    }
    let (i0, j0) = ((sigma + 1 - ell) / 2, (sigma + ell - 1) / 2);
    let (i, j) = match orientation {
        Orientation::PrimaryLarge => (i0, j0),
        Orientation::DualLarge => (s - 1 - j0, s - 1 - i0),
    };
    let inner = small_codim_pair(delta, i, j)?;
    let d_c1 = inner.pair.min_d_l1();
    Ok(SigmaPair { inner, sigma, orientation, i, j, d_c1, impure: ell < sigma })
}

/// Pair between `X_1^{i_2} X_2^{i_1} X_3^{i_3}...` and `X_1^{i_1} X_2^{i_2} X_3^{i_3}...`.
pub fn higher_dim_small_pair(delta: &DeltaSet, exps: &[u32]) -> Result<PairWithProfile, ConstructError> {
    let s = square_side(delta)?;
    if exps.len() != delta.arity() || exps.len() < 2 {
        return Err(ConstructError::Domain(format!("expected {} exponents", delta.arity())));
    }
    if exps.iter().any(|&e| e as usize >= s) || exps[0] > exps[1] {
        return Err(ConstructError::Domain(format!("need 0 <= i_t < {s} and i_1 <= i_2")));
    }
    let top = Monomial(exps.to_vec());
    let mut b = exps.to_vec();
    b.swap(0, 1);
    let bottom = Monomial(b);
    let pair = interval_pair(delta, &top, &bottom)?;
    let ell = pair.ell();
    let primary = (1..=ell)
        .map(|v| {
            let value = if v == 1 {
                Some(exps.iter().map(|&e| (s - e as usize) as u64).product())
            } else {
                rghw_bound_primary(&pair, v).ok()
            };
            entry(v, value, BoundKind::Exact)
        })
        .collect();
    let dual = (1..=ell)
        .map(|v| {
            let value = if v == 1 {
                Some(exps.iter().map(|&e| e as u64 + 1).product())
            } else {
                rghw_bound_dual(&pair, v).ok()
            };
            entry(v, value, BoundKind::LowerBound)
        })
        .collect();
    Ok(PairWithProfile { profile: WeightProfile { n: pair.n(), primary, dual }, pair })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleSegment {
    pub inner: PairWithProfile,
    /// Minimizing over `L_1 \ L_2` alone gives the same bounds as the full windows, for every `v`.
    pub segment_property: bool,
    pub restricted_primary: Vec<Option<u64>>,
    pub restricted_dual: Vec<Option<u64>>,
}

/// `L_1 = {N <= top}`, `L_2 = {N < bottom}` under the order of `delta`.
pub fn middle_segment_pair(delta: &DeltaSet, top: &Monomial, bottom: &Monomial) -> Result<MiddleSegment, ConstructError> {
    let pair = interval_pair(delta, top, bottom)?;
    let ell = pair.ell();
    let diff = pair.difference();
    let bounds = delta.bounds();
    let sets = |dual: bool| -> Vec<Bitset> {
        diff.iter()
            .map(|&p| {
                let m = delta.monomial(p);
                let mut b = Bitset::new(delta.len());
                for x in delta.monomials() {
                    if (!dual && m.divides(x)) || (dual && x.divides(m)) {
                        b.insert(rank(bounds, x));
                    }
                }
                b
            })
            .collect()
    };
    let (up, down) = (sets(false), sets(true));
    let restricted_primary: Vec<Option<u64>> = (1..=ell).map(|v| min_union_subset(&up, v)).collect();
    let restricted_dual: Vec<Option<u64>> = (1..=ell).map(|v| min_union_subset(&down, v)).collect();
    let primary: Vec<Option<u64>> = (1..=ell).map(|v| ok_or_none(rghw_bound_primary(&pair, v))).collect();
    let dual: Vec<Option<u64>> = (1..=ell).map(|v| ok_or_none(rghw_bound_dual(&pair, v))).collect();
    let segment_property = primary == restricted_primary && dual == restricted_dual;
    // the full-window values are always sound and are the ones reported
    let profile = WeightProfile {
        n: pair.n(),
        primary: primary.iter().enumerate().map(|(k, &x)| entry(k + 1, x, BoundKind::LowerBound)).collect(),
        dual: dual.iter().enumerate().map(|(k, &x)| entry(k + 1, x, BoundKind::LowerBound)).collect(),
    };
    Ok(MiddleSegment { inner: PairWithProfile { pair, profile }, segment_property, restricted_primary, restricted_dual })
}

fn ok_or_none(r: Result<u64, FengRaoError>) -> Option<u64> {
    r.ok()
}
