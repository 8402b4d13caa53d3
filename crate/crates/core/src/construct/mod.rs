//! Code pair constructions: the footprint-threshold pair of large codimension,
//! line-segment pairs of small codimension, and the analytic dimension estimates.

mod dimension;
mod segment;

use thiserror::Error;

use crate::fengrao::{CodePairSpec, FengRaoError};
use crate::monomial::{d_perp_single_unchecked, d_single_unchecked, unrank, DeltaSet, Monomial, MonomialError};

pub use dimension::{appendix_closed_form, dimension_lower_bound, guaranteed_count, DimensionVariant, SLACK};
pub use segment::{
    higher_dim_small_pair, middle_segment_pair, sigma_family, small_codim_pair, small_primary_closed_form,
    small_dual_closed_form, MiddleSegment, Orientation, PairWithProfile, SigmaPair,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    FengRao(#[from] FengRaoError),
    #[error("infeasible: {monomial} lies in L2 but not in L1")]
    Infeasible { monomial: String },
    #[error("codimension is zero")]
    ZeroCodimension,
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("parity mismatch: ell = {ell} must be even exactly when sigma = {sigma} is odd")]
    Parity { sigma: usize, ell: usize },
    #[error("logarithm of a non-positive argument")]
    NonPositiveLog,
}

fn box_size(bounds: &[usize]) -> usize {
    bounds.iter().product()
}

/// `{M : D(M) >= delta}` in mixed-radix order.
pub fn improved_primary_set(bounds: &[usize], delta: u64) -> Vec<Monomial> {
    (0..box_size(bounds))
        .map(|r| unrank(bounds, r))
        .filter(|m| d_single_unchecked(bounds, m) >= delta)
        .collect()
}

/// `{M : D_perp(M) < delta_perp}` in mixed-radix order.
pub fn improved_dual_set(bounds: &[usize], delta_perp: u64) -> Vec<Monomial> {
    (0..box_size(bounds))
        .map(|r| unrank(bounds, r))
        .filter(|m| d_perp_single_unchecked(m) < delta_perp)
        .collect()
}

/// The pair `L_1 = {D >= delta}`, `L_2 = {D_perp < delta_perp}`, with inclusion checked directly.
pub fn large_codim_pair(delta_set: &DeltaSet, delta: u64, delta_perp: u64) -> Result<CodePairSpec, ConstructError> {
    let bounds = delta_set.bounds();
    let n = delta_set.len() as u64;
    if delta == 0 || delta > n {
        return Err(ConstructError::Domain(format!("delta = {delta} outside 1..={n}")));
    }
    if delta_perp == 0 || delta_perp > n + 1 {
        return Err(ConstructError::Domain(format!("delta_perp = {delta_perp} outside 1..={}", n + 1)));
    }
    let l1 = improved_primary_set(bounds, delta);
    let l2 = improved_dual_set(bounds, delta_perp);
    // the smallest violating monomial under the order is reported
    if let Some(bad) = l2
        .iter()
        .filter(|m| d_single_unchecked(bounds, m) < delta)
        .min_by_key(|m| delta_set.position(m))
    {
        return Err(ConstructError::Infeasible { monomial: bad.to_string() });
    }
    if l1.len() == l2.len() {
        return Err(ConstructError::ZeroCodimension);
    }
    Ok(CodePairSpec::new(delta_set.clone(), &l1, &l2)?)
}

/// Largest `delta_perp` the sufficient condition admits for `delta` in an `s^m` box.
pub fn feasibility_threshold(s: u64, m: u32, delta: u64) -> Result<u64, ConstructError> {
    if s < 1 || m < 1 {
        return Err(ConstructError::Domain("need s >= 1 and m >= 1".into()));
    }
    let n = s.pow(m);
    if delta == 0 || delta > n {
        return Err(ConstructError::Domain(format!("delta = {delta} outside 1..={n}")));
    }
    // largest v <= m - 1 with s^v <= delta; at delta = s^{v+1} both admissible v agree
    let mut v = 0;
    while v + 1 < m && s.pow(v + 1) <= delta {
        v += 1;
    }
    let sv = s.pow(v);
    let num = ((s + 1) * sv - delta) * s.pow(m - v - 1);
    Ok(num / sv)
}
