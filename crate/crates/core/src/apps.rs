//! Ramp secret sharing numbers, CSS quantum code parameters, the asymmetric
//! Gilbert-Varshamov check and the La Guardia comparator family.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{dimension_lower_bound, large_codim_pair, ConstructError, DimensionVariant};
use crate::fengrao::{weight_profile, BoundKind, CodePairSpec, WeightEntry, WeightProfile};
use crate::monomial::{DeltaSet, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppsError {
    #[error("{side} weight for v = {v} was not computed")]
    MissingValue { side: &'static str, v: usize },
    #[error("empty profile")]
    EmptyProfile,
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Privacy numbers `t_v` (lower bounds) and reconstruction numbers `r_v` (upper bounds).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SssProfile {
    pub n: usize,
    pub ell: usize,
    pub t: Vec<u64>,
    pub r: Vec<u64>,
    /// The `t` values are exact rather than lower bounds.
    pub t_exact: bool,
    /// The `r` values are exact rather than upper bounds.
    pub r_exact: bool,
}

fn values(entries: &[WeightEntry], side: &'static str) -> Result<Vec<u64>, AppsError> {
    entries.iter().map(|e| e.value.ok_or(AppsError::MissingValue { side, v: e.v })).collect()
}

fn all_exact(entries: &[WeightEntry]) -> bool {
    entries.iter().all(|e| e.kind == BoundKind::Exact)
}

/// `t_v = M_v(C_2^perp, C_1^perp) - 1`, `r_v = n - M_{ell - v + 1}(C_1, C_2) + 1`.
pub fn sss_profile(profile: &WeightProfile, n: usize) -> Result<SssProfile, AppsError> {
    let ell = profile.ell();
    if ell == 0 {
        return Err(AppsError::EmptyProfile);
    }
    let primary = values(&profile.primary, "primary")?;
    let dual = values(&profile.dual, "dual")?;
    let t = dual.iter().map(|m| m - 1).collect();
    let r = (1..=ell).map(|v| n as u64 - primary[ell - v] + 1).collect();
    Ok(SssProfile { n, ell, t, r, t_exact: all_exact(&profile.dual), r_exact: all_exact(&profile.primary) })
}

/// `[[n, ell, d_z/d_x]]_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AqcParams {
    pub q: u32,
    pub n: u64,
    pub ell: u64,
    pub dz: u64,
    pub dx: u64,
    pub dz_kind: BoundKind,
    pub dx_kind: BoundKind,
    /// `None` when purity is undecided.
    pub impure: Option<bool>,
}

impl AqcParams {
    pub fn bounds(q: u32, n: u64, ell: u64, dz: u64, dx: u64) -> Self {
        AqcParams { q, n, ell, dz, dx, dz_kind: BoundKind::LowerBound, dx_kind: BoundKind::LowerBound, impure: None }
    }

    pub fn key(&self) -> (u64, u64, u64, u64) {
        (self.n, self.ell, self.dz, self.dx)
    }

    /// `d_z + d_x <= n - ell + 2`; vacuous unless both distances are exact.
    pub fn singleton_ok(&self) -> bool {
        self.dz_kind != BoundKind::Exact || self.dx_kind != BoundKind::Exact || self.dz + self.dx <= self.n - self.ell + 2
    }
}

impl fmt::Display for AqcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}/{}]]_{}", self.n, self.ell, self.dz, self.dx, self.q)
    }
}

/// CSS parameters of the pair; the code is flagged impure when the plain
/// minimum-distance bound of `C_1` or `C_2^perp` is below the relative one.
pub fn css_params(pair: &CodePairSpec, profile: &WeightProfile, q: u32) -> Result<AqcParams, AppsError> {
    let (first_p, first_d) = match (profile.primary.first(), profile.dual.first()) {
        (Some(p), Some(d)) => (p, d),
        _ => return Err(AppsError::EmptyProfile),
    };
    let dz = first_p.value.ok_or(AppsError::MissingValue { side: "primary", v: 1 })?;
    let dx = first_d.value.ok_or(AppsError::MissingValue { side: "dual", v: 1 })?;
    let impure = pair.min_d_l1() < dz || pair.min_d_perp_outside_l2() < dx;
    Ok(AqcParams {
        q,
        n: pair.n() as u64,
        ell: pair.ell() as u64,
        dz,
        dx,
        dz_kind: first_p.kind,
        dx_kind: first_d.kind,
        impure: Some(impure),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GvOutcome {
    /// Expression above one: the parameters lie beyond what the bound guarantees.
    StrictlyExceeds,
    Meets,
    /// Expression below one: the bound already guarantees such a code.
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GvReport {
    pub q: u64,
    pub n: u64,
    pub ell: u64,
    pub dz: u64,
    pub dx: u64,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    pub approx: f64,
    pub outcome: GvOutcome,
    pub expression_below_one: bool,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn pow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

fn check_gv(q: u64, n: u64, ell: u64, dz: u64, dx: u64) -> Result<(), AppsError> {
    if q < 2 || n == 0 || ell == 0 || ell > n || dz == 0 || dx == 0 || dz > n || dx > n {
        return Err(AppsError::Domain(format!("need q >= 2, 1 <= ell <= n and 1 <= dz, dx <= n; got q={q} n={n} ell={ell} dz={dz} dx={dx}")));
    }
    Ok(())
}

/// The expression of the asymmetric Gilbert-Varshamov bound, factor by factor.
pub fn gv_expression(q: u64, n: u64, ell: u64, dz: u64, dx: u64) -> Result<BigRational, AppsError> {
    check_gv(q, n, ell, dz, dx)?;
    let one = BigRational::one();
    let inv = |e: u64| BigRational::new(BigInt::one(), pow(q, e));
    let sum = |d: u64| {
        // C(n, i) built multiplicatively in increasing i
        let mut binom = BigInt::one();
        let mut total = BigInt::zero();
        for i in 1..d {
            binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
            total += &binom * pow(q - 1, i);
        }
        BigRational::from_integer(total)
    };
    let ratio = (&one - inv(2 * ell)) / (&one - inv(2 * n));
    Ok(ratio * inv(n - ell) * sum(dx) * sum(dz))
}

/// Same value through a second path: one fraction `(q^{2 ell} - 1) q^{n - ell} S_x S_z / (q^{2n} - 1)`
/// with each sum accumulated from its largest term down, binomials from Pascal's rule.
pub fn gv_expression_reversed(q: u64, n: u64, ell: u64, dz: u64, dx: u64) -> Result<BigRational, AppsError> {
    check_gv(q, n, ell, dz, dx)?;
    let top = dz.max(dx) as usize;
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for k in 1..row.len().min(top + 1) {
            next[k] = &row[k - 1] + &row[k];
        }
        next.truncate(top + 1);
        row = next;
    }
    let sum = |d: u64| (1..d).rev().fold(BigInt::zero(), |acc, i| acc + &row[i as usize] * pow(q - 1, i));
    let num = (pow(q, 2 * ell) - 1) * pow(q, n - ell) * sum(dx) * sum(dz);
    Ok(BigRational::new(num, pow(q, 2 * n) - 1))
}

pub fn gv_exceeds(q: u64, n: u64, ell: u64, dz: u64, dx: u64) -> Result<GvReport, AppsError> {
    let value = gv_expression(q, n, ell, dz, dx)?;
    let one = BigRational::one();
    let outcome = match value.cmp(&one) {
        std::cmp::Ordering::Greater => GvOutcome::StrictlyExceeds,
        std::cmp::Ordering::Equal => GvOutcome::Meets,
        std::cmp::Ordering::Less => GvOutcome::Below,
    };
    let approx = value.to_f64().unwrap_or(f64::INFINITY);
    let expression_below_one = value < one;
    Ok(GvReport { q, n, ell, dz, dx, value, approx, outcome, expression_below_one })
}

/// Parameters of the quantum generalized Reed-Solomon comparator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaGuardiaParams {
    pub q: u32,
    pub m1: u64,
    pub m2: u64,
    pub k: u64,
    pub c: u64,
    pub d: u64,
}

impl LaGuardiaParams {
    pub fn is_valid(&self) -> bool {
        let cap = (self.q as u128).checked_pow(self.m1 as u32).unwrap_or(u128::MAX);
        self.m1 >= 1
            && self.c >= 1
            && 1 < self.k
            && self.k < self.m2
            && self.m2 < 2 * self.k + self.c
            && ((2 * self.k + self.c) as u128) <= cap
            && self.k + self.d == self.m2 + 1
            && self.m2 > self.c + 1
            && self.d > self.c + 1
    }

    /// `[[m1 m2, m1(2k - m2 + c), d/(d - c)]]_q`.
    pub fn params(&self) -> AqcParams {
        AqcParams::bounds(self.q, self.m1 * self.m2, self.m1 * (2 * self.k + self.c - self.m2), self.d, self.d - self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaGuardiaCode {
    pub source: LaGuardiaParams,
    /// Reported at the target length; zeros are appended when `padded`.
    pub params: AqcParams,
    pub padded: bool,
}

fn laguardia_at(q: u32, len: u64, target: u64, out: &mut BTreeMap<(u64, u64, u64, u64), LaGuardiaCode>) {
    for m1 in (1..=len).filter(|m| len.is_multiple_of(*m)) {
        let m2 = len / m1;
        for k in 2..m2 {
            let d = m2 - k + 1;
            for c in 1..d.saturating_sub(1) {
                let p = LaGuardiaParams { q, m1, m2, k, c, d };
                if !p.is_valid() {
                    continue;
                }
                let mut params = p.params();
                params.n = target;
                out.entry(params.key()).or_insert(LaGuardiaCode { source: p, params, padded: len < target });
            }
        }
    }
}

/// All distinct parameters of the family at length exactly `n`.
pub fn laguardia_enumerate(q: u32, n: u64) -> Vec<LaGuardiaCode> {
    let mut out = BTreeMap::new();
    laguardia_at(q, n, n, &mut out);
    out.into_values().collect()
}

/// Lengths `from..=n`; shorter codes are padded with zero coordinates to length `n`.
pub fn laguardia_enumerate_padded(q: u32, n: u64, from: u64) -> Vec<LaGuardiaCode> {
    let mut out = BTreeMap::new();
    // exact length first so that unpadded sources win ties
    laguardia_at(q, n, n, &mut out);
    for len in (from..n).rev() {
        laguardia_at(q, len, n, &mut out);
    }
    out.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SssSummary {
    pub n: u64,
    pub ell: u64,
    /// `t_1 >= delta_perp - 1`.
    pub t1_lower: u64,
    /// `r_ell <= n - delta + 1`.
    pub r_ell_upper: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeParams {
    pub sss: SssSummary,
    pub aqc: AqcParams,
    /// Analytic lower bound on `ell`; only for cubes.
    pub ell_bound: Option<f64>,
}

fn best_bound(s: u64, m: u32, tau: u64) -> Result<f64, AppsError> {
    let general = dimension_lower_bound(s, m, tau, DimensionVariant::General)?;
    if tau < s {
        return Ok(general.max(dimension_lower_bound(s, m, tau, DimensionVariant::SmallTau)?));
    }
    Ok(general)
}

/// The footprint-threshold pair on an arbitrary box, with `q` the field size.
pub fn large_params_on_box(q: u32, bounds: &[usize], delta: u64, delta_perp: u64) -> Result<(CodePairSpec, LargeParams), AppsError> {
    if bounds.iter().any(|&s| s as u64 > q as u64) {
        return Err(AppsError::Domain(format!("box {bounds:?} does not fit in F_{q}")));
    }
    let ds = DeltaSet::new(bounds, MonomialOrder::Deglex).map_err(ConstructError::from)?;
    let pair = large_codim_pair(&ds, delta, delta_perp)?;
    let n = pair.n() as u64;
    let ell = pair.ell() as u64;
    // purity of this family is left undecided
    let aqc = AqcParams::bounds(q, n, ell, delta, delta_perp);
    let sss = SssSummary { n, ell, t1_lower: delta_perp - 1, r_ell_upper: n - delta + 1 };
    let cube = bounds.iter().all(|&s| s == bounds[0]);
    let ell_bound = if cube && delta_perp >= 1 {
        let (s, m) = (bounds[0] as u64, bounds.len() as u32);
        Some(best_bound(s, m, delta)? + best_bound(s, m, delta_perp)? - n as f64)
    } else {
        None
    };
    Ok((pair, LargeParams { sss, aqc, ell_bound }))
}

/// The `s^m` cube version; `ell_bound` is always present.
pub fn combined_large_params(q: u32, s: usize, m: usize, delta: u64, delta_perp: u64) -> Result<LargeParams, AppsError> {
    Ok(large_params_on_box(q, &vec![s; m], delta, delta_perp)?.1)
}

/// Profile of the large pair from the footprint search, for the table emitters.
pub fn large_profile(pair: &CodePairSpec) -> WeightProfile {
    weight_profile(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{sigma_family, small_codim_pair, Orientation};

    fn ds(s: usize) -> DeltaSet {
        DeltaSet::new(&[s, s], MonomialOrder::Deglex).unwrap()
    }

    #[test]
    fn sss_from_small_pairs() {
        let p = small_codim_pair(&ds(6), 1, 4).unwrap();
        let s = sss_profile(&p.profile, 36).unwrap();
        assert_eq!(s.t, vec![9, 13, 16, 18]);
        assert_eq!(s.r, vec![18, 20, 23, 27]);
        assert!(!s.t_exact && s.r_exact);
        let p = small_codim_pair(&ds(6), 2, 2).unwrap();
        let s = sss_profile(&p.profile, 36).unwrap();
        assert_eq!((s.t[0], s.r[0]), (8, 21));
    }

    #[test]
    fn sss_last_reconstruction_matches_dz() {
        for (i, j) in [(1, 3), (0, 5), (2, 4)] {
            let p = small_codim_pair(&ds(7), i, j).unwrap();
            let s = sss_profile(&p.profile, 49).unwrap();
            let a = css_params(&p.pair, &p.profile, 7).unwrap();
            assert_eq!(s.r[s.ell - 1], 49 - a.dz + 1);
            assert_eq!(s.t[0], a.dx - 1);
            assert!(s.t.windows(2).all(|w| w[0] < w[1]));
            assert!(s.r.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn css_examples() {
        let p = small_codim_pair(&ds(7), 1, 3).unwrap();
        let a = css_params(&p.pair, &p.profile, 7).unwrap();
        assert_eq!(a.to_string(), "[[49,3,24/8]]_7");
        assert_eq!(a.impure, Some(true));
        let x = sigma_family(&ds(8), 0, 1, Orientation::PrimaryLarge).unwrap();
        let a = css_params(&x.inner.pair, &x.inner.profile, 8).unwrap();
        assert_eq!(a.key(), (64, 1, 64, 1));
        let missing = WeightProfile { n: 4, primary: vec![], dual: vec![] };
        assert_eq!(css_params(&p.pair, &missing, 7), Err(AppsError::EmptyProfile));
    }

    #[test]
    fn large_examples() {
        let r = combined_large_params(7, 6, 2, 12, 6).unwrap();
        assert_eq!(r.aqc.key(), (36, 7, 12, 6));
        let b = r.ell_bound.unwrap();
        let formula = 36.0 - (12.0 + 12.0 * 3f64.ln()) - (6.0 + 6.0 * 6f64.ln());
        assert!((b - formula).abs() < 1e-9 && b <= 7.0);
        assert_eq!((r.sss.t1_lower, r.sss.r_ell_upper), (5, 25));
        let r = combined_large_params(7, 6, 2, 36, 1).unwrap();
        assert_eq!(r.aqc.ell, 1);
        assert!(r.ell_bound.unwrap() <= 1.0);
        let r = combined_large_params(8, 8, 2, 30, 4).unwrap();
        assert_eq!(r.aqc.to_string(), "[[64,12,30/4]]_8");
        assert!(combined_large_params(7, 6, 2, 12, 7).is_err());
        assert!(combined_large_params(5, 6, 2, 12, 6).is_err());
    }

    #[test]
    fn gv_paths_agree() {
        for &(q, n, ell, dz, dx) in &[(7, 49, 10, 14, 7), (7, 49, 3, 24, 8), (8, 64, 12, 30, 4), (2, 5, 1, 3, 2), (3, 9, 2, 1, 1)] {
            assert_eq!(gv_expression(q, n, ell, dz, dx).unwrap(), gv_expression_reversed(q, n, ell, dz, dx).unwrap());
        }
        let r = gv_exceeds(7, 49, 5, 1, 1).unwrap();
        assert!(r.value.is_zero() && r.expression_below_one);
        assert_eq!(r.outcome, GvOutcome::Below);
        assert!(gv_exceeds(7, 49, 0, 1, 1).is_err());
        assert!(gv_exceeds(7, 49, 1, 50, 1).is_err());
    }

    #[test]
    fn laguardia_family() {
        let all = laguardia_enumerate(7, 49);
        assert_eq!(all.len(), 6);
        let keys: Vec<_> = laguardia_enumerate(8, 64).iter().map(|c| c.params.key()).collect();
        assert!(keys.contains(&(64, 6, 25, 6)));
        assert_eq!(keys.iter().map(|k| k.2).max(), Some(31));
        let padded = laguardia_enumerate_padded(7, 49, 48);
        let hit = padded.iter().find(|c| c.params.key() == (49, 10, 14, 7)).unwrap();
        assert!(hit.padded && hit.source.m1 * hit.source.m2 == 48);
        assert!(padded.iter().all(|c| c.source.is_valid()));
    }
}
