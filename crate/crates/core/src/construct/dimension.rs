use serde::{Deserialize, Serialize};

use super::ConstructError;

/// Slack applied when an analytic bound is rounded to an integer guarantee.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionVariant {
    General,
    SmallTau,
}

fn factorial(t: u32) -> f64 {
    (1..=t).map(f64::from).product()
}

/// Lower bound on `#{M : D(M) >= tau}` (and on `n - #{M : D_perp(M) < tau}`) in an `s^m` box.
pub fn dimension_lower_bound(s: u64, m: u32, tau: u64, variant: DimensionVariant) -> Result<f64, ConstructError> {
    if s < 1 || m < 1 {
        return Err(ConstructError::Domain("need s >= 1 and m >= 1".into()));
    }
    let n = s.pow(m);
    if tau == 0 || tau > n {
        return Err(ConstructError::Domain(format!("tau = {tau} outside 1..={n}")));
    }
    let tau_f = tau as f64;
    let base = match variant {
        DimensionVariant::General => (n as f64 / tau_f).ln(),
        DimensionVariant::SmallTau => {
            if tau >= s {
                return Err(ConstructError::Domain(format!("small-tau bound needs tau < s, got tau = {tau}, s = {s}")));
            }
            f64::from(m - 1) * tau_f.ln()
        }
    };
    let sum: f64 = (1..=m).map(|t| tau_f * base.powi(t as i32 - 1) / factorial(t - 1)).sum();
    Ok(n as f64 - sum)
}

/// The smallest integer a real lower bound certifies, rounded in the safe direction.
pub fn guaranteed_count(bound: f64) -> u64 {
    (bound - SLACK).ceil().max(0.0) as u64
}

/// Closed form of the nested volume integral starting at level `i` with the
/// outer coordinates `x_1, ..., x_{i-1}` fixed.
pub fn appendix_closed_form(s: f64, m: u32, i: u32, tau: f64, prefix: &[f64]) -> Result<f64, ConstructError> {
    if m < 2 || i < 1 || i > m {
        return Err(ConstructError::Domain(format!("need m >= 2 and 1 <= i <= m, got m = {m}, i = {i}")));
    }
    if prefix.len() != (i - 1) as usize {
        return Err(ConstructError::Domain(format!("expected {} prefix values, got {}", i - 1, prefix.len())));
    }
    if tau <= 0.0 || prefix.iter().any(|&x| !(0.0..s).contains(&x)) {
        return Err(ConstructError::Domain("need tau > 0 and 0 <= x_t < s".into()));
    }
    let p: f64 = prefix.iter().map(|x| s - x).product();
    let top = s.powi((m - i + 1) as i32);
    let arg = p * top / tau;
    if arg <= 0.0 {
        return Err(ConstructError::NonPositiveLog);
    }
    // the level-i upper limit is s - tau / (s^{m-i} p); it must be non-negative
    if s - tau / (s.powi((m - i) as i32) * p) < -SLACK {
        return Err(ConstructError::Domain("integration region is empty".into()));
    }
    let l = arg.ln();
    let sum: f64 = (0..=m - i).map(|t| tau / p * l.powi(t as i32) / factorial(t)).sum();
    Ok(top - sum)
}
