use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::FengRaoError;
use crate::monomial::{DeltaSet, Monomial, MonomialError};

/// `L_2 < L_1` inside the box, both stored as sorted 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePairSpec {
    delta: DeltaSet,
    l1: Vec<usize>,
    l2: Vec<usize>,
}

impl CodePairSpec {
    pub fn new(delta: DeltaSet, l1: &[Monomial], l2: &[Monomial]) -> Result<Self, FengRaoError> {
        let to_pos = |set: &[Monomial], name: &'static str| -> Result<Vec<usize>, FengRaoError> {
            let mut seen = BTreeSet::new();
            for m in set {
                if m.arity() != delta.arity() {
                    return Err(MonomialError::Arity(m.arity(), delta.arity()).into());
                }
                let p = delta
                    .position(m)
                    .ok_or_else(|| MonomialError::OutsideBox(m.clone(), delta.bounds().to_vec()))?;
                if !seen.insert(p) {
                    return Err(FengRaoError::DuplicateMonomial { monomial: m.to_string(), set: name });
                }
            }
            Ok(seen.into_iter().collect())
        };
        let p1 = to_pos(l1, "L1")?;
        let p2 = to_pos(l2, "L2")?;
        Self::from_positions(delta, p1, p2)
    }

    pub fn from_positions(delta: DeltaSet, mut l1: Vec<usize>, mut l2: Vec<usize>) -> Result<Self, FengRaoError> {
        let n = delta.len();
        for &p in l1.iter().chain(&l2) {
            if p == 0 || p > n {
                return Err(FengRaoError::Index { index: p, n });
            }
        }
        l1.sort_unstable();
        l1.dedup();
        l2.sort_unstable();
        l2.dedup();
        if let Some(&bad) = l2.iter().find(|p| l1.binary_search(p).is_err()) {
            return Err(FengRaoError::NotNested { monomial: delta.monomial(bad).to_string() });
        }
        if l1.len() == l2.len() {
            return Err(FengRaoError::ZeroCodimension);
        }
        Ok(CodePairSpec { delta, l1, l2 })
    }

    pub fn delta(&self) -> &DeltaSet {
        &self.delta
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    pub fn l1_positions(&self) -> &[usize] {
        &self.l1
    }

    pub fn l2_positions(&self) -> &[usize] {
        &self.l2
    }

    pub fn l1(&self) -> Vec<Monomial> {
        self.l1.iter().map(|&p| self.delta.monomial(p).clone()).collect()
    }

    pub fn l2(&self) -> Vec<Monomial> {
        self.l2.iter().map(|&p| self.delta.monomial(p).clone()).collect()
    }

    pub fn in_l1(&self, pos: usize) -> bool {
        self.l1.binary_search(&pos).is_ok()
    }

    pub fn in_l2(&self, pos: usize) -> bool {
        self.l2.binary_search(&pos).is_ok()
    }

    /// Positions of `L_1 \ L_2` in increasing order.
    pub fn difference(&self) -> Vec<usize> {
        self.l1.iter().copied().filter(|&p| !self.in_l2(p)).collect()
    }

    pub fn ell(&self) -> usize {
        self.l1.len() - self.l2.len()
    }

    pub fn k1(&self) -> usize {
        self.l1.len()
    }

    pub fn k2(&self) -> usize {
        self.l2.len()
    }

    /// Smallest position in `L_1 \ L_2`.
    pub fn u(&self) -> usize {
        self.difference()[0]
    }

    /// Largest position in `L_1`.
    pub fn u_perp(&self) -> usize {
        *self.l1.last().expect("L1 is nonempty")
    }

    /// `{N_u, ..., N_n} & L_1`.
    pub fn primary_window(&self) -> Vec<usize> {
        let u = self.u();
        self.l1.iter().copied().filter(|&p| p >= u).collect()
    }

    /// `{N_1, ..., N_{u_perp}} \ L_2`.
    pub fn dual_window(&self) -> Vec<usize> {
        (1..=self.u_perp()).filter(|&p| !self.in_l2(p)).collect()
    }

    /// `min D(M)` over `M` in `L_1`: the plain minimum-distance bound for `C(L_1)`.
    pub fn min_d_l1(&self) -> u64 {
        self.l1.iter().map(|&p| self.delta.d(self.delta.monomial(p)).expect("in box")).min().expect("nonempty")
    }

    /// `min D_perp(M)` over `M` outside `L_2`: the plain bound for `C(L_2)^perp`.
    pub fn min_d_perp_outside_l2(&self) -> u64 {
        (1..=self.n())
            .filter(|&p| !self.in_l2(p))
            .map(|p| self.delta.d_perp(self.delta.monomial(p)).expect("in box"))
            .min()
            .expect("L2 is a proper subset")
    }

    pub(crate) fn check_v(&self, v: usize) -> Result<(), FengRaoError> {
        if v == 0 || v > self.ell() {
            return Err(FengRaoError::VOutOfRange { v, ell: self.ell() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    LowerBound,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub v: usize,
    /// `None` when the search cap was hit.
    pub value: Option<u64>,
    pub kind: BoundKind,
}

/// `M_v(C_1, C_2)` and `M_v(C_2^perp, C_1^perp)` for `v = 1..ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub n: usize,
    pub primary: Vec<WeightEntry>,
    pub dual: Vec<WeightEntry>,
}

impl WeightProfile {
    pub fn ell(&self) -> usize {
        self.primary.len()
    }

    pub fn primary_values(&self) -> Vec<Option<u64>> {
        self.primary.iter().map(|e| e.value).collect()
    }

    pub fn dual_values(&self) -> Vec<Option<u64>> {
        self.dual.iter().map(|e| e.value).collect()
    }

    /// `M_1(C_1, C_2)`.
    pub fn dz(&self) -> Option<u64> {
        self.primary.first().and_then(|e| e.value)
    }

    /// `M_1(C_2^perp, C_1^perp)`.
    pub fn dx(&self) -> Option<u64> {
        self.dual.first().and_then(|e| e.value)
    }

    /// Computed entries increase strictly with `v` and stay within `1..=n`.
    pub fn is_consistent(&self) -> bool {
        let ok = |seq: &[WeightEntry]| {
            let vals: Vec<u64> = seq.iter().filter_map(|e| e.value).collect();
            vals.windows(2).all(|w| w[0] < w[1]) && vals.iter().all(|&x| x >= 1 && x as usize <= self.n)
        };
        self.primary.len() == self.dual.len() && ok(&self.primary) && ok(&self.dual)
    }

    /// Marks primary entries exact where `exact[v - 1]` matches the bound.
    pub fn upgrade_primary(&mut self, exact: &[u64]) {
        for (e, &x) in self.primary.iter_mut().zip(exact) {
            if e.value == Some(x) {
                e.kind = BoundKind::Exact;
            }
        }
    }

    pub fn upgrade_dual(&mut self, exact: &[u64]) {
        for (e, &x) in self.dual.iter_mut().zip(exact) {
            if e.value == Some(x) {
                e.kind = BoundKind::Exact;
            }
        }
    }
}
