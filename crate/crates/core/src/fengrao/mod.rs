//! The Feng-Rao machinery over an evaluation basis, and footprint bounds on
//! relative generalized Hamming weights of nested evaluation code pairs.

mod bounds;
mod pair;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Fe, Field, PointSet, QuotientRing, RingError};
use crate::linalg::Matrix;
use crate::monomial::{DeltaSet, MonomialError, MonomialOrder};

pub use bounds::{
    min_union_subset, rghw_bound_dual, rghw_bound_dual_capped, rghw_bound_dual_v, rghw_bound_primary,
    rghw_bound_primary_capped, rghw_bound_primary_lambda, weight_profile, Bitset, SearchCap, MAX_SEARCH_V,
    MAX_SEARCH_WINDOW,
};
pub use pair::{BoundKind, CodePairSpec, WeightEntry, WeightProfile};

/// Largest length for which the exact Feng-Rao context is built.
pub const MAX_CONTEXT_N: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FengRaoError {
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("length {n} exceeds the exact-context cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("eta is undefined for the zero vector")]
    ZeroVector,
    #[error("index {index} outside 1..={n}")]
    Index { index: usize, n: usize },
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("v = {v} outside 1..={ell}")]
    VOutOfRange { v: usize, ell: usize },
    #[error("{monomial} is in L2 but not in L1")]
    NotNested { monomial: String },
    #[error("monomial {monomial} appears twice in {set}")]
    DuplicateMonomial { monomial: String, set: &'static str },
    #[error("codimension is zero")]
    ZeroCodimension,
    #[error("bound not computed: window {window}, v = {v} exceeds the search cap")]
    BoundNotComputed { window: usize, v: usize },
}

/// The ordered basis `b_i = ev(N_i)` of `F_q^n` and the products `b_i * b_j`.
#[derive(Debug)]
pub struct BasisContext {
    ring: QuotientRing,
    delta: DeltaSet,
    basis: Matrix,
    inverse: OnceLock<Matrix>,
    products: OnceLock<Products>,
}

#[derive(Debug)]
struct Products {
    n: usize,
    // rho[i * n + j] = rho_bar(b_{i+1} * b_{j+1})
    rho: Vec<u32>,
    owb: Vec<bool>,
}

impl BasisContext {
    pub fn new(points: PointSet, order: MonomialOrder) -> Result<Self, FengRaoError> {
        let n = points.len();
        if n > MAX_CONTEXT_N {
            return Err(FengRaoError::TooLarge { n, cap: MAX_CONTEXT_N });
        }
        let delta = DeltaSet::new(&points.sizes(), order)?;
        let field = points.field().clone();
        let ring = QuotientRing::new(points);
        let rows = delta.monomials().iter().map(|m| ring.evaluate_monomial(m)).collect();
        let basis = Matrix::with_cols(field, n, rows).expect("evaluation rows have length n");
        Ok(BasisContext { ring, delta, basis, inverse: OnceLock::new(), products: OnceLock::new() })
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn points(&self) -> &PointSet {
        self.ring.points()
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn delta(&self) -> &DeltaSet {
        &self.delta
    }

    pub fn order(&self) -> &MonomialOrder {
        self.delta.order()
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// `b_i`, 1-based.
    pub fn basis_vector(&self, i: usize) -> &[Fe] {
        self.basis.row(i - 1)
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn inverse(&self) -> &Matrix {
        self.inverse.get_or_init(|| self.basis.inverse().expect("evaluation basis is invertible"))
    }

    fn check_len(&self, c: &[Fe]) -> Result<(), FengRaoError> {
        if c.len() != self.len() {
            return Err(FengRaoError::Length { expected: self.len(), got: c.len() });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), FengRaoError> {
        if i == 0 || i > self.len() {
            return Err(FengRaoError::Index { index: i, n: self.len() });
        }
        Ok(())
    }

    /// Coordinates of `c` in the basis `b_1, ..., b_n`.
    pub fn coordinates(&self, c: &[Fe]) -> Result<Vec<Fe>, FengRaoError> {
        self.check_len(c)?;
        Ok(self.inverse().combine(c).expect("length checked"))
    }

    /// Index of the largest basis vector with nonzero coordinate; 0 for the zero vector.
    pub fn rho_bar(&self, c: &[Fe]) -> Result<usize, FengRaoError> {
        let coords = self.coordinates(c)?;
        Ok(coords.iter().rposition(|x| !x.is_zero()).map_or(0, |p| p + 1))
    }

    /// Smallest `l` with `c . b_l != 0`.
    pub fn eta(&self, c: &[Fe]) -> Result<usize, FengRaoError> {
        self.check_len(c)?;
        let f = self.field();
        (1..=self.len())
            .find(|&l| {
                let dot = c.iter().zip(self.basis_vector(l)).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                !dot.is_zero()
            })
            .ok_or(FengRaoError::ZeroVector)
    }

    fn products(&self) -> &Products {
        self.products.get_or_init(|| {
            let n = self.len();
            let monos = self.delta.monomials();
            let order = self.delta.order();
            let rho: Vec<u32> = (0..n * n)
                .into_par_iter()
                .map(|k| {
                    let prod = self.ring.monomial_product(&monos[k / n], &monos[k % n]);
                    prod.leading_monomial(order)
                        .map_or(0, |m| self.delta.position(m).expect("reduced monomial in box") as u32)
                })
                .collect();
            let mut owb = vec![false; n * n];
            for j in 0..n {
                let mut best = 0;
                for i in 0..n {
                    let r = rho[i * n + j];
                    owb[i * n + j] = i == 0 || r > best;
                    best = best.max(r);
                }
            }
            Products { n, rho, owb }
        })
    }

    /// `rho_bar(b_i * b_j)` computed in the ring.
    pub fn product_rho(&self, i: usize, j: usize) -> Result<usize, FengRaoError> {
        self.check_index(i)?;
        self.check_index(j)?;
        let p = self.products();
        Ok(p.rho[(i - 1) * p.n + (j - 1)] as usize)
    }

    /// Whether `(i, j)` is one-way well-behaving.
    pub fn owb(&self, i: usize, j: usize) -> Result<bool, FengRaoError> {
        self.check_index(i)?;
        self.check_index(j)?;
        let p = self.products();
        Ok(p.owb[(i - 1) * p.n + (j - 1)])
    }

    /// `Lambda_i = { rho_bar(b_i * b_j) : (i, j) OWB }`.
    pub fn lambda_set(&self, i: usize) -> Result<BTreeSet<usize>, FengRaoError> {
        self.check_index(i)?;
        let p = self.products();
        let row = (i - 1) * p.n;
        Ok((0..p.n).filter(|&j| p.owb[row + j]).map(|j| p.rho[row + j] as usize).collect())
    }

    /// `V_l = { i : rho_bar(b_i * b_j) = l for some j with (i, j) OWB }`.
    pub fn v_set(&self, l: usize) -> Result<BTreeSet<usize>, FengRaoError> {
        self.check_index(l)?;
        let p = self.products();
        Ok((0..p.n)
            .filter(|&i| (0..p.n).any(|j| p.owb[i * p.n + j] && p.rho[i * p.n + j] as usize == l))
            .map(|i| i + 1)
            .collect())
    }

    /// `# union Lambda_i` over the given indices.
    pub fn fr_support_bound_primary(&self, indices: &[usize]) -> Result<usize, FengRaoError> {
        if indices.is_empty() {
            return Err(FengRaoError::EmptyIndexSet);
        }
        let mut all = BTreeSet::new();
        for &i in indices {
            all.extend(self.lambda_set(i)?);
        }
        Ok(all.len())
    }

    /// `# union V_l` over the given indices.
    pub fn fr_support_bound_dual(&self, indices: &[usize]) -> Result<usize, FengRaoError> {
        if indices.is_empty() {
            return Err(FengRaoError::EmptyIndexSet);
        }
        let mut all = BTreeSet::new();
        for &l in indices {
            all.extend(self.v_set(l)?);
        }
        Ok(all.len())
    }
}
