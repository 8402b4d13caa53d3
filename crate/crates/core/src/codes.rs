//! Concrete codes, coset encoding and brute-force weight oracles.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Fe, Field, FieldSpec};
use crate::fengrao::{BasisContext, Bitset, CodePairSpec};
use crate::linalg::{LinalgError, Matrix};
use crate::monomial::Monomial;

/// Work limit for every exhaustive oracle.
pub const ORACLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodesError {
    #[error("monomial {0} is not in the box")]
    NotInBox(String),
    #[error("oracle budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("the code is the full space and has no parity checks")]
    FullSpace,
    #[error("the smaller code is not contained in the larger one")]
    NotNested,
    #[error("v = {v} outside 1..={max}")]
    VOutOfRange { v: usize, max: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("pair and context use different boxes or orders")]
    ContextMismatch,
    #[error("the code is zero")]
    ZeroCode,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
    parity: Option<Matrix>,
}

/// One share per participant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShareVector(pub Vec<Fe>);

#[derive(Debug, Serialize)]
struct MatrixJson<'a> {
    field: FieldSpec,
    nrows: usize,
    ncols: usize,
    rows: &'a [Vec<u32>],
}

/// CSV export is [`Matrix::to_csv`]; this adds the field description.
pub fn matrix_json(m: &Matrix) -> serde_json::Value {
    let rows = m.to_codes();
    serde_json::to_value(MatrixJson { field: m.field().spec(), nrows: m.nrows(), ncols: m.ncols(), rows: &rows })
        .expect("matrix serializes")
}

impl LinearCode {
    /// Rows must be linearly independent.
    pub fn from_generator(generator: Matrix) -> Result<Self, CodesError> {
        if generator.rank() != generator.nrows() {
            return Err(LinalgError::Dimension(generator.rank(), generator.nrows()).into());
        }
        Ok(LinearCode { generator, parity: None })
    }

    pub fn field(&self) -> &Arc<Field> {
        self.generator.field()
    }

    pub fn len(&self) -> usize {
        self.generator.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity(&self) -> Option<&Matrix> {
        self.parity.as_ref()
    }

    /// Computes and stores the parity-check matrix.
    pub fn with_parity(mut self) -> Result<Self, CodesError> {
        self.parity = Some(parity_matrix(&self)?);
        Ok(self)
    }

    pub fn contains(&self, c: &[Fe]) -> bool {
        c.len() == self.len() && self.generator.in_row_space(c)
    }

    /// Generated by a parity-check matrix of `self`.
    pub fn dual(&self) -> Result<LinearCode, CodesError> {
        if self.dim() == 0 {
            let f = self.field().clone();
            let n = self.len();
            let rows = (0..n).map(|i| (0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect()).collect();
            return Ok(LinearCode { generator: Matrix::with_cols(f, n, rows)?, parity: None });
        }
        let h = match &self.parity {
            Some(h) => h.clone(),
            None => self.generator.nullspace(),
        };
        Ok(LinearCode { generator: h, parity: Some(self.generator.clone()) })
    }
}

fn support(v: &[Fe]) -> Bitset {
    let mut b = Bitset::new(v.len());
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            b.insert(i);
        }
    }
    b
}

pub fn weight(v: &[Fe]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// `C(L)`, generator rows `ev(N)` for `N` in `L` sorted by the order.
pub fn build_code(ctx: &BasisContext, l: &[Monomial]) -> Result<LinearCode, CodesError> {
    let mut positions = l
        .iter()
        .map(|m| ctx.delta().position(m).ok_or_else(|| CodesError::NotInBox(m.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    positions.sort_unstable();
    positions.dedup();
    build_code_positions(ctx, &positions)
}

/// `C(L)` for 1-based positions in the ordered box.
pub fn build_code_positions(ctx: &BasisContext, positions: &[usize]) -> Result<LinearCode, CodesError> {
    let rows = positions.iter().map(|&p| ctx.basis_vector(p).to_vec()).collect();
    let generator = Matrix::with_cols(ctx.basis().field().clone(), ctx.len(), rows)?;
    Ok(LinearCode { generator, parity: None })
}

/// `(C(L_1), C(L_2))` for a pair built on the same box and order as `ctx`.
pub fn build_pair_codes(ctx: &BasisContext, pair: &CodePairSpec) -> Result<(LinearCode, LinearCode), CodesError> {
    if pair.delta() != ctx.delta() {
        return Err(CodesError::ContextMismatch);
    }
    Ok((build_code_positions(ctx, pair.l1_positions())?, build_code_positions(ctx, pair.l2_positions())?))
}

/// Basis of the null space of the generator.
pub fn parity_matrix(code: &LinearCode) -> Result<Matrix, CodesError> {
    if code.dim() == code.len() {
        return Err(CodesError::FullSpace);
    }
    Ok(code.generator.nullspace())
}

/// True iff every generator row of `c2` lies in the row space of `c1`.
pub fn verify_nesting(c2: &LinearCode, c1: &LinearCode) -> bool {
    c2.len() == c1.len() && c2.generator.rows().iter().all(|r| c1.generator.in_row_space(r))
}

/// `sum a_i b_i + sum s_v b_{k_2 + v}` with `b_1..b_{k_2}` spanning `C(L_2)` and the
/// remaining rows the evaluations of `L_1 \ L_2` in order.
pub fn encode_secret(
    ctx: &BasisContext,
    pair: &CodePairSpec,
    secret: &[Fe],
    randomness: &[Fe],
) -> Result<ShareVector, CodesError> {
    if pair.delta() != ctx.delta() {
        return Err(CodesError::ContextMismatch);
    }
    if secret.len() != pair.ell() {
        return Err(CodesError::Length { expected: pair.ell(), got: secret.len() });
    }
    if randomness.len() != pair.k2() {
        return Err(CodesError::Length { expected: pair.k2(), got: randomness.len() });
    }
    let f = ctx.field();
    let mut c = vec![Fe::ZERO; ctx.len()];
    let diff = pair.difference();
    for (&p, &a) in pair.l2_positions().iter().zip(randomness).chain(diff.iter().zip(secret)) {
        for (x, &b) in c.iter_mut().zip(ctx.basis_vector(p)) {
            *x = f.add(*x, f.mul(a, b));
        }
    }
    Ok(ShareVector(c))
}

fn checked_pow(q: u128, e: usize) -> u128 {
    let mut r: u128 = 1;
    for _ in 0..e {
        r = r.saturating_mul(q);
    }
    r
}

/// Number of `v`-dimensional subspaces of `F_q^k`.
pub fn gaussian_binomial(k: usize, v: usize, q: u64) -> u128 {
    if v > k {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den): (u128, u128) = (1, 1);
    for i in 0..v {
        num = num.saturating_mul(checked_pow(q, k - i).saturating_sub(1));
        den = den.saturating_mul(checked_pow(q, i + 1) - 1);
    }
    if num == u128::MAX {
        u128::MAX
    } else {
        num / den
    }
}

fn check_budget(needed: u128, budget: u128) -> Result<(), CodesError> {
    if needed > budget {
        return Err(CodesError::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn add_scaled(f: &Field, acc: &mut [Fe], a: Fe, row: &[Fe]) {
    if a.is_zero() {
        return;
    }
    for (x, &b) in acc.iter_mut().zip(row) {
        *x = f.add(*x, f.mul(a, b));
    }
}

/// Minimum weight over `{start + sum c_t rows_t}`, all coefficient tuples.
fn min_weight_affine(f: &Field, start: &[Fe], rows: &[&[Fe]]) -> usize {
    let q = f.order();
    let elems: Vec<Fe> = f.elements().collect();
    let mut digits = vec![0u32; rows.len()];
    let mut cur = start.to_vec();
    let mut best = weight(&cur);
    loop {
        // odometer step; digit t moves from d to d + 1 (or wraps to 0)
        let mut t = 0;
        loop {
            if t == rows.len() {
                return best;
            }
            let old = elems[digits[t] as usize];
            digits[t] = (digits[t] + 1) % q;
            let new = elems[digits[t] as usize];
            add_scaled(f, &mut cur, f.sub(new, old), rows[t]);
            if digits[t] != 0 {
                break;
            }
            t += 1;
        }
        best = best.min(weight(&cur));
        if best == 0 {
            return 0;
        }
    }
}

/// Minimum nonzero weight by enumeration of the message space.
pub fn exact_min_weight(code: &LinearCode) -> Result<usize, CodesError> {
    let k = code.dim();
    if k == 0 {
        return Err(CodesError::ZeroCode);
    }
    let f = code.field();
    check_budget(checked_pow(f.order() as u128, k), ORACLE_BUDGET)?;
    let rows: Vec<&[Fe]> = code.generator.rows().iter().map(Vec::as_slice).collect();
    // scale so the first nonzero coefficient is one
    let best = (0..k)
        .into_par_iter()
        .map(|lead| min_weight_affine(f, rows[lead], &rows[lead + 1..]))
        .min()
        .expect("k >= 1");
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RghwMethod {
    /// All `v`-dimensional subspaces meeting `C_2` trivially, via reduced echelon forms.
    Subspaces,
    /// Smallest support `J` with `dim C_1(J) - dim C_2(J) >= v`.
    SupportSubsets,
}

/// Rows of `c1` completing a basis of `c2` to one of `c1`.
fn complement(c1: &LinearCode, c2: &LinearCode) -> Vec<Vec<Fe>> {
    let mut acc = c2.generator.clone();
    let mut out = Vec::new();
    for r in c1.generator.rows() {
        if !acc.in_row_space(r) {
            acc = acc.stack(&Matrix::with_cols(c1.field().clone(), c1.len(), vec![r.clone()]).expect("row length"))
                .expect("same width");
            out.push(r.clone());
        }
    }
    out
}

/// `M_v(C_1, C_2)`: minimum support of a `v`-dimensional subspace of `C_1` meeting `C_2` trivially.
pub fn exact_rghw(c1: &LinearCode, c2: &LinearCode, v: usize) -> Result<usize, CodesError> {
    exact_rghw_with(c1, c2, v, RghwMethod::Subspaces)
}

pub fn exact_rghw_with(c1: &LinearCode, c2: &LinearCode, v: usize, method: RghwMethod) -> Result<usize, CodesError> {
    exact_rghw_budget(c1, c2, v, method, ORACLE_BUDGET)
}

/// As [`exact_rghw_with`] with a caller-chosen work limit, at most [`ORACLE_BUDGET`].
pub fn exact_rghw_budget(
    c1: &LinearCode,
    c2: &LinearCode,
    v: usize,
    method: RghwMethod,
    budget: u128,
) -> Result<usize, CodesError> {
    let budget = budget.min(ORACLE_BUDGET);
    if c1.len() != c2.len() {
        return Err(CodesError::Length { expected: c1.len(), got: c2.len() });
    }
    if !verify_nesting(c2, c1) {
        return Err(CodesError::NotNested);
    }
    let ell = c1.dim() - c2.dim();
    if v == 0 || v > ell {
        return Err(CodesError::VOutOfRange { v, max: ell });
    }
    match method {
        RghwMethod::Subspaces => rghw_subspaces(c1, c2, v, budget),
        RghwMethod::SupportSubsets => rghw_supports(c1, c2, v, budget),
    }
}

/// `(M_v(C_2^perp, C_1^perp))` through parity-derived generators.
pub fn exact_rghw_dual(c1: &LinearCode, c2: &LinearCode, v: usize, method: RghwMethod) -> Result<usize, CodesError> {
    exact_rghw_dual_budget(c1, c2, v, method, ORACLE_BUDGET)
}

pub fn exact_rghw_dual_budget(
    c1: &LinearCode,
    c2: &LinearCode,
    v: usize,
    method: RghwMethod,
    budget: u128,
) -> Result<usize, CodesError> {
    if !verify_nesting(c2, c1) {
        return Err(CodesError::NotNested);
    }
    exact_rghw_budget(&c2.dual()?, &c1.dual()?, v, method, budget)
}

// reduced echelon v x ell matrices, as lists of rows
fn echelon_forms(f: &Field, ell: usize, v: usize) -> Vec<Vec<Vec<Fe>>> {
    let elems: Vec<Fe> = f.elements().collect();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..v).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..v)
            .flat_map(|r| ((pivots[r] + 1)..ell).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut a = vec![vec![Fe::ZERO; ell]; v];
            for (r, &p) in pivots.iter().enumerate() {
                a[r][p] = Fe::ONE;
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                a[r][c] = elems[d];
            }
            out.push(a);
            let mut t = 0;
            while t < digits.len() {
                digits[t] += 1;
                if digits[t] < elems.len() {
                    break;
                }
                digits[t] = 0;
                t += 1;
            }
            if t == digits.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = v;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < ell - v + i {
                pivots[i] += 1;
                for j in i + 1..v {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn coset_supports(f: &Field, start: &[Fe], rows: &[&[Fe]]) -> Vec<Bitset> {
    let q = f.order();
    let elems: Vec<Fe> = f.elements().collect();
    let mut digits = vec![0u32; rows.len()];
    let mut cur = start.to_vec();
    let mut seen = HashSet::new();
    seen.insert(support(&cur));
    'outer: loop {
        let mut t = 0;
        loop {
            if t == rows.len() {
                break 'outer;
            }
            let old = elems[digits[t] as usize];
            digits[t] = (digits[t] + 1) % q;
            add_scaled(f, &mut cur, f.sub(elems[digits[t] as usize], old), rows[t]);
            if digits[t] != 0 {
                break;
            }
            t += 1;
        }
        seen.insert(support(&cur));
    }
    let mut all: Vec<Bitset> = seen.into_iter().collect();
    all.sort_by_key(Bitset::count);
    all
}

fn min_union_product(lists: &[Vec<Bitset>], depth: usize, acc: Option<Bitset>, best: &mut u64) {
    if depth == lists.len() {
        *best = (*best).min(acc.map_or(0, |a| a.count()));
        return;
    }
    for s in &lists[depth] {
        // lists are sorted by size
        if s.count() >= *best {
            break;
        }
        let next = match &acc {
            Some(a) => a.union(s),
            None => s.clone(),
        };
        if next.count() < *best {
            min_union_product(lists, depth + 1, Some(next), best);
        }
    }
}

// sorted by size, supersets of earlier entries dropped
fn minimal(sets: Vec<Bitset>) -> Vec<Bitset> {
    let mut kept: Vec<Bitset> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

fn rghw_subspaces(c1: &LinearCode, c2: &LinearCode, v: usize, budget: u128) -> Result<usize, CodesError> {
    let f = c1.field();
    let q = f.order() as u64;
    let w = complement(c1, c2);
    let ell = w.len();
    let k2 = c2.dim();
    check_budget(gaussian_binomial(ell, v, q).saturating_mul(checked_pow(q as u128, v * k2)), budget)?;
    let g2: Vec<&[Fe]> = c2.generator.rows().iter().map(Vec::as_slice).collect();
    let wm = Matrix::with_cols(f.clone(), c1.len(), w)?;
    // rows of reduced echelon forms are normalized, so every row is one of these points
    let points: Vec<Vec<Fe>> = echelon_forms(f, ell, 1).into_iter().map(|mut a| a.remove(0)).collect();
    let supports: Vec<Vec<Bitset>> = points
        .par_iter()
        .map(|row| {
            let all = coset_supports(f, &wm.combine(row).expect("ell entries"), &g2);
            if v == 1 {
                all.into_iter().take(1).collect()
            } else {
                minimal(all)
            }
        })
        .collect();
    if v == 1 {
        return Ok(supports.iter().map(|l| l[0].count()).min().expect("ell >= 1") as usize);
    }
    let index: HashMap<&[Fe], usize> = points.iter().enumerate().map(|(k, p)| (p.as_slice(), k)).collect();
    let best = echelon_forms(f, ell, v)
        .par_iter()
        .map(|a| {
            // each basis row ranges independently over its coset of C_2
            let lists: Vec<Vec<Bitset>> = a.iter().map(|row| supports[index[row.as_slice()]].clone()).collect();
            let mut best = u64::MAX;
            min_union_product(&lists, 0, None, &mut best);
            best
        })
        .min()
        .expect("at least one subspace");
    Ok(best as usize)
}

fn columns(m: &Matrix, cols: &[usize]) -> Matrix {
    let rows = m.rows().iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
    Matrix::with_cols(m.field().clone(), cols.len(), rows).expect("consistent widths")
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn rghw_supports(c1: &LinearCode, c2: &LinearCode, v: usize, budget: u128) -> Result<usize, CodesError> {
    let n = c1.len();
    let (k1, k2) = (c1.dim(), c2.dim());
    // each subset costs two ranks of matrices with at most k1 rows
    let per_subset = (k1 * k1).max(1) as u128;
    let mut spent: u128 = 0;
    for size in v..=n {
        spent = spent.saturating_add(binomial(n, size).saturating_mul(per_subset));
        check_budget(spent, budget)?;
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let outside: Vec<usize> = (0..n).filter(|i| comb.binary_search(i).is_err()).collect();
            let d1 = k1 - columns(&c1.generator, &outside).rank();
            let d2 = k2 - columns(&c2.generator, &outside).rank();
            if d1 - d2 >= v {
                return Ok(size);
            }
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if comb[i] < n - size + i {
                    comb[i] += 1;
                    for j in i + 1..size {
                        comb[j] = comb[j - 1] + 1;
                    }
                    i += 1;
                    break;
                }
            }
            if i == 0 {
                break;
            }
        }
    }
    unreachable!("the full support always works for v <= ell")
}
