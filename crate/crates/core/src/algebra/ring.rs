//! The quotient ring `F_q[X_1, ..., X_m] / <F_1, ..., F_m>` with every element
//! kept reduced to support inside `Delta(s_1, ..., s_m)`, and the evaluation map.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use super::field::{Fe, Field};
use super::points::{PointSet, UniPoly};
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("monomial has {got} variables, ring has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("monomial {0} is not reduced")]
    NotReduced(Monomial),
    #[error("vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
}

/// Sparse polynomial; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Fe>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn term(m: Monomial, c: Fe) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The largest monomial in the support under `order`.
    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<&Monomial> {
        self.terms.keys().max_by(|a, b| order.cmp_unchecked(a, b))
    }

    fn add_term(&mut self, field: &Field, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

/// `R = F_q[X] / I` attached to a point set.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    points: PointSet,
    bounds: Vec<usize>,
    vanishing: Vec<UniPoly>,
    // pow[t][e] = coefficients of X_t^e mod F_t, for e < 2 s_t - 1
    pow: Vec<Vec<Vec<Fe>>>,
}

impl QuotientRing {
    pub fn new(points: PointSet) -> Self {
        let bounds = points.sizes();
        let vanishing = points.vanishing_polys();
        let field = points.field().clone();
        let pow = bounds
            .iter()
            .zip(&vanishing)
            .map(|(&s, f)| {
                let mut table = Vec::with_capacity(2 * s - 1);
                let mut cur = vec![Fe::ZERO; s];
                cur[0] = Fe::ONE;
                table.push(cur.clone());
                for _ in 1..2 * s - 1 {
                    cur = times_x_mod(&field, &cur, f);
                    table.push(cur.clone());
                }
                table
            })
            .collect();
        QuotientRing { points, bounds, vanishing, pow }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn field(&self) -> &Field {
        self.points.field()
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn vanishing_polys(&self) -> &[UniPoly] {
        &self.vanishing
    }

    pub fn one(&self) -> RingElement {
        RingElement::term(Monomial::one(self.bounds.len()), Fe::ONE)
    }

    /// A reduced element from arbitrary terms; exponents are reduced as needed.
    pub fn element(&self, terms: &[(Monomial, Fe)]) -> Result<RingElement, RingError> {
        let mut raw = RingElement::zero();
        for (m, c) in terms {
            if m.arity() != self.bounds.len() {
                return Err(RingError::Arity { expected: self.bounds.len(), got: m.arity() });
            }
            raw.add_term(self.field(), m.clone(), *c);
        }
        Ok(self.reduce(raw))
    }

    /// Rewrites `X_t^{s_t}` as `X_t^{s_t} - F_t(X_t)` until every exponent is below `s_t`.
    pub fn reduce(&self, mut a: RingElement) -> RingElement {
        let field = self.field();
        loop {
            let bad = a.terms.iter().find_map(|(m, &c)| {
                m.0.iter()
                    .zip(&self.bounds)
                    .position(|(&e, &s)| e as usize >= s)
                    .map(|t| (m.clone(), c, t))
            });
            let Some((m, c, t)) = bad else { return a };
            a.terms.remove(&m);
            let s = self.bounds[t] as u32;
            let f = &self.vanishing[t].0;
            // c X^m = c X^{m - s e_t} (X_t^s - F_t)
            for (k, &fk) in f.iter().enumerate().take(s as usize) {
                if fk.is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[t] = exps[t] - s + k as u32;
                a.add_term(field, Monomial(exps), field.neg(field.mul(c, fk)));
            }
        }
    }

    fn check(&self, a: &RingElement) -> Result<(), RingError> {
        for m in a.terms.keys() {
            if m.arity() != self.bounds.len() {
                return Err(RingError::Arity { expected: self.bounds.len(), got: m.arity() });
            }
            if !m.in_box(&self.bounds) {
                return Err(RingError::NotReduced(m.clone()));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = a.clone();
        for (m, c) in b.terms() {
            out.add_term(self.field(), m.clone(), c);
        }
        out
    }

    pub fn scale(&self, a: &RingElement, c: Fe) -> RingElement {
        let mut out = RingElement::zero();
        for (m, d) in a.terms() {
            out.add_term(self.field(), m.clone(), self.field().mul(c, d));
        }
        out
    }

    /// Reduced product of two reduced elements.
    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = RingElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let c = self.field().mul(ca, cb);
                self.accumulate_monomial_product(&mut out, ma, mb, c);
            }
        }
        Ok(out)
    }

    /// Reduced product of two box monomials.
    pub fn monomial_product(&self, a: &Monomial, b: &Monomial) -> RingElement {
        let mut out = RingElement::zero();
        self.accumulate_monomial_product(&mut out, a, b, Fe::ONE);
        out
    }

    fn accumulate_monomial_product(&self, out: &mut RingElement, a: &Monomial, b: &Monomial, c: Fe) {
        let field = self.field();
        // tensor product of the per-variable reduced powers
        let mut partial: Vec<(Vec<u32>, Fe)> = vec![(Vec::with_capacity(self.bounds.len()), c)];
        for t in 0..self.bounds.len() {
            let e = (a.0[t] + b.0[t]) as usize;
            let uni = &self.pow[t][e];
            let mut next = Vec::with_capacity(partial.len() * uni.len());
            for (exps, coef) in &partial {
                for (k, &u) in uni.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    let mut ex = exps.clone();
                    ex.push(k as u32);
                    next.push((ex, field.mul(*coef, u)));
                }
            }
            partial = next;
        }
        for (exps, coef) in partial {
            out.add_term(field, Monomial(exps), coef);
        }
    }

    /// `ev(a)` at the points in enumeration order.
    pub fn evaluate(&self, a: &RingElement) -> Result<Vec<Fe>, RingError> {
        self.check(a)?;
        let field = self.field();
        let axes = self.points.axes();
        // powers[t][k][e] = (S_t[k])^e
        let powers: Vec<Vec<Vec<Fe>>> = axes
            .iter()
            .zip(&self.bounds)
            .map(|(axis, &s)| {
                axis.iter().map(|&x| (0..s as u64).map(|e| field.pow(x, e)).collect()).collect()
            })
            .collect();
        let n = self.points.len();
        let mut out = Vec::with_capacity(n);
        for idx in 0..n {
            let pt = self.points.point_indices(idx);
            let mut acc = Fe::ZERO;
            for (m, c) in a.terms() {
                let mut v = c;
                for (t, &e) in m.0.iter().enumerate() {
                    v = field.mul(v, powers[t][pt[t]][e as usize]);
                }
                acc = field.add(acc, v);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Evaluation of a single box monomial.
    pub fn evaluate_monomial(&self, m: &Monomial) -> Vec<Fe> {
        let field = self.field();
        let axes = self.points.axes();
        (0..self.points.len())
            .map(|idx| {
                let pt = self.points.point_indices(idx);
                m.0.iter()
                    .enumerate()
                    .fold(Fe::ONE, |acc, (t, &e)| field.mul(acc, field.pow(axes[t][pt[t]], e as u64)))
            })
            .collect()
    }

    /// Compares leading monomials of two elements (zero is smallest).
    pub fn compare_leading(&self, order: &MonomialOrder, a: &RingElement, b: &RingElement) -> Ordering {
        match (a.leading_monomial(order), b.leading_monomial(order)) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => order.cmp_unchecked(x, y),
        }
    }
}

// (c_0 + ... + c_{s-1} X^{s-1}) * X mod monic f of degree s
fn times_x_mod(field: &Field, cur: &[Fe], f: &UniPoly) -> Vec<Fe> {
    let s = cur.len();
    let top = cur[s - 1];
    let mut next = vec![Fe::ZERO; s];
    for k in (1..s).rev() {
        next[k] = cur[k - 1];
    }
    if !top.is_zero() {
        // X^s = -(f_0 + ... + f_{s-1} X^{s-1})
        for k in 0..s {
            next[k] = field.sub(next[k], field.mul(top, f.0[k]));
        }
    }
    next
}
