//! Cartesian product point sets `S_1 x ... x S_m` and their vanishing polynomials.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::{Fe, Field, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointSetError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("a point set needs at least one axis")]
    NoAxes,
    #[error("axis {axis} is empty")]
    EmptyAxis { axis: usize },
    #[error("axis {axis} lists element {code} twice")]
    Duplicate { axis: usize, code: u32 },
    #[error("axis {axis}: N - 1 = {n_minus_one} does not divide q - 1 = {q_minus_one}")]
    Divisibility { axis: usize, n_minus_one: u32, q_minus_one: u32 },
    #[error("axis {axis}: {size} elements requested but the field has only {q}")]
    TooManyElements { axis: usize, size: usize, q: u32 },
}

/// How to populate one axis of the point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxisSpec {
    /// All of `F_q` (roots of `X^q - X`).
    FullField,
    /// `F_q^*` (roots of `X^{q-1} - 1`).
    MultGroup,
    /// Roots of `X^{N-1} - 1`, the subgroup of order `N - 1`. Requires `N - 1 | q - 1`.
    RootsOfUnity {
        #[serde(rename = "N")]
        n: u32,
    },
    /// Roots of `X^N - X`: zero together with the subgroup of order `N - 1`.
    RootsWithZero {
        #[serde(rename = "N")]
        n: u32,
    },
    /// Explicit elements by integer encoding, kept in the given order.
    Explicit { elements: Vec<u32> },
}

/// JSON description of a field together with its axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetConfig {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub axes: Vec<AxisSpec>,
}

/// Dense univariate polynomial, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniPoly(pub Vec<Fe>);

impl UniPoly {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, field: &Field, x: Fe) -> Fe {
        self.0.iter().rev().fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: Arc<Field>,
    axes: Vec<Vec<Fe>>,
    n: usize,
}

fn subgroup(field: &Field, order: u32) -> Vec<Fe> {
    let g = field.pow(field.primitive_element(), ((field.order() - 1) / order) as u64);
    let mut out: Vec<Fe> = (0..order).map(|k| field.pow(g, k as u64)).collect();
    out.sort();
    out
}

impl PointSet {
    pub fn new(field: Arc<Field>, specs: &[AxisSpec]) -> Result<Self, PointSetError> {
        if specs.is_empty() {
            return Err(PointSetError::NoAxes);
        }
        let q = field.order();
        let mut axes = Vec::with_capacity(specs.len());
        for (axis, spec) in specs.iter().enumerate() {
            let elems = match spec {
                AxisSpec::FullField => field.elements().collect(),
                AxisSpec::MultGroup => field.elements().filter(|a| !a.is_zero()).collect(),
                AxisSpec::RootsOfUnity { n } | AxisSpec::RootsWithZero { n } => {
                    if *n < 2 || !(q - 1).is_multiple_of(n - 1) {
                        return Err(PointSetError::Divisibility {
                            axis,
                            n_minus_one: n.saturating_sub(1),
                            q_minus_one: q - 1,
                        });
                    }
                    let mut s = subgroup(&field, n - 1);
                    if matches!(spec, AxisSpec::RootsWithZero { .. }) {
                        s.insert(0, Fe::ZERO);
                    }
                    s
                }
                AxisSpec::Explicit { elements } => {
                    if elements.len() > q as usize {
                        return Err(PointSetError::TooManyElements { axis, size: elements.len(), q });
                    }
                    let mut seen = BTreeSet::new();
                    let mut out = Vec::with_capacity(elements.len());
                    for &code in elements {
                        let a = field.elem(code)?;
                        if !seen.insert(code) {
                            return Err(PointSetError::Duplicate { axis, code });
                        }
                        out.push(a);
                    }
                    out
                }
            };
            if elems.is_empty() {
                return Err(PointSetError::EmptyAxis { axis });
            }
            axes.push(elems);
        }
        let n = axes.iter().map(Vec::len).product();
        Ok(PointSet { field, axes, n })
    }

    pub fn from_config(cfg: &PointSetConfig) -> Result<Self, PointSetError> {
        let field = Arc::new(Field::from_spec(&cfg.field)?);
        Self::new(field, &cfg.axes)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn axes(&self) -> &[Vec<Fe>] {
        &self.axes
    }

    /// Number of variables `m`.
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of points `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Axis sizes `(s_1, ..., s_m)`.
    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    /// Point number `idx` (0-based) in row-major order, last axis fastest.
    pub fn point(&self, mut idx: usize) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.axes.len()];
        for (t, axis) in self.axes.iter().enumerate().rev() {
            out[t] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        out
    }

    /// Axis positions of point `idx`, in the same enumeration as [`Self::point`].
    pub fn point_indices(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (t, axis) in self.axes.iter().enumerate().rev() {
            out[t] = idx % axis.len();
            idx /= axis.len();
        }
        out
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Fe>> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// `F_t(X_t) = prod_{a in S_t} (X_t - a)` for every axis.
    pub fn vanishing_polys(&self) -> Vec<UniPoly> {
        let f = &self.field;
        self.axes
            .iter()
            .map(|axis| {
                let mut coeffs = vec![Fe::ONE];
                for &a in axis {
                    // multiply by (X - a)
                    let mut next = vec![Fe::ZERO; coeffs.len() + 1];
                    for (k, &c) in coeffs.iter().enumerate() {
                        next[k + 1] = f.add(next[k + 1], c);
                        next[k] = f.sub(next[k], f.mul(c, a));
                    }
                    coeffs = next;
                }
                UniPoly(coeffs)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Arc<Field> {
        Arc::new(Field::with_order(q).unwrap())
    }

    #[test]
    fn mult_group_square_over_f7() {
        let ps = PointSet::new(f(7), &[AxisSpec::MultGroup, AxisSpec::MultGroup]).unwrap();
        assert_eq!(ps.len(), 36);
        assert_eq!(ps.sizes(), vec![6, 6]);
        assert!(ps.points().all(|pt| pt.iter().all(|x| !x.is_zero())));
        // last axis fastest
        assert_eq!(ps.point(0), vec![Fe(1), Fe(1)]);
        assert_eq!(ps.point(1), vec![Fe(1), Fe(2)]);
        assert_eq!(ps.point(6), vec![Fe(2), Fe(1)]);
    }

    #[test]
    fn enumeration_is_a_bijection() {
        let ps = PointSet::new(f(5), &[AxisSpec::FullField, AxisSpec::Explicit { elements: vec![4, 1, 2] }])
            .unwrap();
        let all: BTreeSet<Vec<Fe>> = ps.points().collect();
        assert_eq!(all.len(), 15);
    }

    #[test]
    fn axis_errors() {
        let err = PointSet::new(f(7), &[AxisSpec::Explicit { elements: (0..8).collect() }]).unwrap_err();
        assert!(matches!(err, PointSetError::TooManyElements { size: 8, .. }));
        let err = PointSet::new(f(7), &[AxisSpec::Explicit { elements: vec![1, 2, 1] }]).unwrap_err();
        assert_eq!(err, PointSetError::Duplicate { axis: 0, code: 1 });
        let err = PointSet::new(f(7), &[AxisSpec::RootsOfUnity { n: 5 }]).unwrap_err();
        assert!(matches!(err, PointSetError::Divisibility { n_minus_one: 4, .. }));
        assert_eq!(PointSet::new(f(7), &[]).unwrap_err(), PointSetError::NoAxes);
    }

    #[test]
    fn roots_presets() {
        let ps = PointSet::new(f(7), &[AxisSpec::RootsOfUnity { n: 4 }, AxisSpec::RootsWithZero { n: 3 }])
            .unwrap();
        // cube roots of unity in F_7 are {1, 2, 4}; square roots plus zero {0, 1, 6}
        assert_eq!(ps.axes()[0], vec![Fe(1), Fe(2), Fe(4)]);
        assert_eq!(ps.axes()[1], vec![Fe(0), Fe(1), Fe(6)]);
    }

    #[test]
    fn vanishing_polynomials() {
        let field = f(7);
        let ps = PointSet::new(field.clone(), &[AxisSpec::MultGroup]).unwrap();
        // X^6 - 1
        let mut expect = vec![Fe::ZERO; 7];
        expect[0] = Fe(6);
        expect[6] = Fe(1);
        assert_eq!(ps.vanishing_polys()[0], UniPoly(expect));

        let ps = PointSet::new(f(3), &[AxisSpec::FullField]).unwrap();
        // X^3 - X
        assert_eq!(ps.vanishing_polys()[0], UniPoly(vec![Fe(0), Fe(2), Fe(0), Fe(1)]));

        let ps = PointSet::new(f(5), &[AxisSpec::Explicit { elements: vec![1, 2] }]).unwrap();
        // (X - 1)(X - 2) = X^2 - 3X + 2 = X^2 + 2X + 2 mod 5
        assert_eq!(ps.vanishing_polys()[0], UniPoly(vec![Fe(2), Fe(2), Fe(1)]));
    }

    #[test]
    fn vanishing_poly_roots_exactly_the_axis() {
        for q in [4, 5, 7, 9] {
            let field = f(q);
            let ps = PointSet::new(
                field.clone(),
                &[AxisSpec::MultGroup, AxisSpec::Explicit { elements: vec![0, 1, q - 1] }],
            )
            .unwrap();
            for (axis, poly) in ps.axes().iter().zip(ps.vanishing_polys()) {
                assert_eq!(poly.degree(), axis.len());
                for b in field.elements() {
                    assert_eq!(poly.eval(&field, b).is_zero(), axis.contains(&b));
                }
            }
        }
    }

    #[test]
    fn config_json() {
        let cfg: PointSetConfig =
            serde_json::from_str(r#"{"p":7,"e":1,"axes":[{"kind":"mult_group"},{"kind":"mult_group"}]}"#)
                .unwrap();
        let ps = PointSet::from_config(&cfg).unwrap();
        assert_eq!(ps.len(), 36);
        let cfg: PointSetConfig = serde_json::from_str(
            r#"{"p":3,"e":2,"modulus":[1,0,1],"axes":[{"kind":"explicit","elements":[3,4]},{"kind":"roots_of_unity","N":5}]}"#,
        )
        .unwrap();
        let ps = PointSet::from_config(&cfg).unwrap();
        assert_eq!(ps.sizes(), vec![2, 4]);
    }
}
