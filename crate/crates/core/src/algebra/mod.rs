//! Finite fields, Cartesian product point sets and the quotient ring they define.

pub mod field;
pub mod points;
pub mod ring;

pub use field::{builtin_modulus, is_prime, prime_power, Fe, Field, FieldError, FieldOp, FieldSpec};
pub use points::{AxisSpec, PointSet, PointSetConfig, PointSetError, UniPoly};
pub use ring::{QuotientRing, RingElement, RingError};
