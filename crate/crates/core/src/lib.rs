//! Nested evaluation codes over Cartesian product point sets.
//!
//! The crate builds pairs `C(L_2) < C(L_1)` of multivariate evaluation codes,
//! bounds their relative generalized Hamming weights through footprint counts,
//! checks those bounds against brute force, and turns the results into ramp
//! secret sharing and asymmetric quantum code parameters.

pub mod algebra;
pub mod apps;
pub mod codes;
pub mod construct;
pub mod fengrao;
pub mod linalg;
pub mod monomial;
pub mod tables;
