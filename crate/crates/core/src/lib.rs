//! Reversed Dickson polynomials of the second kind over finite fields.
//!
//! `E_n(a, x) = sum_{i <= n/2} C(n-i, i) (-x)^i a^(n-2i)`. The crate evaluates
//! the family by several independent routes, decides whether `x -> E_n(1, x)`
//! permutes `F_q`, screens exponents with arithmetic necessary conditions and
//! computes the character sums `sum_a E_n(1, a)` for `1 <= n <= q^2 - 1`.

pub mod error;
pub mod ff;

pub use error::{Error, Result};
pub use ff::{FieldElement, FieldSpec, QuadElement};
pub mod dickson;
pub mod series;

pub use series::CoeffSeq;
pub mod cli;
pub mod filters;
pub mod pp;
pub mod sums;
pub mod verify;
