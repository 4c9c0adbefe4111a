//! Exact arithmetic in `F_p`, `F_q = F_{p^e}` and `F_{q^2}`.

pub mod arith;
mod binom;
mod field;
mod poly;
mod quad;

pub use binom::{binom_mod_p, LucasTable};
pub use field::{
    arith, ArithOp, FieldElement, FieldOptions, FieldSpec, FIELD_LIMIT, FORCED_FIELD_LIMIT,
};
pub use quad::{solve_parameterization, sqrt_in_q2, QuadElement};

/// `sum_{u in F_q} u^k` (with `0^0 = 1`).
pub fn power_sum<'f>(field: &'f FieldSpec, k: u64) -> FieldElement<'f> {
    field.elements().fold(field.zero(), |acc, u| acc + u.pow(k))
}
