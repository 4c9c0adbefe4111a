//! Necessary conditions on `n` for `E_n(1, x)` to permute `F_q`.
//!
//! Each filter has a hypothesis on `(n, q, p)` and a conclusion. A filter is
//! *applicable* when its hypothesis holds and *passes* when the conclusion
//! does too; a permutation exponent passes every applicable filter.
//!
//! * `period6`: `E_n(1, 0) = 1` must differ from `E_n(1, 1)`, whose values are
//!   6-periodic. For odd `p` this forces `n ≢ 0, 1 (mod 6)`; for `p = 2`,
//!   `3 | n + 1`.
//! * `odd_index`: for `n = 2m + 1`, odd `p` and `p ∤ m + 1`, `m` must be odd
//!   with `gcd(m, q - 1) = 1`.
//! * `gcd_q2`: for `p > 3` and `n ≡ 1 (mod 4)`, `gcd(n + 1, q^2 - 1)` must be
//!   `6` when `3 | n + 1` and `2` otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dickson::eval_f;
use crate::error::{Error, Result};
use crate::ff::{arith::gcd, arith::prime_power, FieldElement, QuadElement};

/// `E_n(1, 1)`: 0 for `n ≡ 2, 5`, 1 for `n ≡ 0, 1`, -1 for `n ≡ 3, 4 (mod 6)`.
pub fn period6_value(n: u64) -> i8 {
    match n % 6 {
        0 | 1 => 1,
        2 | 5 => 0,
        _ => -1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Period6,
    OddIndex,
    GcdQ2,
}

impl Filter {
    pub const ALL: [Filter; 3] = [Filter::Period6, Filter::OddIndex, Filter::GcdQ2];

    pub fn name(self) -> &'static str {
        match self {
            Filter::Period6 => "period6",
            Filter::OddIndex => "odd_index",
            Filter::GcdQ2 => "gcd_q2",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FilterOutcome {
    pub applicable: bool,
    pub passed: bool,
}

impl FilterOutcome {
    fn not_applicable() -> Self {
        FilterOutcome {
            applicable: false,
            passed: false,
        }
    }

    fn applied(passed: bool) -> Self {
        FilterOutcome {
            applicable: true,
            passed,
        }
    }
}

/// Always applicable.
pub fn period6_filter(n: u64, p: u64) -> bool {
    if p == 2 {
        (n + 1).is_multiple_of(3)
    } else {
        !matches!(n % 6, 0 | 1)
    }
}

pub fn odd_index_filter(n: u64, q: u64, p: u64) -> FilterOutcome {
    if p == 2 || n.is_multiple_of(2) {
        return FilterOutcome::not_applicable();
    }
    let m = (n - 1) / 2;
    if (m + 1).is_multiple_of(p) {
        return FilterOutcome::not_applicable();
    }
    FilterOutcome::applied(m % 2 == 1 && gcd(m, q - 1) == 1)
}

pub fn gcd_q2_filter(n: u64, q: u64, p: u64) -> FilterOutcome {
    if p <= 3 || n % 4 != 1 {
        return FilterOutcome::not_applicable();
    }
    let g = gcd(n + 1, q * q - 1);
    let expected = if (n + 1).is_multiple_of(3) { 6 } else { 2 };
    FilterOutcome::applied(g == expected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub n: u64,
    pub period6: FilterOutcome,
    pub odd_index: FilterOutcome,
    pub gcd_q2: FilterOutcome,
}

impl FilterReport {
    pub fn outcome(&self, filter: Filter) -> FilterOutcome {
        match filter {
            Filter::Period6 => self.period6,
            Filter::OddIndex => self.odd_index,
            Filter::GcdQ2 => self.gcd_q2,
        }
    }

    pub fn applicable(&self) -> Vec<Filter> {
        Filter::ALL
            .into_iter()
            .filter(|&f| self.outcome(f).applicable)
            .collect()
    }

    pub fn passed(&self) -> Vec<Filter> {
        Filter::ALL
            .into_iter()
            .filter(|&f| {
                let o = self.outcome(f);
                o.applicable && o.passed
            })
            .collect()
    }

    /// Pass iff every applicable filter passed.
    pub fn overall(&self) -> bool {
        self.applicable() == self.passed()
    }
}

pub fn filter_report(n: u64, q: u64, p: u64) -> FilterReport {
    FilterReport {
        n,
        period6: FilterOutcome::applied(period6_filter(n, p)),
        odd_index: odd_index_filter(n, q, p),
        gcd_q2: gcd_q2_filter(n, q, p),
    }
}

/// Reports for `n = 1 ..= n_max`.
pub fn filter_candidates(q: u64, p: u64, n_max: u64) -> Vec<FilterReport> {
    (1..=n_max).map(|n| filter_report(n, q, p)).collect()
}

/// Checks `gcd(n+1, q-1) gcd(n+1, q+1) = 2 gcd(n+1, q^2-1)` for odd prime
/// powers `q` and `n ≡ 1 (mod 4)`.
pub fn gcd_product_identity(n: u64, q: u64) -> Result<bool> {
    if q.is_multiple_of(2) || prime_power(q).is_none() {
        return Err(Error::Hypothesis(format!(
            "q = {q} is not an odd prime power"
        )));
    }
    if n % 4 != 1 {
        return Err(Error::Hypothesis(format!("n = {n} is not 1 mod 4")));
    }
    let m = n + 1;
    Ok(gcd(m, q - 1) * gcd(m, q + 1) == 2 * gcd(m, q * q - 1))
}

/// For `theta ∉ {0, 1}` and `y = (theta + 1)/(theta - 1)`: checks that
/// `y^2 ∈ F_q` exactly when `theta^{q+1} = 1` or `theta^{q-1} = 1`.
pub fn cayley_square_criterion(theta: QuadElement<'_>) -> Result<bool> {
    let field = theta.field();
    let one = QuadElement::embed(field.one())?;
    if theta.is_zero() || theta == one {
        return Err(Error::Hypothesis("theta must not be 0 or 1".into()));
    }
    let q = field.order() as u128;
    let y = (theta + one).checked_div(&(theta - one))?;
    let lhs = (y * y).in_base_field();
    let rhs = theta.pow(q + 1) == one || theta.pow(q - 1) == one;
    Ok(lhs == rhs)
}

/// Checks `f_{2m+2}(x) = x^m f_{2m+2}(1/x)` at a nonzero `x`.
pub fn self_reciprocal_check(m: u64, x: FieldElement<'_>) -> Result<bool> {
    let inv = x
        .inv()
        .ok_or_else(|| Error::Hypothesis("x must be nonzero".into()))?;
    let deg = 2 * m + 2;
    Ok(eval_f(deg, x)? == x.pow(m) * eval_f(deg, inv)?)
}

/// `f_m(x)` over the integers.
pub fn f_exact(m: u64, x: i64) -> BigInt {
    if m == 0 {
        return BigInt::zero();
    }
    let x = BigInt::from(x);
    let mut binom = BigInt::one(); // C(m, k), advanced one k at a time
    let mut xj = BigInt::one();
    let mut total = BigInt::zero();
    for k in 0..m {
        binom = binom * (m - k) / (k + 1);
        let odd = k + 1;
        if odd % 2 == 1 {
            total += &binom * &xj;
            xj *= &x;
        }
    }
    total
}

/// `f_{2m+2}(-1)` over the integers; zero exactly when `m` is odd.
pub fn f_at_minus_one(m: u64) -> BigInt {
    f_exact(2 * m + 2, -1)
}
