use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use super::arith::{is_prime, prime_factors};
use super::binom::LucasTable;
use super::poly;
use crate::error::{Error, Result};

/// Default ceiling on `q` for [`FieldSpec::new`].
pub const FIELD_LIMIT: u64 = 1 << 16;
/// Hard ceiling on `q`, even with `force`.
pub const FORCED_FIELD_LIMIT: u64 = 1 << 20;

const NO_ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, Default)]
pub struct FieldOptions {
    /// Monic modulus as little-endian coefficients `[c0, c1, ..., 1]`.
    pub modulus: Option<Vec<u64>>,
    /// Allow `q` above [`FIELD_LIMIT`].
    pub force: bool,
}

/// The finite field `F_q`, `q = p^e`, presented as `F_p[t]/(m(t))`.
///
/// Elements are identified by their enumeration index `sum c_i p^i`, where
/// `c_i` is the coefficient of `t^i`. Enumeration order is numeric order of
/// that index, so `0, 1, ..., p-1` come first.
///
/// For odd `p` construction also fixes the smallest non-square `nu`, which
/// presents `F_{q^2}` as `F_q[u]/(u^2 - nu)` (see [`QuadElement`](super::QuadElement)).
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    nu: Option<u32>,
    // exp has length 2(q-1) so log sums never need reducing
    exp: Vec<u32>,
    log: Vec<u32>,
    sqrt: Vec<u32>,
    lucas: LucasTable,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("nu", &self.nu)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_options(p, e, FieldOptions::default())
    }

    pub fn with_options(p: u64, e: u32, opts: FieldOptions) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let limit = if opts.force {
            FORCED_FIELD_LIMIT
        } else {
            FIELD_LIMIT
        };
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= limit)
            .ok_or(Error::FieldTooLarge {
                q: p.saturating_pow(e),
                limit,
            })?;

        let modulus = match opts.modulus {
            Some(m) => {
                validate_modulus(&m, p, e)?;
                m
            }
            None => lowest_irreducible(p, e),
        };

        let mut field = FieldSpec {
            p,
            e,
            q,
            modulus,
            nu: None,
            exp: Vec::new(),
            log: Vec::new(),
            sqrt: Vec::new(),
            lucas: LucasTable::new(p),
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .find(|&g| {
                let g_poly = self.decode(g as u32);
                factors
                    .iter()
                    .all(|&r| poly::pow_rem(&g_poly, order / r, &self.modulus, self.p) != [1])
            })
            .expect("multiplicative group is cyclic") as u32;

        let g_poly = self.decode(generator);
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let idx = self.encode(&cur);
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = poly::mul_rem(&cur, &g_poly, &self.modulus, self.p);
        }
        let first = exp.clone();
        exp.extend(first);
        self.exp = exp;
        self.log = log;

        if self.p != 2 {
            // non-squares are exactly the odd powers of a generator
            self.nu = (1..self.q as u32).find(|&i| self.log[i as usize] % 2 == 1);
        }

        let mut sqrt = vec![NO_ROOT; self.q as usize];
        for s in 0..self.q as u32 {
            let sq = self.mul_idx(s, s) as usize;
            if sqrt[sq] == NO_ROOT {
                sqrt[sq] = s;
            }
        }
        self.sqrt = sqrt;
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub(crate) fn lucas(&self) -> &LucasTable {
        &self.lucas
    }

    /// The non-square `nu` used for the quadratic extension (odd `p` only).
    pub fn quad_nonresidue(&self) -> Option<FieldElement<'_>> {
        self.nu.map(|idx| FieldElement { field: self, idx })
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            idx: 0,
        }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            idx: 1,
        }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement<'_> {
        let r = v.rem_euclid(self.p as i64) as u32;
        FieldElement {
            field: self,
            idx: r,
        }
    }

    pub fn from_index(&self, idx: u64) -> Option<FieldElement<'_>> {
        (idx < self.q).then_some(FieldElement {
            field: self,
            idx: idx as u32,
        })
    }

    /// Build an element from little-endian coefficients; missing trailing
    /// coefficients are zero.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement<'_>> {
        if coeffs.len() > self.e as usize {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.e
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidElement(format!(
                "coefficient {c} not below p = {}",
                self.p
            )));
        }
        Ok(FieldElement {
            field: self,
            idx: self.encode(coeffs),
        })
    }

    /// Parse the canonical rendering `c0.c1. ...` (see [`FieldElement`]'s `Display`).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement<'_>> {
        let coeffs = s
            .trim()
            .split('.')
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map(|v| v.rem_euclid(self.p as i64) as u64)
                    .map_err(|_| Error::InvalidElement(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(&coeffs)
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement<'_>> + '_ {
        (0..self.q as u32).map(move |idx| FieldElement { field: self, idx })
    }

    /// `1/2`, for odd `p`.
    pub fn half(&self) -> Option<FieldElement<'_>> {
        self.is_odd()
            .then(|| self.from_int(2).inv().expect("2 is a unit"))
    }

    /// `1/4`, for odd `p`.
    pub fn quarter(&self) -> Option<FieldElement<'_>> {
        self.is_odd()
            .then(|| self.from_int(4).inv().expect("4 is a unit"))
    }

    pub fn same_as(&self, other: &FieldSpec) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.modulus == other.modulus)
    }

    fn decode(&self, mut idx: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(idx as u64 % self.p);
            idx /= self.p as u32;
        }
        out
    }

    fn encode(&self, coeffs: &[u64]) -> u32 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    fn add_idx(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u32;
        if self.e == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_idx(&self, a: u32) -> u32 {
        let p = self.p as u32;
        if self.e == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    fn inv_idx(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = (self.q - 1) as u32;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    fn pow_idx(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.q - 1;
        let l = (self.log[a as usize] as u128 * (n % order) as u128) % order as u128;
        self.exp[l as usize]
    }
}

/// Picks the monic irreducible of degree `e` whose lower coefficients have the
/// smallest enumeration index.
fn lowest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = p.pow(e);
    (0..count)
        .map(|low| {
            let mut f: Vec<u64> = (0..e).map(|i| (low / p.pow(i)) % p).collect();
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn validate_modulus(m: &[u64], p: u64, e: u32) -> Result<()> {
    if m.len() != e as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients, got {}",
            e + 1,
            m.len()
        )));
    }
    if m.last() != Some(&1) {
        return Err(Error::InvalidModulus(
            "leading coefficient must be 1".into(),
        ));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus(format!(
            "coefficients must lie in [0, {})",
            p
        )));
    }
    if !poly::is_irreducible(m, p) {
        return Err(Error::ReducibleModulus(p));
    }
    Ok(())
}

/// An element of `F_q`, tied to the [`FieldSpec`] it came from.
///
/// Operators panic when the operands belong to different fields; use
/// [`arith`] for a checked variant.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FieldSpec,
    idx: u32,
}

impl<'f> FieldElement<'f> {
    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    /// Enumeration index of this element.
    pub fn index(&self) -> u64 {
        self.idx as u64
    }

    /// Little-endian coefficients over `F_p`, always `e` of them.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.decode(self.idx)
    }

    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }

    pub fn is_one(&self) -> bool {
        self.idx == 1
    }

    pub fn inv(&self) -> Option<Self> {
        self.field.inv_idx(self.idx).map(|idx| FieldElement {
            field: self.field,
            idx,
        })
    }

    /// `self^n` with `0^0 = 1`.
    pub fn pow(&self, n: u64) -> Self {
        FieldElement {
            field: self.field,
            idx: self.field.pow_idx(self.idx, n),
        }
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// The enumeration-smallest square root in `F_q`, if any.
    pub fn sqrt(&self) -> Option<Self> {
        let r = self.field.sqrt[self.idx as usize];
        (r != NO_ROOT).then_some(FieldElement {
            field: self.field,
            idx: r,
        })
    }

    pub fn is_square(&self) -> bool {
        self.field.sqrt[self.idx as usize] != NO_ROOT
    }

    /// If this element lies in the prime field, its residue in `[0, p)`.
    pub fn as_prime_residue(&self) -> Option<u64> {
        (self.index() < self.field.p).then_some(self.index())
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field.same_as(other.field),
            "elements belong to different fields"
        );
    }

    fn with(&self, idx: u32) -> Self {
        FieldElement {
            field: self.field,
            idx,
        }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.field.same_as(other.field)
    }
}

impl Eq for FieldElement<'_> {}

impl Hash for FieldElement<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.idx.hash(state);
    }
}

impl PartialOrd for FieldElement<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.idx.cmp(&other.idx)
    }
}

/// Canonical rendering: the `e` coefficients `c0.c1. ...`, e.g. `2` in a
/// prime field or `1.2` for `1 + 2t`.
impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.coeffs() {
            if !first {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FieldElement<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'f> Add for FieldElement<'f> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        self.with(self.field.add_idx(self.idx, rhs.idx))
    }
}

impl<'f> Sub for FieldElement<'f> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        self.with(self.field.add_idx(self.idx, self.field.neg_idx(rhs.idx)))
    }
}

impl<'f> Mul for FieldElement<'f> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        self.with(self.field.mul_idx(self.idx, rhs.idx))
    }
}

impl<'f> Div for FieldElement<'f> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self.check(&rhs);
        self * rhs.inv().expect("division by zero")
    }
}

impl<'f> Neg for FieldElement<'f> {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(self.field.neg_idx(self.idx))
    }
}

impl<'f> AddAssign for FieldElement<'f> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<'f> SubAssign for FieldElement<'f> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<'f> MulAssign for FieldElement<'f> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn arith<'f>(
    a: FieldElement<'f>,
    b: FieldElement<'f>,
    op: ArithOp,
) -> Result<FieldElement<'f>> {
    if !a.field.same_as(b.field) {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a * b.inv().ok_or(Error::DivisionByZero)?,
    })
}
