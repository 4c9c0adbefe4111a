//! The quadratic extension `F_{q^2} = F_q[u]/(u^2 - nu)` for odd `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// `c0 + c1*u` with `u^2 = nu`. The embedded copy of `F_q` is `c1 = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElement<'f> {
    pub c0: FieldElement<'f>,
    pub c1: FieldElement<'f>,
}

impl<'f> QuadElement<'f> {
    pub fn new(c0: FieldElement<'f>, c1: FieldElement<'f>) -> Result<Self> {
        if !c0.field().same_as(c1.field()) {
            return Err(Error::FieldMismatch);
        }
        if !c0.field().is_odd() {
            return Err(Error::CharacteristicTwo("the quadratic extension"));
        }
        Ok(QuadElement { c0, c1 })
    }

    pub fn embed(x: FieldElement<'f>) -> Result<Self> {
        Self::new(x, x.field().zero())
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.c0.field()
    }

    /// Enumeration index `idx(c0) + q * idx(c1)`.
    pub fn index(&self) -> u64 {
        self.c0.index() + self.field().order() * self.c1.index()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn in_base_field(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn to_base(&self) -> Option<FieldElement<'f>> {
        self.in_base_field().then_some(self.c0)
    }

    fn nu(&self) -> FieldElement<'f> {
        self.field()
            .quad_nonresidue()
            .expect("quadratic elements only exist in odd characteristic")
    }

    /// Norm to `F_q`: `c0^2 - nu c1^2`.
    pub fn norm(&self) -> FieldElement<'f> {
        self.c0.square() - self.nu() * self.c1.square()
    }

    pub fn conj(&self) -> Self {
        QuadElement {
            c0: self.c0,
            c1: -self.c1,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let n_inv = self.norm().inv()?;
        let c = self.conj();
        Some(QuadElement {
            c0: c.c0 * n_inv,
            c1: c.c1 * n_inv,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(*self * rhs.inv().ok_or(Error::DivisionByZero)?)
    }

    /// `self^n` by square-and-multiply, `0^0 = 1`.
    pub fn pow(&self, n: u128) -> Self {
        let one = Self::embed(self.field().one()).expect("odd characteristic");
        if n == 0 {
            return one;
        }
        if self.is_zero() {
            return *self;
        }
        let order = (self.field().order() as u128).pow(2) - 1;
        let mut exp = n % order;
        let mut base = *self;
        let mut acc = one;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    fn enum_min(self, other: Self) -> Self {
        if other.index() < self.index() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for QuadElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}u", self.c0, self.c1)
    }
}

impl fmt::Debug for QuadElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'f> Add for QuadElement<'f> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        QuadElement {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
        }
    }
}

impl<'f> Sub for QuadElement<'f> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        QuadElement {
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
        }
    }
}

impl<'f> Neg for QuadElement<'f> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadElement {
            c0: -self.c0,
            c1: -self.c1,
        }
    }
}

impl<'f> Mul for QuadElement<'f> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let nu = self.nu();
        QuadElement {
            c0: self.c0 * rhs.c0 + nu * self.c1 * rhs.c1,
            c1: self.c0 * rhs.c1 + self.c1 * rhs.c0,
        }
    }
}

impl<'f> Mul<FieldElement<'f>> for QuadElement<'f> {
    type Output = Self;
    fn mul(self, rhs: FieldElement<'f>) -> Self {
        QuadElement {
            c0: self.c0 * rhs,
            c1: self.c1 * rhs,
        }
    }
}

impl FieldSpec {
    /// All `q^2` elements of `F_{q^2}` in enumeration order (odd `p` only).
    pub fn quad_elements(&self) -> Result<impl Iterator<Item = QuadElement<'_>> + '_> {
        if !self.is_odd() {
            return Err(Error::CharacteristicTwo("the quadratic extension"));
        }
        let q = self.order();
        Ok((0..q * q).map(move |i| QuadElement {
            c0: self.from_index(i % q).expect("in range"),
            c1: self.from_index(i / q).expect("in range"),
        }))
    }
}

/// A square root of `a` in `F_{q^2}`, the enumeration-smaller of `±s`.
///
/// Elements of `F_q` are handled with the `F_q` root table (a non-square
/// `a` has root `sqrt(a/nu) * u`); general elements go through the norm.
pub fn sqrt_in_q2<'f>(a: QuadElement<'f>) -> Option<QuadElement<'f>> {
    let field = a.field();
    let zero = field.zero();
    let nu = a.nu();
    let root = if a.c1.is_zero() {
        match a.c0.sqrt() {
            Some(r) => QuadElement { c0: r, c1: zero },
            None => QuadElement {
                c0: zero,
                c1: (a.c0 / nu).sqrt()?,
            },
        }
    } else {
        // (x + yu)^2 = a  <=>  x^2 + nu y^2 = c0, 2xy = c1; x^2 = (c0 ± sqrt(N))/2
        let n = a.norm().sqrt()?;
        let half = field.half().expect("odd characteristic");
        [n, -n].into_iter().find_map(|n| {
            let x = ((a.c0 + n) * half).sqrt()?;
            if x.is_zero() {
                return None;
            }
            let y = a.c1 * half / x;
            let s = QuadElement { c0: x, c1: y };
            (s * s == a).then_some(s)
        })?
    };
    debug_assert!(root * root == a);
    Some(root.enum_min(-root))
}

/// Solves `x = y(1 - y)` in `F_{q^2}`: returns `(y, 1 - y)` with
/// `y = (1 + sqrt(1 - 4x))/2`. Both entries equal `1/2` when `x = 1/4`.
pub fn solve_parameterization<'f>(
    x: FieldElement<'f>,
) -> Result<(QuadElement<'f>, QuadElement<'f>)> {
    let field = x.field();
    let half = field
        .half()
        .ok_or(Error::CharacteristicTwo("the y-parameterization"))?;
    let disc = QuadElement::embed(field.one() - field.from_int(4) * x)?;
    let s = sqrt_in_q2(disc)
        .ok_or_else(|| Error::Inconsistent(format!("{disc} has no square root in F_q^2")))?;
    let one = QuadElement::embed(field.one())?;
    let y = (one + s) * half;
    Ok((y, one - y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad<'f>(f: &'f FieldSpec, c0: i64, c1: i64) -> QuadElement<'f> {
        QuadElement::new(f.from_int(c0), f.from_int(c1)).unwrap()
    }

    #[test]
    fn sqrt_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        // F_9 = F_3[u]/(u^2 - 2): u^2 = -1
        assert_eq!(sqrt_in_q2(quad(&f3, 2, 0)), Some(quad(&f3, 0, 1)));
        assert_eq!(sqrt_in_q2(quad(&f3, 0, 0)), Some(quad(&f3, 0, 0)));
        assert_eq!(sqrt_in_q2(quad(&f3, 1, 0)), Some(quad(&f3, 1, 0)));
    }

    #[test]
    fn sqrt_matches_square_table() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            let all: Vec<_> = f.quad_elements().unwrap().collect();
            let mut table = std::collections::HashMap::new();
            for &s in &all {
                let sq = s * s;
                let entry = table.entry(sq.index()).or_insert(s);
                if s.index() < entry.index() {
                    *entry = s;
                }
            }
            for &a in &all {
                assert_eq!(sqrt_in_q2(a), table.get(&a.index()).copied(), "sqrt({a})");
            }
            // every element of F_q is a square in F_q^2
            for x in f.elements() {
                assert!(sqrt_in_q2(QuadElement::embed(x).unwrap()).is_some());
            }
        }
    }

    #[test]
    fn extension_frobenius_and_order() {
        for (p, e) in [(3, 1), (5, 1), (3, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let q = f.order() as u128;
            let all: Vec<_> = f.quad_elements().unwrap().collect();
            for &a in &all {
                assert_eq!(a.pow(q * q), a);
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), quad(&f, 1, 0));
                }
                for &b in all.iter().step_by(3) {
                    assert_eq!((a + b).pow(p as u128), a.pow(p as u128) + b.pow(p as u128));
                    assert_eq!((a * b).pow(p as u128), a.pow(p as u128) * b.pow(p as u128));
                }
            }
        }
    }

    #[test]
    fn parameterization_examples() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let (y1, y2) = solve_parameterization(f5.zero()).unwrap();
        let mut ys = [y1.index(), y2.index()];
        ys.sort();
        assert_eq!(ys, [0, 1]);
        let (y1, y2) = solve_parameterization(f5.from_int(4)).unwrap();
        assert_eq!(y1, quad(&f5, 3, 0));
        assert_eq!(y2, quad(&f5, 3, 0));

        let f3 = FieldSpec::new(3, 1).unwrap();
        let (y, other) = solve_parameterization(f3.from_int(2)).unwrap();
        assert_eq!(y, quad(&f3, 2, 2));
        assert_eq!(y * other, quad(&f3, 2, 0));
    }

    #[test]
    fn parameterization_round_trips() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (13, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            for x in f.elements() {
                let (y1, y2) = solve_parameterization(x).unwrap();
                assert_eq!(y1 * y2, QuadElement::embed(x).unwrap());
                assert_eq!(y1 + y2, quad(&f, 1, 0));
            }
        }
    }

    #[test]
    fn characteristic_two_is_rejected() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert!(QuadElement::embed(f.one()).is_err());
        assert!(solve_parameterization(f.one()).is_err());
    }
}
