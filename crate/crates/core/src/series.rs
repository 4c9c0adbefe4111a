//! Dense polynomials and truncated power series over `F_q`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};

/// Coefficients indexed by exponent from 0. Reads past the stored length
/// yield zero; trailing zeros are kept, so `len` is the declared length.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffSeq<'f> {
    field: &'f FieldSpec,
    coeffs: Vec<FieldElement<'f>>,
}

impl<'f> CoeffSeq<'f> {
    pub fn new(field: &'f FieldSpec, coeffs: Vec<FieldElement<'f>>) -> Self {
        CoeffSeq { field, coeffs }
    }

    pub fn zeros(field: &'f FieldSpec, len: usize) -> Self {
        CoeffSeq {
            field,
            coeffs: vec![field.zero(); len],
        }
    }

    pub fn from_ints(field: &'f FieldSpec, ints: &[i64]) -> Self {
        Self::new(field, ints.iter().map(|&v| field.from_int(v)).collect())
    }

    /// `c * t^k`.
    pub fn monomial(c: FieldElement<'f>, k: usize) -> Self {
        let mut s = Self::zeros(c.field(), k + 1);
        s.coeffs[k] = c;
        s
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, i: usize) -> FieldElement<'f> {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn set(&mut self, i: usize, c: FieldElement<'f>) {
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, self.field.zero());
        }
        self.coeffs[i] = c;
    }

    pub fn coeffs(&self) -> &[FieldElement<'f>] {
        &self.coeffs
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn truncated(&self, len: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(len).copied().collect();
        coeffs.resize(len, self.field.zero());
        Self::new(self.field, coeffs)
    }

    pub fn scale(&self, c: FieldElement<'f>) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.field, coeffs)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::from_ints(self.field, &[1]);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: FieldElement<'f>) -> FieldElement<'f> {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    /// The first `len` coefficients of `1/self` in `F_q[[t]]`.
    pub fn inverse_series(&self, len: usize) -> Result<Self> {
        let c0_inv = self.get(0).inv().ok_or(Error::DivisionByZero)?;
        let mut out = Self::zeros(self.field, len);
        for n in 0..len {
            let mut acc = if n == 0 {
                self.field.one()
            } else {
                self.field.zero()
            };
            for k in 1..=n.min(self.len().saturating_sub(1)) {
                acc -= self.coeffs[k] * out.coeffs[n - k];
            }
            out.coeffs[n] = acc * c0_inv;
        }
        Ok(out)
    }
}

impl<'f> Index<usize> for CoeffSeq<'f> {
    type Output = FieldElement<'f>;
    fn index(&self, i: usize) -> &FieldElement<'f> {
        &self.coeffs[i]
    }
}

impl fmt::Debug for CoeffSeq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<'f> Add for &CoeffSeq<'f> {
    type Output = CoeffSeq<'f>;
    fn add(self, rhs: Self) -> CoeffSeq<'f> {
        let len = self.len().max(rhs.len());
        CoeffSeq::new(
            self.field,
            (0..len).map(|i| self.get(i) + rhs.get(i)).collect(),
        )
    }
}

impl<'f> Sub for &CoeffSeq<'f> {
    type Output = CoeffSeq<'f>;
    fn sub(self, rhs: Self) -> CoeffSeq<'f> {
        let len = self.len().max(rhs.len());
        CoeffSeq::new(
            self.field,
            (0..len).map(|i| self.get(i) - rhs.get(i)).collect(),
        )
    }
}

impl<'f> Neg for &CoeffSeq<'f> {
    type Output = CoeffSeq<'f>;
    fn neg(self) -> CoeffSeq<'f> {
        CoeffSeq::new(self.field, self.coeffs.iter().map(|&c| -c).collect())
    }
}

/// Schoolbook product; the result has length `len(a) + len(b) - 1`.
impl<'f> Mul for &CoeffSeq<'f> {
    type Output = CoeffSeq<'f>;
    fn mul(self, rhs: Self) -> CoeffSeq<'f> {
        if self.is_empty() || rhs.is_empty() {
            return CoeffSeq::zeros(self.field, 0);
        }
        let mut out = CoeffSeq::zeros(self.field, self.len() + rhs.len() - 1);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_inverse() {
        let f = FieldSpec::new(7, 1).unwrap();
        let a = CoeffSeq::from_ints(&f, &[1, 2, 3]);
        let b = CoeffSeq::from_ints(&f, &[4, 5]);
        assert_eq!(&a * &b, CoeffSeq::from_ints(&f, &[4, 13, 22, 15]));
        let inv = a.inverse_series(12).unwrap();
        let prod = (&a * &inv).truncated(12);
        assert_eq!(prod, CoeffSeq::monomial(f.one(), 0).truncated(12));
        assert!(CoeffSeq::from_ints(&f, &[0, 1]).inverse_series(3).is_err());
    }

    #[test]
    fn powers_and_eval() {
        let f = FieldSpec::new(5, 1).unwrap();
        let lin = CoeffSeq::from_ints(&f, &[1, 1]);
        let cube = lin.pow(3);
        assert_eq!(cube, CoeffSeq::from_ints(&f, &[1, 3, 3, 1]));
        for x in f.elements() {
            assert_eq!(cube.eval(x), (x + f.one()).pow(3));
        }
        assert_eq!(cube.shift(2).degree(), Some(5));
    }
}
