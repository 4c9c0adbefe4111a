//! Permutation tests for maps of `F_q`.
//!
//! Three independent deciders are provided for `x -> E_n(1, x)`: counting
//! images, the power-sum criterion, and the 2-to-1 criterion on
//! `(F_q ∪ V) \ {1/2}` where `V = {y in F_{q^2} : y^q = 1 - y}`.

use std::collections::HashMap;

use serde::Serialize;

use crate::dickson::quarter_value;
use crate::error::{Error, Result};
use crate::ff::{arith::gcd, FieldElement, FieldSpec, QuadElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PpMethod {
    Exhaustive,
    PowerSum,
    TwoToOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness<'f> {
    /// Two distinct arguments with the same image.
    Collision(FieldElement<'f>, FieldElement<'f>),
    /// Least exponent `i` whose power sum has the wrong value.
    FailingExponent(u64),
    /// Two points of the 2-to-1 domain with equal value that are not `y, 1 - y`.
    FiberCollision(QuadElement<'f>, QuadElement<'f>),
    /// A point of the 2-to-1 domain whose value is `(n+1)/2^n`.
    QuarterValueHit(QuadElement<'f>),
}

impl std::fmt::Display for Witness<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Collision(a, b) => write!(f, "collision {a} {b}"),
            Witness::FailingExponent(i) => write!(f, "power sum fails at i={i}"),
            Witness::FiberCollision(a, b) => write!(f, "fiber collision {a} {b}"),
            Witness::QuarterValueHit(y) => write!(f, "quarter value hit at {y}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PpVerdict<'f> {
    pub is_pp: bool,
    pub method: PpMethod,
    pub witness: Option<Witness<'f>>,
}

impl<'f> PpVerdict<'f> {
    fn pass(method: PpMethod) -> Self {
        PpVerdict {
            is_pp: true,
            method,
            witness: None,
        }
    }

    fn fail(method: PpMethod, witness: Witness<'f>) -> Self {
        PpVerdict {
            is_pp: false,
            method,
            witness: Some(witness),
        }
    }
}

/// Counts images; reports the first collision in enumeration order.
pub fn is_pp_exhaustive<'f, F>(field: &'f FieldSpec, f: F) -> PpVerdict<'f>
where
    F: Fn(FieldElement<'f>) -> FieldElement<'f>,
{
    let images: Vec<_> = field.elements().map(f).collect();
    exhaustive_from_images(field, &images)
}

/// [`is_pp_exhaustive`] on precomputed images, `images[i]` being the image
/// of the `i`-th element.
pub fn exhaustive_from_images<'f>(
    field: &'f FieldSpec,
    images: &[FieldElement<'f>],
) -> PpVerdict<'f> {
    let mut seen: Vec<Option<u64>> = vec![None; field.order() as usize];
    for (i, v) in images.iter().enumerate() {
        let slot = &mut seen[v.index() as usize];
        if let Some(first) = *slot {
            let a = field.from_index(first).expect("in range");
            let b = field.from_index(i as u64).expect("in range");
            return PpVerdict::fail(PpMethod::Exhaustive, Witness::Collision(a, b));
        }
        *slot = Some(i as u64);
    }
    PpVerdict::pass(PpMethod::Exhaustive)
}

/// `f` permutes `F_q` iff `sum_a f(a)^i` is `0` for `0 <= i <= q-2` and `-1`
/// for `i = q-1`.
pub fn is_pp_power_sum<'f, F>(field: &'f FieldSpec, f: F) -> PpVerdict<'f>
where
    F: Fn(FieldElement<'f>) -> FieldElement<'f>,
{
    let images: Vec<_> = field.elements().map(f).collect();
    power_sum_from_images(field, &images)
}

pub fn power_sum_from_images<'f>(
    field: &'f FieldSpec,
    images: &[FieldElement<'f>],
) -> PpVerdict<'f> {
    let q = field.order();
    let mut powers = vec![field.one(); images.len()];
    for i in 0..q {
        let sum = powers.iter().fold(field.zero(), |acc, &v| acc + v);
        let expected = if i == q - 1 {
            -field.one()
        } else {
            field.zero()
        };
        if sum != expected {
            return PpVerdict::fail(PpMethod::PowerSum, Witness::FailingExponent(i));
        }
        for (pw, &v) in powers.iter_mut().zip(images) {
            *pw *= v;
        }
    }
    PpVerdict::pass(PpMethod::PowerSum)
}

/// Images of `x -> E_n(1, x)` over `F_q` for `n = 0, 1, 2, ...`, advanced in
/// place by the recursion.
pub struct E1Images<'f> {
    xs: Vec<FieldElement<'f>>,
    prev: Vec<FieldElement<'f>>,
    cur: Vec<FieldElement<'f>>,
    n: u64,
}

impl<'f> E1Images<'f> {
    pub fn new(field: &'f FieldSpec) -> Self {
        let xs: Vec<_> = field.elements().collect();
        let ones = vec![field.one(); xs.len()];
        E1Images {
            xs,
            prev: ones.clone(),
            cur: ones,
            n: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `images()[i]` is the image of the `i`-th element.
    pub fn images(&self) -> &[FieldElement<'f>] {
        &self.cur
    }

    pub fn advance(&mut self) {
        if self.n >= 1 {
            for ((p, c), &x) in self.prev.iter_mut().zip(self.cur.iter_mut()).zip(&self.xs) {
                let next = *c - x * *p;
                *p = *c;
                *c = next;
            }
        }
        self.n += 1;
    }
}

/// The `q` elements of `V = {y in F_{q^2} : y^q = 1 - y}`, in enumeration order.
#[derive(Debug, Clone)]
pub struct VSet<'f> {
    pub elements: Vec<QuadElement<'f>>,
}

impl<'f> VSet<'f> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Members lying in `F_q`; always exactly `[1/2]`.
    pub fn base_field_members(&self) -> Vec<QuadElement<'f>> {
        self.elements
            .iter()
            .copied()
            .filter(|y| y.in_base_field())
            .collect()
    }
}

/// Scan of `F_{q^2}`. Equivalently `V = 1/2 + ker(z -> z^q + z)`.
pub fn build_v(field: &FieldSpec) -> Result<VSet<'_>> {
    let one = QuadElement::embed(field.one())?;
    let q = field.order() as u128;
    let elements = field
        .quad_elements()?
        .filter(|&y| y.pow(q) == one - y)
        .collect();
    Ok(VSet { elements })
}

/// `y -> (y^{n+1} - (1-y)^{n+1})/(2y - 1)`, for `y != 1/2`.
fn closed_form<'f>(n: u64, y: QuadElement<'f>) -> QuadElement<'f> {
    let one = QuadElement::embed(y.field().one()).expect("odd characteristic");
    let y_bar = one - y;
    let e = n as u128 + 1;
    (y.pow(e) - y_bar.pow(e))
        .checked_div(&(y - y_bar))
        .expect("y != 1/2")
}

/// The 2-to-1 domain `(F_q ∪ V) \ {1/2}`, sorted by enumeration index;
/// always `2q - 2` points.
pub fn two_to_one_domain<'f>(field: &'f FieldSpec, v: &VSet<'f>) -> Result<Vec<QuadElement<'f>>> {
    let half = field
        .half()
        .ok_or(Error::CharacteristicTwo("the 2-to-1 criterion"))?;
    let mut domain: Vec<_> = field
        .elements()
        .filter(|&x| x != half)
        .map(QuadElement::embed)
        .collect::<Result<_>>()?;
    domain.extend(v.elements.iter().copied().filter(|y| !y.in_base_field()));
    domain.sort_by_key(|y| y.index());
    Ok(domain)
}

/// `E_n(1, x)` permutes `F_q` iff `y -> (y^{n+1} - (1-y)^{n+1})/(2y-1)` is
/// 2-to-1 on `(F_q ∪ V) \ {1/2}` and never takes the value `(n+1)/2^n`.
pub fn check_two_to_one(n: u64, field: &FieldSpec) -> Result<PpVerdict<'_>> {
    let v = build_v(field)?;
    check_two_to_one_with(n, field, &v)
}

/// [`check_two_to_one`] with a prebuilt `V`.
pub fn check_two_to_one_with<'f>(
    n: u64,
    field: &'f FieldSpec,
    v: &VSet<'f>,
) -> Result<PpVerdict<'f>> {
    let domain = two_to_one_domain(field, v)?;
    let quarter = QuadElement::embed(quarter_value(n, field)?)?;
    let one = QuadElement::embed(field.one())?;
    let mut fibers: HashMap<u64, QuadElement<'f>> = HashMap::with_capacity(domain.len());
    for &y in &domain {
        let value = closed_form(n, y);
        if value == quarter {
            return Ok(PpVerdict::fail(
                PpMethod::TwoToOne,
                Witness::QuarterValueHit(y),
            ));
        }
        match fibers.get(&value.index()) {
            Some(&first) if first != one - y => {
                return Ok(PpVerdict::fail(
                    PpMethod::TwoToOne,
                    Witness::FiberCollision(first, y),
                ));
            }
            Some(_) => {}
            None => {
                fibers.insert(value.index(), y);
            }
        }
    }
    Ok(PpVerdict::pass(PpMethod::TwoToOne))
}

/// Value multiplicities of the closed form over the 2-to-1 domain.
pub fn fiber_sizes<'f>(n: u64, field: &'f FieldSpec, v: &VSet<'f>) -> Result<HashMap<u64, usize>> {
    let mut counts = HashMap::new();
    for y in two_to_one_domain(field, v)? {
        *counts.entry(closed_form(n, y).index()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// `E_n(0, x)` permutes `F_q` iff `n = 2k`, `k >= 1`, `gcd(k, q - 1) = 1`.
///
/// `k = 0` gives the constant 1, which is never a permutation.
pub fn e_a0_is_pp(n: u64, q: u64) -> bool {
    n.is_multiple_of(2) && n >= 2 && gcd(n / 2, q - 1) == 1
}

/// `E_{p^k - 1}(1, x) = (1 - 4x)^{(p^k-1)/2}` permutes `F_q` iff
/// `gcd((p^k - 1)/2, q - 1) = 1`, for `1 <= k <= e`.
pub fn prime_power_index_is_pp(k: u32, field: &FieldSpec) -> Result<bool> {
    if !field.is_odd() {
        return Err(Error::CharacteristicTwo("the (1-4x) power criterion"));
    }
    if k == 0 || k > field.degree() {
        return Err(Error::Hypothesis(format!(
            "k = {k} outside [1, {}]",
            field.degree()
        )));
    }
    let pk = field.characteristic().pow(k);
    Ok(gcd((pk - 1) / 2, field.order() - 1) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickson::{eval_e1_recursive, eval_e_a0};

    fn e1<'f>(n: u64) -> impl Fn(FieldElement<'f>) -> FieldElement<'f> {
        move |x| eval_e1_recursive(n, x).unwrap()
    }

    #[test]
    fn streamed_images() {
        let f = FieldSpec::new(7, 1).unwrap();
        let mut imgs = E1Images::new(&f);
        for n in 0..40 {
            assert_eq!(imgs.n(), n);
            let expect: Vec<_> = f.elements().map(e1(n)).collect();
            assert_eq!(imgs.images(), &expect[..]);
            imgs.advance();
        }
    }

    #[test]
    fn exhaustive_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(is_pp_exhaustive(&f3, e1(2)).is_pp);
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(is_pp_exhaustive(&f5, e1(2)).is_pp);
        let v = is_pp_exhaustive(&f5, e1(4));
        assert!(!v.is_pp);
        let Some(Witness::Collision(a, b)) = v.witness else {
            panic!("expected a collision");
        };
        assert!(a < b);
        assert_eq!(
            eval_e1_recursive(4, a).unwrap(),
            eval_e1_recursive(4, b).unwrap()
        );
    }

    #[test]
    fn power_sum_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(
            is_pp_power_sum(&f3, |x| x),
            PpVerdict::pass(PpMethod::PowerSum)
        );
        for (p, e) in [(3, 1), (5, 1), (2, 2), (3, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let v = is_pp_power_sum(&f, |x| x.field().one());
            assert_eq!(v.witness, Some(Witness::FailingExponent(f.order() - 1)));
        }
        assert!(is_pp_power_sum(&f3, e1(2)).is_pp);
    }

    #[test]
    fn v_set_structure() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let v = build_v(&f3).unwrap();
        assert_eq!(v.len(), 3);
        let half = QuadElement::embed(f3.from_int(2)).unwrap();
        assert!(v.elements.contains(&half));
        for (p, e) in [(5, 1), (7, 1), (3, 2), (3, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            let v = build_v(&f).unwrap();
            assert_eq!(v.len() as u64, f.order());
            assert_eq!(
                v.base_field_members(),
                vec![QuadElement::embed(f.half().unwrap()).unwrap()]
            );
            let one = QuadElement::embed(f.one()).unwrap();
            for &y in &v.elements {
                assert_eq!(y.pow(f.order() as u128) + y, one);
                assert!(v.elements.contains(&(one - y)));
            }
            assert_eq!(
                two_to_one_domain(&f, &v).unwrap().len() as u64,
                2 * f.order() - 2
            );
        }
        assert!(build_v(&FieldSpec::new(2, 2).unwrap()).is_err());
    }

    #[test]
    fn two_to_one_agrees_with_exhaustive() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(check_two_to_one(2, &f3).unwrap().is_pp);
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let v = build_v(&f).unwrap();
            let domain = two_to_one_domain(&f, &v).unwrap();
            let one = QuadElement::embed(f.one()).unwrap();
            for n in 0..f.order() * f.order() {
                let expect = is_pp_exhaustive(&f, e1(n)).is_pp;
                assert_eq!(
                    check_two_to_one_with(n, &f, &v).unwrap().is_pp,
                    expect,
                    "n={n} q={}",
                    f.order()
                );
                for &y in &domain {
                    assert_eq!(closed_form(n, y), closed_form(n, one - y));
                }
                if expect {
                    assert!(fiber_sizes(n, &f, &v).unwrap().values().all(|&c| c == 2));
                }
            }
        }
    }

    #[test]
    fn a0_classification() {
        assert!(!e_a0_is_pp(3, 5));
        assert!(!e_a0_is_pp(4, 5));
        assert!(e_a0_is_pp(2, 5));
        for (p, e) in [(2, 1), (2, 2), (3, 1), (5, 1), (7, 1), (3, 2), (2, 3)] {
            let f = FieldSpec::new(p, e).unwrap();
            for n in 0..3 * f.order() {
                let exhaustive = is_pp_exhaustive(&f, |x| eval_e_a0(n, x)).is_pp;
                assert_eq!(
                    e_a0_is_pp(n, f.order()),
                    exhaustive,
                    "n={n} q={}",
                    f.order()
                );
            }
        }
    }

    #[test]
    fn prime_power_index_criterion() {
        for (p, e, expect) in [(3, 1, true), (5, 1, false), (7, 1, false)] {
            let f = FieldSpec::new(p, e).unwrap();
            assert_eq!(prime_power_index_is_pp(1, &f).unwrap(), expect);
            assert_eq!(is_pp_exhaustive(&f, e1(p - 1)).is_pp, expect);
        }
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert!(prime_power_index_is_pp(3, &f9).is_err());
        assert!(prime_power_index_is_pp(0, &f9).is_err());
        for k in 1..=2 {
            let pk = 3u64.pow(k);
            assert_eq!(
                prime_power_index_is_pp(k, &f9).unwrap(),
                is_pp_exhaustive(&f9, e1(pk - 1)).is_pp
            );
        }
    }
}
