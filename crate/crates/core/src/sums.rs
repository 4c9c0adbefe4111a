//! Character sums `S_n = sum_{a in F_q} E_n(1, a)` for `1 <= n <= q^2 - 1`.
//!
//! Writing `d_n = S_n - (n+1)/2^n` (the second term is `E_n(1, 1/4)`), the
//! generating series satisfies
//!
//! ```text
//! (t^q - t^{q-1} - 1) * sum_{n=1}^{q^2-1} d_n t^n = sum_{i=1}^{q^2+q-1} c_i t^i
//! ```
//!
//! with `c` built from explicit polynomials ([`compute_c`]). [`solve_d`] peels
//! `d` off that identity and then checks every coefficient equation, since
//! there are `q` more equations than unknowns.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::dickson::{e1_sequence, quarter_value};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::series::CoeffSeq;

fn require_odd(field: &FieldSpec, what: &'static str) -> Result<()> {
    if field.is_odd() {
        Ok(())
    } else {
        Err(Error::CharacteristicTwo(what))
    }
}

fn as_usize(q: u64) -> usize {
    usize::try_from(q).expect("field order fits in usize")
}

/// Coefficients of `-1 - (t - t^q)^{q-1}`, length `q^2 - q + 1`, from the
/// closed form: with `i = alpha + beta q`, `b_i = (-1)^{beta+1} C(q-1, beta)`
/// when `alpha + beta = q - 1`, `b_0 = -1`, and zero elsewhere.
pub fn compute_b(field: &FieldSpec) -> Result<CoeffSeq<'_>> {
    require_odd(field, "the sum table")?;
    let q = field.order();
    let mut b = CoeffSeq::zeros(field, as_usize(q * q - q + 1));
    b.set(0, -field.one());
    let lucas = field.lucas();
    for beta in 0..q {
        let alpha = q - 1 - beta;
        let binom = field.from_int(lucas.binom(q - 1, beta) as i64);
        let sign = if beta % 2 == 0 {
            -field.one()
        } else {
            field.one()
        };
        b.set(as_usize(alpha + beta * q), sign * binom);
    }
    Ok(b)
}

/// `-1 - (t - t^q)^{q-1}` by repeated multiplication, as a check on
/// [`compute_b`].
pub fn expand_b(field: &FieldSpec) -> Result<CoeffSeq<'_>> {
    require_odd(field, "the sum table")?;
    let q = as_usize(field.order());
    let mut base = CoeffSeq::zeros(field, q + 1);
    base.set(1, field.one());
    base.set(q, -field.one());
    let mut acc = CoeffSeq::from_ints(field, &[1]);
    for _ in 0..q - 1 {
        acc = &acc * &base;
    }
    Ok(&CoeffSeq::from_ints(field, &[-1]) - &acc)
}

/// The right-hand side `c_0 ..= c_{q^2+q-1}`:
/// `(1 - t^q + t^{q-1}) sum_{i=1}^{q^2-1} t^i - G(t) B(t)` where
/// `G = t^{2(q-1)} + sum_{k=1}^{q-1} (t-1)^{q-1-k} t^{2k} 4^{-k}` and `B` is
/// [`compute_b`]. Fails if the constant term is not zero.
pub fn compute_c(field: &FieldSpec) -> Result<CoeffSeq<'_>> {
    require_odd(field, "the sum table")?;
    let q = as_usize(field.order());
    let one = field.one();

    let mut ones = CoeffSeq::zeros(field, q * q);
    for i in 1..q * q {
        ones.set(i, one);
    }
    let mut a = CoeffSeq::zeros(field, q + 1);
    a.set(0, one);
    a.set(q - 1, one);
    a.set(q, -one);
    let first = &a * &ones;

    let quarter = field.quarter().expect("odd characteristic");
    let t_minus_1 = CoeffSeq::new(field, vec![-one, one]);
    let mut g = CoeffSeq::monomial(one, 2 * (q - 1));
    let mut scale = one;
    for k in 1..q {
        scale *= quarter;
        let term = t_minus_1.pow((q - 1 - k) as u64).shift(2 * k).scale(scale);
        g = &g + &term;
    }
    let second = &g * &compute_b(field)?;

    let mut c = (&first - &second).truncated(q * q + q);
    if let Some(d) = c.degree() {
        if d >= q * q + q {
            return Err(Error::Inconsistent(format!("c has degree {d}")));
        }
    }
    if !c.get(0).is_zero() {
        return Err(Error::Inconsistent(format!(
            "c_0 = {} is not zero",
            c.get(0)
        )));
    }
    c.set(0, field.zero());
    Ok(c)
}

/// Solves for `d_1 ..= d_{q^2-1}` (returned at indices `1..q^2`, index 0 is
/// zero) and checks every coefficient of
/// `(t^q - t^{q-1} - 1) D(t) = C(t)`.
pub fn solve_d<'f>(c: &CoeffSeq<'f>) -> Result<Vec<FieldElement<'f>>> {
    let field = c.field();
    require_odd(field, "the sum table")?;
    let q = as_usize(field.order());
    let top = q * q - 1;
    let zero = field.zero();
    let mut d = vec![zero; top + 1];
    let mut writes = vec![0u8; top + 1];
    let mut put = |d: &mut Vec<FieldElement<'f>>, i: usize, v: FieldElement<'f>| {
        d[i] = v;
        writes[i] += 1;
    };

    for j in 1..q {
        put(&mut d, j, -c.get(j));
    }
    put(&mut d, q, c.get(1) - c.get(q));
    for l in 1..=q - 2 {
        if l >= 2 {
            let v = d[(l - 1) * q] - d[(l - 1) * q + 1] - c.get(l * q);
            put(&mut d, l * q, v);
        }
        for j in 1..q {
            let v = d[(l - 1) * q + j] - d[(l - 1) * q + j + 1] - c.get(l * q + j);
            put(&mut d, l * q + j, v);
        }
    }
    let mut tail = zero;
    for j in (0..q).rev() {
        tail += c.get(q * q + j);
        put(&mut d, q * q - q + j, tail);
    }

    if let Some(i) = (1..=top).find(|&i| writes[i] != 1) {
        return Err(Error::Inconsistent(format!(
            "d_{i} assigned {} times",
            writes[i]
        )));
    }

    let at = |i: isize| -> FieldElement<'f> {
        if i >= 1 && (i as usize) <= top {
            d[i as usize]
        } else {
            zero
        }
    };
    let qi = q as isize;
    for i in 0..(q * q + q) as isize {
        let lhs = at(i - qi) - at(i - qi + 1) - at(i);
        if lhs != c.get(i as usize) {
            return Err(Error::Inconsistent(format!(
                "coefficient of t^{i}: {lhs} != c_{i} = {}",
                c.get(i as usize)
            )));
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumMethod {
    Recurrence,
    BruteForce,
}

impl SumMethod {
    pub fn name(self) -> &'static str {
        match self {
            SumMethod::Recurrence => "recurrence",
            SumMethod::BruteForce => "brute_force",
        }
    }
}

impl fmt::Display for SumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumTable<'f> {
    pub q: u64,
    pub method: SumMethod,
    /// `S_1 ..= S_{q^2-1}`.
    pub values: Vec<FieldElement<'f>>,
}

#[derive(Serialize)]
struct SumRow<'a> {
    n: u64,
    #[serde(rename = "S_n")]
    value: String,
    method: &'a str,
}

impl<'f> SumTable<'f> {
    /// `S_n` for `1 <= n <= q^2 - 1`.
    pub fn get(&self, n: u64) -> Option<FieldElement<'f>> {
        let i = usize::try_from(n).ok()?.checked_sub(1)?;
        self.values.get(i).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn rows(&self) -> impl Iterator<Item = SumRow<'static>> + '_ {
        self.values.iter().enumerate().map(|(i, v)| SumRow {
            n: i as u64 + 1,
            value: v.to_string(),
            method: self.method.name(),
        })
    }

    /// Columns `n,S_n,method`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "method": self.method,
            "rows": self.rows().collect::<Vec<_>>(),
        })
    }
}

/// `S_n = d_n + (n+1)/2^n` through [`compute_c`] and [`solve_d`].
pub fn sum_table_recurrence(field: &FieldSpec) -> Result<SumTable<'_>> {
    let c = compute_c(field)?;
    let d = solve_d(&c)?;
    let values = (1..d.len())
        .map(|n| Ok(d[n] + quarter_value(n as u64, field)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SumTable {
        q: field.order(),
        method: SumMethod::Recurrence,
        values,
    })
}

/// `[S_0, ..., S_{n_max}]` by summing the recursion for every `a`.
pub fn brute_force_sums(field: &FieldSpec, n_max: usize) -> Vec<FieldElement<'_>> {
    let mut sums = vec![field.zero(); n_max + 1];
    for a in field.elements() {
        for (s, v) in sums.iter_mut().zip(e1_sequence(a, n_max + 1)) {
            *s += v;
        }
    }
    sums
}

/// Any characteristic.
pub fn sum_table_bruteforce(field: &FieldSpec) -> SumTable<'_> {
    let top = as_usize(field.order() * field.order() - 1);
    SumTable {
        q: field.order(),
        method: SumMethod::BruteForce,
        values: brute_force_sums(field, top).split_off(1),
    }
}

/// First relation that fails in [`recurrence_violation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecurrenceViolation {
    pub family: u8,
    pub n: u64,
}

/// Checks the five families of relations tying `S` to `c` directly on the
/// table values, with the `1/4`-point corrections written out:
///
/// 1. `S_j = -c_j + (j+1)/2^j`, `1 <= j <= q-1`
/// 2. `S_q = c_1 - c_q + 1/2^q`
/// 3. `S_{lq+j} = S_{(l-1)q+j} - S_{(l-1)q+j+1} - c_{lq+j} - (2^{q-1} j - j - 1)/2^{lq+j}`,
///    `1 <= l <= q-2`, `1 <= j <= q-1`
/// 4. `S_{lq} = S_{(l-1)q} - S_{(l-1)q+1} - c_{lq} + 1/2^{lq}`, `2 <= l <= q-2`
/// 5. `S_{q^2-q+j} = sum_{i=j}^{q-1} c_{q^2+i} + (j+1)/2^{q^2-q+j}`, `0 <= j <= q-1`
pub fn recurrence_violation(table: &SumTable<'_>, c: &CoeffSeq<'_>) -> Option<RecurrenceViolation> {
    let field = c.field();
    let q = as_usize(field.order());
    assert_eq!(table.q, field.order(), "table and c over different fields");
    let half = field.half().expect("odd characteristic");
    let inv2 = |k: usize| half.pow(k as u64);
    let int = |v: usize| field.from_int(v as i64);
    let s = |n: usize| table.get(n as u64).expect("index within the table");
    let fail = |family: u8, n: usize| {
        Some(RecurrenceViolation {
            family,
            n: n as u64,
        })
    };

    for j in 1..q {
        if s(j) != -c.get(j) + int(j + 1) * inv2(j) {
            return fail(1, j);
        }
    }
    if s(q) != c.get(1) - c.get(q) + inv2(q) {
        return fail(2, q);
    }
    let two_q1 = field.from_int(2).pow((q - 1) as u64);
    for l in 1..=q - 2 {
        for j in 1..q {
            let n = l * q + j;
            let corr = -(two_q1 * int(j) - int(j) - field.one()) * inv2(n);
            if s(n) != s(n - q) - s(n - q + 1) - c.get(n) + corr {
                return fail(3, n);
            }
        }
    }
    for l in 2..=q.saturating_sub(2) {
        let n = l * q;
        if s(n) != s(n - q) - s(n - q + 1) - c.get(n) + inv2(n) {
            return fail(4, n);
        }
    }
    for j in 0..q {
        let n = q * q - q + j;
        let tail = (j..q).fold(field.zero(), |acc, i| acc + c.get(q * q + i));
        if s(n) != tail + int(j + 1) * inv2(n) {
            return fail(5, n);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, e: u32) -> FieldSpec {
        FieldSpec::new(p, e).unwrap()
    }

    fn strings(v: &[FieldElement<'_>]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    /// `-1 - (t - t^q)^{q-1}` by repeated multiplication.
    fn b_expansion(f: &FieldSpec) -> CoeffSeq<'_> {
        let q = f.order() as usize;
        let mut base = CoeffSeq::zeros(f, q + 1);
        base.set(1, f.one());
        base.set(q, -f.one());
        let mut acc = CoeffSeq::from_ints(f, &[1]);
        for _ in 0..q - 1 {
            acc = &acc * &base;
        }
        &CoeffSeq::from_ints(f, &[-1]) - &acc
    }

    #[test]
    fn b_examples() {
        let f3 = field(3, 1);
        let b = compute_b(&f3).unwrap();
        assert_eq!(strings(b.coeffs()), ["2", "0", "2", "0", "2", "0", "2"]);
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = field(p, e);
            let q = f.order() as usize;
            let b = compute_b(&f).unwrap();
            assert_eq!(b.len(), q * q - q + 1);
            assert_eq!(b.get(0), -f.one());
            assert_eq!(b.get(q - 1), -f.one());
            assert_eq!(b, b_expansion(&f).truncated(b.len()), "q={q}");
            assert_eq!(b_expansion(&f).degree(), Some(q * q - q));
        }
        assert!(compute_b(&field(2, 2)).is_err());
    }

    #[test]
    fn c_shape() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = field(p, e);
            let q = f.order() as usize;
            let c = compute_c(&f).unwrap();
            assert_eq!(c.len(), q * q + q);
            assert!(c.get(0).is_zero());
        }
        assert!(compute_c(&field(2, 1)).is_err());
    }

    #[test]
    fn d_matches_brute_force() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = field(p, e);
            let c = compute_c(&f).unwrap();
            let d = solve_d(&c).unwrap();
            let q = f.order() as usize;
            assert_eq!(d[1], -c.get(1));
            assert_eq!(d[q * q - 1], c.get(q * q + q - 1));
            let brute = brute_force_sums(&f, q * q - 1);
            for n in 1..q * q {
                assert_eq!(
                    d[n],
                    brute[n] - quarter_value(n as u64, &f).unwrap(),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn solve_d_rejects_perturbed_c() {
        let f = field(5, 1);
        let mut c = compute_c(&f).unwrap();
        let v = c.get(27);
        c.set(27, v + f.one());
        assert!(matches!(solve_d(&c), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn table_examples() {
        let f3 = field(3, 1);
        let t = sum_table_recurrence(&f3).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.get(4), Some(f3.from_int(2)));
        assert_eq!(t.get(0), None);
        assert_eq!(t.get(9), None);
        let b = sum_table_bruteforce(&f3);
        assert_eq!(t.values, b.values);
        let f5 = field(5, 1);
        assert_eq!(sum_table_bruteforce(&f5).get(4), Some(f5.zero()));
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (2, 2), (2, 3)] {
            let f = field(p, e);
            let b = sum_table_bruteforce(&f);
            assert!(b.get(1).unwrap().is_zero());
            assert!(b.get(2).unwrap().is_zero());
        }
    }

    #[test]
    fn recurrences_hold() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = field(p, e);
            let c = compute_c(&f).unwrap();
            let t = sum_table_bruteforce(&f);
            assert_eq!(recurrence_violation(&t, &c), None, "q={}", f.order());
        }
        let f = field(5, 1);
        let c = compute_c(&f).unwrap();
        let mut t = sum_table_bruteforce(&f);
        t.values[12] += f.one();
        assert_eq!(
            recurrence_violation(&t, &c),
            Some(RecurrenceViolation { family: 3, n: 13 })
        );
    }

    #[test]
    fn shifted_differences_are_periodic() {
        for p in [3, 5] {
            let f = field(p, 1);
            let period = (p * p - 1) as usize;
            let sums = brute_force_sums(&f, 2 * period);
            let d = |n: usize| sums[n] - quarter_value(n as u64, &f).unwrap();
            for n in 1..=period {
                assert_eq!(d(n), d(n + period), "p={p} n={n}");
            }
        }
    }

    // Digits of c_0.. and S_1.. recorded from a run checked against brute force.
    const FIXTURES: [(u64, &str, &str); 2] = [
        (3, "010022222122", "00020022"),
        (
            5,
            "012304422342234223422342222424",
            "000000040000400414003244",
        ),
    ];

    #[test]
    fn frozen_fixtures() {
        for (p, c_digits, s_digits) in FIXTURES {
            let f = field(p, 1);
            let c = compute_c(&f).unwrap();
            assert_eq!(strings(c.coeffs()).concat(), c_digits);
            let t = sum_table_recurrence(&f).unwrap();
            assert_eq!(strings(&t.values).concat(), s_digits);
        }
    }

    #[test]
    fn serialization() {
        let f3 = field(3, 1);
        let t = sum_table_recurrence(&f3).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,S_n,method"));
        assert_eq!(text.lines().count(), 9);
        assert!(text.contains("\n4,2,recurrence\n"));
        let json = t.to_json();
        assert_eq!(json["q"], 3);
        assert_eq!(json["rows"][3]["S_n"], "2");
    }
}
