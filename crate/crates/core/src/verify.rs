//! Self-checks run against one field: every identity and invariant the crate
//! relies on, each reported with the number of cases checked and the first
//! counterexample.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dickson::{
    check_frobenius_identity, check_power_identity, check_scaling_identity, e1_sequence,
    eval_direct, eval_e1_functional, eval_e1_recursive, eval_e1_via_f, eval_e_a0, genfun_coeffs,
    quarter_value, reduce_index, EvalRequest,
};
use crate::error::{Error, Result};
use crate::ff::{power_sum, solve_parameterization, FieldElement, FieldSpec, QuadElement};
use crate::filters::{
    cayley_square_criterion, f_at_minus_one, f_exact, filter_report, gcd_product_identity,
    period6_value, self_reciprocal_check,
};
use crate::pp::{
    build_v, check_two_to_one_with, e_a0_is_pp, exhaustive_from_images, is_pp_exhaustive,
    power_sum_from_images, prime_power_index_is_pp, E1Images,
};
use crate::sums::{
    compute_b, compute_c, expand_b, recurrence_violation, sum_table_bruteforce,
    sum_table_recurrence,
};

/// Largest `n` the permutation suites sweep (capped at `q^2 - 1`).
pub const PP_SWEEP_LIMIT: u64 = 1000;
/// Largest `q` for which the sum-table suite runs.
pub const SUM_SUITE_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: Status,
    pub checked: u64,
    /// Counterexample on failure, reason on skip.
    pub detail: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

struct Tally {
    name: &'static str,
    checked: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failure: None,
        }
    }

    fn done(&self) -> bool {
        self.failure.is_some()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if self.failure.is_some() {
            return;
        }
        self.checked += 1;
        if !ok {
            self.failure = Some(what());
        }
    }

    /// Errors count as failures.
    fn check_res(&mut self, res: Result<bool>, what: impl FnOnce() -> String) {
        match res {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            status: if self.failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            checked: self.checked,
            detail: self.failure,
        }
    }
}

fn skip(name: &'static str, why: &str) -> SuiteResult {
    SuiteResult {
        name,
        status: Status::Skip,
        checked: 0,
        detail: Some(why.to_string()),
    }
}

type SuiteFn = fn(&FieldSpec) -> SuiteResult;

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    run: SuiteFn,
}

impl Suite {
    pub fn run(&self, field: &FieldSpec) -> SuiteResult {
        (self.run)(field)
    }
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "field_axioms",
        about: "ring laws, inverses, Frobenius fixes F_q",
        run: field_axioms,
    },
    Suite {
        name: "evaluators",
        about: "direct, recursive, f_m and generating-series values agree",
        run: evaluators,
    },
    Suite {
        name: "functional",
        about: "closed form agrees with the recursion at reduced indices",
        run: functional,
    },
    Suite {
        name: "scaling",
        about: "E_n(a, x) = (a/b)^n E_n(b, (b/a)^2 x)",
        run: scaling,
    },
    Suite {
        name: "frobenius",
        about: "E_{np^r-1} = E_{n-1}^{p^r} (1-4x)^{(p^r-1)/2}",
        run: frobenius,
    },
    Suite {
        name: "power_index",
        about: "E_{p^k-1} = (1-4x)^{(p^k-1)/2} and its permutation criterion",
        run: power_index,
    },
    Suite {
        name: "period6",
        about: "E_n(1, 1) follows the 6-periodic table",
        run: period6,
    },
    Suite {
        name: "gcd_identity",
        about: "gcd(n+1,q-1) gcd(n+1,q+1) = 2 gcd(n+1,q^2-1) for n = 1 mod 4",
        run: gcd_identity,
    },
    Suite {
        name: "cayley",
        about: "y = (t+1)/(t-1) has y^2 in F_q iff t^{q+1} = 1 or t^{q-1} = 1",
        run: cayley,
    },
    Suite {
        name: "power_sums",
        about: "sum of u^k over F_q",
        run: power_sums,
    },
    Suite {
        name: "self_reciprocal",
        about: "f_{2m+2}(x) = x^m f_{2m+2}(1/x)",
        run: self_reciprocal,
    },
    Suite {
        name: "f_integer",
        about: "f_{2m+2}(1) = 2^{2m+1}; f_{2m+2}(-1) = 0 iff m odd",
        run: f_integer,
    },
    Suite {
        name: "v_set",
        about: "|V| = q, V meets F_q in 1/2, y(1-y) = x round trips",
        run: v_set,
    },
    Suite {
        name: "pp_criteria",
        about: "exhaustive, power-sum and 2-to-1 verdicts agree",
        run: pp_criteria,
    },
    Suite {
        name: "a0_family",
        about: "E_n(0, x) permutation classification",
        run: a0_family,
    },
    Suite {
        name: "filter_soundness",
        about: "permutation exponents pass every applicable filter",
        run: filter_soundness,
    },
    Suite {
        name: "sum_table",
        about: "sum table by recurrence equals brute force",
        run: sum_table,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs every suite, or only `only` when given.
pub fn run_suites(field: &FieldSpec, only: Option<&str>) -> Result<Vec<SuiteResult>> {
    match only {
        None => Ok(SUITES.iter().map(|s| s.run(field)).collect()),
        Some(name) => {
            let suite = SUITES
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| Error::Hypothesis(format!("unknown suite {name:?}")))?;
            Ok(vec![suite.run(field)])
        }
    }
}

/// Up to `limit` nonzero elements, in enumeration order.
fn some_units(field: &FieldSpec, limit: usize) -> Vec<FieldElement<'_>> {
    field.elements().skip(1).take(limit).collect()
}

fn field_axioms(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("field_axioms");
    let q = field.order();
    let probes = some_units(field, 4);
    for a in field.elements() {
        t.check(a.pow(q) == a, || format!("{a}^q != {a}"));
        if let Some(inv) = a.inv() {
            t.check((a * inv).is_one(), || format!("{a} * {a}^-1 != 1"));
        }
        for b in field.elements() {
            t.check(a * b == b * a && a + b == b + a, || {
                format!("{a}, {b} do not commute")
            });
            t.check((a + b) - b == a, || format!("({a} + {b}) - {b} != {a}"));
            for &c in &probes {
                t.check(a * (b + c) == a * b + a * c, || {
                    format!("distributivity fails at {a}, {b}, {c}")
                });
                t.check((a * b) * c == a * (b * c), || {
                    format!("associativity fails at {a}, {b}, {c}")
                });
            }
        }
        if t.done() {
            break;
        }
    }
    t.finish()
}

fn evaluators(field: &FieldSpec) -> SuiteResult {
    const N: u64 = 120;
    let mut t = Tally::new("evaluators");
    for x in field.elements() {
        let series = genfun_coeffs(x, N as usize);
        let seq = e1_sequence(x, N as usize + 1);
        for n in 0..=N {
            let direct = eval_direct(&EvalRequest::reversed(n, field.one(), x));
            let rec = eval_e1_recursive(n, x);
            let ok = match (direct, rec) {
                (Ok(d), Ok(r)) => {
                    let via_f = if field.is_odd() {
                        eval_e1_via_f(n, x).map(|v| v == d).unwrap_or(false)
                    } else {
                        true
                    };
                    d == r && r == seq[n as usize] && r == series[n as usize] && via_f
                }
                _ => false,
            };
            t.check(ok, || format!("evaluators disagree at n={n}, x={x}"));
        }
        if t.done() {
            break;
        }
    }
    t.finish()
}

fn functional(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("functional", "characteristic 2");
    }
    let mut t = Tally::new("functional");
    let q = field.order();
    let period = q * q - 1;
    let quarter = field.quarter();
    let mut ns: Vec<u64> = (0..=3 * period.min(400)).collect();
    ns.extend((0..16).map(|k| (1u64 << 40) + k * 977));
    ns.extend([period, period + 1, 2 * period, u64::MAX / 2]);
    for x in field.elements() {
        for &n in &ns {
            let got = eval_e1_functional(n, x);
            let want = if Some(x) == quarter {
                quarter_value(n, field)
            } else {
                eval_e1_recursive(reduce_index(n, q), x)
            };
            let ok = matches!((&got, &want), (Ok(g), Ok(w)) if g == w);
            t.check(ok, || format!("n={n}, x={x}: {got:?} vs {want:?}"));
        }
        if t.done() {
            break;
        }
    }
    t.finish()
}

fn scaling(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("scaling");
    let units = some_units(field, if field.order() <= 9 { usize::MAX } else { 6 });
    for &a in &units {
        for &b in &units {
            for x in field.elements() {
                for n in 0..=30 {
                    t.check_res(check_scaling_identity(n, a, b, x), || {
                        format!("n={n}, a={a}, b={b}, x={x}")
                    });
                }
            }
        }
    }
    t.finish()
}

fn frobenius(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("frobenius", "characteristic 2");
    }
    let mut t = Tally::new("frobenius");
    let p = field.characteristic();
    for x in field.elements() {
        for n in (1..=30).filter(|n| n % p != 0) {
            for r in 1..=2 {
                t.check_res(check_frobenius_identity(n, r, x), || {
                    format!("n={n}, r={r}, x={x}")
                });
            }
        }
    }
    t.finish()
}

fn power_index(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("power_index", "characteristic 2");
    }
    let mut t = Tally::new("power_index");
    let p = field.characteristic();
    for k in 1..=field.degree() {
        for x in field.elements() {
            t.check_res(check_power_identity(k, x), || format!("k={k}, x={x}"));
        }
        let n = p.pow(k) - 1;
        let actual =
            is_pp_exhaustive(field, |x| eval_e1_recursive(n, x).expect("small index")).is_pp;
        t.check_res(
            prime_power_index_is_pp(k, field).map(|c| c == actual),
            || format!("criterion for k={k} disagrees with exhaustive ({actual})"),
        );
    }
    t.finish()
}

fn period6(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("period6");
    let seq = e1_sequence(field.one(), 601);
    for (n, &v) in seq.iter().enumerate() {
        let want = field.from_int(period6_value(n as u64) as i64);
        t.check(v == want, || {
            format!("E_{n}(1, 1) = {v}, table gives {want}")
        });
    }
    t.finish()
}

fn gcd_identity(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("gcd_identity", "characteristic 2");
    }
    let mut t = Tally::new("gcd_identity");
    let q = field.order();
    for n in (1..=10_000).step_by(4) {
        t.check_res(gcd_product_identity(n, q), || format!("n={n}, q={q}"));
    }
    t.finish()
}

fn cayley(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("cayley", "characteristic 2");
    }
    let mut t = Tally::new("cayley");
    let one = QuadElement::embed(field.one()).expect("odd characteristic");
    for theta in field.quad_elements().expect("odd characteristic") {
        if theta.is_zero() || theta == one {
            continue;
        }
        t.check_res(cayley_square_criterion(theta), || format!("theta={theta}"));
    }
    t.finish()
}

fn power_sums(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("power_sums");
    let q = field.order();
    for k in 0..=2 * (q - 1) + 1 {
        let want = if k > 0 && k % (q - 1) == 0 {
            -field.one()
        } else {
            field.zero()
        };
        let got = power_sum(field, k);
        t.check(got == want, || {
            format!("k={k}: sum is {got}, expected {want}")
        });
    }
    t.finish()
}

fn self_reciprocal(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("self_reciprocal");
    for m in 0..=50 {
        for x in field.elements().skip(1) {
            t.check_res(self_reciprocal_check(m, x), || format!("m={m}, x={x}"));
        }
    }
    t.finish()
}

fn f_integer(_field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("f_integer");
    for m in 0..=200u64 {
        let at_one = f_exact(2 * m + 2, 1);
        t.check(at_one == BigInt::from(1) << (2 * m + 1), || {
            format!("f_{}(1) = {at_one}", 2 * m + 2)
        });
        let at_minus = f_at_minus_one(m);
        t.check((at_minus == BigInt::from(0)) == (m % 2 == 1), || {
            format!("f_{}(-1) = {at_minus}", 2 * m + 2)
        });
    }
    t.finish()
}

fn v_set(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("v_set", "characteristic 2");
    }
    let mut t = Tally::new("v_set");
    let q = field.order();
    let v = build_v(field).expect("odd characteristic");
    t.check(v.len() as u64 == q, || format!("|V| = {}", v.len()));
    let half = QuadElement::embed(field.half().expect("odd")).expect("odd");
    let base = v.base_field_members();
    t.check(base == [half], || format!("V meets F_q in {base:?}"));
    let one = QuadElement::embed(field.one()).expect("odd");
    for x in field.elements() {
        let ok = match solve_parameterization(x) {
            Ok((y, y_bar)) => {
                let frob = y.pow(q as u128);
                y + y_bar == one && (y * y_bar).to_base() == Some(x) && (frob == y || frob == y_bar)
            }
            Err(_) => false,
        };
        t.check(ok, || format!("parameterization fails at x={x}"));
    }
    t.finish()
}

fn sweep_top(field: &FieldSpec) -> u64 {
    (field.order() * field.order() - 1).min(PP_SWEEP_LIMIT)
}

fn pp_criteria(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("pp_criteria");
    let v = if field.is_odd() {
        Some(build_v(field).expect("odd"))
    } else {
        None
    };
    let mut imgs = E1Images::new(field);
    for n in 0..=sweep_top(field) {
        let ex = exhaustive_from_images(field, imgs.images()).is_pp;
        let ps = power_sum_from_images(field, imgs.images()).is_pp;
        t.check(ex == ps, || {
            format!("n={n}: exhaustive {ex}, power sum {ps}")
        });
        if let Some(v) = &v {
            let res = check_two_to_one_with(n, field, v).map(|r| r.is_pp == ex);
            t.check_res(res, || format!("n={n}: exhaustive {ex}, 2-to-1 differs"));
        }
        if t.done() {
            break;
        }
        imgs.advance();
    }
    t.finish()
}

fn a0_family(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("a0_family");
    let q = field.order();
    for n in 0..=2 * q + 2 {
        let actual = is_pp_exhaustive(field, |x| eval_e_a0(n, x)).is_pp;
        let predicted = e_a0_is_pp(n, q);
        t.check(actual == predicted, || {
            format!("n={n}: exhaustive {actual}, predicted {predicted}")
        });
    }
    t.finish()
}

fn filter_soundness(field: &FieldSpec) -> SuiteResult {
    let mut t = Tally::new("filter_soundness");
    let (q, p) = (field.order(), field.characteristic());
    let mut imgs = E1Images::new(field);
    imgs.advance();
    for n in 1..=sweep_top(field) {
        if exhaustive_from_images(field, imgs.images()).is_pp {
            let report = filter_report(n, q, p);
            t.check(report.overall(), || {
                format!("n={n} permutes but fails {:?}", report)
            });
        }
        imgs.advance();
    }
    t.finish()
}

fn sum_table(field: &FieldSpec) -> SuiteResult {
    if !field.is_odd() {
        return skip("sum_table", "characteristic 2");
    }
    if field.order() > SUM_SUITE_LIMIT {
        return skip("sum_table", "field larger than the sum-table limit");
    }
    let mut t = Tally::new("sum_table");
    let closed = compute_b(field);
    let expanded = expand_b(field);
    let ok = matches!((&closed, &expanded), (Ok(b), Ok(e)) if *b == e.truncated(b.len()) && e.len() == b.len());
    t.check(ok, || "closed-form b differs from the expansion".into());
    let brute = sum_table_bruteforce(field);
    match sum_table_recurrence(field) {
        Ok(rec) => {
            for (i, (r, b)) in rec.values.iter().zip(&brute.values).enumerate() {
                t.check(r == b, || {
                    format!("S_{}: recurrence {r}, brute force {b}", i + 1)
                });
            }
        }
        Err(e) => t.check(false, || format!("recurrence table: {e}")),
    }
    match compute_c(field) {
        Ok(c) => {
            let bad = recurrence_violation(&brute, &c);
            t.check(bad.is_none(), || format!("relation violated: {bad:?}"));
        }
        Err(e) => t.check(false, || format!("c: {e}")),
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_on_small_fields() {
        for (p, e) in [(3, 1), (5, 1), (2, 2), (3, 2), (2, 3)] {
            let f = FieldSpec::new(p, e).unwrap();
            for r in run_suites(&f, None).unwrap() {
                assert!(r.passed(), "q={} {}: {:?}", f.order(), r.name, r.detail);
                if r.status == Status::Pass {
                    assert!(r.checked > 0, "{}", r.name);
                }
            }
        }
    }

    #[test]
    fn suite_filter() {
        let f = FieldSpec::new(5, 1).unwrap();
        let only = run_suites(&f, Some("frobenius")).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].name, "frobenius");
        assert!(run_suites(&f, Some("nope")).is_err());
        let names = suite_names();
        let mut sorted = names.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::new("x");
        t.check(true, || "a".into());
        t.check(false, || "b".into());
        t.check(false, || "c".into());
        let r = t.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.checked, 2);
        assert_eq!(r.detail.as_deref(), Some("b"));
    }
}
