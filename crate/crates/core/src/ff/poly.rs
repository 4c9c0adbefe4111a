//! Dense polynomials over a prime field, used to pick and check moduli.

use super::arith::{mul_mod, pow_mod};

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(f: &[u64], g: &[u64], p: u64) -> Poly {
    let len = f.len().max(g.len());
    let out = (0..len)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(f: &[u64], g: &[u64], p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    trim(out)
}

pub(crate) fn rem(f: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(f.to_vec());
    let dm = degree(m).expect("modulus is nonzero");
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate().take(dm + 1) {
            r[shift + i] = (r[shift + i] + p - mul_mod(factor, c, p)) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_rem(f: &[u64], g: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(f, g, p), m, p)
}

pub(crate) fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        exp >>= 1;
    }
    rem(&acc, m, p)
}

pub(crate) fn gcd(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| {
        f.iter()
            .rev()
            .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
            == 0
    })
}

/// Ben-Or test: `f` of degree `e` is irreducible iff `gcd(f, t^{p^i} - t) = 1`
/// for every `1 <= i <= e/2`. Cubics and below only need a root check.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(e) = degree(f) else {
        return false;
    };
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if has_root(f, p) {
        return false;
    }
    if e <= 3 {
        return true;
    }
    let t = vec![0u64, 1];
    let mut frob = t.clone();
    for _ in 1..=e / 2 {
        frob = pow_rem(&frob, p, f, p);
        let g = gcd(f, &sub(&frob, &t, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        // f of degree e is reducible iff it has a monic factor of degree <= e/2
        let e = degree(f).unwrap();
        for d in 1..=e / 2 {
            let count = p.pow(d as u32);
            for low in 0..count {
                let mut g: Poly = (0..d).map(|i| (low / p.pow(i as u32)) % p).collect();
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for (p, e) in [(2u64, 4usize), (2, 5), (3, 4), (3, 2), (5, 2), (2, 6)] {
            for low in 0..p.pow(e as u32) {
                let mut f: Poly = (0..e).map(|i| (low / p.pow(i as u32)) % p).collect();
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    brute_irreducible(&f, p),
                    "{f:?} over F_{p}"
                );
            }
        }
    }

    #[test]
    fn t_squared_plus_one() {
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }
}
