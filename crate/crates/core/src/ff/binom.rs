//! Binomial coefficients modulo a prime via Lucas' theorem.

use super::arith::{mul_mod, pow_mod};

/// `C(n, k) mod p` as the product of digit binomials in base `p`.
///
/// Digit binomials are computed with the multiplicative formula; for repeated
/// queries against one prime use [`LucasTable`].
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = mul_mod(acc, small_binom(nd, kd, p), p);
        n /= p;
        k /= p;
    }
    acc % p
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = mul_mod(num, n - i, p);
        den = mul_mod(den, i + 1, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// Factorial tables for a fixed prime, giving `O(log_p n)` binomials.
#[derive(Debug, Clone)]
pub struct LucasTable {
    p: u64,
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

impl LucasTable {
    pub fn new(p: u64) -> Self {
        let len = p as usize;
        let mut fact = vec![1u32; len];
        for i in 1..len {
            fact[i] = mul_mod(fact[i - 1] as u64, i as u64, p) as u32;
        }
        let mut inv_fact = vec![1u32; len];
        if len > 1 {
            inv_fact[len - 1] = pow_mod(fact[len - 1] as u64, p - 2, p) as u32;
            for i in (1..len).rev() {
                inv_fact[i - 1] = mul_mod(inv_fact[i] as u64, i as u64, p) as u32;
            }
        }
        LucasTable { p, fact, inv_fact }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn binom(&self, mut n: u64, mut k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let p = self.p;
        let mut acc = 1u64;
        while k > 0 {
            let (nd, kd) = ((n % p) as usize, (k % p) as usize);
            if kd > nd {
                return 0;
            }
            let digit = mul_mod(
                self.fact[nd] as u64,
                mul_mod(self.inv_fact[kd] as u64, self.inv_fact[nd - kd] as u64, p),
                p,
            );
            acc = mul_mod(acc, digit, p);
            n /= p;
            k /= p;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(rows: usize) -> Vec<Vec<u128>> {
        let mut t = vec![vec![1u128]];
        for n in 1..rows {
            let prev = &t[n - 1];
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            t.push(row);
        }
        t
    }

    #[test]
    fn worked_values() {
        assert_eq!(binom_mod_p(5, 2, 5), 0);
        assert_eq!(binom_mod_p(4, 1, 5), 4);
        assert_eq!(binom_mod_p(7, 9, 5), 0);
        for n in 0..50 {
            assert_eq!(binom_mod_p(n, 0, 7), 1);
        }
    }

    #[test]
    fn agrees_with_exact_integers() {
        // rows past 127 overflow u128, so reduce modulo p while building instead
        for p in [2u64, 3, 5, 7, 11, 13] {
            let table = LucasTable::new(p);
            let mut row = vec![1u64];
            for n in 0..=2000u64 {
                if n > 0 {
                    let mut next = vec![1u64; n as usize + 1];
                    for k in 1..n as usize {
                        next[k] = (row[k - 1] + row[k]) % p;
                    }
                    row = next;
                }
                for k in (0..=n).step_by(1 + n as usize / 40) {
                    assert_eq!(binom_mod_p(n, k, p), row[k as usize], "C({n},{k}) mod {p}");
                    assert_eq!(table.binom(n, k), row[k as usize]);
                }
            }
        }
        let exact = pascal(60);
        for (n, row) in exact.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binom_mod_p(n as u64, k as u64, 31) as u128, c % 31);
            }
        }
    }
}
