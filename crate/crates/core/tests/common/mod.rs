//! Reference implementations for tests. Nothing here calls into the library's
//! arithmetic: binomials come from an additive table, sums are transcribed
//! term by term.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

const N_MIN: i64 = -160;
const N_MAX: i64 = 240;
const K_MAX: i64 = 240;

/// Rows `N_MIN..=N_MAX`, columns `0..=K_MAX`, filled by Pascal's rule
/// upward and by `C(n,k) = C(n+1,k) - C(n,k-1)` for negative rows.
fn table() -> &'static Vec<Vec<BigInt>> {
    static TABLE: OnceLock<Vec<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let width = (K_MAX + 1) as usize;
        let height = (N_MAX - N_MIN + 1) as usize;
        let mut rows = vec![vec![BigInt::zero(); width]; height];
        let at = |n: i64| (n - N_MIN) as usize;
        rows[at(0)][0] = BigInt::one();
        for n in 1..=N_MAX {
            let (lo, hi) = rows.split_at_mut(at(n));
            let prev = &lo[at(n - 1)];
            let row = &mut hi[0];
            row[0] = BigInt::one();
            for k in 1..width {
                row[k] = &prev[k - 1] + &prev[k];
            }
        }
        for n in (N_MIN..0).rev() {
            let (lo, hi) = rows.split_at_mut(at(n + 1));
            let row = &mut lo[at(n)];
            let above = &hi[0];
            row[0] = BigInt::one();
            for k in 1..width {
                row[k] = &above[k] - &row[k - 1];
            }
        }
        rows
    })
}

pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    assert!((N_MIN..=N_MAX).contains(&n) && k <= K_MAX, "oracle table too small for ({n},{k})");
    table()[(n - N_MIN) as usize][k as usize].clone()
}

fn pm(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn c_sum(p: i64, c: i64, d: i64, k: i64, l: i64) -> BigInt {
    (1..=c + 1 - k)
        .map(|j| binom(k + j - 2, k - 1) * binom(c + d - k, d + j - 1) * binom(p - c - d + 2 * k - 2, k + j - 1 - l))
        .sum()
}

pub fn d_sum(p: i64, c: i64, d: i64, k: i64, l: i64) -> BigInt {
    (1..=d + 1 - k)
        .map(|j| binom(d - j, k - 1) * binom(c + d - k, j - 1) * binom(p - c - d + 2 * k - 2, p + k + j - d - 1 - l))
        .sum()
}

pub fn f_sum(p: i64, c: i64, d: i64, k: i64, l: i64) -> BigInt {
    c_sum(p, c, d, k, l) + pm(k) * d_sum(p, c, d, k, l)
}

pub fn f_row(p: i64, c: i64, d: i64, k: i64) -> Vec<BigInt> {
    (1..=c + d + 1 - k).map(|l| f_sum(p, c, d, k, l)).collect()
}

pub fn companion_f(c: i64, d: i64, k: i64, l: i64) -> BigInt {
    (0..k)
        .map(|r| pm(r) * binom(c - 1 - r, k - 1 - r) * binom(c + d - k, r) * binom(k - 1 - r, k + l - c - 1))
        .sum()
}

pub fn companion_g(c: i64, d: i64, k: i64, l: i64) -> BigInt {
    (0..k)
        .map(|r| pm(r) * binom(d - 1 - r, k - 1 - r) * binom(c + d - k, r) * binom(k - 1 - r, c - l))
        .sum()
}

/// Every admissible `(p, c, d, k)` with `p <= p_max`, by filtering the full box.
pub fn admissible(p_max: i64) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        if !(2..p).all(|q| p % q != 0) {
            continue;
        }
        for c in 0..=p {
            for d in 0..=p {
                for k in 0..=p {
                    if 1 <= k && k <= c && c <= d && d < c + d && c + d <= p {
                        out.push((p, c, d, k));
                    }
                }
            }
        }
    }
    out
}

/// `n! / (k! (n-k)!) mod p` from Legendre valuations over all primes up to `n`.
pub struct FactorOracle {
    primes: Vec<u64>,
}

impl FactorOracle {
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut m = i * i;
                while m <= limit {
                    composite[m] = true;
                    m += i;
                }
            }
        }
        FactorOracle { primes }
    }

    fn valuation(n: u64, q: u64) -> u64 {
        let mut v = 0;
        let mut power = q;
        while power <= n {
            v += n / power;
            power = match power.checked_mul(q) {
                Some(x) => x,
                None => break,
            };
        }
        v
    }

    pub fn binom_mod(&self, n: u64, k: u64, p: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64 % p;
        for &q in self.primes.iter().take_while(|&&q| q <= n) {
            let e = Self::valuation(n, q) - Self::valuation(k, q) - Self::valuation(n - k, q);
            if e == 0 {
                continue;
            }
            if q == p {
                return 0;
            }
            let mut base = q % p;
            let mut e = e;
            let mut term = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    term = term * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            acc = acc * term % p;
        }
        acc
    }
}
