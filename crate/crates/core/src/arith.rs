//! Exact integer arithmetic: generalized binomial coefficients, primality and
//! residues modulo a prime.
//!
//! Everything that needs an exact value goes through [`binomial`], which is
//! total on all integer pairs. [`binomial_mod`] is the fast path used by
//! sweeps; it only accepts nonnegative arguments and is checked against the
//! exact path in tests.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("binomial_mod requires nonnegative arguments, got ({n}, {k})")]
    NegativeArgument { n: i64, k: i64 },
}

/// A modulus known to be prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// The prime as a signed integer, for index arithmetic.
    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// Reduce an exact integer into `[0, p)`.
    pub fn reduce(self, value: &BigInt) -> Residue {
        let m = BigInt::from(self.0);
        let r = value.mod_floor(&m);
        Residue {
            value: r.to_u64().expect("reduced value fits in u64"),
            modulus: self,
        }
    }

    pub fn reduce_i64(self, value: i64) -> Residue {
        Residue {
            value: (value as i128).rem_euclid(self.0 as i128) as u64,
            modulus: self,
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of GF(p), stored as its representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Prime,
}

impl Residue {
    pub fn new(value: u64, modulus: Prime) -> Self {
        Residue {
            value: value % modulus.get(),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Self {
        Residue { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        Residue::new(1, modulus)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Representative in `(-p/2, p/2]`, for human-readable output only.
    pub fn signed(self) -> i64 {
        let p = self.modulus.get();
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Residue> {
        if self.is_zero() {
            return None;
        }
        let p = self.modulus.get();
        Some(Residue {
            value: pow_mod(self.value, p - 2, p),
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.modulus.get()),
            modulus: self.modulus,
        }
    }

    #[inline]
    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between residues of different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        let p = self.modulus.get() as u128;
        Residue {
            value: ((self.value as u128 + rhs.value as u128) % p) as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let p = self.modulus.get();
        Residue {
            value: (p - self.value) % p,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus.get()),
            modulus: self.modulus,
        }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `(-1)^e` as an exact integer.
pub fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Generalized binomial coefficient.
///
/// Zero for `k < 0`; otherwise the falling factorial `n(n-1)...(n-k+1)/k!`,
/// which is also defined for negative `n`. For `0 <= n < k` the product
/// contains a zero factor.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        if k > n {
            return BigInt::zero();
        }
        let k = k.min(n - k);
        return falling_over_factorial(n, k);
    }
    falling_over_factorial(n, k)
}

// Each partial product n(n-1)...(n-i)/(i+1)! is itself a binomial coefficient,
// so every division below is exact.
fn falling_over_factorial(n: i64, k: i64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient mod `p` by Lucas' theorem.
pub fn binomial_mod(n: i64, k: i64, p: Prime) -> Result<Residue, ArithError> {
    if n < 0 || k < 0 {
        return Err(ArithError::NegativeArgument { n, k });
    }
    let pm = p.get();
    let (mut n, mut k) = (n as u64, k as u64);
    let mut acc = 1u64 % pm;
    while k > 0 {
        let (nd, kd) = (n % pm, k % pm);
        if kd > nd {
            return Ok(Residue::zero(p));
        }
        acc = mul_mod(acc, small_binomial_mod(nd, kd, pm), pm);
        if acc == 0 {
            break;
        }
        n /= pm;
        k /= pm;
    }
    Ok(Residue::new(acc, p))
}

// C(n, k) mod p for 0 <= k <= n < p.
fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64 % p;
    let mut den = 1u64 % p;
    for i in 0..k {
        num = mul_mod(num, n - i, p);
        den = mul_mod(den, i + 1, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// Deterministic Miller-Rabin, correct for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for q in SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Serialize an exact integer as a decimal string.
pub fn serialize_decimal<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
