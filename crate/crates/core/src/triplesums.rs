//! Sums of products of three binomials.
//!
//! For a prime `p` and integers `1 <= k <= c <= d < c + d <= p`:
//!
//! ```text
//! C(l) = sum_{j=1}^{c+1-k} B(k+j-2, k-1) B(c+d-k, d+j-1) B(p-c-d+2k-2, k+j-1-l)
//! D(l) = sum_{j=1}^{d+1-k} B(d-j, k-1)   B(c+d-k, j-1)   B(p-c-d+2k-2, p+k+j-d-1-l)
//! f(l) = C(l) + (-1)^k D(l)
//! ```
//!
//! `C` and `D` also have signed rewritten forms whose inner loops run over
//! `k` terms. Both forms are implemented separately; their agreement is a
//! test target. All sums are taken over the stated index ranges and rely on
//! [`binomial`] vanishing for a negative lower index.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, binomial_mod, is_prime, sign, ArithError, Prime, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("parameters must satisfy 1 <= k <= c <= d < c+d <= p, got p={p}, c={c}, d={d}, k={k}")]
    Inequality { p: i64, c: i64, d: i64, k: i64 },
    #[error("ell = {ell} outside [{min}, {max}]")]
    EllOutOfRange { ell: i64, min: i64, max: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A validated `(p, c, d, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Params {
    p: Prime,
    c: i64,
    d: i64,
    k: i64,
}

impl Params {
    pub fn new(p: u64, c: i64, d: i64, k: i64) -> Result<Self, ParamsError> {
        let prime = Prime::new(p)?;
        let pi = prime.as_i64();
        if !(1 <= k && k <= c && c <= d && d < c + d && c + d <= pi) {
            return Err(ParamsError::Inequality { p: pi, c, d, k });
        }
        Ok(Params { p: prime, c, d, k })
    }

    pub fn p(&self) -> Prime {
        self.p
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn k(&self) -> i64 {
        self.k
    }

    /// Upper end of the strict domain, `c + d + 1 - k`.
    pub fn ell_max(&self) -> i64 {
        self.c + self.d + 1 - self.k
    }

    /// `lambda_k = c + d - 2k + 1`.
    pub fn lambda(&self) -> i64 {
        self.c + self.d - 2 * self.k + 1
    }

    pub fn ell(&self, ell: i64) -> Result<EllIndex, ParamsError> {
        EllIndex::strict(self, ell)
    }

    /// Every strict index `1..=c+d+1-k`.
    pub fn ells(&self) -> impl Iterator<Item = EllIndex> {
        let max = self.ell_max();
        (1..=max).map(move |ell| EllIndex {
            ell,
            domain_max: max,
            mode: EllMode::Strict,
        })
    }

    fn p_i64(&self) -> i64 {
        self.p.as_i64()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, c={}, d={}, k={})", self.p, self.c, self.d, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EllMode {
    Strict,
    Exploratory,
}

/// An evaluation index `l`. Strict indices lie in `[1, c+d+1-k]`; exploratory
/// ones may be any integer and are never used for verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllIndex {
    ell: i64,
    domain_max: i64,
    mode: EllMode,
}

impl EllIndex {
    pub fn strict(params: &Params, ell: i64) -> Result<Self, ParamsError> {
        let max = params.ell_max();
        if !(1..=max).contains(&ell) {
            return Err(ParamsError::EllOutOfRange { ell, min: 1, max });
        }
        Ok(EllIndex {
            ell,
            domain_max: max,
            mode: EllMode::Strict,
        })
    }

    pub fn exploratory(params: &Params, ell: i64) -> Self {
        EllIndex {
            ell,
            domain_max: params.ell_max(),
            mode: EllMode::Exploratory,
        }
    }

    pub fn get(&self) -> i64 {
        self.ell
    }
    pub fn domain_max(&self) -> i64 {
        self.domain_max
    }
    pub fn mode(&self) -> EllMode {
        self.mode
    }
    pub fn in_domain(&self) -> bool {
        (1..=self.domain_max).contains(&self.ell)
    }
}

/// Which evaluation route to use for `C`, `D` and `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Defining,
    Rewritten,
}

pub fn c_def(params: &Params, ell: EllIndex) -> BigInt {
    let (p, c, d, k, l) = (params.p_i64(), params.c, params.d, params.k, ell.get());
    let mut acc = BigInt::zero();
    for j in 1..=c + 1 - k {
        acc += binomial(k + j - 2, k - 1)
            * binomial(c + d - k, d + j - 1)
            * binomial(p - c - d + 2 * k - 2, k + j - 1 - l);
    }
    acc
}

pub fn d_def(params: &Params, ell: EllIndex) -> BigInt {
    let (p, c, d, k, l) = (params.p_i64(), params.c, params.d, params.k, ell.get());
    let mut acc = BigInt::zero();
    for j in 1..=d + 1 - k {
        acc += binomial(d - j, k - 1)
            * binomial(c + d - k, j - 1)
            * binomial(p - c - d + 2 * k - 2, p + k + j - d - 1 - l);
    }
    acc
}

/// Signed rewritten form of `C`, `k` terms.
pub fn c_alt(params: &Params, ell: EllIndex) -> BigInt {
    let (p, c, d, k, l) = (params.p_i64(), params.c, params.d, params.k, ell.get());
    let mut acc = BigInt::zero();
    for r in 0..k {
        let term = binomial(c - 1 - r, k - 1 - r)
            * binomial(c + d - k, r)
            * binomial(p + k - r - 2, c - l - r);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Signed rewritten form of `D`, `k` terms.
pub fn d_alt(params: &Params, ell: EllIndex) -> BigInt {
    let (p, c, d, k, l) = (params.p_i64(), params.c, params.d, params.k, ell.get());
    let mut acc = BigInt::zero();
    for j in 0..k {
        let term = binomial(d - 1 - j, k - 1 - j)
            * binomial(c + d - k, j)
            * binomial(p + k - 2 - j, l + k - 2 - c - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `f = C + (-1)^k D` in the requested form.
pub fn f_eval(params: &Params, ell: EllIndex, form: Form) -> BigInt {
    let (c, d) = match form {
        Form::Defining => (c_def(params, ell), d_def(params, ell)),
        Form::Rewritten => (c_alt(params, ell), d_alt(params, ell)),
    };
    c + sign(params.k) * d
}

/// `f(l) mod p` from the rewritten forms using only Lucas binomials.
///
/// Every upper index in the rewritten forms is nonnegative for valid params,
/// so the whole evaluation stays on the fast path.
pub fn f_residue_fast(params: &Params, ell: EllIndex) -> Residue {
    let p = params.p;
    let (pi, c, d, k, l) = (params.p_i64(), params.c, params.d, params.k, ell.get());
    let bm = |n: i64, r: i64| -> Residue {
        if r < 0 {
            Residue::zero(p)
        } else {
            binomial_mod(n, r, p).expect("upper index nonnegative in rewritten forms")
        }
    };
    let mut c_sum = Residue::zero(p);
    let mut d_sum = Residue::zero(p);
    for r in 0..k {
        let ct = bm(c - 1 - r, k - 1 - r) * bm(c + d - k, r) * bm(pi + k - r - 2, c - l - r);
        let dt = bm(d - 1 - r, k - 1 - r) * bm(c + d - k, r) * bm(pi + k - 2 - r, l + k - 2 - c - r);
        if r % 2 == 0 {
            c_sum = c_sum + ct;
            d_sum = d_sum + dt;
        } else {
            c_sum = c_sum - ct;
            d_sum = d_sum - dt;
        }
    }
    if k % 2 == 0 {
        c_sum + d_sum
    } else {
        c_sum - d_sum
    }
}

/// `f(1..=c+d+1-k)` with exact values and their residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTable {
    pub params: Params,
    pub values: Vec<BigInt>,
    pub residues: Vec<Residue>,
}

impl SumTable {
    /// Value at the 1-based index `ell`.
    pub fn value(&self, ell: i64) -> &BigInt {
        &self.values[(ell - 1) as usize]
    }

    pub fn residue(&self, ell: i64) -> Residue {
        self.residues[(ell - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn f_table(params: &Params) -> SumTable {
    f_table_with(params, Form::Rewritten)
}

pub fn f_table_with(params: &Params, form: Form) -> SumTable {
    let values: Vec<BigInt> = params.ells().map(|l| f_eval(params, l, form)).collect();
    let residues = values.iter().map(|v| params.p.reduce(v)).collect();
    SumTable {
        params: *params,
        values,
        residues,
    }
}

/// The p-free triple `(c, d, k)` with `1 <= k <= c <= d`, on which the
/// companion sums `F` and `G` are defined for `l` in `[1, c+d-k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub c: i64,
    pub d: i64,
    pub k: i64,
}

impl Shape {
    pub fn new(c: i64, d: i64, k: i64) -> Result<Self, ParamsError> {
        if !(1 <= k && k <= c && c <= d) {
            return Err(ParamsError::Precondition(format!(
                "need 1 <= k <= c <= d, got c={c}, d={d}, k={k}"
            )));
        }
        Ok(Shape { c, d, k })
    }

    pub fn ell_max(&self) -> i64 {
        self.c + self.d - self.k
    }

    pub fn check_ell(&self, ell: i64) -> Result<(), ParamsError> {
        if (1..=self.ell_max()).contains(&ell) {
            Ok(())
        } else {
            Err(ParamsError::EllOutOfRange {
                ell,
                min: 1,
                max: self.ell_max(),
            })
        }
    }

    pub fn companion_f(&self, ell: i64) -> BigInt {
        let Shape { c, d, k } = *self;
        (0..k)
            .map(|r| {
                sign(r)
                    * binomial(c - 1 - r, k - 1 - r)
                    * binomial(c + d - k, r)
                    * binomial(k - 1 - r, k + ell - c - 1)
            })
            .sum()
    }

    pub fn companion_g(&self, ell: i64) -> BigInt {
        let Shape { c, d, k } = *self;
        (0..k)
            .map(|r| {
                sign(r)
                    * binomial(d - 1 - r, k - 1 - r)
                    * binomial(c + d - k, r)
                    * binomial(k - 1 - r, c - ell)
            })
            .sum()
    }

    fn closed_magnitude(&self, ell: i64) -> BigInt {
        let Shape { c, d, k } = *self;
        binomial(ell - 1, c - k) * binomial(c + d - k - ell, d - k)
    }

    /// `(-1)^(l-c) B(l-1, c-k) B(c+d-k-l, d-k)`.
    pub fn companion_f_closed(&self, ell: i64) -> BigInt {
        sign(ell - self.c) * self.closed_magnitude(ell)
    }

    /// `(-1)^(l+k-c-1) B(l-1, c-k) B(c+d-k-l, d-k)`.
    pub fn companion_g_closed(&self, ell: i64) -> BigInt {
        sign(ell + self.k - self.c - 1) * self.closed_magnitude(ell)
    }
}

/// `B(c-1, k-1) - B(k-1+j, k-1) == sum_{r=1}^{k-1} (-1)^(r-1) B(c-k-j, r) B(c-1-r, k-1-r)`
/// for `1 <= k <= c`, `0 <= j <= c-k`.
pub fn c_difference_identity(c: i64, k: i64, j: i64) -> Result<bool, ParamsError> {
    if !(1 <= k && k <= c && 0 <= j && j <= c - k) {
        return Err(ParamsError::Precondition(format!(
            "need 1 <= k <= c and 0 <= j <= c-k, got c={c}, k={k}, j={j}"
        )));
    }
    let lhs = binomial(c - 1, k - 1) - binomial(k - 1 + j, k - 1);
    let rhs: BigInt = (1..k)
        .map(|r| sign(r - 1) * binomial(c - k - j, r) * binomial(c - 1 - r, k - 1 - r))
        .sum();
    Ok(lhs == rhs)
}

/// `B(d-1, k-1) - B(d-1-j, k-1) == sum_{r=1}^{k-1} (-1)^(r-1) B(d-1-r, k-1-r) B(j, r)`
/// for `1 <= k <= d`, `0 <= j <= k-1`.
pub fn d_difference_identity(d: i64, k: i64, j: i64) -> Result<bool, ParamsError> {
    if !(1 <= k && k <= d && 0 <= j && j < k) {
        return Err(ParamsError::Precondition(format!(
            "need 1 <= k <= d and 0 <= j <= k-1, got d={d}, k={k}, j={j}"
        )));
    }
    let lhs = binomial(d - 1, k - 1) - binomial(d - 1 - j, k - 1);
    let rhs: BigInt = (1..k)
        .map(|r| sign(r - 1) * binomial(d - 1 - r, k - 1 - r) * binomial(j, r))
        .sum();
    Ok(lhs == rhs)
}

/// The double sum
///
/// ```text
/// sum_{r=0}^{k-1} (-1)^(r+1) B(c-1-r, k-1-r) B(c+d-k, r)
///     * sum_{j=l-k}^{-1} B(c+d-k-r, c-k-j-r) B(p-c-d+2k-2, k+j-l)
/// ```
///
/// that is discarded when `C` is rewritten. Defined for every integer `l`.
pub fn negative_tail_sum(params: &Params, ell: i64) -> BigInt {
    let (p, c, d, k) = (params.p_i64(), params.c, params.d, params.k);
    let mut total = BigInt::zero();
    for r in 0..k {
        let inner: BigInt = (ell - k..=-1)
            .map(|j| binomial(c + d - k - r, c - k - j - r) * binomial(p - c - d + 2 * k - 2, k + j - ell))
            .sum();
        total += sign(r + 1) * binomial(c - 1 - r, k - 1 - r) * binomial(c + d - k, r) * inner;
    }
    total
}

/// Whether [`negative_tail_sum`] vanishes at a strict index `l`.
///
/// The inner index then ranges over `[l-k, -1]`, a subset of `[1-k, -1]`,
/// where every `B(-j-1, k-1)` is zero. The sum is nonzero for many
/// `l <= 0` (e.g. `(7,3,3,2)` at `l = -1` gives 14), so nonpositive `l` is
/// rejected rather than reported. Vacuously true for `k = 1`.
pub fn negative_tail_vanishes(params: &Params, ell: i64) -> Result<bool, ParamsError> {
    if params.k == 1 {
        return Ok(true);
    }
    let max = params.ell_max();
    if !(1..=max).contains(&ell) {
        return Err(ParamsError::EllOutOfRange { ell, min: 1, max });
    }
    Ok(negative_tail_sum(params, ell).is_zero())
}

/// Every admissible `(p, c, d, k)` with `p <= p_max`, in lexicographic order.
pub fn enumerate_params(p_max: u64) -> impl Iterator<Item = Params> {
    (2..=p_max).filter(|&p| is_prime(p)).flat_map(|p| {
        let pi = p as i64;
        (1..=pi / 2).flat_map(move |c| {
            (c..=pi - c).flat_map(move |d| {
                (1..=c).map(move |k| Params::new(p, c, d, k).expect("enumerated params are admissible"))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, c: i64, d: i64, k: i64) -> Params {
        Params::new(p, c, d, k).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(5, 2, 2, 1).is_ok());
        assert!(Params::new(2, 1, 1, 1).is_ok());
        assert!(matches!(Params::new(6, 2, 2, 1), Err(ParamsError::Arith(_))));
        assert!(matches!(Params::new(5, 3, 2, 1), Err(ParamsError::Inequality { .. })));
        assert!(matches!(Params::new(5, 2, 4, 1), Err(ParamsError::Inequality { .. })));
        assert!(matches!(Params::new(5, 2, 2, 3), Err(ParamsError::Inequality { .. })));
        assert!(matches!(Params::new(5, 2, 2, 0), Err(ParamsError::Inequality { .. })));
    }

    #[test]
    fn ell_index_modes() {
        let pr = params(5, 2, 2, 1);
        assert!(pr.ell(0).is_err());
        assert!(pr.ell(5).is_err());
        assert!(pr.ell(4).is_ok());
        let e = EllIndex::exploratory(&pr, 9);
        assert_eq!(e.mode(), EllMode::Exploratory);
        assert!(!e.in_domain());
        assert_eq!(pr.ells().count(), 4);
    }

    #[test]
    fn c_values() {
        let a = params(5, 2, 2, 1);
        assert_eq!(c_def(&a, a.ell(1).unwrap()), BigInt::from(4));
        assert_eq!(c_def(&a, a.ell(4).unwrap()), BigInt::zero());
        assert_eq!(c_alt(&a, a.ell(1).unwrap()), BigInt::from(4));
        let b = params(5, 2, 3, 1);
        assert_eq!(c_def(&b, b.ell(2).unwrap()), BigInt::from(1));
        assert_eq!(c_alt(&b, b.ell(3).unwrap()), BigInt::zero());
    }

    #[test]
    fn d_values() {
        let a = params(5, 2, 2, 1);
        assert_eq!(d_def(&a, a.ell(1).unwrap()), BigInt::zero());
        let b = params(5, 2, 3, 1);
        assert_eq!(d_def(&b, b.ell(4).unwrap()), BigInt::from(4));
        assert_eq!(d_def(&b, b.ell(5).unwrap()), BigInt::from(6));
        assert_eq!(d_alt(&b, b.ell(3).unwrap()), BigInt::from(1));
        assert_eq!(d_alt(&b, b.ell(1).unwrap()), BigInt::zero());
    }

    #[test]
    fn f_tables() {
        let a = params(5, 2, 2, 1);
        assert_eq!(f_eval(&a, a.ell(1).unwrap(), Form::Defining), BigInt::from(4));
        let t = f_table(&a);
        assert_eq!(t.values, ints(&[4, 1, -1, -4]));
        assert_eq!(t.residues.iter().map(|r| r.value()).collect::<Vec<_>>(), vec![4, 1, 4, 1]);
        let b = params(5, 2, 3, 1);
        let t = f_table(&b);
        assert_eq!(t.values, ints(&[4, 1, -1, -4, -6]));
        assert_eq!(t.residue(5).value(), 4);
        assert_eq!(f_table_with(&b, Form::Defining), t);
    }

    #[test]
    fn fast_residues_match_exact() {
        for pr in enumerate_params(13) {
            let t = f_table(&pr);
            for l in pr.ells() {
                assert_eq!(f_residue_fast(&pr, l), t.residue(l.get()), "{pr} l={}", l.get());
            }
        }
    }

    #[test]
    fn exploratory_evaluation_is_defined() {
        let a = params(5, 2, 2, 1);
        let e = EllIndex::exploratory(&a, 7);
        assert_eq!(c_def(&a, e), BigInt::zero());
        let _ = f_eval(&a, EllIndex::exploratory(&a, -3), Form::Defining);
    }

    #[test]
    fn companion_sums() {
        let s = Shape::new(2, 2, 1).unwrap();
        assert_eq!(s.companion_f(1), BigInt::zero());
        assert_eq!(s.companion_f_closed(2), BigInt::from(1));
        assert_eq!(s.companion_f(2), BigInt::from(1));
        let s = Shape::new(2, 3, 2).unwrap();
        assert_eq!(s.companion_f(2), BigInt::from(1));
        assert_eq!(s.companion_g(2), BigInt::from(-1));
        assert_eq!(s.companion_g_closed(2), BigInt::from(-1));
        assert!((s.companion_f_closed(2) + sign(s.k) * s.companion_g_closed(2)).is_zero());
        assert!(Shape::new(3, 2, 1).is_err());
        assert!(s.check_ell(0).is_err());
        assert!(s.check_ell(3).is_ok());
    }

    #[test]
    fn difference_identities() {
        assert_eq!(c_difference_identity(2, 1, 0), Ok(true));
        assert_eq!(c_difference_identity(5, 3, 1), Ok(true));
        assert_eq!(c_difference_identity(6, 4, 2), Ok(true));
        assert!(c_difference_identity(5, 3, 3).is_err());
        assert!(c_difference_identity(2, 3, 0).is_err());
        assert_eq!(d_difference_identity(3, 1, 0), Ok(true));
        assert_eq!(d_difference_identity(5, 3, 2), Ok(true));
        assert_eq!(d_difference_identity(7, 4, 3), Ok(true));
        assert!(d_difference_identity(7, 4, 4).is_err());
        assert!(d_difference_identity(3, 0, 0).is_err());
    }

    #[test]
    fn negative_tail() {
        assert_eq!(negative_tail_vanishes(&params(5, 2, 2, 1), 0), Ok(true));
        assert_eq!(negative_tail_vanishes(&params(7, 3, 3, 2), 1), Ok(true));
        assert_eq!(negative_tail_vanishes(&params(11, 4, 5, 3), 1), Ok(true));
        assert_eq!(negative_tail_vanishes(&params(11, 4, 5, 3), 2), Ok(true));
        assert!(negative_tail_vanishes(&params(7, 3, 3, 2), -1).is_err());
        assert!(negative_tail_vanishes(&params(7, 3, 3, 2), 0).is_err());
        // nonempty inner range, nonzero terms, zero total
        let pr = params(11, 4, 5, 3);
        let inner_terms: Vec<BigInt> = (1 - 3..=-1)
            .map(|j| binomial(4 + 5 - 3, 4 - 3 - j) * binomial(11 - 9 + 4, 3 + j - 1))
            .collect();
        assert!(inner_terms.iter().any(|t| !t.is_zero()));
        assert!(negative_tail_sum(&pr, 1).is_zero());
        // at nonpositive l the sum does not vanish in general
        assert_eq!(negative_tail_sum(&params(7, 3, 3, 2), -1), BigInt::from(14));
        assert_eq!(negative_tail_sum(&params(11, 4, 5, 3), -2), BigInt::from(-339));
    }

    #[test]
    fn enumeration() {
        let two: Vec<Params> = enumerate_params(2).collect();
        assert_eq!(two, vec![params(2, 1, 1, 1)]);
        let three: Vec<Params> = enumerate_params(3).collect();
        assert!(three.contains(&params(3, 1, 1, 1)));
        assert!(three.contains(&params(3, 1, 2, 1)));
        assert_eq!(three.len(), 3);
        let all: Vec<Params> = enumerate_params(23).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }
}
