//! The tensor product `V_m (x) V_n` of two Jordan-block modules over GF(p),
//! written in the basis `v_{i,j}` (`1 <= i <= m`, `1 <= j <= n`) on which
//! `Delta = g - 1` acts by
//!
//! ```text
//! Delta v_{i,j} = v_{i-1,j} + v_{i,j-1},    v_{0,*} = v_{*,0} = 0.
//! ```
//!
//! `Delta` lowers the anti-diagonal index `i + j` by one. Only the operator
//! is modelled; the cyclic group itself never appears.
//!
//! For `m = p + c`, `n = p + d` the module contains a cyclic summand of
//! dimension `2p - lambda_k` generated by an explicit vector `y` whose top
//! image `Delta^(2p - lambda_k - 1) y` is `f(1)` times the alternating vector
//! on the anti-diagonal `i + j = c + d + 2 - k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{binomial, is_prime, sign, Prime, Residue};
use crate::gfp::{self, FpMatrix, GfpError, JordanType};
use crate::triplesums::{f_table, Params};

/// Default cap on `m * n` for rank-based decompositions.
pub const DEFAULT_DIM_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("basis index ({i}, {j}) outside [1, {m}] x [1, {n}]")]
    OutOfRange { i: usize, j: usize, m: usize, n: usize },
    #[error("need a prime p and 1 <= c <= d < c+d <= p, got p={p}, c={c}, d={d}")]
    Inadmissible { p: u64, c: i64, d: i64 },
    #[error("dimension {dim} exceeds budget {budget}")]
    Budget { dim: usize, budget: usize },
    #[error(transparent)]
    Gfp(#[from] GfpError),
}

/// Sparse vector in `V_m (x) V_n`; no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    modulus: Prime,
    m: usize,
    n: usize,
    coeffs: BTreeMap<(usize, usize), u64>,
}

impl TensorVector {
    pub fn zero(modulus: Prime, m: usize, n: usize) -> Self {
        TensorVector {
            modulus,
            m,
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(modulus: Prime, m: usize, n: usize, i: usize, j: usize) -> Result<Self, TensorError> {
        let mut v = Self::zero(modulus, m, n);
        v.add_term(i, j, Residue::one(modulus))?;
        Ok(v)
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn add_term(&mut self, i: usize, j: usize, coeff: Residue) -> Result<(), TensorError> {
        if !(1..=self.m).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(TensorError::OutOfRange {
                i,
                j,
                m: self.m,
                n: self.n,
            });
        }
        self.accumulate(i, j, coeff.value());
        Ok(())
    }

    fn accumulate(&mut self, i: usize, j: usize, value: u64) {
        if value == 0 {
            return;
        }
        let p = self.modulus.get();
        let slot = self.coeffs.entry((i, j)).or_insert(0);
        *slot = (*slot + value) % p;
        if *slot == 0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.coeffs.get(&(i, j)).copied().unwrap_or(0), self.modulus)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Residue)> + '_ {
        self.coeffs
            .iter()
            .map(|(&pos, &v)| (pos, Residue::new(v, self.modulus)))
    }

    /// The set of `i + j` over the support.
    pub fn anti_diagonals(&self) -> BTreeSet<usize> {
        self.coeffs.keys().map(|&(i, j)| i + j).collect()
    }

    pub fn scale(&self, factor: Residue) -> TensorVector {
        let mut out = Self::zero(self.modulus, self.m, self.n);
        for (&(i, j), &v) in &self.coeffs {
            out.accumulate(i, j, (Residue::new(v, self.modulus) * factor).value());
        }
        out
    }

    /// Coordinates in the order `v_{1,1}, v_{1,2}, ..., v_{m,n}`.
    pub fn to_dense(&self) -> Vec<u64> {
        let mut out = vec![0; self.m * self.n];
        for (&(i, j), &v) in &self.coeffs {
            out[(i - 1) * self.n + (j - 1)] = v;
        }
        out
    }

    pub fn delta_apply(&self) -> TensorVector {
        let mut out = Self::zero(self.modulus, self.m, self.n);
        for (&(i, j), &v) in &self.coeffs {
            if i > 1 {
                out.accumulate(i - 1, j, v);
            }
            if j > 1 {
                out.accumulate(i, j - 1, v);
            }
        }
        out
    }

    pub fn delta_power(&self, t: usize) -> TensorVector {
        let mut v = self.clone();
        for _ in 0..t {
            if v.is_zero() {
                break;
            }
            v = v.delta_apply();
        }
        v
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((i, j), c)| match c.signed() {
                1 => format!("v_{{{i},{j}}}"),
                -1 => format!("-v_{{{i},{j}}}"),
                s => format!("{s}*v_{{{i},{j}}}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Entry `(i, j)` of the `p x p` coefficient matrix `B(c, d; p)`:
/// `B(c-i, c+d-i-j+1) * B(i+j-2, i-1)` reduced mod `p`.
pub fn coefficient_matrix_entry(c: i64, d: i64, p: Prime, i: i64, j: i64) -> Residue {
    p.reduce(&(binomial(c - i, c + d - i - j + 1) * binomial(i + j - 2, i - 1)))
}

/// One summand of the generator `y`, with its exact integer coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTerm {
    pub i: usize,
    pub j: usize,
    pub coefficient: BigInt,
}

/// The summands of `y_{c+d+1-k}` in the order they are written:
///
/// ```text
/// sum_{j=1}^{c+1-k} B(k+j-2, k-1) B(c+d-k, d+j-1) v_{p+k+j-1, p+1-j}
///   + (-1)^k sum_{j=1}^{d+1-k} B(d-j, k-1) B(c+d-k, j-1) v_{p+k+j-d-1, p+d+1-j}
/// ```
pub fn generator_terms(params: &Params) -> Vec<GeneratorTerm> {
    let (p, c, d, k) = (params.p().as_i64(), params.c(), params.d(), params.k());
    let mut terms = Vec::new();
    for j in 1..=c + 1 - k {
        terms.push(GeneratorTerm {
            i: (p + k + j - 1) as usize,
            j: (p + 1 - j) as usize,
            coefficient: binomial(k + j - 2, k - 1) * binomial(c + d - k, d + j - 1),
        });
    }
    for j in 1..=d + 1 - k {
        terms.push(GeneratorTerm {
            i: (p + k + j - d - 1) as usize,
            j: (p + d + 1 - j) as usize,
            coefficient: sign(k) * binomial(d - j, k - 1) * binomial(c + d - k, j - 1),
        });
    }
    terms
}

/// `(m, n) = (p + c, p + d)`.
pub fn product_dims(params: &Params) -> (usize, usize) {
    let p = params.p().get() as usize;
    (p + params.c() as usize, p + params.d() as usize)
}

/// `y_{c+d+1-k}` over GF(p). Coefficients that reduce to zero drop out of
/// the support; [`generator_terms`] keeps the exact values.
pub fn build_generator(params: &Params) -> TensorVector {
    let (m, n) = product_dims(params);
    let p = params.p();
    let mut y = TensorVector::zero(p, m, n);
    for t in generator_terms(params) {
        y.add_term(t.i, t.j, p.reduce(&t.coefficient))
            .expect("generator support lies inside the grid");
    }
    y
}

/// `sum_{l=1}^{c+d+1-k} (-1)^(l-1) v_{l, c+d+2-k-l}`.
pub fn alt_vector(params: &Params) -> TensorVector {
    let (m, n) = product_dims(params);
    let p = params.p();
    let s = (params.c() + params.d() + 2 - params.k()) as usize;
    let mut v = TensorVector::zero(p, m, n);
    for l in 1..=params.ell_max() as usize {
        let coeff = if l % 2 == 1 {
            Residue::one(p)
        } else {
            -Residue::one(p)
        };
        v.add_term(l, s - l, coeff).expect("alternating vector lies inside the grid");
    }
    v
}

/// Per-position comparison on the target anti-diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopCoefficient {
    pub ell: i64,
    pub j: i64,
    pub observed: u64,
    pub expected: u64,
}

/// Outcome of the generator checks for one `(p, c, d, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub params: Params,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub f1: BigInt,
    pub f1_residue: u64,
    /// `2p - lambda_k - 1`
    pub top_exponent: usize,
    pub generator_support: usize,
    pub vanished_terms: usize,
    /// Anti-diagonal holding `Delta^top y`: `c + d + 2 - k`.
    pub target_anti_diagonal: usize,
    pub top_coefficients: Vec<TopCoefficient>,
    /// (a) `Delta^top y = f(1) * alt_vector`
    pub top_matches_alt: bool,
    /// (b) `Delta^(top+1) y = 0`
    pub annihilated: bool,
    /// (c) `Delta^top y != 0`
    pub top_nonzero: bool,
    pub cyclic_dim: usize,
    pub expected_dim: usize,
    /// (d) `dim span{Delta^t y} = 2p - lambda_k`
    pub cyclic_dim_ok: bool,
    pub alt_annihilated: bool,
}

impl GeneratorReport {
    pub fn passed(&self) -> bool {
        self.top_matches_alt && self.annihilated && self.top_nonzero && self.cyclic_dim_ok && self.alt_annihilated
    }
}

pub fn check_generator(params: &Params) -> GeneratorReport {
    let p = params.p();
    let pi = p.get() as usize;
    let table = f_table(params);
    let f1 = table.value(1).clone();
    let f1_residue = table.residue(1);

    let terms = generator_terms(params);
    let y = build_generator(params);
    let top_exponent = 2 * pi - params.lambda() as usize - 1;
    let target = (params.c() + params.d() + 2 - params.k()) as usize;

    // Powers Delta^t y for t = 0..=top+1.
    let mut chain = Vec::with_capacity(top_exponent + 2);
    chain.push(y.clone());
    for _ in 0..=top_exponent {
        let next = chain.last().unwrap().delta_apply();
        chain.push(next);
    }
    let top = &chain[top_exponent];
    let after = &chain[top_exponent + 1];

    let alt = alt_vector(params);
    let expected_top = alt.scale(f1_residue);

    let top_coefficients = (1..=params.ell_max())
        .map(|l| {
            let j = target as i64 - l;
            let sign = if l % 2 == 1 { f1_residue } else { -f1_residue };
            TopCoefficient {
                ell: l,
                j,
                observed: top.coeff(l as usize, j as usize).value(),
                expected: sign.value(),
            }
        })
        .collect();

    let (m, n) = product_dims(params);
    let columns: Vec<Vec<u64>> = chain.iter().map(TensorVector::to_dense).collect();
    let cyclic_dim = FpMatrix::from_columns(p, m * n, &columns)
        .expect("dense vectors have length m*n")
        .rank();
    let expected_dim = 2 * pi - params.lambda() as usize;

    GeneratorReport {
        params: *params,
        f1,
        f1_residue: f1_residue.value(),
        top_exponent,
        generator_support: y.support_len(),
        vanished_terms: terms.len() - y.support_len(),
        target_anti_diagonal: target,
        top_coefficients,
        top_matches_alt: *top == expected_top,
        annihilated: after.is_zero(),
        top_nonzero: !top.is_zero(),
        cyclic_dim,
        expected_dim,
        cyclic_dim_ok: cyclic_dim == expected_dim,
        alt_annihilated: alt.delta_apply().is_zero(),
    }
}

/// Multiset of indecomposable summand dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecompositionSpec {
    summands: BTreeMap<usize, usize>,
}

impl DecompositionSpec {
    pub fn add(&mut self, dim: usize, multiplicity: usize) {
        if dim > 0 && multiplicity > 0 {
            *self.summands.entry(dim).or_insert(0) += multiplicity;
        }
    }

    pub fn from_jordan_type(jt: &JordanType) -> Self {
        DecompositionSpec {
            summands: jt.multiplicities(),
        }
    }

    /// `(dimension, multiplicity)`, largest dimension first.
    pub fn summands(&self) -> Vec<(usize, usize)> {
        self.summands.iter().rev().map(|(&d, &m)| (d, m)).collect()
    }

    /// Every summand dimension, repeated by multiplicity, largest first.
    pub fn dims(&self) -> Vec<usize> {
        self.summands()
            .into_iter()
            .flat_map(|(d, m)| std::iter::repeat_n(d, m))
            .collect()
    }

    pub fn multiplicity(&self, dim: usize) -> usize {
        self.summands.get(&dim).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|(d, m)| d * m).sum()
    }
}

impl fmt::Display for DecompositionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for DecompositionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Summand {
            dimension: usize,
            multiplicity: usize,
        }
        let list: Vec<Summand> = self
            .summands()
            .into_iter()
            .map(|(dimension, multiplicity)| Summand {
                dimension,
                multiplicity,
            })
            .collect();
        list.serialize(s)
    }
}

fn check_admissible(p: u64, c: i64, d: i64) -> Result<Prime, TensorError> {
    let ok = is_prime(p) && 1 <= c && c <= d && d < c + d && c + d <= p as i64;
    if !ok {
        return Err(TensorError::Inadmissible { p, c, d });
    }
    Ok(Prime::new(p).expect("checked prime"))
}

/// Closed-form decomposition of `V_{p+c} (x) V_{p+d}`:
///
/// ```text
/// (+)_k V_{2p+lambda_k}  (+)  (d-c) V_{2p}  (+)  (+)_k V_{2p-lambda_k}
///     (+)  (p-c-d) V_p  (+)  (+)_k V_{lambda_k},        lambda_k = c+d-2k+1
/// ```
pub fn decompose_closed(p: u64, c: i64, d: i64) -> Result<DecompositionSpec, TensorError> {
    check_admissible(p, c, d)?;
    let pi = p as usize;
    let mut spec = DecompositionSpec::default();
    for k in 1..=c {
        let lambda = (c + d - 2 * k + 1) as usize;
        spec.add(2 * pi + lambda, 1);
        spec.add(2 * pi - lambda, 1);
        spec.add(lambda, 1);
    }
    spec.add(2 * pi, (d - c) as usize);
    spec.add(pi, (p as i64 - c - d) as usize);
    Ok(spec)
}

/// Decomposition of `V_{p+c} (x) V_{p+d}` from the Jordan type of `Delta`.
pub fn decompose_rank(p: u64, c: i64, d: i64, dim_budget: usize) -> Result<DecompositionSpec, TensorError> {
    let prime = check_admissible(p, c, d)?;
    let (m, n) = ((p as i64 + c) as usize, (p as i64 + d) as usize);
    let jt = tensor_jordan_type(prime, m, n, dim_budget)?;
    Ok(DecompositionSpec::from_jordan_type(&jt))
}

/// Jordan type of `Delta` on `V_m (x) V_n`.
///
/// `Delta^t` maps the anti-diagonal `i + j = s` into `i + j = s - t`, so its
/// rank is the sum of the ranks of those small blocks.
pub fn tensor_jordan_type(p: Prime, m: usize, n: usize, dim_budget: usize) -> Result<JordanType, TensorError> {
    let dim = m * n;
    if dim > dim_budget {
        return Err(TensorError::Budget { dim, budget: dim_budget });
    }
    let max_power = m + n;
    let mut ranks = vec![0usize; max_power + 1];
    ranks[0] = dim;
    for s in 2..=m + n {
        let mut images: Vec<TensorVector> = (s.saturating_sub(n).max(1)..=m.min(s - 1))
            .map(|i| TensorVector::basis(p, m, n, i, s - i).expect("on grid"))
            .collect();
        for (t, rank) in ranks.iter_mut().enumerate().skip(1) {
            if s <= t + 1 {
                break;
            }
            for v in images.iter_mut() {
                *v = v.delta_apply();
            }
            let target = s - t;
            let rows: Vec<(usize, usize)> = (target.saturating_sub(n).max(1)..=m.min(target - 1))
                .map(|i| (i, target - i))
                .collect();
            let columns: Vec<Vec<u64>> = images
                .iter()
                .map(|v| rows.iter().map(|&(i, j)| v.coeff(i, j).value()).collect())
                .collect();
            *rank += FpMatrix::from_columns(p, rows.len(), &columns)?.rank();
        }
    }
    let profile = gfp::rank_profile(dim, |t| ranks.get(t).copied().unwrap_or(0))?;
    Ok(JordanType::from_rank_profile(&profile)?)
}

/// Same Jordan type computed on the full `mn`-dimensional space with the
/// generic dense routine. Cubic in `mn`; for small cross-checks.
pub fn tensor_jordan_type_dense(p: Prime, m: usize, n: usize) -> Result<JordanType, TensorError> {
    let apply = |v: &[u64]| -> Vec<u64> {
        let mut tv = TensorVector::zero(p, m, n);
        for (idx, &x) in v.iter().enumerate() {
            tv.accumulate(idx / n + 1, idx % n + 1, x);
        }
        tv.delta_apply().to_dense()
    };
    Ok(gfp::jordan_type(apply, m * n, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn params(p: u64, c: i64, d: i64, k: i64) -> Params {
        Params::new(p, c, d, k).unwrap()
    }

    fn vec_from(p: Prime, m: usize, n: usize, terms: &[(usize, usize, i64)]) -> TensorVector {
        let mut v = TensorVector::zero(p, m, n);
        for &(i, j, c) in terms {
            v.add_term(i, j, p.reduce_i64(c)).unwrap();
        }
        v
    }

    #[test]
    fn delta_basis_rule() {
        let p = prime(5);
        let v11 = TensorVector::basis(p, 7, 7, 1, 1).unwrap();
        assert!(v11.delta_apply().is_zero());
        let v22 = TensorVector::basis(p, 7, 7, 2, 2).unwrap();
        assert_eq!(v22.delta_apply(), vec_from(p, 7, 7, &[(1, 2, 1), (2, 1, 1)]));
        assert!(TensorVector::basis(p, 7, 7, 0, 1).is_err());
        assert!(TensorVector::basis(p, 7, 7, 8, 1).is_err());
    }

    #[test]
    fn delta_powers() {
        let p = prime(5);
        let v = TensorVector::basis(p, 7, 7, 4, 3).unwrap();
        assert_eq!(v.delta_power(0), v);
        assert_eq!(v.delta_power(1), v.delta_apply());
        // Delta^2 v_{4,3} = v_{2,3} + 2 v_{3,2} + v_{4,1}
        assert_eq!(v.delta_power(2), vec_from(p, 7, 7, &[(2, 3, 1), (3, 2, 2), (4, 1, 1)]));
    }

    #[test]
    fn zero_coefficients_not_stored() {
        let p = prime(3);
        let mut v = vec_from(p, 4, 4, &[(2, 2, 1)]);
        v.add_term(2, 2, p.reduce_i64(2)).unwrap();
        assert!(v.is_zero());
        assert_eq!(v.scale(Residue::zero(p)).support_len(), 0);
    }

    #[test]
    fn coefficient_matrix_entries() {
        let p = prime(5);
        // B(1, 0) * B(3, 0)
        assert_eq!(coefficient_matrix_entry(2, 2, p, 1, 4).value(), 1);
        // B(1, 2) * B(1, 0)
        assert_eq!(coefficient_matrix_entry(2, 2, p, 1, 2).value(), 0);
        // B(1, 3) vanishes
        assert_eq!(coefficient_matrix_entry(2, 2, p, 1, 1).value(), 0);
        // B(-1, 1) * B(2, 2) = -1
        assert_eq!(coefficient_matrix_entry(2, 2, p, 3, 1).value(), 4);
    }

    #[test]
    fn generator_coefficients_come_from_matrix_antidiagonal() {
        for pr in crate::triplesums::enumerate_params(13) {
            let (c, d, k, p) = (pr.c(), pr.d(), pr.k(), pr.p());
            let terms = generator_terms(&pr);
            let (first, second) = terms.split_at((c + 1 - k) as usize);
            for (idx, t) in first.iter().enumerate() {
                let j = idx as i64 + 1;
                assert_eq!(p.reduce(&t.coefficient), coefficient_matrix_entry(c, d, p, c + 2 - k - j, d + j));
            }
            // the D-type coefficients carry the opposite sign
            for (idx, t) in second.iter().enumerate() {
                let j = idx as i64 + 1;
                assert_eq!(p.reduce(&t.coefficient), -coefficient_matrix_entry(c, d, p, c + d + 2 - k - j, j));
            }
        }
    }

    #[test]
    fn generator_example() {
        let pr = params(5, 2, 2, 1);
        let y = build_generator(&pr);
        let expected = vec_from(prime(5), 7, 7, &[(6, 5, 3), (7, 4, 1), (4, 7, -1), (5, 6, -3)]);
        assert_eq!(y, expected);
        assert_eq!(y.anti_diagonals(), BTreeSet::from([11]));
        assert_eq!(y.support_len(), 4);
    }

    #[test]
    fn generator_support_on_antidiagonal() {
        for pr in crate::triplesums::enumerate_params(13) {
            let y = build_generator(&pr);
            let s = 2 * pr.p().get() as usize + pr.k() as usize;
            assert!(y.anti_diagonals().iter().all(|&a| a == s), "{pr}");
            let n_terms = generator_terms(&pr).len();
            assert_eq!(n_terms as i64, (pr.c() + 1 - pr.k()) + (pr.d() + 1 - pr.k()));
            let vanished = generator_terms(&pr)
                .iter()
                .filter(|t| pr.p().reduce(&t.coefficient).is_zero())
                .count();
            assert_eq!(y.support_len(), n_terms - vanished);
        }
    }

    #[test]
    fn alternating_vector() {
        let pr = params(5, 2, 2, 1);
        let alt = alt_vector(&pr);
        assert_eq!(alt, vec_from(prime(5), 7, 7, &[(1, 4, 1), (2, 3, -1), (3, 2, 1), (4, 1, -1)]));
        assert!(alt.delta_apply().is_zero());
        assert_eq!(alt.support_len(), pr.ell_max() as usize);
    }

    #[test]
    fn generator_check_example() {
        let pr = params(5, 2, 2, 1);
        let y = build_generator(&pr);
        let top = y.delta_power(6);
        let expected = vec_from(prime(5), 7, 7, &[(1, 4, 4), (2, 3, -4), (3, 2, 4), (4, 1, -4)]);
        assert_eq!(top, expected);
        assert!(y.delta_power(7).is_zero());
        let report = check_generator(&pr);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.f1_residue, 4);
        assert_eq!(report.cyclic_dim, 7);
        for pr in [params(5, 2, 3, 1), params(7, 3, 3, 2)] {
            assert!(check_generator(&pr).passed());
        }
    }

    #[test]
    fn closed_decompositions() {
        let spec = decompose_closed(5, 2, 2).unwrap();
        assert_eq!(spec.dims(), vec![13, 11, 9, 7, 5, 3, 1]);
        assert_eq!(spec.total_dim(), 49);
        assert_eq!(spec.multiplicity(10), 0);
        let spec = decompose_closed(5, 1, 1).unwrap();
        assert_eq!(spec.dims(), vec![11, 9, 5, 5, 5, 1]);
        assert_eq!(spec.total_dim(), 36);
        let spec = decompose_closed(7, 1, 4).unwrap();
        assert_eq!(spec.multiplicity(14), 3);
        assert!(decompose_closed(5, 3, 3).is_err());
        assert!(decompose_closed(6, 1, 1).is_err());
        assert!(decompose_closed(5, 2, 1).is_err());
    }

    #[test]
    fn rank_decompositions() {
        assert_eq!(decompose_rank(5, 2, 2, DEFAULT_DIM_BUDGET).unwrap().dims(), vec![13, 11, 9, 7, 5, 3, 1]);
        assert_eq!(
            decompose_rank(5, 1, 1, DEFAULT_DIM_BUDGET).unwrap(),
            decompose_closed(5, 1, 1).unwrap()
        );
        let small = tensor_jordan_type(prime(5), 2, 2, DEFAULT_DIM_BUDGET).unwrap();
        assert_eq!(small.blocks(), &[3, 1]);
        assert!(matches!(
            decompose_rank(5, 2, 2, 40),
            Err(TensorError::Budget { dim: 49, budget: 40 })
        ));
    }

    #[test]
    fn graded_and_dense_routes_agree() {
        for (p, m, n) in [(2, 3, 3), (3, 4, 5), (5, 2, 2), (5, 6, 7), (7, 8, 9), (3, 1, 6)] {
            let p = prime(p);
            assert_eq!(
                tensor_jordan_type(p, m, n, DEFAULT_DIM_BUDGET).unwrap(),
                tensor_jordan_type_dense(p, m, n).unwrap(),
                "p={p} m={m} n={n}"
            );
        }
    }

    #[test]
    fn display() {
        let v = vec_from(prime(5), 7, 7, &[(1, 4, 1), (2, 3, -1)]);
        assert_eq!(v.to_string(), "v_{1,4} - v_{2,3}");
        assert_eq!(TensorVector::zero(prime(5), 2, 2).to_string(), "0");
    }
}
