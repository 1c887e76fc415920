//! Verification of the alternating congruence
//!
//! ```text
//! f(1) != 0 (mod p)   and   f(l) == (-1)^(l-1) f(1) (mod p)   for l in [1, c+d+1-k]
//! ```
//!
//! for single tuples and exhaustive sweeps, plus sweeps over the supporting
//! integer identities. Sweeps fan out over a rayon pool and always report in
//! enumeration order, so results do not depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, sign, Residue};
use crate::triplesums::{
    c_alt, c_def, c_difference_identity, d_alt, d_def, d_difference_identity, enumerate_params, f_residue_fast,
    f_table, f_table_with, negative_tail_sum, negative_tail_vanishes, Form, Params, Shape,
};

/// Default cap on the number of tuples a sweep may visit.
pub const DEFAULT_TUPLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("sweep would visit {needed} tuples, budget is {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("p_max must be at least 2, got {0}")]
    PMaxTooSmall(u64),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub jobs: usize,
    pub tuple_budget: usize,
    /// Incremented once per finished tuple.
    pub progress: Option<Arc<AtomicUsize>>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            jobs: 1,
            tuple_budget: DEFAULT_TUPLE_BUDGET,
            progress: None,
        }
    }
}

impl SweepOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        SweepOptions {
            jobs,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub params: Params,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub f1: BigInt,
    pub f1_residue: u64,
    pub nonzero_ok: bool,
    pub alternation_ok: bool,
    pub first_failure_ell: Option<i64>,
    /// `C(1) == (-1)^(k-1) B(c+d-k, k-1) B(p-1, c-k) (mod p)`
    pub closed_form_c1_ok: bool,
    /// `D(1) = 0` exactly, from the defining sum.
    pub d1_vanishes: bool,
    /// Defining and rewritten forms give the same exact `f` table.
    pub forms_agree: bool,
    /// Lucas-only residues equal the reduced exact values.
    pub fast_path_agrees: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.nonzero_ok
            && self.alternation_ok
            && self.closed_form_c1_ok
            && self.d1_vanishes
            && self.forms_agree
            && self.fast_path_agrees
    }
}

fn first_alternation_failure(residues: &[Residue]) -> Option<i64> {
    let first = residues[0];
    residues.iter().enumerate().find_map(|(idx, &r)| {
        let expected = if idx % 2 == 0 { first } else { -first };
        (r != expected).then_some(idx as i64 + 1)
    })
}

pub fn verify_theorem(params: &Params) -> TheoremReport {
    let p = params.p();
    let (c, d, k) = (params.c(), params.d(), params.k());
    let table = f_table(params);
    let first_failure_ell = first_alternation_failure(&table.residues);

    let fast: Vec<Residue> = params.ells().map(|l| f_residue_fast(params, l)).collect();
    let fast_failure = first_alternation_failure(&fast);

    let one = params.ell(1).expect("1 is always a strict index");
    let c1 = p.reduce(&c_alt(params, one));
    let c1_closed = p.reduce(&(sign(k - 1) * binomial(c + d - k, k - 1) * binomial(p.as_i64() - 1, c - k)));

    TheoremReport {
        params: *params,
        f1: table.value(1).clone(),
        f1_residue: table.residue(1).value(),
        nonzero_ok: !table.residue(1).is_zero(),
        alternation_ok: first_failure_ell.is_none(),
        first_failure_ell,
        closed_form_c1_ok: c1 == c1_closed,
        d1_vanishes: d_def(params, one).is_zero(),
        forms_agree: f_table_with(params, Form::Defining) == table,
        fast_path_agrees: fast == table.residues && fast_failure == first_failure_ell,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub p_max: u64,
    pub tuples_checked: usize,
    pub failures: Vec<TheoremReport>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn collect_params(p_max: u64, budget: usize) -> Result<Vec<Params>, SweepError> {
    if p_max < 2 {
        return Err(SweepError::PMaxTooSmall(p_max));
    }
    let needed = enumerate_params(p_max).count();
    if needed > budget {
        return Err(SweepError::Budget { needed, budget });
    }
    Ok(enumerate_params(p_max).collect())
}

/// Map `f` over `items` on a pool of `jobs` workers, keeping input order.
fn run_ordered<T, R, F>(items: &[T], opts: &SweepOptions, f: F) -> Result<Vec<R>, SweepError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let progress = opts.progress.clone();
    Ok(pool.install(|| {
        items
            .par_iter()
            .map(|item| {
                let r = f(item);
                if let Some(counter) = &progress {
                    counter.fetch_add(1, Ordering::Relaxed);
                }
                r
            })
            .collect()
    }))
}

pub fn sweep(p_max: u64, opts: &SweepOptions) -> Result<SweepSummary, SweepError> {
    let start = Instant::now();
    let params = collect_params(p_max, opts.tuple_budget)?;
    let reports = run_ordered(&params, opts, verify_theorem)?;
    let tuples_checked = reports.len();
    Ok(SweepSummary {
        p_max,
        tuples_checked,
        failures: reports.into_iter().filter(|r| !r.passed()).collect(),
        wall_time: start.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteMismatch {
    pub params: Params,
    pub ell: i64,
    /// `"C"` or `"D"`.
    pub sum: &'static str,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub defining: BigInt,
    #[serde(serialize_with = "crate::arith::serialize_decimal")]
    pub rewritten: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteSummary {
    pub p_max: u64,
    pub tuples_checked: usize,
    pub comparisons: usize,
    pub mismatches: Vec<RewriteMismatch>,
}

impl RewriteSummary {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn rewrite_mismatches(params: &Params) -> (usize, Vec<RewriteMismatch>) {
    let mut out = Vec::new();
    let mut comparisons = 0;
    for l in params.ells() {
        for (sum, defining, rewritten) in [
            ("C", c_def(params, l), c_alt(params, l)),
            ("D", d_def(params, l), d_alt(params, l)),
        ] {
            comparisons += 1;
            if defining != rewritten {
                out.push(RewriteMismatch {
                    params: *params,
                    ell: l.get(),
                    sum,
                    defining,
                    rewritten,
                });
            }
        }
    }
    (comparisons, out)
}

/// Exact equality of the defining and rewritten forms of `C` and `D` on
/// every strict index of every tuple with `p <= p_max`.
pub fn verify_rewrites(p_max: u64, opts: &SweepOptions) -> Result<RewriteSummary, SweepError> {
    let params = collect_params(p_max, opts.tuple_budget)?;
    let results = run_ordered(&params, opts, rewrite_mismatches)?;
    let comparisons = results.iter().map(|(n, _)| n).sum();
    Ok(RewriteSummary {
        p_max,
        tuples_checked: params.len(),
        comparisons,
        mismatches: results.into_iter().flat_map(|(_, m)| m).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: &'static str,
    /// Arguments in the order the identity names them.
    pub args: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityTally {
    pub identity: &'static str,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSummary {
    pub max_cd: i64,
    pub p_max: u64,
    pub tallies: Vec<IdentityTally>,
    pub failures: Vec<IdentityFailure>,
    /// Points `l` in `[1-k, -1]` where the discarded negative-index tail is
    /// nonzero. Informational; these indices never occur in the rewrite of `C`.
    pub negative_tail_nonpositive_nonzero: usize,
}

impl LemmaSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: Vec<IdentityFailure>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, args: &[i64]) {
        self.cases += 1;
        if !ok {
            self.failures.push(IdentityFailure {
                identity: self.name,
                args: args.to_vec(),
            });
        }
    }
}

/// The supporting identities on their full grids:
///
/// - `c_difference`: `1 <= k <= c <= max_cd`, `0 <= j <= c-k`
/// - `d_difference`: `1 <= k <= d <= max_cd`, `0 <= j <= k-1`
/// - `negative_tail`: tuples with `p <= p_max`, `c, d <= max_cd`, strict `l`
/// - `companion_f`, `companion_g`, `companion_cancel`: `1 <= k <= c <= d <= max_cd`, `l` in `[1, c+d-k]`
pub fn verify_lemmas(max_cd: i64, p_max: u64, opts: &SweepOptions) -> Result<LemmaSummary, SweepError> {
    let params: Vec<Params> = collect_params(p_max, opts.tuple_budget)?
        .into_iter()
        .filter(|pr| pr.c() <= max_cd && pr.d() <= max_cd)
        .collect();

    let mut c_diff = Tally::new("c_difference");
    for c in 1..=max_cd {
        for k in 1..=c {
            for j in 0..=c - k {
                c_diff.record(c_difference_identity(c, k, j) == Ok(true), &[c, k, j]);
            }
        }
    }
    let mut d_diff = Tally::new("d_difference");
    for d in 1..=max_cd {
        for k in 1..=d {
            for j in 0..k {
                d_diff.record(d_difference_identity(d, k, j) == Ok(true), &[d, k, j]);
            }
        }
    }

    let tails = run_ordered(&params, opts, |pr| {
        let strict: Vec<(i64, bool)> = (1..=pr.ell_max())
            .map(|l| (l, negative_tail_vanishes(pr, l) == Ok(true)))
            .collect();
        let nonpositive_nonzero = (1 - pr.k()..=-1)
            .filter(|&l| !negative_tail_sum(pr, l).is_zero())
            .count();
        (strict, nonpositive_nonzero)
    })?;
    let mut tail = Tally::new("negative_tail");
    let mut nonpositive_nonzero = 0;
    for (pr, (strict, nz)) in params.iter().zip(tails) {
        for (l, ok) in strict {
            tail.record(ok, &[pr.p().as_i64(), pr.c(), pr.d(), pr.k(), l]);
        }
        nonpositive_nonzero += nz;
    }

    let mut shapes = Vec::new();
    for c in 1..=max_cd {
        for d in c..=max_cd {
            for k in 1..=c {
                shapes.push(Shape::new(c, d, k).expect("enumerated shape is valid"));
            }
        }
    }
    let companion = run_ordered(&shapes, opts, |s| {
        (1..=s.ell_max())
            .map(|l| {
                let f_closed = s.companion_f_closed(l);
                let g_closed = s.companion_g_closed(l);
                let cancel = (&f_closed + sign(s.k) * &g_closed).is_zero();
                (l, s.companion_f(l) == f_closed, s.companion_g(l) == g_closed, cancel)
            })
            .collect::<Vec<_>>()
    })?;
    let mut f_t = Tally::new("companion_f");
    let mut g_t = Tally::new("companion_g");
    let mut cancel_t = Tally::new("companion_cancel");
    for (s, rows) in shapes.iter().zip(companion) {
        for (l, f_ok, g_ok, cancel_ok) in rows {
            let args = [s.c, s.d, s.k, l];
            f_t.record(f_ok, &args);
            g_t.record(g_ok, &args);
            cancel_t.record(cancel_ok, &args);
        }
    }

    let all = [c_diff, d_diff, tail, f_t, g_t, cancel_t];
    Ok(LemmaSummary {
        max_cd,
        p_max,
        tallies: all
            .iter()
            .map(|t| IdentityTally {
                identity: t.name,
                cases: t.cases,
                failures: t.failures.len(),
            })
            .collect(),
        failures: all.into_iter().flat_map(|t| t.failures).collect(),
        negative_tail_nonpositive_nonzero: nonpositive_nonzero,
    })
}
