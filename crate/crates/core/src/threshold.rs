//! Containment probabilities: `Pr[W contains an edge of H]` for `W` uniform
//! among the `s`-subsets of the vertex set.
//!
//! Estimates run in batches of [`BATCH`] trials; batch `b` draws from stream
//! `b` of the seed, so results do not depend on the number of threads. The
//! exact value comes from one of two independent routes: enumerating every
//! `s`-subset, or inclusion–exclusion over the distinct edges.
//!
//! ```
//! use spreadlab::generators::perfect_matchings;
//! use spreadlab::threshold::exact_containment;
//! use spreadlab::exact::ratio;
//! use spreadlab::Budget;
//!
//! let h = perfect_matchings(4)?;
//! assert_eq!(exact_containment(&h, 3, &Budget::default())?, ratio(12, 20));
//! # Ok::<(), spreadlab::Error>(())
//! ```

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bits;
use crate::combinadics::{for_each_in_range, split_ranges};
use crate::error::{input, Budget, Error, Result};
use crate::exact::{binomial, binomial_u128, Rational};
use crate::fragmentation::{FragmentationTrace, TraceStatus};
use crate::hypergraph::Hypergraph;
use crate::rng::{derive_seed, stream_rng, SubsetSampler};

/// Trials per RNG stream.
pub const BATCH: u64 = 4096;

/// Largest number of distinct edges handled by inclusion–exclusion.
pub const MAX_INCLUSION_EXCLUSION_EDGES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub set_size: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub confidence: f64,
    pub seed: u64,
}

impl ThresholdEstimate {
    pub fn new(set_size: usize, trials: u64, successes: u64, confidence: f64, seed: u64) -> Self {
        let (lo, hi) = wilson_interval(successes, trials, confidence);
        let p_hat = if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        };
        ThresholdEstimate {
            set_size,
            trials,
            successes,
            p_hat,
            lo,
            hi,
            confidence,
            seed,
        }
    }

    /// Binomial standard error `sqrt(p (1-p) / trials)`.
    pub fn std_err(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // keep the point estimate inside despite rounding at the ends
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Distinct edges as packed rows, smallest first.
fn distinct_rows(h: &Hypergraph) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = h
        .distinct_edge_indices()
        .into_iter()
        .map(|i| bits::from_labels(h.edge(i).as_slice(), h.words()))
        .collect();
    rows.sort_by_key(|r| bits::count(r));
    rows
}

fn contains_edge(rows: &[Vec<u64>], w: &[u64]) -> bool {
    rows.iter().any(|e| bits::is_subset(e, w))
}

fn check_size(h: &Hypergraph, set_size: usize) -> Result<()> {
    if set_size > h.n() {
        return input(format!("set size {set_size} exceeds n = {}", h.n()));
    }
    Ok(())
}

/// Monte Carlo estimate with a 95% Wilson interval.
pub fn estimate_containment(h: &Hypergraph, set_size: usize, trials: u64, seed: u64) -> Result<ThresholdEstimate> {
    estimate_containment_at(h, set_size, trials, seed, 0.95)
}

pub fn estimate_containment_at(
    h: &Hypergraph,
    set_size: usize,
    trials: u64,
    seed: u64,
    confidence: f64,
) -> Result<ThresholdEstimate> {
    check_size(h, set_size)?;
    if !(confidence > 0.0 && confidence < 1.0) {
        return input(format!("confidence {confidence} is outside (0, 1)"));
    }
    let rows = distinct_rows(h);
    let batches = trials.div_ceil(BATCH);
    let successes: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(trials - b * BATCH);
            let mut rng = stream_rng(seed, b);
            let mut sampler = SubsetSampler::new(h.n());
            let mut w = vec![0u64; h.words()];
            let mut hits = 0u64;
            for _ in 0..count {
                sampler.sample_bits(&mut rng, set_size, &mut w);
                hits += u64::from(contains_edge(&rows, &w));
            }
            hits
        })
        .sum();
    Ok(ThresholdEstimate::new(set_size, trials, successes, confidence, seed))
}

/// Exact probability by enumerating all `C(n, s)` sets.
pub fn exact_containment_enumerate(h: &Hypergraph, set_size: usize, budget: &Budget) -> Result<Rational> {
    check_size(h, set_size)?;
    let total = binomial_u128(h.n() as u64, set_size as u64);
    budget.check_enumeration("exact containment enumeration", total)?;
    let rows = distinct_rows(h);
    let words = h.words();
    let n = h.n();
    let hits: u64 = split_ranges(total, rayon::current_num_threads() * 4)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut w = vec![0u64; words];
            let mut hits = 0u64;
            for_each_in_range(n, set_size, lo, hi, |idx| {
                w.iter_mut().for_each(|x| *x = 0);
                bits::set_labels(&mut w, idx);
                hits += u64::from(contains_edge(&rows, &w));
            });
            hits
        })
        .sum();
    Ok(Rational::new(hits.into(), (total as u64).into()))
}

/// Exact probability by inclusion–exclusion over the distinct edges:
/// `sum_{T != {}} (-1)^(|T|+1) C(n - |∪T|, s - |∪T|) / C(n, s)`.
pub fn exact_containment_inclusion_exclusion(h: &Hypergraph, set_size: usize) -> Result<Rational> {
    check_size(h, set_size)?;
    let rows = distinct_rows(h);
    if rows.len() > MAX_INCLUSION_EXCLUSION_EDGES {
        return Err(Error::Resource {
            what: "inclusion-exclusion".into(),
            cost: rows.len() as u128,
            budget: MAX_INCLUSION_EXCLUSION_EDGES as u128,
        });
    }
    let n = h.n() as u64;
    let s = set_size as u64;
    // signed count of s-sets, grouped by the size u of the union
    let mut by_union = vec![0i64; h.n() + 1];
    fn walk(rows: &[Vec<u64>], start: usize, acc: &[u64], depth: usize, by_union: &mut [i64]) {
        for i in start..rows.len() {
            let next: Vec<u64> = acc.iter().zip(&rows[i]).map(|(a, b)| a | b).collect();
            let u = bits::count(&next) as usize;
            by_union[u] += if depth.is_multiple_of(2) { 1 } else { -1 };
            walk(rows, i + 1, &next, depth + 1, by_union);
        }
    }
    walk(&rows, 0, &vec![0u64; h.words()], 0, &mut by_union);
    let mut hits = num_bigint::BigInt::zero();
    for (u, &coef) in by_union.iter().enumerate() {
        if coef != 0 && (u as u64) <= s {
            hits += num_bigint::BigInt::from(coef) * num_bigint::BigInt::from(binomial(n - u as u64, s - u as u64));
        }
    }
    Ok(Rational::new(hits, binomial(n, s).into()))
}

/// Exact probability: enumeration when `C(n, s)` fits the enumeration
/// budget, else inclusion–exclusion when there are at most 20 distinct
/// edges, else a resource error.
pub fn exact_containment(h: &Hypergraph, set_size: usize, budget: &Budget) -> Result<Rational> {
    match exact_containment_enumerate(h, set_size, budget) {
        Err(Error::Resource { .. }) => exact_containment_inclusion_exclusion(h, set_size),
        other => other,
    }
}

/// One estimate per size. Size `s` uses seed `derive_seed(seed, s)`.
pub fn threshold_scan(h: &Hypergraph, sizes: &[usize], trials: u64, seed: u64) -> Result<Vec<ThresholdEstimate>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return input("scan sizes must be strictly increasing");
    }
    sizes
        .iter()
        .map(|&s| estimate_containment(h, s, trials, derive_seed(seed, s as u64)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndgameEstimate {
    pub estimate: ThresholdEstimate,
    /// The trace ended with no edges; the estimate is then zero.
    pub extinct: bool,
}

/// Estimates `Pr[W' contains an edge of H_l]` for the last hypergraph of a
/// trace and a fresh uniform `W'`.
pub fn endgame_sample(trace: &FragmentationTrace, w_prime_size: usize, trials: u64, seed: u64) -> Result<EndgameEstimate> {
    let h = &trace.final_hypergraph;
    check_size(h, w_prime_size)?;
    if trace.status == TraceStatus::Extinct || h.is_empty() {
        return Ok(EndgameEstimate {
            estimate: ThresholdEstimate::new(w_prime_size, trials, 0, 0.95, seed),
            extinct: true,
        });
    }
    Ok(EndgameEstimate {
        estimate: estimate_containment(h, w_prime_size, trials, seed)?,
        extinct: false,
    })
}

/// `true` when `values` never decreases.
pub fn is_monotone(values: &[Rational]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}
