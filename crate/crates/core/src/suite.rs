//! Acceptance checks over fixed, seeded desk-scale instances.
//!
//! Each check returns a [`CriterionReport`]. The `Full` profile runs the
//! stated population sizes and trial counts; `Quick` shrinks them for smoke
//! runs.

use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::badpairs::{count_bad_pairs, expected_s, expected_s_oracle, BadPairParams};
use crate::error::{Budget, Error, Result};
use crate::exact::{format_rational, from_int, ratio, to_f64, Rational};
use crate::fragmentation::{
    audit_trace, check_m_monotone, check_spread_preservation, run_fragmentation, FragmentationConfig,
    PreservationVerdict,
};
use crate::generators::{
    complete_uniform, copies_of, graph, hamilton_cycles, perfect_matchings, random_hypergraph,
};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rng::derive_seed;
use crate::spread::{
    certify_q_spread, certify_tiered, min_q_spread, min_q_tiered, vertex_bound_holds, with_trailing_one,
    CertOptions, SpreadProfile,
};
use crate::threshold::{estimate_containment, exact_containment, is_monotone, threshold_scan};

/// Denominator used to round irrational minimal spreads up to a rational.
const ROUNDING: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(Error::Input(format!("unknown profile {other:?} (quick, full)"))),
        }
    }
}

impl Profile {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Profile::Quick => quick,
            Profile::Full => full,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    /// Passed only because no instance met the hypotheses.
    pub vacuous: bool,
    /// Number of individual checks performed.
    pub checked: u64,
    pub failures: u64,
    pub detail: String,
    pub elapsed_ms: u128,
}

/// Ids and titles of the checks run by [`run_criterion`].
pub const CRITERIA: &[(u32, &str)] = &[
    (1, "tiered spread implies q-spread"),
    (2, "q-spread implies tiered spread at 4q"),
    (3, "edge size is at most e q n"),
    (4, "bad pair counts"),
    (5, "expected count identity"),
    (6, "fragmentation invariants"),
    (7, "round failure frequency"),
    (8, "Monte Carlo calibration"),
    (9, "monotonicity in set size"),
];

/// Wall-clock limit in seconds, where one applies.
fn time_limit(id: u32) -> Option<u128> {
    match id {
        1 | 2 => Some(120),
        4 => Some(600),
        6 => Some(300),
        _ => None,
    }
}

struct Tally {
    checked: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    fn summary(&self, extra: &str) -> String {
        let mut s = format!("{} checks, {} failures", self.checked, self.failures.len());
        if !extra.is_empty() {
            s.push_str("; ");
            s.push_str(extra);
        }
        for f in self.failures.iter().take(3) {
            s.push_str("; ");
            s.push_str(f);
        }
        s
    }
}

struct Outcome {
    tally: Tally,
    vacuous: bool,
    note: String,
}

impl From<Tally> for Outcome {
    fn from(tally: Tally) -> Outcome {
        Outcome {
            tally,
            vacuous: false,
            note: String::new(),
        }
    }
}

/// Runs one check.
pub fn run_criterion(id: u32, profile: Profile) -> Result<CriterionReport> {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Input(format!("no criterion {id}")))?;
    let start = Instant::now();
    let out = match id {
        1 => tiered_implies_plain(profile)?.into(),
        2 => plain_implies_tiered(profile)?.into(),
        3 => vertex_bound(profile)?.into(),
        4 => bad_pairs()?,
        5 => expectation_identity(profile)?.into(),
        6 => fragmentation_invariants(profile)?.into(),
        7 => round_failures(profile)?,
        8 => calibration(profile)?,
        9 => monotonicity(profile)?,
        _ => unreachable!(),
    };
    let elapsed_ms = start.elapsed().as_millis();
    let in_time = time_limit(id).is_none_or(|s| elapsed_ms <= s * 1000);
    let mut detail = out.tally.summary(&out.note);
    if !in_time {
        detail.push_str(&format!("; exceeded {} s", time_limit(id).unwrap()));
    }
    Ok(CriterionReport {
        id,
        title,
        passed: out.tally.failures.is_empty() && in_time,
        vacuous: out.vacuous,
        checked: out.tally.checked,
        failures: out.tally.failures.len() as u64,
        detail,
        elapsed_ms,
    })
}

/// Runs every check in order.
pub fn run_suite(profile: Profile) -> Result<Vec<CriterionReport>> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, profile)).collect()
}

/// Seeded random hypergraphs with `n <= 10` and edges of size at most 5.
/// Every fourth one mixes two edge sizes.
pub fn random_population(count: usize) -> Result<Vec<Hypergraph>> {
    (0..count as u64)
        .map(|i| {
            let seed = derive_seed(0x5eed, i);
            let n = 4 + (i % 7) as usize;
            let r = 1 + (i / 7 % 5) as usize;
            let r = r.min(n - 1);
            let m = 2 + (seed % 11) as usize;
            let h = random_hypergraph(n, r, m, seed)?;
            if i % 4 != 3 || r == 1 {
                return Ok(h);
            }
            let extra = random_hypergraph(n, r - 1, 1 + (seed >> 8) as usize % 5, derive_seed(seed, 1))?;
            let edges = h.edges().iter().chain(extra.edges()).cloned().collect();
            Ok(Hypergraph::from_sets(n, edges)?.with_name(format!("mixed({n},{r},{seed})")))
        })
        .collect()
}

fn name(h: &Hypergraph) -> String {
    h.name().unwrap_or("H").to_string()
}

fn exact_opts() -> CertOptions {
    CertOptions::default()
}

/// Strictly decreasing sequences `(a, 1)` and `(a, b, 1)` with `a` from
/// `max(r_max, 2)` to 5.
fn sequences_ending_in_one(r_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in r_max.max(2)..=5 {
        out.push(vec![a, 1]);
        for b in 2..a {
            out.push(vec![a, b, 1]);
        }
    }
    out
}

fn tiered_implies_plain(profile: Profile) -> Result<Tally> {
    let population = random_population(profile.pick(60, 200))?;
    let grid = [ratio(1, 5), ratio(1, 3), ratio(1, 2), ratio(2, 3), Rational::one()];
    let tallies = population
        .par_iter()
        .map(|h| -> Result<Tally> {
            let mut t = Tally::new();
            let budget = Budget::default();
            for seq in sequences_ending_in_one(h.max_edge_size()) {
                let min = min_q_tiered(h, &seq, &budget)?;
                let mut qs = grid.to_vec();
                qs.push(min.rational_at_least(ROUNDING));
                for q in qs {
                    let profile = SpreadProfile::tiered(q.clone(), seq.clone())?;
                    let tiered = certify_tiered(h, &profile, &exact_opts())?;
                    if !tiered.passed() {
                        continue;
                    }
                    let plain = certify_q_spread(h, &q, &exact_opts())?;
                    t.check(plain.passed(), || {
                        format!("{} {seq:?} q={}", name(h), format_rational(&q))
                    });
                }
                // the rounded minimum must itself certify
                let q = min.rational_at_least(ROUNDING);
                let profile = SpreadProfile::tiered(q.clone(), seq.clone())?;
                t.check(certify_tiered(h, &profile, &exact_opts())?.passed(), || {
                    format!("{} {seq:?} fails at its minimum", name(h))
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(tallies))
}

fn merge(tallies: Vec<Tally>) -> Tally {
    tallies.into_iter().fold(Tally::new(), |mut a, t| {
        a.merge(t);
        a
    })
}

/// Sequences starting at `r1` of length 2 or 3 with
/// `ceil(r_i/2) <= r_{i+1} < r_i`.
fn halving_sequences(r1: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for b in r1.div_ceil(2)..r1 {
        if b == 0 {
            continue;
        }
        out.push(vec![r1, b]);
        for c in b.div_ceil(2)..b {
            out.push(vec![r1, b, c]);
        }
    }
    out
}

fn plain_implies_tiered(profile: Profile) -> Result<Tally> {
    let population = random_population(profile.pick(60, 200))?;
    let tallies = population
        .par_iter()
        .map(|h| -> Result<Tally> {
            let mut t = Tally::new();
            let q = min_q_spread(h, &Budget::default())?.rational_at_least(ROUNDING);
            let plain = certify_q_spread(h, &q, &exact_opts())?;
            t.check(plain.passed(), || format!("{} fails at its minimum q", name(h)));
            let q4 = (&q * from_int(4)).min(Rational::one());
            for seq in halving_sequences(h.max_edge_size()) {
                let profile = SpreadProfile::tiered(q4.clone(), seq.clone())?;
                t.check(certify_tiered(h, &profile, &exact_opts())?.passed(), || {
                    format!("{} {seq:?} fails at 4q={}", name(h), format_rational(&q4))
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(tallies))
}

fn named_uniform_instances() -> Result<Vec<Hypergraph>> {
    let mut out = Vec::new();
    for n in 2..=10 {
        for r in 1..n.min(6) {
            out.push(complete_uniform(n, r)?);
        }
    }
    out.push(perfect_matchings(4)?);
    out.push(perfect_matchings(6)?);
    out.push(hamilton_cycles(5)?);
    out.push(hamilton_cycles(6)?);
    Ok(out)
}

fn vertex_bound(profile: Profile) -> Result<Tally> {
    let mut instances = named_uniform_instances()?;
    instances.extend(random_population(profile.pick(60, 200))?);
    instances.retain(|h| h.uniformity().is_ok_and(|u| u.is_uniform()));
    let budget = Budget::default();
    let mut t = Tally::new();
    for h in &instances {
        let r = h.max_edge_size();
        let min = min_q_spread(h, &budget)?;
        t.check(vertex_bound_holds(r, &min.value, h.n()), || {
            format!("{}: r={r} above e q n at q={:.6}", name(h), min.to_f64())
        });
        if let Some(lower) = min.value.rational_lower(ROUNDING).filter(|q| q.is_positive()) {
            t.check(certify_q_spread(h, &lower, &exact_opts())?.failed(), || {
                format!("{}: still q-spread below its minimum", name(h))
            });
        }
        if r >= 2 {
            let tiered = min_q_tiered(h, &[r, 1], &budget)?;
            t.check(vertex_bound_holds(r, &tiered.value, h.n()), || {
                format!("{}: tiered minimum {:.6} below r/(e n)", name(h), tiered.to_f64())
            });
        }
    }
    Ok(t)
}

fn triangle_copies() -> Result<Hypergraph> {
    let triangle = graph(3, &[(0, 1), (1, 2), (0, 2)])?.with_name("triangle");
    copies_of(&triangle, 6, &Budget::default())
}

/// The fixed bad-pair suite.
pub fn bad_pair_suite() -> Result<Vec<Hypergraph>> {
    Ok(vec![
        complete_uniform(6, 2)?.with_name("K6 edges"),
        complete_uniform(7, 2)?.with_name("K7 edges"),
        perfect_matchings(6)?,
        triangle_copies()?,
    ])
}

/// `(q; r, k)`-spread certification, `None` when `k >= r` leaves no level
/// pair to check.
fn certified_rk(h: &Hypergraph, q: &Rational, r: usize, k: usize) -> Result<Option<bool>> {
    if k >= r {
        return Ok(None);
    }
    let profile = SpreadProfile::tiered(q.clone(), vec![r, k])?;
    Ok(Some(certify_tiered(h, &profile, &exact_opts())?.passed()))
}

fn bad_pairs() -> Result<Outcome> {
    let budget = Budget::default();
    let mut t = Tally::new();
    let (mut points, mut gated, mut extended, mut under_bound) = (0u64, 0u64, 0u64, 0u64);
    for h in bad_pair_suite()? {
        let (n, r) = (h.n(), h.max_edge_size());
        for c in [4u64, 8] {
            let c_r = from_int(c);
            for k in [1usize, 2] {
                for pn in 2 * r..=n {
                    let p = ratio(pn as u64, n as u64);
                    let in_grid = p <= ratio(1, 2);
                    // outside the grid, p is capped at 1/2 so the counting
                    // routine accepts the point; only the unconditional
                    // per-t claim is asserted there
                    let q = p.min(ratio(1, 2)) / &c_r;
                    let params = BadPairParams {
                        c: c_r.clone(),
                        q: q.clone(),
                        k,
                        pn,
                    };
                    let report = count_bad_pairs(&h, &params, &budget)?;
                    let label = || format!("{} C={c} k={k} pn={pn}", name(&h));
                    for s in &report.per_t {
                        t.check(s.non_pathological_within, || format!("{} t={}: non-pathological claim", label(), s.t));
                    }
                    if !in_grid {
                        extended += 1;
                        continue;
                    }
                    points += 1;
                    if report.within_bound {
                        under_bound += 1;
                    }
                    if certified_rk(&h, &q, r, k)? != Some(true) {
                        continue;
                    }
                    gated += 1;
                    t.check(report.within_bound, || format!("{}: total above bound", label()));
                    for s in &report.per_t {
                        t.check(s.pathological_within, || format!("{} t={}: pathological claim", label(), s.t));
                    }
                }
            }
        }
    }
    Ok(Outcome {
        tally: t,
        vacuous: gated == 0,
        note: format!(
            "{points} grid points, {gated} certified at q = p/C, {under_bound} under the total bound anyway, {extended} extra points with p > 1/2"
        ),
    })
}

fn expectation_identity(profile: Profile) -> Result<Tally> {
    let budget = Budget::default();
    let mut t = Tally::new();
    let k6 = complete_uniform(6, 2)?;
    let s = VertexSet::new(vec![0, 1]);
    let v = expected_s(&k6, &s, 2, 0)?;
    t.check(v == from_int(6), || format!("K6 w=2 gives {v}, expected 6"));
    t.check(expected_s_oracle(&k6, &s, 2, 0, &budget)? == v, || "K6 oracle differs".into());

    let mut instances = vec![k6, complete_uniform(7, 3)?, perfect_matchings(6)?, triangle_copies()?];
    for i in 0..profile.pick(12u64, 30) {
        let seed = derive_seed(0xe4, i);
        let n = 5 + (i % 8) as usize;
        let r = 1 + (seed % 4) as usize % (n / 2);
        instances.push(random_hypergraph(n, r.max(1), 3 + (seed >> 4) as usize % 15, seed)?);
    }
    for h in &instances {
        let r = h.max_edge_size();
        for (e, s) in h.edges().iter().enumerate().take(2) {
            for w in [0, 1, (h.n() - r) / 2, h.n() - r] {
                for k in [0, 1, r] {
                    let fast = expected_s(h, s, w, k)?;
                    let slow = expected_s_oracle(h, s, w, k, &budget)?;
                    t.check(fast == slow, || {
                        format!("{} edge {e} w={w} k={k}: {fast} vs {slow}", name(h))
                    });
                }
            }
        }
    }
    Ok(t)
}

/// Instances for the fragmentation checks with their r-sequences.
fn fragmentation_instances() -> Result<Vec<(Hypergraph, Vec<usize>)>> {
    Ok(vec![
        (complete_uniform(6, 2)?, vec![2, 1]),
        (complete_uniform(7, 3)?, vec![3, 1]),
        (complete_uniform(7, 3)?, vec![3, 2, 1]),
        (complete_uniform(8, 4)?, vec![4, 2, 1]),
        (complete_uniform(9, 3)?, vec![3, 2]),
        (random_hypergraph(10, 4, 30, 7)?, vec![4, 2, 1]),
        (random_hypergraph(9, 3, 20, 11)?, vec![3, 1]),
        (hamilton_cycles(5)?, vec![5, 2, 1]),
        (perfect_matchings(6)?, vec![3, 1]),
    ])
}

fn fragmentation_invariants(profile: Profile) -> Result<Tally> {
    let seeds = profile.pick(8u64, 32);
    let mut jobs = Vec::new();
    for (h, seq) in fragmentation_instances()? {
        let budget = Budget::default();
        let q = min_q_tiered(&h, &with_trailing_one(&seq), &budget)?.rational_at_least(ROUNDING);
        for p in [ratio(1, 2), ratio(1, 4)] {
            let c = &p / &q;
            for s in 0..seeds {
                jobs.push((h.clone(), seq.clone(), q.clone(), c.clone(), derive_seed(0xf4a9, s)));
            }
        }
    }
    let tallies = jobs
        .par_iter()
        .map(|(h, seq, q, c, seed)| -> Result<Tally> {
            let mut t = Tally::new();
            let config = FragmentationConfig::new(seq.clone(), q.clone(), c.clone(), *seed)?;
            let trace = run_fragmentation(h, &config)?;
            let label = || format!("{} {seq:?} seed {seed}", name(h));
            let audit = audit_trace(h, &trace);
            t.check(audit.ok(), || format!("{}: {}", label(), audit.problems.join(", ")));
            if h.n() <= 10 {
                for i in 2..=trace.rounds.len() + 1 {
                    let Some(h_i) = trace.hypergraph(i) else { break };
                    t.check(check_m_monotone(h, &h_i, &Budget::default())?.is_none(), || {
                        format!("{}: H_{i} not dominated", label())
                    });
                }
            }
            for round in check_spread_preservation(h, &trace, q, seq, &exact_opts())? {
                if round.verdict == PreservationVerdict::NotApplicable {
                    continue;
                }
                t.check(round.verdict == PreservationVerdict::Pass, || {
                    format!("{}: H_{} not spread at 2q", label(), round.index)
                });
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(tallies))
}

fn round_failures(profile: Profile) -> Result<Outcome> {
    let h = complete_uniform(10, 3)?;
    let seq = vec![3, 1];
    let l = seq.len() as f64;
    let c = 8.0f64;
    let q = min_q_spread(&h, &Budget::default())?.rational_at_least(ROUNDING);
    let bound = 6.0 * l * (c / 4.0).powf(-0.5);
    let mut t = Tally::new();
    if bound >= 1.0 {
        return Ok(Outcome {
            tally: t,
            vacuous: true,
            note: format!(
                "failure bound 6l(C/4)^(-1/2) = {bound:.4} at q = {}, p = Cq = {:.2}; vacuous",
                format_rational(&q),
                c * to_f64(&q)
            ),
        });
    }
    let runs = profile.pick(500u64, 2000);
    let config = FragmentationConfig::new(seq, q, from_int(c as u64), 0)?;
    let failures = (0..runs)
        .into_par_iter()
        .map(|s| -> Result<u64> {
            let trace = run_fragmentation(&h, &config.with_seed(derive_seed(0xc28, s)))?;
            Ok(trace.rounds.iter().filter(|r| !r.successful).count() as u64)
        })
        .sum::<Result<u64>>()?;
    let freq = failures as f64 / runs as f64;
    let se = (bound * (1.0 - bound) / runs as f64).sqrt();
    t.check(freq <= bound + 3.0 * se, || format!("frequency {freq:.4} above {bound:.4}"));
    Ok(Outcome {
        tally: t,
        vacuous: false,
        note: format!("frequency {freq:.4}, bound {bound:.4}"),
    })
}

/// `(hypergraph, set size)` pairs with exact containment probabilities:
/// perfect matchings of `K_4` at size 3, then 20 seeded random instances at
/// the smallest size where the probability reaches 1/4.
pub fn oracle_instances() -> Result<Vec<(Hypergraph, usize)>> {
    let budget = Budget::default();
    let mut out = vec![(perfect_matchings(4)?, 3)];
    for i in 0..20u64 {
        let seed = derive_seed(0x0ac1e, i);
        let n = 6 + (i % 9) as usize;
        let r = 2 + (seed % 3) as usize;
        let h = random_hypergraph(n, r, 3 + (seed >> 3) as usize % 12, seed)?;
        let size = (r..=n)
            .find(|&s| exact_containment(&h, s, &budget).is_ok_and(|p| p >= ratio(1, 4)))
            .unwrap_or(n);
        out.push((h, size));
    }
    Ok(out)
}

/// Which instances fall inside their 95% interval for one battery seed.
fn calibration_battery(instances: &[(Hypergraph, usize, f64)], trials: u64, seed: u64) -> Result<Vec<bool>> {
    instances
        .par_iter()
        .enumerate()
        .map(|(i, (h, s, exact))| {
            let est = estimate_containment(h, *s, trials, derive_seed(seed, i as u64))?;
            Ok(est.contains(*exact))
        })
        .collect()
}

fn calibration(profile: Profile) -> Result<Outcome> {
    let trials = 10_000;
    let budget = Budget::default();
    let instances = oracle_instances()?
        .into_iter()
        .map(|(h, s)| Ok((exact_containment(&h, s, &budget).map(|p| to_f64(&p))?, h, s)))
        .map(|r: Result<_>| r.map(|(p, h, s)| (h, s, p)))
        .collect::<Result<Vec<_>>>()?;
    let inside = calibration_battery(&instances, trials, 0xca1)?;
    let mut t = Tally::new();
    t.check(inside[0], || "perfect matchings of K4 at size 3 outside its interval".into());
    let hits = inside[1..].iter().filter(|&&b| b).count();
    t.check(hits >= 18, || format!("only {hits}/20 grid instances inside"));
    // reseeded batteries, reported only: coverage and how often a battery
    // meets the 18/20 rule
    let batteries = profile.pick(20u64, 100);
    let (mut covered, mut good) = (0usize, 0u64);
    for b in 0..batteries {
        let run = calibration_battery(&instances, trials, derive_seed(0xca1ca1, b))?;
        covered += run.iter().filter(|&&x| x).count();
        good += u64::from(run[1..].iter().filter(|&&x| x).count() >= 18);
    }
    let coverage = covered as f64 / (batteries as usize * instances.len()) as f64;
    Ok(Outcome {
        tally: t,
        vacuous: false,
        note: format!(
            "{hits}/20 grid instances inside at {trials} trials; over {batteries} reseeded batteries coverage {:.1}% and {good} meet 18/20",
            100.0 * coverage
        ),
    })
}

fn monotonicity(profile: Profile) -> Result<Outcome> {
    let trials = profile.pick(10_000u64, 10_000);
    let budget = Budget::default();
    let instances = oracle_instances()?;
    let rows = instances
        .par_iter()
        .enumerate()
        .map(|(i, (h, _))| -> Result<(bool, u64, u64)> {
            let sizes: Vec<usize> = (0..=h.n()).collect();
            let exact = sizes
                .iter()
                .map(|&s| exact_containment(h, s, &budget))
                .collect::<Result<Vec<_>>>()?;
            let scan = threshold_scan(h, &sizes, trials, derive_seed(0x5ca9, i as u64))?;
            let violations = scan
                .windows(2)
                .filter(|w| {
                    let se = (w[0].std_err().powi(2) + w[1].std_err().powi(2)).sqrt();
                    w[0].p_hat - w[1].p_hat > 3.0 * se
                })
                .count() as u64;
            Ok((is_monotone(&exact), violations, (scan.len() - 1) as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Tally::new();
    for (i, (mono, _, _)) in rows.iter().enumerate() {
        t.check(*mono, || format!("instance {i}: exact probabilities decrease"));
    }
    let violations: u64 = rows.iter().map(|r| r.1).sum();
    let pairs: u64 = rows.iter().map(|r| r.2).sum();
    t.check(violations * 100 <= pairs, || format!("{violations} of {pairs} adjacent pairs violate"));
    Ok(Outcome {
        tally: t,
        vacuous: false,
        note: format!("{violations}/{pairs} scan violations"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        assert_eq!(sequences_ending_in_one(4), vec![vec![4, 1], vec![4, 2, 1], vec![4, 3, 1], vec![5, 1], vec![5, 2, 1], vec![5, 3, 1], vec![5, 4, 1]]);
        assert_eq!(halving_sequences(4), vec![vec![4, 2], vec![4, 2, 1], vec![4, 3], vec![4, 3, 2]]);
        assert_eq!(halving_sequences(1), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn population_shape() {
        let pop = random_population(40).unwrap();
        assert!(pop.iter().all(|h| h.n() <= 10 && h.max_edge_size() <= 5));
        assert!(pop.iter().any(|h| !h.uniformity().unwrap().is_uniform()));
    }

    #[test]
    fn profile_parse() {
        assert_eq!("quick".parse::<Profile>().unwrap(), Profile::Quick);
        assert!("slow".parse::<Profile>().is_err());
    }
}
