//! Exact certification of spread conditions and minimal spread parameters.
//!
//! Three conditions are supported, all over a non-empty multiset hypergraph
//! `H`:
//!
//! * **q-spread**: `d(A) <= q^|A| |H|` for every vertex set `A`.
//! * **tiered** `(q; r_1, ..., r_l)`: `H` is `r_1`-bounded and for every `A`
//!   with `d(A) > 0` and `r_i >= |A| >= r_{i+1}` (some `i < l`), and every
//!   `j >= r_{i+1}`, `M_j(A) <= q^j |H|`.
//! * **multilevel** `(q_1, ..., q_{l-1}; r_1, ..., r_l)`: as tiered, with
//!   `q_i` used on the level pair `(r_i, r_{i+1})`.
//!
//! Only sets with `d(A) > 0` can violate any of these, so the checks run
//! over [`Hypergraph::candidate_sets`]. Constraints with `j > |A|` are
//! skipped since `M_j(A) = 0` there. A size `|A| = r_{i+1}` shared by two
//! level pairs is checked against both.
//!
//! Every comparison is exact: `q` is rational and `q^j |H|` is precomputed
//! as an integer floor.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits;
use crate::error::{input, precondition, Budget, Result};
use crate::exact::{from_int, serde_rational, JsonRootValue, Rational, RootValue};
use crate::hypergraph::{CountMode, Hypergraph, VertexSet};
use crate::rng::stream_rng;

/// Spread parameters: one `q` or one `q_i` per level pair, plus a strictly
/// decreasing `r`-sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadProfile {
    q: Vec<Rational>,
    single: bool,
    r: Vec<usize>,
}

impl SpreadProfile {
    /// The `(q; r_1, ..., r_l)` profile.
    pub fn tiered(q: Rational, r_sequence: Vec<usize>) -> Result<SpreadProfile> {
        validate_q(&q)?;
        validate_r(&r_sequence)?;
        Ok(SpreadProfile {
            q: vec![q],
            single: true,
            r: r_sequence,
        })
    }

    /// The `(q_1, ..., q_{l-1}; r_1, ..., r_l)` profile.
    pub fn multilevel(q_values: Vec<Rational>, r_sequence: Vec<usize>) -> Result<SpreadProfile> {
        validate_r(&r_sequence)?;
        if q_values.len() + 1 != r_sequence.len() {
            return input(format!(
                "multilevel profile needs {} q values for {} levels, got {}",
                r_sequence.len() - 1,
                r_sequence.len(),
                q_values.len()
            ));
        }
        for q in &q_values {
            validate_q(q)?;
        }
        Ok(SpreadProfile {
            q: q_values,
            single: false,
            r: r_sequence,
        })
    }

    pub fn levels(&self) -> usize {
        self.r.len()
    }

    pub fn r_sequence(&self) -> &[usize] {
        &self.r
    }

    pub fn is_single(&self) -> bool {
        self.single
    }

    pub fn q_values(&self) -> &[Rational] {
        &self.q
    }

    /// Spread parameter governing level pair `i` (0-based: `(r[i], r[i+1])`).
    pub fn q_for_pair(&self, i: usize) -> &Rational {
        if self.single {
            &self.q[0]
        } else {
            &self.q[i]
        }
    }
}

fn validate_q(q: &Rational) -> Result<()> {
    if !q.is_positive() || q > &Rational::one() {
        return input(format!("spread parameter {q} is outside (0, 1]"));
    }
    Ok(())
}

fn validate_r(r: &[usize]) -> Result<()> {
    if r.is_empty() {
        return input("r-sequence is empty");
    }
    if r.contains(&0) || r.windows(2).any(|w| w[0] <= w[1]) {
        return input(format!("r-sequence {r:?} is not strictly decreasing and positive"));
    }
    Ok(())
}

/// `r` with a trailing 1 appended unless it already ends in 1.
pub fn with_trailing_one(r: &[usize]) -> Vec<usize> {
    let mut out = r.to_vec();
    if out.last() != Some(&1) {
        out.push(1);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Sampled certification saw no violation. This is not a pass.
    NoViolationFound,
}

/// A violated inequality `lhs > rhs`, where `lhs = M_j(A)` (for the q-spread
/// condition `j = |A|` and `lhs = d(A)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub set: VertexSet,
    pub j: usize,
    pub lhs: u64,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    /// 1-based level pair index for tiered and multilevel checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

impl Witness {
    /// Recomputes `M_j(A)` from scratch and confirms the violation.
    pub fn recheck(&self, h: &Hypergraph) -> bool {
        let Ok(m) = h.m_count(&self.set, self.j, CountMode::AtLeast) else {
            return false;
        };
        m == self.lhs && from_int(m) > self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertResult {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Number of sets examined in sampled mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl CertResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    fn from_witness(witness: Option<Witness>, samples: Option<u64>) -> CertResult {
        let verdict = match (&witness, samples) {
            (Some(_), _) => Verdict::Fail,
            (None, None) => Verdict::Pass,
            (None, Some(_)) => Verdict::NoViolationFound,
        };
        CertResult {
            verdict,
            witness,
            samples,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    /// Every candidate set; refuses when the candidate count exceeds the
    /// budget.
    Exact,
    /// `samples` random candidate sets: a random edge, a random admissible
    /// size, and a random subset of that edge.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertOptions {
    pub mode: CertMode,
    pub budget: Budget,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions {
            mode: CertMode::Exact,
            budget: Budget::default(),
        }
    }
}

/// One level pair of a profile, flattened for the hot loop.
struct Level {
    /// Admissible `|A|` range.
    lo: usize,
    hi: usize,
    /// `floor(q^j |H|)` for `j = 0..=hi`.
    limits: Vec<u64>,
    q: Rational,
}

impl Level {
    fn new(lo: usize, hi: usize, q: &Rational, h_len: u64) -> Level {
        let h = from_int(h_len);
        let mut power = Rational::one();
        let mut limits = Vec::with_capacity(hi + 1);
        for _ in 0..=hi {
            limits.push((&power * &h).floor().to_integer().to_u64().unwrap_or(u64::MAX));
            power *= q;
        }
        Level {
            lo,
            hi,
            limits,
            q: q.clone(),
        }
    }

    fn rhs(&self, j: usize, h_len: u64) -> Rational {
        self.q.pow(j as i32) * from_int(h_len)
    }
}

/// Constraint family shared by the three certificates.
enum Constraints {
    /// `d(A) <= q^|A| |H|`.
    Degree(Level),
    /// `M_j(A) <= q_i^j |H|` for `lo_i <= |A| <= hi_i`, `lo_i <= j <= |A|`.
    Tail(Vec<Level>),
}

impl Constraints {
    fn sizes(&self) -> RangeInclusive<usize> {
        match self {
            Constraints::Degree(l) => 1..=l.hi,
            Constraints::Tail(levels) => {
                let lo = levels.iter().map(|l| l.lo).min().unwrap_or(1);
                let hi = levels.iter().map(|l| l.hi).max().unwrap_or(0);
                lo..=hi
            }
        }
    }

    /// First violation for a set of size `size` with profile `counts`.
    fn check(&self, size: usize, counts: &[u64]) -> Option<(usize, u64, usize)> {
        match self {
            Constraints::Degree(l) => {
                let d = counts[size];
                (d > l.limits[size]).then_some((size, d, 0))
            }
            Constraints::Tail(levels) => {
                for (i, l) in levels.iter().enumerate() {
                    if size < l.lo || size > l.hi {
                        continue;
                    }
                    let mut tail: u64 = counts[l.lo..=size].iter().sum();
                    for j in l.lo..=size {
                        if tail > l.limits[j] {
                            return Some((j, tail, i));
                        }
                        tail -= counts[j];
                    }
                }
                None
            }
        }
    }

    fn witness(&self, set: VertexSet, (j, lhs, i): (usize, u64, usize), h_len: u64) -> Witness {
        match self {
            Constraints::Degree(l) => Witness {
                set,
                j,
                lhs,
                rhs: l.rhs(j, h_len),
                level: None,
            },
            Constraints::Tail(levels) => Witness {
                set,
                j,
                lhs,
                rhs: levels[i].rhs(j, h_len),
                level: Some(i + 1),
            },
        }
    }
}

fn run_constraints(h: &Hypergraph, c: &Constraints, opts: &CertOptions) -> Result<CertResult> {
    let sizes = c.sizes();
    let h_len = h.len() as u64;
    if sizes.is_empty() {
        return Ok(CertResult::from_witness(None, None));
    }
    match opts.mode {
        CertMode::Exact => {
            opts.budget
                .check_candidates("exact certification", h.candidate_cost(&sizes))?;
            let cands = h.packed_candidates(&sizes);
            let width = *sizes.end() + 1;
            let hit = (0..cands.len())
                .into_par_iter()
                .map_init(
                    || vec![0u64; width],
                    |buf, idx| {
                        let a = cands.get(idx);
                        let size = bits::count(a) as usize;
                        h.profile_into(a, &mut buf[..=size]);
                        c.check(size, buf).map(|v| (idx, v))
                    },
                )
                .find_first(Option::is_some)
                .flatten();
            let witness = hit.map(|(idx, v)| {
                c.witness(VertexSet::from_sorted(bits::labels(cands.get(idx))).unwrap(), v, h_len)
            });
            Ok(CertResult::from_witness(witness, None))
        }
        CertMode::Sampled { samples, seed } => {
            let mut rng = stream_rng(seed, 0);
            let width = *sizes.end() + 1;
            let mut buf = vec![0u64; width];
            let mut a = vec![0u64; h.words()];
            for _ in 0..samples {
                let e = h.edge(rng.random_range(0..h.len()));
                let hi = (*sizes.end()).min(e.len());
                if hi < *sizes.start() {
                    continue;
                }
                let size = rng.random_range(*sizes.start()..=hi);
                let chosen = rand::seq::index::sample(&mut rng, e.len(), size);
                a.iter_mut().for_each(|w| *w = 0);
                let labels: Vec<usize> = chosen.iter().map(|i| e.as_slice()[i]).collect();
                bits::set_labels(&mut a, &labels);
                h.profile_into(&a, &mut buf[..=size]);
                if let Some(v) = c.check(size, &buf) {
                    let w = c.witness(VertexSet::new(labels), v, h_len);
                    return Ok(CertResult::from_witness(Some(w), Some(samples)));
                }
            }
            Ok(CertResult::from_witness(None, Some(samples)))
        }
    }
}

fn require_nonempty(h: &Hypergraph) -> Result<()> {
    if h.is_empty() {
        return input("spread certification needs a non-empty hypergraph");
    }
    Ok(())
}

/// Checks `d(A) <= q^|A| |H|` for every vertex set `A`.
pub fn certify_q_spread(h: &Hypergraph, q: &Rational, opts: &CertOptions) -> Result<CertResult> {
    require_nonempty(h)?;
    validate_q(q)?;
    let level = Level::new(1, h.max_edge_size(), q, h.len() as u64);
    run_constraints(h, &Constraints::Degree(level), opts)
}

fn tail_constraints(h: &Hypergraph, profile: &SpreadProfile) -> Result<Constraints> {
    require_nonempty(h)?;
    let r = profile.r_sequence();
    if h.max_edge_size() > r[0] {
        return precondition(format!(
            "hypergraph has an edge of size {} but the profile needs it {}-bounded",
            h.max_edge_size(),
            r[0]
        ));
    }
    let levels = (0..r.len() - 1)
        .map(|i| Level::new(r[i + 1], r[i], profile.q_for_pair(i), h.len() as u64))
        .collect();
    Ok(Constraints::Tail(levels))
}

/// Checks the `(q; r_1, ..., r_l)` condition. Profiles with one level pass
/// vacuously.
pub fn certify_tiered(h: &Hypergraph, profile: &SpreadProfile, opts: &CertOptions) -> Result<CertResult> {
    if !profile.is_single() {
        return input("certify_tiered needs a single-q profile");
    }
    run_constraints(h, &tail_constraints(h, profile)?, opts)
}

/// Checks the `(q_1, ..., q_{l-1}; r_1, ..., r_l)` condition.
pub fn certify_multilevel(
    h: &Hypergraph,
    profile: &SpreadProfile,
    opts: &CertOptions,
) -> Result<CertResult> {
    run_constraints(h, &tail_constraints(h, profile)?, opts)
}

/// A minimal spread parameter and the set (and `j`) attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinSpread {
    pub value: RootValue,
    pub witness: Option<(VertexSet, usize)>,
}

impl MinSpread {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Exact value, when it is rational.
    pub fn exact(&self) -> Option<Rational> {
        self.value.exact()
    }

    /// A rational `q` with `q >= value`: the exact value when rational,
    /// otherwise the smallest multiple of `1/denominator` above it.
    pub fn rational_at_least(&self, denominator: u64) -> Rational {
        self.exact()
            .unwrap_or_else(|| self.value.rational_upper(denominator))
    }
}

/// JSON view of [`MinSpread`].
#[derive(Clone, Debug, Serialize)]
pub struct MinSpreadJson {
    pub value: JsonRootValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_set: Option<VertexSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_j: Option<usize>,
}

impl From<&MinSpread> for MinSpreadJson {
    fn from(m: &MinSpread) -> Self {
        MinSpreadJson {
            value: (&m.value).into(),
            witness_set: m.witness.as_ref().map(|w| w.0.clone()),
            witness_j: m.witness.as_ref().map(|w| w.1),
        }
    }
}

/// Best ratio seen so far: `(value, candidate index, j)`, with a float key
/// to skip most exact comparisons.
#[derive(Clone)]
struct Best {
    approx: f64,
    value: RootValue,
    idx: usize,
    j: usize,
}

fn better(a: Best, b: Best) -> Best {
    let ord = if (a.approx - b.approx).abs() > 1e-9 * a.approx.max(b.approx) {
        a.approx.partial_cmp(&b.approx).unwrap_or(Ordering::Equal)
    } else {
        a.value.cmp(&b.value)
    };
    match ord {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if (a.idx, a.j) <= (b.idx, b.j) {
                a
            } else {
                b
            }
        }
    }
}

fn maximize(
    h: &Hypergraph,
    sizes: RangeInclusive<usize>,
    budget: &Budget,
    js: impl Fn(usize) -> Vec<usize> + Sync,
) -> Result<MinSpread> {
    require_nonempty(h)?;
    let zero = MinSpread {
        value: RootValue::zero(),
        witness: None,
    };
    if sizes.is_empty() {
        return Ok(zero);
    }
    budget.check_candidates("minimal spread search", h.candidate_cost(&sizes))?;
    let cands = h.packed_candidates(&sizes);
    let h_len = h.len() as u64;
    let width = *sizes.end() + 1;
    let best = (0..cands.len())
        .into_par_iter()
        .map_init(
            || vec![0u64; width],
            |buf, idx| {
                let a = cands.get(idx);
                let size = bits::count(a) as usize;
                h.profile_into(a, &mut buf[..=size]);
                let mut local: Option<Best> = None;
                for j in js(size) {
                    let m: u64 = buf[j..=size].iter().sum();
                    if m == 0 {
                        continue;
                    }
                    let value = RootValue::new(m, h_len, j as u32);
                    let cand = Best {
                        approx: value.to_f64(),
                        value,
                        idx,
                        j,
                    };
                    local = Some(match local {
                        None => cand,
                        Some(prev) => better(prev, cand),
                    });
                }
                local
            },
        )
        .flatten()
        .reduce_with(better);
    Ok(match best {
        None => zero,
        Some(b) => MinSpread {
            value: b.value,
            witness: Some((
                VertexSet::from_sorted(bits::labels(cands.get(b.idx))).unwrap(),
                b.j,
            )),
        },
    })
}

/// Smallest `q` for which `H` is q-spread: the maximum over non-empty `A`
/// with `d(A) > 0` of `(d(A)/|H|)^(1/|A|)`.
pub fn min_q_spread(h: &Hypergraph, budget: &Budget) -> Result<MinSpread> {
    maximize(h, 1..=h.max_edge_size(), budget, |size| vec![size])
}

/// Smallest `q` for which `H` is `(q; r)`-spread. Zero (with no witness) when
/// `r` has a single level.
pub fn min_q_tiered(h: &Hypergraph, r_sequence: &[usize], budget: &Budget) -> Result<MinSpread> {
    validate_r(r_sequence)?;
    require_nonempty(h)?;
    if h.max_edge_size() > r_sequence[0] {
        return precondition(format!(
            "hypergraph has an edge of size {} but the r-sequence starts at {}",
            h.max_edge_size(),
            r_sequence[0]
        ));
    }
    if r_sequence.len() == 1 {
        return Ok(MinSpread {
            value: RootValue::zero(),
            witness: None,
        });
    }
    let r = r_sequence.to_vec();
    let lo = *r.last().unwrap();
    let hi = r[0];
    maximize(h, lo..=hi, budget, move |size| {
        // smallest applicable r_{i+1}: every j from there up to |A| counts
        let start = (0..r.len() - 1)
            .filter(|&i| r[i] >= size && size >= r[i + 1])
            .map(|i| r[i + 1])
            .min();
        match start {
            Some(s) => (s..=size).collect(),
            None => Vec::new(),
        }
    })
}

/// Brute-force `min_q_spread` over all `2^n` vertex sets. For checking the
/// candidate-set pruning on small hypergraphs.
pub fn min_q_spread_brute_force(h: &Hypergraph) -> Result<RootValue> {
    require_nonempty(h)?;
    if h.n() > 20 {
        return input("brute force is limited to n <= 20");
    }
    let mut best = RootValue::zero();
    for mask in 1u64..(1u64 << h.n()) {
        let a = VertexSet::new((0..h.n()).filter(|v| mask >> v & 1 == 1).collect());
        let d = h.degree(&a)?;
        if d == 0 {
            continue;
        }
        let v = RootValue::new(d, h.len() as u64, a.len() as u32);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Returns `true` when `q == 0`; convenient for the one-level convention.
pub fn is_vacuous(m: &MinSpread) -> bool {
    m.value.numerator().is_zero()
}

/// Rational upper bound `2.7182818285` on `e`.
pub fn e_upper() -> Rational {
    crate::exact::ratio(27_182_818_285u64, 10_000_000_000u64)
}

/// `r_1 <= e q n`, with `e` replaced by [`e_upper`]. Every `r_1`-uniform
/// tiered-spread hypergraph on `n` vertices satisfies this at its `q`.
pub fn vertex_bound_holds(r1: usize, q: &RootValue, n: usize) -> bool {
    let needed = from_int(r1 as u64) / (e_upper() * from_int(n as u64));
    q.cmp_rational(&needed) != Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::generators::{complete_uniform, random_hypergraph};

    fn k4() -> Hypergraph {
        complete_uniform(4, 2).unwrap()
    }

    fn exact() -> CertOptions {
        CertOptions::default()
    }

    #[test]
    fn q_spread_examples() {
        let h = k4();
        assert!(certify_q_spread(&h, &ratio(1, 1), &exact()).unwrap().passed());
        assert!(certify_q_spread(&h, &ratio(1, 2), &exact()).unwrap().passed());
        let r = certify_q_spread(&h, &ratio(2, 5), &exact()).unwrap();
        assert!(r.failed());
        let w = r.witness.unwrap();
        assert_eq!(w.set, [0].into());
        assert_eq!((w.j, w.lhs), (1, 3));
        assert_eq!(w.rhs, ratio(12, 5));
        assert!(w.recheck(&h));
    }

    #[test]
    fn q_spread_rejects_bad_input() {
        let empty = Hypergraph::new(3, vec![]).unwrap();
        assert!(certify_q_spread(&empty, &ratio(1, 2), &exact()).is_err());
        assert!(certify_q_spread(&k4(), &ratio(0, 1), &exact()).is_err());
        assert!(certify_q_spread(&k4(), &ratio(3, 2), &exact()).is_err());
    }

    #[test]
    fn tiered_examples() {
        let h = k4();
        let one = SpreadProfile::tiered(ratio(1, 100), vec![2]).unwrap();
        assert!(certify_tiered(&h, &one, &exact()).unwrap().passed());
        let p = SpreadProfile::tiered(ratio(5, 6), vec![2, 1]).unwrap();
        assert!(certify_tiered(&h, &p, &exact()).unwrap().passed());
        let p = SpreadProfile::tiered(ratio(1, 2), vec![2, 1]).unwrap();
        let r = certify_tiered(&h, &p, &exact()).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.set, [0, 1].into());
        assert_eq!((w.j, w.lhs, w.level), (1, 5, Some(1)));
        assert_eq!(w.rhs, ratio(3, 1));
        assert!(w.recheck(&h));
    }

    #[test]
    fn tiered_unbounded_is_precondition() {
        let p = SpreadProfile::tiered(ratio(1, 2), vec![1]).unwrap();
        let err = certify_tiered(&k4(), &p, &exact()).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
    }

    #[test]
    fn multilevel_matches_tiered() {
        let h = k4();
        let m = SpreadProfile::multilevel(vec![ratio(5, 6)], vec![2, 1]).unwrap();
        assert!(certify_multilevel(&h, &m, &exact()).unwrap().passed());
        let m = SpreadProfile::multilevel(vec![ratio(1, 2)], vec![2, 1]).unwrap();
        let t = SpreadProfile::tiered(ratio(1, 2), vec![2, 1]).unwrap();
        assert_eq!(
            certify_multilevel(&h, &m, &exact()).unwrap(),
            certify_tiered(&h, &t, &exact()).unwrap()
        );
        assert!(SpreadProfile::multilevel(vec![ratio(1, 2)], vec![3, 2, 1]).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(SpreadProfile::tiered(ratio(1, 2), vec![2, 2]).is_err());
        assert!(SpreadProfile::tiered(ratio(1, 2), vec![2, 0]).is_err());
        assert!(SpreadProfile::tiered(ratio(1, 2), vec![]).is_err());
        assert_eq!(with_trailing_one(&[5, 3]), vec![5, 3, 1]);
        assert_eq!(with_trailing_one(&[3, 1]), vec![3, 1]);
    }

    #[test]
    fn min_q_examples() {
        let b = Budget::default();
        let m = min_q_spread(&k4(), &b).unwrap();
        assert_eq!(m.exact(), Some(ratio(1, 2)));
        assert_eq!(m.witness.as_ref().unwrap().0.len(), 1);
        let k6 = complete_uniform(6, 2).unwrap();
        let m = min_q_spread(&k6, &b).unwrap();
        assert_eq!(m.exact(), Some(ratio(1, 3)));
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        let m = min_q_spread(&single, &b).unwrap();
        assert_eq!(m.exact(), Some(ratio(1, 1)));
        assert_eq!(m.witness.unwrap().0, [0].into());
    }

    #[test]
    fn min_q_tiered_examples() {
        let b = Budget::default();
        let m = min_q_tiered(&k4(), &[2, 1], &b).unwrap();
        assert_eq!(m.exact(), Some(ratio(5, 6)));
        assert_eq!(m.witness.unwrap(), ([0, 1].into(), 1));
        let m = min_q_tiered(&k4(), &[2], &b).unwrap();
        assert!(is_vacuous(&m) && m.witness.is_none());
        let k6 = complete_uniform(6, 2).unwrap();
        let m = min_q_tiered(&k6, &[2, 1], &b).unwrap();
        assert_eq!(m.exact(), Some(ratio(9, 15)));
        assert_eq!(m.witness.unwrap().1, 1);
    }

    #[test]
    fn min_q_matches_brute_force() {
        let b = Budget::default();
        for seed in 0..40 {
            let n = 3 + (seed as usize % 6);
            let r = 1 + (seed as usize % 3).min(n - 1);
            let h = random_hypergraph(n, r, 1 + seed as usize % 7, seed).unwrap();
            let fast = min_q_spread(&h, &b).unwrap();
            let brute = min_q_spread_brute_force(&h).unwrap();
            assert_eq!(fast.value.cmp(&brute), Ordering::Equal, "seed {seed}");
        }
    }

    #[test]
    fn vertex_bound_examples() {
        // K_n edges: q = 1/2 for n = 4, and 2 <= e * 2
        assert!(vertex_bound_holds(2, &RootValue::new(1, 2, 1), 4));
        assert!(!vertex_bound_holds(3, &RootValue::new(1, 10, 1), 10));
        // r = e q n exactly at the boundary of the rational stand-in
        assert!(vertex_bound_holds(27_182_818_285, &RootValue::new(1, 1, 1), 10_000_000_000));
    }

    #[test]
    fn sampled_mode_never_passes() {
        let opts = CertOptions {
            mode: CertMode::Sampled { samples: 50, seed: 3 },
            budget: Budget::default(),
        };
        let r = certify_q_spread(&k4(), &ratio(1, 2), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::NoViolationFound);
        assert_eq!(r.samples, Some(50));
        let r = certify_q_spread(&k4(), &ratio(1, 10), &opts).unwrap();
        assert!(r.failed() && r.witness.unwrap().recheck(&k4()));
    }

    #[test]
    fn exact_mode_respects_budget() {
        let opts = CertOptions {
            mode: CertMode::Exact,
            budget: Budget { candidates: 3, enumeration: 0 },
        };
        assert!(matches!(
            certify_q_spread(&k4(), &ratio(1, 2), &opts),
            Err(crate::Error::Resource { .. })
        ));
    }
}
