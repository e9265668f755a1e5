//! The random fragmentation process: repeatedly shrink the edges of an
//! `r_1`-uniform hypergraph to size `r_2`, `r_3`, ... using a fresh uniform
//! random vertex set each round.
//!
//! A pair `(S, W)` with `S` an edge is **k-good** when some edge `S'` has
//! `S' ⊆ S ∪ W` and `|S' \ W| <= k`. Round `i` keeps the edges `S` of `H_i`
//! for which `(S, W_i)` is `r_{i+1}`-good and replaces each by a subset
//! `A_S ⊆ S` of size `r_{i+1}` containing `S' \ W_i`. Every edge of every
//! round remembers the original edge it came from.
//!
//! ```
//! use spreadlab::fragmentation::{run_fragmentation, FragmentationConfig};
//! use spreadlab::generators::complete_uniform;
//! use spreadlab::exact::ratio;
//!
//! let h = complete_uniform(6, 2)?;
//! let config = FragmentationConfig::new(vec![2, 1], ratio(1, 4), ratio(2, 1), 7)?;
//! let trace = run_fragmentation(&h, &config)?;
//! // every edge {s, t} survives: any vertex w of W_1 gives the edge {s, w}
//! assert_eq!(trace.rounds[0].size_after, 15);
//! assert!(trace.rounds[0].successful);
//! # Ok::<(), spreadlab::Error>(())
//! ```

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{input, Result};
use crate::exact::{floor_u64, from_int, serde_rational, Rational};
use crate::hypergraph::{Hypergraph, Uniformity, VertexSet};
use crate::rng::{stream_rng, SubsetSampler};
use crate::spread::{certify_tiered, with_trailing_one, CertOptions, SpreadProfile, Witness};

/// Outcome of a k-goodness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessVerdict {
    pub good: bool,
    /// Index of the chosen `S'`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_edge: Option<usize>,
    /// `S' \ W`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<VertexSet>,
}

impl GoodnessVerdict {
    /// Confirms the witness by direct set operations.
    pub fn recheck(&self, h: &Hypergraph, s: &VertexSet, w: &VertexSet, k: usize) -> bool {
        match (self.good, self.witness_edge, &self.residual) {
            (true, Some(i), Some(res)) if i < h.len() => {
                let sp = h.edge(i);
                sp.is_subset(&s.union(w)) && sp.difference(w) == *res && res.len() <= k
            }
            (false, None, None) => true,
            _ => false,
        }
    }
}

/// Edges whose residual `S' \ W` has at most `k` vertices, ordered by the
/// witness preference: smallest residual, then lexicographically smallest
/// edge, then lowest index.
struct ResidualIndex {
    words: usize,
    residuals: Vec<u64>,
    order: Vec<usize>,
}

impl ResidualIndex {
    fn new(h: &Hypergraph, w: &[u64], k: usize) -> ResidualIndex {
        let words = h.words();
        let mut residuals = vec![0u64; words * h.len()];
        let mut order = Vec::new();
        for (i, e) in h.bit_rows().enumerate() {
            let row = &mut residuals[i * words..(i + 1) * words];
            for ((r, &x), &y) in row.iter_mut().zip(e).zip(w) {
                *r = x & !y;
            }
            if bits::count(row) as usize <= k {
                order.push(i);
            }
        }
        order.sort_by(|&a, &b| {
            let ra = &residuals[a * words..(a + 1) * words];
            let rb = &residuals[b * words..(b + 1) * words];
            bits::count(ra)
                .cmp(&bits::count(rb))
                .then_with(|| h.edge(a).cmp(h.edge(b)))
                .then(a.cmp(&b))
        });
        ResidualIndex {
            words,
            residuals,
            order,
        }
    }

    fn residual(&self, i: usize) -> &[u64] {
        &self.residuals[i * self.words..(i + 1) * self.words]
    }

    /// First preferred `S'` with `S' \ W ⊆ S`, which is the same as
    /// `S' ⊆ S ∪ W`.
    fn witness(&self, s: &[u64]) -> Option<usize> {
        self.order
            .iter()
            .copied()
            .find(|&i| bits::is_subset(self.residual(i), s))
    }
}

/// Tests whether `(S, W)` is k-good with respect to `h`. `S` must be an edge
/// of `h`.
pub fn is_k_good(h: &Hypergraph, s: &VertexSet, w: &VertexSet, k: usize) -> Result<GoodnessVerdict> {
    if !h.edges().contains(s) {
        return input(format!("{s} is not an edge of the hypergraph"));
    }
    let wb = h.pack(w)?;
    let index = ResidualIndex::new(h, &wb, k);
    let sb = h.pack(s)?;
    Ok(match index.witness(&sb) {
        Some(i) => GoodnessVerdict {
            good: true,
            witness_edge: Some(i),
            residual: Some(VertexSet::from_sorted(bits::labels(index.residual(i))).unwrap()),
        },
        None => GoodnessVerdict {
            good: false,
            witness_edge: None,
            residual: None,
        },
    })
}

/// `A_S`: the residual padded with the smallest remaining vertices of `S`.
fn complete_residual(s: &VertexSet, residual: &[usize], size: usize) -> VertexSet {
    let mut labels = residual.to_vec();
    for &v in s.as_slice() {
        if labels.len() >= size {
            break;
        }
        if !residual.contains(&v) {
            labels.push(v);
        }
    }
    VertexSet::new(labels)
}

/// Result of one refinement round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub next: Hypergraph,
    /// For each edge of `next`, the index of the edge of `H_i` it came from.
    pub parents: Vec<usize>,
    /// Provenance composed through `parents`.
    pub provenance: Vec<usize>,
}

/// One round: keep the `r_next`-good edges of `h_i` and shrink each to size
/// `r_next`. `provenance[j]` is the original edge behind edge `j` of `h_i`.
pub fn refine_round(
    h_i: &Hypergraph,
    w: &VertexSet,
    r_next: usize,
    provenance: &[usize],
) -> Result<Refinement> {
    if provenance.len() != h_i.len() {
        return input("provenance length differs from the number of edges");
    }
    let r_i = h_i.max_edge_size();
    if !h_i.is_empty() && r_next >= r_i {
        return input(format!("r_next = {r_next} must be below the edge size {r_i}"));
    }
    let wb = h_i.pack(w)?;
    let index = ResidualIndex::new(h_i, &wb, r_next);
    let mut edges = Vec::new();
    let mut parents = Vec::new();
    for (i, s) in h_i.bit_rows().enumerate() {
        if let Some(j) = index.witness(s) {
            let residual = bits::labels(index.residual(j));
            edges.push(complete_residual(h_i.edge(i), &residual, r_next));
            parents.push(i);
        }
    }
    let next = Hypergraph::from_sets(h_i.n(), edges)?;
    let provenance = parents.iter().map(|&i| provenance[i]).collect();
    Ok(Refinement {
        next,
        parents,
        provenance,
    })
}

/// `2l |H_{i+1}| >= (2l - 1) |H_i|`.
pub fn is_successful(levels: usize, size_before: usize, size_after: usize) -> bool {
    let l = levels as u128;
    2 * l * size_after as u128 >= (2 * l - 1) * size_before as u128
}

/// Parameters of a fragmentation run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentationConfig {
    pub r_sequence: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub q: Rational,
    #[serde(rename = "C", with = "serde_rational")]
    pub c: Rational,
    pub seed: u64,
}

impl FragmentationConfig {
    pub fn new(r_sequence: Vec<usize>, q: Rational, c: Rational, seed: u64) -> Result<Self> {
        SpreadProfile::tiered(q.clone(), r_sequence.clone())?;
        if !c.is_positive() {
            return input(format!("C = {c} must be positive"));
        }
        let config = FragmentationConfig {
            r_sequence,
            q,
            c,
            seed,
        };
        if config.p() * from_int(2) > Rational::one() {
            return input(format!(
                "p = Cq = {} exceeds 1/2",
                crate::exact::format_rational(&config.p())
            ));
        }
        Ok(config)
    }

    /// `p = C q`.
    pub fn p(&self) -> Rational {
        &self.c * &self.q
    }

    /// Size of each random set: `floor(p n)`.
    pub fn set_size(&self, n: usize) -> usize {
        floor_u64(&(self.p() * from_int(n as u64))) as usize
    }

    /// Same parameters with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        FragmentationConfig {
            seed,
            ..self.clone()
        }
    }
}

/// One round of a trace. `round` is `i` (1-based), describing
/// `H_i -> H_{i+1}` with random set `W_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub w: VertexSet,
    pub size_before: usize,
    pub size_after: usize,
    pub successful: bool,
    /// Edge `j` of `H_{i+1}` came from edge `parents[j]` of `H_i`.
    pub parents: Vec<usize>,
    /// Edge `j` of `H_{i+1}` came from edge `provenance[j]` of `H_1`.
    pub provenance: Vec<usize>,
    /// Edges of `H_{i+1}`.
    pub edges: Vec<VertexSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Completed,
    /// Some round produced an empty hypergraph.
    Extinct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentationTrace {
    pub config: FragmentationConfig,
    pub n: usize,
    /// Size of each `W_i`.
    pub w_size: usize,
    pub rounds: Vec<RoundRecord>,
    pub status: TraceStatus,
    /// The last hypergraph produced (`H_l` for a completed trace).
    pub final_hypergraph: Hypergraph,
    /// Provenance of `final_hypergraph` into `H_1`.
    pub final_provenance: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FragmentationTrace {
    /// `H_i` for `i >= 2` (`None` past the end of the trace).
    pub fn hypergraph(&self, i: usize) -> Option<Hypergraph> {
        let rec = self.rounds.get(i.checked_sub(2)?)?;
        Hypergraph::from_sets(self.n, rec.edges.clone()).ok()
    }

    pub fn all_successful(&self) -> bool {
        self.status == TraceStatus::Completed && self.rounds.iter().all(|r| r.successful)
    }

    /// `W_1 ∪ ... ∪ W_m`.
    pub fn union_of_sets(&self, m: usize) -> VertexSet {
        self.rounds
            .iter()
            .take(m)
            .fold(VertexSet::empty(), |acc, r| acc.union(&r.w))
    }
}

/// Runs rounds `1..l` on an `r_1`-uniform hypergraph.
pub fn run_fragmentation(h: &Hypergraph, config: &FragmentationConfig) -> Result<FragmentationTrace> {
    let r = &config.r_sequence;
    match h.uniformity()? {
        Uniformity::Uniform { r: size } if size == r[0] => {}
        u => {
            return input(format!(
                "fragmentation needs an {}-uniform hypergraph, got {u:?}",
                r[0]
            ))
        }
    }
    let n = h.n();
    let w_size = config.set_size(n);
    let mut warnings = Vec::new();
    if w_size == 0 {
        warnings.push(format!("floor(p n) is 0 for n = {n}; every random set is empty"));
    }
    let levels = r.len();
    let mut rng = stream_rng(config.seed, 0);
    let mut sampler = SubsetSampler::new(n);
    let mut current = h.clone();
    let mut provenance: Vec<usize> = (0..h.len()).collect();
    let mut rounds = Vec::with_capacity(levels.saturating_sub(1));
    let mut status = TraceStatus::Completed;
    for i in 0..levels - 1 {
        let w = VertexSet::new(sampler.sample(&mut rng, w_size).to_vec());
        let step = refine_round(&current, &w, r[i + 1], &provenance)?;
        let size_before = current.len();
        let size_after = step.next.len();
        rounds.push(RoundRecord {
            round: i + 1,
            w,
            size_before,
            size_after,
            successful: is_successful(levels, size_before, size_after),
            parents: step.parents,
            provenance: step.provenance.clone(),
            edges: step.next.edges().to_vec(),
        });
        current = step.next;
        provenance = step.provenance;
        if current.is_empty() {
            status = TraceStatus::Extinct;
            break;
        }
    }
    Ok(FragmentationTrace {
        config: config.clone(),
        n,
        w_size,
        rounds,
        status,
        final_hypergraph: current,
        final_provenance: provenance,
        warnings,
    })
}

/// Structural checks of a trace against the hypergraph it was run on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceAudit {
    pub injective: bool,
    pub contained_in_origin: bool,
    pub uniform: bool,
    /// `A ∪ W_1 ∪ ... ∪ W_{i-1}` contains an edge of `H_1` for every edge
    /// `A` of `H_i`.
    pub containment_transfer: bool,
    /// Each `A_S` sits inside its parent.
    pub contained_in_parent: bool,
    /// Recorded success flags and sizes agree with the edges.
    pub bookkeeping: bool,
    /// While every earlier round succeeded,
    /// `(2l)^(i-1) |H_i| >= (2l-1)^(i-1) |H_1|`.
    pub product_form: bool,
    pub problems: Vec<String>,
}

impl TraceAudit {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks the structural invariants of `trace`, which must have been produced
/// from `h`.
pub fn audit_trace(h: &Hypergraph, trace: &FragmentationTrace) -> TraceAudit {
    let mut audit = TraceAudit {
        injective: true,
        contained_in_origin: true,
        uniform: true,
        containment_transfer: true,
        contained_in_parent: true,
        bookkeeping: true,
        product_form: true,
        problems: Vec::new(),
    };
    let levels = trace.config.r_sequence.len() as u128;
    let mut prev_edges: Vec<VertexSet> = h.edges().to_vec();
    let mut used_w = VertexSet::empty();
    let mut all_ok_so_far = true;
    for rec in &trace.rounds {
        let i = rec.round;
        let r_next = trace.config.r_sequence[i];
        let label = |what: &str| format!("round {i}: {what}");
        used_w = used_w.union(&rec.w);
        if rec.w.len() != trace.w_size {
            audit.bookkeeping = false;
            audit.problems.push(label("random set has the wrong size"));
        }
        if rec.edges.len() != rec.size_after
            || rec.parents.len() != rec.size_after
            || rec.provenance.len() != rec.size_after
            || prev_edges.len() != rec.size_before
            || rec.successful != is_successful(levels as usize, rec.size_before, rec.size_after)
        {
            audit.bookkeeping = false;
            audit.problems.push(label("sizes or success flag inconsistent"));
        }
        let mut seen = vec![false; h.len()];
        for (j, a) in rec.edges.iter().enumerate() {
            if a.len() != r_next {
                audit.uniform = false;
                audit.problems.push(label(&format!("edge {a} has size {}", a.len())));
            }
            let Some(&origin) = rec.provenance.get(j) else {
                continue;
            };
            if origin >= h.len() || std::mem::replace(&mut seen[origin], true) {
                audit.injective = false;
                audit.problems.push(label(&format!("provenance {origin} repeated or out of range")));
                continue;
            }
            let phi = h.edge(origin);
            if !a.is_subset(phi) {
                audit.contained_in_origin = false;
                audit.problems.push(label(&format!("{a} not inside its origin {phi}")));
            }
            let grown = a.union(&used_w);
            if !h.edges().iter().any(|e| e.is_subset(&grown)) {
                audit.containment_transfer = false;
                audit.problems.push(label(&format!("{a} plus the random sets holds no edge")));
            }
            match rec.parents.get(j).and_then(|&p| prev_edges.get(p)) {
                Some(parent) if a.is_subset(parent) => {}
                _ => {
                    audit.contained_in_parent = false;
                    audit.problems.push(label(&format!("{a} not inside its parent")));
                }
            }
        }
        if all_ok_so_far {
            // every round 1..=i succeeded
            all_ok_so_far = rec.successful;
            if all_ok_so_far {
                let lhs = (2 * levels).pow(i as u32) * rec.size_after as u128;
                let rhs = (2 * levels - 1).pow(i as u32) * h.len() as u128;
                if lhs < rhs {
                    audit.product_form = false;
                    audit.problems.push(label("size fell below the product bound"));
                }
            }
        }
        prev_edges = rec.edges.clone();
    }
    audit
}

/// `M_j(A; H_i) <= M_j(A; H)` for every `A ⊆ V` and every `j`, by brute
/// force over all `2^n` sets. Returns the first violating `(A, j)`.
pub fn check_m_monotone(
    h: &Hypergraph,
    h_i: &Hypergraph,
    budget: &crate::Budget,
) -> Result<Option<(VertexSet, usize)>> {
    let n = h.n();
    if n >= 64 {
        return input("brute-force monotonicity check needs n < 64");
    }
    budget.check_enumeration("monotonicity check", 1u128 << n)?;
    for mask in 0u64..(1u64 << n) {
        let a = VertexSet::new((0..n).filter(|v| mask >> v & 1 == 1).collect());
        let big = h.intersection_profile(&a)?;
        let small = h_i.intersection_profile(&a)?;
        for j in 0..=a.len() {
            if small.at_least(j) > big.at_least(j) {
                return Ok(Some((a, j)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PreservationVerdict {
    Pass,
    Fail,
    /// An earlier round failed or `H_i` is empty.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundPreservation {
    /// `i` in `H_i`.
    pub index: usize,
    pub verdict: PreservationVerdict,
    pub r_sequence: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Certifies `H_i` as `(min(2q, 1); r_i, ..., r_l, 1)`-spread for each `i` of
/// the trace while all earlier rounds succeeded. `h` is `H_1`.
pub fn check_spread_preservation(
    h: &Hypergraph,
    trace: &FragmentationTrace,
    q: &Rational,
    r_sequence: &[usize],
    opts: &CertOptions,
) -> Result<Vec<RoundPreservation>> {
    let doubled = (q * from_int(2)).min(Rational::one());
    let full = with_trailing_one(r_sequence);
    let mut out = Vec::new();
    let mut applicable = true;
    for i in 1..=trace.rounds.len() + 1 {
        let h_i = if i == 1 { Some(h.clone()) } else { trace.hypergraph(i) };
        let Some(h_i) = h_i else { break };
        let seq = full[(i - 1).min(full.len() - 1)..].to_vec();
        if !applicable || h_i.is_empty() {
            out.push(RoundPreservation {
                index: i,
                verdict: PreservationVerdict::NotApplicable,
                r_sequence: seq,
                witness: None,
            });
        } else {
            let profile = SpreadProfile::tiered(doubled.clone(), seq.clone())?;
            let res = certify_tiered(&h_i, &profile, opts)?;
            out.push(RoundPreservation {
                index: i,
                verdict: if res.failed() {
                    PreservationVerdict::Fail
                } else {
                    PreservationVerdict::Pass
                },
                r_sequence: seq,
                witness: res.witness,
            });
        }
        if let Some(rec) = trace.rounds.get(i - 1) {
            applicable &= rec.successful;
        }
    }
    Ok(out)
}
