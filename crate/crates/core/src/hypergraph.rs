//! Multiset hypergraphs on dense vertex labels `0..n`, with degree and
//! intersection-profile queries.
//!
//! Edges are kept twice: as sorted label lists for interchange and as packed
//! bit vectors for computation. Repeated edges are allowed and every count
//! in this module includes multiplicity.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{input, Result};
use crate::exact::binomial_u128;

/// A sorted set of vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Builds a set from labels in any order; duplicates are dropped.
    pub fn new(mut labels: Vec<usize>) -> VertexSet {
        labels.sort_unstable();
        labels.dedup();
        VertexSet(labels)
    }

    pub fn empty() -> VertexSet {
        VertexSet(Vec::new())
    }

    /// Accepts only strictly increasing labels.
    pub fn from_sorted(labels: Vec<usize>) -> Result<VertexSet> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return input(format!("labels {labels:?} are not strictly increasing"));
        }
        Ok(VertexSet(labels))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        VertexSet::new(all)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.0.iter().filter(|&&v| other.contains(v)).count()
    }

    /// Largest label plus one, or zero for the empty set.
    pub fn span(&self) -> usize {
        self.0.last().map_or(0, |v| v + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(labels: Vec<usize>) -> Self {
        VertexSet::new(labels)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(labels: [usize; N]) -> Self {
        VertexSet::new(labels.to_vec())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Counting mode for [`Hypergraph::m_count`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// `M_j(A)`: edges meeting `A` in at least `j` vertices.
    AtLeast,
    /// `m_j(A)`: edges meeting `A` in exactly `j` vertices.
    Exactly,
}

/// Histogram of `|A ∩ S|` over the edges `S`, indexed by intersection size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    counts: Vec<u64>,
}

impl IntersectionProfile {
    pub(crate) fn from_counts(counts: Vec<u64>) -> Self {
        IntersectionProfile { counts }
    }

    /// `m_j(A)`.
    pub fn exactly(&self, j: usize) -> u64 {
        self.counts.get(j).copied().unwrap_or(0)
    }

    /// `M_j(A)`.
    pub fn at_least(&self, j: usize) -> u64 {
        self.counts.iter().skip(j).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Non-zero entries as `(j, m_j)` pairs.
    pub fn nonzero(&self) -> Vec<(usize, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| (j, c))
            .collect()
    }
}

/// Edge-size summary of a non-empty hypergraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Uniformity {
    Uniform { r: usize },
    Mixed { s: usize, r: usize },
}

impl Uniformity {
    /// Smallest edge size `s`.
    pub fn min_size(&self) -> usize {
        match *self {
            Uniformity::Uniform { r } => r,
            Uniformity::Mixed { s, .. } => s,
        }
    }

    /// Largest edge size; the hypergraph is bounded by it.
    pub fn max_size(&self) -> usize {
        match *self {
            Uniformity::Uniform { r } | Uniformity::Mixed { r, .. } => r,
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, Uniformity::Uniform { .. })
    }
}

/// A hypergraph on vertices `0..n` whose edges form an ordered multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphFile", into = "HypergraphFile")]
pub struct Hypergraph {
    n: usize,
    name: Option<String>,
    edges: Vec<VertexSet>,
    words: usize,
    bits: Vec<u64>,
}

/// On-disk interchange form.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct HypergraphFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphFile> for Hypergraph {
    type Error = crate::Error;

    fn try_from(file: HypergraphFile) -> Result<Self> {
        let h = Hypergraph::new(file.n, file.edges)?;
        Ok(match file.name {
            Some(name) => h.with_name(name),
            None => h,
        })
    }
}

impl From<Hypergraph> for HypergraphFile {
    fn from(h: Hypergraph) -> Self {
        HypergraphFile {
            n: h.n,
            name: h.name,
            edges: h.edges.into_iter().map(VertexSet::into_vec).collect(),
        }
    }
}

impl Hypergraph {
    /// Builds a hypergraph from edges given as strictly increasing label lists.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Hypergraph> {
        let sets = edges
            .into_iter()
            .map(VertexSet::from_sorted)
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::from_sets(n, sets)
    }

    pub fn from_sets(n: usize, edges: Vec<VertexSet>) -> Result<Hypergraph> {
        if let Some(bad) = edges.iter().find(|e| e.span() > n) {
            return input(format!("edge {bad} has a label outside 0..{n}"));
        }
        let words = bits::words_for(n);
        let mut packed = vec![0u64; words * edges.len()];
        for (i, e) in edges.iter().enumerate() {
            bits::set_labels(&mut packed[i * words..(i + 1) * words], e.as_slice());
        }
        Ok(Hypergraph {
            n,
            name: None,
            edges,
            words,
            bits: packed,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Hypergraph {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges, with multiplicity.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &VertexSet {
        &self.edges[i]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn bit_rows(&self) -> impl Iterator<Item = &[u64]> {
        self.bits.chunks_exact(self.words)
    }

    /// Validates `a` against this hypergraph and packs it.
    pub(crate) fn pack(&self, a: &VertexSet) -> Result<Vec<u64>> {
        if a.span() > self.n {
            return input(format!("vertex set {a} has a label outside 0..{}", self.n));
        }
        Ok(bits::from_labels(a.as_slice(), self.words))
    }

    /// `d(A)`: number of edges containing `A`.
    pub fn degree(&self, a: &VertexSet) -> Result<u64> {
        let packed = self.pack(a)?;
        Ok(self.bit_rows().filter(|e| bits::is_subset(&packed, e)).count() as u64)
    }

    /// `M_j(A)` or `m_j(A)`, depending on `mode`.
    pub fn m_count(&self, a: &VertexSet, j: usize, mode: CountMode) -> Result<u64> {
        let profile = self.intersection_profile(a)?;
        Ok(match mode {
            CountMode::AtLeast => profile.at_least(j),
            CountMode::Exactly => profile.exactly(j),
        })
    }

    pub fn intersection_profile(&self, a: &VertexSet) -> Result<IntersectionProfile> {
        let packed = self.pack(a)?;
        let mut counts = vec![0u64; a.len() + 1];
        self.profile_into(&packed, &mut counts);
        Ok(IntersectionProfile::from_counts(counts))
    }

    /// Hot path: fills `counts[j] = m_j(A)` for a packed `A`; `counts` must
    /// have length at least `|A| + 1`.
    pub(crate) fn profile_into(&self, a: &[u64], counts: &mut [u64]) {
        counts.iter_mut().for_each(|c| *c = 0);
        for e in self.bit_rows() {
            counts[bits::and_count(a, e) as usize] += 1;
        }
    }

    pub fn uniformity(&self) -> Result<Uniformity> {
        let (Some(s), Some(r)) = (
            self.edges.iter().map(VertexSet::len).min(),
            self.edges.iter().map(VertexSet::len).max(),
        ) else {
            return input("hypergraph has no edges");
        };
        Ok(if s == r {
            Uniformity::Uniform { r }
        } else {
            Uniformity::Mixed { s, r }
        })
    }

    /// Largest edge size, or zero with no edges.
    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Largest multiplicity of any edge.
    pub fn max_multiplicity(&self) -> u64 {
        let mut freq: HashMap<&VertexSet, u64> = HashMap::new();
        for e in &self.edges {
            *freq.entry(e).or_default() += 1;
        }
        freq.into_values().max().unwrap_or(0)
    }

    /// Indices of the first occurrence of each distinct edge.
    pub fn distinct_edge_indices(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::new();
        (0..self.edges.len())
            .filter(|&i| seen.insert(&self.edges[i]))
            .collect()
    }

    /// Number of subsets (with repeats across edges) that candidate
    /// enumeration touches for the given size range.
    pub fn candidate_cost(&self, sizes: &RangeInclusive<usize>) -> u128 {
        self.edges
            .iter()
            .map(|e| {
                sizes
                    .clone()
                    .filter(|&k| k <= e.len())
                    .map(|k| binomial_u128(e.len() as u64, k as u64))
                    .fold(0u128, u128::saturating_add)
            })
            .fold(0u128, u128::saturating_add)
    }

    /// Every vertex set `A` with `d(A) > 0` and `|A|` in `sizes`, each once,
    /// ordered by size then lexicographically.
    pub fn candidate_sets(&self, sizes: RangeInclusive<usize>) -> impl Iterator<Item = VertexSet> {
        let packed = self.packed_candidates(&sizes);
        (0..packed.len()).map(move |i| VertexSet(bits::labels(packed.get(i))))
    }

    pub(crate) fn packed_candidates(&self, sizes: &RangeInclusive<usize>) -> PackedSets {
        let words = self.words;
        let mut raw: Vec<u64> = Vec::new();
        for e in &self.edges {
            let labels = e.as_slice();
            for k in sizes.clone() {
                if k > labels.len() {
                    break;
                }
                for_each_combination(labels.len(), k, |idx| {
                    let start = raw.len();
                    raw.resize(start + words, 0);
                    for &i in idx {
                        let v = labels[i];
                        raw[start + v / 64] |= 1u64 << (v % 64);
                    }
                });
            }
        }
        PackedSets::sorted_unique(raw, words)
    }
}

/// A sorted, duplicate-free list of packed vertex sets.
pub(crate) struct PackedSets {
    data: Vec<u64>,
    words: usize,
}

impl PackedSets {
    fn sorted_unique(raw: Vec<u64>, words: usize) -> PackedSets {
        let count = raw.len() / words;
        let mut order: Vec<usize> = (0..count).collect();
        let row = |i: usize| &raw[i * words..(i + 1) * words];
        order.sort_unstable_by(|&a, &b| bits::cmp_size_lex(row(a), row(b)));
        order.dedup_by(|a, b| row(*a) == row(*b));
        let mut data = Vec::with_capacity(order.len() * words);
        for i in order {
            data.extend_from_slice(row(i));
        }
        PackedSets { data, words }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.words
    }

    pub fn get(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }
}

/// Calls `f` with each `k`-subset of `0..n` as an increasing index list, in
/// lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        if !crate::combinadics::next_combination(&mut idx, n) {
            return;
        }
    }
}
