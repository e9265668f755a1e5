//! Hypergraph families: complete uniform hypergraphs, structures in `K_n`
//! encoded on its edge set, and seeded random hypergraphs.

use std::collections::BTreeSet;

use crate::error::{input, Budget, Error, Result};
use crate::hypergraph::{for_each_combination, Hypergraph, VertexSet};
use crate::rng::{stream_rng, SubsetSampler};

/// Colexicographic labelling of the edges of `K_n`: the pair `u < v` gets
/// label `v(v-1)/2 + u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdgeLabeling {
    n: usize,
}

impl GraphEdgeLabeling {
    pub fn new(n: usize) -> GraphEdgeLabeling {
        GraphEdgeLabeling { n }
    }

    /// `C(n, 2)`.
    pub fn num_labels(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn label(&self, u: usize, v: usize) -> usize {
        assert!(u != v && u < self.n && v < self.n, "({u},{v}) is not an edge of K_{}", self.n);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        b * (b - 1) / 2 + a
    }

    pub fn pair(&self, label: usize) -> (usize, usize) {
        assert!(label < self.num_labels(), "label {label} out of range");
        let mut b = 1;
        while (b + 1) * b / 2 <= label {
            b += 1;
        }
        (label - b * (b - 1) / 2, b)
    }

    /// Hypergraph edge for a set of graph edges.
    pub fn encode(&self, graph_edges: impl IntoIterator<Item = (usize, usize)>) -> VertexSet {
        VertexSet::new(graph_edges.into_iter().map(|(u, v)| self.label(u, v)).collect())
    }
}

/// All `r`-subsets of `0..n`, lexicographically.
pub fn complete_uniform(n: usize, r: usize) -> Result<Hypergraph> {
    if r == 0 || r > n {
        return input(format!("complete_uniform needs 1 <= r <= n, got n={n}, r={r}"));
    }
    let mut edges = Vec::new();
    for_each_combination(n, r, |idx| edges.push(idx.to_vec()));
    Ok(Hypergraph::new(n, edges)?.with_name(format!("complete_uniform({n},{r})")))
}

/// Perfect matchings of `K_n` on `C(n,2)` vertices; `(n-1)!!` edges of size
/// `n/2`.
pub fn perfect_matchings(n: usize) -> Result<Hypergraph> {
    if n == 0 || n % 2 == 1 || n > 12 {
        return input(format!("perfect_matchings needs even 2 <= n <= 12, got {n}"));
    }
    let lab = GraphEdgeLabeling::new(n);
    let mut edges = Vec::new();
    let mut used = vec![false; n];
    let mut current = Vec::with_capacity(n / 2);
    fn extend(
        lab: &GraphEdgeLabeling,
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        edges: &mut Vec<VertexSet>,
    ) {
        let Some(u) = used.iter().position(|&x| !x) else {
            edges.push(lab.encode(current.iter().copied()));
            return;
        };
        used[u] = true;
        for v in u + 1..used.len() {
            if used[v] {
                continue;
            }
            used[v] = true;
            current.push((u, v));
            extend(lab, used, current, edges);
            current.pop();
            used[v] = false;
        }
        used[u] = false;
    }
    extend(&lab, &mut used, &mut current, &mut edges);
    Ok(Hypergraph::from_sets(lab.num_labels(), edges)?.with_name(format!("perfect_matchings({n})")))
}

/// Undirected Hamilton cycles of `K_n` as vertex sequences starting at 0,
/// one per cycle (the reflection with `c[1] < c[n-1]`), in lexicographic
/// order.
pub fn hamilton_cycle_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    loop {
        if rest.first() < rest.last() {
            let mut cycle = Vec::with_capacity(n);
            cycle.push(0);
            cycle.extend_from_slice(&rest);
            out.push(cycle);
        }
        if !next_permutation(&mut rest) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Hamilton cycles of `K_n`, `(n-1)!/2` edges of size `n`.
pub fn hamilton_cycles(n: usize) -> Result<Hypergraph> {
    if !(3..=9).contains(&n) {
        return input(format!("hamilton_cycles needs 3 <= n <= 9, got {n}"));
    }
    let lab = GraphEdgeLabeling::new(n);
    let edges = hamilton_cycle_sequences(n)
        .into_iter()
        .map(|c| lab.encode((0..n).map(|i| (c[i], c[(i + 1) % n]))))
        .collect();
    Ok(Hypergraph::from_sets(lab.num_labels(), edges)?.with_name(format!("hamilton_cycles({n})")))
}

/// Squares of Hamilton cycles of `K_n`: one edge per cycle holding its cycle
/// edges and distance-two chords, kept as a multiset.
pub fn hamilton_squares(n: usize) -> Result<Hypergraph> {
    if !(5..=9).contains(&n) {
        return input(format!("hamilton_squares needs 5 <= n <= 9, got {n}"));
    }
    let lab = GraphEdgeLabeling::new(n);
    let edges = hamilton_cycle_sequences(n)
        .into_iter()
        .map(|c| {
            lab.encode(
                (0..n).flat_map(|i| [(c[i], c[(i + 1) % n]), (c[i], c[(i + 2) % n])]),
            )
        })
        .collect();
    Ok(Hypergraph::from_sets(lab.num_labels(), edges)?.with_name(format!("hamilton_squares({n})")))
}

/// Distinct copies of the graph `f` (a 2-uniform hypergraph on `f.n()`
/// vertices) inside `K_n`, one edge per copy, sorted lexicographically.
pub fn copies_of(f: &Hypergraph, n: usize, budget: &Budget) -> Result<Hypergraph> {
    let fv = f.n();
    if f.is_empty() {
        return input("pattern graph has no edges");
    }
    if f.edges().iter().any(|e| e.len() != 2) {
        return input("pattern graph must be 2-uniform");
    }
    if fv > n {
        return input(format!("pattern has {fv} vertices, more than n={n}"));
    }
    let injections = ((n - fv + 1)..=n).fold(1u128, |acc, x| acc.saturating_mul(x as u128));
    budget.check_enumeration("copy enumeration", injections)?;
    let lab = GraphEdgeLabeling::new(n);
    let pattern: Vec<(usize, usize)> = f
        .edges()
        .iter()
        .map(|e| (e.as_slice()[0], e.as_slice()[1]))
        .collect();
    let mut images = BTreeSet::new();
    let mut map = vec![usize::MAX; fv];
    let mut used = vec![false; n];
    fn place(
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        pattern: &[(usize, usize)],
        lab: &GraphEdgeLabeling,
        images: &mut BTreeSet<VertexSet>,
    ) {
        if depth == map.len() {
            images.insert(lab.encode(pattern.iter().map(|&(a, b)| (map[a], map[b]))));
            return;
        }
        for v in 0..used.len() {
            if used[v] {
                continue;
            }
            used[v] = true;
            map[depth] = v;
            place(depth + 1, map, used, pattern, lab, images);
            used[v] = false;
        }
    }
    place(0, &mut map, &mut used, &pattern, &lab, &mut images);
    Ok(Hypergraph::from_sets(lab.num_labels(), images.into_iter().collect())?
        .with_name(format!("copies_of({},{n})", f.name().unwrap_or("F"))))
}

/// `m` edges drawn uniformly with replacement from the `r`-subsets of `0..n`.
pub fn random_hypergraph(n: usize, r: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if r > n {
        return input(format!("random_hypergraph needs r <= n, got n={n}, r={r}"));
    }
    if m == 0 {
        return Err(Error::Input("random_hypergraph needs m >= 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let mut sampler = SubsetSampler::new(n);
    let edges = (0..m)
        .map(|_| VertexSet::new(sampler.sample(&mut rng, r).to_vec()))
        .collect();
    Ok(Hypergraph::from_sets(n, edges)?.with_name(format!("random({n},{r},{m},{seed})")))
}

/// A graph given by its edge list, as a 2-uniform hypergraph.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Hypergraph> {
    let sets = edges
        .iter()
        .map(|&(u, v)| {
            if u == v {
                input(format!("loop at vertex {u}"))
            } else {
                Ok(VertexSet::new(vec![u, v]))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::from_sets(n, sets)
}
