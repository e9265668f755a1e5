//! Exhaustive counts of k-bad pairs `(S, W)` with `S` an edge and `W` a
//! vertex set of fixed size, together with the quantities used to bound them.
//!
//! `(S, W)` is k-bad when no edge `S'` satisfies `S' ⊆ S ∪ W` and
//! `|S' \ W| <= k`. For an `r`-uniform, `(q; r, k)`-spread `H` with `C >= 4`,
//! `p = Cq <= 1/2` and `pn >= 2r`, the number of bad pairs with `|W| = pn` is
//! at most `3 (C/2)^(-k/2) |H| C(n, pn)`.
//!
//! The pairs are split by `t = |S ∩ W|` and, with `w = pn - t`, by whether
//! `Z = S ∪ W` (of size `r + w`) is *pathological*: more than
//! `N_t = (C/2)^(-k/2) |H| C(n-r, w) / C(n, w+r)` edges `S'' ⊆ Z` make
//! `(S'', Z \ S'')` k-bad.
//!
//! Everything here is exact; `(C/2)^(-k/2)` is a [`HalfPower`].
//!
//! ```
//! use spreadlab::badpairs::bad_pair_bound;
//! use spreadlab::exact::{ratio, from_int};
//!
//! let b = bad_pair_bound(20, 10, 2, &ratio(8, 1), 10);
//! assert_eq!(b.exact(), Some(from_int(1_385_670)));
//! ```

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bits;
use crate::combinadics::{for_each_in_range, split_ranges};
use crate::error::{input, precondition, Budget, Result};
use crate::exact::{
    binomial, binomial_ext, binomial_u128, from_biguint, from_int, serde_rational, HalfPower,
    JsonHalfPower, Rational,
};
use crate::hypergraph::{for_each_combination, Hypergraph, Uniformity, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadPairParams {
    #[serde(rename = "C", with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub q: Rational,
    pub k: usize,
    /// Size of `W`.
    pub pn: usize,
}

impl BadPairParams {
    pub fn p(&self) -> Rational {
        &self.c * &self.q
    }

    /// `(C/2)^(-k/2)` scaled by `coeff`.
    fn scale(&self, coeff: Rational) -> HalfPower {
        HalfPower::new(coeff, &self.c / from_int(2), -(self.k as i32))
    }

    /// Checks the counting hypotheses (`C >= 4`, `p <= 1/2`, `2r <= pn <= n`,
    /// `k >= 1`). Spreadness of `H` is left to the caller.
    fn validate(&self, n: usize, r: usize) -> Result<()> {
        if self.k == 0 {
            return input("k must be positive");
        }
        if !self.q.is_positive() {
            return input(format!("q = {} must be positive", self.q));
        }
        if self.c < from_int(4) {
            return precondition(format!("C = {} is below 4", self.c));
        }
        if self.p() * from_int(2) > Rational::one() {
            return precondition(format!("p = Cq = {} exceeds 1/2", self.p()));
        }
        if self.pn < 2 * r {
            return precondition(format!("pn = {} is below 2r = {}", self.pn, 2 * r));
        }
        if self.pn > n {
            return precondition(format!("pn = {} exceeds n = {n}", self.pn));
        }
        Ok(())
    }
}

/// Counts for one value of `t = |S ∩ W|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TSlice {
    pub t: usize,
    pub w: usize,
    /// `|B_t|`.
    pub bad: u64,
    pub pathological: u64,
    pub non_pathological: u64,
    /// `N_t`.
    pub threshold: JsonHalfPower,
    /// `(C/2)^(-k/2) |H| C(r, t) C(n-r, w)`.
    pub non_pathological_bound: JsonHalfPower,
    pub non_pathological_within: bool,
    /// Twice the non-pathological bound.
    pub pathological_bound: JsonHalfPower,
    pub pathological_within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadPairReport {
    pub n: usize,
    pub r: usize,
    pub edges: usize,
    pub params: BadPairParams,
    pub per_t: Vec<TSlice>,
    pub total: u64,
    pub pathological_total: u64,
    pub non_pathological_total: u64,
    /// `3 (C/2)^(-k/2) |H| C(n, pn)`.
    pub bound: JsonHalfPower,
    pub within_bound: bool,
}

/// `3 (C/2)^(-k/2) |H| C(n, pn)`.
pub fn bad_pair_bound(n: usize, pn: usize, k: usize, c: &Rational, h_size: usize) -> HalfPower {
    let coeff = from_int(3u64 * h_size as u64) * from_biguint(binomial(n as u64, pn as u64));
    HalfPower::new(coeff, c / from_int(2), -(k as i32))
}

/// `N_t = (C/2)^(-k/2) |H| C(n-r, w) / C(n, w+r)`.
pub fn pathological_threshold(n: usize, r: usize, w: usize, k: usize, c: &Rational, h_size: usize) -> HalfPower {
    let num = from_biguint(binomial_ext(n as i64 - r as i64, w as i64)) * from_int(h_size as u64);
    let den = from_biguint(binomial((n) as u64, (w + r) as u64));
    let coeff = if den.is_zero() { Rational::zero() } else { num / den };
    HalfPower::new(coeff, c / from_int(2), -(k as i32))
}

/// Edges whose residual outside `W` has at most `k` vertices, as packed
/// residuals.
fn short_residuals(h: &Hypergraph, w: &[u64], k: usize) -> Vec<Vec<u64>> {
    h.bit_rows()
        .map(|e| e.iter().zip(w).map(|(&x, &y)| x & !y).collect::<Vec<u64>>())
        .filter(|r| bits::count(r) as usize <= k)
        .collect()
}

/// Number of edges `S'' ⊆ Z` for which `(S'', Z \ S'')` is k-bad, that is,
/// every edge `S' ⊆ Z` meets `S''` in more than `k` vertices.
fn bad_inside(h: &Hypergraph, z: &[u64], k: usize) -> u64 {
    let inside: Vec<&[u64]> = h.bit_rows().filter(|e| bits::is_subset(e, z)).collect();
    inside
        .iter()
        .filter(|s| inside.iter().all(|sp| bits::and_count(s, sp) as usize > k))
        .count() as u64
}

fn require_uniform(h: &Hypergraph) -> Result<usize> {
    match h.uniformity()? {
        Uniformity::Uniform { r } => Ok(r),
        u => input(format!("needs a uniform hypergraph, got {u:?}")),
    }
}

/// Exact pathological count for `Z` and its comparison with `N_t`, where
/// `t = pn + r - |Z|`.
pub fn is_pathological(h: &Hypergraph, z: &VertexSet, params: &BadPairParams) -> Result<(u64, bool)> {
    let r = require_uniform(h)?;
    let zb = h.pack(z)?;
    let smallest = r + params.pn - r.min(params.pn);
    if z.len() < smallest || z.len() > r + params.pn {
        return input(format!("|Z| = {} is not r + w for any admissible t", z.len()));
    }
    let w = z.len() - r;
    let count = bad_inside(h, &zb, params.k);
    let n_t = pathological_threshold(h.n(), r, w, params.k, &params.c, h.len());
    Ok((count, !n_t.bounds(&from_int(count))))
}

/// Per-`t` tallies `[bad, pathological]`, indexed by `t`.
type Tally = Vec<[u64; 2]>;

/// Counts every k-bad pair `(S, W)` with `S ∈ H` and `|W| = pn`.
pub fn count_bad_pairs(h: &Hypergraph, params: &BadPairParams, budget: &Budget) -> Result<BadPairReport> {
    let r = require_uniform(h)?;
    let n = h.n();
    params.validate(n, r)?;
    let pn = params.pn;
    let k = params.k;
    let total_w = binomial_u128(n as u64, pn as u64);
    budget.check_enumeration("bad-pair enumeration", total_w.saturating_mul(h.len() as u128))?;

    // pathological status depends only on |Z|, through t
    let thresholds: Vec<Option<HalfPower>> = (0..=r)
        .map(|t| {
            (t <= pn && pn - t <= n - r).then(|| pathological_threshold(n, r, pn - t, k, &params.c, h.len()))
        })
        .collect();

    let words = h.words();
    let chunks = split_ranges(total_w, rayon::current_num_threads() * 8);
    let merged: Tally = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut tally: Tally = vec![[0, 0]; r + 1];
            let mut cache: HashMap<Vec<u64>, bool> = HashMap::new();
            let mut wb = vec![0u64; words];
            let mut z = vec![0u64; words];
            for_each_in_range(n, pn, lo, hi, |idx| {
                wb.iter_mut().for_each(|x| *x = 0);
                bits::set_labels(&mut wb, idx);
                let residuals = short_residuals(h, &wb, k);
                for s in h.bit_rows() {
                    if residuals.iter().any(|res| bits::is_subset(res, s)) {
                        continue;
                    }
                    let t = bits::and_count(s, &wb) as usize;
                    for ((zi, &a), &b) in z.iter_mut().zip(s).zip(&wb) {
                        *zi = a | b;
                    }
                    let path = *cache.entry(z.clone()).or_insert_with(|| {
                        let count = bad_inside(h, &z, k);
                        let n_t = thresholds[t].as_ref().expect("t is admissible for a realised pair");
                        !n_t.bounds(&from_int(count))
                    });
                    tally[t][0] += 1;
                    tally[t][1] += u64::from(path);
                }
            });
            tally
        })
        .reduce(
            || vec![[0, 0]; r + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x[0] += y[0];
                    x[1] += y[1];
                }
                a
            },
        );

    let mut per_t = Vec::new();
    for (t, n_t) in thresholds.iter().enumerate() {
        let Some(n_t) = n_t else { continue };
        let w = pn - t;
        let [bad, path] = merged[t];
        let non_path = bad - path;
        let base = from_int(h.len() as u64)
            * from_biguint(binomial(r as u64, t as u64))
            * from_biguint(binomial((n - r) as u64, w as u64));
        let np_bound = params.scale(base.clone());
        let p_bound = params.scale(base * from_int(2));
        per_t.push(TSlice {
            t,
            w,
            bad,
            pathological: path,
            non_pathological: non_path,
            threshold: n_t.into(),
            non_pathological_within: np_bound.bounds(&from_int(non_path)),
            non_pathological_bound: (&np_bound).into(),
            pathological_within: p_bound.bounds(&from_int(path)),
            pathological_bound: (&p_bound).into(),
        });
    }
    let total: u64 = per_t.iter().map(|s| s.bad).sum();
    let pathological_total: u64 = per_t.iter().map(|s| s.pathological).sum();
    let bound = bad_pair_bound(n, pn, k, &params.c, h.len());
    Ok(BadPairReport {
        n,
        r,
        edges: h.len(),
        params: params.clone(),
        per_t,
        total,
        pathological_total,
        non_pathological_total: total - pathological_total,
        within_bound: bound.bounds(&from_int(total)),
        bound: (&bound).into(),
    })
}

fn check_expectation_args(h: &Hypergraph, s: &VertexSet, w: usize) -> Result<usize> {
    let r = require_uniform(h)?;
    if !h.edges().contains(s) {
        return input(format!("{s} is not an edge of the hypergraph"));
    }
    if w > h.n() - r {
        return input(format!("w = {w} exceeds n - r = {}", h.n() - r));
    }
    Ok(r)
}

/// Expected number of edges `S' ⊆ S ∪ W'` with `|S' ∩ S| >= k`, for `W'`
/// uniform among the `w`-subsets of `V \ S`:
/// `sum_{j >= k} m_j(S) C(n-2r+j, w-r+j) / C(n-r, w)`.
pub fn expected_s(h: &Hypergraph, s: &VertexSet, w: usize, k: usize) -> Result<Rational> {
    let r = check_expectation_args(h, s, w)? as i64;
    let n = h.n() as i64;
    let w = w as i64;
    let profile = h.intersection_profile(s)?;
    let mut acc = Rational::zero();
    for j in k as i64..=r {
        let m = profile.exactly(j as usize);
        if m == 0 {
            continue;
        }
        acc += from_int(m) * from_biguint(binomial_ext(n - 2 * r + j, w - r + j));
    }
    Ok(acc / from_biguint(binomial_ext(n - r, w)))
}

/// [`expected_s`] by averaging over every `W'`.
pub fn expected_s_oracle(h: &Hypergraph, s: &VertexSet, w: usize, k: usize, budget: &Budget) -> Result<Rational> {
    check_expectation_args(h, s, w)?;
    let rest: Vec<usize> = (0..h.n()).filter(|&v| !s.contains(v)).collect();
    let total = binomial_u128(rest.len() as u64, w as u64);
    budget.check_enumeration("expectation oracle", total.saturating_mul(h.len() as u128))?;
    let sb = h.pack(s)?;
    let mut z = vec![0u64; h.words()];
    let mut sum = 0u64;
    for_each_combination(rest.len(), w, |idx| {
        z.copy_from_slice(&sb);
        for &i in idx {
            z[rest[i] / 64] |= 1 << (rest[i] % 64);
        }
        sum += h
            .bit_rows()
            .filter(|e| bits::is_subset(e, &z) && bits::and_count(e, &sb) as usize >= k)
            .count() as u64;
    });
    Ok(Rational::new(sum.into(), from_biguint(binomial(rest.len() as u64, w as u64)).to_integer()))
}

/// Checks `C(w, r-j)/C(n-r, r-j) * C(n, w+r)/C(n-r, w) <= ((n-r)/w)^j`
/// exactly, for `2r <= n`, `1 <= w <= n-r` and `j <= r`.
pub fn binomial_ratio_bound_check(n: usize, r: usize, w: usize, j: usize) -> Result<bool> {
    if 2 * r > n || w == 0 || w > n - r || j > r {
        return input(format!(
            "(n, r, w, j) = ({n}, {r}, {w}, {j}) is outside 2r <= n, 1 <= w <= n-r, j <= r"
        ));
    }
    let b = |a: usize, c: usize| from_biguint(binomial(a as u64, c as u64));
    let lhs = b(w, r - j) / b(n - r, r - j) * b(n, w + r) / b(n - r, w);
    let rhs = Rational::new(((n - r) as u64).into(), (w as u64).into()).pow(j as i32);
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::generators::{complete_uniform, perfect_matchings, random_hypergraph};
    use proptest::prelude::*;

    fn params(c: i64, q: Rational, k: usize, pn: usize) -> BadPairParams {
        BadPairParams {
            c: ratio(c, 1),
            q,
            k,
            pn,
        }
    }

    /// Bad pairs straight from the definition, with no shared code.
    fn naive_bad(h: &Hypergraph, pn: usize, k: usize) -> Vec<u64> {
        let r = h.max_edge_size();
        let mut out = vec![0u64; r + 1];
        for mask in 0u32..(1 << h.n()) {
            if mask.count_ones() as usize != pn {
                continue;
            }
            let w: VertexSet = (0..h.n()).filter(|v| mask >> v & 1 == 1).collect::<Vec<_>>().into();
            for s in h.edges() {
                let su = s.union(&w);
                let good = h
                    .edges()
                    .iter()
                    .any(|sp| sp.is_subset(&su) && sp.difference(&w).len() <= k);
                if !good {
                    out[s.intersection_len(&w)] += 1;
                }
            }
        }
        out
    }

    #[test]
    fn bound_arithmetic() {
        let b = bad_pair_bound(20, 10, 2, &ratio(8, 1), 10);
        assert_eq!(b.exact(), Some(from_int(1_385_670)));
        let b = bad_pair_bound(6, 3, 0, &ratio(8, 1), 2);
        assert_eq!(b.exact(), Some(from_int(3 * 2 * 20)));
        let b = bad_pair_bound(6, 3, 2, &ratio(4, 1), 2);
        assert_eq!(b.exact(), Some(ratio(3 * 2 * 20, 2)));
        let b = bad_pair_bound(6, 4, 1, &ratio(4, 1), 15);
        // 675 / sqrt(2) = 477.29...
        assert!(b.bounds(&from_int(477)) && !b.bounds(&from_int(478)));
    }

    #[test]
    fn single_edge_has_no_bad_pairs() {
        let h = Hypergraph::new(8, vec![vec![0, 1, 2]]).unwrap();
        let rep = count_bad_pairs(&h, &params(4, ratio(1, 8), 3, 6), &Budget::default()).unwrap();
        assert_eq!(rep.total, 0);
    }

    #[test]
    fn hypothesis_gate() {
        let h = complete_uniform(4, 2).unwrap();
        let err = count_bad_pairs(&h, &params(4, ratio(1, 8), 1, 2), &Budget::default()).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
        let err = count_bad_pairs(&h, &params(3, ratio(1, 8), 1, 4), &Budget::default()).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
        let err = count_bad_pairs(&h, &params(4, ratio(1, 4), 1, 4), &Budget::default()).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
    }

    #[test]
    fn k6_counts_match_definition() {
        let h = complete_uniform(6, 2).unwrap();
        let rep = count_bad_pairs(&h, &params(4, ratio(1, 8), 1, 4), &Budget::default()).unwrap();
        let naive = naive_bad(&h, 4, 1);
        for s in &rep.per_t {
            assert_eq!(s.bad, naive[s.t]);
        }
        assert_eq!(rep.total, naive.iter().sum::<u64>());
        assert!(rep.within_bound);
    }

    #[test]
    fn counts_match_definition_on_random_instances() {
        for seed in 0..12 {
            let h = random_hypergraph(8, 3, 3 + seed as usize % 5, seed).unwrap();
            for k in 1..=2 {
                let rep = count_bad_pairs(&h, &params(4, ratio(1, 16), k, 6), &Budget::default()).unwrap();
                let naive = naive_bad(&h, 6, k);
                for s in &rep.per_t {
                    assert_eq!(s.bad, naive[s.t], "seed {seed} k {k} t {}", s.t);
                    assert!(s.non_pathological_within);
                }
            }
        }
    }

    #[test]
    fn pathological_counts() {
        let h = complete_uniform(6, 2).unwrap();
        let p = params(4, ratio(1, 8), 1, 4);
        // Z without any edge inside
        let err = is_pathological(&h, &[0].into(), &p);
        assert!(err.is_err());
        let (count, _) = is_pathological(&h, &[0, 1, 2, 3].into(), &p).unwrap();
        // every pair inside a 4-set meets another pair inside it in one vertex
        assert_eq!(count, 0);
        let m = perfect_matchings(6).unwrap();
        // some other matching shares at most one pair with any given one
        let all: VertexSet = (0..15).collect::<Vec<_>>().into();
        let (count, path) = is_pathological(&m, &all, &params(4, ratio(1, 40), 1, 12)).unwrap();
        assert_eq!((count, path), (0, false));
    }

    #[test]
    fn expectation_example() {
        let h = complete_uniform(6, 2).unwrap();
        let s: VertexSet = [0, 1].into();
        assert_eq!(expected_s(&h, &s, 2, 0).unwrap(), from_int(6));
        assert_eq!(expected_s_oracle(&h, &s, 2, 0, &Budget::default()).unwrap(), from_int(6));
        assert_eq!(expected_s(&h, &s, 0, 0).unwrap(), from_int(1));
        assert_eq!(expected_s(&h, &s, 3, 3).unwrap(), from_int(0));
        assert!(expected_s(&h, &s, 5, 0).is_err());
    }

    #[test]
    fn expectation_matches_oracle() {
        for seed in 0..20 {
            let h = random_hypergraph(9, 3, 2 + seed as usize % 9, seed).unwrap();
            let s = h.edge(0).clone();
            for w in 0..=6 {
                for k in 0..=4 {
                    assert_eq!(
                        expected_s(&h, &s, w, k).unwrap(),
                        expected_s_oracle(&h, &s, w, k, &Budget::default()).unwrap(),
                        "seed {seed} w {w} k {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn ratio_bound_examples() {
        assert!(binomial_ratio_bound_check(10, 3, 7, 2).unwrap());
        assert!(binomial_ratio_bound_check(12, 4, 2, 4).unwrap());
        assert!(binomial_ratio_bound_check(7, 4, 3, 4).is_err());
        assert!(binomial_ratio_bound_check(12, 4, 3, 0).unwrap());
        assert!(binomial_ratio_bound_check(10, 3, 8, 1).is_err());
        assert!(binomial_ratio_bound_check(10, 3, 0, 1).is_err());
    }

    proptest! {
        #[test]
        fn subset_ratio_identity(a in 0u64..=60, bf in 0.0f64..=1.0, cf in 0.0f64..=1.0) {
            let b = (a as f64 * bf) as u64;
            let c = (b as f64 * cf) as u64;
            let lhs = from_biguint(binomial(a - c, b - c)) / from_biguint(binomial(a, b));
            let rhs = from_biguint(binomial(b, c)) / from_biguint(binomial(a, c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ratio_bound_holds_in_regime(n in 2usize..40, rf in 0.0f64..1.0, wf in 0.0f64..=1.0, jf in 0.0f64..=1.0) {
            let r = 1 + ((n / 2 - 1) as f64 * rf) as usize;
            let w = 1 + ((n - r - 1) as f64 * wf) as usize;
            let j = (r as f64 * jf) as usize;
            prop_assert!(binomial_ratio_bound_check(n, r, w, j).unwrap());
        }
    }
}
