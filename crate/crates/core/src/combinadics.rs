//! Lexicographic ranking of `k`-subsets of `0..n`, used to split exhaustive
//! enumerations into contiguous rank ranges.

use crate::exact::binomial_u128;

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
/// Returns `false` (leaving `idx` unspecified) after the last subset.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographic rank of an increasing `k`-subset of `0..n`.
pub fn rank(n: usize, subset: &[usize]) -> u128 {
    let k = subset.len();
    let mut r = 0u128;
    let mut start = 0;
    for (i, &c) in subset.iter().enumerate() {
        for v in start..c {
            r += binomial_u128((n - v - 1) as u64, (k - i - 1) as u64);
        }
        start = c + 1;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, k: usize, mut r: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut v = 0usize;
    for i in 0..k {
        loop {
            let block = binomial_u128((n - v - 1) as u64, (k - i - 1) as u64);
            if r < block {
                out.push(v);
                v += 1;
                break;
            }
            r -= block;
            v += 1;
        }
    }
    out
}

/// Splits `0..total` into at most `parts` contiguous, nearly equal ranges.
pub fn split_ranges(total: u128, parts: usize) -> Vec<(u128, u128)> {
    let parts = (parts.max(1) as u128).min(total.max(1));
    let step = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut lo = 0u128;
    for p in 0..parts {
        let len = step + u128::from(p < extra);
        out.push((lo, lo + len));
        lo += len;
    }
    out
}

/// Calls `f` on every `k`-subset of `0..n` whose rank lies in `lo..hi`.
pub fn for_each_in_range(n: usize, k: usize, lo: u128, hi: u128, mut f: impl FnMut(&[usize])) {
    if lo >= hi {
        return;
    }
    let mut idx = unrank(n, k, lo);
    let mut r = lo;
    loop {
        f(&idx);
        r += 1;
        if r >= hi || !next_combination(&mut idx, n) {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerates_all_in_order() {
        let mut idx = vec![0, 1, 2];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 6) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 20);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        for (r, s) in seen.iter().enumerate() {
            assert_eq!(rank(6, s), r as u128);
            assert_eq!(&unrank(6, 3, r as u128), s);
        }
    }

    #[test]
    fn empty_subset() {
        assert_eq!(rank(5, &[]), 0);
        assert!(unrank(5, 0, 0).is_empty());
        let mut calls = 0;
        for_each_in_range(5, 0, 0, 1, |_| calls += 1);
        assert_eq!(calls, 1);
    }

    #[test]
    fn ranges_cover_exactly() {
        let ranges = split_ranges(20, 7);
        assert_eq!(ranges.first().unwrap().0, 0);
        assert_eq!(ranges.last().unwrap().1, 20);
        let mut all = Vec::new();
        for (lo, hi) in ranges {
            for_each_in_range(6, 3, lo, hi, |s| all.push(s.to_vec()));
        }
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn rank_unrank_inverse(n in 1usize..30, k_frac in 0.0f64..1.0, r_frac in 0.0f64..1.0) {
            let k = ((n as f64) * k_frac) as usize;
            let total = binomial_u128(n as u64, k as u64);
            let r = ((total as f64) * r_frac) as u128 % total;
            let s = unrank(n, k, r);
            prop_assert_eq!(s.len(), k);
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(rank(n, &s), r);
        }
    }
}
