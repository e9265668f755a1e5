//! Fixed-width bit vectors stored as `u64` word slices.

use std::cmp::Ordering;

pub fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

pub fn from_labels(labels: &[usize], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    set_labels(&mut out, labels);
    out
}

pub fn set_labels(out: &mut [u64], labels: &[usize]) {
    for &v in labels {
        out[v / 64] |= 1u64 << (v % 64);
    }
}

pub fn labels(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(count(words) as usize);
    for (i, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(i * 64 + b);
            w &= w - 1;
        }
    }
    out
}

#[inline]
pub fn count(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// `|a \ b|`
#[inline]
pub fn diff_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & !y).count_ones()).sum()
}

#[inline]
pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Orders sets by size, then lexicographically by sorted label list.
pub fn cmp_size_lex(a: &[u64], b: &[u64]) -> Ordering {
    count(a).cmp(&count(b)).then_with(|| cmp_lex(a, b))
}

/// Lexicographic order of the sorted label lists.
///
/// For two sets the first position where the lists differ holds the
/// smallest element of the symmetric difference, so the set that contains
/// it sorts first, unless the other list ran out (a proper prefix sorts
/// first).
pub fn cmp_lex(a: &[u64], b: &[u64]) -> Ordering {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let diff = x ^ y;
        if diff == 0 {
            continue;
        }
        let bit = diff & diff.wrapping_neg();
        let a_has = x & bit != 0;
        // Is there anything in the set lacking the bit at or after it?
        let rest_nonempty = |words: &[u64], word: u64| {
            word & !(bit | (bit - 1)) != 0 || words[i + 1..].iter().any(|&w| w != 0)
        };
        return if a_has {
            if rest_nonempty(b, *y) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if rest_nonempty(a, *x) {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_matches_label_vectors() {
        let sets: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![0, 1],
            vec![0, 2],
            vec![1],
            vec![1, 70],
            vec![2, 3],
            vec![70],
            vec![0, 1, 2],
            vec![3, 64, 65],
        ];
        for a in &sets {
            for b in &sets {
                let ba = from_labels(a, 2);
                let bb = from_labels(b, 2);
                assert_eq!(cmp_lex(&ba, &bb), a.cmp(b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn counts_and_subsets() {
        let a = from_labels(&[1, 5, 64], 2);
        let b = from_labels(&[1, 5, 64, 100], 2);
        assert_eq!(count(&a), 3);
        assert_eq!(and_count(&a, &b), 3);
        assert_eq!(diff_count(&b, &a), 1);
        assert!(is_subset(&a, &b));
        assert!(!is_subset(&b, &a));
        assert_eq!(labels(&b), vec![1, 5, 64, 100]);
    }
}
