//! Bounded brute-force checks that only query language membership.

use std::collections::{HashMap, HashSet};

/// All words of length `≤ max_len` over `k` symbols, in shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * k);
        for w in &level {
            for a in 0..k {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Distinct residuals `L∗u` for `|u| ≤ prefix_len`, each residual cut down
/// to suffixes of length `≤ suffix_len`.
pub fn residual_count(
    accepts: &dyn Fn(&[usize]) -> bool,
    k: usize,
    prefix_len: usize,
    suffix_len: usize,
) -> usize {
    let suffixes = words_up_to(k, suffix_len);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for u in words_up_to(k, prefix_len) {
        let sig = suffixes
            .iter()
            .map(|w| accepts(&[u.as_slice(), w.as_slice()].concat()))
            .collect();
        seen.insert(sig);
    }
    seen.len()
}

/// Groups words `|u| ≤ word_len` by the two-sided definition: `u ≅ v` iff
/// `xuy ∈ L ⟺ xvy ∈ L` for all contexts `|x|, |y| ≤ context_len`.
///
/// Returns the words with their class ids, classes numbered by first word.
pub fn two_sided_classes(
    accepts: &dyn Fn(&[usize]) -> bool,
    k: usize,
    word_len: usize,
    context_len: usize,
) -> Vec<(Vec<usize>, usize)> {
    let contexts = words_up_to(k, context_len);
    let mut class: HashMap<Vec<bool>, usize> = HashMap::new();
    words_up_to(k, word_len)
        .into_iter()
        .map(|u| {
            let mut sig = Vec::with_capacity(contexts.len() * contexts.len());
            for x in &contexts {
                for y in &contexts {
                    sig.push(accepts(&[x.as_slice(), u.as_slice(), y.as_slice()].concat()));
                }
            }
            let next = class.len();
            let id = *class.entry(sig).or_insert(next);
            (u, id)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_enumeration() {
        assert_eq!(
            words_up_to(2, 2),
            vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(words_up_to(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn residuals_of_ends_with_a() {
        let ends_a = |w: &[usize]| w.last() == Some(&0);
        assert_eq!(residual_count(&ends_a, 2, 4, 3), 2);
    }

    #[test]
    fn two_sided_classes_of_ends_with_a() {
        let ends_a = |w: &[usize]| w.last() == Some(&0);
        let classes = two_sided_classes(&ends_a, 2, 3, 2);
        let distinct: std::collections::BTreeSet<usize> = classes.iter().map(|c| c.1).collect();
        assert_eq!(distinct.len(), 3);
    }
}
