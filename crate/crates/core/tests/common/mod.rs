#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use topos_core::fincat::{quotient_of_representable, FiniteCategory, ObjId, Presheaf};
use topos_core::words::{Alphabet, Dfa, RightCongruence};

/// Complete DFA with `1..=max_states` states, uniformly random transitions
/// and acceptance.
pub fn random_dfa(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let delta = (0..n)
        .map(|_| (0..alphabet.len()).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(alphabet.clone(), delta, 0, accepting).unwrap()
}

/// Raw transition table with `1..=max_states` states.
pub fn random_table(rng: &mut impl Rng, k: usize, max_states: usize) -> Vec<Vec<usize>> {
    let n = rng.gen_range(1..=max_states);
    (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect()
}

/// Whether some bijection between the parts reachable from `sa` and `sb`
/// maps `sa` to `sb` and commutes with the transitions. Plain backtracking
/// over candidate images; no canonical numbering is involved.
pub fn pointed_isomorphic(a: &[Vec<usize>], sa: usize, b: &[Vec<usize>], sb: usize) -> bool {
    let reach = |d: &[Vec<usize>], s: usize| {
        let mut seen = vec![false; d.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(q) = stack.pop() {
            for &t in &d[q] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..d.len()).filter(|&q| seen[q]).collect::<Vec<_>>()
    };
    let ra = reach(a, sa);
    let rb = reach(b, sb);
    if ra.len() != rb.len() {
        return false;
    }
    let mut map = vec![None; a.len()];
    let mut used = vec![false; b.len()];
    map[sa] = Some(sb);
    used[sb] = true;
    // sa first so the forced assignment is checked with the rest
    let order: Vec<usize> = std::iter::once(sa).chain(ra.iter().copied().filter(|&q| q != sa)).collect();

    fn consistent(a: &[Vec<usize>], b: &[Vec<usize>], map: &[Option<usize>], q: usize) -> bool {
        for (x, row) in a.iter().enumerate() {
            let Some(ix) = map[x] else { continue };
            for (letter, &t) in row.iter().enumerate() {
                if x == q || t == q {
                    if let Some(it) = map[t] {
                        if b[ix][letter] != it {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn search(
        i: usize,
        order: &[usize],
        rb: &[usize],
        a: &[Vec<usize>],
        b: &[Vec<usize>],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let q = order[i];
        if i == 0 {
            return consistent(a, b, map, q) && search(1, order, rb, a, b, map, used);
        }
        for &cand in rb {
            if used[cand] {
                continue;
            }
            map[q] = Some(cand);
            used[cand] = true;
            if consistent(a, b, map, q) && search(i + 1, order, rb, a, b, map, used) {
                return true;
            }
            map[q] = None;
            used[cand] = false;
        }
        false
    }

    search(0, &order, &rb, a, b, &mut map, &mut used)
}

/// A table isomorphic to `d` under a random relabeling, with the image of `start`.
pub fn relabel(rng: &mut impl Rng, d: &[Vec<usize>], start: usize) -> (Vec<Vec<usize>>, usize) {
    let n = d.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut out = vec![Vec::new(); n];
    for q in 0..n {
        out[perm[q]] = d[q].iter().map(|&t| perm[t]).collect();
    }
    (out, perm[start])
}

pub fn nerode_of(src: &str, alphabet: &Alphabet) -> RightCongruence {
    let r = topos_core::words::parse_regex(src, alphabet).unwrap();
    topos_core::words::regex_to_min_dfa(&r, alphabet).nerode_congruence()
}

/// The quotients `y(c)/q` for every congruence `q` at every object.
pub fn representable_quotients(site: &Arc<FiniteCategory>, cap: usize) -> Vec<Presheaf> {
    let mut out = Vec::new();
    for c in site.objects().collect::<Vec<ObjId>>() {
        for q in topos_core::fincat::enumerate_quotient_objects(site, c, cap).unwrap() {
            out.push(quotient_of_representable(site, &q).unwrap().0);
        }
    }
    out
}
