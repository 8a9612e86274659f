//! Bundled sites, presheaves and languages used by tests, the verifier
//! suites and the CLI.

use std::sync::Arc;

use crate::fincat::{FiniteCategory, MorId, Morphism, ObjId, Presheaf};
use crate::normalize::FiniteGroup;

/// The monoid `{1, x}` with `x² = x`.
pub fn idempotent_monoid() -> FiniteCategory {
    let names = ["1".to_string(), "x".to_string()];
    FiniteCategory::from_monoid(&names, &[vec![0, 1], vec![1, 1]]).expect("idempotent monoid")
}

/// `V ⇉ E` with arrows `s, t: V → E`; presheaves on it are directed graphs.
pub fn graph_site() -> FiniteCategory {
    let (v, e) = (ObjId(0), ObjId(1));
    let morphisms = vec![
        Morphism::new("id_V", v, v),
        Morphism::new("id_E", e, e),
        Morphism::new("s", v, e),
        Morphism::new("t", v, e),
    ];
    FiniteCategory::from_parts(
        vec!["V".into(), "E".into()],
        morphisms,
        vec![MorId(0), MorId(1)],
        |g, f| match (g.0, f.0) {
            (0, 0) => Some(MorId(0)),
            (1, 1) => Some(MorId(1)),
            (1, 2) | (2, 0) => Some(MorId(2)),
            (1, 3) | (3, 0) => Some(MorId(3)),
            _ => None,
        },
    )
    .expect("graph site")
}

pub fn cyclic_site(n: usize) -> FiniteCategory {
    FiniteGroup::cyclic(n).to_site()
}

pub fn symmetric_site(n: usize) -> FiniteCategory {
    FiniteGroup::symmetric(n).to_site()
}

pub fn dihedral_site() -> FiniteCategory {
    FiniteGroup::dihedral4().to_site()
}

pub fn quaternion_site() -> FiniteCategory {
    FiniteGroup::quaternion().to_site()
}

/// `0 → 1 → … → n-1`.
pub fn chain_poset(n: usize) -> FiniteCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteCategory::from_poset(&refs, |a, b| a < b).expect("chain")
}

/// `a ← m → b`: a bottom element below two incomparable ones.
pub fn vee_poset() -> FiniteCategory {
    FiniteCategory::from_poset(&["m", "a", "b"], |x, y| x == 0 && y != 0).expect("vee")
}

/// Graph with one edge between two distinct vertices.
pub fn single_edge_graph(site: &Arc<FiniteCategory>) -> Presheaf {
    graph(site, &["u", "v"], &[("e", 0, 1)])
}

/// Graph with one vertex and one loop on it.
pub fn single_loop_graph(site: &Arc<FiniteCategory>) -> Presheaf {
    graph(site, &["u"], &[("l", 0, 0)])
}

/// A graph on `site` (which must be [`graph_site`]) from vertices and
/// `(name, source, target)` edges.
pub fn graph(site: &Arc<FiniteCategory>, vertices: &[&str], edges: &[(&str, usize, usize)]) -> Presheaf {
    let names = vec![
        vertices.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|e| e.0.to_string()).collect(),
    ];
    let action = vec![
        (0..vertices.len()).collect(),
        (0..edges.len()).collect(),
        edges.iter().map(|e| e.1).collect(),
        edges.iter().map(|e| e.2).collect(),
    ];
    Presheaf::new(site.clone(), names, action).expect("graph presheaf")
}

/// Named group fixtures: D4, Q8, S3, S4, V4 and `Z/n` for `n ≤ 6`.
pub fn groups() -> Vec<FiniteGroup> {
    let mut out = vec![
        FiniteGroup::dihedral4(),
        FiniteGroup::quaternion(),
        FiniteGroup::symmetric(3),
        FiniteGroup::symmetric(4),
        FiniteGroup::klein(),
    ];
    out.extend((1..=6).map(FiniteGroup::cyclic));
    out
}

/// Named non-group sites: the graph site, the idempotent monoid and three posets.
pub fn sites() -> Vec<(String, FiniteCategory)> {
    vec![
        ("graph".into(), graph_site()),
        ("idempotent".into(), idempotent_monoid()),
        ("chain2".into(), chain_poset(2)),
        ("chain3".into(), chain_poset(3)),
        ("vee".into(), vee_poset()),
    ]
}

pub fn poset_sites() -> Vec<(String, FiniteCategory)> {
    sites().into_iter().filter(|(_, s)| s.is_thin()).collect()
}

/// Regular expressions over `{a, b}`.
pub const REGEXES: [&str; 12] = [
    "(ab)*",
    "(a|b)*a",
    "a*",
    "#e",
    "#0",
    "(a|b)*",
    "a(a|b)*",
    "(a|b)*b",
    "(a|b)*ab(a|b)*",
    "(aa|b)*",
    "a*b*",
    "((a|b)(a|b))*",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_site_has_parallel_arrows() {
        let site = graph_site();
        let (v, e) = (ObjId(0), ObjId(1));
        assert_eq!(site.hom(v, e).len(), 2);
        assert!(site.hom(e, v).is_empty());
    }

    #[test]
    fn posets_are_thin() {
        assert_eq!(poset_sites().len(), 3);
        assert!(!graph_site().is_thin());
    }
}
