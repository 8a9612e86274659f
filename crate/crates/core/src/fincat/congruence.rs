//! Quotient objects of representables, stored as kernel congruences.
//!
//! A quotient of `y(c)` is determined up to isomorphism by the equivalence
//! relation it induces on `⨆_{c′} Hom(c′, c)`. That relation is right
//! compatible: `u ≡ v` implies `u∘g ≡ v∘g`. We store it as one block label per
//! morphism into `c`, numbered by first appearance along the id order, so two
//! congruences are equal as quotient objects iff their labels are equal.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use super::category::{FiniteCategory, MorId, ObjId};
use super::error::FincatError;
use super::presheaf::{representable, Presheaf, PresheafMorphism};

/// Default cap on `|y(c)|` and on the number of congruences found per object.
pub const DEFAULT_BUDGET: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepCongruence {
    base: ObjId,
    // labels[i] is the block of site.arrows_into(base)[i]
    labels: Vec<u32>,
}

impl RepCongruence {
    /// Kernel of an arbitrary key function on morphisms into `base`.
    ///
    /// Morphisms with different sources always land in different blocks.
    pub fn from_keys<K: Hash + Eq>(site: &FiniteCategory, base: ObjId, mut key: impl FnMut(MorId) -> K) -> Self {
        let mut seen: HashMap<(ObjId, K), u32> = HashMap::new();
        let labels = site
            .arrows_into(base)
            .iter()
            .map(|&u| {
                let next = seen.len() as u32;
                *seen.entry((site.src(u), key(u))).or_insert(next)
            })
            .collect();
        RepCongruence { base, labels }
    }

    /// Builds a congruence from explicit blocks and checks right compatibility.
    pub fn from_blocks(site: &FiniteCategory, base: ObjId, blocks: &[Vec<MorId>]) -> Result<Self, FincatError> {
        let into = site.arrows_into(base);
        let mut label = vec![usize::MAX; into.len()];
        for (b, block) in blocks.iter().enumerate() {
            for &u in block {
                if site.dst(u) != base || label[site.into_position(u)] != usize::MAX {
                    return Err(FincatError::Malformed(format!(
                        "`{}` cannot be placed in block {b}",
                        site.morphism_name(u)
                    )));
                }
                if site.src(u) != site.src(block[0]) {
                    return Err(FincatError::Malformed(format!(
                        "block {b} mixes morphisms with different sources"
                    )));
                }
                label[site.into_position(u)] = b;
            }
        }
        if let Some(i) = label.iter().position(|&l| l == usize::MAX) {
            return Err(FincatError::Malformed(format!(
                "`{}` is in no block",
                site.morphism_name(into[i])
            )));
        }
        let q = RepCongruence::from_keys(site, base, |u| label[site.into_position(u)]);
        if !q.is_right_compatible(site) {
            return Err(FincatError::Malformed("blocks are not right compatible".into()));
        }
        Ok(q)
    }

    /// The total congruence: one block per source object.
    pub fn total(site: &FiniteCategory, base: ObjId) -> Self {
        RepCongruence::from_keys(site, base, |_| ())
    }

    /// The discrete congruence.
    pub fn discrete(site: &FiniteCategory, base: ObjId) -> Self {
        RepCongruence::from_keys(site, base, |u| u)
    }

    pub fn base(&self) -> ObjId {
        self.base
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn label_of(&self, site: &FiniteCategory, u: MorId) -> u32 {
        debug_assert_eq!(site.dst(u), self.base);
        self.labels[site.into_position(u)]
    }

    pub fn related(&self, site: &FiniteCategory, u: MorId, v: MorId) -> bool {
        self.label_of(site, u) == self.label_of(site, v)
    }

    /// Blocks grouped by source object, each sorted by id, ordered by least member.
    pub fn blocks(&self, site: &FiniteCategory) -> Vec<Vec<MorId>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (&u, &l) in site.arrows_into(self.base).iter().zip(&self.labels) {
            blocks[l as usize].push(u);
        }
        blocks
    }

    /// The block containing `u`.
    pub fn block_of(&self, site: &FiniteCategory, u: MorId) -> Vec<MorId> {
        let l = self.label_of(site, u);
        site.arrows_into(self.base)
            .iter()
            .zip(&self.labels)
            .filter(|(_, &m)| m == l)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_right_compatible(&self, site: &FiniteCategory) -> bool {
        let into = site.arrows_into(self.base);
        for (i, &u) in into.iter().enumerate() {
            for (j, &v) in into.iter().enumerate().skip(i + 1) {
                if self.labels[i] != self.labels[j] {
                    continue;
                }
                for g in site.arrows_into(site.src(u)) {
                    if !self.related(site, site.compose(u, *g), site.compose(v, *g)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The action of `f: c′ → base`: `u ≡ v` iff `f∘u ≡ f∘v`.
    pub fn pull_back(&self, site: &FiniteCategory, f: MorId) -> RepCongruence {
        assert_eq!(site.dst(f), self.base, "pull_back along a morphism not into the base");
        RepCongruence::from_keys(site, site.src(f), |u| self.label_of(site, site.compose(f, u)))
    }

    /// Intersection of the two relations.
    pub fn meet(&self, other: &RepCongruence, site: &FiniteCategory) -> Result<RepCongruence, FincatError> {
        if self.base != other.base {
            return Err(FincatError::ObjectMismatch);
        }
        Ok(RepCongruence::from_keys(site, self.base, |u| {
            let i = site.into_position(u);
            (self.labels[i], other.labels[i])
        }))
    }

    /// Relation inclusion `self ⊆ other`.
    pub fn leq(&self, other: &RepCongruence) -> Result<bool, FincatError> {
        if self.base != other.base {
            return Err(FincatError::ObjectMismatch);
        }
        let mut image: HashMap<u32, u32> = HashMap::new();
        Ok(self
            .labels
            .iter()
            .zip(&other.labels)
            .all(|(&a, &b)| *image.entry(a).or_insert(b) == b))
    }

    pub fn is_total(&self, site: &FiniteCategory) -> bool {
        *self == RepCongruence::total(site, self.base)
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.labels.len()
    }

    /// Human-readable rendering: blocks of morphism names.
    pub fn render(&self, site: &FiniteCategory) -> String {
        let blocks: Vec<String> = self
            .blocks(site)
            .into_iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&u| site.morphism_name(u)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        blocks.join(" ")
    }
}

/// Kernel congruence of a morphism out of a representable.
pub fn image_quotient(m: &PresheafMorphism) -> Result<RepCongruence, FincatError> {
    let site = m.source().site().clone();
    let base = site
        .objects()
        .find(|&c| representable(&site, c).is_ok_and(|y| &y == m.source()))
        .ok_or(FincatError::NonRepresentableSource)?;
    Ok(RepCongruence::from_keys(&site, base, |u| m.apply(site.src(u), site.hom_position(u))))
}

/// The quotient `y(c)/q` together with the projection `y(c) ↠ y(c)/q`.
///
/// Each block is one element, named `[u]` after its least member `u`. The
/// class of `id_c` is `projection.apply(c, site.hom_position(id_c))`.
pub fn quotient_of_representable(
    site: &Arc<FiniteCategory>,
    q: &RepCongruence,
) -> Result<(Presheaf, PresheafMorphism), FincatError> {
    let base = q.base();
    let y = representable(site, base)?;
    // per object: block label -> element index
    let mut index: Vec<HashMap<u32, usize>> = vec![HashMap::new(); site.object_count()];
    let mut names: Vec<Vec<String>> = vec![Vec::new(); site.object_count()];
    for a in site.objects() {
        for &u in site.hom(a, base) {
            let l = q.label_of(site, u);
            let next = index[a.0].len();
            index[a.0].entry(l).or_insert_with(|| {
                names[a.0].push(format!("[{}]", site.morphism_name(u)));
                next
            });
        }
    }
    let class = |u: MorId| index[site.src(u).0][&q.label_of(site, u)];
    let mut action = Vec::with_capacity(site.morphism_count());
    for f in site.morphism_ids() {
        let mut row = vec![usize::MAX; names[site.dst(f).0].len()];
        for &u in site.hom(site.dst(f), base) {
            row[class(u)] = class(site.compose(u, f));
        }
        action.push(row);
    }
    let quotient = Presheaf::new(site.clone(), names, action)?;
    let components = site
        .objects()
        .map(|a| site.hom(a, base).iter().map(|&u| class(u)).collect())
        .collect();
    let projection = PresheafMorphism::new(y, quotient.clone(), components)?;
    Ok((quotient, projection))
}

/// `y(c)/q` together with the element that is the class of `id_c`.
pub fn quotient_pointed(site: &Arc<FiniteCategory>, q: &RepCongruence) -> Result<(Presheaf, usize), FincatError> {
    let (quot, proj) = quotient_of_representable(site, q)?;
    let c = q.base();
    let id_class = proj.apply(c, site.hom_position(site.identity(c)));
    Ok((quot, id_class))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Least congruence containing `q` and relating `u` with `v`.
fn join_principal(site: &FiniteCategory, q: &RepCongruence, u: MorId, v: MorId) -> RepCongruence {
    let mut first: HashMap<u32, usize> = HashMap::new();
    let parent = q
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| *first.entry(*l).or_insert(i))
        .collect();
    let mut uf = UnionFind { parent };
    let mut queue = VecDeque::from([(u, v)]);
    while let Some((a, b)) = queue.pop_front() {
        if uf.union(site.into_position(a), site.into_position(b)) {
            for &g in site.arrows_into(site.src(a)) {
                queue.push_back((site.compose(a, g), site.compose(b, g)));
            }
        }
    }
    RepCongruence::from_keys(site, q.base, |w| uf.find(site.into_position(w)))
}

/// All right-compatible partitions of `y(c)`, canonical and deduplicated.
///
/// Every congruence is a join of principal ones, so a breadth-first search
/// from the discrete congruence that merges one pair of blocks at a time
/// (followed by the compatibility closure) reaches all of them. The result
/// is sorted by decreasing block count, then by labels; the discrete
/// congruence comes first and the total one last.
pub fn enumerate_quotient_objects(
    site: &FiniteCategory,
    c: ObjId,
    cap: usize,
) -> Result<Vec<RepCongruence>, FincatError> {
    if c.0 >= site.object_count() {
        return Err(FincatError::UnknownObject(c.to_string()));
    }
    let size = site.arrows_into(c).len();
    if size > cap {
        return Err(FincatError::BudgetExceeded {
            object: site.object_name(c).to_owned(),
            what: "elements in the representable",
            size,
            cap,
        });
    }
    let start = RepCongruence::discrete(site, c);
    let mut seen: HashSet<RepCongruence> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        let blocks = q.blocks(site);
        for (i, bi) in blocks.iter().enumerate() {
            for bj in &blocks[i + 1..] {
                if site.src(bi[0]) != site.src(bj[0]) {
                    continue;
                }
                let joined = join_principal(site, &q, bi[0], bj[0]);
                if !seen.contains(&joined) {
                    if seen.len() >= cap {
                        return Err(FincatError::BudgetExceeded {
                            object: site.object_name(c).to_owned(),
                            what: "congruences",
                            size: seen.len() + 1,
                            cap,
                        });
                    }
                    seen.insert(joined.clone());
                    queue.push_back(joined);
                }
            }
        }
    }
    let mut all: Vec<RepCongruence> = seen.into_iter().collect();
    all.sort_by(|a, b| {
        b.block_count()
            .cmp(&a.block_count())
            .then_with(|| a.labels.cmp(&b.labels))
    });
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presheaf::yoneda_morphism;
    use crate::fixtures;

    /// Exhaustive oracle: every set partition of `arrows_into(c)` that respects
    /// sources, filtered by right compatibility.
    fn brute_force_count(site: &FiniteCategory, c: ObjId) -> usize {
        let into = site.arrows_into(c).to_vec();
        let mut count = 0;
        let mut labels = vec![0usize; into.len()];
        fn rec(
            site: &FiniteCategory,
            into: &[MorId],
            labels: &mut Vec<usize>,
            i: usize,
            max: usize,
            count: &mut usize,
        ) {
            if i == into.len() {
                let ok = into.iter().enumerate().all(|(a, &u)| {
                    into.iter().enumerate().all(|(b, &v)| {
                        if labels[a] != labels[b] {
                            return true;
                        }
                        if site.src(u) != site.src(v) {
                            return false;
                        }
                        site.arrows_into(site.src(u)).iter().all(|&g| {
                            let (x, y) = (site.compose(u, g), site.compose(v, g));
                            labels[site.into_position(x)] == labels[site.into_position(y)]
                        })
                    })
                });
                if ok {
                    *count += 1;
                }
                return;
            }
            for l in 0..=max {
                labels[i] = l;
                rec(site, into, labels, i + 1, max.max(l + 1), count);
            }
        }
        rec(site, &into, &mut labels, 0, 0, &mut count);
        count
    }

    #[test]
    fn idempotent_monoid_has_two_quotients() {
        let site = fixtures::idempotent_monoid();
        assert_eq!(enumerate_quotient_objects(&site, ObjId(0), DEFAULT_BUDGET).unwrap().len(), 2);
    }

    #[test]
    fn edge_object_has_two_quotients() {
        let site = fixtures::graph_site();
        let e = site.object_by_name("E").unwrap();
        assert_eq!(enumerate_quotient_objects(&site, e, DEFAULT_BUDGET).unwrap().len(), 2);
    }

    #[test]
    fn z2_has_two_quotients() {
        let site = fixtures::cyclic_site(2);
        assert_eq!(enumerate_quotient_objects(&site, ObjId(0), DEFAULT_BUDGET).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for site in [
            fixtures::idempotent_monoid(),
            fixtures::graph_site(),
            fixtures::cyclic_site(4),
            fixtures::symmetric_site(3),
            fixtures::chain_poset(3),
        ] {
            for c in site.objects() {
                let found = enumerate_quotient_objects(&site, c, DEFAULT_BUDGET).unwrap();
                assert_eq!(found.len(), brute_force_count(&site, c));
                assert!(found.iter().all(|q| q.is_right_compatible(&site)));
            }
        }
    }

    #[test]
    fn enumeration_contains_extremes_and_is_meet_closed() {
        let site = fixtures::dihedral_site();
        let c = ObjId(0);
        let all = enumerate_quotient_objects(&site, c, DEFAULT_BUDGET).unwrap();
        assert_eq!(all.first(), Some(&RepCongruence::discrete(&site, c)));
        assert_eq!(all.last(), Some(&RepCongruence::total(&site, c)));
        let set: HashSet<_> = all.iter().cloned().collect();
        for a in &all {
            for b in &all {
                assert!(set.contains(&a.meet(b, &site).unwrap()));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let site = fixtures::symmetric_site(3);
        match enumerate_quotient_objects(&site, ObjId(0), 5) {
            Err(FincatError::BudgetExceeded { size, cap, .. }) => assert_eq!((size, cap), (6, 5)),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn image_of_fixed_point_is_total() {
        let site = Arc::new(fixtures::idempotent_monoid());
        let one = Presheaf::new(site.clone(), vec![vec!["pt".into()]], vec![vec![0]; 2]).unwrap();
        let m = yoneda_morphism(&one, ObjId(0), 0).unwrap();
        assert!(image_quotient(&m).unwrap().is_total(&site));
    }

    #[test]
    fn loop_and_non_loop_edges() {
        let site = Arc::new(fixtures::graph_site());
        let e = site.object_by_name("E").unwrap();
        let edge = fixtures::single_edge_graph(&site);
        let q = image_quotient(&yoneda_morphism(&edge, e, 0).unwrap()).unwrap();
        assert!(q.is_discrete());
        let lp = fixtures::single_loop_graph(&site);
        let q = image_quotient(&yoneda_morphism(&lp, e, 0).unwrap()).unwrap();
        assert!(q.is_total(&site));
    }

    #[test]
    fn non_representable_source_is_rejected() {
        let site = Arc::new(fixtures::graph_site());
        let edge = fixtures::single_edge_graph(&site);
        let id = edge.identity_morphism();
        assert!(matches!(image_quotient(&id), Err(FincatError::NonRepresentableSource)));
    }

    #[test]
    fn quotient_classifies_back_to_its_congruence() {
        let site = Arc::new(fixtures::dihedral_site());
        let c = ObjId(0);
        for q in enumerate_quotient_objects(&site, c, DEFAULT_BUDGET).unwrap() {
            let (quot, proj) = quotient_of_representable(&site, &q).unwrap();
            assert!(proj.is_epi());
            let id_class = proj.apply(c, site.hom_position(site.identity(c)));
            let m = yoneda_morphism(&quot, c, id_class).unwrap();
            assert_eq!(image_quotient(&m).unwrap(), q);
        }
    }

    #[test]
    fn from_blocks_rejects_incompatible_partition() {
        let site = fixtures::symmetric_site(3);
        let c = ObjId(0);
        // {e, (12)} and singletons is a coset partition only if it is right cosets of ⟨(12)⟩
        let into = site.arrows_into(c).to_vec();
        let blocks = vec![vec![into[0], into[1]], vec![into[2]], vec![into[3]], vec![into[4]], vec![into[5]]];
        assert!(RepCongruence::from_blocks(&site, c, &blocks).is_err());
    }
}
