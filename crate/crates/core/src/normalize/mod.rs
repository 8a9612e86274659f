//! The normalization operator `ξ_Ξ: Ξ → Ξ` and its group specialization.
//!
//! `ξ_Ξ` is the cocone component of `Ξ` at itself: it sends `q ∈ Ξ(c)` to
//! the congruence `u ≈ v ⟺ q·u = q·v`. For a group `G` the elements of `Ξ`
//! are subgroups and `ξ_Ξ(H) = N_G(H)`.

mod group;

use std::sync::Arc;

use serde::Serialize;

pub use group::{FiniteGroup, GroupError, GroupFile, Subgroup};

use crate::certificate::Verdict;
use crate::fincat::{FincatError, FiniteCategory, MorId, ObjId, PresheafMorphism, RepCongruence};
use crate::lsc::LocalStateClassifier;

/// `ξ_Ξ`, computed as the generic cocone component at `Ξ` viewed as a presheaf.
///
/// `cap` bounds the total number of elements of `Ξ`.
pub fn normalization_operator(l: &LocalStateClassifier, cap: usize) -> Result<PresheafMorphism, FincatError> {
    let size = l.total_size();
    if size > cap {
        return Err(FincatError::BudgetExceeded {
            object: "Ξ".into(),
            what: "elements",
            size,
            cap,
        });
    }
    l.xi_component(l.xi())
}

/// Checks `q ≤ ξ_Ξ(q)` for every `q`.
pub fn check_normalization_lemma(l: &LocalStateClassifier, op: &PresheafMorphism) -> Verdict {
    let site = l.site();
    let witness = site.objects().find_map(|c| {
        (0..l.congruences(c).len())
            .find(|&i| !l.leq(c, i, op.apply(c, i)))
            .map(|i| {
                format!(
                    "at `{}`: {} ≰ {}",
                    site.object_name(c),
                    l.congruence(c, i).render(site),
                    l.congruence(c, op.apply(c, i)).render(site)
                )
            })
    });
    Verdict::from_witness("normalization lemma q ≤ ξ_Ξ(q)", witness)
}

/// `q` with `ξ_Ξ(ξ_Ξ(q)) ≠ ξ_Ξ(q)`.
pub fn non_idempotence_witness(l: &LocalStateClassifier, op: &PresheafMorphism) -> Option<(ObjId, usize)> {
    l.site().objects().find_map(|c| {
        (0..l.congruences(c).len())
            .find(|&i| op.apply(c, op.apply(c, i)) != op.apply(c, i))
            .map(|i| (c, i))
    })
}

/// `q1 ≤ q2` with `ξ_Ξ(q1) ≰ ξ_Ξ(q2)`.
pub fn non_monotonicity_witness(l: &LocalStateClassifier, op: &PresheafMorphism) -> Option<(ObjId, usize, usize)> {
    l.site().objects().find_map(|c| {
        let n = l.congruences(c).len();
        (0..n).find_map(|i| {
            (0..n)
                .find(|&j| l.leq(c, i, j) && !l.leq(c, op.apply(c, i), op.apply(c, j)))
                .map(|j| (c, i, j))
        })
    })
}

pub fn is_identity(l: &LocalStateClassifier, op: &PresheafMorphism) -> bool {
    l.site()
        .objects()
        .all(|c| (0..l.congruences(c).len()).all(|i| op.apply(c, i) == i))
}

/// Whether `ξ_Ξ` factors through the terminal object, i.e. is constantly `⊤`.
pub fn is_constant_top(l: &LocalStateClassifier, op: &PresheafMorphism) -> bool {
    l.site()
        .objects()
        .all(|c| (0..l.congruences(c).len()).all(|i| op.apply(c, i) == l.top(c)))
}

/// Whether every `q ∈ Ξ(c)` satisfies `q·u = q·v` for all `u, v` into `c`.
///
/// For a group site this says every subgroup is normal.
pub fn action_is_trivial(l: &LocalStateClassifier) -> bool {
    let site = l.site();
    let xi = l.xi();
    site.objects().all(|c| {
        let into = site.arrows_into(c);
        (0..xi.card(c)).all(|q| {
            let first = xi.act(into[0], q);
            into.iter().all(|&u| xi.act(u, q) == first)
        })
    })
}

/// Subgroups of `G` as right-coset congruences on the one-object site of `G`.
#[derive(Clone, Debug)]
pub struct CosetEncoding {
    group: FiniteGroup,
    site: Arc<FiniteCategory>,
}

impl CosetEncoding {
    pub fn new(group: FiniteGroup) -> Self {
        let site = Arc::new(group.to_site());
        CosetEncoding { group, site }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn site(&self) -> &Arc<FiniteCategory> {
        &self.site
    }

    /// Right cosets `Hg`: `u ≡ v ⟺ u·v⁻¹ ∈ H`.
    pub fn forward(&self, h: &Subgroup) -> RepCongruence {
        let g = &self.group;
        // the coset Hu is identified by its least member
        RepCongruence::from_keys(&self.site, ObjId(0), |u: MorId| {
            h.members().iter().map(|&x| g.mul(x, u.0)).min().expect("nonempty subgroup")
        })
    }

    /// The block of the identity.
    pub fn backward(&self, q: &RepCongruence) -> Result<Subgroup, GroupError> {
        let block = q.block_of(&self.site, MorId(self.group.identity()));
        let members: Vec<usize> = block.iter().map(|m| m.0).collect();
        self.group.subgroup(members.iter().copied()).map_err(|_| {
            let names: Vec<&str> = members.iter().map(|&m| self.group.element_name(m)).collect();
            GroupError::NotACongruenceOfSubgroupForm(format!("{{{}}}", names.join(",")))
        })
    }
}

/// `N_G(H) = {g | g⁻¹Hg = H}` by direct conjugation.
pub fn normalizer_direct(g: &FiniteGroup, h: &Subgroup) -> Result<Subgroup, GroupError> {
    let h = g.subgroup(h.members().iter().copied())?;
    g.subgroup((0..g.order()).filter(|&x| g.conjugate(&h, x) == h))
}

/// Subgroup lattice and normalization arrows of a group.
#[derive(Clone, Debug, Serialize)]
pub struct GroupAnalysis {
    pub group: String,
    pub order: usize,
    pub subgroups: Vec<SubgroupEntry>,
    /// Covering pairs `(smaller, larger)` of the subgroup lattice, by label.
    pub lattice_edges: Vec<(String, String)>,
    /// `H → ξ_Ξ(H)` for every subgroup, by label.
    pub normalization_arrows: Vec<(String, String)>,
    pub dedekind: bool,
    pub constant_top: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupEntry {
    pub label: String,
    pub members: Vec<String>,
    pub normal: bool,
}

/// The categorical normalization map on subgroups, `backward ∘ ξ_Ξ ∘ forward`.
pub fn categorical_normalizers(
    enc: &CosetEncoding,
    l: &LocalStateClassifier,
    op: &PresheafMorphism,
) -> Result<Vec<(Subgroup, Subgroup)>, GroupError> {
    let star = ObjId(0);
    enc.group
        .subgroups()
        .into_iter()
        .map(|h| {
            let q = enc.forward(&h);
            let i = l.index_of(&q).ok_or_else(|| {
                GroupError::NotACongruenceOfSubgroupForm(format!("{} is not in Ξ", enc.group.render_set(&h)))
            })?;
            let n = enc.backward(l.congruence(star, op.apply(star, i)))?;
            Ok((h, n))
        })
        .collect()
}

/// Builds `Ξ` for the group site and tabulates subgroups and `ξ_Ξ`.
pub fn analyze_group(g: &FiniteGroup, cap: usize) -> Result<(GroupAnalysis, Vec<Verdict>), AnalysisError> {
    let enc = CosetEncoding::new(g.clone());
    let l = LocalStateClassifier::build(enc.site.clone(), cap)?;
    let op = normalization_operator(&l, cap)?;
    let pairs = categorical_normalizers(&enc, &l, &op)?;
    let subgroups: Vec<Subgroup> = pairs.iter().map(|(h, _)| h.clone()).collect();
    let mut lattice_edges = Vec::new();
    for a in &subgroups {
        for b in &subgroups {
            let covers = a != b
                && a.is_subset_of(b)
                && !subgroups
                    .iter()
                    .any(|m| m != a && m != b && a.is_subset_of(m) && m.is_subset_of(b));
            if covers {
                lattice_edges.push((g.label(a), g.label(b)));
            }
        }
    }
    let mut oracle_mismatch = None;
    for (h, n) in &pairs {
        if &normalizer_direct(g, h)? != n && oracle_mismatch.is_none() {
            oracle_mismatch = Some(format!("{} ↦ {}", g.label(h), g.label(n)));
        }
    }
    let dedekind = g.is_dedekind();
    let constant_top = is_constant_top(&l, &op);
    let verdicts = vec![
        check_normalization_lemma(&l, &op),
        Verdict::from_witness("ξ_Ξ agrees with direct normalizers", oracle_mismatch),
        Verdict::from_witness(
            "ξ_Ξ constantly ⊤ exactly for Dedekind groups",
            (dedekind != constant_top).then(|| format!("dedekind = {dedekind}, constant ⊤ = {constant_top}")),
        ),
    ];
    let analysis = GroupAnalysis {
        group: g.name().to_owned(),
        order: g.order(),
        subgroups: subgroups
            .iter()
            .map(|h| SubgroupEntry {
                label: g.label(h),
                members: h.members().iter().map(|&x| g.element_name(x).to_owned()).collect(),
                normal: g.is_normal(h),
            })
            .collect(),
        lattice_edges,
        normalization_arrows: pairs.iter().map(|(h, n)| (g.label(h), g.label(n))).collect(),
        dedekind,
        constant_top,
    };
    Ok((analysis, verdicts))
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Fincat(#[from] FincatError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
