//! Internal filters of `Ξ` and the hyperconnected quotients they classify.
//!
//! A filter `F ⊆ Ξ` is checked pointwise: closed under the action, containing
//! `⊤`, upward closed and meet closed. It induces the full subcategory `E_F`
//! of presheaves `X` whose `ξ_X` lands in `F`, and the comonad `G` with
//! `GX(c) = {x | ξ_X(x) ∈ F(c)}`.

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::certificate::{Certificate, Verdict};
use crate::fincat::limits::{binary_product, coproduct, equalizer, find_morphisms, pair_index, subpresheaf, terminal};
use crate::fincat::{quotient_pointed, FincatError, ObjId, Presheaf, PresheafMorphism};
use crate::lsc::LocalStateClassifier;

/// Certificate check names of [`Selection::certify`], in order.
pub const SELF_MEMBERSHIP: &str = "F belongs to E_F";
pub const COCONE: &str = "cocone on E_F";
pub const JOINT_SURJECTIVITY: &str = "joint surjectivity of ξ^F";
pub const COMONAD: &str = "G is an idempotent lex comonad";

/// Filter document: object name → indices into `Ξ` at that object.
pub type FilterFile = BTreeMap<String, Vec<usize>>;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("not closed under the action: {0}")]
    NotSubpresheaf(String),
    #[error("not upward closed: {0}")]
    NotUpwardClosed(String),
    #[error("missing top at `{0}`")]
    MissingTop(String),
    #[error("not closed under meets: {0}")]
    NotMeetClosed(String),
    #[error("malformed selection: {0}")]
    Malformed(String),
    #[error(transparent)]
    Fincat(#[from] FincatError),
}

/// A pointwise subset of `Ξ`, not necessarily a filter.
#[derive(Clone, Debug)]
pub struct Selection {
    lsc: Arc<LocalStateClassifier>,
    member: Vec<Vec<bool>>,
}

/// A [`Selection`] satisfying every filter clause.
#[derive(Clone, Debug)]
pub struct InternalFilter(Selection);

impl Deref for InternalFilter {
    type Target = Selection;

    fn deref(&self) -> &Selection {
        &self.0
    }
}

impl Selection {
    /// `indices[c]` lists members of `F(c)` by their position in `Ξ(c)`.
    pub fn new(lsc: Arc<LocalStateClassifier>, indices: &[Vec<usize>]) -> Result<Self, FilterError> {
        let site = lsc.site().clone();
        if indices.len() != site.object_count() {
            return Err(FilterError::Malformed(format!(
                "{} objects selected, site has {}",
                indices.len(),
                site.object_count()
            )));
        }
        let mut member: Vec<Vec<bool>> = site.objects().map(|c| vec![false; lsc.congruences(c).len()]).collect();
        for c in site.objects() {
            for &i in &indices[c.0] {
                *member[c.0].get_mut(i).ok_or_else(|| {
                    FilterError::Malformed(format!("index {i} out of range at `{}`", site.object_name(c)))
                })? = true;
            }
        }
        Ok(Selection { lsc, member })
    }

    /// `member[c][i]` says whether the `i`-th element of `Ξ(c)` is selected.
    pub fn from_mask(lsc: Arc<LocalStateClassifier>, member: Vec<Vec<bool>>) -> Result<Self, FilterError> {
        let site = lsc.site();
        let shape_ok = member.len() == site.object_count()
            && site.objects().all(|c| member[c.0].len() == lsc.congruences(c).len());
        if !shape_ok {
            return Err(FilterError::Malformed("mask does not match the shape of Ξ".into()));
        }
        Ok(Selection { lsc, member })
    }

    pub fn all(lsc: Arc<LocalStateClassifier>) -> Self {
        let member = lsc
            .site()
            .objects()
            .map(|c| vec![true; lsc.congruences(c).len()])
            .collect();
        Selection { lsc, member }
    }

    /// `{⊤(c)}` at every object.
    pub fn top(lsc: Arc<LocalStateClassifier>) -> Self {
        let member = lsc
            .site()
            .objects()
            .map(|c| (0..lsc.congruences(c).len()).map(|i| i == lsc.top(c)).collect())
            .collect();
        Selection { lsc, member }
    }

    pub fn from_file(lsc: Arc<LocalStateClassifier>, file: &FilterFile) -> Result<Self, FilterError> {
        let mut indices = vec![Vec::new(); lsc.site().object_count()];
        for (name, idx) in file {
            indices[lsc.site().object_by_name(name)?.0] = idx.clone();
        }
        Selection::new(lsc, &indices)
    }

    pub fn to_file(&self) -> FilterFile {
        let site = self.lsc.site();
        site.objects()
            .map(|c| (site.object_name(c).to_owned(), self.indices(c)))
            .collect()
    }

    pub fn lsc(&self) -> &Arc<LocalStateClassifier> {
        &self.lsc
    }

    pub fn contains(&self, c: ObjId, i: usize) -> bool {
        self.member[c.0][i]
    }

    pub fn indices(&self, c: ObjId) -> Vec<usize> {
        (0..self.member[c.0].len()).filter(|&i| self.member[c.0][i]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn describe(&self, c: ObjId, i: usize) -> String {
        format!(
            "{} at `{}`",
            self.lsc.congruence(c, i).render(self.lsc.site()),
            self.lsc.site().object_name(c)
        )
    }

    /// `F` as a subpresheaf of `Ξ`, with its inclusion.
    pub fn as_presheaf(&self) -> Result<(Presheaf, PresheafMorphism), FincatError> {
        subpresheaf(self.lsc.xi(), &self.member)
    }

    /// Membership of `X` in `E_F`; when `X` belongs, also the corestriction
    /// `ξ^F_X: X → F`.
    pub fn in_subcategory(&self, x: &Presheaf) -> Result<Option<PresheafMorphism>, FincatError> {
        let xi_x = self.lsc.xi_component(x)?;
        let site = self.lsc.site();
        if !x.elements().all(|(c, e)| self.contains(c, xi_x.apply(c, e))) {
            return Ok(None);
        }
        let (f, _) = self.as_presheaf()?;
        let position: Vec<Vec<usize>> = site
            .objects()
            .map(|c| {
                let mut pos = vec![usize::MAX; self.member[c.0].len()];
                for (k, i) in self.indices(c).into_iter().enumerate() {
                    pos[i] = k;
                }
                pos
            })
            .collect();
        let components = site
            .objects()
            .map(|c| xi_x.component(c).iter().map(|&q| position[c.0][q]).collect())
            .collect();
        PresheafMorphism::new(x.clone(), f, components).map(Some)
    }

    /// `GX` with its counit `GX ↣ X`.
    pub fn comonad_apply(&self, x: &Presheaf) -> Result<(Presheaf, PresheafMorphism), FincatError> {
        subpresheaf(x, &self.g_mask(x)?)
    }

    /// Membership mask of `GX` inside `X`.
    fn g_mask(&self, x: &Presheaf) -> Result<Vec<Vec<bool>>, FincatError> {
        let xi_x = self.lsc.xi_component(x)?;
        Ok(x.site()
            .objects()
            .map(|c| (0..x.card(c)).map(|e| self.contains(c, xi_x.apply(c, e))).collect())
            .collect())
    }

    /// First `q ∈ F(c)` with `ξ_F(q) ∉ F(c)`; `None` when `F ∈ E_F`.
    ///
    /// `ξ_F(q)` agrees with `ξ_Ξ(q)` since `F ↣ Ξ` is monic.
    pub fn self_membership_witness(&self) -> Option<(ObjId, usize)> {
        let l = &self.lsc;
        let site = l.site();
        site.objects().find_map(|c| {
            self.indices(c)
                .into_iter()
                .find(|&i| !self.contains(c, l.classify(l.xi(), c, i)))
                .map(|i| (c, i))
        })
    }

    /// Checks `F ∈ E_F`, the cocone and joint-surjectivity properties of
    /// `ξ^F`, and that `G` is an idempotent lex comonad with monic counit.
    pub fn certify(&self, samples: &[Presheaf]) -> Certificate {
        let mut cert = Certificate::default();
        cert.push(self.clause_self_membership());
        let members = match self.sample_members(samples) {
            Ok(m) => m,
            Err(e) => {
                cert.push(Verdict::fail(COCONE, e.to_string()));
                return cert;
            }
        };
        for (name, v) in [
            (COCONE, self.clause_cocone(&members)),
            (JOINT_SURJECTIVITY, self.clause_joint_surjectivity()),
            (COMONAD, self.clause_comonad(samples)),
        ] {
            cert.push(v.unwrap_or_else(|e| Verdict::fail(name, e.to_string())));
        }
        cert
    }

    fn clause_self_membership(&self) -> Verdict {
        let name = SELF_MEMBERSHIP;
        if let Err(e) = self.as_presheaf() {
            return Verdict::fail(name, e.to_string());
        }
        let witness = self.self_membership_witness().map(|(c, i)| {
            let l = &self.lsc;
            format!(
                "{} classifies to {}",
                self.describe(c, i),
                l.congruence(c, l.classify(l.xi(), c, i)).render(l.site())
            )
        });
        Verdict::from_witness(name, witness)
    }

    /// Sample presheaves in `E_F`, plus `GX` for every sample.
    fn sample_members(&self, samples: &[Presheaf]) -> Result<Vec<Presheaf>, FincatError> {
        let mut out = Vec::new();
        for x in samples {
            if self.in_subcategory(x)?.is_some() {
                out.push(x.clone());
            }
            let (gx, _) = self.comonad_apply(x)?;
            if !out.contains(&gx) {
                out.push(gx);
            }
        }
        Ok(out)
    }

    fn clause_cocone(&self, members: &[Presheaf]) -> Result<Verdict, FincatError> {
        const PER_PAIR: usize = 64;
        let name = COCONE;
        let mut monos: Vec<PresheafMorphism> = Vec::new();
        for z in members {
            for z2 in members {
                monos.extend(find_morphisms(z, z2, true, PER_PAIR));
                if z != z2 {
                    let (_, inl, inr) = coproduct(z, z2)?;
                    monos.push(inl);
                    monos.push(inr);
                }
            }
        }
        let mut checked = 0;
        for m in &monos {
            let (Some(lift_src), Some(lift_dst)) = (self.in_subcategory(m.source())?, self.in_subcategory(m.target())?)
            else {
                continue;
            };
            let site = self.lsc.site();
            for (c, e) in m.source().elements() {
                if lift_dst.apply(c, m.apply(c, e)) != lift_src.apply(c, e) {
                    return Ok(Verdict::fail(
                        name,
                        format!("element `{}` at `{}`", m.source().name(c, e), site.object_name(c)),
                    ));
                }
            }
            checked += 1;
        }
        Ok(Verdict::pass_with_note(name, format!("{checked} monomorphisms")))
    }

    fn clause_joint_surjectivity(&self) -> Result<Verdict, FincatError> {
        let name = JOINT_SURJECTIVITY;
        let l = &self.lsc;
        for c in l.site().objects() {
            for i in self.indices(c) {
                let (quot, id_class) = quotient_pointed(l.site(), l.congruence(c, i))?;
                if l.classify(&quot, c, id_class) != i {
                    return Ok(Verdict::fail(name, format!("{} is not hit", self.describe(c, i))));
                }
                if self.in_subcategory(&quot)?.is_none() {
                    return Ok(Verdict::fail(
                        name,
                        format!("quotient by {} is outside E_F", self.describe(c, i)),
                    ));
                }
            }
        }
        Ok(Verdict::pass(name))
    }

    fn clause_comonad(&self, samples: &[Presheaf]) -> Result<Verdict, FincatError> {
        const PARALLEL_PAIRS: usize = 6;
        let name = COMONAD;
        let site = self.lsc.site();
        let fail = |w: String| Ok(Verdict::fail(name, w));
        let one = terminal(site);
        let (g_one, _) = self.comonad_apply(&one)?;
        if g_one != one {
            return fail("G does not preserve the terminal object".into());
        }
        for x in samples {
            let (gx, counit) = self.comonad_apply(x)?;
            if !counit.is_mono() {
                return fail("counit is not monic".into());
            }
            let (ggx, _) = self.comonad_apply(&gx)?;
            if ggx != gx {
                return fail("G is not idempotent".into());
            }
            for y in samples {
                // G(X×Y) and GX×GY as subsets of X×Y
                let p = binary_product(x, y)?;
                let g_xy = self.g_mask(&p.object)?;
                let (gx_mask, gy_mask) = (self.g_mask(x)?, self.g_mask(y)?);
                for c in site.objects() {
                    for (a, &ga) in gx_mask[c.0].iter().enumerate() {
                        for (b, &gb) in gy_mask[c.0].iter().enumerate() {
                            let idx = pair_index(y, c, a, b);
                            if g_xy[c.0][idx] != (ga && gb) {
                                return fail(format!(
                                    "G(X×Y) ≠ GX×GY at ({},{}) in `{}`",
                                    x.name(c, a),
                                    y.name(c, b),
                                    site.object_name(c)
                                ));
                            }
                        }
                    }
                }
                // G(Eq(f,g)) = Eq(Gf,Gg), both as subsets of X
                let maps = find_morphisms(x, y, false, PARALLEL_PAIRS);
                for f in &maps {
                    for g in &maps {
                        let (eq, inc) = equalizer(f, g)?;
                        let g_eq = self.g_mask(&eq)?;
                        for c in site.objects() {
                            for (e, &ge) in gx_mask[c.0].iter().enumerate() {
                                let in_eq = inc.component(c).iter().position(|&z| z == e);
                                let lhs = in_eq.is_some_and(|k| g_eq[c.0][k]);
                                let rhs = ge && f.apply(c, e) == g.apply(c, e);
                                if lhs != rhs {
                                    return fail(format!(
                                        "G does not preserve an equalizer at `{}` in `{}`",
                                        x.name(c, e),
                                        site.object_name(c)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Verdict::pass(name))
    }
}

/// Validates every filter clause, reporting the first violation in the order
/// action closure, upward closure, top, meets.
pub fn validate_filter(selection: Selection) -> Result<InternalFilter, FilterError> {
    let l = selection.lsc.clone();
    let site = l.site();
    let xi = l.xi();
    for f in site.morphism_ids() {
        let (src, dst) = (site.src(f), site.dst(f));
        for i in selection.indices(dst) {
            let j = xi.act(f, i);
            if !selection.contains(src, j) {
                return Err(FilterError::NotSubpresheaf(format!(
                    "{} acted on by `{}` gives {}",
                    selection.describe(dst, i),
                    site.morphism_name(f),
                    selection.describe(src, j)
                )));
            }
        }
    }
    for c in site.objects() {
        for i in selection.indices(c) {
            if let Some(j) = (0..l.congruences(c).len()).find(|&j| l.leq(c, i, j) && !selection.contains(c, j)) {
                return Err(FilterError::NotUpwardClosed(format!(
                    "{} lies below {} which is missing",
                    selection.describe(c, i),
                    selection.describe(c, j)
                )));
            }
        }
    }
    if let Some(c) = site.objects().find(|&c| !selection.contains(c, l.top(c))) {
        return Err(FilterError::MissingTop(site.object_name(c).to_owned()));
    }
    for c in site.objects() {
        let idx = selection.indices(c);
        for &i in &idx {
            for &j in &idx {
                let m = l.meet(c, i, j);
                if !selection.contains(c, m) {
                    return Err(FilterError::NotMeetClosed(format!(
                        "meet of {} and {} is missing",
                        selection.describe(c, i),
                        selection.describe(c, j)
                    )));
                }
            }
        }
    }
    Ok(InternalFilter(selection))
}

/// The least internal filter containing `seeds`.
pub fn filter_generated_by(seeds: &Selection) -> InternalFilter {
    let l = seeds.lsc.clone();
    let site = l.site();
    let xi = l.xi();
    let mut member = seeds.member.clone();
    for c in site.objects() {
        member[c.0][l.top(c)] = true;
    }
    loop {
        let before = member.clone();
        for f in site.morphism_ids() {
            let (src, dst) = (site.src(f), site.dst(f));
            for i in 0..member[dst.0].len() {
                if member[dst.0][i] {
                    member[src.0][xi.act(f, i)] = true;
                }
            }
        }
        for c in site.objects() {
            let n = member[c.0].len();
            let current: Vec<usize> = (0..n).filter(|&i| member[c.0][i]).collect();
            for &i in &current {
                for &j in &current {
                    member[c.0][l.meet(c, i, j)] = true;
                }
                for (j, m) in member[c.0].iter_mut().enumerate() {
                    if l.leq(c, i, j) {
                        *m = true;
                    }
                }
            }
        }
        if member == before {
            break;
        }
    }
    InternalFilter(Selection { lsc: l, member })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FiniteCategory, DEFAULT_BUDGET};
    use crate::fixtures;
    use crate::normalize::{CosetEncoding, FiniteGroup};

    fn lsc(site: FiniteCategory) -> Arc<LocalStateClassifier> {
        Arc::new(LocalStateClassifier::build(Arc::new(site), DEFAULT_BUDGET).unwrap())
    }

    // Ξ(V) = {⊤}; Ξ(E) = [not loop] (0), [loop] (1)
    fn non_loop_selection(l: &Arc<LocalStateClassifier>) -> Selection {
        Selection::new(l.clone(), &[vec![0], vec![0]]).unwrap()
    }

    #[test]
    fn all_and_top_are_filters() {
        let l = lsc(fixtures::dihedral_site());
        assert!(validate_filter(Selection::all(l.clone())).is_ok());
        assert!(validate_filter(Selection::top(l)).is_ok());
    }

    #[test]
    fn non_loop_selection_is_not_upward_closed() {
        let l = lsc(fixtures::graph_site());
        assert!(matches!(
            validate_filter(non_loop_selection(&l)),
            Err(FilterError::NotUpwardClosed(_))
        ));
    }

    #[test]
    fn missing_top_and_meets_are_reported() {
        let l = lsc(fixtures::graph_site());
        let empty = Selection::new(l.clone(), &[vec![], vec![]]).unwrap();
        assert!(matches!(validate_filter(empty), Err(FilterError::MissingTop(_))));
        let g = FiniteGroup::dihedral4();
        let enc = CosetEncoding::new(g.clone());
        let l = lsc(g.to_site());
        // ⟨σ⟩ and ⟨τ,σ²⟩ are normal with meet ⟨σ²⟩; add everything above them but not the meet
        let sigma = g.generated(&[g.element_by_name("σ").unwrap()]);
        let klein = g.generated(&[g.element_by_name("τ").unwrap(), g.element_by_name("σ²").unwrap()]);
        let pick: Vec<usize> = [sigma, klein, g.whole()]
            .iter()
            .map(|h| l.index_of(&enc.forward(h)).unwrap())
            .collect();
        let sel = Selection::new(l, &[pick]).unwrap();
        assert!(matches!(validate_filter(sel), Err(FilterError::NotMeetClosed(_))));
    }

    #[test]
    fn action_closure_is_checked_first() {
        let g = FiniteGroup::dihedral4();
        let enc = CosetEncoding::new(g.clone());
        let l = lsc(g.to_site());
        let tau = g.generated(&[g.element_by_name("τ").unwrap()]);
        let sel = Selection::new(l.clone(), &[vec![l.index_of(&enc.forward(&tau)).unwrap(), l.top(ObjId(0))]]).unwrap();
        assert!(matches!(validate_filter(sel), Err(FilterError::NotSubpresheaf(_))));
    }

    #[test]
    fn generated_filters() {
        let l = lsc(fixtures::graph_site());
        let empty = Selection::new(l.clone(), &[vec![], vec![]]).unwrap();
        assert_eq!(filter_generated_by(&empty).len(), 2);
        let all = filter_generated_by(&non_loop_selection(&l));
        assert_eq!(all.len(), l.total_size());

        let g = FiniteGroup::dihedral4();
        let enc = CosetEncoding::new(g.clone());
        let l = lsc(g.to_site());
        let sigma = l.index_of(&enc.forward(&g.generated(&[g.element_by_name("σ").unwrap()]))).unwrap();
        let f = filter_generated_by(&Selection::new(l.clone(), &[vec![sigma]]).unwrap());
        assert_eq!(f.indices(ObjId(0)), {
            let mut v = vec![sigma, l.top(ObjId(0))];
            v.sort();
            v
        });
        assert!(validate_filter((*f).clone()).is_ok());
    }

    #[test]
    fn top_filter_on_graphs_keeps_only_loops() {
        let l = lsc(fixtures::graph_site());
        let site = l.site().clone();
        let top = validate_filter(Selection::top(l.clone())).unwrap();
        let edge = fixtures::single_edge_graph(&site);
        let lp = fixtures::single_loop_graph(&site);
        assert!(top.in_subcategory(&edge).unwrap().is_none());
        assert!(top.in_subcategory(&lp).unwrap().is_some());
        let (g, counit) = top.comonad_apply(&edge).unwrap();
        assert_eq!((g.card(ObjId(0)), g.card(ObjId(1))), (2, 0));
        assert!(counit.is_mono());
        let (g, counit) = top.comonad_apply(&lp).unwrap();
        assert_eq!(g, lp);
        assert!(counit.is_epi());
    }

    #[test]
    fn full_filter_is_identity_comonad() {
        let l = lsc(fixtures::graph_site());
        let all = validate_filter(Selection::all(l.clone())).unwrap();
        let edge = fixtures::single_edge_graph(l.site());
        let (g, counit) = all.comonad_apply(&edge).unwrap();
        assert_eq!(g, edge);
        assert_eq!(counit, edge.identity_morphism());
    }

    #[test]
    fn certificates_on_graphs() {
        let l = lsc(fixtures::graph_site());
        let site = l.site().clone();
        let samples = vec![
            fixtures::single_edge_graph(&site),
            fixtures::single_loop_graph(&site),
            fixtures::graph(&site, &["a", "b"], &[("x", 0, 1), ("y", 1, 1)]),
        ];
        let top = validate_filter(Selection::top(l.clone())).unwrap();
        let cert = top.certify(&samples);
        assert!(cert.passed(), "{:?}", cert);
        let bad = non_loop_selection(&l);
        let cert = bad.certify(&samples);
        assert!(!cert.verdicts[0].passed);
        assert_eq!(bad.self_membership_witness(), Some((ObjId(1), 0)));
    }

    #[test]
    fn filter_file_roundtrip() {
        let l = lsc(fixtures::graph_site());
        let sel = non_loop_selection(&l);
        let back = Selection::from_file(l.clone(), &sel.to_file()).unwrap();
        assert_eq!(back.member, sel.member);
        let mut file = sel.to_file();
        file.insert("E".into(), vec![7]);
        assert!(matches!(Selection::from_file(l, &file), Err(FilterError::Malformed(_))));
    }
}
