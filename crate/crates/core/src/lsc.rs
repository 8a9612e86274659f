//! The local state classifier `Ξ` of a presheaf topos `PSh(C)`.
//!
//! `Ξ(c)` is the set of quotient objects of `y(c)`, each stored as a
//! [`RepCongruence`]; a morphism `f: c′ → c` acts by `u ≡ v ⟺ f∘u ≡ f∘v`.
//! The cocone component `ξ_X` sends `x ∈ X(c)` to the kernel of the Yoneda
//! morphism `y(c) → X` classifying `x`. The meet-semilattice structure is
//! relation intersection, ordered by inclusion, with the total congruence
//! as top.

use std::collections::HashMap;
use std::sync::Arc;

use crate::certificate::Verdict;
use crate::fincat::limits::product;
use crate::fincat::{
    enumerate_quotient_objects, quotient_pointed, FincatError, FiniteCategory, ObjId, Presheaf, PresheafMorphism,
    RepCongruence,
};

#[derive(Clone, Debug)]
pub struct LocalStateClassifier {
    site: Arc<FiniteCategory>,
    congruences: Vec<Vec<RepCongruence>>,
    index: Vec<HashMap<RepCongruence, usize>>,
    xi: Presheaf,
    top: Vec<usize>,
}

/// Result of [`LocalStateClassifier::meet_and_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetOrder {
    pub meet: RepCongruence,
    pub leq: bool,
    pub top: RepCongruence,
}

impl LocalStateClassifier {
    /// Enumerates `Ξ(c)` for every object and assembles the action.
    pub fn build(site: Arc<FiniteCategory>, cap: usize) -> Result<Self, FincatError> {
        let mut congruences = Vec::with_capacity(site.object_count());
        for c in site.objects() {
            congruences.push(enumerate_quotient_objects(&site, c, cap)?);
        }
        let index: Vec<HashMap<RepCongruence, usize>> = congruences
            .iter()
            .map(|qs| qs.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect())
            .collect();
        let names = congruences
            .iter()
            .map(|qs| qs.iter().map(|q| q.render(&site)).collect())
            .collect();
        let action = site
            .morphism_ids()
            .map(|f| {
                let src = site.src(f);
                congruences[site.dst(f).0]
                    .iter()
                    .map(|q| index[src.0][&q.pull_back(&site, f)])
                    .collect()
            })
            .collect();
        let xi = Presheaf::new(site.clone(), names, action)?;
        let top = site
            .objects()
            .map(|c| index[c.0][&RepCongruence::total(&site, c)])
            .collect();
        Ok(LocalStateClassifier {
            site,
            congruences,
            index,
            xi,
            top,
        })
    }

    pub fn site(&self) -> &Arc<FiniteCategory> {
        &self.site
    }

    /// `Ξ` as a presheaf; element `i` at `c` is `congruence(c, i)`.
    pub fn xi(&self) -> &Presheaf {
        &self.xi
    }

    pub fn congruences(&self, c: ObjId) -> &[RepCongruence] {
        &self.congruences[c.0]
    }

    pub fn congruence(&self, c: ObjId, i: usize) -> &RepCongruence {
        &self.congruences[c.0][i]
    }

    pub fn index_of(&self, q: &RepCongruence) -> Option<usize> {
        self.index.get(q.base().0)?.get(q).copied()
    }

    pub fn top(&self, c: ObjId) -> usize {
        self.top[c.0]
    }

    pub fn total_size(&self) -> usize {
        self.xi.total_size()
    }

    pub fn meet(&self, c: ObjId, i: usize, j: usize) -> usize {
        let m = self.congruences[c.0][i]
            .meet(&self.congruences[c.0][j], &self.site)
            .expect("same object");
        self.index[c.0][&m]
    }

    pub fn leq(&self, c: ObjId, i: usize, j: usize) -> bool {
        self.congruences[c.0][i]
            .leq(&self.congruences[c.0][j])
            .expect("same object")
    }

    /// Meet, order and top for two congruences at the same object.
    pub fn meet_and_order(&self, q1: &RepCongruence, q2: &RepCongruence) -> Result<MeetOrder, FincatError> {
        let meet = q1.meet(q2, &self.site)?;
        let leq = q1.leq(q2)?;
        Ok(MeetOrder {
            meet,
            leq,
            top: RepCongruence::total(&self.site, q1.base()),
        })
    }

    /// Classifies `x ∈ X(c)`: the kernel of `u ↦ x·u` on morphisms into `c`.
    pub fn classify(&self, x_sheaf: &Presheaf, c: ObjId, x: usize) -> usize {
        let q = RepCongruence::from_keys(&self.site, c, |u| x_sheaf.act(u, x));
        self.index[c.0][&q]
    }

    /// The cocone component `ξ_X: X → Ξ`.
    pub fn xi_component(&self, x_sheaf: &Presheaf) -> Result<PresheafMorphism, FincatError> {
        if **x_sheaf.site() != *self.site {
            return Err(FincatError::SiteMismatch);
        }
        let components = self
            .site
            .objects()
            .map(|c| (0..x_sheaf.card(c)).map(|x| self.classify(x_sheaf, c, x)).collect())
            .collect();
        Ok(PresheafMorphism::new_unchecked(x_sheaf.clone(), self.xi.clone(), components))
    }

    /// Checks `ξ_{X1×…×Xn}(x1,…,xn) = ξ_{X1}(x1) ∧ … ∧ ξ_{Xn}(xn)` at every
    /// element; with no factors this checks `ξ_1 = ⊤`.
    pub fn verify_semilattice_compat(&self, factors: &[&Presheaf]) -> Result<Verdict, FincatError> {
        let prod = product(&self.site, factors)?;
        let components: Vec<PresheafMorphism> =
            factors.iter().map(|x| self.xi_component(x)).collect::<Result<_, _>>()?;
        let xi_prod = self.xi_component(&prod.object)?;
        for (c, t) in prod.object.elements() {
            let folded = prod
                .projections
                .iter()
                .zip(&components)
                .fold(self.top(c), |acc, (pi, xi)| self.meet(c, acc, xi.apply(c, pi.apply(c, t))));
            if folded != xi_prod.apply(c, t) {
                return Ok(Verdict::fail(
                    "semilattice compatibility",
                    format!(
                        "at `{}` element {}: ξ of tuple is {} but meet of components is {}",
                        self.site.object_name(c),
                        prod.object.name(c, t),
                        self.xi.name(c, xi_prod.apply(c, t)),
                        self.xi.name(c, folded)
                    ),
                ));
            }
        }
        Ok(Verdict::pass("semilattice compatibility"))
    }

    /// For a mono `m: X ↣ Y`, checks `ξ_Y ∘ m = ξ_X`.
    pub fn verify_cocone(&self, m: &PresheafMorphism) -> Result<Verdict, FincatError> {
        let name = "cocone naturality";
        if !m.is_mono() {
            return Ok(Verdict::fail(name, "morphism is not monic"));
        }
        let xs = self.xi_component(m.source())?;
        let ys = self.xi_component(m.target())?;
        for (c, x) in m.source().elements() {
            if ys.apply(c, m.apply(c, x)) != xs.apply(c, x) {
                return Ok(Verdict::fail(
                    name,
                    format!("element `{}` at `{}`", m.source().name(c, x), self.site.object_name(c)),
                ));
            }
        }
        Ok(Verdict::pass(name))
    }

    /// For every `q ∈ Ξ(c)`, the class of `id_c` in `y(c)/q` is classified by `q`.
    pub fn verify_joint_surjectivity(&self) -> Result<Verdict, FincatError> {
        for c in self.site.objects() {
            for (i, q) in self.congruences[c.0].iter().enumerate() {
                let (quot, id_class) = quotient_pointed(&self.site, q)?;
                if self.classify(&quot, c, id_class) != i {
                    return Ok(Verdict::fail(
                        "joint surjectivity",
                        format!("{} at `{}`", q.render(&self.site), self.site.object_name(c)),
                    ));
                }
            }
        }
        Ok(Verdict::pass("joint surjectivity"))
    }

    /// Idempotence, commutativity, associativity and neutrality of ⊤ at every object.
    pub fn verify_semilattice_laws(&self) -> Verdict {
        let name = "meet-semilattice laws";
        for c in self.site.objects() {
            let n = self.congruences[c.0].len();
            let t = self.top(c);
            for a in 0..n {
                if self.meet(c, a, a) != a || self.meet(c, a, t) != a || !self.leq(c, a, t) {
                    return Verdict::fail(name, format!("idempotence/top at {}", self.xi.name(c, a)));
                }
                for b in 0..n {
                    let ab = self.meet(c, a, b);
                    if ab != self.meet(c, b, a) {
                        return Verdict::fail(name, format!("commutativity at {}, {}", self.xi.name(c, a), self.xi.name(c, b)));
                    }
                    if self.leq(c, a, b) != (ab == a) {
                        return Verdict::fail(name, format!("order vs meet at {}, {}", self.xi.name(c, a), self.xi.name(c, b)));
                    }
                    for d in 0..n {
                        if self.meet(c, ab, d) != self.meet(c, a, self.meet(c, b, d)) {
                            return Verdict::fail(name, format!("associativity at {a},{b},{d}"));
                        }
                    }
                }
            }
        }
        Verdict::pass(name)
    }

    /// `q1 ≤ q2 ⇒ q1·f ≤ q2·f` and `(q1 ∧ q2)·f = q1·f ∧ q2·f`.
    pub fn verify_action_monotone(&self) -> Verdict {
        let name = "action preserves order and meets";
        for f in self.site.morphism_ids() {
            let (src, dst) = (self.site.src(f), self.site.dst(f));
            let n = self.congruences[dst.0].len();
            for a in 0..n {
                for b in 0..n {
                    let (fa, fb) = (self.xi.act(f, a), self.xi.act(f, b));
                    let witness = || {
                        format!(
                            "{}, {} along `{}`",
                            self.xi.name(dst, a),
                            self.xi.name(dst, b),
                            self.site.morphism_name(f)
                        )
                    };
                    if self.leq(dst, a, b) && !self.leq(src, fa, fb) {
                        return Verdict::fail(name, witness());
                    }
                    if self.xi.act(f, self.meet(dst, a, b)) != self.meet(src, fa, fb) {
                        return Verdict::fail(name, witness());
                    }
                }
            }
        }
        Verdict::pass(name)
    }

    /// Whether `Ξ` is terminal (one congruence per object).
    pub fn is_terminal(&self) -> bool {
        self.congruences.iter().all(|qs| qs.len() == 1)
    }
}

/// Convenience wrapper matching [`LocalStateClassifier::build`].
pub fn build_lsc(site: Arc<FiniteCategory>, cap: usize) -> Result<LocalStateClassifier, FincatError> {
    LocalStateClassifier::build(site, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::limits::{coproduct, terminal};
    use crate::fincat::{image_quotient, yoneda_morphism, DEFAULT_BUDGET};
    use crate::fixtures;
    use crate::normalize::FiniteGroup;

    fn lsc(site: FiniteCategory) -> LocalStateClassifier {
        LocalStateClassifier::build(Arc::new(site), DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn graph_classifier_has_one_vertex_and_two_loops() {
        let l = lsc(fixtures::graph_site());
        let v = l.site().object_by_name("V").unwrap();
        let e = l.site().object_by_name("E").unwrap();
        assert_eq!(l.congruences(v).len(), 1);
        assert_eq!(l.congruences(e).len(), 2);
    }

    #[test]
    fn idempotent_classifier_sends_not_fixed_to_fixed() {
        let l = lsc(fixtures::idempotent_monoid());
        let c = ObjId(0);
        assert_eq!(l.congruences(c).len(), 2);
        let x = l.site().morphism_by_name("x").unwrap();
        // discrete = [not fixed], total = [fixed]
        let not_fixed = 0;
        let fixed = l.top(c);
        assert!(l.congruence(c, not_fixed).is_discrete());
        assert_eq!(l.xi().act(x, not_fixed), fixed);
        assert_eq!(l.xi().act(x, fixed), fixed);
    }

    #[test]
    fn poset_classifier_is_terminal() {
        assert!(lsc(fixtures::chain_poset(2)).is_terminal());
        assert!(lsc(fixtures::chain_poset(3)).is_terminal());
        assert!(lsc(fixtures::vee_poset()).is_terminal());
    }

    #[test]
    fn fast_classification_agrees_with_yoneda_image() {
        let l = lsc(fixtures::graph_site());
        let x = l.xi().clone();
        let xi = l.xi_component(&x).unwrap();
        for (c, e) in x.elements() {
            let q = image_quotient(&yoneda_morphism(&x, c, e).unwrap()).unwrap();
            assert_eq!(l.index_of(&q), Some(xi.apply(c, e)));
        }
    }

    #[test]
    fn stabilizers_in_a_group_set() {
        let g = FiniteGroup::symmetric(3);
        let l = lsc(g.to_site());
        let c = ObjId(0);
        // S3 acting on itself by right multiplication: every stabilizer is trivial
        let regular = crate::fincat::representable(l.site(), c).unwrap();
        let xi = l.xi_component(&regular).unwrap();
        for e in 0..regular.card(c) {
            assert!(l.congruence(c, xi.apply(c, e)).is_discrete());
        }
    }

    #[test]
    fn meet_with_top_is_identity() {
        let l = lsc(fixtures::dihedral_site());
        let c = ObjId(0);
        for q in l.congruences(c) {
            let mo = l.meet_and_order(q, &RepCongruence::total(l.site(), c)).unwrap();
            assert_eq!(&mo.meet, q);
            assert!(mo.leq);
        }
    }

    #[test]
    fn meet_at_different_objects_is_rejected() {
        let l = lsc(fixtures::graph_site());
        let v = RepCongruence::total(l.site(), ObjId(0));
        let e = RepCongruence::total(l.site(), ObjId(1));
        assert!(matches!(l.meet_and_order(&v, &e), Err(FincatError::ObjectMismatch)));
    }

    #[test]
    fn empty_product_is_classified_by_top() {
        for site in [fixtures::graph_site(), fixtures::idempotent_monoid(), fixtures::cyclic_site(3)] {
            let l = lsc(site);
            assert!(l.verify_semilattice_compat(&[]).unwrap().passed);
            let one = terminal(l.site());
            let xi = l.xi_component(&one).unwrap();
            for c in l.site().objects() {
                assert_eq!(xi.apply(c, 0), l.top(c));
            }
        }
    }

    #[test]
    fn structural_checks_pass_on_fixtures() {
        for site in [fixtures::graph_site(), fixtures::idempotent_monoid(), fixtures::dihedral_site()] {
            let l = lsc(site);
            assert!(l.verify_joint_surjectivity().unwrap().passed);
            assert!(l.verify_semilattice_laws().passed);
            assert!(l.verify_action_monotone().passed);
            let xi = l.xi().clone();
            assert!(l.verify_semilattice_compat(&[&xi, &xi]).unwrap().passed);
        }
    }

    #[test]
    fn classification_survives_embedding_into_a_coproduct() {
        let l = lsc(fixtures::graph_site());
        let a = fixtures::single_edge_graph(l.site());
        let b = fixtures::single_loop_graph(l.site());
        let (_, inl, inr) = coproduct(&a, &b).unwrap();
        assert!(l.verify_cocone(&inl).unwrap().passed);
        assert!(l.verify_cocone(&inr).unwrap().passed);
    }

    #[test]
    fn site_mismatch_is_reported() {
        let l = lsc(fixtures::graph_site());
        let other = terminal(&Arc::new(fixtures::chain_poset(2)));
        assert!(matches!(l.xi_component(&other), Err(FincatError::SiteMismatch)));
    }
}
