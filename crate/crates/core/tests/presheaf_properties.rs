//! Randomized invariants of presheaves, the classifier `Ξ`, the normalization
//! operator and internal filters, over the fixture sites.

mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use topos_core::filters::{filter_generated_by, validate_filter, Selection};
use topos_core::fincat::limits::{binary_product, coproduct, equalizer, find_morphisms, terminal};
use topos_core::fincat::{image_quotient, yoneda_morphism, FiniteCategory, ObjId, Presheaf, DEFAULT_BUDGET};
use topos_core::fixtures;
use topos_core::lsc::LocalStateClassifier;
use topos_core::normalize::{check_normalization_lemma, normalization_operator, FiniteGroup};

/// A site, its classifier and the quotients of its representables.
struct Setting {
    name: String,
    lsc: Arc<LocalStateClassifier>,
    quotients: Vec<Presheaf>,
}

fn settings() -> &'static [Setting] {
    static CELL: OnceLock<Vec<Setting>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut sites: Vec<(String, FiniteCategory)> = fixtures::sites();
        for g in [FiniteGroup::symmetric(3), FiniteGroup::dihedral4(), FiniteGroup::cyclic(4)] {
            sites.push((g.name().to_owned(), g.to_site()));
        }
        sites
            .into_iter()
            .map(|(name, site)| {
                let site = Arc::new(site);
                let lsc = Arc::new(LocalStateClassifier::build(site.clone(), DEFAULT_BUDGET).unwrap());
                let quotients = common::representable_quotients(&site, DEFAULT_BUDGET);
                Setting { name, lsc, quotients }
            })
            .collect()
    })
}

/// Recipe for a random presheaf: a coproduct of chosen quotients, optionally
/// multiplied by one more quotient.
#[derive(Clone, Debug)]
struct Recipe {
    setting: usize,
    summands: Vec<usize>,
    factor: Option<usize>,
}

fn recipe() -> impl Strategy<Value = Recipe> {
    (0..settings().len(), prop::collection::vec(any::<prop::sample::Index>(), 1..=3), any::<Option<prop::sample::Index>>())
        .prop_map(|(setting, summands, factor)| {
            let n = settings()[setting].quotients.len();
            Recipe {
                setting,
                summands: summands.iter().map(|i| i.index(n)).collect(),
                factor: factor.map(|i| i.index(n)),
            }
        })
}

fn build(r: &Recipe) -> Presheaf {
    let qs = &settings()[r.setting].quotients;
    let mut x = qs[r.summands[0]].clone();
    for &s in &r.summands[1..] {
        x = coproduct(&x, &qs[s]).unwrap().0;
    }
    if let Some(f) = r.factor {
        x = binary_product(&x, &qs[f]).unwrap().object;
    }
    x
}

fn site_of(r: &Recipe) -> &Arc<FiniteCategory> {
    settings()[r.setting].lsc.site()
}

fn pick(x: &Presheaf, a: prop::sample::Index) -> (ObjId, usize) {
    let elems: Vec<(ObjId, usize)> = x.elements().collect();
    elems[a.index(elems.len())]
}

/// Closes `member` under the action and upward in the order, leaving meets
/// and tops alone.
fn action_and_upward_closure(l: &LocalStateClassifier, mut member: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let site = l.site();
    loop {
        let before = member.clone();
        for f in site.morphism_ids() {
            let (src, dst) = (site.src(f), site.dst(f));
            for i in 0..member[dst.0].len() {
                if member[dst.0][i] {
                    member[src.0][l.xi().act(f, i)] = true;
                }
            }
        }
        for c in site.objects() {
            let n = member[c.0].len();
            for i in 0..n {
                if member[c.0][i] {
                    for (j, m) in member[c.0].iter_mut().enumerate() {
                        if l.leq(c, i, j) {
                            *m = true;
                        }
                    }
                }
            }
        }
        if member == before {
            return member;
        }
    }
}

fn random_selection(l: &LocalStateClassifier, bits: &[bool]) -> Vec<Vec<bool>> {
    let mut k = 0;
    l.site()
        .objects()
        .map(|c| {
            (0..l.congruences(c).len())
                .map(|_| {
                    k += 1;
                    bits[(k - 1) % bits.len()]
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_functorial(r in recipe()) {
        let x = build(&r);
        let site = site_of(&r);
        for f in site.morphism_ids() {
            for g in site.out_of(site.dst(f)) {
                let gf = site.compose(g, f);
                for e in 0..x.card(site.dst(g)) {
                    prop_assert_eq!(x.act(gf, e), x.act(f, x.act(g, e)));
                }
            }
        }
        for c in site.objects() {
            for e in 0..x.card(c) {
                prop_assert_eq!(x.act(site.identity(c), e), e);
            }
        }
    }

    #[test]
    fn image_quotient_ignores_ambient_summands(
        r in recipe(),
        extra in any::<prop::sample::Index>(),
        a in any::<prop::sample::Index>(),
    ) {
        let x = build(&r);
        let qs = &settings()[r.setting].quotients;
        let y = &qs[extra.index(qs.len())];
        let (c, e) = pick(&x, a);
        let (sum, inl, _) = coproduct(&x, y).unwrap();
        let here = image_quotient(&yoneda_morphism(&x, c, e).unwrap()).unwrap();
        let there = image_quotient(&yoneda_morphism(&sum, c, inl.apply(c, e)).unwrap()).unwrap();
        prop_assert_eq!(here, there);
    }

    #[test]
    fn enumeration_is_canonical_and_meet_closed(
        s in 0..settings().len(),
        c in any::<prop::sample::Index>(),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let l = &settings()[s].lsc;
        let site = l.site();
        let c = ObjId(c.index(site.object_count()));
        let qs = l.congruences(c);
        prop_assert!(qs[0].is_discrete());
        prop_assert!(qs[l.top(c)].is_total(site));
        let (i, j) = (i.index(qs.len()), j.index(qs.len()));
        let m = qs[i].meet(&qs[j], site).unwrap();
        prop_assert_eq!(l.index_of(&m), Some(l.meet(c, i, j)));
        // canonical labels: equal as quotient objects iff equal as values
        prop_assert_eq!(qs[i] == qs[j], i == j);
        prop_assert!(qs[i].is_right_compatible(site));
    }

    #[test]
    fn semilattice_laws_and_monotone_action(
        s in 0..settings().len(),
        f in any::<prop::sample::Index>(),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
        d in any::<prop::sample::Index>(),
    ) {
        let l = &settings()[s].lsc;
        let site = l.site();
        let f = topos_core::fincat::MorId(f.index(site.morphism_count()));
        let (src, dst) = (site.src(f), site.dst(f));
        let n = l.congruences(dst).len();
        let (a, b, d) = (a.index(n), b.index(n), d.index(n));
        prop_assert_eq!(l.meet(dst, a, b), l.meet(dst, b, a));
        prop_assert_eq!(l.meet(dst, a, a), a);
        prop_assert_eq!(l.meet(dst, a, l.top(dst)), a);
        prop_assert_eq!(l.meet(dst, l.meet(dst, a, b), d), l.meet(dst, a, l.meet(dst, b, d)));
        let act = |i| l.xi().act(f, i);
        if l.leq(dst, a, b) {
            prop_assert!(l.leq(src, act(a), act(b)));
        }
        prop_assert_eq!(act(l.meet(dst, a, b)), l.meet(src, act(a), act(b)));
        prop_assert_eq!(act(l.top(dst)), l.top(src));
    }

    #[test]
    fn cocone_is_natural_along_monos(r in recipe(), extra in any::<prop::sample::Index>()) {
        let x = build(&r);
        let l = &settings()[r.setting].lsc;
        let qs = &settings()[r.setting].quotients;
        let (sum, inl, inr) = coproduct(&x, &qs[extra.index(qs.len())]).unwrap();
        prop_assert!(l.verify_cocone(&inl).unwrap().passed);
        prop_assert!(l.verify_cocone(&inr).unwrap().passed);
        // ξ is natural along any morphism, monic or not
        let xi_x = l.xi_component(&x).unwrap();
        for m in find_morphisms(&x, &sum, false, 4) {
            let xi_s = l.xi_component(&sum).unwrap();
            for (c, e) in x.elements() {
                if m.is_mono() {
                    prop_assert_eq!(xi_s.apply(c, m.apply(c, e)), xi_x.apply(c, e));
                } else {
                    prop_assert!(l.leq(c, xi_x.apply(c, e), xi_s.apply(c, m.apply(c, e))));
                }
            }
        }
    }

    #[test]
    fn generated_filters_validate_and_certify(
        s in 0..settings().len(),
        bits in prop::collection::vec(prop::bool::weighted(0.15), 1..16),
        r in recipe(),
    ) {
        let l = settings()[s].lsc.clone();
        let seeds = Selection::from_mask(l.clone(), random_selection(&l, &bits)).unwrap();
        let f = filter_generated_by(&seeds);
        prop_assert!(validate_filter((*f).clone()).is_ok());
        for c in l.site().objects() {
            for i in seeds.indices(c) {
                prop_assert!(f.contains(c, i));
            }
        }
        let mut samples = vec![terminal(l.site())];
        if r.setting == s {
            samples.push(build(&r));
        }
        samples.push(settings()[s].quotients[0].clone());
        let cert = f.certify(&samples);
        prop_assert!(cert.passed(), "{}: {:?}", settings()[s].name, cert);
    }

    #[test]
    fn upward_closed_selections_contain_their_classifications(
        s in 0..settings().len(),
        bits in prop::collection::vec(prop::bool::weighted(0.2), 1..16),
    ) {
        let l = settings()[s].lsc.clone();
        let mask = action_and_upward_closure(&l, random_selection(&l, &bits));
        let sel = Selection::from_mask(l, mask).unwrap();
        prop_assert_eq!(sel.self_membership_witness(), None);
    }

    #[test]
    fn comonad_is_idempotent_and_monotone(
        r in recipe(),
        bits in prop::collection::vec(prop::bool::weighted(0.15), 1..16),
    ) {
        let l = settings()[r.setting].lsc.clone();
        let f = filter_generated_by(&Selection::from_mask(l.clone(), random_selection(&l, &bits)).unwrap());
        let x = build(&r);
        let (gx, counit) = f.comonad_apply(&x).unwrap();
        prop_assert!(counit.is_mono());
        let (ggx, _) = f.comonad_apply(&gx).unwrap();
        prop_assert_eq!(ggx.total_size(), gx.total_size());
        prop_assert!(f.in_subcategory(&gx).unwrap().is_some());
        // monotone along a mono X ↣ X ⊔ Y: GX lands inside G(X ⊔ Y)
        let (sum, inl, _) = coproduct(&x, &x).unwrap();
        let (gsum, gsum_incl) = f.comonad_apply(&sum).unwrap();
        let image: std::collections::HashSet<(ObjId, usize)> =
            gsum.elements().map(|(c, e)| (c, gsum_incl.apply(c, e))).collect();
        for (c, e) in gx.elements() {
            let in_x = counit.apply(c, e);
            prop_assert!(image.contains(&(c, inl.apply(c, in_x))));
        }
        // G preserves equalizers: G(Eq(m1, m2)) is Eq(m1, m2) ∩ GX inside X
        let in_gx: std::collections::HashSet<(ObjId, usize)> =
            gx.elements().map(|(c, e)| (c, counit.apply(c, e))).collect();
        let ends = find_morphisms(&x, &x, false, 3);
        for m1 in &ends {
            for m2 in &ends {
                let (eq, eq_incl) = equalizer(m1, m2).unwrap();
                let (geq, _) = f.comonad_apply(&eq).unwrap();
                let expected = eq.elements().filter(|&(c, e)| in_gx.contains(&(c, eq_incl.apply(c, e)))).count();
                prop_assert_eq!(geq.total_size(), expected);
            }
        }
    }

    #[test]
    fn normalization_lemma_on_random_sites(s in 0..settings().len()) {
        let l = &settings()[s].lsc;
        let op = normalization_operator(l, DEFAULT_BUDGET).unwrap();
        prop_assert!(check_normalization_lemma(l, &op).passed);
        for c in l.site().objects() {
            for i in 0..l.congruences(c).len() {
                prop_assert!(l.leq(c, i, op.apply(c, i)));
            }
        }
    }
}
