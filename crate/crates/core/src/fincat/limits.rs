//! Pointwise finite limits, coproducts, subobjects and a small hom-set search.

use std::sync::Arc;

use super::category::{FiniteCategory, ObjId};
use super::error::FincatError;
use super::presheaf::{Presheaf, PresheafMorphism};

pub struct Product {
    pub object: Presheaf,
    pub projections: Vec<PresheafMorphism>,
}

pub fn terminal(site: &Arc<FiniteCategory>) -> Presheaf {
    let names = site.objects().map(|_| vec!["*".to_owned()]).collect();
    let action = site.morphism_ids().map(|_| vec![0]).collect();
    Presheaf::new(site.clone(), names, action).expect("terminal presheaf is functorial")
}

/// Product of `factors`; the empty product is the terminal presheaf.
pub fn product(site: &Arc<FiniteCategory>, factors: &[&Presheaf]) -> Result<Product, FincatError> {
    if factors.iter().any(|x| **x.site() != **site) {
        return Err(FincatError::SiteMismatch);
    }
    let n_obj = site.object_count();
    // per object: list of tuples
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n_obj);
    for c in site.objects() {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for x in factors {
            acc = acc
                .into_iter()
                .flat_map(|t| {
                    (0..x.card(c)).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        tuples.push(acc);
    }
    let encode = |c: ObjId, t: &[usize]| -> usize {
        t.iter()
            .zip(factors)
            .fold(0, |acc, (&e, x)| acc * x.card(c) + e)
    };
    let names = site
        .objects()
        .map(|c| {
            tuples[c.0]
                .iter()
                .map(|t| {
                    let parts: Vec<&str> = t.iter().zip(factors).map(|(&e, x)| x.name(c, e)).collect();
                    format!("({})", parts.join(","))
                })
                .collect()
        })
        .collect();
    let action = site
        .morphism_ids()
        .map(|f| {
            let src = site.src(f);
            tuples[site.dst(f).0]
                .iter()
                .map(|t| {
                    let moved: Vec<usize> = t.iter().zip(factors).map(|(&e, x)| x.act(f, e)).collect();
                    encode(src, &moved)
                })
                .collect()
        })
        .collect();
    let object = Presheaf::new(site.clone(), names, action)?;
    let projections = factors
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let comps = site
                .objects()
                .map(|c| tuples[c.0].iter().map(|t| t[i]).collect())
                .collect();
            PresheafMorphism::new_unchecked(object.clone(), (*x).clone(), comps)
        })
        .collect();
    Ok(Product { object, projections })
}

/// Binary product `X × Y` with its two projections.
pub fn binary_product(x: &Presheaf, y: &Presheaf) -> Result<Product, FincatError> {
    if !x.same_site(y) {
        return Err(FincatError::SiteMismatch);
    }
    product(x.site(), &[x, y])
}

/// Element index of the pair `(a, b)` in `binary_product(x, y)` at `c`.
pub fn pair_index(y: &Presheaf, c: ObjId, a: usize, b: usize) -> usize {
    a * y.card(c) + b
}

/// Coproduct `X ⊔ Y` with both injections.
pub fn coproduct(x: &Presheaf, y: &Presheaf) -> Result<(Presheaf, PresheafMorphism, PresheafMorphism), FincatError> {
    if !x.same_site(y) {
        return Err(FincatError::SiteMismatch);
    }
    let site = x.site().clone();
    let names = site
        .objects()
        .map(|c| {
            let left = x.names(c).iter().map(|n| format!("L.{n}"));
            let right = y.names(c).iter().map(|n| format!("R.{n}"));
            left.chain(right).collect()
        })
        .collect();
    let action = site
        .morphism_ids()
        .map(|f| {
            let shift = x.card(site.src(f));
            let left = (0..x.card(site.dst(f))).map(|e| x.act(f, e));
            let right = (0..y.card(site.dst(f))).map(|e| y.act(f, e) + shift);
            left.chain(right).collect()
        })
        .collect();
    let sum = Presheaf::new(site.clone(), names, action)?;
    let inl = site.objects().map(|c| (0..x.card(c)).collect()).collect();
    let inr = site
        .objects()
        .map(|c| (0..y.card(c)).map(|e| e + x.card(c)).collect())
        .collect();
    Ok((
        sum.clone(),
        PresheafMorphism::new_unchecked(x.clone(), sum.clone(), inl),
        PresheafMorphism::new_unchecked(y.clone(), sum, inr),
    ))
}

/// The subpresheaf of `x` on the kept elements, with its inclusion.
pub fn subpresheaf(x: &Presheaf, keep: &[Vec<bool>]) -> Result<(Presheaf, PresheafMorphism), FincatError> {
    let site = x.site().clone();
    for f in site.morphism_ids() {
        let (src, dst) = (site.src(f), site.dst(f));
        for e in 0..x.card(dst) {
            if keep[dst.0][e] && !keep[src.0][x.act(f, e)] {
                return Err(FincatError::NotSubpresheaf(format!(
                    "`{}`·{} = `{}` leaves the selection",
                    x.name(dst, e),
                    site.morphism_name(f),
                    x.name(src, x.act(f, e))
                )));
            }
        }
    }
    let kept: Vec<Vec<usize>> = site
        .objects()
        .map(|c| (0..x.card(c)).filter(|&e| keep[c.0][e]).collect())
        .collect();
    let mut new_index: Vec<Vec<usize>> = site.objects().map(|c| vec![usize::MAX; x.card(c)]).collect();
    for c in site.objects() {
        for (i, &e) in kept[c.0].iter().enumerate() {
            new_index[c.0][e] = i;
        }
    }
    let names = site
        .objects()
        .map(|c| kept[c.0].iter().map(|&e| x.name(c, e).to_owned()).collect())
        .collect();
    let action = site
        .morphism_ids()
        .map(|f| {
            kept[site.dst(f).0]
                .iter()
                .map(|&e| new_index[site.src(f).0][x.act(f, e)])
                .collect()
        })
        .collect();
    let sub = Presheaf::new(site, names, action)?;
    let inclusion = PresheafMorphism::new_unchecked(sub.clone(), x.clone(), kept);
    Ok((sub, inclusion))
}

/// The subpresheaf generated by one element: its orbit `{x·u}`.
pub fn generated_subpresheaf(x: &Presheaf, c: ObjId, e: usize) -> Result<(Presheaf, PresheafMorphism), FincatError> {
    x.check_element(c, e)?;
    let site = x.site();
    let mut keep: Vec<Vec<bool>> = site.objects().map(|a| vec![false; x.card(a)]).collect();
    for &u in site.arrows_into(c) {
        keep[site.src(u).0][x.act(u, e)] = true;
    }
    subpresheaf(x, &keep)
}

/// Equalizer of a parallel pair, as a subpresheaf of the common source.
pub fn equalizer(f: &PresheafMorphism, g: &PresheafMorphism) -> Result<(Presheaf, PresheafMorphism), FincatError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(FincatError::NotParallel);
    }
    let x = f.source();
    let keep: Vec<Vec<bool>> = x
        .site()
        .objects()
        .map(|c| (0..x.card(c)).map(|e| f.apply(c, e) == g.apply(c, e)).collect())
        .collect();
    subpresheaf(x, &keep)
}

/// Natural transformations `x → y`, in a fixed search order, at most `limit`.
///
/// Choosing the image of `e` forces the image of every `e·f`, so the search
/// only branches on elements not already determined by earlier choices.
pub fn find_morphisms(x: &Presheaf, y: &Presheaf, injective: bool, limit: usize) -> Vec<PresheafMorphism> {
    if !x.same_site(y) || limit == 0 {
        return Vec::new();
    }
    let site = x.site().clone();
    if injective && site.objects().any(|c| x.card(c) > y.card(c)) {
        return Vec::new();
    }
    let order: Vec<(ObjId, usize)> = x.elements().collect();
    let mut state = SearchState {
        assigned: site.objects().map(|c| vec![None; x.card(c)]).collect(),
        used: site.objects().map(|c| vec![false; y.card(c)]).collect(),
        trail: Vec::new(),
    };
    let mut out = Vec::new();
    let search = Search {
        site: &site,
        x,
        y,
        order: &order,
        injective,
        limit,
    };
    search.run(0, &mut state, &mut out);
    out
}

struct SearchState {
    assigned: Vec<Vec<Option<usize>>>,
    used: Vec<Vec<bool>>,
    // assignments made so far, in order, for backtracking
    trail: Vec<(ObjId, usize)>,
}

impl SearchState {
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (c, e) = self.trail.pop().expect("above mark");
            let img = self.assigned[c.0][e].take().expect("trail entries are assigned");
            self.used[c.0][img] = false;
        }
    }
}

struct Search<'a> {
    site: &'a FiniteCategory,
    x: &'a Presheaf,
    y: &'a Presheaf,
    order: &'a [(ObjId, usize)],
    injective: bool,
    limit: usize,
}

impl Search<'_> {
    /// Sends `e ↦ img` and propagates along every arrow into `c`. Every
    /// assigned element has its whole downward orbit assigned, so naturality
    /// holds exactly when no propagated value conflicts.
    fn assign(&self, state: &mut SearchState, c: ObjId, e: usize, img: usize) -> bool {
        let mut stack = vec![(c, e, img)];
        while let Some((c, e, img)) = stack.pop() {
            match state.assigned[c.0][e] {
                Some(v) if v == img => continue,
                Some(_) => return false,
                None => {}
            }
            if self.injective && state.used[c.0][img] {
                return false;
            }
            state.assigned[c.0][e] = Some(img);
            state.used[c.0][img] = true;
            state.trail.push((c, e));
            for &f in self.site.arrows_into(c) {
                stack.push((self.site.src(f), self.x.act(f, e), self.y.act(f, img)));
            }
        }
        true
    }

    fn run(&self, i: usize, state: &mut SearchState, out: &mut Vec<PresheafMorphism>) {
        if out.len() >= self.limit {
            return;
        }
        let free = self.order[i..].iter().position(|&(c, e)| state.assigned[c.0][e].is_none());
        let Some(offset) = free else {
            let comps = state
                .assigned
                .iter()
                .map(|row| row.iter().map(|v| v.expect("complete")).collect())
                .collect();
            out.push(PresheafMorphism::new_unchecked(self.x.clone(), self.y.clone(), comps));
            return;
        };
        let (c, e) = self.order[i + offset];
        let next = i + offset + 1;
        for img in 0..self.y.card(c) {
            if self.injective && state.used[c.0][img] {
                continue;
            }
            let mark = state.trail.len();
            if self.assign(state, c, e, img) {
                self.run(next, state, out);
            }
            state.undo_to(mark);
            if out.len() >= self.limit {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn idempotent_set(site: &Arc<FiniteCategory>, images: &[usize]) -> Presheaf {
        let x = site.morphism_by_name("x").unwrap();
        let one = site.morphism_by_name("1").unwrap();
        let mut action = vec![Vec::new(); 2];
        action[one.0] = (0..images.len()).collect();
        action[x.0] = images.to_vec();
        let names = vec![(0..images.len()).map(|i| format!("p{i}")).collect()];
        Presheaf::new(site.clone(), names, action).unwrap()
    }

    #[test]
    fn product_sizes_multiply() {
        let site = Arc::new(fixtures::idempotent_monoid());
        let a = idempotent_set(&site, &[0, 0]);
        let b = idempotent_set(&site, &[0, 1, 1]);
        let p = binary_product(&a, &b).unwrap();
        assert_eq!(p.object.card(ObjId(0)), 6);
        assert_eq!(p.projections.len(), 2);
        let (left, right) = (&p.projections[0], &p.projections[1]);
        assert_eq!(left.apply(ObjId(0), pair_index(&b, ObjId(0), 1, 2)), 1);
        assert_eq!(right.apply(ObjId(0), pair_index(&b, ObjId(0), 1, 2)), 2);
    }

    #[test]
    fn equalizer_of_a_morphism_with_itself_is_everything() {
        let site = Arc::new(fixtures::graph_site());
        let g = fixtures::single_edge_graph(&site);
        let id = g.identity_morphism();
        let (eq, inc) = equalizer(&id, &id).unwrap();
        assert_eq!(eq.total_size(), g.total_size());
        assert!(inc.is_mono() && inc.is_epi());
    }

    #[test]
    fn equalizer_requires_parallel_pair() {
        let site = Arc::new(fixtures::graph_site());
        let a = fixtures::single_edge_graph(&site);
        let b = fixtures::single_loop_graph(&site);
        assert!(matches!(
            equalizer(&a.identity_morphism(), &b.identity_morphism()),
            Err(FincatError::NotParallel)
        ));
    }

    #[test]
    fn mono_detection() {
        let site = Arc::new(fixtures::idempotent_monoid());
        let a = idempotent_set(&site, &[0, 0]);
        let one = terminal(&site);
        let to_one = find_morphisms(&a, &one, false, 10);
        assert_eq!(to_one.len(), 1);
        assert!(!to_one[0].is_mono());
        assert!(a.identity_morphism().is_mono());
    }

    #[test]
    fn hom_search_counts_graph_maps() {
        let site = Arc::new(fixtures::graph_site());
        let edge = fixtures::single_edge_graph(&site);
        let lp = fixtures::single_loop_graph(&site);
        // an edge maps onto a loop in one way; a loop cannot map onto a non-loop edge
        assert_eq!(find_morphisms(&edge, &lp, false, 10).len(), 1);
        assert!(find_morphisms(&lp, &edge, false, 10).is_empty());
        assert_eq!(find_morphisms(&edge, &edge, true, 10).len(), 1);
    }

    #[test]
    fn coproduct_injections_are_monic() {
        let site = Arc::new(fixtures::graph_site());
        let a = fixtures::single_edge_graph(&site);
        let b = fixtures::single_loop_graph(&site);
        let (sum, inl, inr) = coproduct(&a, &b).unwrap();
        assert_eq!(sum.total_size(), a.total_size() + b.total_size());
        assert!(inl.is_mono() && inr.is_mono());
    }
}
