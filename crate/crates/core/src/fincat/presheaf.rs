use std::collections::HashMap;
use std::sync::Arc;

use super::category::{FiniteCategory, MorId, ObjId};
use super::error::FincatError;
use super::format::PresheafFile;

/// A finite presheaf `X: Cᵒᵖ → FinSet`.
///
/// Elements of `X(c)` are the indices `0..card(c)`; `act(f, x)` is the right
/// action `x·f ∈ X(c′)` for `f: c′ → c` and `x ∈ X(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    site: Arc<FiniteCategory>,
    names: Vec<Vec<String>>,
    // action[f][x] = x·f
    action: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Builds a presheaf and checks that the action is well-typed and functorial.
    pub fn new(
        site: Arc<FiniteCategory>,
        names: Vec<Vec<String>>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, FincatError> {
        if names.len() != site.object_count() || action.len() != site.morphism_count() {
            return Err(FincatError::Malformed(
                "carrier or action table does not match the site".into(),
            ));
        }
        for f in site.morphism_ids() {
            let (src, dst) = (site.src(f), site.dst(f));
            let row = &action[f.0];
            if row.len() != names[dst.0].len() || row.iter().any(|&y| y >= names[src.0].len()) {
                return Err(FincatError::NotFunctorial(format!(
                    "action of `{}` is not a map X({}) → X({})",
                    site.morphism_name(f),
                    site.object_name(dst),
                    site.object_name(src)
                )));
            }
        }
        let x = Presheaf { site, names, action };
        x.check_functorial()?;
        Ok(x)
    }

    fn check_functorial(&self) -> Result<(), FincatError> {
        let site = &self.site;
        for c in site.objects() {
            let id = site.identity(c);
            if let Some(x) = (0..self.card(c)).find(|&x| self.act(id, x) != x) {
                return Err(FincatError::NotFunctorial(format!(
                    "identity at `{}` moves element `{}`",
                    site.object_name(c),
                    self.names[c.0][x]
                )));
            }
        }
        // x·(g∘f) = (x·g)·f
        for g in site.morphism_ids() {
            for f in site.arrows_into(site.src(g)).iter().copied() {
                let gf = site.compose(g, f);
                for x in 0..self.card(site.dst(g)) {
                    if self.act(gf, x) != self.act(f, self.act(g, x)) {
                        return Err(FincatError::NotFunctorial(format!(
                            "`{}`·({}∘{}) ≠ (`{}`·{})·{}",
                            self.names[site.dst(g).0][x],
                            site.morphism_name(g),
                            site.morphism_name(f),
                            self.names[site.dst(g).0][x],
                            site.morphism_name(g),
                            site.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Resolves a presheaf file against a site.
    pub fn from_file(site: Arc<FiniteCategory>, file: &PresheafFile) -> Result<Self, FincatError> {
        let mut names = vec![Vec::new(); site.object_count()];
        for (obj, elems) in &file.sets {
            names[site.object_by_name(obj)?.0] = elems.clone();
        }
        let mut index: Vec<HashMap<&str, usize>> = Vec::with_capacity(names.len());
        for (c, elems) in names.iter().enumerate() {
            let map: HashMap<&str, usize> =
                elems.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
            if map.len() != elems.len() {
                return Err(FincatError::DuplicateName(format!(
                    "element in set `{}`",
                    site.object_name(ObjId(c))
                )));
            }
            index.push(map);
        }

        let mut action: Vec<Vec<Option<usize>>> = site
            .morphism_ids()
            .map(|f| vec![None; names[site.dst(f).0].len()])
            .collect();
        for c in site.objects() {
            let id = site.identity(c);
            for (x, slot) in action[id.0].iter_mut().enumerate() {
                *slot = Some(x);
            }
        }
        for (mor, map) in &file.actions {
            let f = site.morphism_by_name(mor)?;
            let (src, dst) = (site.src(f), site.dst(f));
            for (from, to) in map {
                let x = *index[dst.0].get(from.as_str()).ok_or_else(|| {
                    FincatError::Malformed(format!(
                        "action of `{mor}`: `{from}` is not in the set of `{}`",
                        site.object_name(dst)
                    ))
                })?;
                let y = *index[src.0].get(to.as_str()).ok_or_else(|| {
                    FincatError::Malformed(format!(
                        "action of `{mor}`: `{to}` is not in the set of `{}`",
                        site.object_name(src)
                    ))
                })?;
                action[f.0][x] = Some(y);
            }
        }
        let mut table = Vec::with_capacity(action.len());
        for (f, row) in action.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (x, y) in row.into_iter().enumerate() {
                out.push(y.ok_or_else(|| {
                    FincatError::Malformed(format!(
                        "action of `{}` is undefined on `{}`",
                        site.morphism_name(MorId(f)),
                        names[site.dst(MorId(f)).0][x]
                    ))
                })?);
            }
            table.push(out);
        }
        Presheaf::new(site, names, table)
    }

    pub fn to_file(&self) -> PresheafFile {
        let site = &self.site;
        PresheafFile {
            sets: site
                .objects()
                .map(|c| (site.object_name(c).to_owned(), self.names[c.0].clone()))
                .collect(),
            actions: site
                .morphism_ids()
                .filter(|&f| !site.is_identity(f))
                .map(|f| {
                    let (src, dst) = (site.src(f), site.dst(f));
                    let map = (0..self.card(dst))
                        .map(|x| (self.names[dst.0][x].clone(), self.names[src.0][self.act(f, x)].clone()))
                        .collect();
                    (site.morphism_name(f).to_owned(), map)
                })
                .collect(),
        }
    }

    pub fn site(&self) -> &Arc<FiniteCategory> {
        &self.site
    }

    pub fn same_site(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.site, &other.site) || self.site == other.site
    }

    pub fn card(&self, c: ObjId) -> usize {
        self.names[c.0].len()
    }

    pub fn total_size(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn name(&self, c: ObjId, x: usize) -> &str {
        &self.names[c.0][x]
    }

    pub fn names(&self, c: ObjId) -> &[String] {
        &self.names[c.0]
    }

    /// `x·f` for `f: c′ → c` and `x ∈ X(c)`.
    pub fn act(&self, f: MorId, x: usize) -> usize {
        self.action[f.0][x]
    }

    pub fn check_element(&self, c: ObjId, x: usize) -> Result<(), FincatError> {
        if x < self.card(c) {
            Ok(())
        } else {
            Err(FincatError::ElementNotInCarrier {
                object: self.site.object_name(c).to_owned(),
                index: x,
            })
        }
    }

    /// Every `(object, element)` pair in a fixed order.
    pub fn elements(&self) -> impl Iterator<Item = (ObjId, usize)> + '_ {
        self.site.objects().flat_map(move |c| (0..self.card(c)).map(move |x| (c, x)))
    }

    /// The identity natural transformation.
    pub fn identity_morphism(&self) -> PresheafMorphism {
        let components = self.site.objects().map(|c| (0..self.card(c)).collect()).collect();
        PresheafMorphism {
            source: self.clone(),
            target: self.clone(),
            components,
        }
    }
}

/// A natural transformation between two presheaves on the same site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    source: Presheaf,
    target: Presheaf,
    components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn new(source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Result<Self, FincatError> {
        if !source.same_site(&target) {
            return Err(FincatError::SiteMismatch);
        }
        let site = source.site().clone();
        if components.len() != site.object_count() {
            return Err(FincatError::Malformed("one component per object is required".into()));
        }
        for c in site.objects() {
            let comp = &components[c.0];
            if comp.len() != source.card(c) || comp.iter().any(|&y| y >= target.card(c)) {
                return Err(FincatError::NotNatural(format!(
                    "component at `{}` is not a map X(c) → Y(c)",
                    site.object_name(c)
                )));
            }
        }
        for f in site.morphism_ids() {
            let (src, dst) = (site.src(f), site.dst(f));
            for x in 0..source.card(dst) {
                let left = components[src.0][source.act(f, x)];
                let right = target.act(f, components[dst.0][x]);
                if left != right {
                    return Err(FincatError::NotNatural(format!(
                        "square for `{}` fails at `{}`",
                        site.morphism_name(f),
                        source.name(dst, x)
                    )));
                }
            }
        }
        Ok(PresheafMorphism { source, target, components })
    }

    pub(crate) fn new_unchecked(source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Self {
        debug_assert!(PresheafMorphism::new(source.clone(), target.clone(), components.clone()).is_ok());
        PresheafMorphism { source, target, components }
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn apply(&self, c: ObjId, x: usize) -> usize {
        self.components[c.0][x]
    }

    pub fn component(&self, c: ObjId) -> &[usize] {
        &self.components[c.0]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PresheafMorphism) -> Result<PresheafMorphism, FincatError> {
        if self.target != other.source {
            return Err(FincatError::NotParallel);
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(c, comp)| comp.iter().map(|&y| other.components[c][y]).collect())
            .collect();
        Ok(PresheafMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            components,
        })
    }

    /// Monomorphisms of presheaves are exactly the pointwise injections.
    pub fn is_mono(&self) -> bool {
        self.components.iter().enumerate().all(|(c, comp)| {
            let mut hit = vec![false; self.target.card(ObjId(c))];
            comp.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
        })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(c, comp)| {
            let mut hit = vec![false; self.target.card(ObjId(c))];
            for &y in comp {
                hit[y] = true;
            }
            hit.into_iter().all(|b| b)
        })
    }
}

/// The representable presheaf `y(c) = Hom(−, c)` acting by precomposition.
///
/// The element of `y(c)(c′)` at index `i` is `hom(c′, c)[i]`.
pub fn representable(site: &Arc<FiniteCategory>, c: ObjId) -> Result<Presheaf, FincatError> {
    if c.0 >= site.object_count() {
        return Err(FincatError::UnknownObject(c.to_string()));
    }
    let names = site
        .objects()
        .map(|a| site.hom(a, c).iter().map(|&u| site.morphism_name(u).to_owned()).collect())
        .collect();
    let action = site
        .morphism_ids()
        .map(|f| {
            site.hom(site.dst(f), c)
                .iter()
                .map(|&u| site.hom_position(site.compose(u, f)))
                .collect()
        })
        .collect();
    Ok(Presheaf {
        site: site.clone(),
        names,
        action,
    })
}

/// The morphism `y(c) → X` classifying `x ∈ X(c)`, sending `u` to `x·u`.
pub fn yoneda_morphism(x_sheaf: &Presheaf, c: ObjId, x: usize) -> Result<PresheafMorphism, FincatError> {
    let site = x_sheaf.site().clone();
    x_sheaf.check_element(c, x)?;
    let source = representable(&site, c)?;
    let components = site
        .objects()
        .map(|a| site.hom(a, c).iter().map(|&u| x_sheaf.act(u, x)).collect())
        .collect();
    Ok(PresheafMorphism::new_unchecked(source, x_sheaf.clone(), components))
}
