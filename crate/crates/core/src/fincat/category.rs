use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::error::{FincatError, LawViolation};
use super::format::CategoryFile;

/// Index of an object in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of a morphism in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

impl Morphism {
    pub fn new(name: impl Into<String>, src: ObjId, dst: ObjId) -> Self {
        Morphism {
            name: name.into(),
            src,
            dst,
        }
    }
}

/// A finite category given by an explicit composition table.
///
/// Composition is written `compose(g, f) = g∘f` and is defined exactly when
/// `dst(f) == src(g)`. Presheaves on the category are contravariant, so for a
/// one-object category built from a monoid the composite `g∘f` is the monoid
/// product `g·f` and presheaves are right actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    // row-major over (g, f)
    composition: Vec<Option<MorId>>,
    // morphisms with a given target, sorted by id
    into: Vec<Vec<MorId>>,
    into_pos: Vec<usize>,
    // hom[src][dst], sorted by id
    hom: Vec<Vec<Vec<MorId>>>,
    hom_pos: Vec<usize>,
}

impl FiniteCategory {
    /// Builds a category from index-level data and checks every law.
    ///
    /// `compose` is consulted on every ordered pair of morphisms; it must
    /// return `Some` exactly on composable pairs.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> Option<MorId>,
    ) -> Result<Self, FincatError> {
        let n = morphisms.len();
        let mut composition = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                composition[g * n + f] = compose(MorId(g), MorId(f));
            }
        }
        Self::from_table(objects, morphisms, identities, composition)
    }

    fn from_table(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        composition: Vec<Option<MorId>>,
    ) -> Result<Self, FincatError> {
        let n_obj = objects.len();
        let n = morphisms.len();
        if identities.len() != n_obj {
            return Err(FincatError::Malformed(format!(
                "{} identities for {} objects",
                identities.len(),
                n_obj
            )));
        }
        for m in &morphisms {
            if m.src.0 >= n_obj || m.dst.0 >= n_obj {
                return Err(FincatError::Malformed(format!(
                    "morphism `{}` has an endpoint outside the object list",
                    m.name
                )));
            }
        }
        if let Some(bad) = identities.iter().find(|i| i.0 >= n) {
            return Err(FincatError::Malformed(format!("identity {bad} out of range")));
        }
        let mut seen = HashMap::new();
        for m in &morphisms {
            if seen.insert(m.name.as_str(), ()).is_some() {
                return Err(FincatError::DuplicateName(m.name.clone()));
            }
        }
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.as_str(), ()).is_some() {
                return Err(FincatError::DuplicateName(o.clone()));
            }
        }

        let mut into = vec![Vec::new(); n_obj];
        let mut into_pos = vec![0; n];
        let mut hom = vec![vec![Vec::new(); n_obj]; n_obj];
        let mut hom_pos = vec![0; n];
        for (i, m) in morphisms.iter().enumerate() {
            into_pos[i] = into[m.dst.0].len();
            into[m.dst.0].push(MorId(i));
            hom_pos[i] = hom[m.src.0][m.dst.0].len();
            hom[m.src.0][m.dst.0].push(MorId(i));
        }

        let cat = FiniteCategory {
            objects,
            morphisms,
            identities,
            composition,
            into,
            into_pos,
            hom,
            hom_pos,
        };
        let violations = cat.law_violations();
        if violations.is_empty() {
            Ok(cat)
        } else {
            Err(FincatError::LawViolations(violations))
        }
    }

    fn law_violations(&self) -> Vec<LawViolation> {
        let n = self.morphisms.len();
        let name = |m: MorId| {
            self.morphisms
                .get(m.0)
                .map_or_else(|| format!("#{}", m.0), |x| x.name.clone())
        };
        let mut out = Vec::new();

        for (c, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id.0];
            if m.src.0 != c || m.dst.0 != c {
                out.push(LawViolation::Identity {
                    object: self.objects[c].clone(),
                    morphism: m.name.clone(),
                });
            }
        }

        let mut typed = true;
        for g in 0..n {
            for f in 0..n {
                let composable = self.morphisms[f].dst == self.morphisms[g].src;
                match (composable, self.composition[g * n + f]) {
                    (true, None) => {
                        typed = false;
                        out.push(LawViolation::MissingComposite {
                            g: name(MorId(g)),
                            f: name(MorId(f)),
                        });
                    }
                    (false, Some(r)) => {
                        typed = false;
                        out.push(LawViolation::IllTypedComposite {
                            g: name(MorId(g)),
                            f: name(MorId(f)),
                            result: name(r),
                        });
                    }
                    (true, Some(r)) if r.0 >= n => {
                        typed = false;
                        out.push(LawViolation::IllTypedComposite {
                            g: name(MorId(g)),
                            f: name(MorId(f)),
                            result: name(r),
                        });
                    }
                    (true, Some(r)) => {
                        let rm = &self.morphisms[r.0];
                        if rm.src != self.morphisms[f].src || rm.dst != self.morphisms[g].dst {
                            typed = false;
                            out.push(LawViolation::IllTypedComposite {
                                g: name(MorId(g)),
                                f: name(MorId(f)),
                                result: name(r),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !typed || !out.is_empty() {
            return out;
        }

        for (f, m) in self.morphisms.iter().enumerate() {
            let f = MorId(f);
            let id_dst = self.identities[m.dst.0];
            let id_src = self.identities[m.src.0];
            if self.compose(id_dst, f) != f || self.compose(f, id_src) != f {
                out.push(LawViolation::Identity {
                    object: self.objects[m.dst.0].clone(),
                    morphism: m.name.clone(),
                });
            }
        }

        for f in 0..n {
            for &g in &self.hom_from(self.morphisms[f].dst) {
                for &h in &self.hom_from(self.morphisms[g.0].dst) {
                    let f = MorId(f);
                    let left = self.compose(h, self.compose(g, f));
                    let right = self.compose(self.compose(h, g), f);
                    if left != right {
                        out.push(LawViolation::Associativity {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
        out
    }

    fn hom_from(&self, src: ObjId) -> Vec<MorId> {
        self.hom[src.0].iter().flatten().copied().collect()
    }

    /// Resolves a parsed category file and validates it.
    ///
    /// Composites involving an identity may be omitted from the file; they
    /// are filled in by the identity law. Any composite that is listed is
    /// taken verbatim, so a wrong identity entry is reported as a violation.
    pub fn from_file(file: &CategoryFile) -> Result<Self, FincatError> {
        let obj_index: BTreeMap<&str, ObjId> = file
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), ObjId(i)))
            .collect();
        if obj_index.len() != file.objects.len() {
            let dup = first_duplicate(file.objects.iter().map(String::as_str));
            return Err(FincatError::DuplicateName(dup.unwrap_or_default().to_owned()));
        }
        let obj = |name: &str| {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| FincatError::UnknownObject(name.to_owned()))
        };

        let mut morphisms = Vec::with_capacity(file.morphisms.len());
        for m in &file.morphisms {
            morphisms.push(Morphism {
                name: m.name.clone(),
                src: obj(&m.src)?,
                dst: obj(&m.dst)?,
            });
        }
        let mor_index: BTreeMap<&str, MorId> = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.as_str(), MorId(i)))
            .collect();
        if mor_index.len() != morphisms.len() {
            let dup = first_duplicate(morphisms.iter().map(|m| m.name.as_str()));
            return Err(FincatError::DuplicateName(dup.unwrap_or_default().to_owned()));
        }
        let mor = |name: &str| {
            mor_index
                .get(name)
                .copied()
                .ok_or_else(|| FincatError::UnknownMorphism(name.to_owned()))
        };

        let mut identities = Vec::with_capacity(file.objects.len());
        for o in &file.objects {
            let id = file
                .identities
                .get(o)
                .ok_or_else(|| FincatError::Malformed(format!("no identity for object `{o}`")))?;
            identities.push(mor(id)?);
        }
        for key in file.identities.keys() {
            obj(key)?;
        }

        let n = morphisms.len();
        let mut composition = vec![None; n * n];
        for (c, &id) in identities.iter().enumerate() {
            for (f, m) in morphisms.iter().enumerate() {
                if m.dst.0 == c {
                    composition[id.0 * n + f] = Some(MorId(f));
                }
                if m.src.0 == c {
                    composition[f * n + id.0] = Some(MorId(f));
                }
            }
        }
        let mut listed = vec![false; n * n];
        for entry in &file.composition {
            let (g, f, r) = (mor(&entry.g)?, mor(&entry.f)?, mor(&entry.result)?);
            let slot = g.0 * n + f.0;
            if listed[slot] && composition[slot] != Some(r) {
                return Err(FincatError::Malformed(format!(
                    "composite ({} ∘ {}) listed twice with different results",
                    entry.g, entry.f
                )));
            }
            listed[slot] = true;
            composition[slot] = Some(r);
        }

        Self::from_table(file.objects.clone(), morphisms, identities, composition)
    }

    /// Serializes back into the file format, listing only non-identity composites.
    pub fn to_file(&self) -> CategoryFile {
        use super::format::{CompositionEntry, MorphismEntry};
        let mut composition = Vec::new();
        for g in self.morphism_ids() {
            for f in self.morphism_ids() {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(r) = self.try_compose(g, f) {
                    composition.push(CompositionEntry {
                        g: self.morphism_name(g).to_owned(),
                        f: self.morphism_name(f).to_owned(),
                        result: self.morphism_name(r).to_owned(),
                    });
                }
            }
        }
        CategoryFile {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismEntry {
                    name: m.name.clone(),
                    src: self.objects[m.src.0].clone(),
                    dst: self.objects[m.dst.0].clone(),
                })
                .collect(),
            identities: self
                .objects
                .iter()
                .zip(&self.identities)
                .map(|(o, id)| (o.clone(), self.morphisms[id.0].name.clone()))
                .collect(),
            composition,
        }
    }

    /// One-object category of a monoid given by its multiplication table.
    ///
    /// `table[a][b]` is the product `a·b`; the composite `g∘f` is `g·f`.
    pub fn from_monoid(names: &[String], table: &[Vec<usize>]) -> Result<Self, FincatError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(FincatError::Malformed("monoid table is not square over its elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| FincatError::Malformed("monoid table has no two-sided identity".into()))?;
        let morphisms = names
            .iter()
            .map(|name| Morphism {
                name: name.clone(),
                src: ObjId(0),
                dst: ObjId(0),
            })
            .collect();
        Self::from_parts(vec!["*".into()], morphisms, vec![MorId(identity)], |g, f| {
            Some(MorId(table[g.0][f.0]))
        })
    }

    /// Thin category of a finite poset given by its strict order relation
    /// `below(a, b)` meaning `a < b`; there is one arrow `a → b` iff `a ≤ b`.
    pub fn from_poset(names: &[&str], below: impl Fn(usize, usize) -> bool) -> Result<Self, FincatError> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut arrow = HashMap::new();
        let mut identities = vec![MorId(0); n];
        for a in 0..n {
            for b in 0..n {
                if a == b || below(a, b) {
                    arrow.insert((a, b), MorId(morphisms.len()));
                    if a == b {
                        identities[a] = MorId(morphisms.len());
                    }
                    morphisms.push(Morphism {
                        name: if a == b {
                            format!("id_{}", names[a])
                        } else {
                            format!("{}<{}", names[a], names[b])
                        },
                        src: ObjId(a),
                        dst: ObjId(b),
                    });
                }
            }
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src.0, m.dst.0)).collect();
        Self::from_parts(
            names.iter().map(|s| s.to_string()).collect(),
            morphisms,
            identities,
            |g, f| {
                let (fs, fd) = ends[f.0];
                let (gs, gd) = ends[g.0];
                if fd != gs {
                    return None;
                }
                arrow.get(&(fs, gd)).copied()
            },
        )
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, c: ObjId) -> &str {
        &self.objects[c.0]
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjId, FincatError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(ObjId)
            .ok_or_else(|| FincatError::UnknownObject(name.to_owned()))
    }

    pub fn morphism_ids(&self) -> impl ExactSizeIterator<Item = MorId> {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn morphism_by_name(&self, name: &str) -> Result<MorId, FincatError> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .map(MorId)
            .ok_or_else(|| FincatError::UnknownMorphism(name.to_owned()))
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].src
    }

    pub fn dst(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].dst
    }

    pub fn identity(&self, c: ObjId) -> MorId {
        self.identities[c.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.composition[g.0 * self.morphisms.len() + f.0]
    }

    /// `g∘f`. Panics if the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "morphisms `{}` and `{}` are not composable",
                self.morphism_name(g),
                self.morphism_name(f)
            )
        })
    }

    /// All morphisms with target `c`, sorted by id.
    pub fn arrows_into(&self, c: ObjId) -> &[MorId] {
        &self.into[c.0]
    }

    /// Position of `f` inside `into(dst(f))`.
    pub fn into_position(&self, f: MorId) -> usize {
        self.into_pos[f.0]
    }

    /// `Hom(a, b)`, sorted by id.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a.0][b.0]
    }

    /// Position of `f` inside `hom(src(f), dst(f))`.
    pub fn hom_position(&self, f: MorId) -> usize {
        self.hom_pos[f.0]
    }

    /// Morphisms with source `c`.
    pub fn out_of(&self, c: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.hom[c.0].iter().flatten().copied()
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().flatten().all(|h| h.len() <= 1)
    }
}

fn first_duplicate<'a>(names: impl Iterator<Item = &'a str>) -> Option<&'a str> {
    let mut seen = std::collections::HashSet::new();
    names.into_iter().find(|n| !seen.insert(*n))
}
