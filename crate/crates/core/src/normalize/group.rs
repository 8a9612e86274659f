use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::FiniteCategory;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed group: {0}")]
    Malformed(String),
    #[error("product {a}·{b} is not an element")]
    NotClosed { a: String, b: String },
    #[error("associativity fails on ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("no identity element")]
    NoIdentity,
    #[error("`{0}` has no inverse")]
    NoInverse(String),
    #[error("{0} is not a subgroup")]
    NotASubgroup(String),
    #[error("identity block {0} is not a subgroup")]
    NotACongruenceOfSubgroupForm(String),
}

/// Group document: element names and a row-major product table whose entry
/// at row `a`, column `b` names `a·b`. `names` optionally maps elements to
/// display labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<BTreeMap<String, String>>,
}

/// A finite group stored as a validated multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// A subgroup, as the sorted list of its member indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    pub fn new(name: impl Into<String>, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = elements.len();
        if n == 0 {
            return Err(GroupError::Malformed("a group has at least one element".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(GroupError::Malformed("product table is not square".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if table[a][b] >= n {
                    return Err(GroupError::NotClosed {
                        a: elements[a].clone(),
                        b: elements[b].clone(),
                    });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative {
                            a: elements[a].clone(),
                            b: elements[b].clone(),
                            c: elements[c].clone(),
                        });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::NoInverse(elements[a].clone()))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup {
            name: name.into(),
            elements,
            table,
            identity,
            inverse,
        })
    }

    pub fn from_file(name: impl Into<String>, file: &GroupFile) -> Result<Self, GroupError> {
        let index: HashMap<&str, usize> = file
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        if index.len() != file.elements.len() {
            return Err(GroupError::Malformed("duplicate element name".into()));
        }
        let mut table = Vec::with_capacity(file.table.len());
        for row in &file.table {
            let mut out = Vec::with_capacity(row.len());
            for entry in row {
                out.push(
                    *index
                        .get(entry.as_str())
                        .ok_or_else(|| GroupError::Malformed(format!("unknown element `{entry}` in table")))?,
                );
            }
            table.push(out);
        }
        let elements = match &file.names {
            None => file.elements.clone(),
            Some(names) => {
                if let Some(bad) = names.keys().find(|k| !index.contains_key(k.as_str())) {
                    return Err(GroupError::Malformed(format!("display name for unknown element `{bad}`")));
                }
                file.elements
                    .iter()
                    .map(|e| names.get(e).cloned().unwrap_or_else(|| e.clone()))
                    .collect()
            }
        };
        FiniteGroup::new(name, elements, table)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            elements: self.elements.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|&x| self.elements[x].clone()).collect())
                .collect(),
            names: None,
        }
    }

    /// `Z/n`, elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(format!("Z{n}"), elements, table).expect("cyclic group")
    }

    /// `Z/2 × Z/2`.
    pub fn klein() -> Self {
        let elements = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        FiniteGroup::new("V4", elements, table).expect("Klein group")
    }

    /// `D4 = ⟨σ, τ | σ⁴ = τ² = 1, τσ = σ³τ⟩`, element `σ^i τ^j` at index `4j + i`.
    pub fn dihedral4() -> Self {
        let name = |i: usize, j: usize| -> String {
            let s = match i {
                0 => "",
                1 => "σ",
                2 => "σ²",
                _ => "σ³",
            };
            match (s, j) {
                ("", 0) => "e".to_owned(),
                (s, 0) => s.to_owned(),
                (s, _) => format!("{s}τ"),
            }
        };
        let elements = (0..8).map(|k| name(k % 4, k / 4)).collect();
        // (σ^a τ^b)(σ^c τ^d) = σ^(a + (-1)^b c) τ^(b + d)
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (a, b, c, d) = (x % 4, x / 4, y % 4, y / 4);
                        let rot = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
                        rot + 4 * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new("D4", elements, table).expect("dihedral group")
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // unit index 0..4 = 1, i, j, k; element = 2 * unit + (negative as usize)
        const UNITS: [&str; 4] = ["1", "i", "j", "k"];
        // products of units: (sign flip, unit)
        let unit_mul = |p: usize, q: usize| -> (bool, usize) {
            match (p, q) {
                (0, q) => (false, q),
                (p, 0) => (false, p),
                (p, q) if p == q => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let elements = (0..8)
            .map(|x| {
                let (u, neg) = (x / 2, x % 2 == 1);
                format!("{}{}", if neg { "-" } else { "" }, UNITS[u])
            })
            .collect();
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (flip, u) = unit_mul(x / 2, y / 2);
                        let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ flip;
                        2 * u + neg as usize
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new("Q8", elements, table).expect("quaternion group")
    }

    /// The symmetric group on `n` points; `(p·q)(i) = q(p(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index[&p.iter().map(|&i| q[i]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let elements = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::new(format!("S{n}"), elements, table).expect("symmetric group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// One-object category whose morphisms are the group elements.
    pub fn to_site(&self) -> FiniteCategory {
        FiniteCategory::from_monoid(&self.elements, &self.table).expect("group tables are valid monoid tables")
    }

    /// Checks closure, identity and inverses.
    pub fn subgroup(&self, members: impl IntoIterator<Item = usize>) -> Result<Subgroup, GroupError> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        let h = Subgroup(set.into_iter().collect());
        let render = || self.render_set(&h);
        if h.0.iter().any(|&g| g >= self.order()) || !h.contains(self.identity) {
            return Err(GroupError::NotASubgroup(render()));
        }
        for &a in &h.0 {
            if !h.contains(self.inv(a)) || h.0.iter().any(|&b| !h.contains(self.mul(a, b))) {
                return Err(GroupError::NotASubgroup(render()));
            }
        }
        Ok(h)
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup(set.into_iter().collect())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup((0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup(vec![self.identity])
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let set: BTreeSet<usize> = h.0.iter().map(|&x| self.mul(self.mul(gi, x), g)).collect();
        Subgroup(set.into_iter().collect())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order()).all(|g| &self.conjugate(h, g) == h)
    }

    /// All subgroups: cyclic ones, closed under pairwise joins.
    ///
    /// Sorted by order, then by members.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = (0..self.order()).map(|g| self.generated(&[g])).collect();
        loop {
            let current: Vec<Subgroup> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    if a.is_subset_of(b) || b.is_subset_of(a) {
                        continue;
                    }
                    let gens: Vec<usize> = a.0.iter().chain(&b.0).copied().collect();
                    if found.insert(self.generated(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        all
    }

    pub fn is_dedekind(&self) -> bool {
        self.subgroups().iter().all(|h| self.is_normal(h))
    }

    pub fn render_set(&self, h: &Subgroup) -> String {
        let names: Vec<&str> = h.0.iter().map(|&g| self.element_name(g)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// `⟨g1,…⟩` from a smallest generating set, generators listed with the
    /// later element first; the whole group is shown by its name.
    pub fn label(&self, h: &Subgroup) -> String {
        if h.order() == 1 {
            return "⟨⟩".to_owned();
        }
        if h.order() == self.order() && self.order() > 1 {
            return self.name.clone();
        }
        let candidates: Vec<usize> = h.0.iter().copied().filter(|&g| g != self.identity).collect();
        for size in 1..=candidates.len() {
            if let Some(gens) = first_subset(&candidates, size, |s| &self.generated(s) == h) {
                let names: Vec<&str> = gens.iter().rev().map(|&g| self.element_name(g)).collect();
                return format!("⟨{}⟩", names.join(","));
            }
        }
        self.render_set(h)
    }
}

fn first_subset(items: &[usize], size: usize, mut pred: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    fn rec(
        items: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        pred: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return pred(cur);
        }
        for i in start..items.len() {
            cur.push(items[i]);
            if rec(items, size, i + 1, cur, pred) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    rec(items, size, 0, &mut cur, &mut pred).then_some(cur)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_owned()
    } else {
        out
    }
}
