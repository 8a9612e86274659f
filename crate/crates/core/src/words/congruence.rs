use std::collections::{HashMap, VecDeque};

use super::{Alphabet, WordsError};

/// A finite set with a right action of `Σ*`: `delta[q][a] = q·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSet {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
}

impl SigmaSet {
    pub fn new(alphabet: Alphabet, delta: Vec<Vec<usize>>) -> Result<Self, WordsError> {
        let n = delta.len();
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(WordsError::Malformed(format!(
                    "state {q} has {} transitions, alphabet has {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(WordsError::Malformed(format!("state {q} steps to missing state {bad}")));
            }
        }
        Ok(SigmaSet { alphabet, delta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn run(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |s, &a| self.delta[s][a])
    }

    /// `u ≡ v ⟺ q·u = q·v`, as the sub-automaton reachable from `q`.
    pub fn state_congruence(&self, q: usize) -> Result<RightCongruence, WordsError> {
        if q >= self.len() {
            return Err(WordsError::UnknownState(q.to_string()));
        }
        Ok(RightCongruence::from_pointed(&self.alphabet, &self.delta, q))
    }
}

/// A finite-index right congruence on `Σ*`, stored as an accessible pointed
/// automaton whose states are numbered in breadth-first order from the
/// initial state `0`, expanding symbols in alphabet order.
///
/// Two values are equal iff the automata are isomorphic as pointed
/// automata, i.e. iff the congruences coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RightCongruence {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
}

impl RightCongruence {
    /// The accessible part of `delta` from `start`, renumbered canonically.
    pub fn from_pointed(alphabet: &Alphabet, delta: &[Vec<usize>], start: usize) -> Self {
        let mut number: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for &t in &delta[q] {
                if let std::collections::hash_map::Entry::Vacant(slot) = number.entry(t) {
                    slot.insert(order.len());
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = order
            .iter()
            .map(|&q| delta[q].iter().map(|t| number[t]).collect())
            .collect();
        RightCongruence {
            alphabet: alphabet.clone(),
            delta,
        }
    }

    /// Accepts only an already canonical automaton.
    pub fn from_canonical(alphabet: Alphabet, delta: Vec<Vec<usize>>) -> Result<Self, WordsError> {
        let set = SigmaSet::new(alphabet, delta)?;
        if set.is_empty() {
            return Err(WordsError::Malformed("a right congruence has at least one class".into()));
        }
        let rc = set.state_congruence(0)?;
        if rc.delta != set.delta {
            return Err(WordsError::Malformed("automaton is not in canonical form".into()));
        }
        Ok(rc)
    }

    /// `⊤`: all words related.
    pub fn top(alphabet: &Alphabet) -> Self {
        RightCongruence {
            alphabet: alphabet.clone(),
            delta: vec![vec![0; alphabet.len()]],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of classes.
    pub fn index(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn is_top(&self) -> bool {
        self.index() == 1
    }

    pub fn as_sigma_set(&self) -> SigmaSet {
        SigmaSet {
            alphabet: self.alphabet.clone(),
            delta: self.delta.clone(),
        }
    }

    /// Class of `word`.
    pub fn class_of(&self, word: &[usize]) -> usize {
        self.run(0, word)
    }

    pub fn run(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |s, &a| self.delta[s][a])
    }

    pub fn related(&self, u: &[usize], v: &[usize]) -> bool {
        self.class_of(u) == self.class_of(v)
    }

    /// Congruence of the class `q`, i.e. `∼ ∗ w` for any `w` in that class.
    pub fn state_congruence(&self, q: usize) -> Result<RightCongruence, WordsError> {
        if q >= self.index() {
            return Err(WordsError::UnknownState(q.to_string()));
        }
        Ok(RightCongruence::from_pointed(&self.alphabet, &self.delta, q))
    }

    /// `u (∼ ∗ w) v ⟺ wu ∼ wv`.
    pub fn act(&self, word: &[usize]) -> RightCongruence {
        RightCongruence::from_pointed(&self.alphabet, &self.delta, self.class_of(word))
    }

    /// `∼ ∗ w` for a word given as text.
    pub fn act_str(&self, word: &str) -> Result<RightCongruence, WordsError> {
        Ok(self.act(&self.alphabet.parse_word(word)?))
    }

    fn check_alphabet(&self, other: &RightCongruence) -> Result<(), WordsError> {
        if self.alphabet != other.alphabet {
            return Err(WordsError::AlphabetMismatch);
        }
        Ok(())
    }

    // reachable pairs of the pointed product, in breadth-first order
    fn product(&self, other: &RightCongruence) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
        let mut number: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut pairs = vec![(0, 0)];
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let row = (0..self.alphabet.len())
                .map(|a| {
                    let t = (self.delta[p][a], other.delta[q][a]);
                    *number.entry(t).or_insert_with(|| {
                        pairs.push(t);
                        pairs.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        (pairs, delta)
    }

    /// Intersection of the two relations.
    pub fn meet(&self, other: &RightCongruence) -> Result<RightCongruence, WordsError> {
        self.check_alphabet(other)?;
        let (_, delta) = self.product(other);
        Ok(RightCongruence::from_pointed(&self.alphabet, &delta, 0))
    }

    /// Relation inclusion: `self ⊆ other`.
    pub fn leq(&self, other: &RightCongruence) -> Result<bool, WordsError> {
        self.check_alphabet(other)?;
        let (pairs, _) = self.product(other);
        let mut image: Vec<Option<usize>> = vec![None; self.index()];
        for (p, q) in pairs {
            match image[p] {
                Some(prev) if prev != q => return Ok(false),
                _ => image[p] = Some(q),
            }
        }
        Ok(true)
    }

    /// `ξ_Ξ(∼)`: `u ≈ v ⟺ ∼ ∗ u = ∼ ∗ v`.
    ///
    /// Classes whose state congruences coincide are merged; the merge is
    /// compatible with transitions because equal pointed automata step to
    /// equal pointed automata.
    pub fn normalize(&self) -> RightCongruence {
        let mut key: HashMap<RightCongruence, usize> = HashMap::new();
        let class: Vec<usize> = (0..self.index())
            .map(|q| {
                let rc = RightCongruence::from_pointed(&self.alphabet, &self.delta, q);
                let next = key.len();
                *key.entry(rc).or_insert(next)
            })
            .collect();
        let mut delta = vec![vec![0; self.alphabet.len()]; key.len()];
        for q in 0..self.index() {
            for a in 0..self.alphabet.len() {
                delta[class[q]][a] = class[self.delta[q][a]];
            }
        }
        RightCongruence::from_pointed(&self.alphabet, &delta, class[0])
    }

    /// Shortlex-least representative of each class.
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        let mut reps: Vec<Option<Vec<usize>>> = vec![None; self.index()];
        reps[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let t = self.delta[q][a];
                if reps[t].is_none() {
                    let mut w = reps[q].clone().expect("visited");
                    w.push(a);
                    reps[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        reps.into_iter().map(|r| r.expect("accessible")).collect()
    }
}
