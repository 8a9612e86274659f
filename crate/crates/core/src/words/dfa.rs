use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::congruence::{RightCongruence, SigmaSet};
use super::regex::Regex;
use super::{Alphabet, WordsError};

/// Complete deterministic automaton; every state is reachable and the
/// initial state is `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    transitions: SigmaSet,
    accepting: Vec<bool>,
}

/// DFA document. `transitions` lists `[state, symbol, state]` triples and
/// must define exactly one target per state and symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaFile {
    pub alphabet: Vec<char>,
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, char, String)>,
}

impl Dfa {
    /// Builds a DFA from any complete transition table, keeping only the
    /// states reachable from `initial`, numbered breadth-first.
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self, WordsError> {
        let set = SigmaSet::new(alphabet, delta)?;
        if initial >= set.len() {
            return Err(WordsError::UnknownState(initial.to_string()));
        }
        if accepting.len() != set.len() {
            return Err(WordsError::Malformed("acceptance flags do not match the states".into()));
        }
        let order = bfs_order(set.delta(), initial);
        Ok(Dfa::renumbered(&set, &accepting, &order))
    }

    // `order[i]` is the old state that becomes state `i`
    fn renumbered(set: &SigmaSet, accepting: &[bool], order: &[usize]) -> Dfa {
        let mut number = vec![usize::MAX; set.len()];
        for (i, &q) in order.iter().enumerate() {
            number[q] = i;
        }
        let delta = order
            .iter()
            .map(|&q| set.delta()[q].iter().map(|&t| number[t]).collect())
            .collect();
        Dfa {
            transitions: SigmaSet::new(set.alphabet().clone(), delta).expect("renumbering keeps the table valid"),
            accepting: order.iter().map(|&q| accepting[q]).collect(),
        }
    }

    pub fn from_file(file: &DfaFile) -> Result<Self, WordsError> {
        let alphabet = Alphabet::from_symbols(file.alphabet.clone())?;
        let index: HashMap<&str, usize> = file.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != file.states.len() {
            return Err(WordsError::Malformed("duplicate state name".into()));
        }
        let state = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| WordsError::UnknownState(name.to_owned()))
        };
        let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; file.states.len()];
        for (from, symbol, to) in &file.transitions {
            let (q, t) = (state(from)?, state(to)?);
            let a = alphabet.index(*symbol).ok_or(WordsError::SymbolOutsideAlphabet {
                symbol: *symbol,
                position: 0,
            })?;
            match delta[q][a] {
                Some(prev) if prev != t => {
                    return Err(WordsError::Malformed(format!("state `{from}` has two `{symbol}` transitions")))
                }
                _ => delta[q][a] = Some(t),
            }
        }
        let mut full = Vec::with_capacity(delta.len());
        for (q, row) in delta.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (a, t) in row.into_iter().enumerate() {
                out.push(t.ok_or_else(|| {
                    WordsError::Malformed(format!(
                        "state `{}` has no `{}` transition",
                        file.states[q],
                        alphabet.symbol(a)
                    ))
                })?);
            }
            full.push(out);
        }
        let mut accepting = vec![false; file.states.len()];
        for name in &file.accepting {
            accepting[state(name)?] = true;
        }
        Dfa::new(alphabet, full, state(&file.initial)?, accepting)
    }

    pub fn to_file(&self) -> DfaFile {
        let name = |q: usize| format!("q{q}");
        let alphabet = self.alphabet();
        DfaFile {
            alphabet: alphabet.symbols().to_vec(),
            states: (0..self.len()).map(name).collect(),
            initial: name(0),
            accepting: (0..self.len()).filter(|&q| self.accepting[q]).map(name).collect(),
            transitions: (0..self.len())
                .flat_map(|q| (0..alphabet.len()).map(move |a| (q, a)))
                .map(|(q, a)| (name(q), alphabet.symbol(a), name(self.step(q, a))))
                .collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.transitions.alphabet()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn transitions(&self) -> &SigmaSet {
        &self.transitions
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.transitions.step(q, a)
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.transitions.run(0, word)]
    }

    /// The equivalent minimal DFA (Hopcroft refinement), numbered breadth-first.
    pub fn minimize(&self) -> Dfa {
        let n = self.len();
        let k = self.alphabet().len();
        // inverse[a][t] = states stepping to t on a
        let mut inverse = vec![vec![Vec::new(); n]; k];
        for q in 0..n {
            for (a, inv) in inverse.iter_mut().enumerate() {
                inv[self.step(q, a)].push(q);
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0; n];
        for accept in [true, false] {
            let members: Vec<usize> = (0..n).filter(|&q| self.accepting[q] == accept).collect();
            if !members.is_empty() {
                for &q in &members {
                    block_of[q] = blocks.len();
                }
                blocks.push(members);
            }
        }
        let mut work: VecDeque<(usize, usize)> = VecDeque::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        if blocks.len() == 2 {
            let smaller = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
            for a in 0..k {
                work.push_back((smaller, a));
                pending.insert((smaller, a));
            }
        }
        while let Some((splitter, a)) = work.pop_front() {
            pending.remove(&(splitter, a));
            let pre: BTreeSet<usize> = blocks[splitter]
                .iter()
                .flat_map(|&t| inverse[a][t].iter().copied())
                .collect();
            let touched: BTreeSet<usize> = pre.iter().map(|&q| block_of[q]).collect();
            for y in touched {
                let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[y].iter().partition(|q| pre.contains(q));
                if outside.is_empty() {
                    continue;
                }
                let new = blocks.len();
                for &q in &outside {
                    block_of[q] = new;
                }
                let smaller = if inside.len() <= outside.len() { y } else { new };
                blocks[y] = inside;
                blocks.push(outside);
                for c in 0..k {
                    let entry = if pending.contains(&(y, c)) { new } else { smaller };
                    if pending.insert((entry, c)) {
                        work.push_back((entry, c));
                    }
                }
            }
        }
        let delta = blocks
            .iter()
            .map(|b| (0..k).map(|a| block_of[self.step(b[0], a)]).collect())
            .collect();
        let accepting = blocks.iter().map(|b| self.accepting[b[0]]).collect();
        Dfa::new(self.alphabet().clone(), delta, block_of[0], accepting).expect("quotient is complete")
    }

    /// The Nerode congruence of the language: the minimal automaton with
    /// acceptance forgotten.
    pub fn nerode_congruence(&self) -> RightCongruence {
        let m = self.minimize();
        RightCongruence::from_pointed(m.alphabet(), m.transitions.delta(), 0)
    }

    /// Congruence of a state: `u ≡ v ⟺ q·u = q·v`.
    pub fn state_congruence(&self, q: usize) -> Result<RightCongruence, WordsError> {
        self.transitions.state_congruence(q)
    }
}

fn bfs_order(delta: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; delta.len()];
    seen[start] = true;
    let mut order = vec![start];
    let mut i = 0;
    while i < order.len() {
        for &t in &delta[order[i]] {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
        i += 1;
    }
    order
}

/// Thompson automaton: `eps[q]` and `step[q] = [(symbol, target)]`.
struct Nfa {
    eps: Vec<Vec<usize>>,
    step: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.step.push(Vec::new());
        self.eps.len() - 1
    }

    // fragment with one entry and one exit
    fn build(&mut self, r: &Regex) -> (usize, usize) {
        let (i, o) = (self.state(), self.state());
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[i].push(o),
            Regex::Symbol(a) => self.step[i].push((*a, o)),
            Regex::Concat(l, rr) => {
                let (li, lo) = self.build(l);
                let (ri, ro) = self.build(rr);
                self.eps[i].push(li);
                self.eps[lo].push(ri);
                self.eps[ro].push(o);
            }
            Regex::Alt(l, rr) => {
                for part in [l, rr] {
                    let (pi, po) = self.build(part);
                    self.eps[i].push(pi);
                    self.eps[po].push(o);
                }
            }
            Regex::Star(inner) => {
                let (pi, po) = self.build(inner);
                self.eps[i].extend([pi, o]);
                self.eps[po].extend([pi, o]);
            }
        }
        (i, o)
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
}

/// Thompson construction, subset construction (the empty subset is the
/// sink), then minimization.
pub fn regex_to_min_dfa(r: &Regex, alphabet: &Alphabet) -> Dfa {
    let mut nfa = Nfa {
        eps: Vec::new(),
        step: Vec::new(),
    };
    let (start, accept) = nfa.build(r);
    let mut first = BTreeSet::from([start]);
    nfa.closure(&mut first);
    let mut number: HashMap<BTreeSet<usize>, usize> = HashMap::from([(first.clone(), 0)]);
    let mut subsets = vec![first];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for a in 0..alphabet.len() {
            let mut next: BTreeSet<usize> = subsets[i]
                .iter()
                .flat_map(|&q| nfa.step[q].iter().filter(|(b, _)| *b == a).map(|&(_, t)| t))
                .collect();
            nfa.closure(&mut next);
            let id = match number.get(&next) {
                Some(&id) => id,
                None => {
                    number.insert(next.clone(), subsets.len());
                    subsets.push(next);
                    subsets.len() - 1
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let accepting = subsets.iter().map(|s| s.contains(&accept)).collect();
    Dfa::new(alphabet.clone(), delta, 0, accepting)
        .expect("subset construction is complete")
        .minimize()
}
