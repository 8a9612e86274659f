use std::collections::HashMap;

use super::congruence::{RightCongruence, SigmaSet};
use super::WordsError;

/// The monoid of state maps `q ↦ q·w` realized by words `w`.
///
/// Elements are numbered in order of their shortlex-least witness, so the
/// identity (witness `ε`) is element `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMonoid {
    base: SigmaSet,
    maps: Vec<Vec<usize>>,
    witnesses: Vec<Vec<usize>>,
    // right[i][a] = element of witness(i)·a
    right: Vec<Vec<usize>>,
}

impl TransitionMonoid {
    /// Closes the letter maps under composition, failing once more than
    /// `cap` elements appear.
    pub fn new(base: &SigmaSet, cap: usize) -> Result<Self, WordsError> {
        let k = base.alphabet().len();
        let identity: Vec<usize> = (0..base.len()).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
        let mut maps = vec![identity];
        let mut witnesses = vec![Vec::new()];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < maps.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let next: Vec<usize> = maps[i].iter().map(|&q| base.step(q, a)).collect();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if maps.len() >= cap {
                            return Err(WordsError::BudgetExceeded { size: maps.len() + 1, cap });
                        }
                        let mut w = witnesses[i].clone();
                        w.push(a);
                        index.insert(next.clone(), maps.len());
                        maps.push(next);
                        witnesses.push(w);
                        maps.len() - 1
                    }
                };
                row.push(id);
            }
            right.push(row);
            i += 1;
        }
        Ok(TransitionMonoid {
            base: base.clone(),
            maps,
            witnesses,
            right,
        })
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn witness(&self, i: usize) -> &[usize] {
        &self.witnesses[i]
    }

    pub fn map(&self, i: usize) -> &[usize] {
        &self.maps[i]
    }

    /// Element realized by `word`.
    pub fn element_of(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |e, &a| self.right[e][a])
    }

    /// `i·j`, the element of `witness(i) witness(j)`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.witnesses[j].iter().fold(i, |e, &a| self.right[e][a])
    }

    /// Full multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|i| (0..self.order()).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    /// Right Cayley graph pointed at the identity, as a right congruence:
    /// `u ≡ v` iff `u` and `v` induce the same state map.
    pub fn cayley_congruence(&self) -> RightCongruence {
        RightCongruence::from_pointed(self.base.alphabet(), &self.right, 0)
    }
}

/// Syntactic monoid and congruence of the language whose Nerode congruence
/// is `nerode`; the transition monoid of the minimal automaton.
pub fn syntactic_congruence(
    nerode: &RightCongruence,
    cap: usize,
) -> Result<(TransitionMonoid, RightCongruence), WordsError> {
    let m = TransitionMonoid::new(&nerode.as_sigma_set(), cap)?;
    let rc = m.cayley_congruence();
    Ok((m, rc))
}

/// Meet of the orbit `{∼ ∗ w}`, compared with the syntactic congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMeet {
    pub orbit_size: usize,
    pub meet: RightCongruence,
    pub equal_to_syntactic: bool,
}

pub fn orbit_meet_check(nerode: &RightCongruence, cap: usize) -> Result<OrbitMeet, WordsError> {
    let mut orbit: Vec<RightCongruence> = Vec::new();
    for q in 0..nerode.index() {
        let rc = nerode.state_congruence(q)?;
        if !orbit.contains(&rc) {
            orbit.push(rc);
        }
    }
    let mut meet = RightCongruence::top(nerode.alphabet());
    for rc in &orbit {
        meet = meet.meet(rc)?;
    }
    let (_, syntactic) = syntactic_congruence(nerode, cap)?;
    Ok(OrbitMeet {
        orbit_size: orbit.len(),
        equal_to_syntactic: meet == syntactic,
        meet,
    })
}
