//! Integration-operator transducers: a deterministic automaton whose
//! transitions emit the value of a label series on the remaining suffix.

mod dot;
mod json;
mod monoid;

pub use json::TransducerSpec;
pub use monoid::Counter;

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::zseries::{Alphabet, Series, Word};

/// `(Q, q₀, δ, λ, F)` with states indexed `0..|Q|` and letters by alphabet position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTransducer {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: usize,
    delta: Vec<Vec<usize>>,
    lambda: Vec<Vec<Series>>,
    finals: Vec<BigInt>,
}

impl HTransducer {
    /// Checks totality, label alphabets and reachability of every state.
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: usize,
        delta: Vec<Vec<usize>>,
        lambda: Vec<Vec<Series>>,
        finals: Vec<BigInt>,
    ) -> Result<Self> {
        let n = names.len();
        let invalid = |m: String| Err(Error::InvalidTransducer(m));
        if n == 0 {
            return invalid("no states".into());
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return invalid(format!("duplicate state name '{name}'"));
            }
        }
        if initial >= n {
            return invalid(format!("initial state {initial} out of range"));
        }
        if delta.len() != n || lambda.len() != n || finals.len() != n {
            return invalid("δ, λ and F must be defined on every state".into());
        }
        for q in 0..n {
            if delta[q].len() != alphabet.len() || lambda[q].len() != alphabet.len() {
                return invalid(format!("δ or λ not total on state '{}'", names[q]));
            }
            if let Some(&t) = delta[q].iter().find(|&&t| t >= n) {
                return invalid(format!("transition from '{}' to unknown state {t}", names[q]));
            }
            for l in &lambda[q] {
                if l.alphabet() != &alphabet {
                    return invalid(format!(
                        "label on state '{}' is over {}, expected {alphabet}",
                        names[q],
                        l.alphabet()
                    ));
                }
            }
        }
        let t = HTransducer { alphabet, names, initial, delta, lambda, finals };
        if let Some(q) = t.unreachable_states().first() {
            return invalid(format!("state '{}' is not reachable from the initial state", t.names[*q]));
        }
        Ok(t)
    }

    /// Builds a transducer from name-keyed maps.
    pub fn from_maps(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: &str,
        delta: &BTreeMap<String, BTreeMap<char, String>>,
        lambda: &BTreeMap<String, BTreeMap<char, Series>>,
        finals: &BTreeMap<String, BigInt>,
    ) -> Result<Self> {
        let index = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::InvalidTransducer(format!("unknown state '{name}'")))
        };
        let missing = |what: &str, q: &str, c: Option<char>| {
            Error::InvalidTransducer(match c {
                Some(c) => format!("{what} undefined on ('{q}', {c})"),
                None => format!("{what} undefined on '{q}'"),
            })
        };
        let mut d = Vec::new();
        let mut l = Vec::new();
        let mut f = Vec::new();
        for q in &states {
            let mut drow = Vec::new();
            let mut lrow = Vec::new();
            for &c in alphabet.letters() {
                let target = delta.get(q).and_then(|m| m.get(&c)).ok_or_else(|| missing("δ", q, Some(c)))?;
                drow.push(index(target)?);
                let label = lambda.get(q).and_then(|m| m.get(&c)).ok_or_else(|| missing("λ", q, Some(c)))?;
                lrow.push(label.clone());
            }
            d.push(drow);
            l.push(lrow);
            f.push(finals.get(q).cloned().ok_or_else(|| missing("F", q, None))?);
        }
        for key in delta.keys().chain(lambda.keys()).chain(finals.keys()) {
            index(key)?;
        }
        let initial = index(initial)?;
        HTransducer::new(alphabet, states, initial, d, l, f)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// The state's name read as a word (builder-produced machines name states by words).
    pub fn state_word(&self, q: usize) -> Word {
        Word::from(self.names[q].as_str())
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    fn letter_index(&self, letter: char) -> Result<usize> {
        self.alphabet.index_of(letter).ok_or_else(|| Error::UnknownLetter {
            letter,
            alphabet: self.alphabet.to_string(),
        })
    }

    pub fn delta(&self, q: usize, letter: char) -> Result<usize> {
        Ok(self.delta[q][self.letter_index(letter)?])
    }

    pub fn lambda(&self, q: usize, letter: char) -> Result<&Series> {
        Ok(&self.lambda[q][self.letter_index(letter)?])
    }

    pub fn final_value(&self, q: usize) -> &BigInt {
        &self.finals[q]
    }

    /// Transition table `[state][letter index]`.
    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.delta
    }

    /// δ*(q, w).
    pub fn delta_star(&self, q: usize, w: &Word) -> Result<usize> {
        w.symbols().iter().try_fold(q, |s, &c| self.delta(s, c))
    }

    /// Value defined by `T(q, ε) = F(q)` and `T(q, a·w) = T(δ(q,a), w) + λ(q,a)(w)`.
    pub fn eval_recursive(&self, q: usize, w: &Word) -> Result<BigInt> {
        self.alphabet.check(w)?;
        self.eval_rec(q, w.symbols())
    }

    fn eval_rec(&self, q: usize, w: &[char]) -> Result<BigInt> {
        match w.split_first() {
            None => Ok(self.finals[q].clone()),
            Some((&a, rest)) => {
                let next = self.delta(q, a)?;
                let emitted = self.lambda(q, a)?.eval(&Word::new(rest.to_vec()))?;
                Ok(self.eval_rec(next, rest)? + emitted)
            }
        }
    }

    /// The closed form `Σᵢ λ(δ*(q₀, w≤i), w_{i+1})(w>i+1) + F(δ*(q₀, w))`.
    pub fn eval_closed(&self, w: &Word) -> Result<BigInt> {
        self.alphabet.check(w)?;
        let mut q = self.initial;
        let mut total = BigInt::zero();
        for (i, &a) in w.symbols().iter().enumerate() {
            total += self.lambda(q, a)?.eval(&w.suffix(i + 1))?;
            q = self.delta(q, a)?;
        }
        Ok(total + &self.finals[q])
    }

    pub fn eval(&self, w: &Word) -> Result<BigInt> {
        self.eval_closed(w)
    }

    pub(crate) fn unreachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.num_states()).filter(|&q| !seen[q]).collect()
    }

    /// Same states (by name), initial state, δ and F, and exactly equal labels.
    pub fn structurally_equal(&self, other: &HTransducer) -> Result<bool> {
        if self.alphabet != other.alphabet || self.num_states() != other.num_states() {
            return Ok(false);
        }
        if self.names[self.initial] != other.names[other.initial] {
            return Ok(false);
        }
        for q in 0..self.num_states() {
            let Some(p) = other.state(&self.names[q]) else { return Ok(false) };
            if self.finals[q] != other.finals[p] {
                return Ok(false);
            }
            for i in 0..self.alphabet.len() {
                if self.names[self.delta[q][i]] != other.names[other.delta[p][i]] {
                    return Ok(false);
                }
                let (a, b) = (&self.lambda[q][i], &other.lambda[p][i]);
                let same = match (a, b) {
                    (Series::Counting(_), _) | (_, Series::Counting(_)) => a == b,
                    _ => a.equivalent(b)?,
                };
                if !same {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
