use std::collections::{HashMap, VecDeque};

use super::HTransducer;
use crate::zseries::Word;

/// A counter `(q, u)`: `δ(q, u) ≠ q` and `δ(q, uⁿ) = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counter {
    pub state: usize,
    pub word: Word,
    pub n: usize,
}

type Transformation = Vec<usize>;

fn compose(first: &[usize], then: &[usize]) -> Transformation {
    first.iter().map(|&q| then[q]).collect()
}

fn power(m: &[usize], mut e: usize) -> Transformation {
    let mut result: Transformation = (0..m.len()).collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&result, &base);
        }
        base = compose(&base, &base);
        e >>= 1;
    }
    result
}

impl HTransducer {
    /// Elements of the transition monoid with a shortest representative word each,
    /// in breadth-first (hence shortlex-compatible) order.
    pub fn transition_monoid(&self) -> Vec<(Transformation, Word)> {
        let identity: Transformation = (0..self.num_states()).collect();
        let mut seen: HashMap<Transformation, usize> = HashMap::new();
        let mut elements = vec![(identity.clone(), Word::empty())];
        seen.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (li, &letter) in self.alphabet().letters().iter().enumerate() {
                let step: Transformation = self.transitions().iter().map(|row| row[li]).collect();
                let next = compose(&elements[i].0, &step);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), elements.len());
                    let word = elements[i].1.append(letter);
                    elements.push((next, word));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        elements
    }

    /// A counter, if the transition monoid is not aperiodic.
    ///
    /// An element `m` is aperiodic iff `m^t = m^{t+1}` with `t = |monoid|`; a
    /// non-aperiodic element has a cycle of length `n ≥ 2` on some state, which is
    /// a counter.
    pub fn find_counter(&self) -> Option<Counter> {
        let monoid = self.transition_monoid();
        let t = monoid.len();
        for (m, word) in &monoid {
            if power(m, t) == power(m, t + 1) {
                continue;
            }
            for q in 0..m.len() {
                let mut s = m[q];
                let mut n = 1;
                while s != q && n <= m.len() {
                    s = m[s];
                    n += 1;
                }
                if s == q && n >= 2 {
                    return Some(Counter { state: q, word: word.clone(), n });
                }
            }
        }
        None
    }

    pub fn is_counter_free(&self) -> bool {
        self.find_counter().is_none()
    }
}
