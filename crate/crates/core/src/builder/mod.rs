//! Worklist construction of the canonical `k`-residual transducer.
//!
//! States are words, kept prefix-closed. A candidate `ua` is absorbed by the
//! longest state `v ⪯ ua` with `v ⊴ ua` (label `f↾ua − f↾v`), or becomes a new
//! state whose one-letter extensions join the worklist.

mod validate;

pub use validate::{minimality_witness, minimality_witness_badexok, validate_residual_transducer, ValidationReport, Violation, Witness};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::error::Error;
use crate::resorder::{derivative, Flavor, OrderCtx};
use crate::transducer::HTransducer;
use crate::zseries::{Series, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WorklistPolicy {
    Shortlex,
    Fifo,
    Lifo,
}

impl WorklistPolicy {
    pub const ALL: [WorklistPolicy; 3] = [WorklistPolicy::Shortlex, WorklistPolicy::Fifo, WorklistPolicy::Lifo];
}

impl FromStr for WorklistPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "shortlex" => Ok(WorklistPolicy::Shortlex),
            "fifo" => Ok(WorklistPolicy::Fifo),
            "lifo" => Ok(WorklistPolicy::Lifo),
            other => Err(Error::Unsupported(format!("unknown worklist policy '{other}'"))),
        }
    }
}

impl fmt::Display for WorklistPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorklistPolicy::Shortlex => "shortlex",
            WorklistPolicy::Fifo => "fifo",
            WorklistPolicy::Lifo => "lifo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub k: usize,
    /// Budget in oracle calls.
    pub fuel: usize,
    pub max_states: usize,
    pub policy: WorklistPolicy,
}

impl BuildConfig {
    pub fn new(k: usize) -> Self {
        BuildConfig { k, fuel: 10_000, max_states: 1_024, policy: WorklistPolicy::Shortlex }
    }

    pub fn with_policy(mut self, policy: WorklistPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_fuel(mut self, fuel: usize) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `ua` was absorbed by an existing state.
    Absorbed,
    /// `ua` became a new state.
    NewState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub chosen: Word,
    pub branch: Branch,
    /// `Q` after the step, shortlex-sorted.
    pub states: Vec<Word>,
    /// `O` after the step, shortlex-sorted.
    pub open: Vec<Word>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildTrace {
    pub steps: Vec<TraceStep>,
    pub oracle_calls: usize,
}

impl BuildTrace {
    /// Checks, at every step, that `Q ∪ O` is prefix-closed and that `O` is a
    /// prefix antichain of maximal elements of `Q ∪ O`.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, step) in self.steps.iter().enumerate() {
            let all: BTreeSet<&Word> = step.states.iter().chain(&step.open).collect();
            for w in &all {
                for p in w.prefixes().take(w.len()) {
                    if !all.contains(&p) {
                        out.push(format!("step {i}: prefix {p} of {w} missing from Q ∪ O"));
                    }
                }
            }
            for o in &step.open {
                if let Some(x) = all.iter().find(|x| **x != o && o.is_prefix_of(x)) {
                    out.push(format!("step {i}: open word {o} is a proper prefix of {x}"));
                }
            }
            if let Some(w) = step.states.iter().find(|w| step.open.contains(w)) {
                out.push(format!("step {i}: {w} is both a state and open"));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let words = |ws: &[Word]| ws.iter().map(Word::as_string).collect::<Vec<_>>();
        json!({
            "steps": self.steps.iter().map(|s| json!({
                "chosen": s.chosen.as_string(),
                "branch": match s.branch { Branch::Absorbed => "if", Branch::NewState => "else" },
                "Q": words(&s.states),
                "O": words(&s.open),
            })).collect::<Vec<_>>(),
            "oracle_calls": self.oracle_calls,
        })
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    /// The budget ran out before the worklist emptied.
    #[error("fuel exhausted after {} oracle calls and {} steps: {reason}", trace.oracle_calls, trace.steps.len())]
    FuelExhausted { reason: String, trace: BuildTrace },

    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Debug, Clone)]
pub struct Built {
    pub transducer: HTransducer,
    pub trace: BuildTrace,
}

enum Worklist {
    Shortlex(BTreeSet<Word>),
    Fifo(VecDeque<Word>),
    Lifo(Vec<Word>),
}

impl Worklist {
    fn new(policy: WorklistPolicy) -> Self {
        match policy {
            WorklistPolicy::Shortlex => Worklist::Shortlex(BTreeSet::new()),
            WorklistPolicy::Fifo => Worklist::Fifo(VecDeque::new()),
            WorklistPolicy::Lifo => Worklist::Lifo(Vec::new()),
        }
    }

    fn push(&mut self, w: Word) {
        match self {
            Worklist::Shortlex(s) => {
                s.insert(w);
            }
            Worklist::Fifo(q) => q.push_back(w),
            Worklist::Lifo(v) => v.push(w),
        }
    }

    fn pop(&mut self) -> Option<Word> {
        match self {
            Worklist::Shortlex(s) => s.pop_first(),
            Worklist::Fifo(q) => q.pop_front(),
            Worklist::Lifo(v) => v.pop(),
        }
    }

    fn snapshot(&self) -> Vec<Word> {
        let mut v: Vec<Word> = match self {
            Worklist::Shortlex(s) => s.iter().cloned().collect(),
            Worklist::Fifo(q) => q.iter().cloned().collect(),
            Worklist::Lifo(v) => v.clone(),
        };
        v.sort();
        v
    }
}

/// Runs the worklist construction for `f` at level `cfg.k`.
pub fn build_residual_transducer(f: &Series, cfg: &BuildConfig) -> Result<Built, BuildError> {
    if cfg.fuel == 0 || cfg.max_states == 0 {
        return Err(Error::Unsupported("fuel and max_states must be at least 1".into()).into());
    }
    let ctx = OrderCtx::new(f.clone(), cfg.k, Flavor::NPoly)?;
    let alphabet = f.alphabet().clone();

    let mut states: BTreeSet<Word> = BTreeSet::from([Word::empty()]);
    let mut open = Worklist::new(cfg.policy);
    for &a in alphabet.letters() {
        open.push(Word::new(vec![a]));
    }
    let mut delta: BTreeMap<String, BTreeMap<char, String>> = BTreeMap::new();
    let mut lambda: BTreeMap<String, BTreeMap<char, Series>> = BTreeMap::new();
    let mut trace = BuildTrace::default();

    while let Some(ua) = open.pop() {
        let u = ua.prefix(ua.len() - 1);
        let a = *ua.symbols().last().expect("open words are non-empty");

        // Longest state among the proper prefixes of ua that lies below ua.
        let mut target = None;
        for v in ua.prefixes().rev().skip(1) {
            if !states.contains(&v) {
                continue;
            }
            if trace.oracle_calls >= cfg.fuel {
                return Err(BuildError::FuelExhausted {
                    reason: format!("oracle budget of {} calls spent", cfg.fuel),
                    trace,
                });
            }
            trace.oracle_calls += 1;
            if ctx.res_below(&v, &ua)? {
                target = Some(v);
                break;
            }
        }

        let branch = match target {
            Some(v) => {
                let mut label = derivative(f, &ua, &v)?;
                if label.is_zero().unwrap_or(false) {
                    label = Series::Zero(alphabet.clone());
                }
                delta.entry(u.as_string()).or_default().insert(a, v.as_string());
                lambda.entry(u.as_string()).or_default().insert(a, label);
                Branch::Absorbed
            }
            None => {
                if states.len() >= cfg.max_states {
                    return Err(BuildError::FuelExhausted {
                        reason: format!("state limit of {} reached", cfg.max_states),
                        trace,
                    });
                }
                states.insert(ua.clone());
                delta.entry(u.as_string()).or_default().insert(a, ua.as_string());
                lambda.entry(u.as_string()).or_default().insert(a, Series::Zero(alphabet.clone()));
                for &b in alphabet.letters() {
                    open.push(ua.append(b));
                }
                Branch::NewState
            }
        };
        trace.steps.push(TraceStep {
            chosen: ua,
            branch,
            states: states.iter().cloned().collect(),
            open: open.snapshot(),
        });
    }

    let finals = states
        .iter()
        .map(|q| Ok((q.as_string(), f.eval(q)?)))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    let names: Vec<String> = states.iter().map(Word::as_string).collect();
    let transducer = HTransducer::from_maps(alphabet, names, "", &delta, &lambda, &finals)?;
    Ok(Built { transducer, trace })
}
