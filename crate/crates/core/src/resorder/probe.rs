//! Bounded probes for well-quasi-ordering and aperiodicity of `⊴`.
//!
//! Both are semi-decisions: a report never claims the order is a WQO, only that
//! no bad sequence was found within the bound (or exhibits one).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{Flavor, OrderCtx};
use crate::error::{Error, Result};
use crate::zseries::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    PrefixChain,
    Full,
}

impl FromStr for ProbeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<ProbeMode> {
        match s {
            "prefix-chain" => Ok(ProbeMode::PrefixChain),
            "full" => Ok(ProbeMode::Full),
            other => Err(Error::Unsupported(format!("unknown probe mode '{other}'"))),
        }
    }
}

impl fmt::Display for ProbeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeMode::PrefixChain => "prefix-chain",
            ProbeMode::Full => "full",
        })
    }
}

pub const NO_BAD_SEQUENCE: &str = "no-bad-sequence-up-to-bound";
pub const BAD_CHAIN: &str = "bad-chain";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WqoReport {
    pub mode: ProbeMode,
    pub max_len: usize,
    pub verdict: &'static str,
    /// The longest bad sequence found, in enumeration order (ε is `""`).
    pub witness: Vec<String>,
    pub longest_bad_chain: usize,
    /// Prefix-chain mode: longest bad chain among the first `ℓ` prefixes, for
    /// `ℓ = 1..=max_len`. Full mode: undominated words after each length.
    pub antichain_sizes: Vec<usize>,
    pub oracle_calls: usize,
}

impl WqoReport {
    pub fn found_bad_chain(&self) -> bool {
        self.verdict == BAD_CHAIN
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AperiodicityReport {
    pub u: String,
    pub w: String,
    pub n_max: usize,
    pub verdict: &'static str,
    /// Least `N₀` such that `u·wⁿ ⊴ u·wⁿ⁺¹` for every `N₀ ≤ n < n_max`.
    pub n0: Option<usize>,
    /// `checks[n]` is the outcome of `u·wⁿ ⊴ u·wⁿ⁺¹`.
    pub checks: Vec<bool>,
    pub semi_decision: bool,
}

/// `⊴` with memoization.
struct CachedOrder<'a> {
    ctx: &'a OrderCtx,
    cache: HashMap<(Word, Word), bool>,
    calls: usize,
}

impl<'a> CachedOrder<'a> {
    fn new(ctx: &'a OrderCtx) -> Self {
        CachedOrder { ctx, cache: HashMap::new(), calls: 0 }
    }

    fn below(&mut self, v: &Word, u: &Word) -> Result<bool> {
        if let Some(&b) = self.cache.get(&(v.clone(), u.clone())) {
            return Ok(b);
        }
        self.calls += 1;
        let b = self.ctx.res_below(v, u)?;
        self.cache.insert((v.clone(), u.clone()), b);
        Ok(b)
    }
}

/// Largest set of indices with no `i < j` such that `less[i][j]`, for a
/// strict order given as a (transitively closed) relation. Dilworth via König.
pub(crate) fn max_antichain(less: &[Vec<bool>]) -> Vec<usize> {
    let n = less.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut match_left: Vec<Option<usize>> = vec![None; n];

    fn augment(i: usize, less: &[Vec<bool>], seen: &mut [bool], ml: &mut [Option<usize>], mr: &mut [Option<usize>]) -> bool {
        for j in 0..less.len() {
            if less[i][j] && !seen[j] {
                seen[j] = true;
                if mr[j].is_none_or(|i2| augment(i2, less, seen, ml, mr)) {
                    mr[j] = Some(i);
                    ml[i] = Some(j);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        augment(i, less, &mut seen, &mut match_left, &mut match_right);
    }
    // Alternating reachability from unmatched left vertices.
    let mut left_z = vec![false; n];
    let mut right_z = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| match_left[i].is_none()).collect();
    for &i in &stack {
        left_z[i] = true;
    }
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if less[i][j] && !right_z[j] {
                right_z[j] = true;
                if let Some(i2) = match_right[j] {
                    if !left_z[i2] {
                        left_z[i2] = true;
                        stack.push(i2);
                    }
                }
            }
        }
    }
    (0..n).filter(|&i| left_z[i] && !right_z[i]).collect()
}

fn transitive_closure(rel: &mut [Vec<bool>]) {
    let n = rel.len();
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                for j in 0..n {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
}

impl OrderCtx {
    /// Searches for bad sequences among words of length `< max_len`.
    ///
    /// In prefix-chain mode every maximal chain `ε ≺ u₁ ≺ … ≺ u` (with
    /// `|u| = max_len − 1`) is examined and its longest bad subsequence computed
    /// exactly; the verdict is `bad-chain` when some chain is entirely bad. In
    /// full mode words are enumerated in shortlex order keeping those not
    /// dominated by an earlier word (they form a bad sequence); the verdict is
    /// `bad-chain` when that set still grows at the last length.
    pub fn wqo_probe(&self, mode: ProbeMode, max_len: usize) -> Result<WqoReport> {
        if max_len < 2 {
            return Err(Error::Unsupported("wqo_probe needs max_len ≥ 2".into()));
        }
        let mut order = CachedOrder::new(self);
        match mode {
            ProbeMode::PrefixChain => self.prefix_chain_probe(&mut order, max_len),
            ProbeMode::Full => self.full_probe(&mut order, max_len),
        }
    }

    fn prefix_chain_probe(&self, order: &mut CachedOrder, max_len: usize) -> Result<WqoReport> {
        let mut sizes = vec![0usize; max_len];
        let mut best: Vec<Word> = Vec::new();
        for top in self.function().alphabet().words_of_length(max_len - 1) {
            let chain: Vec<Word> = top.prefixes().collect();
            let n = chain.len();
            let mut less = vec![vec![false; n]; n];
            for j in 0..n {
                for i in 0..j {
                    less[i][j] = order.below(&chain[i], &chain[j])?;
                }
            }
            transitive_closure(&mut less);
            for (l, size) in sizes.iter_mut().enumerate() {
                let sub: Vec<Vec<bool>> = less[..=l].iter().map(|row| row[..=l].to_vec()).collect();
                let anti = max_antichain(&sub);
                *size = (*size).max(anti.len());
                if l == n - 1 && anti.len() > best.len() {
                    best = anti.iter().map(|&i| chain[i].clone()).collect();
                }
            }
        }
        let longest = best.len();
        Ok(WqoReport {
            mode: ProbeMode::PrefixChain,
            max_len,
            verdict: if longest == max_len { BAD_CHAIN } else { NO_BAD_SEQUENCE },
            witness: best.iter().map(Word::as_string).collect(),
            longest_bad_chain: longest,
            antichain_sizes: sizes,
            oracle_calls: order.calls,
        })
    }

    fn full_probe(&self, order: &mut CachedOrder, max_len: usize) -> Result<WqoReport> {
        let mut undominated: Vec<Word> = Vec::new();
        let mut sizes = Vec::with_capacity(max_len);
        for len in 0..max_len {
            for w in self.function().alphabet().words_of_length(len) {
                // transitivity: a dominated word is dominated by an undominated one
                let mut dominated = false;
                for s in &undominated {
                    if order.below(s, &w)? {
                        dominated = true;
                        break;
                    }
                }
                if !dominated {
                    undominated.push(w);
                }
            }
            sizes.push(undominated.len());
        }
        let growing = sizes[max_len - 1] > sizes[max_len - 2];
        Ok(WqoReport {
            mode: ProbeMode::Full,
            max_len,
            verdict: if growing { BAD_CHAIN } else { NO_BAD_SEQUENCE },
            longest_bad_chain: undominated.len(),
            witness: undominated.iter().map(Word::as_string).collect(),
            antichain_sizes: sizes,
            oracle_calls: order.calls,
        })
    }

    /// Least `N₀` from which `u·wⁿ ⊴ u·wⁿ⁺¹` holds for every `n < n_max`.
    pub fn aperiodicity_probe(&self, u: &Word, w: &Word, n_max: usize) -> Result<AperiodicityReport> {
        if self.flavor() != Flavor::Nsf {
            return Err(Error::Unsupported(format!(
                "the aperiodicity probe uses the star-free order (nsf), not {}",
                self.flavor()
            )));
        }
        if w.is_empty() {
            return Err(Error::Unsupported("the aperiodicity probe needs a non-empty w".into()));
        }
        let checks = (0..n_max)
            .map(|n| self.res_below(&u.concat(&w.repeat(n)), &u.concat(&w.repeat(n + 1))))
            .collect::<Result<Vec<bool>>>()?;
        let n0 = match checks.iter().rposition(|&ok| !ok) {
            None => Some(0),
            Some(last_fail) if last_fail + 1 < n_max => Some(last_fail + 1),
            Some(_) => None,
        };
        Ok(AperiodicityReport {
            u: u.as_string(),
            w: w.as_string(),
            n_max,
            verdict: if n0.is_some() { "non-decreasing-from" } else { "no-threshold-up-to-bound" },
            n0,
            checks,
            semi_decision: true,
        })
    }
}
