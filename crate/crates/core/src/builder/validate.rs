//! Checks a transducer against the six conditions that characterise the
//! `k`-residual transducer of `f`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::Signed;
use serde_json::json;

use crate::error::{Error, Result};
use crate::resorder::{derivative, member_npoly, Flavor, Level, OrderCtx};
use crate::transducer::HTransducer;
use crate::zseries::{Alphabet, RationalPoly, Series, UnaryQP, Word};

/// Largest `n` tried on unary inputs.
const UNARY_SAMPLE: usize = 200;
/// Longest word tried on binary inputs.
const BINARY_SAMPLE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which of the six conditions failed (1..=6).
    pub condition: u8,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> BTreeSet<u8> {
        self.violations.iter().map(|v| v.condition).collect()
    }

    fn push(&mut self, condition: u8, message: String) {
        self.violations.push(Violation { condition, message });
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "ok": self.is_valid(),
            "violations": self.violations.iter()
                .map(|v| json!({"condition": v.condition, "message": v.message}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Words on which `T` and `f` are compared pointwise.
pub(crate) fn sample_words(alphabet: &Alphabet) -> Vec<Word> {
    if alphabet.is_unary() {
        let a = alphabet.letters()[0];
        return (0..=UNARY_SAMPLE).map(|n| Word::power(a, n)).collect();
    }
    let mut len = 0;
    let mut total = 1usize;
    while len < BINARY_SAMPLE {
        let next = total + alphabet.len().pow(len as u32 + 1);
        if next > 1 << 13 {
            break;
        }
        total = next;
        len += 1;
    }
    alphabet.words_up_to(len)
}

/// Validates `t` as the `k`-residual transducer of `f`. Errors only when the
/// order oracle is unavailable or a state name is not a word over the alphabet.
pub fn validate_residual_transducer(f: &Series, k: usize, t: &HTransducer) -> Result<ValidationReport> {
    f.alphabet().ensure_same(t.alphabet())?;
    let ctx = OrderCtx::new(f.clone(), k, Flavor::NPoly)?;
    let alphabet = t.alphabet().clone();
    let words: Vec<Word> = (0..t.num_states()).map(|q| t.state_word(q)).collect();
    for w in &words {
        alphabet.check(w).map_err(|_| {
            Error::InvalidTransducer(format!("state name '{}' is not a word over {alphabet}", w.as_string()))
        })?;
    }
    let is_state = |w: &Word| words.contains(w);
    let mut report = ValidationReport::default();

    // (1) T computes f.
    for (q, w) in words.iter().enumerate() {
        let expected = f.eval(w)?;
        if t.final_value(q) != &expected {
            report.push(1, format!("F({w}) = {} but f({w}) = {expected}", t.final_value(q)));
        }
    }
    let mut mismatches = 0;
    for w in sample_words(&alphabet) {
        let (got, want) = (t.eval(&w)?, f.eval(&w)?);
        if got != want {
            mismatches += 1;
            if mismatches <= 3 {
                report.push(1, format!("T({w}) = {got} but f({w}) = {want}"));
            }
        }
    }
    if mismatches == 0 {
        if let (Some(g), Some(h)) = (unary_function(t), f.to_unary()) {
            if !g.sub(&h).is_zero() {
                report.push(1, "T and f differ as quasi-polynomials".into());
            }
        }
    }

    // (2) prefix closure.
    for w in &words {
        for p in w.prefixes().take(w.len()) {
            if !is_state(&p) {
                report.push(2, format!("prefix {p} of state {w} is not a state"));
            }
        }
    }

    // (3) initial state.
    let init = &words[t.initial()];
    if !init.is_empty() {
        report.push(3, format!("initial state is {init}, not ε"));
    }

    // (4) reachability.
    for q in t.unreachable_states() {
        report.push(4, format!("state {} is not reachable", words[q]));
    }

    // (5) δ picks the longest state below ua; (6) λ is the matching derivative.
    for (q, u) in words.iter().enumerate() {
        for &a in alphabet.letters() {
            let ua = u.append(a);
            let target = &words[t.delta(q, a)?];
            let mut best = None;
            for v in ua.prefixes().rev() {
                if is_state(&v) && ctx.res_below(&v, &ua)? {
                    best = Some(v);
                    break;
                }
            }
            match best {
                Some(v) if &v == target => {}
                Some(v) => report.push(
                    5,
                    format!("δ({u}, {a}) = {target} is not maximal: state {v} satisfies {v} ⊴ {ua} and {target} ≺ {v}"),
                ),
                None => report.push(5, format!("δ({u}, {a}) = {target}, but no state v ⪯ {ua} satisfies v ⊴ {ua}")),
            }

            let label = t.lambda(q, a)?;
            if target.is_prefix_of(&ua) {
                let want = derivative(f, &ua, target)?;
                if !labels_equal(label, &want, &alphabet)? {
                    report.push(6, format!("λ({u}, {a}) differs from f↾{ua} − f↾{target}"));
                }
            }
            match member_npoly(label, Level::below(k)) {
                Ok(true) => {}
                Ok(false) => report.push(6, format!("λ({u}, {a}) is not a non-negative polynomial of degree < {k}")),
                Err(Error::OracleUnavailable(_)) | Err(Error::Unsupported(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

/// Exact equality when the representations allow it, pointwise on the sample otherwise.
fn labels_equal(a: &Series, b: &Series, alphabet: &Alphabet) -> Result<bool> {
    match a.equivalent(b) {
        Err(Error::Unsupported(_)) => {
            for w in sample_words(alphabet) {
                if a.eval(&w)? != b.eval(&w)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        other => other,
    }
}

/// The function computed by a machine over a one-letter alphabet whose labels
/// are all quasi-polynomials, recovered exactly by interpolation.
fn unary_function(t: &HTransducer) -> Option<UnaryQP> {
    if !t.alphabet().is_unary() {
        return None;
    }
    let a = t.alphabet().letters()[0];
    let labels: Vec<UnaryQP> = (0..t.num_states())
        .map(|q| t.lambda(q, a).ok()?.to_unary())
        .collect::<Option<_>>()?;

    // The run from q₀ is a lasso: `stem` states, then a cycle of length `cycle`.
    let mut seen = vec![None; t.num_states()];
    let mut q = t.initial();
    let mut i = 0;
    while seen[q].is_none() {
        seen[q] = Some(i);
        q = t.delta(q, a).ok()?;
        i += 1;
    }
    let stem = seen[q]?;
    let cycle = i - stem;

    let period = labels.iter().fold(cycle, |p, l| p.lcm(&l.period()));
    let threshold = stem + cycle + labels.iter().map(UnaryQP::threshold).max().unwrap_or(0) + 1;
    let degree = labels.iter().map(UnaryQP::degree).max().unwrap_or(-1).max(0) as usize + 1;

    let count = threshold + period * (degree + 1);
    let values: Vec<BigInt> = (0..count).map(|n| t.eval(&Word::power(a, n)).ok()).collect::<Option<_>>()?;
    let tail = (0..period)
        .map(|r| {
            let start = threshold + (r + period - threshold % period) % period;
            let points: Vec<(BigRational, BigRational)> = (0..=degree)
                .map(|j| {
                    let n = start + j * period;
                    (BigRational::from_integer(n.into()), BigRational::from_integer(values[n].clone()))
                })
                .collect();
            RationalPoly::interpolate(&points)
        })
        .collect();
    UnaryQP::new(values[..threshold].to_vec(), tail).ok().map(|g| g.normalize())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub letter: char,
    /// The word `w` at which `f(a·w) − f(w)` is negative.
    pub word: Word,
    pub value: BigInt,
}

/// A point where `f↾a − f` goes negative. Such a point rules out a one-state
/// machine: its only label would be `f↾a − f`, which must be non-negative.
pub fn minimality_witness(f: &Series) -> Result<Option<Witness>> {
    let alphabet = f.alphabet().clone();
    if let Some(g) = f.to_unary() {
        let a = alphabet.letters()[0];
        let d = g.shift(1).sub(&g);
        return Ok(d.first_negative().map(|n| Witness {
            letter: a,
            word: Word::power(a, n as usize),
            value: d.eval(n),
        }));
    }
    for w in sample_words(&alphabet) {
        for &a in alphabet.letters() {
            let value = f.eval(&Word::new(vec![a]).concat(&w))? - f.eval(&w)?;
            if value.is_negative() {
                return Ok(Some(Witness { letter: a, word: w, value }));
            }
        }
    }
    Ok(None)
}

/// The witness for `n ↦ |n − 1|`: no one-state machine computes it.
pub fn minimality_witness_badexok() -> Witness {
    let f = Series::unary(
        UnaryQP::new(vec![1.into()], vec![RationalPoly::from_ints(&[-1, 1])]).expect("valid quasi-polynomial"),
    );
    minimality_witness(&f).expect("unary input").expect("f(a) < f(ε)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_residual_transducer, BuildConfig};
    use crate::resorder::tests::{badexko, badexok};
    use crate::transducer::tests::{badexko_machine, left_machine, right_machine, konst};

    #[test]
    fn left_machine_passes() {
        let r = validate_residual_transducer(&badexok(), 1, &left_machine()).unwrap();
        assert!(r.is_valid(), "{:?}", r.violations);
    }

    #[test]
    fn right_machine_fails_condition_five() {
        let r = validate_residual_transducer(&badexok(), 1, &right_machine()).unwrap();
        assert!(!r.is_valid());
        let five: Vec<_> = r.violations.iter().filter(|v| v.condition == 5).collect();
        assert_eq!(five.len(), 1);
        assert!(five[0].message.contains("state a "), "{}", five[0].message);
        // It still computes f.
        assert!(!r.conditions().contains(&1));
    }

    #[test]
    fn badexko_machine_passes() {
        let r = validate_residual_transducer(&badexko(), 1, &badexko_machine()).unwrap();
        assert!(r.is_valid(), "{:?}", r.violations);
    }

    #[test]
    fn wrong_final_value() {
        let mut spec = left_machine().to_json();
        spec["final"][""] = json!(2);
        let t = HTransducer::from_json(&spec.to_string()).unwrap();
        let r = validate_residual_transducer(&badexok(), 1, &t).unwrap();
        assert!(r.conditions().contains(&1));
    }

    #[test]
    fn wrong_label() {
        let mut spec = left_machine().to_json();
        spec["lambda"]["a"]["a"] = crate::zseries::spec::series_to_json(&konst(2));
        let t = HTransducer::from_json(&spec.to_string()).unwrap();
        let r = validate_residual_transducer(&badexok(), 1, &t).unwrap();
        assert!(r.conditions().contains(&6));
        assert!(r.conditions().contains(&1));
    }

    #[test]
    fn exact_unary_function() {
        let g = unary_function(&badexko_machine()).unwrap();
        assert!(g.sub(&badexko().to_unary().unwrap()).is_zero());
        let g = unary_function(&right_machine()).unwrap();
        assert!(g.sub(&badexok().to_unary().unwrap()).is_zero());
    }

    #[test]
    fn built_machines_validate() {
        for f in [badexok(), badexko()] {
            let t = build_residual_transducer(&f, &BuildConfig::new(1)).unwrap().transducer;
            assert!(validate_residual_transducer(&f, 1, &t).unwrap().is_valid());
        }
    }

    #[test]
    fn witnesses() {
        let w = minimality_witness_badexok();
        assert_eq!(w.word, Word::empty());
        assert_eq!(w.value, BigInt::from(-1));
        let id = Series::unary(UnaryQP::polynomial(RationalPoly::from_ints(&[0, 1])).unwrap());
        assert_eq!(minimality_witness(&id).unwrap(), None);
        assert_eq!(minimality_witness(&konst(7)).unwrap(), None);
    }
}
