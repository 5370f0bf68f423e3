use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::HTransducer;
use crate::error::{Error, Result};
use crate::zseries::spec::{alphabet_to_json, FunctionSpec, Num};
use crate::zseries::{Alphabet, Series};

/// JSON form of a transducer. Labels use the function-spec format; unary and
/// zero labels inherit the transducer's alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransducerSpec {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
    pub lambda: BTreeMap<String, BTreeMap<String, FunctionSpec>>,
    #[serde(rename = "final")]
    pub finals: BTreeMap<String, Num>,
}

fn letter(s: &str) -> Result<char> {
    let mut cs = s.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Spec(format!("letters must be single characters, got '{s}'"))),
    }
}

impl TransducerSpec {
    pub fn to_transducer(&self) -> Result<HTransducer> {
        let alphabet = Alphabet::new(self.alphabet.iter().map(|s| letter(s)).collect::<Result<Vec<_>>>()?)?;
        let mut delta = BTreeMap::new();
        for (q, row) in &self.delta {
            let mut m = BTreeMap::new();
            for (a, t) in row {
                m.insert(letter(a)?, t.clone());
            }
            delta.insert(q.clone(), m);
        }
        let mut lambda = BTreeMap::new();
        for (q, row) in &self.lambda {
            let mut m = BTreeMap::new();
            for (a, spec) in row {
                m.insert(letter(a)?, spec.to_series(Some(&alphabet))?);
            }
            lambda.insert(q.clone(), m);
        }
        let finals = self
            .finals
            .iter()
            .map(|(q, v)| Ok((q.clone(), v.integer()?)))
            .collect::<Result<BTreeMap<String, BigInt>>>()?;
        HTransducer::from_maps(alphabet, self.states.clone(), &self.initial, &delta, &lambda, &finals)
    }

    pub fn from_transducer(t: &HTransducer) -> TransducerSpec {
        let alphabet = t.alphabet();
        let mut delta = BTreeMap::new();
        let mut lambda = BTreeMap::new();
        let mut finals = BTreeMap::new();
        for q in 0..t.num_states() {
            let name = t.name(q).to_string();
            let mut d = BTreeMap::new();
            let mut l = BTreeMap::new();
            for &a in alphabet.letters() {
                d.insert(a.to_string(), t.name(t.delta(q, a).unwrap()).to_string());
                let label: &Series = t.lambda(q, a).unwrap();
                l.insert(a.to_string(), FunctionSpec::from_series(label, Some(alphabet)));
            }
            delta.insert(name.clone(), d);
            lambda.insert(name.clone(), l);
            finals.insert(name, Num::from_int(t.final_value(q)));
        }
        TransducerSpec {
            alphabet: alphabet_to_json(alphabet),
            states: t.names().to_vec(),
            initial: t.name(t.initial()).to_string(),
            delta,
            lambda,
            finals,
        }
    }
}

impl HTransducer {
    pub fn from_json(text: &str) -> Result<HTransducer> {
        serde_json::from_str::<TransducerSpec>(text)?.to_transducer()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TransducerSpec::from_transducer(self)).expect("transducer specs serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::{badexko_machine, right_machine};

    #[test]
    fn roundtrip() {
        for t in [right_machine(), badexko_machine()] {
            let back = HTransducer::from_json(&t.to_json().to_string()).unwrap();
            assert!(back.structurally_equal(&t).unwrap());
            assert_eq!(back.names(), t.names());
        }
    }

    #[test]
    fn parses_hand_written() {
        let text = r#"{
            "alphabet": ["a"],
            "states": ["", "a"],
            "initial": "",
            "delta": {"": {"a": "a"}, "a": {"a": "a"}},
            "lambda": {"": {"a": {"kind": "zero"}},
                       "a": {"a": {"kind": "unary-qp", "prefix": [], "period": 1, "polys": [["1"]]}}},
            "final": {"": 1, "a": 0}
        }"#;
        let t = HTransducer::from_json(text).unwrap();
        assert_eq!(t.eval(&crate::zseries::Word::from("aaa")).unwrap(), BigInt::from(2));
    }

    #[test]
    fn rejects_partial_delta() {
        let text = r#"{"alphabet":["a","b"],"states":["p"],"initial":"p",
            "delta":{"p":{"a":"p"}},"lambda":{"p":{"a":{"kind":"zero"},"b":{"kind":"zero"}}},"final":{"p":0}}"#;
        assert!(matches!(HTransducer::from_json(text), Err(Error::InvalidTransducer(_))));
        let text = r#"{"alphabet":["a"],"states":["p"],"initial":"q",
            "delta":{"p":{"a":"p"}},"lambda":{"p":{"a":{"kind":"zero"}}},"final":{"p":0}}"#;
        assert!(HTransducer::from_json(text).is_err());
    }
}
