//! The JSON function-spec format.
//!
//! ```json
//! {"kind":"unary-qp","prefix":[1,0,1],"period":1,"polys":[["-3","1"]]}
//! {"kind":"linrep","alphabet":["a"],"dim":1,"init":[1],"final":[1],"trans":{"a":[[1]]}}
//! {"kind":"counting","alphabet":["a","b"],"vars":["x","y"],"formula":"and(atom(a,x),atom(b,y))","coeff":1}
//! {"kind":"zero","alphabet":["a"]}
//! ```
//!
//! Rationals are written `"p/q"`; plain integers (numbers or strings) are accepted
//! everywhere. `unary-qp` may carry an `"alphabet"` with a single letter (default `a`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{
    format_rational, parse_rational, Alphabet, CountingSeries, CountingTerm, Formula, LinRep, RationalPoly,
    Series, UnaryQP, Word,
};
use crate::error::{Error, Result};

/// A JSON number or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s).ok_or_else(|| Error::Spec(format!("not a rational: '{s}'"))),
        }
    }

    pub fn integer(&self) -> Result<BigInt> {
        let r = self.rational()?;
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(Error::Spec(format!("expected an integer, got {}", format_rational(&r))))
        }
    }

    pub fn from_int(n: &BigInt) -> Num {
        match n.to_i64() {
            Some(v) => Num::Int(v),
            None => Num::Text(n.to_string()),
        }
    }

    /// Integers as numbers, other rationals as strings.
    pub fn from_rational(r: &BigRational) -> Num {
        if r.is_integer() {
            Num::from_int(&r.to_integer())
        } else {
            Num::Text(format_rational(r))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub formula: String,
    pub coeff: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    UnaryQp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
        prefix: Vec<Num>,
        period: usize,
        polys: Vec<Vec<Num>>,
    },
    Linrep {
        alphabet: Vec<String>,
        dim: usize,
        init: Vec<Num>,
        #[serde(rename = "final")]
        final_: Vec<Num>,
        trans: BTreeMap<String, Vec<Vec<Num>>>,
    },
    Counting {
        alphabet: Vec<String>,
        vars: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        formula: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeff: Option<Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terms: Option<Vec<TermSpec>>,
        /// Residual offset: the series is `w ↦ Σ cᵢ·#φᵢ(offset·w)`.
        #[serde(default, skip_serializing_if = "String::is_empty")]
        offset: String,
    },
    Zero {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
    },
}

fn parse_alphabet(letters: &[String]) -> Result<Alphabet> {
    let chars = letters
        .iter()
        .map(|s| {
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::Spec(format!("letters must be single characters, got '{s}'"))),
            }
        })
        .collect::<Result<Vec<char>>>()?;
    Alphabet::new(chars)
}

pub fn alphabet_to_json(a: &Alphabet) -> Vec<String> {
    a.letters().iter().map(|c| c.to_string()).collect()
}

fn rationals(v: &[Num]) -> Result<Vec<BigRational>> {
    v.iter().map(Num::rational).collect()
}

impl FunctionSpec {
    /// Builds the series; `context` supplies the alphabet when the spec omits it.
    pub fn to_series(&self, context: Option<&Alphabet>) -> Result<Series> {
        match self {
            FunctionSpec::UnaryQp { alphabet, prefix, period, polys } => {
                let alphabet = match (alphabet, context) {
                    (Some(a), _) => parse_alphabet(a)?,
                    (None, Some(a)) => a.clone(),
                    (None, None) => Alphabet::unary(),
                };
                if polys.len() != *period {
                    return Err(Error::Spec(format!("period {period} but {} polynomials", polys.len())));
                }
                let prefix = prefix.iter().map(Num::integer).collect::<Result<Vec<_>>>()?;
                let tail = polys
                    .iter()
                    .map(|p| rationals(p).map(RationalPoly::new))
                    .collect::<Result<Vec<_>>>()?;
                Series::unary_over(alphabet, UnaryQP::new(prefix, tail)?)
            }
            FunctionSpec::Linrep { alphabet, dim, init, final_, trans } => {
                let alphabet = parse_alphabet(alphabet)?;
                if init.len() != *dim {
                    return Err(Error::Spec(format!("dim {dim} but init has {} entries", init.len())));
                }
                let mut mats = Vec::new();
                for c in alphabet.letters() {
                    let m = trans
                        .get(&c.to_string())
                        .ok_or_else(|| Error::Spec(format!("no matrix for letter '{c}'")))?;
                    mats.push(m.iter().map(|row| rationals(row)).collect::<Result<Vec<_>>>()?);
                }
                if let Some(extra) = trans.keys().find(|k| k.chars().count() != 1 || !alphabet.contains(k.chars().next().unwrap())) {
                    return Err(Error::Spec(format!("matrix for unknown letter '{extra}'")));
                }
                Ok(Series::Linear(LinRep::new(alphabet, rationals(init)?, mats, rationals(final_)?)?))
            }
            FunctionSpec::Counting { alphabet, vars, formula, coeff, terms, offset } => {
                let alphabet = parse_alphabet(alphabet)?;
                let mut all = Vec::new();
                if let Some(f) = formula {
                    let coeff = coeff.as_ref().map(Num::integer).transpose()?.unwrap_or_else(|| 1.into());
                    all.push(CountingTerm { coeff, formula: Formula::parse(f)? });
                } else if coeff.is_some() {
                    return Err(Error::Spec("'coeff' given without 'formula'".into()));
                }
                for t in terms.iter().flatten() {
                    all.push(CountingTerm { coeff: t.coeff.integer()?, formula: Formula::parse(&t.formula)? });
                }
                if all.is_empty() {
                    return Err(Error::Spec("counting spec needs 'formula' or 'terms'".into()));
                }
                let s = CountingSeries::new(alphabet, vars.clone(), all)?;
                Ok(Series::Counting(s.residual(&Word::from(offset.as_str()))?))
            }
            FunctionSpec::Zero { alphabet } => match (alphabet, context) {
                (Some(a), _) => Ok(Series::Zero(parse_alphabet(a)?)),
                (None, Some(a)) => Ok(Series::Zero(a.clone())),
                (None, None) => Ok(Series::Zero(Alphabet::unary())),
            },
        }
    }

    /// The spec of a series. With `context` equal to the series' alphabet the
    /// alphabet is omitted for unary and zero series (as inside transducer labels).
    pub fn from_series(s: &Series, context: Option<&Alphabet>) -> FunctionSpec {
        let own = |a: &Alphabet| {
            if context == Some(a) || (context.is_none() && *a == Alphabet::unary()) {
                None
            } else {
                Some(alphabet_to_json(a))
            }
        };
        match s {
            Series::Unary { alphabet, qp } => FunctionSpec::UnaryQp {
                alphabet: own(alphabet),
                prefix: qp.prefix().iter().map(Num::from_int).collect(),
                period: qp.period(),
                polys: qp
                    .tail()
                    .iter()
                    .map(|p| p.coeffs().iter().map(Num::from_rational).collect())
                    .collect(),
            },
            Series::Linear(l) => FunctionSpec::Linrep {
                alphabet: alphabet_to_json(l.alphabet()),
                dim: l.dim(),
                init: l.init().iter().map(Num::from_rational).collect(),
                final_: l.final_vector().iter().map(Num::from_rational).collect(),
                trans: l
                    .alphabet()
                    .letters()
                    .iter()
                    .map(|&c| {
                        let m = l.matrix(c).unwrap();
                        (c.to_string(), m.iter().map(|row| row.iter().map(Num::from_rational).collect()).collect())
                    })
                    .collect(),
            },
            Series::Counting(c) => FunctionSpec::Counting {
                alphabet: alphabet_to_json(c.alphabet()),
                vars: c.vars().to_vec(),
                formula: None,
                coeff: None,
                terms: Some(
                    c.terms()
                        .iter()
                        .map(|t| TermSpec { formula: t.formula.to_string(), coeff: Num::from_int(&t.coeff) })
                        .collect(),
                ),
                offset: c.offset().as_string(),
            },
            Series::Zero(a) => FunctionSpec::Zero { alphabet: own(a) },
        }
    }
}

pub fn series_from_json(text: &str) -> Result<Series> {
    let spec: FunctionSpec = serde_json::from_str(text)?;
    spec.to_series(None)
}

pub fn series_to_json(s: &Series) -> serde_json::Value {
    serde_json::to_value(FunctionSpec::from_series(s, None)).expect("function specs serialize")
}
