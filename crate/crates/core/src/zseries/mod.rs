//! Exact representations of functions `Σ* → ℤ`.

mod formula;
mod linrep;
mod poly;
pub mod spec;
mod unary;
mod word;

pub use formula::{CountingSeries, CountingTerm, Formula};
pub use linrep::{LinRep, Matrix};
pub use poly::{format_rational, parse_rational, RationalPoly};
pub use unary::UnaryQP;
pub use word::{Alphabet, Word};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A function `Σ* → ℤ` in one of the supported representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Series {
    /// A quasi-polynomial on a one-letter alphabet: `aⁿ ↦ g(n)`.
    Unary { alphabet: Alphabet, qp: UnaryQP },
    Linear(LinRep),
    Counting(CountingSeries),
    Zero(Alphabet),
}

impl Series {
    pub fn unary(qp: UnaryQP) -> Series {
        Series::Unary { alphabet: Alphabet::unary(), qp }
    }

    pub fn unary_over(alphabet: Alphabet, qp: UnaryQP) -> Result<Series> {
        if !alphabet.is_unary() {
            return Err(Error::InvalidSeries(format!(
                "quasi-polynomial series need a one-letter alphabet, got {alphabet}"
            )));
        }
        Ok(Series::Unary { alphabet, qp })
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Series::Unary { alphabet, .. } | Series::Zero(alphabet) => alphabet,
            Series::Linear(l) => l.alphabet(),
            Series::Counting(c) => c.alphabet(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Series::Unary { .. } => "unary-qp",
            Series::Linear(_) => "linrep",
            Series::Counting(_) => "counting",
            Series::Zero(_) => "zero",
        }
    }

    pub fn as_unary(&self) -> Option<&UnaryQP> {
        match self {
            Series::Unary { qp, .. } => Some(qp),
            _ => None,
        }
    }

    /// The series as a quasi-polynomial, treating `Zero` over a unary alphabet as one.
    pub fn to_unary(&self) -> Option<UnaryQP> {
        match self {
            Series::Unary { qp, .. } => Some(qp.clone()),
            Series::Zero(a) if a.is_unary() => Some(UnaryQP::zero()),
            _ => None,
        }
    }

    pub fn eval(&self, w: &Word) -> Result<BigInt> {
        self.alphabet().check(w)?;
        match self {
            Series::Unary { qp, .. } => Ok(qp.eval(w.len() as u64)),
            Series::Linear(l) => {
                let v = l.eval(w)?;
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::NonInteger {
                        value: format_rational(&v),
                        word: w.to_string(),
                    })
                }
            }
            Series::Counting(c) => c.eval(w),
            Series::Zero(_) => Ok(BigInt::zero()),
        }
    }

    pub fn eval_str(&self, w: &str) -> Result<BigInt> {
        self.eval(&Word::from(w))
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.alphabet().ensure_same(other.alphabet())?;
        match (self, other) {
            (Series::Zero(_), s) | (s, Series::Zero(_)) => Ok(s.clone()),
            (Series::Unary { alphabet, qp: a }, Series::Unary { qp: b, .. }) => Ok(Series::Unary {
                alphabet: alphabet.clone(),
                qp: a.add(b),
            }),
            (Series::Linear(a), Series::Linear(b)) => Ok(Series::Linear(a.add(b)?)),
            (a, b) => Err(Error::Unsupported(format!(
                "cannot add {} and {} series; convert explicitly first",
                a.kind(),
                b.kind()
            ))),
        }
    }

    pub fn negate(&self) -> Series {
        self.scale(&-BigInt::one())
    }

    pub fn subtract(&self, other: &Series) -> Result<Series> {
        self.add(&other.negate())
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        match self {
            Series::Unary { alphabet, qp } => Series::Unary {
                alphabet: alphabet.clone(),
                qp: qp.scale(c),
            },
            Series::Linear(l) => Series::Linear(l.scale(c)),
            Series::Counting(s) => Series::Counting(s.scale(c)),
            Series::Zero(a) => Series::Zero(a.clone()),
        }
    }

    /// The residual `w ↦ f(u·w)`.
    pub fn residual(&self, u: &Word) -> Result<Series> {
        self.alphabet().check(u)?;
        Ok(match self {
            Series::Unary { alphabet, qp } => Series::Unary {
                alphabet: alphabet.clone(),
                qp: qp.shift(u.len() as u64),
            },
            Series::Linear(l) => Series::Linear(l.residual(u)?),
            Series::Counting(c) => Series::Counting(c.residual(u)?),
            Series::Zero(a) => Series::Zero(a.clone()),
        })
    }

    /// Exact zeroness; defined for quasi-polynomial and linear series.
    pub fn is_zero(&self) -> Result<bool> {
        match self {
            Series::Unary { qp, .. } => Ok(qp.is_zero()),
            Series::Linear(l) => Ok(l.is_zero()),
            Series::Zero(_) => Ok(true),
            Series::Counting(_) => Err(Error::Unsupported(
                "zeroness of counting series is not decidable here; evaluate instead".into(),
            )),
        }
    }

    /// Exact semantic equality, `is_zero(self − other)`.
    pub fn equivalent(&self, other: &Series) -> Result<bool> {
        self.subtract(other)?.is_zero()
    }

    /// Converts a quasi-polynomial series to its linear representation.
    pub fn to_linear(&self) -> Result<Series> {
        match self {
            Series::Unary { alphabet, qp } => Ok(Series::Linear(unary_to_linrep(qp, alphabet.letters()[0]))),
            Series::Linear(_) => Ok(self.clone()),
            Series::Zero(a) if a.is_unary() => Ok(Series::Linear(unary_to_linrep(&UnaryQP::zero(), a.letters()[0]))),
            other => Err(Error::Unsupported(format!("no linear form for {} series", other.kind()))),
        }
    }
}

pub fn unary_to_linrep(g: &UnaryQP, letter: char) -> LinRep {
    LinRep::from_unary(g, letter)
}
