//! Noncommutative derivatives, the residual orders, and membership oracles.
//!
//! For a level `k` and a function `f`, `v ⊴ u` holds when the derivative
//! `f↾u − f↾v` lies in the non-negative class of level `k − 1`; `u ≡ v` when it
//! lies in the signed class. Level `−1` classes contain only the zero function.
//!
//! Membership at levels `≥ 0` is decided for unary quasi-polynomials only:
//! `ZPoly[j]` is "degree ≤ j", `NPoly[j]` adds non-negativity everywhere, and
//! `NSF[j]` additionally requires period 1.

mod probe;

pub use probe::{AperiodicityReport, ProbeMode, WqoReport};

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::zseries::{Series, Word};

/// A level `j ≥ −1` of the polynomial hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(i64);

impl Level {
    pub const ZERO_ONLY: Level = Level(-1);

    pub fn new(j: i64) -> Result<Level> {
        if j < -1 {
            return Err(Error::Unsupported(format!("level {j} is below −1")));
        }
        Ok(Level(j))
    }

    /// The level `k − 1` whose classes label a `k`-residual transducer.
    pub fn below(k: usize) -> Level {
        Level(k as i64 - 1)
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which class the derivative must belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    NPoly,
    Nsf,
    ZPoly,
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s {
            "npoly" => Ok(Flavor::NPoly),
            "nsf" => Ok(Flavor::Nsf),
            "zpoly" => Ok(Flavor::ZPoly),
            other => Err(Error::Unsupported(format!("unknown class '{other}' (expected npoly, nsf or zpoly)"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::NPoly => "npoly",
            Flavor::Nsf => "nsf",
            Flavor::ZPoly => "zpoly",
        })
    }
}

/// `Δf u v = f↾u − f↾v`.
pub fn derivative(f: &Series, u: &Word, v: &Word) -> Result<Series> {
    if matches!(f, Series::Counting(_)) {
        return Err(Error::Unsupported("derivatives of counting series are not supported".into()));
    }
    f.residual(u)?.subtract(&f.residual(v)?)
}

fn unavailable(g: &Series, j: Level) -> Error {
    Error::OracleUnavailable(format!(
        "membership of a {} series over {} at level {j} is only decided for unary quasi-polynomials",
        g.kind(),
        g.alphabet()
    ))
}

/// Membership in the signed class: degree at most `j`.
pub fn member_zpoly(g: &Series, j: Level) -> Result<bool> {
    if j == Level::ZERO_ONLY {
        return g.is_zero();
    }
    match g {
        Series::Zero(_) => Ok(true),
        Series::Unary { qp, .. } => Ok(qp.normalize().degree() <= j.0),
        _ => Err(unavailable(g, j)),
    }
}

/// Membership in the non-negative class: degree at most `j` and `g ≥ 0` everywhere.
pub fn member_npoly(g: &Series, j: Level) -> Result<bool> {
    if j == Level::ZERO_ONLY {
        return g.is_zero();
    }
    match g {
        Series::Zero(_) => Ok(true),
        Series::Unary { qp, .. } => {
            let qp = qp.normalize();
            Ok(qp.degree() <= j.0 && qp.is_eventually_nonneg())
        }
        _ => Err(unavailable(g, j)),
    }
}

/// Membership in the non-negative star-free class: the non-negative criterion
/// plus a period-1 tail that is zero, a non-negative constant, or has a positive
/// leading coefficient.
pub fn member_nsf(g: &Series, j: Level) -> Result<bool> {
    if j == Level::ZERO_ONLY {
        return g.is_zero();
    }
    match g {
        Series::Zero(_) => Ok(true),
        Series::Unary { qp, .. } => {
            if !member_npoly(g, j)? {
                return Ok(false);
            }
            let qp = qp.normalize();
            if qp.period() != 1 {
                return Ok(false);
            }
            let p = &qp.tail()[0];
            Ok(match p.leading() {
                None => true,
                Some(c) if p.degree() == 0 => !c.is_negative(),
                Some(c) => c.is_positive(),
            })
        }
        _ => Err(unavailable(g, j)),
    }
}

pub fn member(flavor: Flavor, g: &Series, j: Level) -> Result<bool> {
    match flavor {
        Flavor::NPoly => member_npoly(g, j),
        Flavor::Nsf => member_nsf(g, j),
        Flavor::ZPoly => member_zpoly(g, j),
    }
}

/// A function, a level and a class flavor: the data defining `⊴` and `≡`.
#[derive(Debug, Clone)]
pub struct OrderCtx {
    f: Series,
    k: usize,
    flavor: Flavor,
}

impl OrderCtx {
    /// Accepts (any alphabet, `k = 0`, npoly/zpoly) and (unary alphabet, any `k`,
    /// any flavor); at `k ≥ 1` the function must be a quasi-polynomial.
    pub fn new(f: Series, k: usize, flavor: Flavor) -> Result<OrderCtx> {
        if matches!(f, Series::Counting(_)) {
            return Err(Error::OracleUnavailable(
                "counting series have no exact derivative; use a unary or linear form".into(),
            ));
        }
        let unary = f.alphabet().is_unary();
        if !unary && (k > 0 || flavor == Flavor::Nsf) {
            return Err(Error::OracleUnavailable(format!(
                "over the alphabet {} only k = 0 with npoly or zpoly is decidable (asked k = {k}, {flavor})",
                f.alphabet()
            )));
        }
        if unary && k > 0 && f.to_unary().is_none() {
            return Err(Error::OracleUnavailable(format!(
                "k = {k} needs a quasi-polynomial description of f, got a {} series",
                f.kind()
            )));
        }
        Ok(OrderCtx { f, k, flavor })
    }

    pub fn function(&self) -> &Series {
        &self.f
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `v ⊴ u`: the derivative `f↾u − f↾v` is in the class of level `k − 1`.
    pub fn res_below(&self, v: &Word, u: &Word) -> Result<bool> {
        member(self.flavor, &derivative(&self.f, u, v)?, Level::below(self.k))
    }

    /// `u ≡ v`: the derivative is in the signed class of level `k − 1`.
    pub fn res_equiv(&self, u: &Word, v: &Word) -> Result<bool> {
        member_zpoly(&derivative(&self.f, u, v)?, Level::below(self.k))
    }
}
