//! First-order formulas over word positions, with modular position atoms, and
//! the brute-force counting of their satisfying valuations.
//!
//! Concrete syntax (positions are 0-based):
//!
//! ```text
//! φ ::= true | false
//!     | atom(a, x)          letter a at position x
//!     | lt(x, y) | eq(x, y)
//!     | mod(x, r, m)        x ≡ r (mod m)
//!     | not(φ) | and(φ, …) | or(φ, …) | implies(φ, φ)
//!     | exists(x, φ) | forall(x, φ)
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use super::word::{Alphabet, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Letter(char, String),
    Less(String, String),
    Equal(String, String),
    Mod { var: String, rem: u64, modulus: u64 },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn parse(src: &str) -> Result<Formula> {
        let mut p = Parser { src, pos: 0 };
        let f = p.formula()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Letter(_, x) | Formula::Mod { var: x, .. } => see(x, bound),
            Formula::Less(x, y) | Formula::Equal(x, y) => {
                see(x, bound);
                see(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Letter(c, _) = f {
                out.insert(*c);
            }
        });
        out
    }

    fn visit(&self, g: &mut impl FnMut(&Formula)) {
        g(self);
        match self {
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.visit(g),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit(g)),
            Formula::Implies(a, b) => {
                a.visit(g);
                b.visit(g);
            }
            _ => {}
        }
    }

    /// Truth of the formula on `word` under `env` (variable → position).
    pub fn holds(&self, word: &[char], env: &mut Vec<(String, usize)>) -> bool {
        let lookup = |env: &Vec<(String, usize)>, x: &str| -> usize {
            env.iter()
                .rev()
                .find(|(v, _)| v == x)
                .map(|(_, p)| *p)
                .unwrap_or_else(|| panic!("unbound variable {x}"))
        };
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Letter(c, x) => word[lookup(env, x)] == *c,
            Formula::Less(x, y) => lookup(env, x) < lookup(env, y),
            Formula::Equal(x, y) => lookup(env, x) == lookup(env, y),
            Formula::Mod { var, rem, modulus } => lookup(env, var) as u64 % modulus == rem % modulus,
            Formula::Not(f) => !f.holds(word, env),
            Formula::And(fs) => fs.iter().all(|f| f.holds(word, env)),
            Formula::Or(fs) => fs.iter().any(|f| f.holds(word, env)),
            Formula::Implies(a, b) => !a.holds(word, env) || b.holds(word, env),
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                let exists = matches!(self, Formula::Exists(..));
                for p in 0..word.len() {
                    env.push((x.clone(), p));
                    let v = f.holds(word, env);
                    env.pop();
                    if v == exists {
                        return exists;
                    }
                }
                !exists
            }
        }
    }

    /// Number of valuations of `vars` (each ranging over all positions of
    /// `word`) satisfying the formula: exhaustive over the `n^k` tuples.
    pub fn count(&self, vars: &[String], word: &Word) -> u64 {
        let n = word.len();
        let k = vars.len();
        let mut env: Vec<(String, usize)> = vars.iter().map(|v| (v.clone(), 0)).collect();
        if k > 0 && n == 0 {
            return 0;
        }
        let mut total = 0;
        loop {
            if self.holds(word.symbols(), &mut env) {
                total += 1;
            }
            // odometer increment
            let mut i = k;
            loop {
                if i == 0 {
                    return total;
                }
                i -= 1;
                env[i].1 += 1;
                if env[i].1 < n {
                    break;
                }
                env[i].1 = 0;
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, fs: &[Formula]| {
            write!(f, "{name}(")?;
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Letter(c, x) => write!(f, "atom({c},{x})"),
            Formula::Less(x, y) => write!(f, "lt({x},{y})"),
            Formula::Equal(x, y) => write!(f, "eq({x},{y})"),
            Formula::Mod { var, rem, modulus } => write!(f, "mod({var},{rem},{modulus})"),
            Formula::Not(g) => write!(f, "not({g})"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "implies({a},{b})"),
            Formula::Exists(x, g) => write!(f, "exists({x},{g})"),
            Formula::Forall(x, g) => write!(f, "forall({x},{g})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::FormulaParse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn peek_is(&mut self, c: char) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(c)
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected identifier"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn letter(&mut self) -> Result<char> {
        let start = self.pos;
        let id = self.ident()?;
        let mut cs = id.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => Ok(c),
            _ => {
                self.pos = start;
                Err(self.error("letters are single characters"))
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        let id = self.ident()?;
        id.parse().map_err(|_| self.error("expected a natural number"))
    }

    fn formula(&mut self) -> Result<Formula> {
        let head = self.ident()?;
        match head.as_str() {
            "true" => return Ok(Formula::True),
            "false" => return Ok(Formula::False),
            _ => {}
        }
        self.expect('(')?;
        let f = match head.as_str() {
            "atom" => {
                let c = self.letter()?;
                self.expect(',')?;
                Formula::Letter(c, self.ident()?)
            }
            "lt" | "eq" => {
                let x = self.ident()?;
                self.expect(',')?;
                let y = self.ident()?;
                if head == "lt" {
                    Formula::Less(x, y)
                } else {
                    Formula::Equal(x, y)
                }
            }
            "mod" => {
                let var = self.ident()?;
                self.expect(',')?;
                let rem = self.number()?;
                self.expect(',')?;
                let modulus = self.number()?;
                if modulus == 0 {
                    return Err(self.error("modulus must be positive"));
                }
                Formula::Mod { var, rem, modulus }
            }
            "not" => Formula::Not(Box::new(self.formula()?)),
            "and" | "or" => {
                let mut fs = vec![self.formula()?];
                while self.peek_is(',') {
                    self.expect(',')?;
                    fs.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }
            }
            "implies" => {
                let a = self.formula()?;
                self.expect(',')?;
                Formula::Implies(Box::new(a), Box::new(self.formula()?))
            }
            "exists" | "forall" => {
                let x = self.ident()?;
                self.expect(',')?;
                let body = Box::new(self.formula()?);
                if head == "exists" {
                    Formula::Exists(x, body)
                } else {
                    Formula::Forall(x, body)
                }
            }
            other => return Err(self.error(&format!("unknown connective '{other}'"))),
        };
        self.expect(')')?;
        Ok(f)
    }
}

/// A term `coeff · #φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingTerm {
    pub coeff: BigInt,
    pub formula: Formula,
}

/// `w ↦ Σ cᵢ · #φᵢ(prefix · w)`, all formulas sharing the free-variable tuple.
///
/// `prefix` is the residual offset: it is empty for freshly built series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSeries {
    alphabet: Alphabet,
    vars: Vec<String>,
    terms: Vec<CountingTerm>,
    prefix: Word,
}

impl CountingSeries {
    pub fn new(alphabet: Alphabet, vars: Vec<String>, terms: Vec<CountingTerm>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidSeries(format!("variable '{v}' declared twice")));
            }
        }
        for t in &terms {
            if let Some(x) = t.formula.free_vars().iter().find(|x| !vars.contains(x)) {
                return Err(Error::InvalidSeries(format!("free variable '{x}' is not declared")));
            }
            if let Some(c) = t.formula.letters().into_iter().find(|c| !alphabet.contains(*c)) {
                return Err(Error::UnknownLetter { letter: c, alphabet: alphabet.to_string() });
            }
        }
        Ok(CountingSeries { alphabet, vars, terms, prefix: Word::empty() })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &[CountingTerm] {
        &self.terms
    }

    pub fn offset(&self) -> &Word {
        &self.prefix
    }

    pub fn eval(&self, w: &Word) -> Result<BigInt> {
        self.alphabet.check(w)?;
        let word = self.prefix.concat(w);
        Ok(self
            .terms
            .iter()
            .map(|t| &t.coeff * BigInt::from(t.formula.count(&self.vars, &word)))
            .sum())
    }

    pub fn residual(&self, u: &Word) -> Result<CountingSeries> {
        self.alphabet.check(u)?;
        Ok(CountingSeries { prefix: self.prefix.concat(u), ..self.clone() })
    }

    pub fn scale(&self, c: &BigInt) -> CountingSeries {
        CountingSeries {
            terms: self
                .terms
                .iter()
                .map(|t| CountingTerm { coeff: &t.coeff * c, formula: t.formula.clone() })
                .collect(),
            ..self.clone()
        }
    }
}
