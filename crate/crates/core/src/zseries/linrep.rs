use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::unary::UnaryQP;
use super::word::{Alphabet, Word};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<BigRational>>;

/// A rational linear representation `w ↦ init · M_{w₁} ⋯ M_{wₙ} · final`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinRep {
    alphabet: Alphabet,
    init: Vec<BigRational>,
    /// One matrix per letter, in alphabet order.
    trans: Vec<Matrix>,
    final_: Vec<BigRational>,
}

impl LinRep {
    pub fn new(alphabet: Alphabet, init: Vec<BigRational>, trans: Vec<Matrix>, final_: Vec<BigRational>) -> Result<Self> {
        let d = init.len();
        if d == 0 {
            return Err(Error::InvalidSeries("linear representation of dimension 0".into()));
        }
        if final_.len() != d {
            return Err(Error::InvalidSeries(format!("final vector has length {}, expected {d}", final_.len())));
        }
        if trans.len() != alphabet.len() {
            return Err(Error::InvalidSeries(format!(
                "{} transition matrices for {} letters",
                trans.len(),
                alphabet.len()
            )));
        }
        for (m, &letter) in trans.iter().zip(alphabet.letters()) {
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(Error::InvalidSeries(format!("matrix for '{letter}' is not {d}×{d}")));
            }
        }
        Ok(LinRep { alphabet, init, trans, final_ })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.init.len()
    }

    pub fn init(&self) -> &[BigRational] {
        &self.init
    }

    pub fn final_vector(&self) -> &[BigRational] {
        &self.final_
    }

    pub fn matrix(&self, letter: char) -> Option<&Matrix> {
        self.alphabet.index_of(letter).map(|i| &self.trans[i])
    }

    /// `init · M_w`.
    pub fn state_after(&self, w: &Word) -> Result<Vec<BigRational>> {
        self.alphabet.check(w)?;
        let mut v = self.init.clone();
        for &c in w.symbols() {
            v = row_times(&v, &self.trans[self.alphabet.index_of(c).unwrap()]);
        }
        Ok(v)
    }

    pub fn eval(&self, w: &Word) -> Result<BigRational> {
        Ok(dot(&self.state_after(w)?, &self.final_))
    }

    /// Whether every word of length `≤ max_len` evaluates to an integer.
    pub fn is_integer_valued_up_to(&self, max_len: usize) -> bool {
        self.alphabet
            .words_up_to(max_len)
            .iter()
            .all(|w| self.eval(w).map(|v| v.is_integer()).unwrap_or(false))
    }

    pub fn residual(&self, u: &Word) -> Result<LinRep> {
        Ok(LinRep {
            init: self.state_after(u)?,
            ..self.clone()
        })
    }

    /// Direct sum of the two representations.
    pub fn add(&self, other: &LinRep) -> Result<LinRep> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let (d1, d2) = (self.dim(), other.dim());
        let init = self.init.iter().chain(&other.init).cloned().collect();
        let final_ = self.final_.iter().chain(&other.final_).cloned().collect();
        let trans = self
            .trans
            .iter()
            .zip(&other.trans)
            .map(|(a, b)| {
                let mut m = vec![vec![BigRational::zero(); d1 + d2]; d1 + d2];
                for i in 0..d1 {
                    m[i][..d1].clone_from_slice(&a[i]);
                }
                for i in 0..d2 {
                    m[d1 + i][d1..].clone_from_slice(&b[i]);
                }
                m
            })
            .collect();
        Ok(LinRep { alphabet: self.alphabet.clone(), init, trans, final_ })
    }

    pub fn scale(&self, c: &BigInt) -> LinRep {
        let c = BigRational::from_integer(c.clone());
        LinRep {
            final_: self.final_.iter().map(|x| x * &c).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> LinRep {
        self.scale(&-BigInt::one())
    }

    /// Basis (in echelon form) of the forward-reachable space `span{init · M_w}`.
    pub fn reachable_basis(&self) -> Vec<Vec<BigRational>> {
        let mut basis = Echelon::default();
        let mut frontier = Vec::new();
        if let Some(v) = basis.insert(self.init.clone()) {
            frontier.push(v);
        }
        while let Some(v) = frontier.pop() {
            for m in &self.trans {
                if let Some(next) = basis.insert(row_times(&v, m)) {
                    frontier.push(next);
                }
            }
        }
        basis.rows
    }

    /// Exact zeroness: `f ≡ 0` iff the reachable space is orthogonal to `final`.
    pub fn is_zero(&self) -> bool {
        self.reachable_basis().iter().all(|v| dot(v, &self.final_).is_zero())
    }

    /// A representation of `n ↦ g(n)` on the unary alphabet `{letter}`.
    ///
    /// `g` satisfies the linear recurrence with characteristic polynomial
    /// `X^{N₀}·(X^m − 1)^{D+1}`; the representation is its companion matrix acting
    /// on windows of `L = N₀ + m(D+1)` consecutive values.
    pub fn from_unary(g: &UnaryQP, letter: char) -> LinRep {
        let alphabet = Alphabet::new([letter]).expect("one letter");
        let g = g.normalize();
        let (n0, m) = (g.threshold(), g.period());
        let reps = (g.degree() + 1) as usize;
        let len = n0 + m * reps;
        if len == 0 {
            // the zero function
            let z = vec![BigRational::zero()];
            return LinRep { alphabet, init: z.clone(), trans: vec![vec![z.clone()]], final_: z };
        }
        // Coefficients of X^{N₀}(X^m − 1)^{D+1}, indexed by degree.
        let mut charpoly = vec![BigInt::zero(); len + 1];
        let mut binom = BigInt::one();
        for j in 0..=reps {
            let sign = if (reps - j).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
            charpoly[n0 + m * j] = &binom * sign;
            binom = binom * BigInt::from(reps - j) / BigInt::from(j + 1);
        }
        // window_{n+1} = window_n · C, with C the companion matrix of the recurrence
        // g(n+L) = Σ_{i<L} −charpoly[i] · g(n+i).
        let mut c = vec![vec![BigRational::zero(); len]; len];
        for i in 1..len {
            c[i][i - 1] = BigRational::one();
        }
        for (i, row) in c.iter_mut().enumerate() {
            row[len - 1] = BigRational::from_integer(-charpoly[i].clone());
        }
        let init = g.values(len as u64).into_iter().map(BigRational::from_integer).collect();
        let mut final_ = vec![BigRational::zero(); len];
        final_[0] = BigRational::one();
        LinRep { alphabet, init, trans: vec![c], final_ }
    }
}

#[derive(Default)]
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces `v` against the basis; adds and returns it when independent.
    fn insert(&mut self, mut v: Vec<BigRational>) -> Option<Vec<BigRational>> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = &v[p] / &row[p];
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &factor * r;
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        // keep earlier rows reduced at the new pivot
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let factor = &row[p] / &v[p];
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &factor * r;
                }
            }
        }
        self.rows.push(v.clone());
        self.pivots.push(p);
        Some(v)
    }
}

fn row_times(v: &[BigRational], m: &Matrix) -> Vec<BigRational> {
    let d = v.len();
    (0..d)
        .map(|j| {
            v.iter()
                .zip(m)
                .filter(|(x, _)| !x.is_zero())
                .fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zseries::poly::RationalPoly;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// w ↦ |w| on {a}: state (1, |w|)
    fn length_rep() -> LinRep {
        LinRep::new(
            Alphabet::unary(),
            vec![q(1), q(0)],
            vec![vec![vec![q(1), q(1)], vec![q(0), q(1)]]],
            vec![q(0), q(1)],
        )
        .unwrap()
    }

    #[test]
    fn residual_shifts_init() {
        let r = length_rep().residual(&Word::from("aa")).unwrap();
        assert_eq!(r.init(), &[q(1), q(2)]);
        for n in 0..10 {
            assert_eq!(r.eval(&Word::power('a', n)).unwrap(), q(n as i64 + 2));
        }
    }

    #[test]
    fn zeroness() {
        let l = length_rep();
        assert!(!l.is_zero());
        assert!(l.add(&l.neg()).unwrap().is_zero());
        let id = UnaryQP::polynomial(RationalPoly::from_ints(&[0, 1])).unwrap();
        let diff = l.add(&LinRep::from_unary(&id, 'a').neg()).unwrap();
        assert!(diff.is_zero());
        for n in 0..=6 {
            assert!(diff.eval(&Word::power('a', n)).unwrap().is_zero());
        }
    }

    #[test]
    fn dimension_checks() {
        assert!(LinRep::new(Alphabet::unary(), vec![q(1)], vec![vec![vec![q(1), q(0)]]], vec![q(1)]).is_err());
        assert!(LinRep::new(Alphabet::unary(), vec![q(1)], vec![], vec![q(1)]).is_err());
    }

    #[test]
    fn from_unary_agrees() {
        let badexko = UnaryQP::new(
            [1, 0, 1].iter().map(|&x| BigInt::from(x)).collect(),
            vec![RationalPoly::from_ints(&[-3, 1])],
        )
        .unwrap();
        let parity = UnaryQP::new(vec![], vec![RationalPoly::zero(), RationalPoly::from_ints(&[1])]).unwrap();
        for g in [badexko, parity, UnaryQP::constant(1), UnaryQP::zero()] {
            let rep = LinRep::from_unary(&g, 'a');
            for n in 0..=50u64 {
                assert_eq!(rep.eval(&Word::power('a', n as usize)).unwrap(), BigRational::from_integer(g.eval(n)));
            }
        }
        assert_eq!(LinRep::from_unary(&UnaryQP::constant(1), 'a').dim(), 1);
        let id = UnaryQP::polynomial(RationalPoly::from_ints(&[0, 1])).unwrap();
        let rep = LinRep::from_unary(&id, 'a');
        assert_eq!(rep.dim(), 2);
        assert_eq!(rep.eval(&Word::power('a', 5)).unwrap(), q(5));
    }
}
