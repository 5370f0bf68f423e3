use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::poly::RationalPoly;
use crate::error::{Error, Result};

/// An eventually quasi-polynomial function `ℕ → ℤ`.
///
/// Values `g(0..N₀)` are stored explicitly in `prefix`; for `n ≥ N₀` the value
/// is `tail[n mod m](n)` with `m = tail.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryQP {
    prefix: Vec<BigInt>,
    tail: Vec<RationalPoly>,
}

impl UnaryQP {
    /// Builds a quasi-polynomial, checking that every residue polynomial is
    /// integer-valued on its class beyond the threshold.
    pub fn new(prefix: Vec<BigInt>, tail: Vec<RationalPoly>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::InvalidSeries("period must be at least 1".into()));
        }
        let g = UnaryQP { prefix, tail };
        let m = g.period() as u64;
        for (r, p) in g.tail.iter().enumerate() {
            // deg+1 integer values on an arithmetic progression force all the others.
            let first = g.first_class_point(r as u64);
            for t in 0..=(p.degree().max(0) as u64) {
                let n = first + t * m;
                if !p.eval_at(n).is_integer() {
                    return Err(Error::InvalidSeries(format!(
                        "residue polynomial {p} (class {r} mod {m}) is not integer at n = {n}"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn zero() -> Self {
        UnaryQP {
            prefix: Vec::new(),
            tail: vec![RationalPoly::zero()],
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        UnaryQP {
            prefix: Vec::new(),
            tail: vec![RationalPoly::constant(BigRational::from_integer(c.into()))],
        }
    }

    /// `n ↦ p(n)` for all `n`; fails if `p` is not integer-valued on ℕ.
    pub fn polynomial(p: RationalPoly) -> Result<Self> {
        Self::new(Vec::new(), vec![p])
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.tail.len()
    }

    pub fn tail(&self) -> &[RationalPoly] {
        &self.tail
    }

    /// Smallest `n ≥ N₀` with `n ≡ r (mod m)`.
    fn first_class_point(&self, r: u64) -> u64 {
        let n0 = self.threshold() as u64;
        let m = self.period() as u64;
        n0 + (r + m - n0 % m) % m
    }

    pub fn eval(&self, n: u64) -> BigInt {
        match self.prefix.get(n as usize) {
            Some(v) => v.clone(),
            None => self.tail[(n % self.period() as u64) as usize].eval_at(n).to_integer(),
        }
    }

    /// The values `g(0), …, g(count-1)`.
    pub fn values(&self, count: u64) -> Vec<BigInt> {
        (0..count).map(|n| self.eval(n)).collect()
    }

    /// Canonical form: least period, then least threshold.
    pub fn normalize(&self) -> UnaryQP {
        let m = self.period();
        let period = (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .find(|&d| (0..m).all(|r| self.tail[r] == self.tail[r % d]))
            .unwrap_or(m);
        let tail: Vec<RationalPoly> = self.tail[..period].to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            let n = prefix.len() - 1;
            let p = &tail[n % period];
            if p.eval_at(n as u64) == BigRational::from_integer(last.clone()) {
                prefix.pop();
            } else {
                break;
            }
        }
        UnaryQP { prefix, tail }
    }

    /// Highest degree among the residue polynomials, `-1` when eventually zero.
    pub fn degree(&self) -> i64 {
        self.tail.iter().map(RationalPoly::degree).max().unwrap_or(-1)
    }

    pub fn is_zero(&self) -> bool {
        let g = self.normalize();
        g.prefix.is_empty() && g.tail.iter().all(RationalPoly::is_zero)
    }

    /// Re-expresses `self` with threshold `n0 ≥ N₀` and period a multiple `m` of the
    /// current period.
    fn aligned(&self, n0: usize, m: usize) -> (Vec<BigInt>, Vec<RationalPoly>) {
        debug_assert!(n0 >= self.threshold() && m.is_multiple_of(self.period()));
        let prefix = self.values(n0 as u64);
        let tail = (0..m).map(|r| self.tail[r % self.period()].clone()).collect();
        (prefix, tail)
    }

    fn combine(&self, other: &Self, op: impl Fn(&RationalPoly, &RationalPoly) -> RationalPoly, vop: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let n0 = self.threshold().max(other.threshold());
        let m = self.period().lcm(&other.period());
        let (pa, ta) = self.aligned(n0, m);
        let (pb, tb) = other.aligned(n0, m);
        UnaryQP {
            prefix: pa.iter().zip(&pb).map(|(x, y)| vop(x, y)).collect(),
            tail: ta.iter().zip(&tb).map(|(x, y)| op(x, y)).collect(),
        }
        .normalize()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, RationalPoly::add, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UnaryQP {
            prefix: self.prefix.iter().map(|v| -v).collect(),
            tail: self.tail.iter().map(RationalPoly::neg).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let cq = BigRational::from_integer(c.clone());
        UnaryQP {
            prefix: self.prefix.iter().map(|v| v * c).collect(),
            tail: self.tail.iter().map(|p| p.scale(&cq)).collect(),
        }
        .normalize()
    }

    /// `n ↦ g(n + s)`.
    pub fn shift(&self, s: u64) -> Self {
        let m = self.period() as u64;
        let n0 = (self.threshold() as u64).saturating_sub(s);
        let prefix = (0..n0).map(|n| self.eval(n + s)).collect();
        let sq = BigRational::from_integer(s.into());
        let tail = (0..m)
            .map(|r| self.tail[((r + s) % m) as usize].shift(&sq))
            .collect();
        UnaryQP { prefix, tail }.normalize()
    }

    /// Least `n` with `g(n) < 0`, if any. Exact: beyond the Cauchy root bound of a
    /// residue polynomial its sign equals the sign of its leading coefficient.
    pub fn first_negative(&self) -> Option<u64> {
        let in_prefix = self.prefix.iter().position(|v| v.is_negative());
        if let Some(n) = in_prefix {
            return Some(n as u64);
        }
        let m = self.period() as u64;
        let mut best: Option<u64> = None;
        for (r, p) in self.tail.iter().enumerate() {
            let Some(lead) = p.leading() else { continue };
            let bound = p
                .cauchy_root_bound()
                .map(|b| b.ceil().to_integer().to_u64().unwrap_or(u64::MAX))
                .unwrap_or(0);
            let mut n = self.first_class_point(r as u64);
            // With a negative leading coefficient the first class point past the
            // bound is negative, so the scan always terminates.
            let limit = if lead.is_negative() { bound.saturating_add(m) } else { bound };
            while n <= limit.max(self.first_class_point(r as u64)) {
                if p.eval_at(n).is_negative() {
                    best = Some(best.map_or(n, |b| b.min(n)));
                    break;
                }
                n += m;
            }
        }
        best
    }

    /// True iff `g(n) ≥ 0` for every `n ≥ 0`, not only eventually.
    pub fn is_eventually_nonneg(&self) -> bool {
        self.first_negative().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn badexko() -> UnaryQP {
        UnaryQP::new(ints(&[1, 0, 1]), vec![RationalPoly::from_ints(&[-3, 1])]).unwrap()
    }

    fn parity() -> UnaryQP {
        UnaryQP::new(vec![], vec![RationalPoly::from_ints(&[0]), RationalPoly::from_ints(&[1])]).unwrap()
    }

    #[test]
    fn rejects_non_integer_tail() {
        let half = RationalPoly::new(vec![BigRational::zero(), BigRational::new(1.into(), 2.into())]);
        assert!(UnaryQP::new(vec![], vec![half.clone()]).is_err());
        // n/2 restricted to even n is fine
        assert!(UnaryQP::new(vec![], vec![half, RationalPoly::zero()]).is_ok());
    }

    #[test]
    fn normalize_spec_example() {
        let p = RationalPoly::from_ints(&[-1, 1]);
        let g = UnaryQP::new(ints(&[1, 0]), vec![p.clone(), p.clone()]).unwrap();
        let n = g.normalize();
        assert_eq!(n.threshold(), 1);
        assert_eq!(n.period(), 1);
        assert_eq!(n.prefix(), &ints(&[1])[..]);
        assert_eq!(n.tail(), &[p][..]);
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn add_spec_example() {
        let sum = badexko().add(&UnaryQP::constant(3));
        assert_eq!(sum.prefix(), &ints(&[4, 3, 4])[..]);
        assert_eq!(sum.tail(), &[RationalPoly::from_ints(&[0, 1])][..]);
    }

    #[test]
    fn scale_parity() {
        let g = parity().scale(&BigInt::from(2));
        assert_eq!(g.values(6), ints(&[0, 2, 0, 2, 0, 2]));
    }

    #[test]
    fn degrees() {
        assert_eq!(badexko().degree(), 1);
        assert_eq!(UnaryQP::new(ints(&[5, 1]), vec![RationalPoly::zero()]).unwrap().normalize().degree(), -1);
        let half = BigRational::new(1.into(), 2.into());
        let c2 = RationalPoly::new(vec![BigRational::zero(), -half.clone(), half]);
        assert_eq!(UnaryQP::polynomial(c2).unwrap().degree(), 2);
    }

    #[test]
    fn nonnegativity() {
        assert!(badexko().is_eventually_nonneg());
        assert!(UnaryQP::zero().is_eventually_nonneg());
        // BadExKo shifted by one minus itself: f(a^{n+1}) - f(a^n), value -1 at n = 0
        let d = badexko().shift(1).sub(&badexko());
        assert_eq!(d.first_negative(), Some(0));
        // X^2 - 10X + 16 = (X-2)(X-8) is negative on 3..=7
        let p = UnaryQP::polynomial(RationalPoly::from_ints(&[16, -10, 1])).unwrap();
        assert_eq!(p.first_negative(), Some(3));
        // -X + 100 eventually negative
        let q = UnaryQP::polynomial(RationalPoly::from_ints(&[100, -1])).unwrap();
        assert_eq!(q.first_negative(), Some(101));
    }

    #[test]
    fn shift_is_pointwise() {
        let g = badexko();
        for s in 0..6 {
            let h = g.shift(s);
            for n in 0..20 {
                assert_eq!(h.eval(n), g.eval(n + s));
            }
        }
        let p = parity().shift(1);
        assert_eq!(p.values(4), ints(&[1, 0, 1, 0]));
    }

    #[test]
    fn zero_detection() {
        assert!(badexko().sub(&badexko()).is_zero());
        assert!(!parity().is_zero());
        assert_eq!(badexko().sub(&badexko()), UnaryQP::zero());
    }
}
