//! Sparse Laurent polynomials over a generic coefficient ring.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Minimal commutative ring interface for Laurent coefficients.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
}

/// Finite sum of `c_k y^k` with `k` in the integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C: Ring> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> Default for Laurent<C> {
    fn default() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
}

impl<C: Ring> Laurent<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: C) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn add_term(&mut self, k: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&k) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn coeff(&self, k: i64) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut s = Self::zero();
        for (k, a) in &self.terms {
            s.add_term(*k, a.mul(c));
        }
        s
    }

    /// Multiply by `y^d`.
    pub fn shift(&self, d: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(k, c)| (k + d, c.clone())).collect() }
    }

    /// `d/dy`.
    pub fn derivative(&self) -> Self {
        let mut s = Self::zero();
        for (k, a) in &self.terms {
            s.add_term(k - 1, a.mul(&C::from_i64(*k)));
        }
        s
    }

    /// Substitute `y -> -y`.
    pub fn reflect(&self) -> Self {
        let mut s = Self::zero();
        for (k, a) in &self.terms {
            s.add_term(*k, if k % 2 == 0 { a.clone() } else { a.neg() });
        }
        s
    }
}

impl<C: Ring> Add for &Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut s = self.clone();
        for (k, c) in &rhs.terms {
            s.add_term(*k, c.clone());
        }
        s
    }
}

impl<C: Ring> Sub for &Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut s = self.clone();
        for (k, c) in &rhs.terms {
            s.add_term(*k, c.neg());
        }
        s
    }
}

impl<C: Ring> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<C: Ring> Mul for &Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut s = Laurent::zero();
        for (k1, a) in &self.terms {
            for (k2, b) in &rhs.terms {
                s.add_term(k1 + k2, a.mul(b));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn product_and_derivative() {
        let a: Laurent<Rational> = &Laurent::monomial(-1, int(1)) + &Laurent::monomial(1, int(1));
        let sq = &a * &a;
        assert_eq!(sq.coeff(-2), int(1));
        assert_eq!(sq.coeff(0), int(2));
        assert_eq!(sq.coeff(2), int(1));
        let d = a.derivative();
        assert_eq!(d.coeff(-2), int(-1));
        assert_eq!(d.coeff(0), int(1));
        assert!((&a - &a).is_zero());
        assert_eq!(a.reflect(), -&a);
    }
}

/// Laurent series truncated above: all terms with exponent `> order` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C: Ring> {
    poly: Laurent<C>,
    order: i64,
}

impl<C: Ring> LaurentSeries<C> {
    pub fn new(poly: Laurent<C>, order: i64) -> Self {
        let mut terms = Laurent::zero();
        for (k, c) in poly.terms() {
            if k <= order {
                terms.add_term(k, c.clone());
            }
        }
        LaurentSeries { poly: terms, order }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn poly(&self) -> &Laurent<C> {
        &self.poly
    }

    /// Lowest exponent with a nonzero coefficient, if any.
    pub fn min_exponent(&self) -> Option<i64> {
        self.poly.min_exponent()
    }

    /// Coefficient of `z^k`; an error past the truncation order.
    pub fn coeff(&self, k: i64) -> crate::error::Result<C> {
        if k > self.order {
            return Err(crate::error::Error::OutOfRange(format!(
                "coefficient z^{k} requested from a Laurent series known through z^{}",
                self.order
            )));
        }
        Ok(self.poly.coeff(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.poly + &other.poly, self.order.min(other.order))
    }

    /// Product; the result is known through `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let va = self.poly.min_exponent().unwrap_or(self.order);
        let vb = other.poly.min_exponent().unwrap_or(other.order);
        let order = (self.order + vb).min(other.order + va);
        Self::new(&self.poly * &other.poly, order)
    }
}

#[cfg(test)]
mod series_tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn truncated_product_tracks_order() {
        let a = LaurentSeries::new(&Laurent::monomial(-1, int(1)) + &Laurent::monomial(0, int(1)), 3);
        let b = LaurentSeries::new(Laurent::monomial(0, int(2)), 2);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeff(-1).unwrap(), int(2));
        assert!(p.coeff(2).is_err());
    }
}
