//! Truncated series in two variables, with exact division by linear forms.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Series in `x, y` known through total degree `order`. Stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate {
    order: usize,
    terms: BTreeMap<(usize, usize), Rational>,
}

impl Bivariate {
    pub fn zero(order: usize) -> Self {
        Bivariate { order, terms: BTreeMap::new() }
    }

    pub fn monomial(i: usize, j: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(i, j, c);
        s
    }

    /// `p(x) q(y)` truncated at total degree `order`.
    pub fn outer(p: &crate::series::PowerSeries, q: &crate::series::PowerSeries, order: usize) -> Self {
        let mut s = Self::zero(order);
        for i in 0..=p.order().min(order) {
            if p.at(i).is_zero() {
                continue;
            }
            for j in 0..=q.order().min(order - i) {
                s.add_term(i, j, p.at(i) * q.at(j));
            }
        }
        s
    }

    /// Converts a series over a two-letter alphabet of unit weights.
    pub fn from_multi(m: &crate::series::MultiSeries) -> Result<Self> {
        let a = m.alphabet();
        if a.len() != 2 || a.weight(0) != 1 || a.weight(1) != 1 {
            return Err(Error::Domain("expected two variables of weight 1".into()));
        }
        let mut s = Self::zero(m.order().max(0) as usize);
        for (e, c) in m.terms() {
            s.add_term(e[0] as usize, e[1] as usize, c.clone());
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        if i + j > self.order || c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.order);
        for (&(i, j), a) in &self.terms {
            s.add_term(i, j, a * c);
        }
        s
    }

    /// Swap the two variables.
    pub fn swap(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (&(i, j), a) in &self.terms {
            s.add_term(j, i, a.clone());
        }
        s
    }

    /// Divide by `a x + b y` exactly (`a, b` nonzero).
    ///
    /// The quotient is known through degree `order - 1`. A nonzero remainder is
    /// reported as [`Error::Divisibility`].
    pub fn divide_linear(&self, a: &Rational, b: &Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Domain("linear divisor needs both coefficients nonzero".into()));
        }
        if !self.coeff(0, 0).is_zero() {
            return Err(Error::Divisibility("nonzero constant term".into()));
        }
        let out_order = self.order.saturating_sub(1);
        let mut q = Self::zero(out_order);
        for d in 1..=self.order {
            // (a x + b y) Q_{d-1} at x^i y^{d-i}: a q_{i-1} + b q_i.
            let mut prev = Rational::zero();
            for i in 0..d {
                let qi = (self.coeff(i, d - i) - a * &prev) / b;
                q.add_term(i, d - 1 - i, qi.clone());
                prev = qi;
            }
            if self.coeff(d, 0) != a * &prev {
                return Err(Error::Divisibility(format!("nonzero remainder in degree {d}")));
            }
        }
        Ok(q)
    }
}

impl Add for &Bivariate {
    type Output = Bivariate;
    fn add(self, rhs: &Bivariate) -> Bivariate {
        let mut s = Bivariate::zero(self.order.min(rhs.order));
        for (&(i, j), c) in self.terms.iter().chain(rhs.terms.iter()) {
            s.add_term(i, j, c.clone());
        }
        s
    }
}

impl Sub for &Bivariate {
    type Output = Bivariate;
    fn sub(self, rhs: &Bivariate) -> Bivariate {
        self + &rhs.scale(&Rational::from_integer((-1).into()))
    }
}

impl Mul for &Bivariate {
    type Output = Bivariate;
    fn mul(self, rhs: &Bivariate) -> Bivariate {
        let mut s = Bivariate::zero(self.order.min(rhs.order));
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                s.add_term(i1 + i2, j1 + j2, a * b);
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
    fn divides_x_cubed_plus_y_cubed() {
        let mut p = Bivariate::zero(5);
        p.add_term(3, 0, int(1));
        p.add_term(0, 3, int(1));
        let q = p.divide_linear(&int(1), &int(1)).unwrap();
        let mut expect = Bivariate::zero(4);
        expect.add_term(2, 0, int(1));
        expect.add_term(1, 1, int(-1));
        expect.add_term(0, 2, int(1));
        assert_eq!(q, expect);
    }

    #[test]
    fn rejects_non_multiple() {
        let p = Bivariate::monomial(2, 0, int(1), 4);
        assert!(matches!(p.divide_linear(&int(1), &int(1)), Err(Error::Divisibility(_))));
        let p = Bivariate::monomial(0, 0, int(1), 4);
        assert!(matches!(p.divide_linear(&int(1), &int(-1)), Err(Error::Divisibility(_))));
    }

    #[test]
    fn difference_quotient() {
        // (x^2 - y^2) / (x - y) = x + y
        let mut p = Bivariate::zero(3);
        p.add_term(2, 0, int(1));
        p.add_term(0, 2, int(-1));
        let q = p.divide_linear(&int(1), &int(-1)).unwrap();
        assert_eq!(q.coeff(1, 0), int(1));
        assert_eq!(q.coeff(0, 1), int(1));
        assert_eq!(q.terms().count(), 2);
    }
}
