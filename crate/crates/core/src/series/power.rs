//! Dense truncated power series in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, serde_rational_vec, Rational};

/// Truncated power series `c_0 + c_1 z + ... + c_order z^order`.
///
/// The coefficient vector always has length `order + 1`; coefficients past the
/// order are unknown and never reported.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * z^k`, truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series from an explicit coefficient list; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> Result<&Rational> {
        self.coeffs.get(k).ok_or_else(|| {
            Error::OutOfRange(format!("coefficient z^{k} requested from a series of order {}", self.order()))
        })
    }

    /// Coefficient of `z^k`, panicking when out of range. For internal loops.
    pub fn at(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        PowerSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `f(c z)`.
    pub fn rescale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        PowerSeries { coeffs }
    }

    /// `z^k f(z)`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// `f(z^k)`; the order becomes `k * order`.
    pub fn inflate(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut s = Self::zero(self.order() * k);
        for (i, a) in self.coeffs.iter().enumerate() {
            s.coeffs[i * k] = a.clone();
        }
        s
    }

    pub fn even_part(&self) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 0 { a.clone() } else { Rational::zero() })
                .collect(),
        }
    }

    pub fn odd_part(&self) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { a.clone() } else { Rational::zero() })
                .collect(),
        }
    }

    /// Formal derivative. The result is known one order less.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        PowerSeries {
            coeffs: (1..=self.order()).map(|k| &self.coeffs[k] * int(k as i64)).collect(),
        }
    }

    /// Antiderivative with zero constant term. The result is known one order more.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a / int(k as i64 + 1));
        }
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `exp(f)`; requires a zero constant term so the result stays rational.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp of a series with nonzero constant term".into()));
        }
        let n = self.order();
        // k e_k = sum_{j=1}^k j f_j e_{k-j}
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::one());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j] * int(j as i64);
                }
            }
            out.push(acc / int(k as i64));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `log(f)`; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("log of a series whose constant term is not 1".into()));
        }
        let n = self.order();
        // k l_k = k f_k - sum_{j=1}^{k-1} j l_j f_{k-j}
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::zero());
        for k in 1..=n {
            let mut acc = &self.coeffs[k] * int(k as i64);
            for j in 1..k {
                if !out[j].is_zero() {
                    acc -= &out[j] * &self.coeffs[k - j] * int(j as i64);
                }
            }
            out.push(acc / int(k as i64));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `f(g(z))`; `g` must have zero constant term.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain("compose requires an inner series with zero constant term".into()));
        }
        let valuation = inner.coeffs.iter().position(|c| !c.is_zero());
        // Missing outer terms f_{n+1} g^{n+1} start at degree v (n + 1).
        let order = match valuation {
            None => inner.order(),
            Some(v) => inner.order().min(v * (self.order() + 1) - 1),
        };
        let g = inner.truncate(order);
        let mut acc = PowerSeries::constant(self.coeffs[self.order()].clone(), order);
        for k in (0..self.order()).rev() {
            acc = &acc * &g;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc.truncate(order))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_json(&self, var: &str) -> SeriesJson {
        SeriesJson { var: var.to_string(), order: self.order(), coeffs: self.coeffs.clone() }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.coeffs.len() != j.order + 1 {
            return Err(Error::Parse(format!(
                "series JSON has {} coefficients for order {}",
                j.coeffs.len(),
                j.order
            )));
        }
        Ok(PowerSeries { coeffs: j.coeffs.clone() })
    }
}

/// Wire form `{"var": name, "order": n, "coeffs": ["p/q", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub var: String,
    pub order: usize,
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Text form in the variable `var`, ending with the truncation order.
    pub fn display_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = crate::rational::format_rational(c);
            parts.push(match k {
                0 => c,
                1 => format!("({c}){var}"),
                _ => format!("({c}){var}^{k}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        format!("{} + O({var}^{})", parts.join(" + "), self.order() + 1)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    /// Cauchy product truncated at the smaller of the two orders.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, rhs: PowerSeries) -> PowerSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn exp_z(order: usize) -> PowerSeries {
        let mut f = Rational::one();
        PowerSeries::from_fn(order, |k| {
            if k > 0 {
                f /= int(k as i64);
            }
            f.clone()
        })
    }

    #[test]
    fn difference_of_squares() {
        let a = PowerSeries::from_coeffs(vec![int(1), int(1), int(0)]);
        let b = PowerSeries::from_coeffs(vec![int(1), int(-1), int(0)]);
        assert_eq!(&a * &b, PowerSeries::from_coeffs(vec![int(1), int(0), int(-1)]));
    }

    #[test]
    fn inverse_exponentials() {
        let e = exp_z(20);
        let prod = &e * &e.rescale_var(&int(-1));
        assert_eq!(prod, PowerSeries::one(20));
    }

    #[test]
    fn log_of_one_plus_z() {
        let s = PowerSeries::from_coeffs(vec![int(1), int(1), int(0), int(0), int(0)]);
        let l = s.log().unwrap();
        assert_eq!(l.coeffs(), &[int(0), int(1), rat(-1, 2), rat(1, 3), rat(-1, 4)]);
        assert_eq!(exp_z(10).log().unwrap(), PowerSeries::monomial(1, int(1), 10));
    }

    #[test]
    fn log_requires_unit_constant() {
        let s = PowerSeries::from_coeffs(vec![int(2), int(1)]);
        assert!(matches!(s.log(), Err(Error::Domain(_))));
        assert!(matches!(s.exp(), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_and_compose() {
        let z3 = PowerSeries::monomial(3, int(1), 5);
        assert_eq!(z3.derivative(), PowerSeries::monomial(2, int(3), 4));
        let geom = PowerSeries::from_fn(10, |_| int(1));
        let z2 = PowerSeries::monomial(2, int(1), 10);
        let c = geom.compose(&z2).unwrap();
        assert_eq!(c.order(), 10);
        for k in 0..=10 {
            assert_eq!(c.at(k), &int(if k % 2 == 0 { 1 } else { 0 }));
        }
        let bad = PowerSeries::from_coeffs(vec![int(1), int(1)]);
        assert!(geom.compose(&bad).is_err());
    }

    #[test]
    fn reciprocal_of_h0_prefix() {
        // (1 - 60T + 27720T^2)(c0 + c1 T + c2 T^2) = 1 solved by hand:
        // c0 = 1, c1 = 60, c2 = 60*60 - 27720 = -24120.
        let h = PowerSeries::from_coeffs(vec![int(1), int(-60), int(27720)]);
        let r = h.reciprocal().unwrap();
        assert_eq!(r.coeffs(), &[int(1), int(60), int(-24120)]);
        assert!(PowerSeries::zero(3).reciprocal().is_err());
    }

    #[test]
    fn coefficient_out_of_range() {
        let s = PowerSeries::from_coeffs(vec![int(1), int(0), int(3)]);
        assert_eq!(s.coeff(2).unwrap(), &int(3));
        assert!(matches!(s.coeff(3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn json_shape() {
        let s = PowerSeries::from_coeffs(vec![int(1), rat(5, 24)]);
        let j = serde_json::to_string(&s.to_json("z")).unwrap();
        assert_eq!(j, r#"{"var":"z","order":1,"coeffs":["1","5/24"]}"#);
        let back: SeriesJson = serde_json::from_str(&j).unwrap();
        assert_eq!(PowerSeries::from_json(&back).unwrap(), s);
    }
}
