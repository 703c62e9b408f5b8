//! Polynomials in the kappa classes `kappa_1, kappa_2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, Rational};

/// Exponents of `kappa_1, kappa_2, ...` with trailing zeros removed.
pub type KappaMonomial = Vec<u32>;

fn normalize(mut e: KappaMonomial) -> KappaMonomial {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// Graded degree `sum r * e_r` of a kappa monomial.
pub fn monomial_degree(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(i, &p)| (i as u32 + 1) * p).sum()
}

/// A sparse polynomial in `kappa_1, kappa_2, ...` over the rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KappaPolynomial {
    terms: BTreeMap<KappaMonomial, Rational>,
}

impl KappaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), Rational::one());
        p
    }

    /// The single generator `kappa_r` for `r >= 1`.
    pub fn kappa(r: u32) -> Self {
        assert!(r >= 1, "kappa_0 is a scalar, not a generator");
        let mut e = vec![0; r as usize];
        e[r as usize - 1] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    pub fn add_term(&mut self, e: KappaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = normalize(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(&normalize(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KappaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Graded degrees present, in increasing order.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| monomial_degree(e)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let n = a.len().max(b.len());
                let e: KappaMonomial =
                    (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// Rescales so that the leading (last in monomial order) coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn to_json(&self) -> Vec<KappaTermJson> {
        self.terms
            .iter()
            .map(|(e, c)| KappaTermJson { kappa: e.clone(), coeff: format_rational(c) })
            .collect()
    }
}

/// JSON form of one term: exponents of `kappa_1, kappa_2, ...` and the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaTermJson {
    pub kappa: Vec<u32>,
    pub coeff: String,
}

pub fn format_kappa_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(i, &p)| if p == 1 { format!("k{}", i + 1) } else { format!("k{}^{}", i + 1, p) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for KappaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let m = format_kappa_monomial(e);
            if e.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn arithmetic_and_display() {
        let k1 = KappaPolynomial::kappa(1);
        let k2 = KappaPolynomial::kappa(2);
        let p = k1.mul(&k1).scale(&int(3)).add(&k2.scale(&int(-2)));
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.coeff(&[2]), int(3));
        assert_eq!(p.coeff(&[0, 1, 0]), int(-2));
        assert_eq!(p.to_string(), "3*k1^2 - 2*k2");
        assert!(p.add(&p.scale(&int(-1))).is_zero());
        assert_eq!(KappaPolynomial::one().to_string(), "1");
    }
}
