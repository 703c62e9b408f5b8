//! Sparse multivariate series graded by positive integer variable weights.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, serde_rational, Rational};

/// Exponent vector, one entry per alphabet variable.
pub type Exps = Vec<u32>;

/// Variable names with their weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Alphabet {
    pub fn new(vars: impl IntoIterator<Item = (String, u32)>) -> Result<Arc<Self>> {
        let (names, weights): (Vec<_>, Vec<_>) = vars.into_iter().unzip();
        if weights.contains(&0) {
            return Err(Error::Domain("variable weights must be positive".into()));
        }
        Ok(Arc::new(Alphabet { names, weights }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.weights).map(|(a, w)| (*a as i64) * (*w as i64)).sum()
    }
}

/// Truncated series: every stored monomial has weighted degree `<= order`,
/// and all coefficients up to that degree are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Exps, Rational>,
    order: i64,
}

impl MultiSeries {
    pub fn zero(alphabet: &Arc<Alphabet>, order: i64) -> Self {
        MultiSeries { alphabet: alphabet.clone(), terms: BTreeMap::new(), order }
    }

    pub fn constant(alphabet: &Arc<Alphabet>, c: Rational, order: i64) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_term(vec![0; alphabet.len()], c);
        s
    }

    pub fn one(alphabet: &Arc<Alphabet>, order: i64) -> Self {
        Self::constant(alphabet, Rational::one(), order)
    }

    pub fn var(alphabet: &Arc<Alphabet>, i: usize, order: i64) -> Self {
        let mut e = vec![0; alphabet.len()];
        e[i] = 1;
        Self::monomial(alphabet, e, Rational::one(), order)
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, e: Exps, c: Rational, order: i64) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_term(e, c);
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
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

    pub fn degree(&self, e: &[u32]) -> i64 {
        self.alphabet.degree(e)
    }

    /// Adds `c` times the monomial; monomials above the order are dropped.
    pub fn add_term(&mut self, e: Exps, c: Rational) {
        debug_assert_eq!(e.len(), self.alphabet.len());
        if c.is_zero() || self.alphabet.degree(&e) > self.order {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Exact coefficient of a monomial; an error above the truncation degree.
    pub fn coeff(&self, e: &[u32]) -> Result<Rational> {
        if e.len() != self.alphabet.len() {
            return Err(Error::Domain(format!(
                "exponent vector of length {} for an alphabet of {} variables",
                e.len(),
                self.alphabet.len()
            )));
        }
        let d = self.degree(e);
        if d > self.order {
            return Err(Error::OutOfRange(format!(
                "monomial of weighted degree {d} requested from a series known through degree {}",
                self.order
            )));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient looked up by variable names, e.g. `[("t0", 3)]`.
    pub fn coeff_named(&self, vars: &[(&str, u32)]) -> Result<Rational> {
        let mut e = vec![0; self.alphabet.len()];
        for (name, p) in vars {
            let i = self
                .alphabet
                .index(name)
                .ok_or_else(|| Error::Domain(format!("unknown variable {name}")))?;
            e[i] += p;
        }
        self.coeff(&e)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.alphabet.len()]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let mut s = Self::zero(&self.alphabet, order);
        for (e, c) in &self.terms {
            if self.degree(e) <= order {
                s.terms.insert(e.clone(), c.clone());
            }
        }
        s
    }

    /// Same coefficients with the truncation degree raised. The caller asserts
    /// the series is exact (a polynomial) through the new degree.
    pub fn with_order(&self, order: i64) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    /// Keeps only the monomials accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        MultiSeries {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
            order: self.order,
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet,
            "series over different alphabets"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut s = self.truncate(other.order);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.alphabet, self.order);
        }
        MultiSeries {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            order: self.order,
        }
    }

    fn by_degree(&self) -> BTreeMap<i64, Vec<(&Exps, &Rational)>> {
        let mut m: BTreeMap<i64, Vec<(&Exps, &Rational)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            m.entry(self.degree(e)).or_default().push((e, c));
        }
        m
    }

    /// Product truncated at `min(order_a + val_b, order_b + val_a)`, where `val`
    /// is the lowest degree present (a polynomial's own degree bound counts).
    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let va = self.valuation().unwrap_or(self.order.max(0));
        let vb = other.valuation().unwrap_or(other.order.max(0));
        let order = (self.order + vb).min(other.order + va);
        let mut s = Self::zero(&self.alphabet, order);
        let right = other.by_degree();
        let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1 = self.degree(e1);
            for (_, bucket) in right.range(..=order - d1) {
                for (e2, c2) in bucket {
                    let e: Exps = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                    let v = acc.entry(e).or_insert_with(Rational::zero);
                    *v += c1 * *c2;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        s.terms = acc;
        s
    }

    /// Lowest weighted degree among stored monomials.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().map(|e| self.degree(e)).min()
    }

    /// Multiplies by the exact monomial `var_i^p`; the known range grows by `p * weight_i`.
    pub fn mul_var(&self, i: usize, p: u32) -> Self {
        let mut s = Self::zero(&self.alphabet, self.order + (p * self.alphabet.weight(i)) as i64);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += p;
            s.terms.insert(e, c.clone());
        }
        s
    }

    /// Partial derivative in variable `i`; known through `order - weight_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut s = Self::zero(&self.alphabet, self.order - self.alphabet.weight(i) as i64);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                s.add_term(e2, c * int(e[i] as i64));
            }
        }
        s
    }

    /// Homogeneous components indexed by degree `0..=order`.
    pub fn homogeneous_parts(&self) -> Vec<BTreeMap<Exps, Rational>> {
        let n = self.order.max(0) as usize;
        let mut parts = vec![BTreeMap::new(); n + 1];
        for (e, c) in &self.terms {
            parts[self.degree(e) as usize].insert(e.clone(), c.clone());
        }
        parts
    }

    fn rebuild_from_parts(&self, parts: Vec<BTreeMap<Exps, Rational>>) -> Self {
        let mut s = Self::zero(&self.alphabet, self.order);
        for p in parts {
            for (e, c) in p {
                s.add_term(e, c);
            }
        }
        s
    }

    /// `exp(f)`; requires zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp of a multivariate series with nonzero constant term".into()));
        }
        if self.order < 0 {
            return Ok(self.clone());
        }
        let f = self.homogeneous_parts();
        let n = f.len() - 1;
        let mut e: Vec<BTreeMap<Exps, Rational>> = Vec::with_capacity(n + 1);
        let mut e0 = BTreeMap::new();
        e0.insert(vec![0; self.alphabet.len()], Rational::one());
        e.push(e0);
        // d E_d = sum_{k=1}^d k F_k E_{d-k}
        for d in 1..=n {
            let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
            for k in 1..=d {
                if f[k].is_empty() || e[d - k].is_empty() {
                    continue;
                }
                let w = int(k as i64);
                homogeneous_mul_into(&mut acc, &f[k], &e[d - k], &w);
            }
            let inv = int(d as i64).recip();
            acc.retain(|_, v| {
                *v *= &inv;
                !v.is_zero()
            });
            e.push(acc);
        }
        Ok(self.rebuild_from_parts(e))
    }

    /// `log(f)`; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Domain("log of a multivariate series whose constant term is not 1".into()));
        }
        if self.order < 0 {
            return Ok(Self::zero(&self.alphabet, self.order));
        }
        let e = self.homogeneous_parts();
        let n = e.len() - 1;
        let mut f: Vec<BTreeMap<Exps, Rational>> = vec![BTreeMap::new()];
        // d F_d = d E_d - sum_{k=1}^{d-1} k F_k E_{d-k}
        for d in 1..=n {
            let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
            let dd = int(d as i64);
            for (x, c) in &e[d] {
                acc.insert(x.clone(), c * &dd);
            }
            for k in 1..d {
                if f[k].is_empty() || e[d - k].is_empty() {
                    continue;
                }
                homogeneous_mul_into(&mut acc, &f[k], &e[d - k], &int(-(k as i64)));
            }
            let inv = dd.recip();
            acc.retain(|_, v| {
                *v *= &inv;
                !v.is_zero()
            });
            f.push(acc);
        }
        Ok(self.rebuild_from_parts(f))
    }

    /// Substitutes `var_i -> images[i]` (all over `target`), truncating at `order`.
    ///
    /// The caller guarantees every image has no constant term and that the
    /// result is exact through `order`, e.g. each image is homogeneous of the
    /// same weight as its variable and `order <= self.order()`.
    pub fn substitute(&self, images: &[MultiSeries], target: &Arc<Alphabet>, order: i64) -> Result<Self> {
        if images.len() != self.alphabet.len() {
            return Err(Error::Domain("one image per variable is required".into()));
        }
        for im in images {
            if !im.constant_term().is_zero() {
                return Err(Error::Domain("substitution images must have zero constant term".into()));
            }
        }
        let images: Vec<MultiSeries> = images.iter().map(|im| im.with_order(order)).collect();
        let mut powers: Vec<Vec<MultiSeries>> =
            images.iter().map(|_| vec![MultiSeries::one(target, order)]).collect();
        let mut out = MultiSeries::zero(target, order);
        for (e, c) in &self.terms {
            let mut term = MultiSeries::constant(target, c.clone(), order);
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while powers[i].len() <= p as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]).with_order(order);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][p as usize]).with_order(order);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        out.order = order;
        Ok(out)
    }

    /// Re-expresses the series over a larger alphabet; `map[i]` is the target index of variable `i`.
    pub fn embed(&self, target: &Arc<Alphabet>, map: &[usize]) -> Self {
        let mut s = MultiSeries::zero(target, self.order);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &p) in e.iter().enumerate() {
                e2[map[i]] += p;
            }
            s.add_term(e2, c.clone());
        }
        s
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(e, c)| TermJson { exps: e.clone(), coeff: c.clone() }).collect()
    }

    /// Human-readable monomial, e.g. `t0^3 t1`.
    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(i, &p)| {
                if p == 1 {
                    self.alphabet.name(i).to_string()
                } else {
                    format!("{}^{}", self.alphabet.name(i), p)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

fn homogeneous_mul_into(
    acc: &mut BTreeMap<Exps, Rational>,
    a: &BTreeMap<Exps, Rational>,
    b: &BTreeMap<Exps, Rational>,
    w: &Rational,
) {
    for (e1, c1) in a {
        let c1w = c1 * w;
        for (e2, c2) in b {
            let e: Exps = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            let v = acc.entry(e).or_insert_with(Rational::zero);
            *v += &c1w * c2;
        }
    }
}

/// Wire form of one multivariate term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", format_rational(c), self.format_monomial(e))?;
        }
        write!(f, " + O(deg {})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ab() -> Arc<Alphabet> {
        Alphabet::new([("x".to_string(), 1), ("y".to_string(), 2)]).unwrap()
    }

    #[test]
    fn weighted_truncation_in_products() {
        let a = ab();
        let x = MultiSeries::var(&a, 0, 4);
        let y = MultiSeries::var(&a, 1, 4);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[2, 0]).unwrap(), int(1));
        assert_eq!(sq.coeff(&[1, 1]).unwrap(), int(2));
        assert_eq!(sq.coeff(&[0, 2]).unwrap(), int(1));
        assert!(matches!(sq.coeff(&[4, 1]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let a = ab();
        let f = MultiSeries::var(&a, 0, 8).add(&MultiSeries::var(&a, 1, 8).scale(&rat(3, 2)));
        let e = f.exp().unwrap();
        assert_eq!(e.coeff(&[2, 0]).unwrap(), rat(1, 2));
        assert_eq!(e.log().unwrap(), f);
    }

    #[test]
    fn derivative_lowers_known_range() {
        let a = ab();
        let f = MultiSeries::var(&a, 1, 6).mul(&MultiSeries::var(&a, 1, 6));
        let d = f.derivative(1);
        assert_eq!(d.order(), 6);
        assert_eq!(d.coeff(&[0, 1]).unwrap(), int(2));
    }

    #[test]
    fn substitution_shifts_variable() {
        let a = ab();
        // x^2 with x -> x + y (not homogeneous, but exact through degree 2).
        let f = MultiSeries::var(&a, 0, 2).mul(&MultiSeries::var(&a, 0, 2));
        let images = vec![MultiSeries::var(&a, 0, 2).add(&MultiSeries::var(&a, 1, 2)), MultiSeries::var(&a, 1, 2)];
        let g = f.substitute(&images, &a, 2).unwrap();
        assert_eq!(g.coeff(&[2, 0]).unwrap(), int(1));
        assert_eq!(g.len(), 1);
    }
}
