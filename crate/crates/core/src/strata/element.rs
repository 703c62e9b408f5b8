//! Linear combinations of decorated strata and the `kappa(f)` push-forward class.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::{canonicalize, Decoration, GraphJson, StableGraph};
use crate::error::{Error, Result};
use crate::kappa::{KappaPolynomial, KappaTermJson};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::series::PowerSeries;

/// `sum c [Gamma, gamma]`, where a term stands for `c / |Aut Gamma|` times the
/// push-forward of `gamma` from the stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataElement {
    g: u32,
    n: usize,
    terms: BTreeMap<(StableGraph, Decoration), Rational>,
}

impl StrataElement {
    pub fn zero(g: u32, n: usize) -> Self {
        Self { g, n, terms: BTreeMap::new() }
    }

    /// The fundamental class of `M_{g,n}` bar.
    pub fn fundamental(g: u32, n: usize) -> Result<Self> {
        let graph = StableGraph::smooth(g, n)?;
        let mut e = Self::zero(g, n);
        e.add_term(&graph, &Decoration::trivial(&graph), Rational::from_integer(1.into()))?;
        Ok(e)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_legs(&self) -> usize {
        self.n
    }

    /// Adds `c [graph, deco]` after canonicalizing the pair.
    pub fn add_term(&mut self, graph: &StableGraph, deco: &Decoration, c: Rational) -> Result<()> {
        if graph.genus() != self.g || graph.num_legs() != self.n {
            return Err(Error::Domain(format!(
                "graph of type ({}, {}) in an element on ({}, {})",
                graph.genus(),
                graph.num_legs(),
                self.g,
                self.n
            )));
        }
        if deco.kappa.len() != graph.num_vertices() || deco.psi.len() != graph.num_half_edges() {
            return Err(Error::Domain("decoration does not fit the graph".into()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let key = canonicalize(graph, deco);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(StableGraph, Decoration), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Codimensions present, in increasing order.
    pub fn codimensions(&self) -> Vec<u32> {
        let mut d: Vec<u32> =
            self.terms.keys().map(|(g, deco)| g.num_edges() as u32 + deco.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for ((g, d), c) in &other.terms {
            out.add_term(g, d, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.g, self.n);
        if k.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(key, c)| (key.clone(), c * k)).collect();
        out
    }

    pub fn to_json(&self) -> Vec<ElementTermJson> {
        self.terms
            .iter()
            .map(|((g, d), c)| ElementTermJson {
                graph: g.to_json(),
                kappa: d.kappa.clone(),
                psi: d.psi.clone(),
                coeff: format_rational(c),
            })
            .collect()
    }

    /// Rebuilds an element on `(g, n)` from its JSON terms.
    pub fn from_json(g: u32, n: usize, terms: &[ElementTermJson]) -> Result<Self> {
        let mut out = Self::zero(g, n);
        for t in terms {
            let graph = StableGraph::from_json(&t.graph)?;
            let deco = Decoration { kappa: t.kappa.clone(), psi: t.psi.clone() };
            out.add_term(&graph, &deco, parse_rational(&t.coeff)?)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTermJson {
    pub graph: GraphJson,
    pub kappa: Vec<Vec<u32>>,
    pub psi: Vec<u32>,
    pub coeff: String,
}

/// `kappa(f) = sum_m p_{m*}(f(psi_{n+1}) ... f(psi_{n+m})) / m!` in kappa classes,
/// through degree `max_degree`.
///
/// With `p_{m*}` of a product of psi powers expanded over permutations, the
/// exponential formula gives `exp(sum_r c_r kappa_r)` with
/// `c_r = [T^r] (-log(1 - f(T)/T))`.
pub fn kappa_of_f(f: &PowerSeries, max_degree: u32) -> Result<KappaPolynomial> {
    if !f.at(0).is_zero() || !f.at(1).is_zero() {
        return Err(Error::Domain("kappa(f) needs f with vanishing constant and linear terms".into()));
    }
    let d = max_degree as usize;
    if f.order() < d + 1 {
        return Err(Error::OutOfRange(format!(
            "f known through T^{} but T^{} is needed",
            f.order(),
            d + 1
        )));
    }
    let over_t = PowerSeries::from_fn(d, |k| f.at(k + 1).clone());
    let c = (PowerSeries::one(d) - over_t).log()?;
    let mut linear = KappaPolynomial::zero();
    for r in 1..=d {
        linear.add_term(unit(r), -c.at(r));
    }
    Ok(exp_truncated(&linear, max_degree))
}

fn unit(r: usize) -> Vec<u32> {
    let mut e = vec![0; r];
    e[r - 1] = 1;
    e
}

/// `exp(p)` through degree `max` for `p` without constant term.
pub fn exp_truncated(p: &KappaPolynomial, max: u32) -> KappaPolynomial {
    let mut out = KappaPolynomial::one();
    let mut power = KappaPolynomial::one();
    for k in 1..=max {
        power = truncate(&power.mul(p), max).scale(&Rational::new(1.into(), (k as i64).into()));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

pub fn truncate(p: &KappaPolynomial, max: u32) -> KappaPolynomial {
    let mut out = KappaPolynomial::zero();
    for (e, c) in p.terms() {
        if crate::kappa::monomial_degree(e) <= max {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// JSON helper for kappa polynomials printed alongside strata data.
pub fn kappa_json(p: &KappaPolynomial) -> Vec<KappaTermJson> {
    p.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kappa::KappaPolynomial as K;
    use crate::named::series_h0;
    use crate::rational::{int, rat};

    #[test]
    fn kappa_of_zero_is_one() {
        assert_eq!(kappa_of_f(&PowerSeries::zero(5), 4).unwrap(), K::one());
    }

    #[test]
    fn quadratic_f_matches_two_point_push_forward() {
        let c = rat(3, 2);
        let f = PowerSeries::monomial(2, c.clone(), 6);
        let k = kappa_of_f(&f, 2).unwrap();
        // m = 1: c kappa_1; m = 2: (c^2/2)(kappa_1^2 + kappa_2).
        let k1 = K::kappa(1);
        let expect = K::one()
            .add(&k1.scale(&c))
            .add(&k1.mul(&k1).add(&K::kappa(2)).scale(&(&c * &c / int(2))));
        assert_eq!(k, expect);
    }

    #[test]
    fn pixton_vertex_series_starts_with_sixty() {
        let h0 = series_h0(8);
        let f = PowerSeries::monomial(1, int(1), 8) - h0.shift_up(1);
        let k = kappa_of_f(&f, 3).unwrap();
        assert_eq!(k.coeff(&[1]), int(60));
        assert_eq!(k.coeff(&[]), int(1));
    }

    #[test]
    fn linear_term_is_rejected() {
        let f = PowerSeries::monomial(1, int(1), 4);
        assert!(matches!(kappa_of_f(&f, 2), Err(Error::Domain(_))));
    }
}
