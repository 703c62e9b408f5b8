//! Integration of decorated strata classes against kappa and psi monomials.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::element::StrataElement;
use super::graph::StableGraph;
use crate::closed::Descendents;
use crate::error::{Error, Result};
use crate::kappa::{monomial_degree, KappaMonomial};
use crate::rational::Rational;

/// `psi_1^{a_1} ... psi_n^{a_n}` times a kappa monomial on the ambient space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientMonomial {
    pub psi: Vec<u32>,
    pub kappa: KappaMonomial,
}

impl AmbientMonomial {
    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + monomial_degree(&self.kappa)
    }

    /// All monomials of the given degree on an `n`-pointed space.
    pub fn all_of_degree(n: usize, degree: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for kd in 0..=degree {
            for kappa in partitions_as_exponents(kd) {
                for psi in compositions(n, degree - kd) {
                    out.push(Self { psi, kappa: kappa.clone() });
                }
            }
        }
        out
    }
}

fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(n - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Kappa exponent vectors of graded degree `d`.
fn partitions_as_exponents(d: u32) -> Vec<KappaMonomial> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rec(d, d, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|ps| {
            let mut e = vec![0; d as usize];
            for p in ps {
                e[p as usize - 1] += 1;
            }
            while e.last() == Some(&0) {
                e.pop();
            }
            e
        })
        .collect()
}

fn expand(e: &[u32]) -> Vec<u32> {
    e.iter().enumerate().flat_map(|(i, &p)| std::iter::repeat_n(i as u32 + 1, p as usize)).collect()
}

/// `int_{M_{h,k}} prod psi^{a} prod kappa_{b}`.
///
/// Inverts the push-forward rule `p_{m*}(prod psi^{b_j+1}) = sum_sigma prod_cycles kappa`:
/// each set partition of the kappa factors contributes one extra marked point per
/// block, with sign `(-1)^{|B|-1}` per block.
pub fn vertex_integral(h: u32, psi: &[u32], kappas: &[u32]) -> Result<Rational> {
    let dim = 3 * h as i64 - 3 + psi.len() as i64;
    let deg = psi.iter().sum::<u32>() as i64 + kappas.iter().sum::<u32>() as i64;
    if dim != deg {
        return Ok(Rational::zero());
    }
    let brackets = Descendents::global();
    let mut total = Rational::zero();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    fn rec(
        i: usize,
        kappas: &[u32],
        blocks: &mut Vec<Vec<u32>>,
        h: u32,
        psi: &[u32],
        brackets: &Descendents,
        total: &mut Rational,
    ) -> Result<()> {
        if i == kappas.len() {
            let mut ks = psi.to_vec();
            let mut sign = 1;
            for b in blocks.iter() {
                ks.push(b.iter().sum::<u32>() + 1);
                if b.len() % 2 == 0 {
                    sign = -sign;
                }
            }
            let v = brackets.bracket_at(h, &ks)?;
            *total += if sign > 0 { v } else { -v };
            return Ok(());
        }
        for j in 0..blocks.len() {
            blocks[j].push(kappas[i]);
            rec(i + 1, kappas, blocks, h, psi, brackets, total)?;
            blocks[j].pop();
        }
        blocks.push(vec![kappas[i]]);
        rec(i + 1, kappas, blocks, h, psi, brackets, total)?;
        blocks.pop();
        Ok(())
    }
    rec(0, kappas, &mut blocks, h, psi, brackets, &mut total)?;
    Ok(total)
}

fn term_integral(graph: &StableGraph, deco: &super::graph::Decoration, extra: &AmbientMonomial) -> Result<Rational> {
    let nv = graph.num_vertices();
    let mut psi = deco.psi.clone();
    for (l, &a) in extra.psi.iter().enumerate() {
        psi[l] += a;
    }
    let extra_k = expand(&extra.kappa);
    let base_k: Vec<Vec<u32>> = deco.kappa.iter().map(|e| expand(e)).collect();
    let halves: Vec<Vec<usize>> = (0..nv).map(|v| graph.half_edges_at(v)).collect();
    let mut total = Rational::zero();
    // Pull back each ambient kappa as a sum over vertices.
    let combos = nv.pow(extra_k.len() as u32);
    for code in 0..combos {
        let mut ks = base_k.clone();
        let mut c = code;
        for &b in &extra_k {
            ks[c % nv].push(b);
            c /= nv;
        }
        let mut prod = Rational::one();
        for v in 0..nv {
            let p: Vec<u32> = halves[v].iter().map(|&h| psi[h]).collect();
            prod *= vertex_integral(graph.genera()[v], &p, &ks[v])?;
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    Ok(total / Rational::from_integer((graph.automorphism_order() as i64).into()))
}

/// Pairs `element` with an ambient monomial of complementary degree.
pub fn integrate(element: &StrataElement, extra: &AmbientMonomial) -> Result<Rational> {
    let dim = 3 * element.genus() + element.num_legs() as u32 - 3;
    if extra.psi.len() != element.num_legs() {
        return Err(Error::Domain(format!(
            "monomial has {} psi exponents for {} legs",
            extra.psi.len(),
            element.num_legs()
        )));
    }
    let terms: Vec<_> = element.terms().collect();
    let parts: Vec<Rational> = terms
        .par_iter()
        .map(|((graph, deco), c)| {
            let codim = graph.num_edges() as u32 + deco.degree();
            if codim + extra.degree() != dim {
                return Err(Error::Domain(format!(
                    "degree mismatch: codimension {codim} plus monomial degree {} is not {dim}",
                    extra.degree()
                )));
            }
            Ok(term_integral(graph, deco, extra)? * *c)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(Rational::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::strata::graph::Decoration;

    #[test]
    fn fundamental_class_against_psi() {
        let e = StrataElement::fundamental(1, 1).unwrap();
        let v = integrate(&e, &AmbientMonomial { psi: vec![1], kappa: vec![] }).unwrap();
        assert_eq!(v, rat(1, 24));
        let k = integrate(&e, &AmbientMonomial { psi: vec![0], kappa: vec![1] }).unwrap();
        assert_eq!(k, rat(1, 24));
    }

    #[test]
    fn loop_graph_has_half_weight() {
        let g = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
        let mut e = StrataElement::zero(1, 1);
        e.add_term(&g, &Decoration::trivial(&g), int(1)).unwrap();
        assert_eq!(integrate(&e, &AmbientMonomial { psi: vec![0], kappa: vec![] }).unwrap(), rat(1, 2));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let e = StrataElement::fundamental(1, 1).unwrap();
        let r = integrate(&e, &AmbientMonomial { psi: vec![0], kappa: vec![] });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn known_kappa_integrals() {
        assert_eq!(vertex_integral(2, &[], &[3]).unwrap(), rat(1, 1152));
        assert_eq!(vertex_integral(0, &[0; 5], &[1, 1]).unwrap(), int(5));
        assert_eq!(vertex_integral(0, &[0; 5], &[2]).unwrap(), int(1));
        assert_eq!(vertex_integral(0, &[0; 6], &[1, 1, 1]).unwrap(), int(61));
        // kappa_1 kappa_2 = p_*(psi^2 psi^3) - kappa_3 on M_{0,6}.
        assert_eq!(vertex_integral(0, &[0; 6], &[1, 2]).unwrap(), int(9));
    }

    #[test]
    fn monomials_of_degree() {
        let all = AmbientMonomial::all_of_degree(2, 2);
        // psi: 3 compositions of 2, kappa_1 with 2 of 1, kappa_1^2 and kappa_2.
        assert_eq!(all.len(), 3 + 2 + 2);
        assert!(all.iter().all(|m| m.degree() == 2));
    }
}
