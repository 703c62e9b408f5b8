//! Relations assembled from vertex, leg and edge factors over stable graphs.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fz::{fz_coefficient, FzPartition};
use crate::kappa::{monomial_degree, KappaMonomial, KappaPolynomial};
use crate::named::{series_h0, series_h1};
use crate::rational::{format_rational, int, rat, Rational};
use crate::report::{Check, Mismatch};
use crate::series::{Bivariate, PowerSeries};
use crate::strata::element::kappa_of_f;
use crate::strata::{enumerate_stable_graphs, integrate, AmbientMonomial, Decoration, StableGraph, StrataElement};

/// Data `(g, n, A, d)` of one relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PixtonInput {
    pub g: u32,
    pub a: Vec<u8>,
    pub d: u32,
}

impl PixtonInput {
    pub fn new(g: u32, a: Vec<u8>, d: u32) -> Result<Self> {
        let n = a.len() as u32;
        if 2 * g + n <= 2 {
            return Err(Error::Unstable { g, n });
        }
        if a.iter().any(|&x| x > 1) {
            return Err(Error::Domain("entries of A must be 0 or 1".into()));
        }
        let sum: u32 = a.iter().map(|&x| x as u32).sum();
        // d > (g - 1 + sum A) / 3
        if 3 * d as i64 <= g as i64 - 1 + sum as i64 {
            return Err(Error::NotInP(format!("d = {d} is not above (g - 1 + {sum})/3 with g = {g}")));
        }
        Ok(Self { g, a, d })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
}

/// Terms `(kappa monomial, coefficient)` of `kappa(T - T H0(T))` through degree `max`;
/// each carries `zeta_v` to the parity of its degree.
pub fn vertex_factor(max: u32) -> Result<KappaPolynomial> {
    let order = max as usize + 2;
    let h0 = series_h0(order);
    let f = PowerSeries::monomial(1, int(1), order) - h0.shift_up(1);
    kappa_of_f(&f.truncate(order), max)
}

/// Coefficients of `zeta^a H_a(zeta psi)`: the `psi^k` term carries `zeta^{a+k}`.
pub fn leg_factor(a: u8, max: u32) -> PowerSeries {
    if a == 0 {
        series_h0(max as usize)
    } else {
        series_h1(max as usize)
    }
}

/// The edge factor split by parity of `(zeta', zeta'')`: `parts[e1][e2]` is the
/// coefficient of `zeta'^{e1} zeta''^{e2}`, a series in `(psi', psi'')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFactor {
    pub parts: [[Bivariate; 2]; 2],
}

impl EdgeFactor {
    /// Evaluates at `zeta' = s1`, `zeta'' = s2` in `{1, -1}`.
    pub fn at(&self, s1: i64, s2: i64) -> Bivariate {
        let mut out = Bivariate::zero(self.parts[0][0].order());
        for e1 in 0..2 {
            for e2 in 0..2 {
                let sign = if e1 == 1 { s1 } else { 1 } * if e2 == 1 { s2 } else { 1 };
                out = &out + &self.parts[e1][e2].scale(&int(sign));
            }
        }
        out
    }
}

/// `Delta_e` through total degree `max`, by exact division for each sign choice.
pub fn edge_factor(max: u32) -> Result<EdgeFactor> {
    let order = max as usize + 1;
    let h0 = series_h0(order);
    let h1 = series_h1(order);
    let mut values: BTreeMap<(i64, i64), Bivariate> = BTreeMap::new();
    for s1 in [1i64, -1] {
        for s2 in [1i64, -1] {
            let (z1, z2) = (int(s1), int(s2));
            let mut num = Bivariate::monomial(0, 0, int(s1 + s2), order);
            let a = Bivariate::outer(&h0.rescale_var(&z1), &h1.rescale_var(&z2), order).scale(&z2);
            let b = Bivariate::outer(&h1.rescale_var(&z1), &h0.rescale_var(&z2), order).scale(&z1);
            num = &(&num - &a) - &b;
            values.insert((s1, s2), num.divide_linear(&int(1), &int(1))?);
        }
    }
    let part = |e1: usize, e2: usize| {
        let mut out = Bivariate::zero(max as usize);
        for (&(s1, s2), v) in &values {
            let sign = if e1 == 1 { s1 } else { 1 } * if e2 == 1 { s2 } else { 1 };
            out = &out + &v.scale(&rat(sign, 4));
        }
        out
    };
    Ok(EdgeFactor { parts: [[part(0, 0), part(0, 1)], [part(1, 0), part(1, 1)]] })
}

/// All factors needed for relations of codimension `<= max`.
#[derive(Clone, Debug)]
pub struct Factors {
    pub max: u32,
    pub vertex: KappaPolynomial,
    pub legs: [PowerSeries; 2],
    pub edge: EdgeFactor,
}

impl Factors {
    pub fn new(max: u32) -> Result<Self> {
        Ok(Self { max, vertex: vertex_factor(max)?, legs: [leg_factor(0, max), leg_factor(1, max)], edge: edge_factor(max)? })
    }
}

/// `zeta`-mask and decoration to coefficient.
pub type ZetaGraded = HashMap<(u64, Decoration), Rational>;

/// The product of all factors on `graph`, keeping decorations of degree exactly
/// `d - |E|`, indexed by the `zeta`-monomial (bitmask over vertices).
pub fn graph_product(graph: &StableGraph, a: &[u8], d: u32, f: &Factors) -> Result<ZetaGraded> {
    let ne = graph.num_edges() as u32;
    let mut out: ZetaGraded = HashMap::new();
    if ne > d {
        return Ok(out);
    }
    let budget = d - ne;
    if budget > f.max {
        return Err(Error::OutOfRange(format!("factors built through degree {}, {budget} needed", f.max)));
    }
    let nv = graph.num_vertices();
    let n = graph.num_legs();
    let mut state: Vec<(u64, Decoration, u32, Rational)> = vec![(0, Decoration::trivial(graph), 0, Rational::one())];
    let vterms: Vec<(KappaMonomial, Rational, u32)> =
        f.vertex.terms().map(|(e, c)| (e.clone(), c.clone(), monomial_degree(e))).collect();
    for v in 0..nv {
        let mut next = Vec::new();
        for (mask, deco, used, c) in &state {
            for (e, k, deg) in &vterms {
                if used + deg > budget {
                    continue;
                }
                let mut dd = deco.clone();
                dd.kappa[v] = e.clone();
                next.push((mask ^ ((*deg as u64 & 1) << v), dd, used + deg, c * k));
            }
        }
        state = next;
    }
    for l in 0..n {
        let al = a[l];
        let series = &f.legs[al as usize];
        let v = graph.legs()[l];
        let mut next = Vec::new();
        for (mask, deco, used, c) in &state {
            for k in 0..=(budget - used) {
                let coef = series.at(k as usize);
                if coef.is_zero() {
                    continue;
                }
                let mut dd = deco.clone();
                dd.psi[l] = k;
                let parity = (al as u64 + k as u64) & 1;
                next.push((mask ^ (parity << v), dd, used + k, c * coef));
            }
        }
        state = next;
    }
    for (e, &(u, w)) in graph.edges().iter().enumerate() {
        let (h1, h2) = (n + 2 * e, n + 2 * e + 1);
        let mut next = Vec::new();
        for (mask, deco, used, c) in &state {
            for e1 in 0..2u64 {
                for e2 in 0..2u64 {
                    for (&(i, j), coef) in f.edge.parts[e1 as usize][e2 as usize].terms() {
                        let deg = (i + j) as u32;
                        if used + deg > budget {
                            continue;
                        }
                        let mut dd = deco.clone();
                        dd.psi[h1] = i as u32;
                        dd.psi[h2] = j as u32;
                        next.push((mask ^ (e1 << u) ^ (e2 << w), dd, used + deg, c * coef));
                    }
                }
            }
        }
        state = next;
    }
    for (mask, deco, used, c) in state {
        if used == budget {
            let slot = out.entry((mask, deco)).or_insert_with(Rational::zero);
            *slot += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Bitmask of `prod_v zeta_v^{g(v) - 1}` under `zeta^2 = 1`.
pub fn target_mask(graph: &StableGraph) -> u64 {
    graph.genera().iter().enumerate().filter(|(_, &h)| h % 2 == 0).map(|(v, _)| 1u64 << v).sum()
}

/// The relation `R^d_{g,A}` as a strata element. Term coefficients include
/// `1/2^{h^1}`; the `1/|Aut|` factor is part of what each term denotes.
pub fn pixton_class(input: &PixtonInput) -> Result<StrataElement> {
    let graphs = enumerate_stable_graphs(input.g, input.n())?;
    let f = Factors::new(input.d)?;
    let parts: Vec<Vec<(StableGraph, Decoration, Rational)>> = graphs
        .par_iter()
        .map(|graph| {
            let prod = graph_product(graph, &input.a, input.d, &f)?;
            let target = target_mask(graph);
            let scale = rat(1, 1i64 << graph.h1());
            let mut terms: Vec<_> = prod
                .into_iter()
                .filter(|((m, _), _)| *m == target)
                .map(|((_, deco), c)| (graph.clone(), deco, c * &scale))
                .collect();
            terms.sort_by(|a, b| a.1.cmp(&b.1));
            Ok(terms)
        })
        .collect::<Result<_>>()?;
    let mut out = StrataElement::zero(input.g, input.n());
    for (graph, deco, c) in parts.into_iter().flatten() {
        out.add_term(&graph, &deco, c)?;
    }
    Ok(out)
}

/// The small admissible cases whose pairings are checked.
pub fn small_cases() -> Vec<PixtonInput> {
    [(1, vec![1], 1), (2, vec![], 1), (2, vec![1], 1), (2, vec![], 2)]
        .into_iter()
        .map(|(g, a, d)| PixtonInput::new(g, a, d).expect("admissible"))
        .collect()
}

/// Pairs `R^d_{g,A}` with every complementary monomial; all results must vanish.
pub fn pairing_check(input: &PixtonInput) -> Result<Check> {
    let class = pixton_class(input)?;
    let dim = 3 * input.g + input.n() as u32 - 3;
    let monos = AmbientMonomial::all_of_degree(input.n(), dim - input.d);
    let mut bad = None;
    for m in &monos {
        let v = integrate(&class, m)?;
        if !v.is_zero() {
            bad = Some(Mismatch {
                location: format!("psi {:?} kappa {:?}", m.psi, m.kappa),
                expected: "0".into(),
                computed: format_rational(&v),
            });
            break;
        }
    }
    Ok(Check::from_mismatch(
        format!("pairings of R^{}_({},{:?})", input.d, input.g, input.a),
        "relations",
        format!("{} terms against {} monomials", class.len(), monos.len()),
        bad,
    ))
}

/// Trivial-graph part of `R^d_{g,()}` compared with the Faber-Zagier relation
/// `(g, d, ())`: the two agree after `kappa_r -> (-1)^r kappa_r`, a global sign `(-1)^d`.
pub fn fz_comparison(g: u32, d: u32) -> Result<Check> {
    let input = PixtonInput::new(g, vec![], d)?;
    let smooth = StableGraph::smooth(g, 0)?;
    let f = Factors::new(d)?;
    let prod = graph_product(&smooth, &[], d, &f)?;
    let target = target_mask(&smooth);
    let mut trivial = KappaPolynomial::zero();
    for ((m, deco), c) in prod {
        if m == target {
            trivial.add_term(deco.kappa[0].clone(), c);
        }
    }
    let fz = fz_coefficient(input.g, d, &FzPartition::empty())?;
    let signed = trivial.scale(&int(if d.is_multiple_of(2) { 1 } else { -1 }));
    let detail = format!("trivial graph: {trivial}; FZ: {fz}");
    let mismatch = (signed != fz).then(|| Mismatch {
        location: format!("(g, d) = ({g}, {d})"),
        expected: fz.to_string(),
        computed: signed.to_string(),
    });
    Ok(Check::from_mismatch(format!("trivial graph vs FZ at (g, d) = ({g}, {d})"), "relations", detail, mismatch))
}

/// The low coefficients of `Delta_e`: `60 zeta' zeta'' - 84` in degree zero,
/// `32760 zeta' psi' - 27720 zeta' psi''` and its mirror in degree one.
pub fn printed_edge_check() -> Result<Check> {
    let e = edge_factor(1)?;
    let expected = [
        ("zeta' zeta'' at 1", e.parts[1][1].coeff(0, 0), 60),
        ("constant", e.parts[0][0].coeff(0, 0), -84),
        ("zeta' psi'", e.parts[1][0].coeff(1, 0), 32760),
        ("zeta'' psi''", e.parts[0][1].coeff(0, 1), 32760),
        ("zeta' psi''", e.parts[1][0].coeff(0, 1), -27720),
        ("zeta'' psi'", e.parts[0][1].coeff(1, 0), -27720),
    ];
    let bad = expected.iter().find(|(_, got, want)| *got != int(*want)).map(|(loc, got, want)| Mismatch {
        location: (*loc).into(),
        expected: want.to_string(),
        computed: format_rational(got),
    });
    Ok(Check::from_mismatch("edge factor low coefficients", "edge factor", "60 zeta'zeta'' - 84, 32760, -27720", bad))
}

/// Edge coefficients, the zero pairings of the small cases and the trivial-graph comparison.
pub fn verify() -> Result<Vec<Check>> {
    let mut out = vec![printed_edge_check()?];
    let pairings: Vec<Result<Check>> = small_cases().par_iter().map(pairing_check).collect();
    for c in pairings {
        out.push(c?);
    }
    for (g, d) in [(3, 2), (2, 3), (4, 3)] {
        out.push(fz_comparison(g, d)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_edge_coefficients() {
        let e = edge_factor(4).unwrap();
        assert_eq!(e.parts[1][1].coeff(0, 0), int(60));
        assert_eq!(e.parts[0][0].coeff(0, 0), int(-84));
        assert_eq!(e.parts[1][0].coeff(1, 0), int(32760));
        assert_eq!(e.parts[0][1].coeff(0, 1), int(32760));
        assert_eq!(e.parts[1][0].coeff(0, 1), int(-27720));
        assert_eq!(e.parts[0][1].coeff(1, 0), int(-27720));
        assert_eq!(e.at(1, 1).coeff(0, 0), int(-24));
        for e1 in 0..2 {
            for e2 in 0..2 {
                assert_eq!(e.parts[e1][e2].swap(), e.parts[e2][e1]);
            }
        }
    }

    #[test]
    fn divisibility_through_twelve() {
        for d in 0..=12 {
            edge_factor(d).unwrap();
        }
    }

    #[test]
    fn vertex_and_leg_low_terms() {
        let v = vertex_factor(2).unwrap();
        assert_eq!(v.coeff(&[]), int(1));
        assert_eq!(v.coeff(&[1]), int(60));
        assert_eq!(*leg_factor(0, 2).at(1), int(-60));
        assert_eq!(*leg_factor(1, 2).at(0), int(1));
    }

    #[test]
    fn admissibility() {
        assert!(matches!(PixtonInput::new(2, vec![], 0), Err(Error::NotInP(_))));
        assert!(PixtonInput::new(1, vec![1], 1).is_ok());
        assert!(matches!(PixtonInput::new(0, vec![0, 0], 1), Err(Error::Unstable { .. })));
    }

    #[test]
    fn smallest_case_by_hand() {
        // Smooth part 60 kappa_1 + 84 psi_1; loop graph -24 / 2.
        let class = pixton_class(&PixtonInput::new(1, vec![1], 1).unwrap()).unwrap();
        assert_eq!(class.codimensions(), vec![1]);
        let one = AmbientMonomial { psi: vec![0], kappa: vec![] };
        assert_eq!(integrate(&class, &one).unwrap(), int(0));
    }

    #[test]
    fn small_pairings_vanish() {
        for input in small_cases() {
            let c = pairing_check(&input).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn zeta_extraction_depends_on_parity() {
        let smooth = StableGraph::smooth(1, 1).unwrap();
        let f = Factors::new(1).unwrap();
        let even = graph_product(&smooth, &[0], 1, &f).unwrap();
        let odd = graph_product(&smooth, &[1], 1, &f).unwrap();
        let target = target_mask(&smooth);
        let at = |m: &ZetaGraded, mask: u64| m.keys().filter(|(x, _)| *x == mask).count();
        assert_eq!(at(&even, target), 0);
        assert!(at(&odd, target) > 0);
        assert!(at(&even, target ^ 1) > 0);
    }

    #[test]
    fn trivial_graph_matches_fz_up_to_sign() {
        for (g, d) in [(3, 2), (2, 3), (4, 3), (5, 4)] {
            let c = fz_comparison(g, d).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn suite_passes() {
        let checks = verify().unwrap();
        assert_eq!(checks.len(), 8);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
