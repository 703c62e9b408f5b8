use proptest::prelude::*;

use tautrel::closed::Descendents;
use tautrel::rational::{format_rational, parse_rational, rat, Rational};
use tautrel::series::{Bivariate, PowerSeries};
use tautrel::strata::{canonicalize, enumerate_stable_graphs, integrate, AmbientMonomial, Decoration, StableGraph, StrataElement};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn series(order: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(rational(), order + 1).prop_map(PowerSeries::from_coeffs)
}

fn unit_series(order: usize) -> impl Strategy<Value = PowerSeries> {
    (series(order), rational().prop_filter("nonzero", |c| *c != rat(0, 1))).prop_map(|(s, c)| {
        let mut coeffs = s.coeffs().to_vec();
        coeffs[0] = c;
        PowerSeries::from_coeffs(coeffs)
    })
}

fn decorated(g: u32, n: usize, max_psi: u32) -> impl Strategy<Value = (StableGraph, Decoration)> {
    let graphs = enumerate_stable_graphs(g, n).expect("stable type");
    (0..graphs.len(), prop::collection::vec(0..=max_psi, 16)).prop_map(move |(i, psi)| {
        let graph = graphs[i].clone();
        let mut deco = Decoration::trivial(&graph);
        for (slot, p) in deco.psi.iter_mut().zip(psi) {
            *slot = p;
        }
        (graph, deco)
    })
}

fn element(g: u32, n: usize) -> impl Strategy<Value = StrataElement> {
    prop::collection::vec((decorated(g, n, 1), rational()), 0..5).prop_map(move |terms| {
        let mut e = StrataElement::zero(g, n);
        for ((graph, deco), c) in terms {
            e.add_term(&graph, &deco, c).unwrap();
        }
        e
    })
}

fn part_of_codim(e: &StrataElement, codim: u32) -> StrataElement {
    let mut out = StrataElement::zero(e.genus(), e.num_legs());
    for ((graph, deco), c) in e.terms() {
        if graph.num_edges() as u32 + deco.degree() == codim {
            out.add_term(graph, deco, c.clone()).unwrap();
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn product_is_commutative_and_distributive(a in series(8), b in series(8), c in series(8)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn reciprocal_inverts(a in unit_series(10)) {
        let r = a.reciprocal().unwrap();
        prop_assert_eq!(&a * &r, PowerSeries::one(10));
    }

    #[test]
    fn exp_and_log_are_inverse(a in series(7)) {
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = rat(0, 1);
        let f = PowerSeries::from_coeffs(coeffs);
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn derivative_obeys_leibniz(a in series(9), b in series(9)) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b.truncate(8)) + &(&a.truncate(8) * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn even_and_odd_parts_sum(a in series(12)) {
        prop_assert_eq!(&a.even_part() + &a.odd_part(), a);
    }

    #[test]
    fn series_json_round_trip(a in series(6)) {
        let j = serde_json::to_string(&a.to_json("x")).unwrap();
        let back = PowerSeries::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn linear_division_undoes_multiplication(
        coeffs in prop::collection::vec(rational(), 10),
        a in rational().prop_filter("nonzero", |c| *c != rat(0, 1)),
        b in rational().prop_filter("nonzero", |c| *c != rat(0, 1)),
    ) {
        let mut q = Bivariate::zero(3);
        let mut it = coeffs.into_iter();
        for d in 0..=3 {
            for i in 0..=d {
                q.add_term(i, d - i, it.next().unwrap());
            }
        }
        let mut l = Bivariate::zero(4);
        l.add_term(1, 0, a.clone());
        l.add_term(0, 1, b.clone());
        let mut q4 = Bivariate::zero(4);
        for (&(i, j), c) in q.terms() {
            q4.add_term(i, j, c.clone());
        }
        prop_assert_eq!((&l * &q4).divide_linear(&a, &b).unwrap(), q);
    }

    #[test]
    fn string_equation(ks in prop::collection::vec(0u32..=5, 1..=4)) {
        let table = Descendents::global();
        let mut with_zero = ks.clone();
        with_zero.push(0);
        let mut rhs = rat(0, 1);
        for i in 0..ks.len() {
            if ks[i] > 0 {
                let mut lowered = ks.clone();
                lowered[i] -= 1;
                rhs += table.bracket(&lowered);
            }
        }
        prop_assume!(ks.len() >= 3 || ks.iter().sum::<u32>() > 0);
        prop_assert_eq!(table.bracket(&with_zero), rhs);
    }

    #[test]
    fn dilaton_equation(ks in prop::collection::vec(0u32..=5, 1..=4)) {
        let table = Descendents::global();
        let Some(g) = tautrel::closed::implied_genus(&ks) else { return Ok(()) };
        prop_assume!(2 * g + ks.len() as u32 > 2);
        let mut with_one = ks.clone();
        with_one.push(1);
        let factor = rat(2 * g as i64 - 2 + ks.len() as i64, 1);
        prop_assert_eq!(table.bracket(&with_one), factor * table.bracket(&ks));
    }

    #[test]
    fn canonical_form_is_idempotent((graph, deco) in decorated(1, 2, 2)) {
        let (g1, d1) = canonicalize(&graph, &deco);
        prop_assert_eq!(canonicalize(&g1, &d1), (g1, d1));
    }

    #[test]
    fn element_json_round_trip(e in element(1, 2)) {
        let j = serde_json::to_string(&e.to_json()).unwrap();
        let terms: Vec<tautrel::strata::element::ElementTermJson> = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(StrataElement::from_json(1, 2, &terms).unwrap(), e);
    }

    #[test]
    fn integration_is_linear(e1 in element(1, 2), e2 in element(1, 2), a in rational(), b in rational()) {
        for codim in 0..=2 {
            let (f1, f2) = (part_of_codim(&e1, codim), part_of_codim(&e2, codim));
            for m in AmbientMonomial::all_of_degree(2, 2 - codim) {
                let lhs = integrate(&f1.scale(&a).add(&f2.scale(&b)).unwrap(), &m).unwrap();
                let rhs = a.clone() * integrate(&f1, &m).unwrap() + b.clone() * integrate(&f2, &m).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
