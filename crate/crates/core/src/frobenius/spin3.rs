//! The 3-spin Frobenius manifold and its R-matrix from the flatness equations.
//!
//! Entries are homogeneous: `phi^p` times a power series in `y = z phi^{-3/2}`.
//! With `phi = t1/3`, `z d/dt1 (phi^p y^k) = (p - 3k/2)/3 phi^{p+1/2} y^{k+1}`.

use num_traits::{One, Zero};

use super::Frobenius2D;
use crate::error::{Error, Result};
use crate::named::{series_a, series_b};
use crate::rational::{format_rational, int, rat, Rational};
use crate::report::{Check, Mismatch};
use crate::series::PowerSeries;

/// `phi^power * series(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSeries {
    pub power: Rational,
    pub series: PowerSeries,
}

impl PhiSeries {
    pub fn new(power: Rational, series: PowerSeries) -> Self {
        Self { power, series }
    }

    fn aligned(&self, other: &Self) -> Result<()> {
        if self.power != other.power {
            return Err(Error::Domain(format!(
                "adding phi^{} to phi^{}",
                format_rational(&self.power),
                format_rational(&other.power)
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.aligned(other)?;
        Ok(Self::new(self.power.clone(), &self.series + &other.series))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.aligned(other)?;
        Ok(Self::new(self.power.clone(), &self.series - &other.series))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.power.clone(), self.series.scale(c))
    }

    /// Multiplies by `phi^{k/2}`.
    pub fn sqrt_phi_pow(&self, k: i64) -> Self {
        Self::new(&self.power + rat(k, 2), self.series.clone())
    }

    /// `z d/dt1` applied to `e^{u/z} F`, divided again by `e^{u/z}`, where
    /// `du/dt1 = eps sqrt(phi)`; `eps = 0` drops the exponential.
    pub fn twisted_derivative(&self, eps: i64) -> Self {
        let n = self.series.order();
        let s = &self.series;
        let out = PowerSeries::from_fn(n, |k| {
            let mut c = s.at(k) * int(eps);
            if k >= 1 {
                let j = (k - 1) as i64;
                c += s.at(k - 1) * (&self.power - rat(3 * j, 2)) / int(3);
            }
            c
        });
        Self::new(&self.power + rat(1, 2), out)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.power.clone(), self.series.truncate(order))
    }
}

/// The 3-spin product at `t1` (so `phi = t1/3`): `e1 * e1 = phi e0`.
pub fn spin3_structure(t1: &Rational) -> Frobenius2D {
    let z = Rational::zero();
    let o = Rational::one();
    Frobenius2D { eta: [[z.clone(), o.clone()], [o, z.clone()]], e1e1: [t1 / int(3), z] }
}

/// Third derivative `d^3/dt1^3` of `t0^2 t1/2 + t1^4/72` at `t1`.
pub fn potential_third_derivative(t1: &Rational) -> Rational {
    t1 * rat(24, 72)
}

/// Branch signs: `du/dt1 = -sqrt(phi)` on `+`, `+sqrt(phi)` on `-`.
pub const BRANCHES: [(char, i64); 2] = [('+', -1), ('-', 1)];

/// A 2x2 matrix of homogeneous entries.
pub type PhiMatrix = [[PhiSeries; 2]; 2];

/// The column `(X^0, X^1)` with `S_pm = Delta_pm^{-1/2}`-free part `e^{u/z} X`.
#[derive(Clone, Debug)]
pub struct Column {
    pub eps: i64,
    pub x0: PhiSeries,
    pub x1: PhiSeries,
}

/// Solves `(z d/dt1)^2 S^1 = phi S^1` for `S^1 = e^{u/z} phi^{-1/4} H(y)`, `H(0) = 1`.
///
/// The unknown `H_k` first appears in the residual at `y^{k+1}`, with a nonzero
/// coefficient, so each step is a single division.
pub fn solve_column(eps: i64, order: usize) -> Column {
    let p = rat(-1, 4);
    let mut h = vec![Rational::one()];
    let residual_at = |h: &[Rational], k: usize| -> Rational {
        let x = PhiSeries::new(p.clone(), PowerSeries::from_coeffs(h.to_vec()));
        let dd = x.twisted_derivative(eps).twisted_derivative(eps);
        let r = dd.sub(&x.sqrt_phi_pow(2).truncate(dd.series.order())).expect("equal powers");
        r.series.at(k).clone()
    };
    for k in 1..=order {
        let mut trial = h.clone();
        trial.push(Rational::zero());
        trial.push(Rational::zero());
        let r0 = residual_at(&trial, k + 1);
        trial[k] = Rational::one();
        let alpha = residual_at(&trial, k + 1) - &r0;
        h.push(-r0 / alpha);
    }
    let x1 = PhiSeries::new(p, PowerSeries::from_coeffs(h));
    let x0 = x1.twisted_derivative(eps);
    Column { eps, x0, x1 }
}

/// `R` in the basis `e0, e1` from the two solved columns, through `y^order`.
pub fn solve_r(order: usize) -> Result<PhiMatrix> {
    let plus = solve_column(-1, order);
    let minus = solve_column(1, order);
    let half = rat(1, 2);
    let entry = |a: &PhiSeries, b: &PhiSeries, col: usize| -> Result<PhiSeries> {
        // col 0: (X_- - X_+) phi^{-1/4} / 2; col 1: (X_+ + X_-) phi^{1/4} / 2
        let v = if col == 0 { b.sub(a)? } else { a.add(b)? };
        let shift = if col == 0 { rat(-1, 4) } else { rat(1, 4) };
        Ok(PhiSeries::new(&v.power + shift, v.series.scale(&half)).truncate(order))
    };
    Ok([
        [entry(&plus.x0, &minus.x0, 0)?, entry(&plus.x0, &minus.x0, 1)?],
        [entry(&plus.x1, &minus.x1, 0)?, entry(&plus.x1, &minus.x1, 1)?],
    ])
}

fn even_odd(s: &PowerSeries, odd: bool) -> PowerSeries {
    if odd {
        s.odd_part()
    } else {
        s.even_part()
    }
}

/// The closed-form matrix with `R(6z)` entries in `A`, `B` at `-z phi^{-3/2}`, as
/// functions of `y`; `flip_01` negates the `(0, 1)` entry.
pub fn displayed_r(order: usize, flip_01: bool) -> PhiMatrix {
    let arg = rat(-1, 6);
    let a = series_a(order).rescale_var(&arg);
    let b = series_b(order).rescale_var(&arg);
    let s01 = if flip_01 { int(1) } else { int(-1) };
    [
        [
            PhiSeries::new(Rational::zero(), even_odd(&b, false).scale(&int(-1))),
            PhiSeries::new(rat(1, 2), even_odd(&b, true).scale(&s01)),
        ],
        [
            PhiSeries::new(rat(-1, 2), even_odd(&a, true).scale(&int(-1))),
            PhiSeries::new(Rational::zero(), even_odd(&a, false)),
        ],
    ]
}

/// First differing entry and coefficient between two matrices.
pub fn compare_matrices(computed: &PhiMatrix, expected: &PhiMatrix) -> Option<Mismatch> {
    for i in 0..2 {
        for j in 0..2 {
            let (c, e) = (&computed[i][j], &expected[i][j]);
            if c.power != e.power {
                return Some(Mismatch {
                    location: format!("R[{i}][{j}] phi power"),
                    expected: format_rational(&e.power),
                    computed: format_rational(&c.power),
                });
            }
            let n = c.series.order().min(e.series.order());
            if let Some(k) = (0..=n).find(|&k| c.series.at(k) != e.series.at(k)) {
                return Some(Mismatch {
                    location: format!("R[{i}][{j}] at z^{k}"),
                    expected: format_rational(e.series.at(k)),
                    computed: format_rational(c.series.at(k)),
                });
            }
        }
    }
    None
}

/// Columns of `S = Psi R e^{u/z}` with the `Delta^{-1/2}` constants removed.
pub fn columns_from_r(r: &PhiMatrix) -> Result<[Column; 2]> {
    let col = |eps: i64, sign: i64| -> Result<Column> {
        // Psi column: phi^{-1/4} (-+ sqrt(phi), 1)
        let comp = |mu: usize| -> Result<PhiSeries> {
            let v = r[mu][0].sqrt_phi_pow(1).scale(&int(sign)).add(&r[mu][1])?;
            Ok(PhiSeries::new(&v.power - rat(1, 4), v.series))
        };
        Ok(Column { eps, x0: comp(0)?, x1: comp(1)? })
    };
    Ok([col(-1, -1)?, col(1, 1)?])
}

/// Residuals of the four flatness equations on a column, each exact through `y^order - 1`.
pub fn flatness_residuals(c: &Column, eps_override: Option<i64>) -> Result<[PhiSeries; 4]> {
    let eps = eps_override.unwrap_or(c.eps);
    let n = c.x1.series.order().saturating_sub(1);
    // z d/dt0 acts as the identity on e^{u/z} X because X does not depend on t0.
    let t0_0 = c.x0.sub(&c.x0)?;
    let t0_1 = c.x1.sub(&c.x1)?;
    let e1 = c.x1.twisted_derivative(eps).truncate(n).sub(&c.x0.truncate(n))?;
    let e2 = c.x0.twisted_derivative(eps).truncate(n).sub(&c.x1.sqrt_phi_pow(2).truncate(n))?;
    Ok([t0_0, t0_1, e1, e2])
}

/// Residual of `(z d/dt1)^2 S^1 = phi S^1` on a column.
pub fn airy_residual(c: &Column, with_exponential: bool) -> Result<PhiSeries> {
    let eps = if with_exponential { c.eps } else { 0 };
    let n = c.x1.series.order().saturating_sub(2);
    c.x1.twisted_derivative(eps).twisted_derivative(eps).truncate(n).sub(&c.x1.sqrt_phi_pow(2).truncate(n))
}

fn first_nonzero(name: &str, s: &PhiSeries) -> Option<Mismatch> {
    (0..=s.series.order()).find(|&k| !s.series.at(k).is_zero()).map(|k| Mismatch {
        location: format!("{name} at y^{k}"),
        expected: "0".into(),
        computed: format_rational(s.series.at(k)),
    })
}

/// All equations on both columns; `None` when they hold.
pub fn flatness_mismatch(r: &PhiMatrix) -> Result<Option<Mismatch>> {
    for (c, (label, _)) in columns_from_r(r)?.iter().zip(BRANCHES) {
        let names = ["z d0 S^0 = S^0", "z d0 S^1 = S^1", "z d1 S^1 = S^0", "z d1 S^0 = phi S^1"];
        for (res, name) in flatness_residuals(c, None)?.iter().zip(names) {
            if let Some(m) = first_nonzero(&format!("{name} ({label})"), res) {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

/// The 3-spin suite at z-order `order`.
pub fn verify(order: usize) -> Result<Vec<Check>> {
    let solved = solve_r(order)?;
    let literal = displayed_r(order, false);
    let flipped = displayed_r(order, true);
    let mut out = vec![
        Check::from_mismatch(
            "3-spin R from flatness vs closed form",
            "3-spin R-matrix",
            format!("entrywise through z^{order}, argument scaling R(6z)"),
            compare_matrices(&solved, &literal),
        ),
        Check::from_mismatch(
            "3-spin R vs closed form with R[0][1] negated",
            "3-spin R-matrix",
            format!("entrywise through z^{order}"),
            compare_matrices(&solved, &flipped),
        ),
        Check::from_mismatch(
            "S = Psi R e^(u/z) from the solved R",
            "flatness equations",
            "all four equations, both columns",
            flatness_mismatch(&solved)?,
        ),
        Check::from_mismatch(
            "S = Psi R e^(u/z) from the closed form",
            "flatness equations",
            "all four equations, both columns",
            flatness_mismatch(&literal)?,
        ),
    ];
    let cols = columns_from_r(&literal)?;
    let airy = cols.iter().map(|c| airy_residual(c, true)).collect::<Result<Vec<_>>>()?;
    out.push(Check::from_mismatch(
        "Airy equation for S^1 from the closed form",
        "flatness equations",
        "(z d1)^2 S^1 = phi S^1",
        airy.iter().find_map(|r| first_nonzero("Airy residual", r)),
    ));
    let control = airy_residual(&cols[0], false)?;
    out.push(if first_nonzero("", &control).is_some() {
        Check::pass("Airy equation without e^(u/z) fails", "flatness equations", "negative control is nonzero")
    } else {
        Check::fail("Airy equation without e^(u/z) fails", "flatness equations", "negative control vanished", None)
    });
    let ok = (1..=5).all(|k| {
        let t1 = int(3 * k);
        let f = spin3_structure(&t1);
        f.is_consistent()
            && f.pairing(&f.product(&[int(0), int(1)], &[int(0), int(1)]), &[int(0), int(1)])
                == potential_third_derivative(&t1)
    });
    out.push(if ok {
        Check::pass("3-spin product from the potential", "3-spin Frobenius manifold", "associative, unit e0, matches third derivative")
    } else {
        Check::fail("3-spin product from the potential", "3-spin Frobenius manifold", "product inconsistent", None)
    });
    Ok(out)
}

/// Orthonormality of normalized idempotents at `phi = s^2`, with `Delta_pm = -+2s`.
pub fn psi_orthonormal(s: &Rational) -> bool {
    let f = spin3_structure(&(s * s * int(3)));
    // columns without 1/sqrt(Delta): (-+ s, 1); pairing then divided by Delta.
    let cols = [([-s.clone(), int(1)], -s * int(2)), ([s.clone(), int(1)], s * int(2))];
    let ok_diag = cols.iter().all(|(v, d)| f.pairing(v, v) / d == int(1));
    let cross = f.pairing(&cols[0].0, &cols[1].0).is_zero();
    let eigen = cols.iter().all(|(v, _)| {
        let w = f.product(&[int(0), int(1)], v);
        // eigenvalue of e1 is the first coordinate -+ s
        w[0] == &v[0] * &v[0] && w[1] == v[0]
    });
    ok_diag && cross && eigen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let c = solve_column(-1, 3);
        assert_eq!(*c.x1.series.at(1), rat(-5, 144));
        let expect = series_a(3).rescale_var(&rat(-1, 6));
        assert_eq!(c.x1.series, expect);
        let d = solve_column(1, 3);
        assert_eq!(d.x1.series, series_a(3).rescale_var(&rat(1, 6)));
    }

    #[test]
    fn solved_r_structure() {
        let r = solve_r(6).unwrap();
        assert_eq!(*r[0][0].series.at(0), int(1));
        assert_eq!(*r[1][1].series.at(0), int(1));
        assert!(r[0][1].series.at(0).is_zero());
        assert_eq!(r[0][1].power, rat(1, 2));
        assert_eq!(r[1][0].power, rat(-1, 2));
        assert_eq!(*r[0][1].series.at(1), rat(-7, 144));
    }

    #[test]
    fn closed_form_differs_only_in_one_sign() {
        let r = solve_r(8).unwrap();
        let m = compare_matrices(&r, &displayed_r(8, false)).unwrap();
        assert_eq!(m.location, "R[0][1] at z^1");
        assert_eq!(compare_matrices(&r, &displayed_r(8, true)), None);
    }

    #[test]
    fn flatness() {
        let r = solve_r(10).unwrap();
        assert_eq!(flatness_mismatch(&r).unwrap(), None);
        assert!(flatness_mismatch(&displayed_r(10, false)).unwrap().is_some());
        assert_eq!(flatness_mismatch(&displayed_r(10, true)).unwrap(), None);
    }

    #[test]
    fn airy_and_control() {
        for order in [4, 8] {
            let cols = columns_from_r(&displayed_r(order, false)).unwrap();
            for c in &cols {
                assert!(airy_residual(c, true).unwrap().series.is_zero());
            }
            assert!(!airy_residual(&cols[0], false).unwrap().series.is_zero());
        }
    }

    #[test]
    fn frobenius_data() {
        let f = spin3_structure(&int(3));
        assert_eq!(f.product(&[int(1), int(0)], &[int(0), int(1)]), [int(0), int(1)]);
        assert_eq!(f.product(&[int(0), int(1)], &[int(0), int(1)]), [int(1), int(0)]);
        assert_eq!(potential_third_derivative(&int(6)), int(2));
        assert!(psi_orthonormal(&rat(3, 7)));
    }

    #[test]
    fn suite() {
        let checks = verify(6).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["3-spin R from flatness vs closed form", "S = Psi R e^(u/z) from the closed form"]);
    }
}
