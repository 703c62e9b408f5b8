//! Specializations of `exp(F^c)` to the matrix-model times and the determinantal formula.

use num_traits::Zero;

use crate::closed::ClosedPotential;
use crate::error::{Error, Result};
use crate::named::{first_mismatch, series_cal_a, series_cal_b};
use crate::rational::{double_factorial, format_rational, from_bigint, int, rat, Rational};
use crate::report::{Check, Mismatch};
use crate::series::{Alphabet, Bivariate, MultiSeries, PowerSeries};

/// `-(2i-1)!!` times the given image of `y^{2i+1}`.
fn times_image(i: usize, y_pow: MultiSeries) -> MultiSeries {
    y_pow.scale(&-from_bigint(double_factorial(2 * i as i64 - 1)))
}

/// `exp(F^c)` at `t_i = -(2i-1)!! y^{2i+1}`, through `y^order`.
pub fn specialize_airy(order: usize) -> Result<PowerSeries> {
    let pot = ClosedPotential::weighted(order as u32);
    specialize_with(&pot, order)
}

/// Same as [`specialize_airy`] on a prebuilt weighted potential.
pub fn specialize_with(pot: &ClosedPotential, order: usize) -> Result<PowerSeries> {
    if pot.grading != crate::closed::Grading::Weighted || pot.order < order as i64 {
        return Err(Error::OutOfRange(format!(
            "potential known through weighted degree {} but order {order} requested",
            pot.order
        )));
    }
    let ya = Alphabet::new([("y".to_string(), 1)])?;
    let ord = order as i64;
    let images: Vec<MultiSeries> = (0..pot.alphabet().len())
        .map(|i| times_image(i, MultiSeries::monomial(&ya, vec![2 * i as u32 + 1], int(1), ord)))
        .collect();
    let sub = pot.total().substitute(&images, &ya, ord)?;
    let e = sub.exp()?;
    Ok(PowerSeries::from_fn(order, |k| e.coeff(&[k as u32]).unwrap_or_else(|_| Rational::zero())))
}

/// Left side for `N = 2`: `exp(F^c)` at `t_i = -(2i-1)!! (x_1^{2i+1} + x_2^{2i+1})`.
pub fn determinant_lhs(order: usize) -> Result<Bivariate> {
    let pot = ClosedPotential::weighted(order as u32);
    let xa = Alphabet::new([("x1".to_string(), 1), ("x2".to_string(), 1)])?;
    let ord = order as i64;
    let images: Vec<MultiSeries> = (0..pot.alphabet().len())
        .map(|i| {
            let p = 2 * i as u32 + 1;
            let s = MultiSeries::monomial(&xa, vec![p, 0], int(1), ord)
                .add(&MultiSeries::monomial(&xa, vec![0, p], int(1), ord));
            times_image(i, s)
        })
        .collect();
    let e = pot.total().substitute(&images, &xa, ord)?.exp()?;
    Bivariate::from_multi(&e)
}

/// Right side for `N = 2` in `x_j = 1/Lambda_j`:
/// `[x_1 A(x_1) g(x_2) - x_2 A(x_2) g(x_1)] / (x_1 - x_2)` with `g = -calB`,
/// which is the determinant of `(D_j^{i-1} calA)` over the Vandermonde.
pub fn determinant_rhs(order: usize) -> Result<Bivariate> {
    let top = order + 1;
    let a = series_cal_a(top);
    let g = series_cal_b(top).scale(&int(-1));
    let xa = a.shift_up(1).truncate(top);
    let num = &Bivariate::outer(&xa, &g, top) - &Bivariate::outer(&g, &xa, top);
    num.divide_linear(&int(1), &int(-1))
}

/// `calA + x^4 calA' + (x^3/2) calA + calB`, which vanishes: the operator `D`
/// in `x = 1/Lambda` sends `calA` to `-calB / x`.
pub fn d_operator_residual(order: usize) -> PowerSeries {
    let a = series_cal_a(order + 1);
    let da = a.derivative();
    let a = a.truncate(order);
    let t1 = PowerSeries::monomial(4, int(1), order) * da;
    let t2 = PowerSeries::monomial(3, rat(1, 2), order) * a.clone();
    &(&(&a + &t1) + &t2) + &series_cal_b(order)
}

fn bivariate_mismatch(lhs: &Bivariate, rhs: &Bivariate) -> Option<Mismatch> {
    let n = lhs.order().min(rhs.order());
    for d in 0..=n {
        for i in 0..=d {
            let (l, r) = (lhs.coeff(i, d - i), rhs.coeff(i, d - i));
            if l != r {
                return Some(Mismatch {
                    location: format!("x1^{i} x2^{}", d - i),
                    expected: format_rational(&r),
                    computed: format_rational(&l),
                });
            }
        }
    }
    None
}

/// Checks for the matrix-model specializations.
pub fn verify(order_n1: usize, order_n2: usize) -> Vec<Check> {
    let mut out = Vec::new();
    match specialize_airy(order_n1) {
        Ok(s) => out.push(Check::from_mismatch(
            "Airy specialization (N = 1)",
            "matrix model, N = 1",
            format!("exp(F^c) at t_i = -(2i-1)!! y^(2i+1) equals calA(y) through y^{order_n1}"),
            first_mismatch("y", &s, &series_cal_a(order_n1)),
        )),
        Err(e) => out.push(Check::fail("Airy specialization (N = 1)", "matrix model, N = 1", e.to_string(), None)),
    }
    out.push(Check::from_mismatch(
        "operator D on calA",
        "matrix model determinant",
        format!("D calA = -calB / x through x^{}", order_n1),
        first_mismatch("x", &d_operator_residual(order_n1), &PowerSeries::zero(order_n1)),
    ));
    let pair = determinant_lhs(order_n2).and_then(|l| determinant_rhs(order_n2).map(|r| (l, r)));
    match pair {
        Ok((l, r)) => {
            out.push(Check::from_mismatch(
                "determinantal formula (N = 2)",
                "matrix model determinant",
                format!("both sides agree through total degree {order_n2} after exact Vandermonde division"),
                bivariate_mismatch(&l, &r),
            ));
            out.push(Check::from_mismatch(
                "determinant symmetry",
                "matrix model determinant",
                "ratio invariant under Lambda_1 <-> Lambda_2",
                bivariate_mismatch(&r, &r.swap()),
            ));
        }
        Err(e) => out.push(Check::fail("determinantal formula (N = 2)", "matrix model determinant", e.to_string(), None)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_specialization_prefix() {
        let s = specialize_airy(6).unwrap();
        assert_eq!(s.at(0), &int(1));
        assert_eq!(s.at(3), &rat(-5, 24));
        assert_eq!(s.at(6), &rat(385, 1152));
        assert!(s.at(1).is_zero() && s.at(2).is_zero());
    }

    #[test]
    fn small_determinant() {
        for c in verify(9, 5) {
            assert!(c.passed, "{c:?}");
        }
    }
}
