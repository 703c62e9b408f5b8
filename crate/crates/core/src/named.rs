//! The named hypergeometric series and the identities relating them.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, format_rational, from_bigint, int, rat, Rational};
use crate::report::{Check, Mismatch};
use crate::series::PowerSeries;

/// Which named series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesTag {
    A,
    B,
    CalA,
    CalB,
    H0,
    H1,
    D,
    Stirling,
    Phi,
}

impl FromStr for SeriesTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => SeriesTag::A,
            "B" => SeriesTag::B,
            "calA" => SeriesTag::CalA,
            "calB" => SeriesTag::CalB,
            "H0" => SeriesTag::H0,
            "H1" => SeriesTag::H1,
            "D" => SeriesTag::D,
            "Stirling" => SeriesTag::Stirling,
            "Phi" => SeriesTag::Phi,
            _ => return Err(Error::Parse(format!("unknown series name {s}"))),
        })
    }
}

impl fmt::Display for SeriesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesTag::A => "A",
            SeriesTag::B => "B",
            SeriesTag::CalA => "calA",
            SeriesTag::CalB => "calB",
            SeriesTag::H0 => "H0",
            SeriesTag::H1 => "H1",
            SeriesTag::D => "D",
            SeriesTag::Stirling => "Stirling",
            SeriesTag::Phi => "Phi",
        };
        f.write_str(s)
    }
}

impl SeriesTag {
    /// Name of the series variable.
    pub fn var(&self) -> &'static str {
        match self {
            SeriesTag::A | SeriesTag::B => "z",
            SeriesTag::CalA | SeriesTag::CalB | SeriesTag::D => "x",
            SeriesTag::H0 | SeriesTag::H1 => "T",
            SeriesTag::Stirling => "w",
            SeriesTag::Phi => "q",
        }
    }
}

/// `(6i)! / ((3i)! (2i)!)`.
pub fn hypergeometric_integer(i: u64) -> Rational {
    from_bigint(factorial(6 * i) / (factorial(3 * i) * factorial(2 * i)))
}

/// Coefficient `A_i = (6i)! / ((3i)! (2i)! 288^i)`.
pub fn a_coeff(i: u64) -> Rational {
    hypergeometric_integer(i) / from_bigint(num_bigint::BigInt::from(288u32).pow(i as u32))
}

/// Coefficient `B_i = A_i (6i+1)/(6i-1)`.
pub fn b_coeff(i: u64) -> Rational {
    a_coeff(i) * rat(6 * i as i64 + 1, 6 * i as i64 - 1)
}

pub fn series_a(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| a_coeff(i as u64))
}

pub fn series_b(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| b_coeff(i as u64))
}

fn sign(j: u64) -> Rational {
    if j.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `a_j = (-1)^j A_j`, the coefficient of `x^{3j}` in `calA(x) = A(-x^3)`.
pub fn cal_a_coeff(j: u64) -> Rational {
    sign(j) * a_coeff(j)
}

/// `b_j = -(6j+1)/(6j-1) a_j`, so that `-calB(x) = sum b_j x^{3j}`.
pub fn cal_b_coeff(j: u64) -> Rational {
    -cal_a_coeff(j) * rat(6 * j as i64 + 1, 6 * j as i64 - 1)
}

/// `calA(x) = A(-x^3)` as an `x`-series with explicit zeros off multiples of 3.
pub fn series_cal_a(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| if k % 3 == 0 { cal_a_coeff(k as u64 / 3) } else { Rational::zero() })
}

/// `calB(x) = B(-x^3)`.
pub fn series_cal_b(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| if k % 3 == 0 { -cal_b_coeff(k as u64 / 3) } else { Rational::zero() })
}

/// `H0(T) = A(-288 T)`.
pub fn series_h0(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| sign(i as u64) * hypergeometric_integer(i as u64))
}

/// `H1(T) = -B(-288 T)`.
pub fn series_h1(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| {
        let i = i as u64;
        -sign(i) * hypergeometric_integer(i) * rat(6 * i as i64 + 1, 6 * i as i64 - 1)
    })
}

/// `d_n = sum_{i=0}^n 3^i |a_{n-i}| prod_{k=1}^i (n + 1/2 - k)`.
pub fn d_coeff(n: u64) -> Rational {
    let mut total = Rational::zero();
    let mut prod = Rational::one();
    let mut pow3 = Rational::one();
    for i in 0..=n {
        if i > 0 {
            prod *= int(n as i64) + rat(1, 2) - int(i as i64);
            pow3 *= int(3);
        }
        total += &pow3 * a_coeff(n - i) * &prod;
    }
    total
}

/// `D(x) = 1 + sum_{i>=1} d_i x^{3i}`, through `x^order`.
pub fn series_d(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| if k % 3 == 0 { d_coeff(k as u64 / 3) } else { Rational::zero() })
}

/// The unique series `C` with `(-x^4 d/dx - (3/2) x^3 + 1) C = calA(-x)`.
pub fn series_d_from_ode(order: usize) -> PowerSeries {
    let rhs = series_cal_a(order).rescale_var(&int(-1));
    let mut c: Vec<Rational> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        // c_m - (m-3) c_{m-3} - (3/2) c_{m-3} = rhs_m
        let mut v = rhs.at(m).clone();
        if m >= 3 {
            v += &c[m - 3] * (int(m as i64) - rat(3, 2));
        }
        c.push(v);
    }
    PowerSeries::from_coeffs(c)
}

/// `Phi(z, q)` at rational `(lambda, z)`: coefficient of `q^d` is
/// `prod_{i=1}^d 1 / ((i z - lambda) i z)`.
pub fn series_phi(order: usize, lambda: &Rational, z: &Rational) -> Result<PowerSeries> {
    let mut c = vec![Rational::one()];
    for i in 1..=order {
        let iz = z * int(i as i64);
        let den = (&iz - lambda) * &iz;
        if den.is_zero() {
            return Err(Error::Specialization(format!(
                "denominator (iz - lambda) iz vanishes at i = {i} for lambda = {}, z = {}",
                format_rational(lambda),
                format_rational(z)
            )));
        }
        let prev = c[i - 1].clone();
        c.push(prev / den);
    }
    Ok(PowerSeries::from_coeffs(c))
}

/// Bernoulli numbers `B_0..=B_n` from `x / (e^x - 1)`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += from_bigint(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap()
}

/// `sum_{i>=1} B_{2i} / (2i (2i-1)) w^{2i-1}` through `w^order`.
pub fn stirling_series(order: usize) -> PowerSeries {
    let b = bernoulli_table(order + 1);
    PowerSeries::from_fn(order, |k| {
        if k % 2 == 1 {
            let two_i = k as i64 + 1;
            &b[two_i as usize] / int(two_i * (two_i - 1))
        } else {
            Rational::zero()
        }
    })
}

/// Builds a named series. `Phi` needs `(lambda, z)`.
pub fn named_series(tag: SeriesTag, order: usize, phi_at: Option<(&Rational, &Rational)>) -> Result<PowerSeries> {
    Ok(match tag {
        SeriesTag::A => series_a(order),
        SeriesTag::B => series_b(order),
        SeriesTag::CalA => series_cal_a(order),
        SeriesTag::CalB => series_cal_b(order),
        SeriesTag::H0 => series_h0(order),
        SeriesTag::H1 => series_h1(order),
        SeriesTag::D => series_d(order),
        SeriesTag::Stirling => stirling_series(order),
        SeriesTag::Phi => {
            let (l, z) = phi_at.ok_or_else(|| Error::Domain("Phi requires --lambda and --z".into()))?;
            series_phi(order, l, z)?
        }
    })
}

/// First coefficient where `computed` and `expected` differ, up to the common order.
pub fn first_mismatch(var: &str, computed: &PowerSeries, expected: &PowerSeries) -> Option<Mismatch> {
    let n = computed.order().min(expected.order());
    (0..=n).find(|&k| computed.at(k) != expected.at(k)).map(|k| Mismatch {
        location: format!("{var}^{k}"),
        expected: format_rational(expected.at(k)),
        computed: format_rational(computed.at(k)),
    })
}

/// `3z^2 A' + (z/2 - 1) A - B`, through `z^order`.
pub fn ode_ab_residual(order: usize) -> PowerSeries {
    let a = series_a(order + 1);
    let da = a.derivative();
    let a = a.truncate(order);
    let term1 = PowerSeries::monomial(2, int(3), order) * da;
    let coef = PowerSeries::from_coeffs(vec![int(-1), rat(1, 2)]);
    let term2 = &PowerSeries::from_coeffs({
        let mut v = coef.coeffs().to_vec();
        v.resize(order + 1, Rational::zero());
        v
    }) * &a;
    &(&term1 + &term2) - &series_b(order)
}

/// `3z^2 A'' + (6z - 2) A' + (5/12) A`, through `z^order`.
pub fn ode_hypergeometric_residual(order: usize) -> PowerSeries {
    let a = series_a(order + 2);
    let d1 = a.derivative();
    let d2 = d1.derivative();
    let mut lin = vec![Rational::zero(); order + 1];
    lin[0] = int(-2);
    if order >= 1 {
        lin[1] = int(6);
    }
    let t1 = PowerSeries::monomial(2, int(3), order) * d2.truncate(order);
    let t2 = PowerSeries::from_coeffs(lin) * d1.truncate(order);
    let t3 = a.truncate(order).scale(&rat(5, 12));
    &(&t1 + &t2) + &t3
}

/// `H0(T) H1(-T) + H0(-T) H1(T)`, through `T^order`.
pub fn reflection_sum(order: usize) -> PowerSeries {
    let h0 = series_h0(order);
    let h1 = series_h1(order);
    let m = int(-1);
    &(&h0 * &h1.rescale_var(&m)) + &(&h0.rescale_var(&m) * &h1)
}

/// `theta^2 Phi - lambda theta Phi - q Phi` with `theta = z q d/dq`, through `q^order`.
pub fn phi_ode_residual(order: usize, lambda: &Rational, z: &Rational) -> Result<PowerSeries> {
    let phi = series_phi(order, lambda, z)?;
    let theta = |s: &PowerSeries| PowerSeries::from_fn(s.order(), |d| s.at(d) * z * int(d as i64));
    let t1 = theta(&phi);
    let t2 = theta(&t1);
    let qphi = phi.shift_up(1).truncate(order);
    Ok(&(&t2 - &t1.scale(lambda)) - &qphi)
}

/// Runs the identity suite of this module at the given order.
pub fn verify_identities(order: usize, samples: &[(Rational, Rational)]) -> Vec<Check> {
    let mut out = Vec::new();
    let zero = PowerSeries::zero(order);
    out.push(Check::from_mismatch(
        "A/B first-order ODE",
        "A/B differential equations",
        format!("3z^2A' + (z/2-1)A - B = 0 through z^{order}"),
        first_mismatch("z", &ode_ab_residual(order), &zero),
    ));
    out.push(Check::from_mismatch(
        "A hypergeometric ODE",
        "A/B differential equations",
        format!("3z^2A'' + (6z-2)A' + (5/12)A = 0 through z^{order}"),
        first_mismatch("z", &ode_hypergeometric_residual(order), &zero),
    ));
    out.push(Check::from_mismatch(
        "H0/H1 reflection",
        "relation series H0/H1",
        format!("H0(T)H1(-T) + H0(-T)H1(T) = 2 through T^{order}"),
        first_mismatch("T", &reflection_sum(order), &PowerSeries::constant(int(2), order)),
    ));
    let printed = [
        (series_h0(2), [int(1), int(-60), int(27720)], "H0"),
        (series_h1(2), [int(1), int(84), int(-32760)], "H1"),
    ];
    for (s, expect, name) in printed {
        out.push(Check::from_mismatch(
            format!("{name} printed coefficients"),
            "relation series H0/H1",
            "first three coefficients",
            first_mismatch("T", &s, &PowerSeries::from_coeffs(expect.to_vec())),
        ));
    }
    let x_order = 3 * order.min(10);
    out.push(Check::from_mismatch(
        "D closed form vs ODE",
        "D series",
        format!("d_n closed form equals the ODE solution through x^{x_order}"),
        first_mismatch("x", &series_d(x_order), &series_d_from_ode(x_order)),
    ));
    for (l, z) in samples {
        let detail = format!("theta^2 Phi - lambda theta Phi = q Phi at lambda={}, z={}", format_rational(l), format_rational(z));
        match phi_ode_residual(order.min(15), l, z) {
            Ok(r) => out.push(Check::from_mismatch(
                "Phi ODE",
                "CP1 flatness",
                detail,
                first_mismatch("q", &r, &PowerSeries::zero(r.order())),
            )),
            Err(e) => out.push(Check::fail("Phi ODE", "CP1 flatness", format!("{detail}: {e}"), None)),
        }
    }
    out
}

/// Random admissible `(lambda, z)` pairs for the `Phi` checks.
pub fn sample_phi_points(seed: u64, count: usize, order: usize) -> Vec<(Rational, Rational)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let l = rat(rng.gen_range(-40..=40), rng.gen_range(1..=9));
        let z = rat(rng.gen_range(-40..=40), rng.gen_range(1..=9));
        if series_phi(order, &l, &z).is_ok() {
            pts.push((l, z));
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients() {
        assert_eq!(a_coeff(0), int(1));
        assert_eq!(a_coeff(1), rat(5, 24));
        assert_eq!(b_coeff(1), rat(7, 24));
        assert_eq!(cal_a_coeff(1), rat(-5, 24));
        assert_eq!(cal_b_coeff(0), int(1));
        assert_eq!(cal_b_coeff(1), rat(7, 24));
        // 12! / (288^2 4! 6!) = 479001600 / (82944 * 24 * 720)
        assert_eq!(cal_a_coeff(2), rat(385, 1152));
        assert_eq!(series_cal_b(3).at(3), &rat(-7, 24));
    }

    #[test]
    fn h_series_prefixes() {
        assert_eq!(series_h0(2).coeffs(), &[int(1), int(-60), int(27720)]);
        assert_eq!(series_h1(2).coeffs(), &[int(1), int(84), int(-32760)]);
    }

    #[test]
    fn d_numbers() {
        assert_eq!(d_coeff(0), int(1));
        // |a_1| + 3 (1 + 1/2 - 1) |a_0| = 5/24 + 3/2
        assert_eq!(d_coeff(1), rat(41, 24));
        assert_ne!(d_coeff(1), rat(113, 24));
        assert_eq!(series_d(21), series_d_from_ode(21));
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_table(4);
        assert_eq!(b, vec![int(1), rat(-1, 2), rat(1, 6), int(0), rat(-1, 30)]);
        assert_eq!(stirling_series(3).at(1), &rat(1, 12));
        assert_eq!(stirling_series(3).at(3), &rat(-1, 360));
    }

    #[test]
    fn phi_specialization() {
        let phi = series_phi(3, &int(2), &int(3)).unwrap();
        assert_eq!(phi.at(0), &int(1));
        assert_eq!(phi.at(1), &rat(1, 3));
        assert!(matches!(series_phi(2, &int(1), &int(1)), Err(Error::Specialization(_))));
    }

    #[test]
    fn identity_suite_passes() {
        let pts = sample_phi_points(7, 5, 15);
        let checks = verify_identities(30, &pts);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }
}
