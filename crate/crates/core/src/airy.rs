//! Multiple-precision evaluation of the Airy function and its asymptotic expansion.
//!
//! Values follow the normalization `Ai(x) = int_0^inf cos(t^3/3 + x t) dt`, which is
//! `pi` times the classical function; [`classical`] divides that factor out.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::named::{bernoulli_table, cal_a_coeff, cal_b_coeff};
use crate::rational::{format_rational, Rational};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision in bits plus the constant cache.
pub struct Ctx {
    pub p: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Domain(format!("float context: {e:?}")))?;
        Ok(Ctx { p, cc })
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        n.div(&d, self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }
    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }
    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }
    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.p, RM, &mut self.cc)
    }
    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }
    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }
    /// `a^(num/den)` for positive `a`.
    pub fn pow_frac(&mut self, a: &BigFloat, num: i64, den: i64) -> BigFloat {
        let e = self.div(&self.int(num), &self.int(den));
        let l = self.ln(a);
        let m = self.mul(&l, &e);
        self.exp(&m)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn decimal(&mut self, a: &BigFloat, digits: usize) -> String {
        to_decimal(a, digits, &mut self.cc)
    }
}

/// Renders `a` in scientific notation with `digits` significant digits.
pub fn to_decimal(a: &BigFloat, digits: usize, cc: &mut Consts) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let s = match a.format(Radix::Dec, RM, cc) {
        Ok(s) => s,
        Err(_) => return "NaN".into(),
    };
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s.as_str(), 0),
    };
    let (sign, mant) = if let Some(m) = mant.strip_prefix('-') { ("-", m) } else { ("", mant) };
    // Normalize to d.ddd with an adjusted exponent.
    let int_len = mant.find('.').unwrap_or(mant.len()) as i64;
    let all: String = mant.chars().filter(|c| *c != '.').collect();
    let lead = all.chars().take_while(|c| *c == '0').count();
    let sig: String = all[lead..].chars().take(digits).collect();
    if sig.is_empty() {
        return "0".into();
    }
    let e10 = exp + int_len - 1 - lead as i64;
    let (head, tail) = sig.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

/// Approximate `f64` view, for reporting ratios and error magnitudes.
pub fn to_f64(a: &BigFloat) -> f64 {
    let mut cc = match Consts::new() {
        Ok(c) => c,
        Err(_) => return f64::NAN,
    };
    to_decimal(a, 20, &mut cc).parse().unwrap_or(f64::NAN)
}

fn check_args(x: &Rational, bits: usize) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Domain(format!(
            "Airy evaluation needs x > 0, got {} (the oscillatory regime is not supported)",
            format_rational(x)
        )));
    }
    if bits < 64 {
        return Err(Error::Domain(format!("precision must be at least 64 bits, got {bits}")));
    }
    Ok(())
}

/// A quadrature value together with its error estimate.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: BigFloat,
    pub error: BigFloat,
    pub panels: usize,
    pub nodes: usize,
    pub cutoff: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(ctx: &mut Ctx, m: usize) -> Vec<(BigFloat, BigFloat)> {
    let one = ctx.int(1);
    let two = ctx.int(2);
    let mut out = Vec::with_capacity(m);
    for i in 1..=m {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (m as f64 + 0.5)).cos();
        let mut x = BigFloat::from_f64(guess, ctx.p);
        let mut dp = one.clone();
        for _ in 0..64 {
            // P_m(x) and P_{m-1}(x) by the three-term recurrence.
            let (mut p0, mut p1) = (one.clone(), x.clone());
            for k in 2..=m {
                let kk = ctx.int(k as i64);
                let a = ctx.mul(&ctx.mul(&ctx.int(2 * k as i64 - 1), &x), &p1);
                let b = ctx.mul(&ctx.int(k as i64 - 1), &p0);
                let p2 = ctx.div(&ctx.sub(&a, &b), &kk);
                p0 = p1;
                p1 = p2;
            }
            let x2m1 = ctx.sub(&ctx.mul(&x, &x), &one);
            dp = ctx.div(&ctx.mul(&ctx.int(m as i64), &ctx.sub(&ctx.mul(&x, &p1), &p0)), &x2m1);
            let dx = ctx.div(&p1, &dp);
            x = ctx.sub(&x, &dx);
            let small = dx.is_zero() || dx.exponent().map(|e| (e as i64) < -(ctx.p as i64) + 4).unwrap_or(true);
            if small {
                break;
            }
        }
        let w = ctx.div(&two, &ctx.mul(&ctx.sub(&one, &ctx.mul(&x, &x)), &ctx.mul(&dp, &dp)));
        out.push((x, w));
    }
    out
}

fn composite_gl(
    ctx: &mut Ctx,
    rules: &[Vec<(BigFloat, BigFloat)>],
    breaks: &[f64],
    f: &mut dyn FnMut(&mut Ctx, &BigFloat) -> BigFloat,
) -> Vec<BigFloat> {
    let mut totals: Vec<BigFloat> = rules.iter().map(|_| ctx.int(0)).collect();
    for w in breaks.windows(2) {
        let lo = BigFloat::from_f64(w[0], ctx.p);
        let hi = BigFloat::from_f64(w[1], ctx.p);
        let half = ctx.div(&ctx.sub(&hi, &lo), &ctx.int(2));
        let mid = ctx.add(&lo, &half);
        for (rule, total) in rules.iter().zip(totals.iter_mut()) {
            let mut s = ctx.int(0);
            for (node, wt) in rule {
                let t = ctx.add(&mid, &ctx.mul(&half, node));
                let v = f(ctx, &t);
                s = ctx.add(&s, &ctx.mul(wt, &v));
            }
            *total = ctx.add(total, &ctx.mul(&s, &half));
        }
    }
    totals
}

/// Panel boundaries on `[0, cutoff]`: width at most 1 and at most `step`
/// radians of the phase `c t^3` per panel.
fn panel_breaks(c: f64, cutoff: f64, step: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut t = 0.0;
    while t < cutoff {
        let speed = 3.0 * c * t * t;
        let h = if speed > 0.0 { (step / speed).min(1.0) } else { 1.0 };
        t = (t + h).min(cutoff);
        out.push(t);
    }
    out
}

/// Quadrature of the Gaussian-deformed integral representation of `Ai(x)`
/// (or `Ai'(x)` when `prime` is set), in the integral normalization.
///
/// The error estimate combines the difference between two Gauss-Legendre orders
/// on the same panels with the Gaussian tail bound beyond the cutoff.
pub fn airy_quadrature(x: &Rational, prime: bool, bits: usize) -> Result<Quadrature> {
    check_args(x, bits)?;
    let mut ctx = Ctx::new(bits + 64)?;
    let xb = ctx.rational(x);
    let x14 = ctx.pow_frac(&xb, 1, 4);
    let sqrt2 = ctx.sqrt(&ctx.int(2));
    // c = x^{-3/4} / (6 sqrt 2)
    let x34 = ctx.mul(&ctx.mul(&x14, &x14), &x14);
    let c = ctx.div(&ctx.int(1), &ctx.mul(&x34, &ctx.mul(&ctx.int(6), &sqrt2)));
    let cf = to_f64(&c);
    let target_bits = bits / 2 + 24;
    let cutoff = (2.0 * target_bits as f64 * std::f64::consts::LN_2).sqrt() + 1.0;
    let m = (bits / 5).max(16);
    let rules = vec![gauss_legendre(&mut ctx, m), gauss_legendre(&mut ctx, m - 6)];
    let breaks = panel_breaks(cf, cutoff, 1.5);
    let sqrtx = ctx.mul(&x14, &x14);
    let scale = ctx.mul(&sqrt2, &x14);
    // Both integrands are even in t, so integrate over [0, cutoff] and double.
    let mut integrand = |ctx: &mut Ctx, t: &BigFloat| -> BigFloat {
        let t2 = ctx.mul(t, t);
        let gauss = ctx.exp(&ctx.div(&t2, &ctx.int(-2)));
        let phase = ctx.mul(&c, &ctx.mul(&t2, t));
        if prime {
            // Re[(i t / (sqrt2 x^{1/4}) - sqrt x) e^{i phase}]
            let s = ctx.sin(&phase);
            let co = ctx.cos(&phase);
            let a = ctx.div(&ctx.mul(t, &s), &scale);
            let b = ctx.mul(&sqrtx, &co);
            ctx.mul(&gauss, &ctx.add(&a, &b)).neg()
        } else {
            let co = ctx.cos(&phase);
            ctx.mul(&gauss, &co)
        }
    };
    let sums = composite_gl(&mut ctx, &rules, &breaks, &mut integrand);
    let fine = ctx.mul(&sums[0], &ctx.int(2));
    let coarse = ctx.mul(&sums[1], &ctx.int(2));
    // prefactor e^{-2/3 x^{3/2}} x^{-1/4} / (2 sqrt 2)
    let zeta = ctx.div(&ctx.mul(&ctx.int(2), &ctx.mul(&sqrtx, &xb)), &ctx.int(3));
    let ez = ctx.exp(&zeta.neg());
    let pref = ctx.div(&ez, &ctx.mul(&x14, &ctx.mul(&ctx.int(2), &sqrt2)));
    let value = ctx.mul(&pref, &fine);
    let diff = ctx.mul(&pref, &ctx.sub(&fine, &coarse)).abs();
    let tail_weight = if prime { cutoff * 2.0 + to_f64(&sqrtx) * 2.0 } else { 2.0 };
    let tail = BigFloat::from_f64(tail_weight * (-cutoff * cutoff / 2.0).exp(), ctx.p);
    let error = ctx.add(&diff, &ctx.mul(&pref.abs(), &tail));
    Ok(Quadrature { value, error, panels: breaks.len() - 1, nodes: m, cutoff })
}

/// `ln Gamma(z)` for `z > 0` by upward shift and the Stirling series.
pub fn ln_gamma(ctx: &mut Ctx, z: &BigFloat) -> BigFloat {
    let shift = ctx.p as i64;
    let mut w = z.clone();
    let mut prod = ctx.int(1);
    for _ in 0..shift {
        prod = ctx.mul(&prod, &w);
        w = ctx.add(&w, &ctx.int(1));
    }
    let half = ctx.div(&ctx.int(1), &ctx.int(2));
    let lw = ctx.ln(&w);
    let pi = ctx.pi();
    let two_pi = ctx.mul(&ctx.int(2), &pi);
    let mut acc = ctx.sub(&ctx.mul(&ctx.sub(&w, &half), &lw), &w);
    let l2pi = ctx.ln(&two_pi);
    acc = ctx.add(&acc, &ctx.mul(&half, &l2pi));
    let terms = 40usize;
    let b = bernoulli_table(2 * terms);
    let w2 = ctx.mul(&w, &w);
    let mut wpow = w.clone();
    for i in 1..=terms {
        let coeff = &b[2 * i] / Rational::from_integer(((2 * i) * (2 * i - 1)).into());
        let cb = ctx.rational(&coeff);
        acc = ctx.add(&acc, &ctx.div(&cb, &wpow));
        wpow = ctx.mul(&wpow, &w2);
    }
    let lp = ctx.ln(&prod);
    ctx.sub(&acc, &lp)
}

/// Maclaurin-series evaluation of `Ai(x)` (or `Ai'(x)`) in the integral
/// normalization, at enough working precision to absorb cancellation.
pub fn airy_series(x: &Rational, prime: bool, bits: usize) -> Result<BigFloat> {
    check_args(x, bits)?;
    let xf = x.to_string().parse::<f64>().unwrap_or_else(|_| {
        let n: f64 = x.numer().to_string().parse().unwrap_or(f64::MAX);
        let d: f64 = x.denom().to_string().parse().unwrap_or(1.0);
        n / d
    });
    let extra = (4.0 / 3.0) * xf.powf(1.5) * std::f64::consts::LOG2_E;
    let wp = bits + extra.ceil() as usize + 64;
    let mut ctx = Ctx::new(wp)?;
    let xb = ctx.rational(x);
    let third = ctx.div(&ctx.int(1), &ctx.int(3));
    let two_third = ctx.div(&ctx.int(2), &ctx.int(3));
    let g13 = {
        let l = ln_gamma(&mut ctx, &third);
        ctx.exp(&l)
    };
    let g23 = {
        let l = ln_gamma(&mut ctx, &two_third);
        ctx.exp(&l)
    };
    let three = ctx.int(3);
    let p23 = ctx.pow_frac(&three, 2, 3);
    let p13 = ctx.pow_frac(&three, 1, 3);
    let c1 = ctx.div(&ctx.int(1), &ctx.mul(&p23, &g23));
    let c2 = ctx.div(&ctx.int(1), &ctx.mul(&p13, &g13));
    // y = sum a_n x^n, a_{n+2} = a_{n-1} / ((n+2)(n+1)).
    let mut a: Vec<BigFloat> = vec![c1, c2.neg(), ctx.int(0)];
    let mut sum = ctx.int(0);
    let mut xp = ctx.int(1);
    let mut n = 0usize;
    let mut small_run = 0;
    loop {
        if n >= 3 {
            let v = ctx.div(&a[n - 3], &ctx.int(((n) * (n - 1)) as i64));
            a.push(v);
        }
        let term = if prime {
            if n == 0 {
                ctx.int(0)
            } else {
                // n a_n x^{n-1}; xp holds x^{n-1}
                ctx.mul(&ctx.mul(&ctx.int(n as i64), &a[n]), &xp)
            }
        } else {
            ctx.mul(&a[n], &xp)
        };
        sum = ctx.add(&sum, &term);
        if prime && n == 0 {
            // keep xp = x^0 for n = 1
        } else {
            xp = ctx.mul(&xp, &xb);
        }
        let negligible = term.is_zero()
            || match (term.exponent(), sum.exponent()) {
                (Some(te), Some(se)) => (te as i64) < (se as i64) - (wp as i64),
                _ => false,
            };
        small_run = if negligible && (n as f64) > xf { small_run + 1 } else { 0 };
        if small_run >= 3 {
            break;
        }
        n += 1;
        if n > 100_000 {
            return Err(Error::Domain("Maclaurin series failed to converge".into()));
        }
    }
    let pi = ctx.pi();
    let out = ctx.mul(&sum, &pi);
    let mut r = out.clone();
    r.set_precision(bits + 64, RM).ok();
    Ok(r)
}

/// Classical normalization: divides the integral normalization by `pi`.
pub fn classical(v: &BigFloat, bits: usize) -> Result<BigFloat> {
    let mut ctx = Ctx::new(bits + 64)?;
    let pi = ctx.pi();
    Ok(ctx.div(v, &pi))
}

/// Term `j` of the asymptotic series, prefactor included:
/// `(sqrt pi / 2) x^{-/+1/4} e^{-2/3 x^{3/2}} c_j (x^{-3/2}/2)^j`
/// with `c_j = a_j` for `Ai` and `-b_j` for `Ai'`.
pub fn asymptotic_term(x: &Rational, j: u64, prime: bool, bits: usize) -> Result<BigFloat> {
    check_args(x, bits)?;
    let mut ctx = Ctx::new(bits + 64)?;
    let pref = prefactor(&mut ctx, x, prime);
    let cj = if prime { -cal_b_coeff(j) } else { cal_a_coeff(j) };
    let y3 = ctx.rational(x);
    let x32 = ctx.mul(&y3, &ctx.sqrt(&y3));
    let base = ctx.div(&ctx.int(1), &ctx.mul(&ctx.int(2), &x32));
    let pw = base.powi(j as usize, ctx.p, RM);
    let cb = ctx.rational(&cj);
    Ok(ctx.mul(&pref, &ctx.mul(&cb, &pw)))
}

fn prefactor(ctx: &mut Ctx, x: &Rational, prime: bool) -> BigFloat {
    let xb = ctx.rational(x);
    let x14 = ctx.pow_frac(&xb, 1, 4);
    let sqrtx = ctx.sqrt(&xb);
    let zeta = ctx.div(&ctx.mul(&ctx.int(2), &ctx.mul(&sqrtx, &xb)), &ctx.int(3));
    let ez = ctx.exp(&zeta.neg());
    let pi = ctx.pi();
    let sp = ctx.div(&ctx.sqrt(&pi), &ctx.int(2));
    let power = if prime { x14 } else { ctx.div(&ctx.int(1), &x14) };
    ctx.mul(&ctx.mul(&sp, &power), &ez)
}

/// Asymptotic series truncated after the `x^{-3k/2}` term.
pub fn airy_asymptotic(x: &Rational, k: u64, prime: bool, bits: usize) -> Result<BigFloat> {
    let ctx = Ctx::new(bits + 64)?;
    let mut acc = ctx.int(0);
    for j in 0..=k {
        let t = asymptotic_term(x, j, prime, bits)?;
        acc = ctx.add(&acc, &t);
    }
    Ok(acc)
}

/// Comparison of a numeric evaluation against one truncation of the asymptotic series.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub x: String,
    pub terms: u64,
    pub prime: bool,
    pub precision_bits: usize,
    pub numeric: String,
    pub numeric_classical: String,
    pub quadrature_error_bound: String,
    pub series_oracle: String,
    pub oracle_agreement_digits: f64,
    pub asymptotic: String,
    pub abs_error: String,
    pub rel_error: String,
    pub first_omitted_term: String,
    pub envelope_ok: bool,
}

/// Number of agreeing significant decimal digits between `a` and `b`.
pub fn agreement_digits(a: &BigFloat, b: &BigFloat, bits: usize) -> Result<f64> {
    let ctx = Ctx::new(bits + 64)?;
    let d = ctx.sub(a, b).abs();
    if d.is_zero() {
        return Ok(bits as f64 * std::f64::consts::LOG10_2);
    }
    let r = ctx.div(&d, &a.abs());
    let e = r.exponent().unwrap_or(0) as f64;
    // r lies in [2^{e-1}, 2^e)
    let mant = to_f64(&ctx.div(&r, &BigFloat::from_f64(2f64.powf(e), ctx.p)));
    Ok(-(e * std::f64::consts::LOG10_2 + mant.log10()))
}

pub fn asymptotic_report(x: &Rational, k: u64, prime: bool, bits: usize) -> Result<AsymptoticReport> {
    Ok(asymptotic_reports(x, k..=k, prime, bits)?.remove(0))
}

/// Reports for several truncations, sharing one evaluation of each numeric oracle.
pub fn asymptotic_reports(
    x: &Rational,
    ks: std::ops::RangeInclusive<u64>,
    prime: bool,
    bits: usize,
) -> Result<Vec<AsymptoticReport>> {
    let q = airy_quadrature(x, prime, bits)?;
    let series = airy_series(x, prime, bits)?;
    let mut ctx = Ctx::new(bits + 64)?;
    let agreement = agreement_digits(&q.value, &series, bits)?;
    let classical_v = classical(&q.value, bits)?;
    let digits = 30;
    let mut out = Vec::new();
    for k in ks {
        let asym = airy_asymptotic(x, k, prime, bits)?;
        let omitted = asymptotic_term(x, k + 1, prime, bits)?.abs();
        let abs_err = ctx.sub(&q.value, &asym).abs();
        let rel = ctx.div(&abs_err, &q.value.abs());
        let bound = ctx.mul(&ctx.int(2), &omitted);
        let envelope_ok = abs_err.cmp(&bound).map(|c| c <= 0).unwrap_or(false);
        out.push(AsymptoticReport {
            x: format_rational(x),
            terms: k,
            prime,
            precision_bits: bits,
            numeric: ctx.decimal(&q.value, digits),
            numeric_classical: ctx.decimal(&classical_v, digits),
            quadrature_error_bound: ctx.decimal(&q.error, 6),
            series_oracle: ctx.decimal(&series, digits),
            oracle_agreement_digits: agreement,
            asymptotic: ctx.decimal(&asym, digits),
            abs_error: ctx.decimal(&abs_err, 10),
            rel_error: ctx.decimal(&rel, 10),
            first_omitted_term: ctx.decimal(&omitted, 10),
            envelope_ok,
        });
    }
    Ok(out)
}

/// Parses a positive decimal or fraction as an exact rational.
pub fn parse_x(s: &str) -> Result<Rational> {
    let x = crate::rational::parse_rational(s)?;
    if x.is_zero() || x.is_negative() {
        return Err(Error::Domain(format!("Airy evaluation needs x > 0, got {s}")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn classical_values() {
        let v = airy_quadrature(&int(10), false, 128).unwrap();
        let c = to_f64(&classical(&v.value, 128).unwrap());
        assert!((c / 1.1047532552898687e-10 - 1.0).abs() < 1e-12, "{c}");
        let rel = to_f64(&v.error) / to_f64(&v.value);
        assert!(rel < 2f64.powi(-64), "{rel}");
        let v1 = airy_series(&int(1), false, 128).unwrap();
        let c1 = to_f64(&classical(&v1, 128).unwrap());
        assert!((c1 - 0.1352924163128814).abs() < 1e-14, "{c1}");
    }

    #[test]
    fn oracles_agree() {
        for x in [int(1), int(5), rat(7, 2)] {
            for prime in [false, true] {
                let q = airy_quadrature(&x, prime, 128).unwrap();
                let s = airy_series(&x, prime, 128).unwrap();
                let d = agreement_digits(&q.value, &s, 128).unwrap();
                assert!(d > 15.0, "x={x} prime={prime} digits={d}");
            }
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(airy_quadrature(&int(-1), false, 128), Err(Error::Domain(_))));
        assert!(matches!(airy_series(&int(0), false, 128), Err(Error::Domain(_))));
        assert!(airy_quadrature(&int(1), false, 32).is_err());
    }

    #[test]
    fn first_correction_at_ten() {
        // k = 1 correction factor 1 - (5/24) / (2 * 10^{3/2})
        let k0 = to_f64(&airy_asymptotic(&int(10), 0, false, 128).unwrap());
        let k1 = to_f64(&airy_asymptotic(&int(10), 1, false, 128).unwrap());
        let expect = 1.0 - 5.0 / (48.0 * 1000f64.sqrt());
        assert!((k1 / k0 - expect).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        let mut ctx = Ctx::new(128).unwrap();
        let v = ctx.rational(&rat(1, 8));
        assert_eq!(ctx.decimal(&v, 3), "1.25e-1");
        let w = ctx.rational(&rat(-12345, 1));
        assert_eq!(ctx.decimal(&w, 3), "-1.23e4");
    }
}
