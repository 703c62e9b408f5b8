//! The Faber-Zagier series, its constants and the kappa relations they produce.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kappa::{KappaPolynomial, KappaTermJson};
use crate::named::hypergeometric_integer;
use crate::rational::{format_rational, int, rat, Rational};
use crate::series::{Alphabet, MultiSeries};

/// A partition with no part congruent to 2 modulo 3, parts sorted increasingly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FzPartition(Vec<u32>);

impl FzPartition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if let Some(p) = parts.iter().find(|&&p| p == 0 || p % 3 == 2) {
            return Err(Error::Domain(format!("part {p} is zero or congruent to 2 mod 3")));
        }
        parts.sort_unstable();
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multiplicity of part `j`.
    pub fn count(&self, j: u32) -> u32 {
        self.0.iter().filter(|&&p| p == j).count() as u32
    }

    /// All admissible partitions of size at most `max`.
    pub fn up_to(max: u32) -> Vec<Self> {
        fn rec(left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<FzPartition>) {
            out.push(FzPartition(cur.clone()));
            for p in min..=left {
                if p % 3 == 2 {
                    continue;
                }
                cur.push(p);
                rec(left - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(max, 1, &mut Vec::new(), &mut out);
        out.sort_by_key(|s| (s.size(), s.0.clone()));
        out
    }
}

impl FromStr for FzPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("partition part {x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for FzPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// The admissible `p` indices up to `max`.
pub fn p_indices(max: u32) -> Vec<u32> {
    (1..=max).filter(|j| j % 3 != 2).collect()
}

/// Alphabet `t, p_1, p_3, p_4, ...` with `t` weighing more than every `p`-monomial kept.
fn psi_alphabet(p_weight_max: u32) -> Arc<Alphabet> {
    let tw = p_weight_max + 1;
    let mut v = vec![("t".to_string(), tw)];
    v.extend(p_indices(p_weight_max).into_iter().map(|j| (format!("p{j}"), j)));
    Alphabet::new(v).expect("positive weights")
}

/// `Psi(t, p)` with every coefficient of `t^r p^sigma`, `r <= t_order`,
/// `|sigma| <= p_weight_max` exact.
pub fn build_psi(t_order: u32, p_weight_max: u32) -> MultiSeries {
    let a = psi_alphabet(p_weight_max);
    let tw = (p_weight_max + 1) as i64;
    let order = t_order as i64 * tw + p_weight_max as i64;
    let first = |i: u32| hypergeometric_integer(i as u64);
    let second = |i: u32| hypergeometric_integer(i as u64) * rat(6 * i as i64 + 1, 6 * i as i64 - 1);
    let mut psi = MultiSeries::zero(&a, order);
    // (1 + t p3 + t^2 p6 + ...) times the first sum, (p1 + t p4 + ...) times the second.
    for i in 0..=t_order {
        let mut e = vec![0; a.len()];
        e[0] = i;
        psi.add_term(e, first(i));
    }
    for (slot, &j) in p_indices(p_weight_max).iter().enumerate() {
        let shift = j / 3;
        let sum: &dyn Fn(u32) -> Rational = if j % 3 == 0 { &first } else { &second };
        for i in 0..=t_order.saturating_sub(shift) {
            let mut e = vec![0; a.len()];
            e[0] = i + shift;
            e[slot + 1] = 1;
            psi.add_term(e, sum(i));
        }
    }
    psi
}

/// `log Psi` with the same exactness range as [`build_psi`].
pub fn log_psi(t_order: u32, p_weight_max: u32) -> Result<MultiSeries> {
    build_psi(t_order, p_weight_max).log()
}

fn psi_exps(a: &Alphabet, r: u32, sigma: &FzPartition) -> Vec<u32> {
    let mut e = vec![0; a.len()];
    e[0] = r;
    for &j in sigma.parts() {
        let i = a.index(&format!("p{j}")).expect("p index within alphabet");
        e[i] += 1;
    }
    e
}

/// `C_r(sigma)`: the coefficient of `t^r p^sigma` in `log Psi`.
pub fn fz_constant(r: u32, sigma: &FzPartition) -> Result<Rational> {
    let l = log_psi(r, sigma.size())?;
    l.coeff(&psi_exps(l.alphabet(), r, sigma))
}

/// Reads `C_r(sigma)` from an already computed `log Psi`.
pub fn fz_constant_in(log: &MultiSeries, r: u32, sigma: &FzPartition) -> Result<Rational> {
    let a = log.alphabet();
    let pmax = a.weight(0) - 1;
    if sigma.size() > pmax {
        return Err(Error::OutOfRange(format!("|sigma| = {} exceeds p-weight {pmax}", sigma.size())));
    }
    log.coeff(&psi_exps(a, r, sigma))
}

/// Checks both validity conditions, naming the first one that fails.
pub fn validity(g: u32, r: u32, sigma: &FzPartition) -> Result<()> {
    let lhs = g as i64 - 1 + sigma.size() as i64;
    if lhs >= 3 * r as i64 {
        return Err(Error::NotARelation(format!(
            "g - 1 + |sigma| < 3r fails: {lhs} < {} is false",
            3 * r
        )));
    }
    if (g as i64 - (r + sigma.size() + 1) as i64).rem_euclid(2) != 0 {
        return Err(Error::NotARelation(format!(
            "g = r + |sigma| + 1 mod 2 fails: {g} vs {}",
            r + sigma.size() + 1
        )));
    }
    Ok(())
}

/// `[exp(-gamma)]_{t^r p^sigma}` with `kappa_0 = 2g - 2`, without the validity check.
pub fn fz_coefficient(g: u32, r: u32, sigma: &FzPartition) -> Result<KappaPolynomial> {
    let pmax = sigma.size();
    let log = log_psi(r, pmax)?;
    let ps = p_indices(pmax);
    // y_k stands for kappa_k t^k; it keeps the t-weight of t^k.
    let tw = pmax + 1;
    let mut v: Vec<(String, u32)> = (1..=r).map(|k| (format!("y{k}"), k * tw)).collect();
    v.extend(ps.iter().map(|j| (format!("p{j}"), *j)));
    let ya = Alphabet::new(v)?;
    let order = (r * tw + pmax) as i64;
    let kappa0 = int(2 * g as i64 - 2);
    let mut gamma = MultiSeries::zero(&ya, order);
    for (e, c) in log.terms() {
        let k = e[0];
        if k > r {
            continue;
        }
        let mut y = vec![0; ya.len()];
        y[r as usize..].copy_from_slice(&e[1..]);
        let c = if k == 0 {
            c * &kappa0
        } else {
            y[k as usize - 1] = 1;
            c.clone()
        };
        gamma.add_term(y, c);
    }
    let ex = gamma.neg().exp()?;
    let mut target_p = vec![0u32; ps.len()];
    for &j in sigma.parts() {
        target_p[ps.iter().position(|&x| x == j).expect("part within range")] += 1;
    }
    let mut out = KappaPolynomial::zero();
    for (e, c) in ex.terms() {
        let (ys, p) = e.split_at(r as usize);
        if p != target_p.as_slice() {
            continue;
        }
        let deg: u32 = ys.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum();
        if deg == r {
            out.add_term(ys.to_vec(), c.clone());
        }
    }
    Ok(out)
}

/// The Faber-Zagier relation for `(g, r, sigma)`, after the validity check.
pub fn fz_relation(g: u32, r: u32, sigma: &FzPartition) -> Result<KappaPolynomial> {
    validity(g, r, sigma)?;
    fz_coefficient(g, r, sigma)
}

/// One row of a relation table.
#[derive(Clone, Debug, Serialize)]
pub struct FzRow {
    pub g: u32,
    pub r: u32,
    pub sigma: Vec<u32>,
    pub relation: Vec<KappaTermJson>,
    pub display: String,
}

/// All valid relations with `g <= gmax`, `r <= rmax` and `|sigma| < 3r - g + 1`.
pub fn fz_table(gmax: u32, rmax: u32) -> Result<Vec<FzRow>> {
    let mut jobs = Vec::new();
    for g in 0..=gmax {
        for r in 1..=rmax {
            let bound = (3 * r + 1).saturating_sub(g + 1);
            for sigma in FzPartition::up_to(bound) {
                if validity(g, r, &sigma).is_ok() {
                    jobs.push((g, r, sigma));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(g, r, sigma)| {
            let rel = fz_coefficient(*g, *r, sigma)?;
            Ok(FzRow {
                g: *g,
                r: *r,
                sigma: sigma.parts().to_vec(),
                relation: rel.to_json(),
                display: rel.to_string(),
            })
        })
        .collect()
}

/// Human form of a constant, for tables.
pub fn format_constant(r: u32, sigma: &FzPartition) -> Result<String> {
    Ok(format!("C_{r}{sigma} = {}", format_rational(&fz_constant(r, sigma)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn sig(s: &str) -> FzPartition {
        s.parse().unwrap()
    }

    #[test]
    fn psi_coefficients() {
        let psi = build_psi(3, 4);
        assert!(psi.constant_term().is_one());
        assert_eq!(psi.coeff_named(&[("t", 1)]).unwrap(), int(60));
        assert_eq!(psi.coeff_named(&[("p1", 1)]).unwrap(), int(-1));
        assert_eq!(psi.coeff_named(&[("t", 1), ("p3", 1)]).unwrap(), int(1));
        assert_eq!(psi.coeff_named(&[("t", 2), ("p4", 1)]).unwrap(), int(84));
        assert_eq!(psi.coeff_named(&[("t", 2)]).unwrap(), int(27720));
    }

    #[test]
    fn constants() {
        assert!(fz_constant(0, &FzPartition::empty()).unwrap().is_zero());
        assert_eq!(fz_constant(1, &FzPartition::empty()).unwrap(), int(60));
        assert_eq!(fz_constant(0, &sig("1")).unwrap(), int(-1));
        assert_eq!(fz_constant(2, &FzPartition::empty()).unwrap(), int(27720 - 1800));
    }

    #[test]
    fn log_round_trip() {
        let psi = build_psi(4, 6);
        assert_eq!(psi.log().unwrap().exp().unwrap(), psi);
    }

    #[test]
    fn validity_errors() {
        assert!(matches!(fz_relation(4, 1, &FzPartition::empty()), Err(Error::NotARelation(m)) if m.contains("3r")));
        assert!(matches!(fz_relation(5, 2, &sig("1,1")), Err(Error::NotARelation(_))));
        assert!(matches!(fz_relation(3, 2, &sig("1")), Err(Error::NotARelation(m)) if m.contains("mod 2")));
        assert!("2".parse::<FzPartition>().is_err());
    }

    #[test]
    fn genus_three_codimension_two() {
        let rel = fz_relation(3, 2, &FzPartition::empty()).unwrap();
        let mut expect = KappaPolynomial::kappa(1).mul(&KappaPolynomial::kappa(1)).scale(&int(1800));
        expect = expect.add(&KappaPolynomial::kappa(2).scale(&int(-25920)));
        assert_eq!(rel, expect);
        assert_eq!(rel.homogeneous_degree(), Some(2));
    }

    #[test]
    fn kappa_zero_enters_through_sigma() {
        let a = fz_coefficient(2, 1, &sig("1")).unwrap();
        let b = fz_coefficient(4, 1, &sig("1")).unwrap();
        assert_ne!(a, b);
        let e = FzPartition::empty();
        assert_eq!(fz_coefficient(1, 3, &e).unwrap(), fz_coefficient(3, 3, &e).unwrap());
    }

    #[test]
    fn table_is_graded() {
        for row in fz_table(4, 3).unwrap() {
            for t in &row.relation {
                let d: u32 = t.kappa.iter().enumerate().map(|(i, &p)| (i as u32 + 1) * p).sum();
                assert_eq!(d, row.r, "{row:?}");
            }
        }
    }
}
