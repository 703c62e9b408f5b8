//! Two-dimensional Frobenius manifolds: 3-spin and equivariant CP^1.

pub mod cp1;
pub mod spin3;

use crate::rational::Rational;

/// A rank-two Frobenius algebra at one point: metric and `e1 * e1 = a e0 + b e1`,
/// with `e0` the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frobenius2D {
    pub eta: [[Rational; 2]; 2],
    pub e1e1: [Rational; 2],
}

impl Frobenius2D {
    /// `x * y` for vectors in the basis `e0, e1`.
    pub fn product(&self, x: &[Rational; 2], y: &[Rational; 2]) -> [Rational; 2] {
        let c11 = &x[1] * &y[1];
        [&x[0] * &y[0] + &c11 * &self.e1e1[0], &x[0] * &y[1] + &x[1] * &y[0] + &c11 * &self.e1e1[1]]
    }

    pub fn pairing(&self, x: &[Rational; 2], y: &[Rational; 2]) -> Rational {
        let mut acc = Rational::from_integer(0.into());
        for i in 0..2 {
            for j in 0..2 {
                acc += &x[i] * &self.eta[i][j] * &y[j];
            }
        }
        acc
    }

    /// Associativity on basis triples and the Frobenius property `eta(xy, w) = eta(x, yw)`.
    pub fn is_consistent(&self) -> bool {
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        let basis = [[one.clone(), zero.clone()], [zero, one]];
        for x in &basis {
            for y in &basis {
                for w in &basis {
                    let l = self.product(&self.product(x, y), w);
                    let r = self.product(x, &self.product(y, w));
                    if l != r || self.pairing(&self.product(x, y), w) != self.pairing(x, &self.product(y, w)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
