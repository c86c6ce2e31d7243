use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Poly, Var};
use super::rational::{to_f64, Rational};
use crate::error::{Error, Result};

/// Trial-division bound used when extracting square factors.
const TRIAL_BOUND: u64 = 100_000;

/// Exact value `coefficient * sqrt(radicand)` with a squarefree radicand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Radical {
    coefficient: Poly,
    radicand: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadicalOp {
    Multiply,
    Add,
}

/// Splits `n` as `root^2 * squarefree`.
pub fn split_square(n: &BigUint) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return Ok((BigUint::zero(), BigUint::one()));
    }
    let mut rest = n.clone();
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_BOUND {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            root *= pb.pow(e / 2);
            if e % 2 == 1 {
                free *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if p > TRIAL_BOUND {
        // Every prime factor of `rest` exceeds the bound. Below bound^3 there
        // are at most two of them, so the only square case is q^2.
        let cube = BigUint::from(TRIAL_BOUND).pow(3);
        if rest >= cube {
            return Err(Error::RadicandTooLarge(n.to_string()));
        }
        let s = rest.sqrt();
        if &s * &s == rest {
            root *= s;
            rest = BigUint::one();
        }
    }
    free *= rest;
    Ok((root, free))
}

/// Canonicalizes `c * sqrt(d_raw)` for a rational `d_raw >= 0`.
pub fn radical_normalize(c: &Rational, d_raw: &Rational) -> Result<Radical> {
    Radical::from_sqrt(Poly::constant(c.clone()), d_raw)
}

pub fn radical_combine(op: RadicalOp, a: &Radical, b: &Radical) -> Result<Radical> {
    match op {
        RadicalOp::Multiply => a.multiply(b),
        RadicalOp::Add => a.add(b),
    }
}

impl Radical {
    pub fn zero() -> Self {
        Radical {
            coefficient: Poly::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn rational(c: Poly) -> Self {
        Radical {
            coefficient: c,
            radicand: BigUint::one(),
        }
    }

    /// `c * sqrt(d_raw)`, moving square factors and the denominator of
    /// `d_raw` into the coefficient.
    pub fn from_sqrt(c: Poly, d_raw: &Rational) -> Result<Radical> {
        if d_raw.is_negative() {
            return Err(Error::NegativeRadicand(d_raw.to_string()));
        }
        if c.is_zero() || d_raw.is_zero() {
            return Ok(Radical::zero());
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let p = d_raw.numer().magnitude();
        let q = d_raw.denom().magnitude();
        let (root, free) = split_square(&(p * q))?;
        let factor = Rational::new(BigInt::from(root), BigInt::from(q.clone()));
        Ok(Radical {
            coefficient: c.scale(&factor),
            radicand: free,
        })
    }

    pub fn coefficient(&self) -> &Poly {
        &self.coefficient
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn multiply(&self, other: &Radical) -> Result<Radical> {
        let (root, free) = split_square(&(&self.radicand * &other.radicand))?;
        let c = &self.coefficient * &other.coefficient;
        let coefficient = c.scale(&Rational::from_integer(BigInt::from(root)));
        Ok(Radical::canonical(coefficient, free))
    }

    pub fn add(&self, other: &Radical) -> Result<Radical> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::MixedRadicand(
                self.radicand.to_string(),
                other.radicand.to_string(),
            ));
        }
        Ok(Radical::canonical(
            &self.coefficient + &other.coefficient,
            self.radicand.clone(),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Radical {
        Radical::canonical(self.coefficient.scale(c), self.radicand.clone())
    }

    pub fn neg(&self) -> Radical {
        self.scale(&-Rational::one())
    }

    /// `coefficient^2 * radicand`.
    pub fn square(&self) -> Poly {
        (&self.coefficient * &self.coefficient)
            .scale(&Rational::from_integer(BigInt::from(self.radicand.clone())))
    }

    /// Ratio `self / other` when it is a constant, as a radical.
    pub fn constant_ratio(&self, other: &Radical) -> Option<Radical> {
        let c = self.coefficient.constant_ratio(&other.coefficient)?;
        // sqrt(a)/sqrt(b) = sqrt(a*b)/b
        let b = Rational::from_integer(BigInt::from(other.radicand.clone()));
        let d = Rational::from_integer(BigInt::from(&self.radicand * &other.radicand));
        Radical::from_sqrt(Poly::constant(c / b), &d).ok()
    }

    pub fn to_f64<F: Fn(Var) -> Rational>(&self, value: F) -> f64 {
        let c = to_f64(&self.coefficient.evaluate(value));
        c * self.radicand.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    fn canonical(coefficient: Poly, radicand: BigUint) -> Radical {
        if coefficient.is_zero() {
            Radical::zero()
        } else {
            Radical {
                coefficient,
                radicand,
            }
        }
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            return write!(f, "{}", self.coefficient);
        }
        if self.coefficient.len() > 1 {
            write!(f, "({})*sqrt({})", self.coefficient, self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coefficient, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    fn r(c: i64, d: u64) -> Radical {
        Radical::from_sqrt(Poly::constant(int(c)), &int(d as i64)).unwrap()
    }

    #[test]
    fn multiply_same_radicand() {
        let p = radical_combine(RadicalOp::Multiply, &r(2, 3), &r(5, 3)).unwrap();
        assert_eq!(p, Radical::rational(Poly::constant(int(30))));
    }

    #[test]
    fn multiply_extracts_square() {
        // sqrt(2) * sqrt(6) = sqrt(12) = 2 sqrt(3)
        let p = r(1, 2).multiply(&r(1, 6)).unwrap();
        assert_eq!(p, r(2, 3));
        assert_eq!(p.to_string(), "2*sqrt(3)");
    }

    #[test]
    fn add_mixed_radicands_fails() {
        assert!(matches!(
            radical_combine(RadicalOp::Add, &r(1, 5), &r(1, 3)),
            Err(Error::MixedRadicand(..))
        ));
    }

    #[test]
    fn normalize_examples() {
        let a = radical_normalize(&int(1), &rat(3, 4)).unwrap();
        assert_eq!(a.coefficient(), &Poly::constant(rat(1, 2)));
        assert_eq!(a.radicand(), &BigUint::from(3u32));
        let b = radical_normalize(&int(1), &int(4)).unwrap();
        assert_eq!(b, Radical::rational(Poly::constant(int(2))));
        // (n+1)/2^n at n = 3 is 1/2, and sqrt(1/2) = sqrt(2)/2
        let c = radical_normalize(&int(1), &rat(4, 8)).unwrap();
        assert_eq!(c.coefficient(), &Poly::constant(rat(1, 2)));
        assert_eq!(c.radicand(), &BigUint::from(2u32));
        assert!(matches!(
            radical_normalize(&int(1), &int(-1)),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn zero_has_unit_radicand() {
        let z = radical_normalize(&int(0), &int(7)).unwrap();
        assert!(z.is_zero());
        assert!(z.radicand().is_one());
    }

    #[test]
    fn large_prime_cofactors() {
        // 1000003 is prime; its square must be extracted even past the
        // trial-division bound.
        let q = BigUint::from(1_000_003u64);
        let (root, free) = split_square(&(&q * &q * BigUint::from(6u32))).unwrap();
        assert_eq!(root, q);
        assert_eq!(free, BigUint::from(6u32));
        let (root, free) = split_square(&(&q * BigUint::from(1_000_033u64))).unwrap();
        assert!(root.is_one());
        assert_eq!(free, &q * BigUint::from(1_000_033u64));
    }

    #[test]
    fn ratio_of_radicals() {
        let ratio = r(3, 2).constant_ratio(&r(1, 2)).unwrap();
        assert_eq!(ratio, Radical::rational(Poly::constant(int(3))));
        let ratio = r(1, 6).constant_ratio(&r(1, 2)).unwrap();
        assert_eq!(ratio, r(1, 3));
    }
}
