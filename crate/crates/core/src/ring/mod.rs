//! Exact scalars: rationals, sparse polynomials over the rationals in weight
//! indeterminates, and square-root values with squarefree radicands.

mod poly;
mod radical;
mod rational;

pub use poly::{Monomial, Poly, Var, VarKind, MAX_INDEX_LEN};
pub use radical::{radical_combine, radical_normalize, split_square, Radical, RadicalOp};
pub use rational::{int, parse_rational, pow2, rat, render_rational, sign, to_f64, Rational};

use std::fmt::Debug;

use num_traits::{One, Zero};

/// Commutative ring operations needed by the matrix routines.
pub trait RingElement: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `self / divisor` when the quotient is known to be exact and cheap
    /// to compute; `None` otherwise.
    fn exact_quotient(&self, divisor: &Self) -> Option<Self>;
    fn render(&self) -> String;
}

impl RingElement for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn exact_quotient(&self, divisor: &Self) -> Option<Self> {
        if Zero::is_zero(divisor) {
            None
        } else {
            Some(self / divisor)
        }
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

impl RingElement for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        Poly::constant(r.clone())
    }
    fn exact_quotient(&self, divisor: &Self) -> Option<Self> {
        let c = divisor.as_constant()?;
        if Zero::is_zero(&c) {
            None
        } else {
            Some(self.scale(&c.recip()))
        }
    }
    fn render(&self) -> String {
        self.to_string()
    }
}
