//! Sparse multivariate polynomials with rational coefficients.
//!
//! Indeterminates are weights named by a kind and a multi-index, such as
//! `w[1,2,1]`. Terms live in a `BTreeMap` keyed by canonical monomials, so
//! iteration order (and therefore the printed form) is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{render_rational, Rational};

pub const MAX_INDEX_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// Plain weight `w[..]`.
    W,
    /// Weight of a `+` root of the B/D families, printed `wp[..]`.
    WPlus,
    /// Weight of a `-` root of the B/D families, printed `wm[..]`.
    WMinus,
}

impl VarKind {
    fn prefix(self) -> &'static str {
        match self {
            VarKind::W => "w",
            VarKind::WPlus => "wp",
            VarKind::WMinus => "wm",
        }
    }
}

/// A weight indeterminate. Indices are stored as bytes, which is plenty for
/// desk-scale systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    kind: VarKind,
    len: u8,
    idx: [u8; MAX_INDEX_LEN],
}

impl Var {
    pub fn new(kind: VarKind, index: &[usize]) -> Self {
        assert!(
            index.len() <= MAX_INDEX_LEN,
            "multi-index longer than {MAX_INDEX_LEN}"
        );
        let mut idx = [0u8; MAX_INDEX_LEN];
        for (slot, &i) in idx.iter_mut().zip(index) {
            *slot = u8::try_from(i).expect("weight index exceeds 255");
        }
        Var {
            kind,
            len: index.len() as u8,
            idx,
        }
    }

    pub fn w(index: &[usize]) -> Self {
        Var::new(VarKind::W, index)
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn index(&self) -> Vec<usize> {
        self.idx[..self.len as usize]
            .iter()
            .map(|&i| i as usize)
            .collect()
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.kind.cmp(&other.kind).then_with(|| {
            self.idx[..self.len as usize].cmp(&other.idx[..other.len as usize])
        })
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.kind.prefix())?;
        for (n, i) in self.idx[..self.len as usize].iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

/// Product of powers of variables, sorted by variable with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut m = SmallVec::new();
        m.push((v, 1));
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Poly { terms }
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value if this polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * p`
    pub fn add_scaled(&mut self, p: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &p.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitutes a value for every variable.
    pub fn evaluate<F: Fn(Var) -> Rational>(&self, value: F) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = value(v);
                for _ in 0..e {
                    t *= &x;
                }
            }
            total += t;
        }
        total
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Returns `c` with `self == c * other`, if such a rational exists.
    /// `None` when `other` is zero (unless both are zero, which is also `None`).
    pub fn constant_ratio(&self, other: &Poly) -> Option<Rational> {
        let (m, b) = other.terms.iter().next()?;
        let a = self.terms.get(m)?;
        let c = a / b;
        if self.terms.len() == other.terms.len() && other.scale(&c) == *self {
            Some(c)
        } else {
            None
        }
    }

    /// Canonical text form: terms in monomial order, `c*w[..]` with unit
    /// coefficients omitted.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&render_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", render_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut out = Poly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    fn w(i: &[usize]) -> Poly {
        Poly::var(Var::w(i))
    }

    #[test]
    fn annihilator() {
        let a = &w(&[1]) + &w(&[2]);
        assert!((&a * &Poly::zero()).is_zero());
    }

    #[test]
    fn monomial_product() {
        let p = &w(&[1]) * &w(&[2]);
        assert_eq!(p.len(), 1);
        let (m, c) = p.terms().next().unwrap();
        assert_eq!(c, &int(1));
        assert_eq!(m.to_string(), "w[1]*w[2]");
    }

    #[test]
    fn difference_of_squares() {
        // (w1 - w2)(w1 + w2) = w1^2 - w2^2, expanded by hand.
        let p = &(&w(&[1]) - &w(&[2])) * &(&w(&[1]) + &w(&[2]));
        let expected = &w(&[1]).pow(2) - &w(&[2]).pow(2);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "w[1]^2 - w[2]^2");
    }

    #[test]
    fn rendering_is_sorted_and_signed() {
        let p = &(&w(&[2, 1]).scale(&int(-4)) + &w(&[1, 2]).scale(&int(4))) + &Poly::constant(rat(1, 2));
        assert_eq!(p.to_string(), "1/2 + 4*w[1,2] - 4*w[2,1]");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-&w(&[3])).to_string(), "-w[3]");
    }

    #[test]
    fn var_order_is_numeric() {
        assert!(Var::w(&[2]) < Var::w(&[10]));
        assert!(Var::w(&[1, 2]) < Var::w(&[1, 2, 1]));
        assert!(Var::w(&[9]) < Var::new(VarKind::WPlus, &[1]));
    }

    #[test]
    fn constant_ratio_detects_proportionality() {
        let a = &w(&[1]) - &w(&[2]);
        let b = a.scale(&rat(-3, 7));
        assert_eq!(b.constant_ratio(&a), Some(rat(-3, 7)));
        let c = &a + &w(&[3]);
        assert_eq!(c.constant_ratio(&a), None);
        assert_eq!(a.constant_ratio(&Poly::zero()), None);
    }

    #[test]
    fn evaluate_substitutes() {
        let p = &(&w(&[1]) * &w(&[1])) - &w(&[2]).scale(&int(3));
        let v = p.evaluate(|v| if v == Var::w(&[1]) { int(2) } else { rat(1, 3) });
        assert_eq!(v, int(3));
    }
}
