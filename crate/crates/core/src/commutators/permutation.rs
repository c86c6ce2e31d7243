use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::ring::Rational;

/// How a product `σρ` of permutations acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `(σρ)(i) = σ(ρ(i))`: the right factor is applied first.
    RightFirst,
    /// `(σρ)(i) = ρ(σ(i))`: the left factor is applied first.
    LeftFirst,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::RightFirst => "right-first",
            Convention::LeftFirst => "left-first",
        }
    }

    pub fn opposite(self) -> Convention {
        match self {
            Convention::RightFirst => Convention::LeftFirst,
            Convention::LeftFirst => Convention::RightFirst,
        }
    }
}

/// Permutation of `0..k`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    /// The cycle `1 -> 2 -> ... -> l -> 1` on `k` points (0-based: `0 -> 1 -> ... -> l-1 -> 0`).
    pub fn tau(k: usize, l: usize) -> Self {
        assert!(1 <= l && l <= k);
        let mut images: Vec<usize> = (0..k).collect();
        for (i, img) in images.iter_mut().enumerate().take(l) {
            *img = (i + 1) % l;
        }
        Permutation(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn compose(&self, other: &Permutation, conv: Convention) -> Permutation {
        let (first, second) = match conv {
            Convention::RightFirst => (other, self),
            Convention::LeftFirst => (self, other),
        };
        Permutation(first.0.iter().map(|&i| second.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.0.len()];
        let mut s = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", imgs.join(","))
    }
}

/// Formal rational combination of permutations of `k` points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupAlgebraElement {
    coefficients: BTreeMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: Permutation) -> Self {
        Self::term(p, Rational::from_integer(1.into()))
    }

    pub fn term(p: Permutation, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(p, c);
        out
    }

    pub fn add_term(&mut self, p: Permutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coefficients.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coefficients.remove(&p);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.coefficients {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.coefficients {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self, conv: Convention) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.coefficients {
            for (q, b) in &other.coefficients {
                out.add_term(p.compose(q, conv), a * b);
            }
        }
        out
    }

    pub fn coefficient(&self, p: &Permutation) -> Rational {
        self.coefficients.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Rational)> {
        self.coefficients.iter()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Expands `x_k = -2^k (τ_k - 1)(τ_{k-1} - 1)...(τ_2 - 1)` in the group
/// algebra of `S_k`, multiplying out under `conv`.
pub fn x_coefficients(k: usize, conv: Convention) -> GroupAlgebraElement {
    assert!(k >= 2, "x_k is defined for k >= 2");
    let one = Rational::from_integer(1.into());
    let id = Permutation::identity(k);
    let mut acc = GroupAlgebraElement::basis(id.clone());
    for l in (2..=k).rev() {
        let mut factor = GroupAlgebraElement::basis(Permutation::tau(k, l));
        factor.add_term(id.clone(), -one.clone());
        acc = acc.mul(&factor, conv);
    }
    acc.scale(&-crate::ring::pow2(k as i64))
}
