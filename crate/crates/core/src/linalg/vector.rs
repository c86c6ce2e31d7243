use std::fmt;

use num_traits::Zero;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::ring::{parse_rational, render_rational, Rational};

/// Vector with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorQ(Vec<Rational>);

impl VectorQ {
    pub fn new(coords: Vec<Rational>) -> Self {
        VectorQ(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        VectorQ(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn parse(coords: &[String]) -> Result<Self> {
        coords
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map(VectorQ)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &VectorQ) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> VectorQ {
        VectorQ(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &VectorQ) -> VectorQ {
        VectorQ(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &VectorQ) -> VectorQ {
        VectorQ(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn render(&self) -> Vec<String> {
        self.0.iter().map(render_rational).collect()
    }
}

impl fmt::Display for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render().join(", "))
    }
}

fn common_dim(vs: &[&VectorQ]) -> Result<usize> {
    let d = vs.first().map_or(0, |v| v.dim());
    for v in vs {
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
    }
    Ok(d)
}

/// Entry `(i, j)` is the raw inner product `(v_i, v_j)`.
pub fn gram_matrix(v: &[VectorQ]) -> Result<Matrix<Rational>> {
    common_dim(&v.iter().collect::<Vec<_>>())?;
    Ok(Matrix::from_fn(v.len(), v.len(), |i, j| v[i].dot(&v[j])))
}

/// `det[(b_i, c_j)]` with no span checks. Equals `vol(b) * vol(c)` whenever
/// both lists lie in a common subspace of dimension `|b| = |c|`.
pub fn cross_gram_det(b: &[&VectorQ], c: &[&VectorQ]) -> Rational {
    let m = Matrix::from_fn(b.len(), c.len(), |i, j| b[i].dot(c[j]));
    m.determinant().expect("square cross-Gram matrix")
}

/// Rank of a list of vectors, by exact row reduction.
pub fn rank(v: &[VectorQ]) -> usize {
    let Some(d) = v.first().map(VectorQ::dim) else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = v.iter().map(|x| x.coords().to_vec()).collect();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in r + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &pivot;
            for j in col..d {
                let t = &rows[r][j] * &f;
                rows[i][j] -= t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

pub fn is_independent(v: &[VectorQ]) -> bool {
    rank(v) == v.len()
}

/// Product `vol(b) * vol(c)` of signed volumes, computed basis-free as the
/// determinant of the cross-Gram matrix. Zero when either list is dependent.
pub fn paired_volume(b: &[VectorQ], c: &[VectorQ]) -> Result<Rational> {
    let all: Vec<&VectorQ> = b.iter().chain(c).collect();
    common_dim(&all)?;
    if b.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            found: c.len(),
        });
    }
    if !is_independent(b) || !is_independent(c) {
        return Ok(Rational::zero());
    }
    let joined: Vec<VectorQ> = b.iter().chain(c).cloned().collect();
    if rank(&joined) != b.len() {
        return Err(Error::SpanMismatch);
    }
    let br: Vec<&VectorQ> = b.iter().collect();
    let cr: Vec<&VectorQ> = c.iter().collect();
    Ok(cross_gram_det(&br, &cr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn v(c: &[i64]) -> VectorQ {
        VectorQ::from_ints(c)
    }

    #[test]
    fn gram_examples() {
        assert_eq!(
            gram_matrix(&[v(&[1, 0]), v(&[0, 1])]).unwrap(),
            Matrix::identity(2)
        );
        let g = gram_matrix(&[v(&[1, -1, 0]), v(&[1, 0, -1])]).unwrap();
        assert_eq!(g.to_string(), "[[2, 1], [1, 2]]");
        assert_eq!(gram_matrix(&[v(&[3, 4])]).unwrap().to_string(), "[[25]]");
        assert!(matches!(
            gram_matrix(&[v(&[1]), v(&[1, 2])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn paired_volume_examples() {
        let e = [v(&[1, 0]), v(&[0, 1])];
        assert_eq!(paired_volume(&e, &e).unwrap(), int(1));
        let a2 = [v(&[1, -1, 0]), v(&[1, 0, -1])];
        assert_eq!(paired_volume(&a2, &a2).unwrap(), int(3));
        let swapped = [v(&[0, 1]), v(&[1, 0])];
        assert_eq!(paired_volume(&e, &swapped).unwrap(), int(-1));
    }

    #[test]
    fn paired_volume_degenerate_and_mismatch() {
        let dep = [v(&[1, 0, 0]), v(&[2, 0, 0])];
        let ok = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(paired_volume(&dep, &ok).unwrap(), int(0));
        let other = [v(&[1, 0, 0]), v(&[0, 0, 1])];
        assert!(matches!(paired_volume(&ok, &other), Err(Error::SpanMismatch)));
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 0])]), 2);
        assert_eq!(rank(&[v(&[0, 0])]), 0);
    }
}
