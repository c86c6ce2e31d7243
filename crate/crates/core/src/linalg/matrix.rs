use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Poly, Rational, RingElement};

/// Dense row-major matrix over an exact ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElement> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: RingElement, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.get(k, j)));
            }
            acc
        }))
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(other, T::add)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(other, T::sub)
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(T::neg)
    }

    fn zip_with(&self, other: &Matrix<T>, f: fn(&T, &T) -> T) -> Result<Matrix<T>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (0..i).all(|j| self.get(i, j).add(self.get(j, i)).is_zero())
            })
    }

    /// Drops row and column `index`.
    pub fn principal_submatrix(&self, index: usize) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if index >= self.rows {
            return Err(Error::Index {
                index,
                size: self.rows,
            });
        }
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != index).collect();
        Ok(Matrix::from_fn(keep.len(), keep.len(), |i, j| {
            self.get(keep[i], keep[j]).clone()
        }))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Cofactor expansion for sizes up to 4; larger matrices go through
    /// fraction-free elimination when the ring supports the exact divisions,
    /// and fall back to expansion otherwise.
    pub fn determinant(&self) -> Result<T> {
        self.require_square()?;
        if self.rows <= 4 {
            return self.det_cofactor();
        }
        match self.det_bareiss()? {
            Some(d) => Ok(d),
            None => self.det_cofactor(),
        }
    }

    /// Laplace expansion along successive rows, sharing minors between
    /// branches (one minor per column subset).
    pub fn det_cofactor(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        assert!(n < 24, "cofactor expansion limited to small matrices");
        // minors[mask]: determinant of the bottom popcount(mask) rows restricted
        // to the columns in mask.
        let mut minors: HashMap<u32, T> = HashMap::new();
        minors.insert(0, T::one());
        let mut layer: Vec<u32> = vec![0];
        for r in (0..n).rev() {
            let mut next: Vec<u32> = Vec::new();
            let mut fresh: HashMap<u32, T> = HashMap::new();
            for &mask in &layer {
                for c in 0..n {
                    if mask & (1 << c) != 0 {
                        continue;
                    }
                    let full = mask | (1 << c);
                    if fresh.contains_key(&full) {
                        continue;
                    }
                    let mut acc = T::zero();
                    let mut pos = 0usize;
                    for cc in 0..n {
                        if full & (1 << cc) == 0 {
                            continue;
                        }
                        let a = self.get(r, cc);
                        if !a.is_zero() {
                            let minor = &minors[&(full & !(1 << cc))];
                            if !minor.is_zero() {
                                let t = a.mul(minor);
                                acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                            }
                        }
                        pos += 1;
                    }
                    fresh.insert(full, acc);
                    next.push(full);
                }
            }
            minors = fresh;
            layer = next;
        }
        Ok(minors.remove(&((1u32 << n) - 1)).expect("full minor computed"))
    }

    /// Fraction-free (Bareiss) elimination. Returns `Ok(None)` when some
    /// required division is not available in the ring.
    pub fn det_bareiss(&self) -> Result<Option<T>> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Some(T::one()));
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign_flip = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[idx(r, k)].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(r, j));
                        }
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(Some(T::zero())),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[idx(i, j)]
                        .mul(&a[idx(k, k)])
                        .sub(&a[idx(i, k)].mul(&a[idx(k, j)]));
                    match num.exact_quotient(&prev) {
                        Some(q) => a[idx(i, j)] = q,
                        None => return Ok(None),
                    }
                }
            }
            prev = a[idx(k, k)].clone();
        }
        let d = a[idx(n - 1, n - 1)].clone();
        Ok(Some(if sign_flip { d.neg() } else { d }))
    }

    /// Pfaffian by expansion along the first row, with the convention
    /// `Pf([[0, a], [-a, 0]]) = a`.
    pub fn pfaffian(&self) -> Result<T> {
        self.require_square()?;
        if self.rows % 2 == 1 {
            return Err(Error::OddSize(self.rows));
        }
        if !self.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        assert!(self.rows <= 30, "Pfaffian expansion limited to small matrices");
        let mut memo = HashMap::new();
        Ok(self.pf_subset((1u32 << self.rows).wrapping_sub(1), &mut memo))
    }

    fn pf_subset(&self, mask: u32, memo: &mut HashMap<u32, T>) -> T {
        if mask == 0 {
            return T::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = T::zero();
        let mut pos = 0usize;
        for j in i + 1..self.rows {
            if rest & (1 << j) == 0 {
                continue;
            }
            let a = self.get(i, j);
            if !a.is_zero() {
                let sub = self.pf_subset(rest & !(1 << j), memo);
                if !sub.is_zero() {
                    let t = a.mul(&sub);
                    acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

impl Matrix<Rational> {
    pub fn to_poly(&self) -> Matrix<Poly> {
        self.map(|r| Poly::constant(r.clone()))
    }
}

impl<T: RingElement> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&self.get(i, j).render())?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Pfaffian of a small skew-symmetric floating-point matrix.
pub fn pfaffian_f64(m: &[Vec<f64>]) -> f64 {
    fn rec(m: &[Vec<f64>], idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 1.0;
        }
        let i = idx[0];
        let mut acc = 0.0;
        for (pos, &j) in idx.iter().enumerate().skip(1) {
            let rest: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&x| x != i && x != j)
                .collect();
            let t = m[i][j] * rec(m, &rest);
            if pos % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..m.len()).collect();
    rec(m, &idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat, Var};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(Matrix::<Rational>::identity(3).determinant().unwrap(), int(1));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).determinant().unwrap(), int(-1));
        // tridiagonal 1 / (1/2) at n = 3: (n+1)/2^n = 1/2
        let t = Matrix::from_fn(3, 3, |i, j| match i.abs_diff(j) {
            0 => int(1),
            1 => rat(1, 2),
            _ => int(0),
        });
        assert_eq!(t.determinant().unwrap(), rat(1, 2));
    }

    #[test]
    fn non_square_is_an_error() {
        let m = Matrix::<Rational>::zeros(2, 3);
        assert!(matches!(m.determinant(), Err(Error::NonSquare { .. })));
        assert!(matches!(m.pfaffian(), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn pfaffian_conventions() {
        let a = Poly::var(Var::w(&[1]));
        let m = Matrix::from_rows(vec![vec![Poly::zero(), a.clone()], vec![-&a, Poly::zero()]])
            .unwrap();
        assert_eq!(m.pfaffian().unwrap(), a);

        let v = |i: usize, j: usize| Poly::var(Var::w(&[i, j]));
        let m4 = Matrix::from_fn(4, 4, |i, j| {
            if i < j {
                v(i, j)
            } else if i > j {
                -v(j, i)
            } else {
                Poly::zero()
            }
        });
        let expected = &(&(&v(0, 1) * &v(2, 3)) - &(&v(0, 2) * &v(1, 3))) + &(&v(0, 3) * &v(1, 2));
        assert_eq!(m4.pfaffian().unwrap(), expected);
        assert_eq!(m4.pfaffian().unwrap().pow(2), m4.determinant().unwrap());
    }

    #[test]
    fn pfaffian_errors() {
        assert!(matches!(
            Matrix::<Rational>::zeros(3, 3).pfaffian(),
            Err(Error::OddSize(3))
        ));
        assert!(matches!(
            q(&[&[0, 1], &[1, 0]]).pfaffian(),
            Err(Error::NotSkewSymmetric)
        ));
    }

    #[test]
    fn principal_submatrix_drops_row_and_column() {
        let m = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.principal_submatrix(0).unwrap(), q(&[&[4]]));
        assert_eq!(
            Matrix::<Rational>::identity(3).principal_submatrix(1).unwrap(),
            Matrix::identity(2)
        );
        assert!(matches!(m.principal_submatrix(2), Err(Error::Index { .. })));
    }

    #[test]
    fn bareiss_pivots_on_zero() {
        let m = q(&[
            &[0, 2, 1, 0, 3],
            &[1, 0, 0, 2, 1],
            &[0, 1, 0, 0, 1],
            &[2, 0, 1, 1, 0],
            &[1, 1, 1, 1, 1],
        ]);
        assert_eq!(m.det_bareiss().unwrap().unwrap(), m.det_cofactor().unwrap());
    }

    #[test]
    fn float_pfaffian_matches_exact() {
        let m = q(&[&[0, 1, 2, 3], &[-1, 0, 4, 5], &[-2, -4, 0, 6], &[-3, -5, -6, 0]]);
        let f: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| crate::ring::to_f64(m.get(i, j))).collect())
            .collect();
        assert_eq!(pfaffian_f64(&f), crate::ring::to_f64(&m.pfaffian().unwrap()));
    }
}
