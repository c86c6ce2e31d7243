use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::vector::{gram_matrix, is_independent, paired_volume, rank, VectorQ};
use crate::error::{Error, Result};
use crate::ring::{sign, to_f64, Poly, Radical, Rational};
use crate::system::VectorSystem;

/// Signed volume of the raw vectors `b`, with the sign fixed by the
/// system's reference basis. Zero for dependent `b`.
pub fn oriented_volume(b: &[VectorQ], system: &VectorSystem) -> Result<Radical> {
    if b.len() != system.span_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.span_dim(),
            found: b.len(),
        });
    }
    let s = sign(&paired_volume(b, &system.reference_vectors())?);
    if s == 0 {
        return Ok(Radical::zero());
    }
    let g = gram_matrix(b)?.determinant()?;
    Radical::from_sqrt(Poly::constant(Rational::from_integer(s.into())), &g)
}

/// Signed volume of the unit vectors `e_i / |e_i|` for the given indices.
pub fn unit_oriented_volume(indices: &[usize], system: &VectorSystem) -> Result<Radical> {
    let b: Vec<VectorQ> = indices.iter().map(|&i| system.vector(i).clone()).collect();
    let raw = oriented_volume(&b, system)?;
    let mut norm = Rational::one();
    for &i in indices {
        norm *= system.norm_sq(i);
    }
    // raw / sqrt(norm) = raw * sqrt(norm) / norm
    let inv = Radical::from_sqrt(Poly::constant(norm.recip()), &norm)?;
    raw.multiply(&inv)
}

pub fn invert_rational(m: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| m.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::DependentBasis)?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..2 * n {
                let t = &a[col][j] * &f;
                a[r][j] -= t;
            }
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| a[i][n + j].clone()))
}

fn columns(basis: &[VectorQ]) -> Matrix<Rational> {
    let d = basis.first().map_or(0, VectorQ::dim);
    Matrix::from_fn(d, basis.len(), |i, j| basis[j].coords()[i].clone())
}

/// Matrix `M` of `p` restricted to `span(basis)`, i.e. `p B = B M` with the
/// basis vectors as the columns of `B`.
pub fn operator_on_subspace<T: crate::ring::RingElement>(p: &Matrix<T>, basis: &[VectorQ]) -> Result<Matrix<T>> {
    if !p.is_square() {
        return Err(Error::NonSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    for v in basis {
        if v.dim() != p.rows() {
            return Err(Error::DimensionMismatch {
                expected: p.rows(),
                found: v.dim(),
            });
        }
    }
    if !is_independent(basis) {
        return Err(Error::DependentBasis);
    }
    let b = columns(basis);
    // Rows of B that form an invertible square block.
    let mut picked: Vec<usize> = Vec::new();
    let mut picked_rows: Vec<VectorQ> = Vec::new();
    for i in 0..b.rows() {
        picked_rows.push(VectorQ::new((0..b.cols()).map(|j| b.get(i, j).clone()).collect()));
        if rank(&picked_rows) == picked_rows.len() {
            picked.push(i);
        } else {
            picked_rows.pop();
        }
        if picked.len() == basis.len() {
            break;
        }
    }
    let block = Matrix::from_fn(picked.len(), picked.len(), |i, j| b.get(picked[i], j).clone());
    let block_inv = invert_rational(&block)?.map(T::from_rational);
    let bt = b.map(T::from_rational);
    let pb = p.mul(&bt)?;
    let pb_rows = Matrix::from_fn(picked.len(), pb.cols(), |i, j| pb.get(picked[i], j).clone());
    let m = block_inv.mul(&pb_rows)?;
    if bt.mul(&m)? != pb {
        return Err(Error::NotInvariant);
    }
    Ok(m)
}

/// Determinant of `p` as an operator on `span(basis)`.
pub fn det_on_subspace<T: crate::ring::RingElement>(p: &Matrix<T>, basis: &[VectorQ]) -> Result<T> {
    operator_on_subspace(p, basis)?.determinant()
}

/// Exact Pfaffian of a skew-symmetric `p` restricted to `span(basis)`, taken
/// in an orthonormal basis with the orientation of `basis`.
///
/// With `B = O L` (Gram-Schmidt, positive diagonal `L`), `B^T p B = L^T (O^T p O) L`,
/// so `Pf(O^T p O) = Pf(B^T p B) / sqrt(det Gram(B))`.
pub fn pfaffian_on_subspace(p: &Matrix<Poly>, basis: &[VectorQ]) -> Result<Radical> {
    if !is_independent(basis) {
        return Err(Error::DependentBasis);
    }
    let b = columns(basis).to_poly();
    let inner = b.transpose().mul(&p.mul(&b)?)?;
    let pf = inner.pfaffian()?;
    let g = gram_matrix(basis)?.determinant()?;
    Radical::from_sqrt(pf.scale(&g.recip()), &g)
}

/// Gram-Schmidt in floating point; rows of the result are orthonormal.
pub fn orthonormalize_f64(basis: &[VectorQ]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in basis {
        let mut w: Vec<f64> = v.coords().iter().map(to_f64).collect();
        // two passes for stability
        for _ in 0..2 {
            for q in &out {
                let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(w.into_iter().map(|x| x / n).collect());
    }
    out
}

/// Matrix of a numeric operator in the orthonormal basis obtained from
/// `basis` by Gram-Schmidt: entry `(a, b) = (o_a, p o_b)`.
pub fn orthonormal_matrix_f64(p: &Matrix<Rational>, basis: &[VectorQ]) -> Vec<Vec<f64>> {
    let o = orthonormalize_f64(basis);
    let pf: Vec<Vec<f64>> = (0..p.rows())
        .map(|i| (0..p.cols()).map(|j| to_f64(p.get(i, j))).collect())
        .collect();
    let n = o.len();
    let mut out = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut acc = 0.0;
            for (i, row) in pf.iter().enumerate() {
                let pob: f64 = row.iter().zip(&o[b]).map(|(x, y)| x * y).sum();
                acc += o[a][i] * pob;
            }
            out[a][b] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gram_matrix;
    use crate::ring::{int, rat, Var};

    fn v(c: &[i64]) -> VectorQ {
        VectorQ::from_ints(c)
    }

    fn plane_system() -> VectorSystem {
        VectorSystem::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap()
    }

    #[test]
    fn orientation_follows_reference_basis() {
        let sys = plane_system();
        let one = oriented_volume(&[v(&[1, 0]), v(&[0, 1])], &sys).unwrap();
        assert_eq!(one, Radical::rational(Poly::constant(int(1))));
        let minus = oriented_volume(&[v(&[0, 1]), v(&[1, 0])], &sys).unwrap();
        assert_eq!(minus, Radical::rational(Poly::constant(int(-1))));
        let zero = oriented_volume(&[v(&[1, 1]), v(&[2, 2])], &sys).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn a3_star_volume_squares_to_gram() {
        let e = |i: usize, j: usize| {
            let mut c = vec![0i64; 4];
            c[i] = 1;
            c[j] = -1;
            v(&c)
        };
        let sys = VectorSystem::new(4, vec![e(0, 1), e(1, 2), e(2, 3)]).unwrap();
        let star = [e(0, 1), e(0, 2), e(0, 3)];
        let vol = oriented_volume(&star, &sys).unwrap();
        let g = gram_matrix(&star).unwrap().determinant().unwrap();
        assert_eq!(vol.square(), Poly::constant(g));
        // star vectors are unitriangular in the chain basis
        assert_eq!(vol.to_f64(|_| int(0)).signum(), 1.0);
    }

    #[test]
    fn restriction_examples() {
        let basis = [v(&[1, -1, 0]), v(&[0, 1, -1])];
        let id = Matrix::<Rational>::identity(3);
        assert_eq!(operator_on_subspace(&id, &basis).unwrap(), Matrix::identity(2));
        let two = id.scale(&int(2));
        assert_eq!(
            operator_on_subspace(&two, &basis).unwrap(),
            Matrix::<Rational>::identity(2).scale(&int(2))
        );
        // projection onto the first axis does not preserve the plane
        let proj = Matrix::from_fn(3, 3, |i, j| if i == 0 && j == 0 { int(1) } else { int(0) });
        assert!(matches!(
            operator_on_subspace(&proj, &basis),
            Err(Error::NotInvariant)
        ));
        assert!(matches!(
            operator_on_subspace(&id, &[v(&[1, 0, 0]), v(&[2, 0, 0])]),
            Err(Error::DependentBasis)
        ));
    }

    #[test]
    fn exact_pfaffian_matches_float_route() {
        let basis = [v(&[1, 2, 0]), v(&[0, 1, 1])];
        // skew operator w * (a b^T - b a^T) with a, b in the plane
        let a = &basis[0];
        let b = &basis[1];
        let x = Poly::var(Var::w(&[1]));
        let p = Matrix::from_fn(3, 3, |i, j| {
            let c = &a.coords()[i] * &b.coords()[j] - &b.coords()[i] * &a.coords()[j];
            x.scale(&c)
        });
        let exact = pfaffian_on_subspace(&p, &basis).unwrap();
        let numeric = p.map(|e| e.evaluate(|_| rat(3, 2)));
        let f = orthonormal_matrix_f64(&numeric, &basis);
        let pf = crate::linalg::pfaffian_f64(&f);
        let ex = exact.to_f64(|_| rat(3, 2));
        assert!((pf - ex).abs() < 1e-12 * ex.abs().max(1.0), "{pf} vs {ex}");
    }
}
