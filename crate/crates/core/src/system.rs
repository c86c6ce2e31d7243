//! Vector systems: the (unnormalized) normals of a family of reflections.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_independent, rank, VectorQ};
use crate::ring::Rational;

/// A list of nonzero rational vectors `e_1..e_N` standing for the unit
/// vectors `e_i / |e_i|`, together with a reference basis of their span that
/// fixes orientation.
///
/// Vectors are indexed from 0 in code and printed 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSystem {
    ambient_dim: usize,
    vectors: Vec<VectorQ>,
    norms_sq: Vec<Rational>,
    reference_basis: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SystemFile {
    ambient_dim: usize,
    vectors: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference_basis: Option<Vec<usize>>,
}

impl VectorSystem {
    /// Reference basis defaults to the greedy maximal independent prefix in
    /// index order.
    pub fn new(ambient_dim: usize, vectors: Vec<VectorQ>) -> Result<Self> {
        for v in &vectors {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        let mut basis: Vec<usize> = Vec::new();
        let mut chosen: Vec<VectorQ> = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            chosen.push(v.clone());
            if is_independent(&chosen) {
                basis.push(i);
            } else {
                chosen.pop();
            }
        }
        let norms_sq = vectors.iter().map(VectorQ::norm_sq).collect();
        Ok(VectorSystem {
            ambient_dim,
            vectors,
            norms_sq,
            reference_basis: basis,
        })
    }

    pub fn with_reference_basis(mut self, basis: Vec<usize>) -> Result<Self> {
        for &i in &basis {
            if i >= self.vectors.len() {
                return Err(Error::Index {
                    index: i,
                    size: self.vectors.len(),
                });
            }
        }
        let chosen: Vec<VectorQ> = basis.iter().map(|&i| self.vectors[i].clone()).collect();
        if !is_independent(&chosen) {
            return Err(Error::DependentBasis);
        }
        if chosen.len() != rank(&self.vectors) {
            return Err(Error::SpanMismatch);
        }
        self.reference_basis = basis;
        Ok(self)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of vectors `N`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Dimension `n` of the span.
    pub fn span_dim(&self) -> usize {
        self.reference_basis.len()
    }

    pub fn vector(&self, i: usize) -> &VectorQ {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[VectorQ] {
        &self.vectors
    }

    pub fn norm_sq(&self, i: usize) -> &Rational {
        &self.norms_sq[i]
    }

    pub fn norms_sq(&self) -> &[Rational] {
        &self.norms_sq
    }

    /// Raw inner product `(e_i, e_j)` of the stored vectors.
    pub fn inner(&self, i: usize, j: usize) -> Rational {
        self.vectors[i].dot(&self.vectors[j])
    }

    pub fn reference_basis(&self) -> &[usize] {
        &self.reference_basis
    }

    pub fn reference_vectors(&self) -> Vec<VectorQ> {
        self.reference_basis
            .iter()
            .map(|&i| self.vectors[i].clone())
            .collect()
    }

    /// Table of raw inner products, `table[i][j] = (e_i, e_j)`.
    pub fn inner_table(&self) -> Vec<Vec<Rational>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.inner(i, j)).collect())
            .collect()
    }

    pub fn has_zero_inner(&self, i: usize, j: usize) -> bool {
        self.inner(i, j).is_zero()
    }

    /// Parses the JSON system format. `reference_basis` indices are 1-based.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| Error::FileFormat(e.to_string()))?;
        let vectors = file
            .vectors
            .iter()
            .map(|v| VectorQ::parse(v))
            .collect::<Result<Vec<_>>>()?;
        let sys = VectorSystem::new(file.ambient_dim, vectors)?;
        match file.reference_basis {
            Some(b) => {
                if b.contains(&0) {
                    return Err(Error::FileFormat(
                        "reference_basis indices are 1-based".into(),
                    ));
                }
                sys.with_reference_basis(b.into_iter().map(|i| i - 1).collect())
            }
            None => Ok(sys),
        }
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile {
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().map(VectorQ::render).collect(),
            reference_basis: Some(self.reference_basis.iter().map(|i| i + 1).collect()),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn default_reference_basis_is_greedy_prefix() {
        let sys = VectorSystem::new(
            2,
            vec![
                VectorQ::from_ints(&[1, 0]),
                VectorQ::from_ints(&[2, 0]),
                VectorQ::from_ints(&[1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(sys.reference_basis(), &[0, 2]);
        assert_eq!(sys.span_dim(), 2);
        assert_eq!(sys.norm_sq(2), &int(2));
    }

    #[test]
    fn rejects_zero_and_mismatched_vectors() {
        assert!(matches!(
            VectorSystem::new(2, vec![VectorQ::from_ints(&[0, 0])]),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            VectorSystem::new(2, vec![VectorQ::from_ints(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{ "ambient_dim": 2, "vectors": [["1", "0"], ["1/2", "3/4"]], "reference_basis": [2, 1] }"#;
        let sys = VectorSystem::from_json(text).unwrap();
        assert_eq!(sys.reference_basis(), &[1, 0]);
        let again = VectorSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(again, sys);
        let bad = r#"{ "ambient_dim": 2, "vectors": [["1", "0"], ["2", "0"]], "reference_basis": [1, 2] }"#;
        assert!(matches!(VectorSystem::from_json(bad), Err(Error::DependentBasis)));
    }
}
