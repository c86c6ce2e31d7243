use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::{Poly, Rational, Var, VarKind};

/// Weights `w_{i_1..i_k}` indexed by k-multi-indices over the system vectors.
///
/// Indices are 0-based positions in the vector system. Unset entries are
/// fresh indeterminates named by the 1-based multi-index, e.g. `w[2,1,3]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    arity: usize,
    kind: VarKind,
    values: BTreeMap<Vec<usize>, Poly>,
}

impl WeightAssignment {
    pub fn symbolic(arity: usize) -> Self {
        WeightAssignment {
            arity,
            kind: VarKind::W,
            values: BTreeMap::new(),
        }
    }

    /// Every multi-index over `n_vectors` gets a value from `f`.
    pub fn from_fn<F: FnMut(&[usize]) -> Poly>(arity: usize, n_vectors: usize, mut f: F) -> Self {
        let mut values = BTreeMap::new();
        for idx in multi_indices(n_vectors, arity) {
            let v = f(&idx);
            values.insert(idx, v);
        }
        WeightAssignment {
            arity,
            kind: VarKind::W,
            values,
        }
    }

    pub fn constant(arity: usize, n_vectors: usize, c: Rational) -> Self {
        Self::from_fn(arity, n_vectors, |_| Poly::constant(c.clone()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn set(&mut self, index: Vec<usize>, value: Poly) -> Result<()> {
        if index.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: index.len(),
            });
        }
        self.values.insert(index, value);
        Ok(())
    }

    pub fn get(&self, index: &[usize]) -> Poly {
        debug_assert_eq!(index.len(), self.arity);
        match self.values.get(index) {
            Some(v) => v.clone(),
            None => Poly::var(self.var_for(index)),
        }
    }

    pub fn var_for(&self, index: &[usize]) -> Var {
        let labels: Vec<usize> = index.iter().map(|i| i + 1).collect();
        Var::new(self.kind, &labels)
    }

    /// True when every entry over `n_vectors` is an explicit constant.
    pub fn is_numeric(&self, n_vectors: usize) -> bool {
        multi_indices(n_vectors, self.arity).all(|idx| {
            self.values
                .get(&idx)
                .is_some_and(|v| v.as_constant().is_some())
        })
    }

    /// Replaces every indeterminate by the value `f` gives for it.
    pub fn substitute<F: Fn(Var) -> Rational>(&self, n_vectors: usize, f: F) -> Self {
        Self::from_fn(self.arity, n_vectors, |idx| {
            Poly::constant(self.get(idx).evaluate(&f))
        })
    }
}

/// All k-multi-indices over `0..n` in lexicographic order.
pub fn multi_indices(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(k as u32).unwrap_or(0);
    let total = if k == 0 { 1 } else { total };
    (0..total).map(move |mut code| {
        let mut idx = vec![0; k];
        for slot in idx.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        idx
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn symbolic_names_are_one_based() {
        let w = WeightAssignment::symbolic(2);
        let names: Vec<String> = multi_indices(2, 2).map(|i| w.get(&i).to_string()).collect();
        assert_eq!(names, ["w[1,1]", "w[1,2]", "w[2,1]", "w[2,2]"]);
    }

    #[test]
    fn unit_weights() {
        let w = WeightAssignment::constant(1, 3, int(1));
        assert!(w.is_numeric(3));
        for i in 0..3 {
            assert_eq!(w.get(&[i]), Poly::one());
        }
    }

    #[test]
    fn set_checks_arity() {
        let mut w = WeightAssignment::symbolic(2);
        assert!(matches!(
            w.set(vec![0], Poly::one()),
            Err(Error::ArityMismatch { .. })
        ));
        w.set(vec![0, 1], Poly::constant(int(5))).unwrap();
        assert_eq!(w.get(&[0, 1]), Poly::constant(int(5)));
    }
}
