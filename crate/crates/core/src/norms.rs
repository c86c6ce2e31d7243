//! Occurrence counting for the unit-vector correction.
//!
//! Vectors are stored unnormalized. A term written for unit vectors is
//! recovered from its raw value by dividing by the squared norm of every
//! vector instance in it, provided each instance occupies exactly two
//! slots (inner products, volume rows, or the output vector). The ledger
//! records slot usage so that the division is justified per term rather
//! than assumed.

use num_traits::One;

use crate::ring::Rational;

#[derive(Debug, Clone, Default)]
pub struct SlotLedger {
    vectors: Vec<usize>,
    uses: Vec<u8>,
}

impl SlotLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a new instance of system vector `vector`.
    pub fn instance(&mut self, vector: usize) -> usize {
        self.vectors.push(vector);
        self.uses.push(0);
        self.vectors.len() - 1
    }

    pub fn instances(&mut self, vectors: &[usize]) -> Vec<usize> {
        vectors.iter().map(|&v| self.instance(v)).collect()
    }

    /// Instance `a` and `b` meet in one inner product.
    pub fn inner(&mut self, a: usize, b: usize) {
        self.uses[a] += 1;
        self.uses[b] += 1;
    }

    /// Instance `a` fills a single slot (a volume row or the output vector).
    pub fn slot(&mut self, a: usize) {
        self.uses[a] += 1;
    }

    /// Product of squared norms over all instances.
    ///
    /// Panics when some instance is not used exactly twice, since the raw
    /// value would then not be a rational multiple of the unit one.
    pub fn normalizer(&self, norms_sq: &[Rational]) -> Rational {
        self.partial_normalizer(norms_sq, &[])
    }

    /// Product of squared norms over instances other than `open`. The
    /// `open` instances must have exactly one use so far; their second use
    /// and their normalization are supplied by the caller.
    pub fn partial_normalizer(&self, norms_sq: &[Rational], open: &[usize]) -> Rational {
        let mut out = Rational::one();
        for (i, (&v, &u)) in self.vectors.iter().zip(&self.uses).enumerate() {
            if open.contains(&i) {
                assert_eq!(u, 1, "open instance {i} (vector {v}) used {u} times");
            } else {
                assert_eq!(u, 2, "instance {i} (vector {v}) used {u} times");
                out *= &norms_sq[v];
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn q_chain_closes() {
        // (v,e1)(e1,e2)e2: e1 twice, e2 twice
        let norms = [int(2), int(3)];
        let mut l = SlotLedger::new();
        let e = l.instances(&[0, 1]);
        l.slot(e[0]);
        l.inner(e[0], e[1]);
        l.slot(e[1]);
        assert_eq!(l.normalizer(&norms), int(6));
    }

    #[test]
    fn open_endpoints() {
        let norms = [int(2), int(5), int(7)];
        let mut l = SlotLedger::new();
        let e = l.instances(&[0, 1, 2]);
        l.inner(e[0], e[1]);
        l.inner(e[1], e[2]);
        assert_eq!(l.partial_normalizer(&norms, &[e[0], e[2]]), int(5));
    }

    #[test]
    #[should_panic]
    fn unbalanced_use_panics() {
        let mut l = SlotLedger::new();
        let a = l.instance(0);
        l.slot(a);
        l.normalizer(&[int(1)]);
    }
}
