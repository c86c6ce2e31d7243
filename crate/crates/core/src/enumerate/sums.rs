use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::doomb::{enumerate_doombs, enumerate_pair_matchings, Doomb};
use crate::commutators::{multi_indices, UCoefficients, UConvention, WeightAssignment};
use crate::error::{Error, Result};
use crate::linalg::{gram_matrix, oriented_volume, Matrix, VectorQ};
use crate::norms::SlotLedger;
use crate::ring::{pow2, Poly, Radical, Rational};
use crate::system::VectorSystem;

/// Nonzero `u_J` over all multi-indices of one arity.
#[derive(Debug, Clone)]
pub struct UWeights {
    k: usize,
    table: HashMap<Vec<usize>, Poly>,
}

impl UWeights {
    pub fn new(system: &VectorSystem, w: &WeightAssignment, conv: UConvention) -> Result<Self> {
        let k = w.arity();
        let coeffs = UCoefficients::new(k, conv);
        let table = multi_indices(system.len(), k)
            .map(|j| coeffs.u(w, &j).map(|u| (j, u)))
            .filter(|r| !matches!(r, Ok((_, u)) if u.is_zero()))
            .collect::<Result<_>>()?;
        Ok(UWeights { k, table })
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn get(&self, j: &[usize]) -> Option<&Poly> {
        self.table.get(j)
    }
}

/// Sum over paths `p = j_1, ..., j_k = q` of `u_J (e_{j_1},e_{j_2})...(e_{j_{k-1}},e_{j_k})`
/// for unit vectors at interior positions and raw vectors at the two ends.
/// Dividing by `|e_p| |e_q|` gives the fully normalized weight; that
/// division is left to the caller, who pairs it with the volume factor.
pub fn k_weight(system: &VectorSystem, u: &UWeights, p: usize, q: usize) -> Poly {
    let k = u.arity();
    if k == 1 {
        return if p == q {
            u.get(&[p]).cloned().unwrap_or_else(Poly::zero)
        } else {
            Poly::zero()
        };
    }
    let mut total = Poly::zero();
    let mut path = vec![0; k];
    path[0] = p;
    path[k - 1] = q;
    for interior in multi_indices(system.len(), k - 2) {
        path[1..k - 1].copy_from_slice(&interior);
        let Some(uj) = u.get(&path) else { continue };
        let mut ledger = SlotLedger::new();
        let inst = ledger.instances(&path);
        let mut c = Rational::one();
        for t in 1..k {
            ledger.inner(inst[t - 1], inst[t]);
            c *= system.inner(path[t - 1], path[t]);
        }
        if c.is_zero() {
            continue;
        }
        let norm = ledger.partial_normalizer(system.norms_sq(), &[inst[0], inst[k - 1]]);
        total.add_scaled(uj, &(c / norm));
    }
    total
}

/// Table of [`k_weight`] over all ordered pairs.
#[derive(Debug, Clone)]
pub struct KWeights {
    n: usize,
    table: Vec<Poly>,
}

impl KWeights {
    pub fn new(system: &VectorSystem, u: &UWeights) -> Self {
        let n = system.len();
        let table = (0..n * n)
            .into_par_iter()
            .map(|i| k_weight(system, u, i / n, i % n))
            .collect();
        KWeights { n, table }
    }

    pub fn get(&self, p: usize, q: usize) -> &Poly {
        &self.table[p * self.n + q]
    }
}

fn cross_det(system: &VectorSystem, starts: &[usize], ends: &[usize]) -> Rational {
    let n = starts.len();
    Matrix::from_fn(n, n, |a, b| system.inner(starts[a], ends[b]))
        .determinant()
        .expect("square")
}

/// Term of a DOOMB: `Π K(p,q) · vol(starts) vol(ends)` with unit vectors,
/// where the volume product is the cross-Gram determinant of the starts
/// against the ends.
pub fn doomb_term(system: &VectorSystem, k: &KWeights, d: &Doomb) -> Poly {
    let starts: Vec<usize> = d.edges.iter().map(|e| e.0).collect();
    let ends: Vec<usize> = d.edges.iter().map(|e| e.1).collect();
    let mut ledger = SlotLedger::new();
    let mut product = Poly::one();
    for &(p, q) in &d.edges {
        let kpq = k.get(p, q);
        if kpq.is_zero() {
            return Poly::zero();
        }
        product = &product * kpq;
        // one use inside the k-weight, one in the volume
        let a = ledger.instance(p);
        let b = ledger.instance(q);
        ledger.slot(a);
        ledger.slot(b);
        ledger.slot(a);
        ledger.slot(b);
    }
    let det = cross_det(system, &starts, &ends);
    if det.is_zero() {
        return Poly::zero();
    }
    product.scale(&(det / ledger.normalizer(system.norms_sq())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenDetForm {
    /// Sum over tuples of paths with strictly increasing end indices.
    MultiIndex,
    /// Sum over DOOMBs of products of k-weights.
    Doomb,
}

struct PathInfo {
    verts: Vec<usize>,
    u: Poly,
    chain: Rational,
}

/// Right-hand side of the determinant formula for `P^(k)` on the span `V`.
pub fn rhs_gendet(
    system: &VectorSystem,
    w: &WeightAssignment,
    k: usize,
    conv: UConvention,
    form: GenDetForm,
) -> Result<Poly> {
    if k < 2 {
        return Err(Error::Precondition("the general determinant formula needs k >= 2".into()));
    }
    if w.arity() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: w.arity(),
        });
    }
    let u = UWeights::new(system, w, conv)?;
    let n = system.span_dim();
    match form {
        GenDetForm::Doomb => {
            let kw = KWeights::new(system, &u);
            let terms: Vec<Poly> = enumerate_doombs(system.len(), n)
                .par_iter()
                .map(|d| doomb_term(system, &kw, d))
                .collect();
            Ok(terms.into_iter().sum())
        }
        GenDetForm::MultiIndex => {
            let mut by_end: Vec<Vec<PathInfo>> = (0..system.len()).map(|_| Vec::new()).collect();
            for j in multi_indices(system.len(), k) {
                let Some(uj) = u.get(&j) else { continue };
                let mut chain = Rational::one();
                for t in 1..k {
                    chain *= system.inner(j[t - 1], j[t]);
                }
                if chain.is_zero() {
                    continue;
                }
                by_end[j[k - 1]].push(PathInfo {
                    verts: j.clone(),
                    u: uj.clone(),
                    chain,
                });
            }
            let end_sets: Vec<Vec<usize>> = combinations(system.len(), n);
            let partial: Vec<Poly> = end_sets
                .par_iter()
                .map(|ends| {
                    let mut acc = Poly::zero();
                    let mut pick = vec![0usize; n];
                    multiindex_terms(system, &by_end, ends, 0, &mut pick, &mut acc);
                    acc
                })
                .collect();
            Ok(partial.into_iter().sum())
        }
    }
}

fn multiindex_terms(
    system: &VectorSystem,
    by_end: &[Vec<PathInfo>],
    ends: &[usize],
    depth: usize,
    pick: &mut [usize],
    acc: &mut Poly,
) {
    if depth == ends.len() {
        let paths: Vec<&PathInfo> = (0..ends.len()).map(|t| &by_end[ends[t]][pick[t]]).collect();
        let starts: Vec<usize> = paths.iter().map(|p| p.verts[0]).collect();
        let det = cross_det(system, &starts, ends);
        if det.is_zero() {
            return;
        }
        let mut ledger = SlotLedger::new();
        let mut coeff = det;
        let mut product = Poly::one();
        for p in &paths {
            let inst = ledger.instances(&p.verts);
            for t in 1..inst.len() {
                ledger.inner(inst[t - 1], inst[t]);
            }
            ledger.slot(inst[0]);
            ledger.slot(inst[inst.len() - 1]);
            coeff *= &p.chain;
            product = &product * &p.u;
        }
        coeff /= ledger.normalizer(system.norms_sq());
        acc.add_scaled(&product, &coeff);
        return;
    }
    for i in 0..by_end[ends[depth]].len() {
        pick[depth] = i;
        multiindex_terms(system, by_end, ends, depth + 1, pick, acc);
    }
}

/// Increasing `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, r, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 0, &mut cur, &mut out);
    out
}

/// `2^n Σ_{i_1 < ... < i_n} w_{i_1}...w_{i_n} vol²(e_{i_1},...,e_{i_n})` for unit vectors.
pub fn rhs_k1(system: &VectorSystem, w: &WeightAssignment) -> Result<Poly> {
    if w.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: w.arity(),
        });
    }
    let n = system.span_dim();
    let mut total = Poly::zero();
    for idx in combinations(system.len(), n) {
        let vecs: Vec<VectorQ> = idx.iter().map(|&i| system.vector(i).clone()).collect();
        let g = gram_matrix(&vecs)?.determinant()?;
        if g.is_zero() {
            continue;
        }
        let mut ledger = SlotLedger::new();
        let mut product = Poly::one();
        for &i in &idx {
            let a = ledger.instance(i);
            ledger.slot(a);
            ledger.slot(a);
            product = &product * &w.get(&[i]);
        }
        total.add_scaled(&product, &(g / ledger.normalizer(system.norms_sq())));
    }
    Ok(total.scale(&pow2(n as i64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfMode {
    ExactRadical,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PfValue {
    Exact(Radical),
    Float(f64),
}

/// Per-matching terms `Π K(p,q) · vol(e_{p_1}, e_{q_1}, e_{p_2}, e_{q_2}, ...)`
/// with unit vectors, over directed partial pair matchings with `n/2` edges.
pub fn keven_pf_terms(
    system: &VectorSystem,
    w: &WeightAssignment,
    k: usize,
    conv: UConvention,
) -> Result<Vec<(Doomb, Radical)>> {
    if k % 2 != 0 || w.arity() != k {
        return Err(Error::Precondition(format!("Pfaffian formula needs even k matching the weights, got k={k}")));
    }
    let n = system.span_dim();
    if n % 2 != 0 {
        return Err(Error::OddSize(n));
    }
    let u = UWeights::new(system, w, conv)?;
    let kw = KWeights::new(system, &u);
    let matchings = enumerate_pair_matchings(system.len(), n / 2);
    let terms: Vec<Result<Option<(Doomb, Radical)>>> = matchings
        .into_par_iter()
        .map(|d| {
            let mut product = Poly::one();
            let mut ledger = SlotLedger::new();
            let mut order = Vec::with_capacity(n);
            for &(p, q) in &d.edges {
                let kpq = kw.get(p, q);
                if kpq.is_zero() {
                    return Ok(None);
                }
                product = &product * kpq;
                for v in [p, q] {
                    let a = ledger.instance(v);
                    ledger.slot(a);
                    ledger.slot(a);
                    order.push(v);
                }
            }
            let raw: Vec<VectorQ> = order.iter().map(|&i| system.vector(i).clone()).collect();
            let vol = oriented_volume(&raw, system)?;
            if vol.is_zero() {
                return Ok(None);
            }
            let scale = ledger.normalizer(system.norms_sq()).recip();
            let term = vol.multiply(&Radical::rational(product.scale(&scale)))?;
            Ok(Some((d, term)))
        })
        .collect();
    let mut out = Vec::new();
    for t in terms {
        if let Some(x) = t? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Sum of [`keven_pf_terms`]. Exact mode fails with a mixed-radicand error
/// when the terms do not share one radicand; float mode needs numeric weights.
pub fn rhs_keven_pf(
    system: &VectorSystem,
    w: &WeightAssignment,
    k: usize,
    conv: UConvention,
    mode: PfMode,
) -> Result<PfValue> {
    let terms = keven_pf_terms(system, w, k, conv)?;
    match mode {
        PfMode::ExactRadical => {
            let mut total = Radical::zero();
            for (_, t) in &terms {
                total = total.add(t)?;
            }
            Ok(PfValue::Exact(total))
        }
        PfMode::Float => {
            let mut total = 0.0;
            for (_, t) in &terms {
                if t.coefficient().as_constant().is_none() {
                    return Err(Error::Precondition("float mode needs numeric weights".into()));
                }
                total += t.to_f64(|_| Rational::zero());
            }
            Ok(PfValue::Float(total))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutators::resolve_convention;
    use crate::ring::{int, Var};

    fn v(c: &[i64]) -> VectorQ {
        VectorQ::from_ints(c)
    }

    fn a2() -> VectorSystem {
        VectorSystem::new(3, vec![v(&[1, -1, 0]), v(&[1, 0, -1]), v(&[0, 1, -1])]).unwrap()
    }

    #[test]
    fn k_weight_k3_interior() {
        let sys = VectorSystem::new(2, vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let w = WeightAssignment::symbolic(3);
        let conv = resolve_convention().unwrap();
        let u = UWeights::new(&sys, &w, conv).unwrap();
        let got = k_weight(&sys, &u, 0, 1);
        // interior vertex 0: u_{001}(e0,e0)(e0,e1)/|e0|^2 ; interior 1: u_{011}(e0,e1)(e1,e1)/|e1|^2
        let u001 = u.get(&[0, 0, 1]).cloned().unwrap_or_else(Poly::zero);
        let u011 = u.get(&[0, 1, 1]).cloned().unwrap_or_else(Poly::zero);
        let expect = &u001 + &u011;
        assert_eq!(got, expect);
    }

    #[test]
    fn k_weight_diagonal_vanishes_for_k2() {
        let sys = a2();
        let u = UWeights::new(&sys, &WeightAssignment::symbolic(2), resolve_convention().unwrap()).unwrap();
        for p in 0..3 {
            assert!(k_weight(&sys, &u, p, p).is_zero());
        }
    }

    #[test]
    fn gendet_trivial_cases() {
        let conv = resolve_convention().unwrap();
        let orth = VectorSystem::new(2, vec![v(&[1, 0]), v(&[0, 3])]).unwrap();
        let w = WeightAssignment::symbolic(2);
        for form in [GenDetForm::MultiIndex, GenDetForm::Doomb] {
            assert!(rhs_gendet(&orth, &w, 2, conv, form).unwrap().is_zero());
        }
        // one vector spanning a line: N = n = 1, the only DOOMB is a loop with u_pp = 0
        let line = VectorSystem::new(1, vec![v(&[2])]).unwrap();
        assert!(rhs_gendet(&line, &w, 2, conv, GenDetForm::Doomb).unwrap().is_zero());
    }

    #[test]
    fn k1_examples() {
        let line = VectorSystem::new(1, vec![v(&[1])]).unwrap();
        let w = WeightAssignment::symbolic(1);
        assert_eq!(rhs_k1(&line, &w).unwrap(), Poly::var(Var::w(&[1])).scale(&int(2)));

        let par = VectorSystem::new(1, vec![v(&[1]), v(&[-3])]).unwrap();
        let expect = (&Poly::var(Var::w(&[1])) + &Poly::var(Var::w(&[2]))).scale(&int(2));
        assert_eq!(rhs_k1(&par, &w).unwrap(), expect);

        let unit = WeightAssignment::constant(1, 3, int(1));
        assert_eq!(rhs_k1(&a2(), &unit).unwrap(), Poly::constant(int(9)));
    }

    #[test]
    fn keven_zero_without_spanning_pairs() {
        let conv = resolve_convention().unwrap();
        let sys = VectorSystem::new(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        // orthogonal vectors: every k-weight between distinct vectors is 0
        let w = WeightAssignment::symbolic(2);
        match rhs_keven_pf(&sys, &w, 2, conv, PfMode::ExactRadical).unwrap() {
            PfValue::Exact(r) => assert!(r.is_zero()),
            PfValue::Float(_) => unreachable!(),
        }
    }

    #[test]
    fn combinations_lex() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 2), [vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 3).len(), 0);
        assert_eq!(combinations(3, 0), [Vec::<usize>::new()]);
    }
}
