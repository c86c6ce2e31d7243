use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::permutation::{x_coefficients, Convention};
use super::weights::{multi_indices, WeightAssignment};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, VectorQ};
use crate::norms::SlotLedger;
use crate::ring::{Poly, Rational};
use crate::system::VectorSystem;

/// How a permutation `σ` rearranges a multi-index `J = (j_1..j_k)` inside `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexAction {
    /// `σ J = (j_{σ(1)}, ..., j_{σ(k)})`.
    Positions,
    /// `σ J` puts `j_t` into slot `σ(t)`, i.e. `(j_{σ^{-1}(1)}, ..., j_{σ^{-1}(k)})`.
    Places,
}

/// The choices that turn `u_J = Σ_σ a_k(σ^{-1}) w_{σ J}` into concrete sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UConvention {
    pub composition: Convention,
    pub action: IndexAction,
}

impl UConvention {
    pub const CANDIDATES: [UConvention; 4] = [
        UConvention::new(Convention::RightFirst, IndexAction::Positions),
        UConvention::new(Convention::LeftFirst, IndexAction::Positions),
        UConvention::new(Convention::RightFirst, IndexAction::Places),
        UConvention::new(Convention::LeftFirst, IndexAction::Places),
    ];

    pub const fn new(composition: Convention, action: IndexAction) -> Self {
        UConvention {
            composition,
            action,
        }
    }

    pub fn describe(&self) -> String {
        let action = match self.action {
            IndexAction::Positions => "sigma reads positions",
            IndexAction::Places => "sigma moves entries to places",
        };
        format!("composition {}, {}", self.composition.name(), action)
    }
}

/// `s(v) = v - 2(e,v)e/(e,e)`; the result does not depend on the scale of `e`.
pub fn reflection_matrix(e: &VectorQ) -> Result<Matrix<Rational>> {
    if e.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = e.norm_sq();
    let two = Rational::from_integer(2.into());
    let c = e.coords();
    Ok(Matrix::from_fn(e.dim(), e.dim(), |i, j| {
        let d = if i == j { Rational::one() } else { Rational::zero() };
        d - &two * &c[i] * &c[j] / &n
    }))
}

/// Matrix of `Q(v) = (v,e_1)(e_1,e_2)...(e_{k-1},e_k) e_k` for the unit
/// vectors along the given raw tuple.
pub fn q_operator(tuple: &[VectorQ]) -> Result<Matrix<Rational>> {
    let first = tuple.first().ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    let d = first.dim();
    for v in tuple {
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
    }
    let norms: Vec<Rational> = tuple.iter().map(VectorQ::norm_sq).collect();
    let ids: Vec<usize> = (0..tuple.len()).collect();
    let (c, normalizer) = q_scalar(&ids, &norms, |a, b| tuple[a].dot(&tuple[b]));
    let c = c / normalizer;
    let last = tuple.last().unwrap().coords();
    let head = first.coords();
    Ok(Matrix::from_fn(d, d, |i, j| &c * &last[i] * &head[j]))
}

/// Raw chain product `(e_1,e_2)...(e_{k-1},e_k)` for the indices `path`,
/// together with the normalizer for the full `Q` (input and output slots
/// included).
fn q_scalar<F: Fn(usize, usize) -> Rational>(
    path: &[usize],
    norms: &[Rational],
    inner: F,
) -> (Rational, Rational) {
    let mut ledger = SlotLedger::new();
    let inst = ledger.instances(path);
    ledger.slot(inst[0]);
    let mut c = Rational::one();
    for t in 1..path.len() {
        ledger.inner(inst[t - 1], inst[t]);
        c *= inner(path[t - 1], path[t]);
    }
    ledger.slot(inst[path.len() - 1]);
    (c, ledger.normalizer(norms))
}

/// Precomputed `a_k(σ^{-1})` data for evaluating `u` quickly.
#[derive(Debug, Clone)]
pub struct UCoefficients {
    k: usize,
    /// `(ρ, c)` with `u_J = Σ c · w[j_{ρ(1)}, ..., j_{ρ(k)}]`.
    terms: Vec<(Vec<usize>, Rational)>,
}

impl UCoefficients {
    pub fn new(k: usize, conv: UConvention) -> Self {
        if k == 1 {
            return UCoefficients {
                k,
                terms: vec![(vec![0], Rational::one())],
            };
        }
        // x = Σ a(π) π; the weight a(σ^{-1}) goes with σ J, so with π = σ^{-1}
        // the slot map is π^{-1} for position reading and π for placing.
        let x = x_coefficients(k, conv.composition);
        let terms = x
            .terms()
            .map(|(pi, a)| {
                let rho = match conv.action {
                    IndexAction::Positions => pi.inverse(),
                    IndexAction::Places => pi.clone(),
                };
                (rho.images().to_vec(), a.clone())
            })
            .collect();
        UCoefficients { k, terms }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn u(&self, w: &WeightAssignment, j: &[usize]) -> Result<Poly> {
        if j.len() != self.k || w.arity() != self.k {
            return Err(Error::ArityMismatch {
                expected: self.k,
                found: if j.len() != self.k { j.len() } else { w.arity() },
            });
        }
        let mut out = Poly::zero();
        let mut idx = vec![0; self.k];
        for (sigma, c) in &self.terms {
            for (t, slot) in idx.iter_mut().enumerate() {
                *slot = j[sigma[t]];
            }
            out.add_scaled(&w.get(&idx), c);
        }
        Ok(out)
    }
}

/// `u_J = Σ_σ a_k(σ^{-1}) w_{σ J}`, with `u_i = w_i` for `k = 1`.
pub fn u_from_w(w: &WeightAssignment, j: &[usize], conv: UConvention) -> Result<Poly> {
    UCoefficients::new(j.len(), conv).u(w, j)
}

/// All `u_J` over `N^k` multi-indices, omitting zeros.
pub fn u_table(
    w: &WeightAssignment,
    n_vectors: usize,
    conv: UConvention,
) -> Result<HashMap<Vec<usize>, Poly>> {
    let coeffs = UCoefficients::new(w.arity(), conv);
    let mut out = HashMap::new();
    for j in multi_indices(n_vectors, w.arity()) {
        let u = coeffs.u(w, &j)?;
        if !u.is_zero() {
            out.insert(j, u);
        }
    }
    Ok(out)
}

fn accumulate(acc: &mut [Poly], m: &Matrix<Rational>, weight: &Poly) {
    for (a, c) in acc.iter_mut().zip(m.entries()) {
        if !c.is_zero() {
            a.add_scaled(weight, c);
        }
    }
}

/// `Σ_I w_I [s_{i_k},[...,[s_{i_2}, s_{i_1}]...]]`; for `k = 1`, `Σ w_i (I - s_i)`.
pub fn build_p_nested(system: &VectorSystem, w: &WeightAssignment, k: usize) -> Result<Matrix<Poly>> {
    check_arity(w, k)?;
    let d = system.ambient_dim();
    let refl: Vec<Matrix<Rational>> = system
        .vectors()
        .iter()
        .map(reflection_matrix)
        .collect::<Result<_>>()?;
    let mut acc = vec![Poly::zero(); d * d];
    if k == 1 {
        let id = Matrix::<Rational>::identity(d);
        for (i, s) in refl.iter().enumerate() {
            accumulate(&mut acc, &id.sub(s)?, &w.get(&[i]));
        }
    } else {
        for idx in multi_indices(system.len(), k) {
            let mut c = refl[idx[0]].clone();
            for &i in &idx[1..] {
                let s = &refl[i];
                c = s.mul(&c)?.sub(&c.mul(s)?)?;
                if c.is_zero() {
                    break;
                }
            }
            if !c.is_zero() {
                accumulate(&mut acc, &c, &w.get(&idx));
            }
        }
    }
    let mut it = acc.into_iter();
    Ok(Matrix::from_fn(d, d, |_, _| it.next().unwrap()))
}

/// `Σ_J u_J Q(e_{j_1},...,e_{j_k})`; for `k = 1`, `Σ 2 w_i Q(e_i)`.
pub fn build_p_via_q(
    system: &VectorSystem,
    w: &WeightAssignment,
    k: usize,
    conv: UConvention,
) -> Result<Matrix<Poly>> {
    check_arity(w, k)?;
    let d = system.ambient_dim();
    let coeffs = UCoefficients::new(k, conv);
    let two = Rational::from_integer(2.into());
    let mut acc = vec![Poly::zero(); d * d];
    for j in multi_indices(system.len(), k) {
        let (c, normalizer) = q_scalar(&j, system.norms_sq(), |a, b| system.inner(a, b));
        if c.is_zero() {
            continue;
        }
        let mut u = coeffs.u(w, &j)?;
        if u.is_zero() {
            continue;
        }
        if k == 1 {
            u = u.scale(&two);
        }
        let c = c / normalizer;
        let head = system.vector(j[0]).coords();
        let last = system.vector(j[k - 1]).coords();
        for r in 0..d {
            if last[r].is_zero() {
                continue;
            }
            for s in 0..d {
                if head[s].is_zero() {
                    continue;
                }
                acc[r * d + s].add_scaled(&u, &(&c * &last[r] * &head[s]));
            }
        }
    }
    let mut it = acc.into_iter();
    Ok(Matrix::from_fn(d, d, |_, _| it.next().unwrap()))
}

fn check_arity(w: &WeightAssignment, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("arity k must be at least 1".into()));
    }
    if w.arity() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: w.arity(),
        });
    }
    Ok(())
}

/// First convention in [`UConvention::CANDIDATES`] under which both
/// constructions of `P` agree for `k = 2, 3, 4` on a fixed generic system.
pub fn resolve_convention() -> Result<UConvention> {
    static RESOLVED: OnceLock<Option<UConvention>> = OnceLock::new();
    let found = RESOLVED.get_or_init(|| {
        UConvention::CANDIDATES
            .into_iter()
            .find(|&c| convention_matches(c).unwrap_or(false))
    });
    found.ok_or_else(|| {
        Error::Precondition("no composition convention reproduces the nested commutators".into())
    })
}

/// Whether `build_p_via_q` under `conv` equals `build_p_nested` for
/// `k = 2, 3, 4` on a fixed generic system with symbolic weights.
pub fn convention_matches(conv: UConvention) -> Result<bool> {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let sys = VectorSystem::new(
        3,
        vec![
            VectorQ::new(vec![q(1, 1), q(2, 1), q(0, 1)]),
            VectorQ::new(vec![q(-1, 2), q(1, 1), q(3, 1)]),
            VectorQ::new(vec![q(2, 1), q(-1, 3), q(1, 1)]),
        ],
    )?;
    for k in 2..=4 {
        let w = WeightAssignment::symbolic(k);
        if build_p_nested(&sys, &w, k)? != build_p_via_q(&sys, &w, k, conv)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat, Var};

    fn v(c: &[i64]) -> VectorQ {
        VectorQ::from_ints(c)
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(
            reflection_matrix(&v(&[1, 0])).unwrap(),
            Matrix::from_rows(vec![vec![int(-1), int(0)], vec![int(0), int(1)]]).unwrap()
        );
        assert_eq!(
            reflection_matrix(&v(&[1, 1])).unwrap(),
            Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(-1), int(0)]]).unwrap()
        );
        let e = VectorQ::new(vec![rat(3, 5), rat(4, 5)]);
        assert_eq!(
            reflection_matrix(&e).unwrap(),
            Matrix::from_rows(vec![
                vec![rat(7, 25), rat(-24, 25)],
                vec![rat(-24, 25), rat(-7, 25)]
            ])
            .unwrap()
        );
        assert!(matches!(reflection_matrix(&v(&[0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn q_examples() {
        assert_eq!(
            q_operator(&[v(&[1, 0])]).unwrap(),
            Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(0)]]).unwrap()
        );
        assert!(q_operator(&[v(&[1, 0]), v(&[0, 2])]).unwrap().is_zero());
        let e = v(&[3, 4]);
        assert_eq!(
            q_operator(&[e.clone(), e]).unwrap(),
            Matrix::from_rows(vec![
                vec![rat(9, 25), rat(12, 25)],
                vec![rat(12, 25), rat(16, 25)]
            ])
            .unwrap()
        );
        assert!(matches!(
            q_operator(&[v(&[1, 0]), v(&[1, 0, 0])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn u_examples() {
        let conv = resolve_convention().unwrap();
        let w1 = WeightAssignment::symbolic(1);
        assert_eq!(u_from_w(&w1, &[4], conv).unwrap(), Poly::var(Var::w(&[5])));
        let w2 = WeightAssignment::symbolic(2);
        assert_eq!(u_from_w(&w2, &[0, 1], conv).unwrap().to_string(), "4*w[1,2] - 4*w[2,1]");
        assert!(u_from_w(&w2, &[0, 0], conv).unwrap().is_zero());
        assert!(matches!(
            u_from_w(&w2, &[0], conv),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn k1_on_a_line() {
        let sys = VectorSystem::new(1, vec![v(&[1])]).unwrap();
        let w = WeightAssignment::symbolic(1);
        let p = build_p_nested(&sys, &w, 1).unwrap();
        assert_eq!(p.get(0, 0), &Poly::var(Var::w(&[1])).scale(&int(2)));
        assert_eq!(p, build_p_via_q(&sys, &w, 1, resolve_convention().unwrap()).unwrap());
    }

    #[test]
    fn parallel_vectors_commute() {
        let sys = VectorSystem::new(2, vec![v(&[1, 1]), v(&[2, 2])]).unwrap();
        let w = WeightAssignment::symbolic(2);
        assert!(build_p_nested(&sys, &w, 2).unwrap().is_zero());
    }

    #[test]
    fn k2_commutator_is_q_difference() {
        let sys = VectorSystem::new(3, vec![v(&[1, -1, 0]), v(&[0, 1, -1])]).unwrap();
        let s1 = reflection_matrix(sys.vector(0)).unwrap();
        let s2 = reflection_matrix(sys.vector(1)).unwrap();
        let comm = s2.mul(&s1).unwrap().sub(&s1.mul(&s2).unwrap()).unwrap();
        let q12 = q_operator(&[sys.vector(0).clone(), sys.vector(1).clone()]).unwrap();
        let q21 = q_operator(&[sys.vector(1).clone(), sys.vector(0).clone()]).unwrap();
        let expect = q12.scale(&int(4)).sub(&q21.scale(&int(4))).unwrap();
        assert_eq!(comm, expect);
    }

    #[test]
    fn equal_weights_give_zero_for_k2() {
        let sys = VectorSystem::new(2, vec![v(&[1, 0]), v(&[1, 1]), v(&[1, 3])]).unwrap();
        let w = WeightAssignment::constant(2, 3, rat(5, 3));
        assert!(build_p_via_q(&sys, &w, 2, resolve_convention().unwrap()).unwrap().is_zero());
        assert!(build_p_nested(&sys, &w, 2).unwrap().is_zero());
    }

    #[test]
    fn convention_resolves() {
        let c = resolve_convention().unwrap();
        assert_eq!(c, UConvention::new(Convention::RightFirst, IndexAction::Places));
        let hits = UConvention::CANDIDATES
            .iter()
            .filter(|&&c| convention_matches(c).unwrap())
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn u3_matches_hand_expansion() {
        // [s3,[s2,s1]] = -8 [Q3,[Q2,Q1]] expanded into chains Q(e_a,e_b,e_c)
        let w = WeightAssignment::symbolic(3);
        let u = u_from_w(&w, &[0, 1, 2], resolve_convention().unwrap()).unwrap();
        assert_eq!(
            u.to_string(),
            "-8*w[1,2,3] + 8*w[2,1,3] + 8*w[2,3,1] - 8*w[3,2,1]"
        );
    }
}
