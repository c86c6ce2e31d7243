//! The root systems `A_n`, `B_n`, `D_n` as vector systems with integer
//! coordinates, and the matrices `L_w`, `T`, `T_w` built from their weights.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::commutators::WeightAssignment;
use crate::enumerate::{b_edges, BEdge};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, VectorQ};
use crate::ring::{int, Poly, Var, VarKind};
use crate::system::VectorSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "an",
            Family::B => "bn",
            Family::D => "dn",
        })
    }
}

/// Parsed form of `an:3`, `bn:2`, `dn:3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub rank: usize,
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unknown {
            kind: "family",
            value: s.to_string(),
        };
        let (name, rank) = s.split_once(':').ok_or_else(bad)?;
        let family = match name.to_ascii_lowercase().as_str() {
            "an" | "a" => Family::A,
            "bn" | "b" => Family::B,
            "dn" | "d" => Family::D,
            _ => return Err(bad()),
        };
        let rank: usize = rank.trim().parse().map_err(|_| bad())?;
        let min = if family == Family::D { 2 } else { 1 };
        if rank < min {
            return Err(Error::Precondition(format!("{family} needs rank at least {min}")));
        }
        Ok(FamilySpec { family, rank })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.rank)
    }
}

/// Which abstract root a system vector stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootLabel {
    /// `f_i - f_j`, `i < j`, vertices `0..=n`.
    A(usize, usize),
    /// A `B_n` root on vertices `0..n`.
    B(BEdge),
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLabel::A(i, j) => write!(f, "e{i}{j}"),
            RootLabel::B(BEdge::Minus(i, j)) => write!(f, "e-{}{}", i + 1, j + 1),
            RootLabel::B(BEdge::Plus(i, j)) => write!(f, "e+{}{}", i + 1, j + 1),
            RootLabel::B(BEdge::Loop(i)) => write!(f, "f{}", i + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RootFamily {
    pub family: Family,
    pub rank: usize,
    pub system: VectorSystem,
    pub labels: Vec<RootLabel>,
    index: HashMap<RootLabel, usize>,
}

impl RootFamily {
    pub fn index_of(&self, label: RootLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn label(&self, i: usize) -> RootLabel {
        self.labels[i]
    }

    /// Indeterminate attached to a root: `w[i,j]` for `A_n` (vertex labels
    /// `0..=n`), `wm[i,j]`, `wp[i,j]`, `w[i]` for `B_n` (labels `1..=n`).
    pub fn root_var(&self, label: RootLabel) -> Var {
        match label {
            RootLabel::A(i, j) => Var::new(VarKind::W, &[i, j]),
            RootLabel::B(BEdge::Minus(i, j)) => Var::new(VarKind::WMinus, &[i + 1, j + 1]),
            RootLabel::B(BEdge::Plus(i, j)) => Var::new(VarKind::WPlus, &[i + 1, j + 1]),
            RootLabel::B(BEdge::Loop(i)) => Var::new(VarKind::W, &[i + 1]),
        }
    }

    /// Symbolic arity-1 weights named by root; `D_n` has its loop weights set to zero.
    pub fn symbolic_weights(&self) -> WeightAssignment {
        WeightAssignment::from_fn(1, self.labels.len(), |idx| {
            let l = self.labels[idx[0]];
            if self.family == Family::D && matches!(l, RootLabel::B(BEdge::Loop(_))) {
                Poly::zero()
            } else {
                Poly::var(self.root_var(l))
            }
        })
    }
}

fn unit(dim: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// Builds the family with raw integer roots. `A_n` lives in `R^{n+1}` with
/// reference basis `f_0 - f_1, ..., f_{n-1} - f_n`; `B_n` and `D_n` live in
/// `R^n` with reference basis `f_1 - f_2, ..., f_{n-1} - f_n, f_n`.
pub fn build_family(family: Family, n: usize) -> Result<RootFamily> {
    let (labels, vectors, basis): (Vec<RootLabel>, Vec<VectorQ>, Vec<usize>) = match family {
        Family::A => {
            if n < 1 {
                return Err(Error::Precondition("A_n needs n >= 1".into()));
            }
            let mut labels = Vec::new();
            let mut vectors = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    labels.push(RootLabel::A(i, j));
                    let mut c = vec![0i64; n + 1];
                    c[i] = 1;
                    c[j] = -1;
                    vectors.push(VectorQ::from_ints(&c));
                }
            }
            let pos = |l: RootLabel| labels.iter().position(|&x| x == l).unwrap();
            let basis = (0..n).map(|i| pos(RootLabel::A(i, i + 1))).collect();
            (labels, vectors, basis)
        }
        Family::B | Family::D => {
            let min = if family == Family::D { 2 } else { 1 };
            if n < min {
                return Err(Error::Precondition(format!("{family} needs n >= {min}")));
            }
            let labels: Vec<RootLabel> = b_edges(n).into_iter().map(RootLabel::B).collect();
            let vectors = labels
                .iter()
                .map(|l| match l {
                    RootLabel::B(BEdge::Minus(i, j)) => {
                        let mut c = unit(n, *i);
                        c[*j] = -1;
                        VectorQ::from_ints(&c)
                    }
                    RootLabel::B(BEdge::Plus(i, j)) => {
                        let mut c = unit(n, *i);
                        c[*j] = 1;
                        VectorQ::from_ints(&c)
                    }
                    RootLabel::B(BEdge::Loop(i)) => VectorQ::from_ints(&unit(n, *i)),
                    RootLabel::A(..) => unreachable!(),
                })
                .collect();
            let pos = |l: BEdge| labels.iter().position(|&x| x == RootLabel::B(l)).unwrap();
            let mut basis: Vec<usize> = (0..n - 1).map(|i| pos(BEdge::Minus(i, i + 1))).collect();
            basis.push(pos(BEdge::Loop(n - 1)));
            (labels, vectors, basis)
        }
    };
    let dim = vectors[0].dim();
    let system = VectorSystem::new(dim, vectors)?.with_reference_basis(basis)?;
    let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    Ok(RootFamily {
        family,
        rank: n,
        system,
        labels,
        index,
    })
}

/// Kirchhoff matrix on vertices `0..=n`: off-diagonal `-w(i,j)`, diagonal
/// the sum of the weights at the vertex. `w` is read with `i < j`.
pub fn kirchhoff_matrix<F: Fn(usize, usize) -> Poly>(n: usize, w: F) -> Matrix<Poly> {
    let sym = |i: usize, j: usize| if i < j { w(i, j) } else { w(j, i) };
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j {
            (0..=n).filter(|&k| k != i).map(|k| sym(i, k)).sum()
        } else {
            -sym(i, j)
        }
    })
}

/// Alternation `w_ijk - w_ikj - w_jik - w_kji + w_jki + w_kij`.
pub fn lambda<F: Fn(usize, usize, usize) -> Poly>(w: &F, i: usize, j: usize, k: usize) -> Poly {
    if i == j || j == k || i == k {
        return Poly::zero();
    }
    &(&(&w(i, j, k) - &w(i, k, j)) - &(&w(j, i, k) + &w(k, j, i))) + &(&w(j, k, i) + &w(k, i, j))
}

/// `T = (t_pq)` on vertices `0..=n` with `t_pq = Σ_r λ_pqr`.
pub fn mv_matrix<F: Fn(usize, usize, usize) -> Poly>(n: usize, w: F) -> Matrix<Poly> {
    Matrix::from_fn(n + 1, n + 1, |p, q| (0..=n).map(|r| lambda(&w, p, q, r)).sum())
}

/// `T_w` on vertices `0..n`: off-diagonal `w⁺_ij - w⁻_ij`, diagonal
/// `Σ_{j≠i}(w⁺_ij + w⁻_ij) + 2 w_i`. Pair weights are read with `i < j`.
pub fn bn_matrix<P, M, L>(n: usize, plus: P, minus: M, loops: L) -> Matrix<Poly>
where
    P: Fn(usize, usize) -> Poly,
    M: Fn(usize, usize) -> Poly,
    L: Fn(usize) -> Poly,
{
    let ord = |i: usize, j: usize| (i.min(j), i.max(j));
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let mut d = loops(i).scale(&int(2));
            for k in (0..n).filter(|&k| k != i) {
                let (a, b) = ord(i, k);
                d += &plus(a, b);
                d += &minus(a, b);
            }
            d
        } else {
            let (a, b) = ord(i, j);
            &plus(a, b) - &minus(a, b)
        }
    })
}

/// Arity-2 weights on pairs of `A_n` roots: the pair `(e_ij, e_jk)` of roots
/// sharing the vertex `j` gets `w(i, j, k)`; every other pair gets 0.
pub fn mv_root_pair_weights<F: Fn(usize, usize, usize) -> Poly>(
    fam: &RootFamily,
    w: F,
) -> Result<WeightAssignment> {
    if fam.family != Family::A {
        return Err(Error::Precondition("3-tree weights are defined on A_n".into()));
    }
    let ends = |l: RootLabel| match l {
        RootLabel::A(i, j) => (i, j),
        RootLabel::B(_) => unreachable!(),
    };
    Ok(WeightAssignment::from_fn(2, fam.labels.len(), |idx| {
        let (a, b) = (ends(fam.labels[idx[0]]), ends(fam.labels[idx[1]]));
        let shared: Vec<usize> = [a.0, a.1].into_iter().filter(|x| *x == b.0 || *x == b.1).collect();
        if shared.len() != 1 {
            return Poly::zero();
        }
        let j = shared[0];
        let i = if a.0 == j { a.1 } else { a.0 };
        let k = if b.0 == j { b.1 } else { b.0 };
        w(i, j, k)
    }))
}

/// `w[i,j,k]` indeterminates on vertex labels.
pub fn mv_symbolic(i: usize, j: usize, k: usize) -> Poly {
    Poly::var(Var::new(VarKind::W, &[i, j, k]))
}
