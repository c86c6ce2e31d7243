use serde::Serialize;

use crate::commutators::Permutation;
use crate::error::{Error, Result};
use crate::ring::Poly;

/// Labeled tree on `0..vertex_count` with edges stored as sorted `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LabeledTree {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

fn prufer_decode(seq: &[usize], v: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; v];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(v - 1);
    for &x in seq {
        let leaf = (0..v).find(|&i| degree[i] == 1).unwrap();
        edges.push((leaf.min(x), leaf.max(x)));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..v).filter(|&i| degree[i] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.sort_unstable();
    edges
}

/// All labeled trees on `v` vertices, in Prüfer-sequence order.
pub fn enumerate_trees(v: usize) -> Vec<LabeledTree> {
    match v {
        0 => Vec::new(),
        1 => vec![LabeledTree {
            vertex_count: 1,
            edges: Vec::new(),
        }],
        _ => {
            let len = v - 2;
            let total = v.pow(len as u32);
            (0..total)
                .map(|mut code| {
                    let mut seq = vec![0; len];
                    for s in seq.iter_mut().rev() {
                        *s = code % v;
                        code /= v;
                    }
                    LabeledTree {
                        vertex_count: v,
                        edges: prufer_decode(&seq, v),
                    }
                })
                .collect()
        }
    }
}

/// True when the undirected edges form a spanning tree of `0..v`.
pub fn is_tree(v: usize, edges: &[(usize, usize)]) -> bool {
    if v == 0 || edges.len() + 1 != v {
        return false;
    }
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        if a >= v || b >= v {
            return false;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Parent of every vertex when the tree is rooted at 0 (`None` for the root).
fn parents(v: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; v];
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                stack.push(y);
            }
        }
    }
    parent
}

/// Sign of the volume of the roots `f_a - f_b` for the directed edges
/// `(a, b)` of a tree on `0..=n`: the sign of the permutation sending the
/// t-th edge to its endpoint away from vertex 0, times `-1` per edge that
/// points towards vertex 0.
pub fn tree_volume_sign(vertex_count: usize, edges: &[(usize, usize)]) -> Result<i32> {
    if !is_tree(vertex_count, edges) {
        return Err(Error::NotATree(vertex_count));
    }
    let parent = parents(vertex_count, edges);
    let mut outer = Vec::with_capacity(edges.len());
    let mut rootward = 0;
    for &(a, b) in edges {
        if parent[a] == Some(b) {
            rootward += 1;
            outer.push(a - 1);
        } else {
            outer.push(b - 1);
        }
    }
    let eps1 = Permutation::from_images(outer)
        .expect("outer endpoints of a rooted tree are distinct")
        .sign();
    Ok(if rootward % 2 == 0 { eps1 } else { -eps1 })
}

/// `Σ_T Π_{(i,j) ∈ T} weight(i, j)` over labeled trees on `v` vertices.
pub fn tree_sum<F: Fn(usize, usize) -> Poly>(v: usize, weight: F) -> Poly {
    let mut total = Poly::zero();
    for t in enumerate_trees(v) {
        let mut term = Poly::one();
        for &(a, b) in &t.edges {
            term = &term * &weight(a, b);
        }
        total += &term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cayley_counts() {
        assert_eq!(enumerate_trees(1).len(), 1);
        assert_eq!(enumerate_trees(2).len(), 1);
        assert_eq!(enumerate_trees(3).len(), 3);
        assert_eq!(enumerate_trees(4).len(), 16);
        for v in 2..=6usize {
            let trees = enumerate_trees(v);
            assert_eq!(trees.len(), v.pow(v as u32 - 2));
            let distinct: HashSet<_> = trees.iter().map(|t| t.edges.clone()).collect();
            assert_eq!(distinct.len(), trees.len());
            assert!(trees.iter().all(|t| is_tree(v, &t.edges)));
        }
    }

    #[test]
    fn volume_sign_examples() {
        assert_eq!(tree_volume_sign(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(), 1);
        assert_eq!(tree_volume_sign(2, &[(1, 0)]).unwrap(), -1);
        assert_eq!(tree_volume_sign(4, &[(0, 2), (0, 1), (0, 3)]).unwrap(), -1);
        assert!(matches!(
            tree_volume_sign(3, &[(0, 1), (1, 0)]),
            Err(Error::NotATree(_))
        ));
    }

    #[test]
    fn unit_tree_sum_is_cayley() {
        let s = tree_sum(4, |_, _| Poly::one());
        assert_eq!(s.as_constant().unwrap(), crate::ring::int(16));
    }
}
