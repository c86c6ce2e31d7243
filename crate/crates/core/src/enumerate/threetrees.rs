use std::collections::BTreeSet;

use serde::Serialize;

use crate::commutators::{Convention, Permutation};
use crate::error::{Error, Result};
use crate::ring::Poly;

/// Set of `m` triangles `(i, j, k)`, `i < j < k`, on `2m + 1` vertices
/// whose union is connected. The list order is the edge numbering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThreeTree {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
}

fn covers_connected(v: usize, triangles: &[[usize; 3]]) -> bool {
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut covered = vec![false; v];
    for t in triangles {
        for &x in t {
            covered[x] = true;
        }
        for &x in &t[1..] {
            let (a, b) = (find(&mut parent, t[0]), find(&mut parent, x));
            parent[a] = b;
        }
    }
    if !covered.iter().all(|&c| c) {
        return false;
    }
    let r = find(&mut parent, 0);
    (0..v).all(|x| find(&mut parent, x) == r)
}

/// All 3-trees with `m` triangles on the vertices `0..v`; requires `v = 2m + 1`.
pub fn enumerate_3trees(m: usize, v: usize) -> Result<Vec<ThreeTree>> {
    if v != 2 * m + 1 {
        return Err(Error::Precondition(format!(
            "a 3-tree with {m} triangles has {} vertices, not {v}",
            2 * m + 1
        )));
    }
    let mut triples = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            for k in j + 1..v {
                triples.push([i, j, k]);
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<[usize; 3]> = Vec::with_capacity(m);
    fn rec(
        triples: &[[usize; 3]],
        from: usize,
        m: usize,
        v: usize,
        chosen: &mut Vec<[usize; 3]>,
        out: &mut Vec<ThreeTree>,
    ) {
        if chosen.len() == m {
            if covers_connected(v, chosen) {
                out.push(ThreeTree {
                    vertex_count: v,
                    triangles: chosen.clone(),
                });
            }
            return;
        }
        for i in from..triples.len() {
            if triples.len() - i < m - chosen.len() {
                break;
            }
            chosen.push(triples[i]);
            rec(triples, i + 1, m, v, chosen, out);
            chosen.pop();
        }
    }
    rec(&triples, 0, m, v, &mut chosen, &mut out);
    Ok(out)
}

/// `V - E + F` of the 2-complex spanned by the triangles.
pub fn euler_characteristic(triangles: &[[usize; 3]]) -> i64 {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for t in triangles {
        verts.extend(t.iter().copied());
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    verts.len() as i64 - edges.len() as i64 + triangles.len() as i64
}

/// Sign of the order in which the vertices appear in the cycle obtained
/// by multiplying the 3-cycles `(i j k)` in the given numbering, read from
/// vertex 0.
pub fn delta_sign(vertex_count: usize, triangles: &[[usize; 3]], conv: Convention) -> Result<i32> {
    let mut product = Permutation::identity(vertex_count);
    for t in triangles {
        let mut images: Vec<usize> = (0..vertex_count).collect();
        images[t[0]] = t[1];
        images[t[1]] = t[2];
        images[t[2]] = t[0];
        let c = Permutation::from_images(images)
            .ok_or_else(|| Error::Precondition(format!("degenerate triangle {t:?}")))?;
        product = product.compose(&c, conv);
    }
    let mut order = Vec::with_capacity(vertex_count);
    let mut x = 0;
    loop {
        order.push(x);
        x = product.apply(x);
        if x == 0 {
            break;
        }
    }
    if order.len() != vertex_count {
        return Err(Error::NotSingleCycle(order.len()));
    }
    Ok(Permutation::from_images(order).unwrap().sign())
}

/// `Σ δ(T) Π_{(i,j,k) ∈ T} u(i, j, k)` over 3-trees with `m` triangles.
pub fn three_tree_sum<F: Fn(usize, usize, usize) -> Poly>(
    m: usize,
    conv: Convention,
    u: F,
) -> Result<Poly> {
    let v = 2 * m + 1;
    let mut total = Poly::zero();
    for t in enumerate_3trees(m, v)? {
        let mut term = Poly::constant(crate::ring::int(delta_sign(v, &t.triangles, conv)?.into()));
        for &[i, j, k] in &t.triangles {
            term = &term * &u(i, j, k);
        }
        total += &term;
    }
    Ok(total)
}

/// The tree with triangles `(0,1,2), (0,3,4), ..., (0, 2m-1, 2m)`.
pub fn base_three_tree(m: usize) -> ThreeTree {
    ThreeTree {
        vertex_count: 2 * m + 1,
        triangles: (0..m).map(|s| [0, 2 * s + 1, 2 * s + 2]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(m: usize) -> usize {
        // (2m+1)^(m-1) (2m)! / (m! 2^m)
        let f = |n: usize| (1..=n).product::<usize>();
        (2 * m + 1).pow(m as u32 - 1) * f(2 * m) / (f(m) << m)
    }

    #[test]
    fn counts() {
        let one = enumerate_3trees(1, 3).unwrap();
        assert_eq!(one, [ThreeTree {
            vertex_count: 3,
            triangles: vec![[0, 1, 2]]
        }]);
        for m in 1..=3 {
            assert_eq!(enumerate_3trees(m, 2 * m + 1).unwrap().len(), count(m));
        }
        assert!(matches!(enumerate_3trees(1, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn m2_matches_pair_brute_force() {
        let mut triples = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                for k in j + 1..5 {
                    triples.push([i, j, k]);
                }
            }
        }
        let mut brute = 0;
        for a in 0..triples.len() {
            for b in a + 1..triples.len() {
                let s: BTreeSet<usize> = triples[a].iter().chain(&triples[b]).copied().collect();
                // two triangles on five vertices share exactly one vertex
                if s.len() == 5 {
                    brute += 1;
                }
            }
        }
        assert_eq!(enumerate_3trees(2, 5).unwrap().len(), brute);
    }

    #[test]
    fn all_contractible() {
        for m in 1..=3 {
            for t in enumerate_3trees(m, 2 * m + 1).unwrap() {
                assert_eq!(euler_characteristic(&t.triangles), 1);
            }
        }
    }

    #[test]
    fn delta_examples() {
        for conv in [Convention::RightFirst, Convention::LeftFirst] {
            assert_eq!(delta_sign(3, &[[0, 1, 2]], conv).unwrap(), 1);
            for m in 1..=3 {
                let b = base_three_tree(m);
                assert_eq!(delta_sign(b.vertex_count, &b.triangles, conv).unwrap(), 1);
            }
        }
        assert!(matches!(
            delta_sign(5, &[[0, 1, 2]], Convention::RightFirst),
            Err(Error::NotSingleCycle(3))
        ));
    }

    #[test]
    fn delta_independent_of_numbering() {
        for t in enumerate_3trees(2, 5).unwrap() {
            let mut rev = t.triangles.clone();
            rev.reverse();
            let conv = Convention::RightFirst;
            assert_eq!(
                delta_sign(5, &t.triangles, conv).unwrap(),
                delta_sign(5, &rev, conv).unwrap()
            );
        }
    }
}
