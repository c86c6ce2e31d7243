use serde::Serialize;

/// Edge of a graph on `0..n` standing for one `B_n` root: `Minus(i, j)` for
/// `f_i - f_j`, `Plus(i, j)` for `f_i + f_j` (both with `i < j`), `Loop(i)`
/// for `f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BEdge {
    Minus(usize, usize),
    Plus(usize, usize),
    Loop(usize),
}

impl BEdge {
    fn ends(self) -> (usize, usize) {
        match self {
            BEdge::Minus(i, j) | BEdge::Plus(i, j) => (i, j),
            BEdge::Loop(i) => (i, i),
        }
    }
}

/// All `B_n` edges in the canonical order: pair edges by `(i, j)` with the
/// minus edge first, then loops.
pub fn b_edges(n: usize) -> Vec<BEdge> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i + 1..n {
            out.push(BEdge::Minus(i, j));
            out.push(BEdge::Plus(i, j));
        }
    }
    out.extend((0..n).map(BEdge::Loop));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BBasicGraph {
    pub vertex_count: usize,
    pub minus_edges: Vec<(usize, usize)>,
    pub plus_edges: Vec<(usize, usize)>,
    pub loops: Vec<usize>,
    /// Number of connected components.
    pub components: usize,
}

impl BBasicGraph {
    pub fn edges(&self) -> Vec<BEdge> {
        let mut e: Vec<BEdge> = self
            .minus_edges
            .iter()
            .map(|&(i, j)| BEdge::Minus(i, j))
            .chain(self.plus_edges.iter().map(|&(i, j)| BEdge::Plus(i, j)))
            .chain(self.loops.iter().map(|&i| BEdge::Loop(i)))
            .collect();
        e.sort();
        e
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }
}

/// Number of components when every component of the graph has exactly one
/// cycle and that cycle is a loop or has an odd number of plus edges.
pub fn bbasic_components(n: usize, edges: &[BEdge]) -> Option<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in edges {
        let (a, b) = e.ends();
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut verts = vec![0usize; n];
    let mut edge_count = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        verts[r] += 1;
    }
    for e in edges {
        let r = find(&mut parent, e.ends().0);
        edge_count[r] += 1;
    }
    let roots: Vec<usize> = (0..n).filter(|&x| verts[x] > 0).collect();
    if roots.iter().any(|&r| verts[r] != edge_count[r]) {
        return None;
    }
    // strip leaves; what remains is the union of the cycles
    let mut alive = vec![true; edges.len()];
    let mut degree = vec![0usize; n];
    for e in edges {
        let (a, b) = e.ends();
        degree[a] += 1;
        degree[b] += 1;
    }
    loop {
        let leaf = (0..edges.len()).find(|&i| {
            let (a, b) = edges[i].ends();
            alive[i] && a != b && (degree[a] == 1 || degree[b] == 1)
        });
        match leaf {
            Some(i) => {
                alive[i] = false;
                let (a, b) = edges[i].ends();
                degree[a] -= 1;
                degree[b] -= 1;
            }
            None => break,
        }
    }
    for &r in &roots {
        let cycle: Vec<BEdge> = (0..edges.len())
            .filter(|&i| alive[i] && find(&mut parent, edges[i].ends().0) == r)
            .map(|i| edges[i])
            .collect();
        let ok = match cycle.as_slice() {
            [BEdge::Loop(_)] => true,
            c => c.iter().filter(|e| matches!(e, BEdge::Plus(..))).count() % 2 == 1,
        };
        if !ok {
            return None;
        }
    }
    Some(roots.len())
}

pub fn is_bbasic(n: usize, edges: &[BEdge]) -> bool {
    edges.len() == n && bbasic_components(n, edges).is_some()
}

fn graph_from(n: usize, edges: &[BEdge], components: usize) -> BBasicGraph {
    let mut g = BBasicGraph {
        vertex_count: n,
        minus_edges: Vec::new(),
        plus_edges: Vec::new(),
        loops: Vec::new(),
        components,
    };
    for &e in edges {
        match e {
            BEdge::Minus(i, j) => g.minus_edges.push((i, j)),
            BEdge::Plus(i, j) => g.plus_edges.push((i, j)),
            BEdge::Loop(i) => g.loops.push(i),
        }
    }
    g
}

/// All B-basic graphs with `n` vertices and `n` edges, in lexicographic
/// order of their canonical edge lists.
pub fn enumerate_bbasic(n: usize) -> Vec<BBasicGraph> {
    let cand = b_edges(n);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    fn rec(
        cand: &[BEdge],
        from: usize,
        n: usize,
        chosen: &mut Vec<BEdge>,
        out: &mut Vec<BBasicGraph>,
    ) {
        if chosen.len() == n {
            if let Some(d) = bbasic_components(n, chosen) {
                out.push(graph_from(n, chosen, d));
            }
            return;
        }
        for i in from..cand.len() {
            if cand.len() - i < n - chosen.len() {
                break;
            }
            chosen.push(cand[i]);
            rec(cand, i + 1, n, chosen, out);
            chosen.pop();
        }
    }
    rec(&cand, 0, n, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_is_a_single_loop() {
        let g = enumerate_bbasic(1);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].loops, [0]);
        assert_eq!(g[0].components, 1);
    }

    #[test]
    fn n2_every_pair_of_roots() {
        let g = enumerate_bbasic(2);
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn even_plus_cycles_are_excluded() {
        // triangle with two plus edges
        let e = [BEdge::Plus(0, 1), BEdge::Plus(1, 2), BEdge::Minus(0, 2)];
        assert!(!is_bbasic(3, &e));
        let e = [BEdge::Plus(0, 1), BEdge::Minus(1, 2), BEdge::Minus(0, 2)];
        assert!(is_bbasic(3, &e));
        // all-minus cycle
        assert!(!is_bbasic(2, &[BEdge::Minus(0, 1), BEdge::Minus(0, 1)]));
        // tree plus an isolated vertex
        assert!(!is_bbasic(3, &[BEdge::Minus(0, 1), BEdge::Plus(0, 1), BEdge::Loop(0)]));
    }

    #[test]
    fn tree_with_hanging_loop() {
        let e = [BEdge::Minus(0, 1), BEdge::Plus(1, 2), BEdge::Loop(2)];
        assert_eq!(bbasic_components(3, &e), Some(1));
    }
}
