use serde::Serialize;

/// Directed graph on `0..vertex_count` with in- and out-degree at most one
/// at every vertex. Edges are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Doomb {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Chain,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// Positions in the edge list, in the order of traversal.
    pub edges: Vec<usize>,
}

impl Component {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoombClass {
    pub valid: bool,
    pub components: Vec<Component>,
}

/// Checks the degree conditions and splits the edges into oriented chains
/// and cycles, ordered by least vertex.
pub fn classify_doomb(edges: &[(usize, usize)]) -> DoombClass {
    let n_vert = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let mut out_edge: Vec<Option<usize>> = vec![None; n_vert];
    let mut in_edge: Vec<Option<usize>> = vec![None; n_vert];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if out_edge[a].replace(i).is_some() || in_edge[b].replace(i).is_some() {
            return DoombClass {
                valid: false,
                components: Vec::new(),
            };
        }
    }
    let mut used = vec![false; edges.len()];
    let mut comps: Vec<(usize, Component)> = Vec::new();
    // chains start at an edge whose tail has no incoming edge
    for (i, &(a, _)) in edges.iter().enumerate() {
        if in_edge[a].is_some() {
            continue;
        }
        let mut list = Vec::new();
        let mut cur = Some(i);
        let mut least = a;
        while let Some(e) = cur {
            used[e] = true;
            list.push(e);
            least = least.min(edges[e].1);
            cur = out_edge[edges[e].1];
        }
        comps.push((
            least,
            Component {
                kind: ComponentKind::Chain,
                edges: list,
            },
        ));
    }
    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        // start the cycle at its least vertex
        let mut least = edges[i].0;
        let mut e = i;
        loop {
            e = out_edge[edges[e].1].unwrap();
            least = least.min(edges[e].0);
            if e == i {
                break;
            }
        }
        let start = out_edge[least].unwrap();
        let mut list = Vec::new();
        let mut e = start;
        loop {
            used[e] = true;
            list.push(e);
            e = out_edge[edges[e].1].unwrap();
            if e == start {
                break;
            }
        }
        comps.push((
            least,
            Component {
                kind: ComponentKind::Cycle,
                edges: list,
            },
        ));
    }
    comps.sort_by_key(|(least, _)| *least);
    DoombClass {
        valid: true,
        components: comps.into_iter().map(|(_, c)| c).collect(),
    }
}

fn for_each_subset<F: FnMut(&[(usize, usize)])>(
    candidates: &[(usize, usize)],
    size: usize,
    distinct_vertices: bool,
    n_vert: usize,
    f: &mut F,
) {
    fn rec<F: FnMut(&[(usize, usize)])>(
        cand: &[(usize, usize)],
        from: usize,
        size: usize,
        distinct: bool,
        tails: &mut [bool],
        heads: &mut [bool],
        chosen: &mut Vec<(usize, usize)>,
        f: &mut F,
    ) {
        if chosen.len() == size {
            f(chosen);
            return;
        }
        let remaining = size - chosen.len();
        for i in from..cand.len() {
            if cand.len() - i < remaining {
                break;
            }
            let (a, b) = cand[i];
            let clash = if distinct {
                tails[a] || heads[a] || tails[b] || heads[b]
            } else {
                tails[a] || heads[b]
            };
            if clash {
                continue;
            }
            tails[a] = true;
            heads[b] = true;
            chosen.push((a, b));
            rec(cand, i + 1, size, distinct, tails, heads, chosen, f);
            chosen.pop();
            tails[a] = false;
            heads[b] = false;
        }
    }
    let mut tails = vec![false; n_vert];
    let mut heads = vec![false; n_vert];
    let mut chosen = Vec::with_capacity(size);
    rec(
        candidates,
        0,
        size,
        distinct_vertices,
        &mut tails,
        &mut heads,
        &mut chosen,
        f,
    );
}

/// All DOOMBs with `n_edges` edges on `n_vertices` labeled vertices, loops
/// included, in lexicographic order of their sorted edge lists.
pub fn enumerate_doombs(n_vertices: usize, n_edges: usize) -> Vec<Doomb> {
    let cand: Vec<(usize, usize)> = (0..n_vertices)
        .flat_map(|a| (0..n_vertices).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for_each_subset(&cand, n_edges, false, n_vertices, &mut |e| {
        out.push(Doomb {
            vertex_count: n_vertices,
            edges: e.to_vec(),
        })
    });
    out
}

/// All directed partial pair matchings with `n_edges` edges: directed
/// edges between distinct vertices, no two sharing a vertex. Loops are
/// not admitted.
pub fn enumerate_pair_matchings(n_vertices: usize, n_edges: usize) -> Vec<Doomb> {
    let cand: Vec<(usize, usize)> = (0..n_vertices)
        .flat_map(|a| (0..n_vertices).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for_each_subset(&cand, n_edges, true, n_vertices, &mut |e| {
        out.push(Doomb {
            vertex_count: n_vertices,
            edges: e.to_vec(),
        })
    });
    out
}

/// Same DOOMB with every edge of component `c` turned around. Edge
/// positions are kept, so term assembly sees the same numbering.
pub fn reverse_component(d: &Doomb, c: usize) -> Doomb {
    let class = classify_doomb(&d.edges);
    let mut edges = d.edges.clone();
    for &e in &class.components[c].edges {
        let (a, b) = edges[e];
        edges[e] = (b, a);
    }
    Doomb {
        vertex_count: d.vertex_count,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let c = classify_doomb(&[(0, 1), (1, 2)]);
        assert!(c.valid);
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].kind, ComponentKind::Chain);
        assert_eq!(c.components[0].size(), 2);

        assert!(!classify_doomb(&[(0, 1), (0, 2)]).valid);

        let l = classify_doomb(&[(0, 0)]);
        assert!(l.valid);
        assert_eq!(l.components[0].kind, ComponentKind::Cycle);
        assert_eq!(l.components[0].size(), 1);
    }

    #[test]
    fn mixed_components_sorted_by_least_vertex() {
        let c = classify_doomb(&[(3, 4), (2, 1), (1, 2), (0, 5)]);
        assert!(c.valid);
        let kinds: Vec<_> = c.components.iter().map(|c| (c.kind, c.size())).collect();
        assert_eq!(
            kinds,
            [
                (ComponentKind::Chain, 1),
                (ComponentKind::Cycle, 2),
                (ComponentKind::Chain, 1)
            ]
        );
        // the cycle is traversed from its least vertex
        assert_eq!(c.components[1].edges, [2, 1]);
    }

    #[test]
    fn enumeration_examples() {
        let one = enumerate_doombs(2, 1);
        let edges: Vec<_> = one.iter().map(|d| d.edges[0]).collect();
        assert_eq!(edges, [(0, 0), (0, 1), (1, 0), (1, 1)]);

        let two: Vec<_> = enumerate_doombs(2, 2).into_iter().map(|d| d.edges).collect();
        assert_eq!(two, [vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);

        assert!(enumerate_doombs(1, 2).is_empty());
        assert_eq!(enumerate_doombs(3, 0).len(), 1);
    }

    #[test]
    fn doomb_count_matches_brute_force() {
        // edge subsets of the complete digraph with loops, filtered by degree
        for nv in 1..=3usize {
            let all: Vec<(usize, usize)> = (0..nv).flat_map(|a| (0..nv).map(move |b| (a, b))).collect();
            for ne in 0..=nv {
                let mut brute = 0;
                for mask in 0u32..(1 << all.len()) {
                    if mask.count_ones() as usize != ne {
                        continue;
                    }
                    let e: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
                    let outs: std::collections::HashSet<_> = e.iter().map(|x| x.0).collect();
                    let ins: std::collections::HashSet<_> = e.iter().map(|x| x.1).collect();
                    if outs.len() == ne && ins.len() == ne {
                        brute += 1;
                    }
                }
                assert_eq!(enumerate_doombs(nv, ne).len(), brute, "N={nv} n={ne}");
            }
        }
    }

    #[test]
    fn matchings() {
        // ordered pairs of distinct vertices
        assert_eq!(enumerate_pair_matchings(3, 1).len(), 6);
        // 4 vertices, 2 disjoint directed edges: 3 pairings * 4 orientations
        assert_eq!(enumerate_pair_matchings(4, 2).len(), 12);
        assert!(enumerate_pair_matchings(3, 2).is_empty());
    }

    #[test]
    fn reversal_keeps_positions() {
        let d = Doomb {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 0), (3, 3)],
        };
        let r = reverse_component(&d, 0);
        assert_eq!(r.edges, [(1, 0), (2, 1), (0, 2), (3, 3)]);
        assert!(classify_doomb(&r.edges).valid);
    }
}
