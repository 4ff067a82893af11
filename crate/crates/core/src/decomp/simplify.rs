use std::collections::VecDeque;

use crate::decomp::DecompositionGraph;
use crate::error::{Error, Result};
use crate::Color;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryEntry {
    pub vertex: usize,
    /// Conflict neighbors still present when `vertex` was hidden.
    pub conflict_neighbors: Vec<usize>,
    /// Stitch neighbors still present when `vertex` was hidden.
    pub stitch_neighbors: Vec<usize>,
}

/// Hidden vertices in removal order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecoveryStack {
    entries: Vec<RecoveryEntry>,
}

impl RecoveryStack {
    pub fn entries(&self) -> &[RecoveryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A connected piece of the reduced graph, locally re-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub graph: DecompositionGraph,
    /// `vertices[i]` is the original index of local vertex `i`, ascending.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub components: Vec<Component>,
    pub stack: RecoveryStack,
}

impl Simplified {
    /// Scatters per-component colorings back onto original vertex indices.
    pub fn merge(&self, n: usize, colorings: &[Vec<Color>]) -> Result<Vec<Option<Color>>> {
        if colorings.len() != self.components.len() {
            return Err(Error::contract(format!(
                "{} colorings for {} components",
                colorings.len(),
                self.components.len()
            )));
        }
        let mut out = vec![None; n];
        for (comp, colors) in self.components.iter().zip(colorings) {
            if colors.len() != comp.vertices.len() {
                return Err(Error::contract("component coloring has the wrong length"));
            }
            for (&v, &c) in comp.vertices.iter().zip(colors) {
                out[v] = Some(c);
            }
        }
        Ok(out)
    }
}

/// Hides every vertex whose combined CE+SE degree is below `k` (repeating
/// until none is left) and splits what survives into connected components.
pub fn simplify(dg: &DecompositionGraph, k: usize) -> Result<Simplified> {
    if k < 2 {
        return Err(Error::contract(format!("mask count must be at least 2, got {k}")));
    }
    let n = dg.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| dg.degree(v)).collect();
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if degree[v] < k {
            queued[v] = true;
            queue.push_back(v);
        }
    }

    let mut stack = RecoveryStack::default();
    while let Some(v) = queue.pop_front() {
        let live = |adj: &[usize]| adj.iter().copied().filter(|&u| alive[u]).collect::<Vec<_>>();
        let entry = RecoveryEntry {
            vertex: v,
            conflict_neighbors: live(dg.conflict_neighbors(v)),
            stitch_neighbors: live(dg.stitch_neighbors(v)),
        };
        alive[v] = false;
        for &u in entry.conflict_neighbors.iter().chain(&entry.stitch_neighbors) {
            degree[u] -= 1;
            if degree[u] < k && !queued[u] {
                queued[u] = true;
                queue.push_back(u);
            }
        }
        stack.entries.push(entry);
    }

    // Connected components over CE ∪ SE among survivors.
    const NONE: usize = usize::MAX;
    let mut comp_of = vec![NONE; n];
    let mut local = vec![0; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if !alive[s] || comp_of[s] != NONE {
            continue;
        }
        let id = members.len();
        let mut verts = vec![s];
        comp_of[s] = id;
        let mut head = 0;
        while head < verts.len() {
            let v = verts[head];
            head += 1;
            for &u in dg.conflict_neighbors(v).iter().chain(dg.stitch_neighbors(v)) {
                if alive[u] && comp_of[u] == NONE {
                    comp_of[u] = id;
                    verts.push(u);
                }
            }
        }
        verts.sort_unstable();
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        members.push(verts);
    }

    let mut ce: Vec<Vec<(usize, usize)>> = vec![Vec::new(); members.len()];
    let mut se: Vec<Vec<(usize, usize)>> = vec![Vec::new(); members.len()];
    for (edges, buckets) in [(dg.conflict_edges(), &mut ce), (dg.stitch_edges(), &mut se)] {
        for &(u, v) in edges {
            if alive[u] && alive[v] {
                buckets[comp_of[u]].push((local[u], local[v]));
            }
        }
    }

    let mut components = Vec::with_capacity(members.len());
    for ((vertices, ce), se) in members.into_iter().zip(ce).zip(se) {
        let mut graph = DecompositionGraph::new(vertices.len(), ce, se)?;
        if let Some(origin) = dg.origin() {
            graph = graph.with_origin(vertices.iter().map(|&v| origin[v].clone()).collect())?;
        }
        components.push(Component { graph, vertices });
    }
    Ok(Simplified { components, stack })
}

/// Re-inserts hidden vertices last-in-first-out. Each takes a color unused
/// by its colored conflict neighbors, preferring the one that cuts the
/// fewest stitch edges, then the lowest index.
pub fn recover(
    colors: &[Option<Color>],
    stack: &RecoveryStack,
    dg: &DecompositionGraph,
    k: usize,
) -> Result<Vec<Color>> {
    if colors.len() != dg.n() {
        return Err(Error::contract(format!(
            "assignment has {} entries for {} vertices",
            colors.len(),
            dg.n()
        )));
    }
    let mut hidden = vec![false; dg.n()];
    for e in stack.entries() {
        hidden[e.vertex] = true;
    }
    let mut out = colors.to_vec();
    for (v, c) in out.iter_mut().enumerate() {
        if hidden[v] {
            *c = None;
            continue;
        }
        match *c {
            Some(c) if c < k => {}
            Some(c) => return Err(Error::contract(format!("vertex {v} has color {c} outside 0..{k}"))),
            None => return Err(Error::contract(format!("surviving vertex {v} has no color"))),
        }
    }

    let mut used = vec![false; k];
    for e in stack.entries().iter().rev() {
        used.iter_mut().for_each(|u| *u = false);
        for &u in &e.conflict_neighbors {
            let c = out[u].ok_or_else(|| Error::contract(format!("neighbor {u} of {} uncolored", e.vertex)))?;
            used[c] = true;
        }
        let mut best: Option<(usize, Color)> = None;
        for c in (0..k).filter(|&c| !used[c]) {
            let mut cut = 0;
            for &u in &e.stitch_neighbors {
                if out[u].ok_or_else(|| Error::contract(format!("neighbor {u} of {} uncolored", e.vertex)))? != c {
                    cut += 1;
                }
            }
            if best.is_none_or(|(b, _)| cut < b) {
                best = Some((cut, c));
            }
        }
        let (_, c) =
            best.ok_or_else(|| Error::contract(format!("no conflict-free color left for hidden vertex {}", e.vertex)))?;
        out[e.vertex] = Some(c);
    }
    Ok(out.into_iter().map(|c| c.expect("every vertex colored")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ce_graph(n: usize, ce: &[(usize, usize)]) -> DecompositionGraph {
        DecompositionGraph::new(n, ce.iter().copied(), []).unwrap()
    }

    fn k4() -> DecompositionGraph {
        ce_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn two_triangles() -> DecompositionGraph {
        ce_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    }

    #[test]
    fn path_collapses() {
        let s = simplify(&ce_graph(3, &[(0, 1), (1, 2)]), 3).unwrap();
        assert!(s.components.is_empty());
        assert_eq!(s.stack.len(), 3);
    }

    #[test]
    fn k4_survives_whole() {
        let g = k4();
        let s = simplify(&g, 3).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].graph, g);
        assert!(s.stack.is_empty());
    }

    #[test]
    fn triangles_hide_at_k3_survive_at_k2() {
        let s = simplify(&two_triangles(), 3).unwrap();
        assert!(s.components.is_empty());
        assert_eq!(s.stack.len(), 6);

        let s = simplify(&two_triangles(), 2).unwrap();
        assert_eq!(s.components.len(), 2);
        assert!(s.stack.is_empty());
        assert_eq!(s.components[1].vertices, vec![3, 4, 5]);
    }

    #[test]
    fn snapshots_only_name_live_vertices() {
        // Pendant 4 hangs off K4; it hides first and sees vertex 0.
        let g = ce_graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]);
        let s = simplify(&g, 3).unwrap();
        assert_eq!(s.stack.entries()[0].vertex, 4);
        assert_eq!(s.stack.entries()[0].conflict_neighbors, vec![0]);
        assert_eq!(s.components[0].vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k_below_two_is_rejected() {
        assert!(matches!(simplify(&k4(), 1), Err(Error::Contract(_))));
    }

    #[test]
    fn recover_examples() {
        // Hidden vertex 3 with conflict neighbors colored 0 and 1.
        let g = ce_graph(4, &[(0, 3), (1, 3)]);
        let stack = RecoveryStack {
            entries: vec![RecoveryEntry {
                vertex: 3,
                conflict_neighbors: vec![0, 1],
                stitch_neighbors: vec![],
            }],
        };
        let out = recover(&[Some(0), Some(1), Some(0), None], &stack, &g, 3).unwrap();
        assert_eq!(out[3], 2);

        // Stitch neighbor colored 1 wins over the lowest-index tie-break.
        let g = DecompositionGraph::new(2, [], [(0, 1)]).unwrap();
        let stack = RecoveryStack {
            entries: vec![RecoveryEntry {
                vertex: 1,
                conflict_neighbors: vec![],
                stitch_neighbors: vec![0],
            }],
        };
        assert_eq!(recover(&[Some(1), None], &stack, &g, 3).unwrap(), vec![1, 1]);

        // No colored neighbors: lowest index.
        let g = ce_graph(1, &[]);
        let stack = RecoveryStack {
            entries: vec![RecoveryEntry {
                vertex: 0,
                conflict_neighbors: vec![],
                stitch_neighbors: vec![],
            }],
        };
        assert_eq!(recover(&[None], &stack, &g, 4).unwrap(), vec![0]);
    }

    #[test]
    fn recover_rejects_missing_survivor_color() {
        let g = k4();
        let s = simplify(&g, 3).unwrap();
        let err = recover(&[Some(0), None, Some(1), Some(2)], &s.stack, &g, 3).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        let err = recover(&[Some(0), Some(3), Some(1), Some(2)], &s.stack, &g, 3).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn full_collapse_recovers_proper_coloring() {
        let g = two_triangles();
        let s = simplify(&g, 3).unwrap();
        let colors = recover(&s.merge(6, &[]).unwrap(), &s.stack, &g, 3).unwrap();
        for &(u, v) in g.conflict_edges() {
            assert_ne!(colors[u], colors[v]);
        }
    }
}
