//! Decomposition graphs: conflict edges (CE), stitch edges (SE) and the
//! transformations between the layout graph and the solver's input.

mod simplify;
mod stitch;

pub use simplify::{recover, simplify, Component, RecoveryEntry, RecoveryStack, Simplified};
pub use stitch::insert_stitch_candidates;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;

/// Where a decomposition vertex came from in the layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrigin {
    pub feature_id: String,
    /// Rectangles (or rectangle segments after a stitch split) covered by the vertex.
    pub segments: Vec<Rect>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionGraph {
    n: usize,
    ce: Vec<(usize, usize)>,
    se: Vec<(usize, usize)>,
    ce_adj: Vec<Vec<usize>>,
    se_adj: Vec<Vec<usize>>,
    origin: Option<Vec<VertexOrigin>>,
}

fn normalize(kind: &str, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::invalid(format!(
                "{kind} edge ({u}, {v}) references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("{kind} edge ({u}, {v}) is a self-loop")));
        }
        out.push((u.min(v), u.max(v)));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

impl DecompositionGraph {
    /// Builds a graph from unordered edge lists. Duplicate pairs collapse.
    pub fn new(
        n: usize,
        ce: impl IntoIterator<Item = (usize, usize)>,
        se: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let ce = normalize("conflict", n, ce)?;
        let se = normalize("stitch", n, se)?;
        // Both lists are sorted, so a merge finds shared pairs.
        let (mut i, mut j) = (0, 0);
        while i < ce.len() && j < se.len() {
            match ce[i].cmp(&se[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    return Err(Error::invalid(format!(
                        "pair {:?} is both a conflict and a stitch edge",
                        ce[i]
                    )))
                }
            }
        }
        Ok(DecompositionGraph {
            n,
            ce_adj: adjacency(n, &ce),
            se_adj: adjacency(n, &se),
            ce,
            se,
            origin: None,
        })
    }

    /// Attaches layout origins. Stitch edges must join vertices of one feature.
    pub fn with_origin(mut self, origin: Vec<VertexOrigin>) -> Result<Self> {
        if origin.len() != self.n {
            return Err(Error::contract(format!(
                "origin has {} entries for {} vertices",
                origin.len(),
                self.n
            )));
        }
        for &(u, v) in &self.se {
            if origin[u].feature_id != origin[v].feature_id {
                return Err(Error::invalid(format!(
                    "stitch edge ({u}, {v}) joins features {:?} and {:?}",
                    origin[u].feature_id, origin[v].feature_id
                )));
            }
        }
        self.origin = Some(origin);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn conflict_edges(&self) -> &[(usize, usize)] {
        &self.ce
    }

    pub fn stitch_edges(&self) -> &[(usize, usize)] {
        &self.se
    }

    pub fn conflict_neighbors(&self, v: usize) -> &[usize] {
        &self.ce_adj[v]
    }

    pub fn stitch_neighbors(&self, v: usize) -> &[usize] {
        &self.se_adj[v]
    }

    /// CE degree plus SE degree.
    pub fn degree(&self, v: usize) -> usize {
        self.ce_adj[v].len() + self.se_adj[v].len()
    }

    pub fn origin(&self) -> Option<&[VertexOrigin]> {
        self.origin.as_deref()
    }

    /// Vertex order by descending combined degree, ties by index.
    pub fn degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            n: self.n,
            ce: self.ce.iter().map(|&(u, v)| [u, v]).collect(),
            se: self.se.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&doc).expect("graph serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    ce: Vec<[usize; 2]>,
    se: Vec<[usize; 2]>,
}

/// Parses the `{"n": .., "ce": [[u,v],..], "se": [[u,v],..]}` format.
pub fn parse_graph(text: &str) -> Result<DecompositionGraph> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    DecompositionGraph::new(
        doc.n,
        doc.ce.into_iter().map(|[u, v]| (u, v)),
        doc.se.into_iter().map(|[u, v]| (u, v)),
    )
}
