//! Exact minimizer by depth-first branch and bound, for small graphs.
//!
//! Vertices are colored in descending-degree order. Colors are tried
//! cheapest first, and a vertex may open at most one new color class beyond
//! those already used (colors are interchangeable, so this only removes
//! relabelings). A node is pruned when its partial cost plus, for every
//! uncolored vertex, the cheapest cost against already-colored neighbors
//! reaches the incumbent.

use crate::cost::{evaluate, Objective, Solution};
use crate::decomp::DecompositionGraph;
use crate::Color;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub optimum: Solution,
    /// Single-vertex color assignments made during the search.
    pub assignments_examined: u64,
    pub proved_optimal: bool,
}

struct Search<'a> {
    dg: &'a DecompositionGraph,
    k: usize,
    den: u128,
    num: u128,
    order: Vec<usize>,
    colors: Vec<Color>,
    /// `incident[v * k + c]`: cost of `v` taking `c` against colored neighbors.
    incident: Vec<u128>,
    best_colors: Vec<Color>,
    best_score: u128,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, c: Color, sign_add: bool) {
        let k = self.k;
        let bump = |x: &mut u128, d: u128| {
            if sign_add {
                *x += d
            } else {
                *x -= d
            }
        };
        for &u in self.dg.conflict_neighbors(v) {
            bump(&mut self.incident[u * k + c], self.den);
        }
        for &u in self.dg.stitch_neighbors(v) {
            for c2 in (0..k).filter(|&c2| c2 != c) {
                bump(&mut self.incident[u * k + c2], self.num);
            }
        }
        if sign_add {
            self.colors[v] = c;
        }
    }

    fn min_incident(&self, v: usize) -> u128 {
        self.incident[v * self.k..(v + 1) * self.k]
            .iter()
            .copied()
            .min()
            .unwrap_or(0)
    }

    fn bound(&self, depth: usize) -> u128 {
        self.order[depth..].iter().map(|&u| self.min_incident(u)).sum()
    }

    fn dfs(&mut self, depth: usize, partial: u128, used: usize) {
        if depth == self.order.len() {
            if partial < self.best_score {
                self.best_score = partial;
                self.best_colors.copy_from_slice(&self.colors);
            }
            return;
        }
        if partial + self.bound(depth) >= self.best_score {
            return;
        }
        let v = self.order[depth];
        let open = (used + 1).min(self.k);
        let mut choices: Vec<(u128, Color)> = (0..open).map(|c| (self.incident[v * self.k + c], c)).collect();
        choices.sort_unstable();
        for (cost, c) in choices {
            if self.nodes >= self.node_limit {
                self.aborted = true;
                return;
            }
            if partial + cost >= self.best_score {
                break;
            }
            self.nodes += 1;
            self.assign(v, c, true);
            self.dfs(depth + 1, partial + cost, used.max(c + 1));
            self.assign(v, c, false);
            if self.aborted || self.best_score == 0 {
                return;
            }
        }
    }
}

/// Minimum-cost coloring of `dg`. When more than `node_limit` assignments
/// would be needed, returns the best coloring found so far with
/// `proved_optimal == false`.
pub fn exact_min_cost(dg: &DecompositionGraph, obj: &Objective, node_limit: u64) -> OracleResult {
    let n = dg.n();
    let k = obj.k;
    let mut s = Search {
        dg,
        k,
        den: u128::from(obj.alpha.den()),
        num: u128::from(obj.alpha.num()),
        order: dg.degree_order(),
        colors: vec![0; n],
        incident: vec![0; n * k],
        best_colors: vec![0; n],
        best_score: 0,
        nodes: 0,
        node_limit,
        aborted: false,
    };

    // Greedy incumbent along the same order.
    let mut greedy = vec![0; n];
    for i in 0..n {
        let v = s.order[i];
        let c = (0..k).min_by_key(|&c| (s.incident[v * k + c], c)).unwrap_or(0);
        greedy[v] = c;
        s.assign(v, c, true);
    }
    let incumbent = evaluate(dg, greedy, obj).expect("greedy colors are in range");
    s.best_score = incumbent.score;
    s.best_colors.copy_from_slice(&incumbent.colors);
    s.incident.iter_mut().for_each(|x| *x = 0);

    if s.best_score > 0 {
        s.dfs(0, 0, 0);
    }
    let optimum = evaluate(dg, s.best_colors.clone(), obj).expect("search colors are in range");
    debug_assert_eq!(optimum.score, s.best_score);
    OracleResult {
        optimum,
        assignments_examined: s.nodes,
        proved_optimal: !s.aborted,
    }
}
