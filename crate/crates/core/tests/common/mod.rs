#![allow(dead_code)]

use proptest::prelude::*;

use mpld::decomp::DecompositionGraph;
use mpld::geometry::{Layout, Rect};
use mpld::Color;

const CELL: i64 = 200;
const GRID: usize = 8;

/// Layouts on an 8x8 grid of 200-unit cells, at most one rectangle per cell,
/// so different features never overlap. Several rectangles may share a
/// feature id.
pub fn layouts() -> impl Strategy<Value = Layout> {
    prop::collection::vec(
        (0..GRID * GRID, 0i64..100, 0i64..100, 1i64..100, 1i64..100, 0usize..12),
        0..30,
    )
    .prop_map(|specs| {
        let mut used = [false; GRID * GRID];
        let rects = specs
            .into_iter()
            .filter(|s| !std::mem::replace(&mut used[s.0], true))
            .map(|(cell, ox, oy, w, h, f)| {
                let x = (cell % GRID) as i64 * CELL + ox;
                let y = (cell / GRID) as i64 * CELL + oy;
                Rect::new(format!("f{f}"), [x, x + w], [y, y + h])
            })
            .collect();
        Layout::new(rects).unwrap()
    })
}

/// Graphs with up to `max_n` vertices and random CE/SE edge sets.
pub fn graphs(max_n: usize) -> impl Strategy<Value = DecompositionGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = prop::collection::vec((0..n, 0..n, any::<bool>()), 0..3 * n);
            (Just(n), pairs)
        })
        .prop_map(|(n, pairs)| {
            let mut ce = Vec::new();
            let mut se = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for (u, v, stitch) in pairs {
                if u == v || !seen.insert((u.min(v), u.max(v))) {
                    continue;
                }
                if stitch {
                    se.push((u, v));
                } else {
                    ce.push((u, v));
                }
            }
            DecompositionGraph::new(n, ce, se).unwrap()
        })
}

/// A graph with a coloring over `k` colors.
pub fn colored(max_n: usize, k: usize) -> impl Strategy<Value = (DecompositionGraph, Vec<Color>)> {
    graphs(max_n).prop_flat_map(move |g| {
        let n = g.n();
        (Just(g), prop::collection::vec(0..k, n))
    })
}

/// Independent cost count straight from the edge lists, scaled by `den`.
pub fn naive_score(g: &DecompositionGraph, colors: &[Color], num: u128, den: u128) -> u128 {
    let cn = g
        .conflict_edges()
        .iter()
        .filter(|&&(u, v)| colors[u] == colors[v])
        .count() as u128;
    let st = g
        .stitch_edges()
        .iter()
        .filter(|&&(u, v)| colors[u] != colors[v])
        .count() as u128;
    den * cn + num * st
}

/// Minimum scaled cost over all `k^n` colorings.
pub fn brute_force_min(g: &DecompositionGraph, k: usize, num: u128, den: u128) -> u128 {
    let n = g.n();
    let mut colors = vec![0; n];
    let mut best = naive_score(g, &colors, num, den);
    loop {
        let mut i = 0;
        while i < n && colors[i] + 1 == k {
            colors[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        colors[i] += 1;
        best = best.min(naive_score(g, &colors, num, den));
    }
}
