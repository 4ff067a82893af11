//! Synthetic instances: random routed-wire layouts and random
//! decomposition graphs. Both are deterministic per seed.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::decomp::DecompositionGraph;
use crate::error::{Error, Result};
use crate::geometry::{Layout, Rect};
use crate::rng::seeded;

/// Horizontal wires on evenly spaced tracks. Wire lengths and the spaces
/// between consecutive wires on a track are uniform in their ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutParams {
    pub rects: usize,
    pub wire_width: i64,
    pub track_pitch: i64,
    pub min_len: i64,
    pub max_len: i64,
    pub min_space: i64,
    pub max_space: i64,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            rects: 100,
            wire_width: 40,
            track_pitch: 150,
            min_len: 60,
            max_len: 600,
            min_space: 60,
            max_space: 380,
            seed: 0,
        }
    }
}

impl LayoutParams {
    fn validate(&self) -> Result<()> {
        let ok = self.wire_width > 0
            && self.track_pitch > self.wire_width
            && 0 < self.min_len
            && self.min_len <= self.max_len
            && 0 < self.min_space
            && self.min_space <= self.max_space;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "infeasible layout parameters: need 0 < wire_width < track_pitch, \
                 0 < min_len <= max_len, 0 < min_space <= max_space; got {self:?}"
            )))
        }
    }
}

pub fn random_layout(params: &LayoutParams) -> Result<Layout> {
    params.validate()?;
    let mut rng = seeded(params.seed);
    // Pick a track length that makes the field roughly square.
    let span = (params.min_len + params.max_len + params.min_space + params.max_space) as f64 / 2.0;
    let per_track = ((params.rects as f64 * params.track_pitch as f64 / span).sqrt().ceil() as i64).max(1);
    let track_len = (per_track as f64 * span) as i64;

    let mut rects = Vec::with_capacity(params.rects);
    let mut track = 0i64;
    while rects.len() < params.rects {
        let y = track * params.track_pitch;
        let mut x = rng.gen_range(0..=params.max_space);
        while rects.len() < params.rects {
            let len = rng.gen_range(params.min_len..=params.max_len);
            if x + len > track_len && x > 0 {
                break;
            }
            rects.push(Rect::new(
                format!("w{}", rects.len()),
                [x, x + len],
                [y, y + params.wire_width],
            ));
            x += len + rng.gen_range(params.min_space..=params.max_space);
        }
        track += 1;
    }
    Layout::new(rects)
}

/// Random graph with `n` vertices, `ce` conflict edges and `se` stitch
/// edges. Stitch edges join consecutive vertices `(i, i + 1)`, so each run of
/// stitched vertices reads as one split feature.
pub fn random_graph(n: usize, ce: usize, se: usize, seed: u64) -> Result<DecompositionGraph> {
    if se > n.saturating_sub(1) {
        return Err(Error::invalid(format!(
            "{se} stitch edges do not fit on {n} vertices (at most {})",
            n.saturating_sub(1)
        )));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if ce > pairs - se {
        return Err(Error::invalid(format!(
            "{ce} conflict edges exceed the {} free vertex pairs",
            pairs - se
        )));
    }
    let mut rng = seeded(seed);
    let mut stitches: Vec<(usize, usize)> = if se == 0 {
        Vec::new()
    } else {
        index::sample(&mut rng, n - 1, se)
            .into_iter()
            .map(|i| (i, i + 1))
            .collect()
    };
    stitches.sort_unstable();
    let taken: HashSet<(usize, usize)> = stitches.iter().copied().collect();

    let conflicts: Vec<(usize, usize)> = if ce * 2 <= pairs {
        let mut chosen = HashSet::with_capacity(ce);
        let mut out = Vec::with_capacity(ce);
        while out.len() < ce {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            let e = (u.min(v), u.max(v));
            if u != v && !taken.contains(&e) && chosen.insert(e) {
                out.push(e);
            }
        }
        out
    } else {
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !taken.contains(e))
            .collect();
        index::sample(&mut rng, free.len(), ce)
            .into_iter()
            .map(|i| free[i])
            .collect()
    };
    DecompositionGraph::new(n, conflicts, stitches)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts_and_determinism() {
        let g = random_graph(10, 12, 3, 5).unwrap();
        assert_eq!(g.conflict_edges().len(), 12);
        assert_eq!(g.stitch_edges().len(), 3);
        assert!(g.stitch_edges().iter().all(|&(u, v)| v == u + 1));
        assert_eq!(g, random_graph(10, 12, 3, 5).unwrap());
    }

    #[test]
    fn dense_graph_uses_enumeration() {
        let g = random_graph(6, 14, 1, 0).unwrap();
        assert_eq!(g.conflict_edges().len(), 14);
        assert!(random_graph(6, 15, 1, 0).is_err());
        assert_eq!(random_graph(6, 15, 0, 0).unwrap().conflict_edges().len(), 15);
    }

    #[test]
    fn infeasible_graphs() {
        assert!(random_graph(0, 0, 0, 0).unwrap().is_empty());
        assert!(random_graph(0, 1, 0, 0).is_err());
        assert!(random_graph(3, 0, 3, 0).is_err());
    }

    #[test]
    fn layout_counts_and_validity() {
        let p = LayoutParams {
            rects: 250,
            seed: 9,
            ..Default::default()
        };
        let l = random_layout(&p).unwrap();
        assert_eq!(l.rects.len(), 250);
        assert_eq!(l.features().len(), 250);
        assert_eq!(l, random_layout(&p).unwrap());
        assert!(random_layout(&LayoutParams { track_pitch: 40, ..p }).is_err());
    }

    #[test]
    fn empty_layout() {
        let l = random_layout(&LayoutParams {
            rects: 0,
            ..Default::default()
        })
        .unwrap();
        assert!(l.rects.is_empty());
    }
}
