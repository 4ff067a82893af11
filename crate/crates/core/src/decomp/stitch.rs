use crate::decomp::{DecompositionGraph, VertexOrigin};
use crate::error::Result;
use crate::geometry::{LayoutGraph, Rect};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

impl Axis {
    fn of(r: &Rect) -> Axis {
        if r.width() >= r.height() {
            Axis::X
        } else {
            Axis::Y
        }
    }

    fn extent(self, r: &Rect) -> (i64, i64) {
        match self {
            Axis::X => (r.x_lo, r.x_hi),
            Axis::Y => (r.y_lo, r.y_hi),
        }
    }

    fn with_extent(self, r: &Rect, lo: i64, hi: i64) -> Rect {
        let mut out = r.clone();
        match self {
            Axis::X => (out.x_lo, out.x_hi) = (lo, hi),
            Axis::Y => (out.y_lo, out.y_hi) = (lo, hi),
        }
        out
    }
}

/// How one feature maps onto decomposition vertices.
struct Split {
    first_vertex: usize,
    segments: Vec<Rect>,
    /// Sorted cut coordinates; empty when unsplit.
    cuts: Vec<i64>,
    /// Per conflict neighbor feature: projected interval on the split axis.
    shadows: Vec<(usize, (i64, i64))>,
}

impl Split {
    /// The single sub-vertex that a neighbor's shadow falls into.
    fn vertex_for(&self, neighbor: usize) -> usize {
        if self.cuts.is_empty() {
            return self.first_vertex;
        }
        let (lo, _) = self
            .shadows
            .iter()
            .find(|(g, _)| *g == neighbor)
            .map(|&(_, s)| s)
            .expect("neighbor has a shadow");
        self.first_vertex + self.cuts.partition_point(|&c| c < lo)
    }
}

/// Cut points for a set of neighbor shadows on `[lo, hi]`: one at the
/// midpoint of every gap between consecutive shadow clusters. Gaps narrower
/// than two database units cannot hold an interior integer cut and are skipped.
fn cut_points(shadows: &mut [(i64, i64)]) -> Vec<i64> {
    shadows.sort_unstable();
    let mut cuts = Vec::new();
    let mut reach = match shadows.first() {
        Some(&(_, hi)) => hi,
        None => return cuts,
    };
    for &(lo, hi) in &shadows[1..] {
        if lo - reach >= 2 {
            cuts.push(reach + (lo - reach) / 2);
        }
        reach = reach.max(hi);
    }
    cuts
}

/// Splits single-rectangle features where the shadows of their conflict
/// neighbors leave a gap, joining the pieces with stitch edges. Conflict
/// edges are reattached to the piece under each neighbor's shadow.
pub fn insert_stitch_candidates(lg: &LayoutGraph) -> Result<DecompositionGraph> {
    let rects = &lg.layout.rects;
    let adj = lg.neighbors();

    // Conflicting rects of each rect.
    let mut rect_adj = vec![Vec::new(); rects.len()];
    for &(a, b) in &lg.rect_conflicts {
        rect_adj[a].push(b);
        rect_adj[b].push(a);
    }

    let mut splits: Vec<Split> = Vec::with_capacity(lg.features.len());
    let mut next_vertex = 0;
    for (f, feat) in lg.features.iter().enumerate() {
        let mut split = Split {
            first_vertex: next_vertex,
            segments: feat.rects.iter().map(|&r| rects[r].clone()).collect(),
            cuts: Vec::new(),
            shadows: Vec::new(),
        };
        if feat.rects.len() == 1 && adj[f].len() >= 2 {
            let base = &rects[feat.rects[0]];
            let axis = Axis::of(base);
            let (f_lo, f_hi) = axis.extent(base);
            for &g in &adj[f] {
                let hull = rect_adj[feat.rects[0]]
                    .iter()
                    .filter(|&&r| lg.rect_feature[r] == g)
                    .map(|&r| {
                        let (lo, hi) = axis.extent(&rects[r]);
                        (lo.clamp(f_lo, f_hi), hi.clamp(f_lo, f_hi))
                    })
                    .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
                    .expect("adjacent features have a conflicting rect pair");
                split.shadows.push((g, hull));
            }
            let mut intervals: Vec<(i64, i64)> = split.shadows.iter().map(|&(_, s)| s).collect();
            split.cuts = cut_points(&mut intervals);
            if !split.cuts.is_empty() {
                let mut bounds = vec![f_lo];
                bounds.extend_from_slice(&split.cuts);
                bounds.push(f_hi);
                split.segments = bounds.windows(2).map(|w| axis.with_extent(base, w[0], w[1])).collect();
            }
        }
        next_vertex += if split.cuts.is_empty() { 1 } else { split.segments.len() };
        splits.push(split);
    }

    let mut origin = Vec::with_capacity(next_vertex);
    let mut se = Vec::new();
    for (feat, split) in lg.features.iter().zip(&splits) {
        if split.cuts.is_empty() {
            origin.push(VertexOrigin {
                feature_id: feat.id.clone(),
                segments: split.segments.clone(),
            });
        } else {
            for (i, seg) in split.segments.iter().enumerate() {
                origin.push(VertexOrigin {
                    feature_id: feat.id.clone(),
                    segments: vec![seg.clone()],
                });
                if i > 0 {
                    se.push((split.first_vertex + i - 1, split.first_vertex + i));
                }
            }
        }
    }

    let ce = lg
        .edges
        .iter()
        .map(|&(f, g)| (splits[f].vertex_for(g), splits[g].vertex_for(f)));

    DecompositionGraph::new(next_vertex, ce, se)?.with_origin(origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_layout_graph, Layout};

    fn r(id: &str, x: [i64; 2], y: [i64; 2]) -> Rect {
        Rect::new(id, x, y)
    }

    fn dg_for(rects: Vec<Rect>) -> DecompositionGraph {
        let layout = Layout::new(rects).unwrap();
        insert_stitch_candidates(&build_layout_graph(&layout, 120).unwrap()).unwrap()
    }

    #[test]
    fn single_neighbor_stays_unsplit() {
        let dg = dg_for(vec![r("bar", [0, 100], [0, 10]), r("a", [0, 30], [50, 60])]);
        assert_eq!(dg.n(), 2);
        assert!(dg.stitch_edges().is_empty());
        assert_eq!(dg.conflict_edges(), &[(0, 1)]);
    }

    #[test]
    fn disjoint_shadows_split_at_gap_midpoint() {
        let dg = dg_for(vec![
            r("bar", [0, 100], [0, 10]),
            r("a", [0, 30], [50, 60]),
            r("b", [70, 100], [50, 60]),
        ]);
        // bar -> vertices 0 (left), 1 (right); a -> 2; b -> 3.
        assert_eq!(dg.n(), 4);
        assert_eq!(dg.stitch_edges(), &[(0, 1)]);
        let origin = dg.origin().unwrap();
        assert_eq!(origin[0].segments, vec![r("bar", [0, 50], [0, 10])]);
        assert_eq!(origin[1].segments, vec![r("bar", [50, 100], [0, 10])]);
        assert_eq!(dg.conflict_neighbors(0), &[2]);
        assert_eq!(dg.conflict_neighbors(1), &[3]);
        // a and b are 40 apart and conflict with each other too.
        assert!(dg.conflict_edges().contains(&(2, 3)));
    }

    #[test]
    fn overlapping_shadows_stay_unsplit() {
        let dg = dg_for(vec![
            r("bar", [0, 100], [0, 10]),
            r("a", [0, 60], [50, 60]),
            r("b", [40, 100], [-60, -50]),
        ]);
        assert_eq!(dg.n(), 3);
        assert!(dg.stitch_edges().is_empty());
    }

    #[test]
    fn three_clusters_give_two_stitches() {
        let dg = dg_for(vec![
            r("bar", [0, 300], [0, 10]),
            r("a", [0, 40], [50, 60]),
            r("b", [130, 170], [-60, -50]),
            r("c", [260, 300], [50, 60]),
        ]);
        assert_eq!(dg.n(), 6);
        assert_eq!(dg.stitch_edges(), &[(0, 1), (1, 2)]);
        let origin = dg.origin().unwrap();
        assert_eq!(origin[0].segments[0].x_hi, 85);
        assert_eq!(origin[1].segments[0].x_hi, 215);
    }

    #[test]
    fn vertical_bar_splits_along_y() {
        let dg = dg_for(vec![
            r("bar", [0, 10], [0, 100]),
            r("a", [50, 60], [0, 30]),
            r("b", [50, 60], [70, 100]),
        ]);
        assert_eq!(dg.stitch_edges(), &[(0, 1)]);
        assert_eq!(dg.origin().unwrap()[0].segments[0].y_hi, 50);
    }

    #[test]
    fn cut_points_skip_narrow_gaps() {
        assert_eq!(cut_points(&mut [(0, 10), (11, 20)]), Vec::<i64>::new());
        assert_eq!(cut_points(&mut [(0, 10), (12, 20)]), vec![11]);
        assert_eq!(cut_points(&mut [(0, 50), (10, 20), (60, 70)]), vec![55]);
        assert!(cut_points(&mut []).is_empty());
    }
}
