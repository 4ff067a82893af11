//! Rectangle layouts and the layout graph.
//!
//! A feature is the union of all rectangles sharing a `feature_id`. Two
//! features conflict when the Euclidean gap between any pair of their
//! rectangles is strictly below the minimum coloring spacing.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_lo: i64,
    pub y_lo: i64,
    pub x_hi: i64,
    pub y_hi: i64,
    pub feature_id: String,
}

impl Rect {
    pub fn new(feature_id: impl Into<String>, x: [i64; 2], y: [i64; 2]) -> Self {
        Rect {
            x_lo: x[0],
            y_lo: y[0],
            x_hi: x[1],
            y_hi: y[1],
            feature_id: feature_id.into(),
        }
    }

    pub fn width(&self) -> i64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> i64 {
        self.y_hi - self.y_lo
    }

    fn validate(&self, index: usize) -> Result<()> {
        if self.feature_id.is_empty() {
            return Err(Error::invalid(format!("rect {index}: empty feature id")));
        }
        if self.x_lo >= self.x_hi {
            return Err(Error::invalid(format!(
                "rect {index}: x_lo ({}) must be less than x_hi ({})",
                self.x_lo, self.x_hi
            )));
        }
        if self.y_lo >= self.y_hi {
            return Err(Error::invalid(format!(
                "rect {index}: y_lo ({}) must be less than y_hi ({})",
                self.y_lo, self.y_hi
            )));
        }
        Ok(())
    }

    fn interiors_overlap(&self, other: &Rect) -> bool {
        self.x_lo < other.x_hi && other.x_lo < self.x_hi && self.y_lo < other.y_hi && other.y_lo < self.y_hi
    }
}

/// Per-axis separation between two closed intervals, 0 when they meet.
fn axis_gap(a_lo: i64, a_hi: i64, b_lo: i64, b_hi: i64) -> i128 {
    (i128::from(a_lo.max(b_lo)) - i128::from(a_hi.min(b_hi))).max(0)
}

/// Squared Euclidean boundary gap in database units. Exact.
pub fn gap_squared(a: &Rect, b: &Rect) -> i128 {
    let dx = axis_gap(a.x_lo, a.x_hi, b.x_lo, b.x_hi);
    let dy = axis_gap(a.y_lo, a.y_hi, b.y_lo, b.y_hi);
    dx * dx + dy * dy
}

/// Euclidean distance between the closest boundary points of two
/// rectangles, in database units. Zero when they touch or overlap.
pub fn rect_distance(a: &Rect, b: &Rect) -> f64 {
    (gap_squared(a, b) as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub id: String,
    /// Indices into [`Layout::rects`].
    pub rects: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub rects: Vec<Rect>,
    pub units_per_nm: i64,
}

impl Default for Layout {
    fn default() -> Self {
        Layout {
            rects: Vec::new(),
            units_per_nm: 1,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutDoc {
    #[serde(default = "default_units", skip_serializing_if = "is_one")]
    units_per_nm: i64,
    rects: Vec<RectDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RectDoc {
    id: String,
    x: [i64; 2],
    y: [i64; 2],
}

fn default_units() -> i64 {
    1
}

fn is_one(v: &i64) -> bool {
    *v == 1
}

/// Parses and validates a layout JSON document.
pub fn parse_layout(text: &str) -> Result<Layout> {
    let doc: LayoutDoc = serde_json::from_str(text)?;
    let layout = Layout {
        units_per_nm: doc.units_per_nm,
        rects: doc.rects.into_iter().map(|r| Rect::new(r.id, r.x, r.y)).collect(),
    };
    layout.validate()?;
    Ok(layout)
}

impl Layout {
    pub fn new(rects: Vec<Rect>) -> Result<Self> {
        let layout = Layout { rects, units_per_nm: 1 };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.units_per_nm <= 0 {
            return Err(Error::invalid(format!(
                "units_per_nm must be positive, got {}",
                self.units_per_nm
            )));
        }
        for (i, r) in self.rects.iter().enumerate() {
            r.validate(i)?;
        }
        // Sweep along x; only rects whose x-extents overlap can overlap.
        let mut order: Vec<usize> = (0..self.rects.len()).collect();
        order.sort_by_key(|&i| self.rects[i].x_lo);
        for (pos, &i) in order.iter().enumerate() {
            let a = &self.rects[i];
            for &j in &order[pos + 1..] {
                let b = &self.rects[j];
                if b.x_lo >= a.x_hi {
                    break;
                }
                if a.feature_id != b.feature_id && a.interiors_overlap(b) {
                    let (lo, hi) = (i.min(j), i.max(j));
                    return Err(Error::invalid(format!(
                        "rects {lo} and {hi} belong to different features but overlap"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Features in order of first appearance.
    pub fn features(&self) -> Vec<Feature> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut features: Vec<Feature> = Vec::new();
        for (i, r) in self.rects.iter().enumerate() {
            let f = *index.entry(r.feature_id.as_str()).or_insert_with(|| {
                features.push(Feature {
                    id: r.feature_id.clone(),
                    rects: Vec::new(),
                });
                features.len() - 1
            });
            features[f].rects.push(i);
        }
        features
    }

    pub fn to_json(&self) -> String {
        let doc = LayoutDoc {
            units_per_nm: self.units_per_nm,
            rects: self
                .rects
                .iter()
                .map(|r| RectDoc {
                    id: r.feature_id.clone(),
                    x: [r.x_lo, r.x_hi],
                    y: [r.y_lo, r.y_hi],
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("layout serializes")
    }
}

#[derive(Clone, Debug)]
pub struct LayoutGraph {
    pub layout: Layout,
    pub features: Vec<Feature>,
    /// Feature index of each rectangle.
    pub rect_feature: Vec<usize>,
    /// Unordered feature pairs `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Rectangle pairs `(a, b)`, `a < b`, of different features closer than the spacing.
    pub rect_conflicts: Vec<(usize, usize)>,
    pub min_cs: i64,
}

impl LayoutGraph {
    /// Spacing threshold in database units.
    pub fn limit(&self) -> i64 {
        self.min_cs * self.layout.units_per_nm
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.features.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

/// Rectangles larger than this many grid cells are checked against every
/// other rectangle instead of being bucketed.
const MAX_CELLS_PER_RECT: i64 = 4096;

struct SpatialGrid {
    cell: i64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    oversized: Vec<usize>,
}

impl SpatialGrid {
    fn build(rects: &[Rect], cell: i64) -> Self {
        let mut grid = SpatialGrid {
            cell,
            buckets: HashMap::new(),
            oversized: Vec::new(),
        };
        for (i, r) in rects.iter().enumerate() {
            let (cx, cy) = grid.cell_range(r.x_lo, r.x_hi, r.y_lo, r.y_hi);
            if (cx.1 - cx.0 + 1).saturating_mul(cy.1 - cy.0 + 1) > MAX_CELLS_PER_RECT {
                grid.oversized.push(i);
                continue;
            }
            for gx in cx.0..=cx.1 {
                for gy in cy.0..=cy.1 {
                    grid.buckets.entry((gx, gy)).or_default().push(i);
                }
            }
        }
        grid
    }

    fn cell_range(&self, x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> ((i64, i64), (i64, i64)) {
        let c = self.cell;
        (
            (x_lo.div_euclid(c), x_hi.div_euclid(c)),
            (y_lo.div_euclid(c), y_hi.div_euclid(c)),
        )
    }

    /// Candidate rectangles that could lie within `reach` of `r`.
    fn candidates(&self, r: &Rect, reach: i64, out: &mut Vec<usize>) {
        out.clear();
        let (cx, cy) = self.cell_range(
            r.x_lo.saturating_sub(reach),
            r.x_hi.saturating_add(reach),
            r.y_lo.saturating_sub(reach),
            r.y_hi.saturating_add(reach),
        );
        if (cx.1 - cx.0 + 1).saturating_mul(cy.1 - cy.0 + 1) > MAX_CELLS_PER_RECT {
            // Huge query window: scan buckets instead of cells.
            for (&(gx, gy), items) in &self.buckets {
                if (cx.0..=cx.1).contains(&gx) && (cy.0..=cy.1).contains(&gy) {
                    out.extend_from_slice(items);
                }
            }
        } else {
            for gx in cx.0..=cx.1 {
                for gy in cy.0..=cy.1 {
                    if let Some(items) = self.buckets.get(&(gx, gy)) {
                        out.extend_from_slice(items);
                    }
                }
            }
        }
        out.extend_from_slice(&self.oversized);
        out.sort_unstable();
        out.dedup();
    }
}

/// Builds the layout graph: one vertex per feature, an edge between two
/// distinct features iff some pair of their rectangles is closer than
/// `min_cs` nanometers.
pub fn build_layout_graph(layout: &Layout, min_cs: i64) -> Result<LayoutGraph> {
    if min_cs <= 0 {
        return Err(Error::contract(format!("min_cs must be positive, got {min_cs}")));
    }
    let features = layout.features();
    let mut rect_feature = vec![0; layout.rects.len()];
    for (f, feat) in features.iter().enumerate() {
        for &r in &feat.rects {
            rect_feature[r] = f;
        }
    }

    let limit = min_cs
        .checked_mul(layout.units_per_nm)
        .ok_or_else(|| Error::contract("min_cs overflows database units"))?;
    let limit_sq = i128::from(limit) * i128::from(limit);
    let grid = SpatialGrid::build(&layout.rects, limit);

    let mut edges = BTreeSet::new();
    let mut rect_conflicts = Vec::new();
    let mut cand = Vec::new();
    for (a, ra) in layout.rects.iter().enumerate() {
        grid.candidates(ra, limit, &mut cand);
        for &b in cand.iter().filter(|&&b| b > a) {
            let (fa, fb) = (rect_feature[a], rect_feature[b]);
            if fa == fb {
                continue;
            }
            if gap_squared(ra, &layout.rects[b]) < limit_sq {
                rect_conflicts.push((a, b));
                edges.insert((fa.min(fb), fa.max(fb)));
            }
        }
    }

    Ok(LayoutGraph {
        layout: layout.clone(),
        features,
        rect_feature,
        edges: edges.into_iter().collect(),
        rect_conflicts,
        min_cs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(id: &str, x: [i64; 2], y: [i64; 2]) -> Rect {
        Rect::new(id, x, y)
    }

    #[test]
    fn parse_empty_and_single() {
        let l = parse_layout(r#"{"units_per_nm":1,"rects":[]}"#).unwrap();
        assert!(l.features().is_empty());

        let l = parse_layout(r#"{"rects":[{"id":"a","x":[0,10],"y":[0,10]}]}"#).unwrap();
        assert_eq!(l.features().len(), 1);
        assert_eq!(l.rects.len(), 1);
        assert_eq!(l.units_per_nm, 1);
    }

    #[test]
    fn parse_rejects_inverted_interval() {
        let err = parse_layout(r#"{"rects":[{"id":"a","x":[10,0],"y":[0,10]}]}"#).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref m) if m.contains("rect 0")), "{err}");
    }

    #[test]
    fn parse_rejects_malformed_and_bad_fields() {
        let err = parse_layout(r#"{"rects":[{"id":"a","x":[0,10]}]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("line")), "{err}");
        assert!(matches!(parse_layout("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_layout(r#"{"units_per_nm":0,"rects":[]}"#),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            parse_layout(r#"{"rects":[{"id":"","x":[0,1],"y":[0,1]}]}"#),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn overlapping_features_rejected_same_feature_allowed() {
        let err = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [5, 15], [5, 15])]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
        Layout::new(vec![r("a", [0, 10], [0, 10]), r("a", [5, 15], [5, 15])]).unwrap();
        // Touching is not overlap.
        Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [10, 20], [0, 10])]).unwrap();
    }

    #[test]
    fn same_id_groups_into_one_feature() {
        let l = Layout::new(vec![
            r("a", [0, 10], [0, 10]),
            r("b", [100, 110], [0, 10]),
            r("a", [10, 20], [0, 5]),
        ])
        .unwrap();
        let f = l.features();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].rects, vec![0, 2]);
        assert_eq!(f[1].rects, vec![1]);
    }

    #[test]
    fn distance_examples() {
        let a = r("a", [0, 10], [0, 10]);
        assert_eq!(rect_distance(&a, &r("b", [10, 20], [0, 10])), 0.0);
        assert_eq!(rect_distance(&a, &r("b", [20, 30], [0, 10])), 10.0);
        assert_eq!(rect_distance(&a, &r("b", [13, 20], [14, 20])), 5.0);
        assert_eq!(rect_distance(&a, &a), 0.0);
    }

    #[test]
    fn layout_graph_threshold_is_strict() {
        let near = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [20, 30], [0, 10])]).unwrap();
        assert_eq!(build_layout_graph(&near, 120).unwrap().edges.len(), 1);
        let far = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [160, 170], [0, 10])]).unwrap();
        assert_eq!(build_layout_graph(&far, 120).unwrap().edges.len(), 0);
        // Gap exactly min_cs is legal spacing.
        let exact = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [130, 140], [0, 10])]).unwrap();
        assert_eq!(build_layout_graph(&exact, 120).unwrap().edges.len(), 0);
    }

    #[test]
    fn collinear_features_form_a_path() {
        // a-b and b-c gaps are 50, a-c gap is 200.
        let l = Layout::new(vec![
            r("a", [0, 10], [0, 10]),
            r("b", [60, 160], [0, 10]),
            r("c", [210, 220], [0, 10]),
        ])
        .unwrap();
        let lg = build_layout_graph(&l, 120).unwrap();
        assert_eq!(lg.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn units_scale_threshold() {
        // 2 database units per nm: a 150-unit gap is 75 nm.
        let mut l = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [160, 170], [0, 10])]).unwrap();
        l.units_per_nm = 2;
        assert_eq!(build_layout_graph(&l, 80).unwrap().edges.len(), 1);
        assert_eq!(build_layout_graph(&l, 75).unwrap().edges.len(), 0);
    }

    #[test]
    fn min_cs_must_be_positive() {
        assert!(matches!(
            build_layout_graph(&Layout::default(), 0),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let l = Layout::new(vec![r("a", [0, 10], [0, 10]), r("b", [-40, -20], [3, 9])]).unwrap();
        assert_eq!(parse_layout(&l.to_json()).unwrap(), l);
    }
}
