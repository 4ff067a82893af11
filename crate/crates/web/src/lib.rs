//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers or strings and returns a JSON string, so
//! the page needs no generated type glue beyond wasm-bindgen's own.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use mpld::decomp::simplify;
use mpld::generate::{random_graph, random_layout, LayoutParams};
use mpld::geometry::parse_layout;
use mpld::oracle::exact_min_cost;
use mpld::pipeline::{finish, layout_to_graph, solve_components, SolverKind};
use mpld::stats::cost_value;
use mpld::svg::render_svg;
use mpld::{Alpha, SolverConfig};

/// Node cap for the in-browser exact solve; keeps the tab responsive.
const BROWSER_NODE_LIMIT: u64 = 2_000_000;

#[derive(Serialize)]
struct LayoutResult {
    svg: String,
    vertices: usize,
    conflict_edges: usize,
    stitch_edges: usize,
    components: usize,
    hidden: usize,
    st: u64,
    cn: u64,
    cost: f64,
}

#[derive(Serialize)]
struct Side {
    st: u64,
    cn: u64,
    cost: f64,
    colors: Vec<usize>,
}

#[derive(Serialize)]
struct Comparison {
    graph: serde_json::Value,
    dea: Side,
    exact: Side,
    proved_optimal: bool,
    matched: bool,
}

fn config(masks: usize, alpha: &str, seed: u64) -> Result<SolverConfig, String> {
    let config = SolverConfig {
        k: masks,
        alpha: Alpha::parse(alpha).map_err(|e| e.to_string())?,
        seed,
        ..SolverConfig::default()
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

pub fn generate_layout_json(rects: usize, track_pitch: i64, seed: u64) -> Result<String, String> {
    random_layout(&LayoutParams {
        rects,
        track_pitch,
        seed,
        ..LayoutParams::default()
    })
    .map(|l| l.to_json())
    .map_err(|e| e.to_string())
}

pub fn decompose_layout_json(
    layout: &str,
    min_cs: i64,
    masks: usize,
    alpha: &str,
    seed: u64,
) -> Result<String, String> {
    let config = config(masks, alpha, seed)?;
    let run = || -> mpld::Result<LayoutResult> {
        let dg = layout_to_graph(&parse_layout(layout)?, min_cs)?;
        let simplified = simplify(&dg, config.k)?;
        let solved = solve_components(&simplified, &config, SolverKind::DeaPpm)?;
        let d = finish(&dg, &simplified, solved, &config.objective())?;
        Ok(LayoutResult {
            svg: render_svg(&dg, &d.solution.colors, config.k)?,
            vertices: dg.n(),
            conflict_edges: dg.conflict_edges().len(),
            stitch_edges: dg.stitch_edges().len(),
            components: d.components,
            hidden: d.hidden,
            st: d.solution.cost.stitches,
            cn: d.solution.cost.conflicts,
            cost: cost_value(d.solution.cost, &config.alpha),
        })
    };
    let result = run().map_err(|e| e.to_string())?;
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

pub fn compare_with_oracle_json(n: usize, ce: usize, se: usize, masks: usize, seed: u64) -> Result<String, String> {
    let config = config(masks, "0.1", seed)?;
    let dg = random_graph(n, ce, se, seed).map_err(|e| e.to_string())?;
    let dea = mpld::solve(&dg, &config).map_err(|e| e.to_string())?.best;
    let exact = exact_min_cost(&dg, &config.objective(), BROWSER_NODE_LIMIT);
    let side = |s: mpld::Solution| Side {
        st: s.cost.stitches,
        cn: s.cost.conflicts,
        cost: cost_value(s.cost, &config.alpha),
        colors: s.colors,
    };
    let result = Comparison {
        graph: serde_json::from_str(&dg.to_json()).map_err(|e| e.to_string())?,
        matched: dea.score == exact.optimum.score,
        proved_optimal: exact.proved_optimal,
        dea: side(dea),
        exact: side(exact.optimum),
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

/// Random routed-wire layout as layout JSON.
#[wasm_bindgen(js_name = generateLayout)]
pub fn generate_layout(rects: usize, track_pitch: i32, seed: u32) -> Result<String, JsValue> {
    generate_layout_json(rects, track_pitch.into(), seed.into()).map_err(|e| JsValue::from_str(&e))
}

/// Decomposes layout JSON and returns the colored SVG plus counts.
#[wasm_bindgen(js_name = decomposeLayout)]
pub fn decompose_layout(layout: &str, min_cs: i32, masks: usize, alpha: &str, seed: u32) -> Result<String, JsValue> {
    decompose_layout_json(layout, min_cs.into(), masks, alpha, seed.into()).map_err(|e| JsValue::from_str(&e))
}

/// Solves a random graph with both the heuristic and the exact search.
#[wasm_bindgen(js_name = compareWithOracle)]
pub fn compare_with_oracle(n: usize, ce: usize, se: usize, masks: usize, seed: u32) -> Result<String, JsValue> {
    compare_with_oracle_json(n, ce, se, masks, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn layout_round_trip_through_the_page_api() {
        let layout = generate_layout_json(60, 150, 4).unwrap();
        let out: Value = serde_json::from_str(&decompose_layout_json(&layout, 120, 3, "0.1", 1).unwrap()).unwrap();
        assert!(out["svg"].as_str().unwrap().starts_with("<?xml"));
        assert_eq!(out["cn"], 0);
        assert!(out["vertices"].as_u64().unwrap() >= 60);
    }

    #[test]
    fn comparison_on_a_small_graph() {
        let out: Value = serde_json::from_str(&compare_with_oracle_json(8, 14, 2, 3, 9).unwrap()).unwrap();
        assert_eq!(out["proved_optimal"], true);
        assert!(out["dea"]["cost"].as_f64().unwrap() >= out["exact"]["cost"].as_f64().unwrap());
        assert_eq!(out["graph"]["n"], 8);
    }

    #[test]
    fn errors_are_messages() {
        assert!(decompose_layout_json("{", 120, 3, "0.1", 0)
            .unwrap_err()
            .contains("parse"));
        assert!(decompose_layout_json(r#"{"rects":[]}"#, 120, 1, "0.1", 0).is_err());
        assert!(compare_with_oracle_json(3, 5, 0, 3, 0).is_err());
        assert!(generate_layout_json(10, 10, 0).is_err());
    }
}
