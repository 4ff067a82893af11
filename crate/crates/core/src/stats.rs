//! Aggregates over independent runs.

use serde::Serialize;

use crate::cost::{Alpha, Cost};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub st: u64,
    pub cn: u64,
    pub cost: f64,
    pub time_s: f64,
    #[serde(skip)]
    pub score: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub runs: Vec<RunRecord>,
    pub mean_st: f64,
    pub std_st: f64,
    pub mean_cn: f64,
    pub std_cn: f64,
    pub mean_cost: f64,
    pub std_cost: f64,
    pub mean_time_s: f64,
    pub std_time_s: f64,
}

/// Mean and sample standard deviation (divisor `R − 1`) of integers scaled
/// by `1 / den`. Exact up to the final division, so a constant sample has
/// standard deviation exactly 0. A single run reports 0.
pub fn mean_std_scaled(values: &[u128], den: u128) -> (f64, f64) {
    let r = values.len() as u128;
    if r == 0 {
        return (0.0, 0.0);
    }
    let sum: u128 = values.iter().sum();
    let mean = sum as f64 / (r * den) as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let sum_sq: u128 = values.iter().map(|v| v * v).sum();
    let numer = r * sum_sq - sum * sum;
    let var = numer as f64 / (r * (r - 1)) as f64 / (den * den) as f64;
    (mean, var.sqrt())
}

/// Mean and sample standard deviation of floats, 0 deviation for one value.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    if r == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (r - 1) as f64).sqrt())
}

impl RunRecord {
    pub fn new(run: usize, seed: u64, cost: Cost, alpha: &Alpha, time_s: f64) -> Self {
        RunRecord {
            run,
            seed,
            st: cost.stitches,
            cn: cost.conflicts,
            cost: cost_value(cost, alpha),
            time_s,
            score: alpha.scaled(cost),
        }
    }
}

/// Numeric cost whose shortest decimal rendering matches the exact one.
pub fn cost_value(cost: Cost, alpha: &Alpha) -> f64 {
    alpha.format(cost).parse().expect("formatted cost is a decimal")
}

impl RunReport {
    pub fn new(runs: Vec<RunRecord>, alpha: &Alpha) -> Self {
        let (mean_st, std_st) = mean_std_scaled(&runs.iter().map(|r| u128::from(r.st)).collect::<Vec<_>>(), 1);
        let (mean_cn, std_cn) = mean_std_scaled(&runs.iter().map(|r| u128::from(r.cn)).collect::<Vec<_>>(), 1);
        let (mean_cost, std_cost) = mean_std_scaled(
            &runs.iter().map(|r| r.score).collect::<Vec<_>>(),
            u128::from(alpha.den()),
        );
        let (mean_time_s, std_time_s) = mean_std(&runs.iter().map(|r| r.time_s).collect::<Vec<_>>());
        RunReport {
            runs,
            mean_st,
            std_st,
            mean_cn,
            std_cn,
            mean_cost,
            std_cost,
            mean_time_s,
            std_time_s,
        }
    }
}
