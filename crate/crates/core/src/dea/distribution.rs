//! Per-vertex color distributions stored as amplitudes: the sampling
//! probability of color `j` at vertex `v` is the square of its amplitude, so
//! every column is a unit vector and plane rotations keep it one.

use rand::seq::index;
use rand::Rng;

use crate::cost::Solution;
use crate::dea::SolverConfig;
use crate::rng::SolverRng;
use crate::Color;

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionIndividual {
    k: usize,
    /// Column-major: `amps[v * k + j]`.
    amps: Vec<f64>,
}

impl DistributionIndividual {
    /// Uniform distribution over `k` colors at each of `n` vertices.
    pub fn uniform(n: usize, k: usize) -> Self {
        DistributionIndividual {
            k,
            amps: vec![1.0 / (k as f64).sqrt(); n * k],
        }
    }

    pub fn n(&self) -> usize {
        self.amps.len() / self.k
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn column(&self, v: usize) -> &[f64] {
        &self.amps[v * self.k..(v + 1) * self.k]
    }

    pub fn column_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.amps[v * self.k..(v + 1) * self.k]
    }

    /// Largest `|Σ_j a² − 1|` over all columns.
    pub fn max_norm_error(&self) -> f64 {
        self.amps
            .chunks(self.k)
            .map(|c| (c.iter().map(|a| a * a).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn init_distribution(n: usize, k: usize) -> DistributionIndividual {
    DistributionIndividual::uniform(n, k)
}

fn normalize(col: &mut [f64]) {
    let norm = col.iter().map(|a| a * a).sum::<f64>().sqrt();
    col.iter_mut().for_each(|a| *a /= norm);
}

/// Rotates rows `j1`, `j2` of a column by `theta`, folds negative
/// amplitudes to their magnitude and renormalizes.
pub fn rotate_column(col: &mut [f64], j1: usize, j2: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    let (a1, a2) = (col[j1], col[j2]);
    col[j1] = (a1 * c - a2 * s).abs();
    col[j2] = (a1 * s + a2 * c).abs();
    normalize(col);
}

fn draw(col: &[f64], rng: &mut SolverRng) -> Color {
    let total: f64 = col.iter().map(|a| a * a).sum();
    let mut u = rng.gen::<f64>() * total;
    for (j, a) in col.iter().enumerate() {
        u -= a * a;
        if u < 0.0 {
            return j;
        }
    }
    // Rounding left `u` marginally positive: take the last color with mass.
    col.iter().rposition(|&a| a > 0.0).unwrap_or(0)
}

/// Samples a coloring. With a parent, each vertex independently copies the
/// parent's color with probability `inherit_rate`.
pub fn sample_solution(
    model: &DistributionIndividual,
    parent: Option<&[Color]>,
    inherit_rate: f64,
    rng: &mut SolverRng,
) -> Vec<Color> {
    (0..model.n())
        .map(|v| match parent {
            Some(parent) if rng.gen::<f64>() < inherit_rate => parent[v],
            _ => draw(model.column(v), rng),
        })
        .collect()
}

/// Rotates random columns of the individuals paired with the worst
/// solutions.
pub fn orthogonal_explore(
    models: &mut [DistributionIndividual],
    pop: &[Solution],
    config: &SolverConfig,
    rng: &mut SolverRng,
) {
    debug_assert_eq!(models.len(), pop.len());
    let np = models.len();
    let n = models.first().map_or(0, DistributionIndividual::n);
    if np == 0 || n == 0 {
        return;
    }
    let k = config.k;
    let chosen = ((np as f64 * config.explore_fraction).ceil() as usize).min(np);
    let mut worst: Vec<usize> = (0..np).collect();
    worst.sort_by(|&a, &b| pop[b].score.cmp(&pop[a].score).then(a.cmp(&b)));

    let columns = n.div_ceil(10).max(1);
    let max = config.explore_angle_max;
    for &i in &worst[..chosen] {
        for v in index::sample(rng, n, columns) {
            let j1 = rng.gen_range(0..k);
            let mut j2 = rng.gen_range(0..k - 1);
            if j2 >= j1 {
                j2 += 1;
            }
            let theta = rng.gen_range(-max..max);
            rotate_column(models[i].column_mut(v), j1, j2, theta);
        }
    }
}

/// Moves each column toward the color its refined solution settled on:
/// squared column `p ← (1−β)p + β e_c`.
pub fn refine_q(models: &mut [DistributionIndividual], refined: &[Solution], beta: f64) {
    debug_assert_eq!(models.len(), refined.len());
    for (ind, sol) in models.iter_mut().zip(refined) {
        for (v, &c) in sol.colors.iter().enumerate() {
            let col = ind.column_mut(v);
            for (j, a) in col.iter_mut().enumerate() {
                let target = if j == c { 1.0 } else { 0.0 };
                *a = ((1.0 - beta) * *a * *a + beta * target).sqrt();
            }
            normalize(col);
        }
    }
}
