//! Distribution evolutionary algorithm over a population of probability
//! models.
//!
//! A population of per-vertex color distributions `Q` and a paired
//! population of colorings `P` evolve together. Each outer iteration
//! perturbs the distributions of the worst individuals with random plane
//! rotations, samples new colorings that partly inherit from their
//! predecessors, refines them with crossover and tabu search until the
//! elite stops improving, and finally pulls every distribution toward its
//! refined coloring.

mod distribution;

pub use distribution::{
    init_distribution, orthogonal_explore, refine_q, rotate_column, sample_solution, DistributionIndividual,
};

use std::f64::consts::FRAC_PI_2;

use crate::cost::{evaluate, Alpha, Objective, Solution};
use crate::crossover::mgpx3;
use crate::decomp::DecompositionGraph;
use crate::error::{Error, Result};
use crate::rng::{seeded, SolverRng};
use crate::tabu::{default_budget, tabu_search};

/// Refinement rounds without elite improvement before giving up.
pub const STAGNATION_LIMIT: usize = 6;
/// Period (in refinement rounds) of the secondary-elite update.
pub const SECONDARY_ELITE_PERIOD: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub k: usize,
    pub alpha: Alpha,
    pub pop_size: usize,
    pub max_outer_iters: usize,
    /// Per-vertex probability of copying the paired parent's color.
    pub inherit_rate: f64,
    /// Fraction of the population (worst first) that gets rotated.
    pub explore_fraction: f64,
    /// Rotation angles are drawn from `(-max, max)`.
    pub explore_angle_max: f64,
    /// Learning rate of the distribution update.
    pub refine_rate: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: 3,
            alpha: Alpha::default(),
            pop_size: 8,
            max_outer_iters: 500,
            inherit_rate: 0.5,
            explore_fraction: 1.0 / 3.0,
            explore_angle_max: FRAC_PI_2,
            refine_rate: 0.25,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        if self.k < 2 {
            return fail(format!("mask count must be at least 2, got {}", self.k));
        }
        if self.pop_size < 2 {
            return fail(format!("population size must be at least 2, got {}", self.pop_size));
        }
        if !(0.0..=1.0).contains(&self.inherit_rate) {
            return fail(format!("inherit rate must lie in [0, 1], got {}", self.inherit_rate));
        }
        if !(self.refine_rate > 0.0 && self.refine_rate < 1.0) {
            return fail(format!("refine rate must lie in (0, 1), got {}", self.refine_rate));
        }
        if !(self.explore_fraction > 0.0 && self.explore_fraction <= 1.0) {
            return fail(format!(
                "explore fraction must lie in (0, 1], got {}",
                self.explore_fraction
            ));
        }
        if !(self.explore_angle_max > 0.0 && self.explore_angle_max.is_finite()) {
            return fail(format!(
                "explore angle must be positive, got {}",
                self.explore_angle_max
            ));
        }
        Ok(())
    }

    pub fn objective(&self) -> Objective {
        Objective {
            k: self.k,
            alpha: self.alpha,
        }
    }
}

/// Elite bookkeeping carried across refinement calls.
#[derive(Clone, Debug)]
pub struct RefineState {
    pub p1: Solution,
    pub p2: Solution,
    /// The elite most recently displaced from `p1`.
    pub c1: Solution,
    pub w2: bool,
    pub iter: usize,
    pub iter_stag: usize,
    pub x_best: Solution,
}

impl RefineState {
    pub fn new(best: Solution) -> Self {
        RefineState {
            p1: best.clone(),
            p2: best.clone(),
            c1: best.clone(),
            w2: false,
            iter: 0,
            iter_stag: 0,
            x_best: best,
        }
    }
}

fn best_of(pop: &[Solution]) -> &Solution {
    pop.iter()
        .reduce(|best, s| if s.better_than(best) { s } else { best })
        .expect("population is non-empty")
}

fn tabu_pass(pop: Vec<Solution>, dg: &DecompositionGraph, obj: &Objective, rng: &mut SolverRng) -> Vec<Solution> {
    let budget = default_budget(dg.n());
    pop.into_iter()
        .map(|x| tabu_search(dg, x, obj, rng, budget).best)
        .collect()
}

/// Refines the solution population: crossover with the two elites plus
/// tabu search, repeated until `p1` has not improved for
/// [`STAGNATION_LIMIT`] rounds, then one final tabu pass.
pub fn refine_p(
    pop: Vec<Solution>,
    state: &mut RefineState,
    dg: &DecompositionGraph,
    obj: &Objective,
    rng: &mut SolverRng,
) -> Vec<Solution> {
    assert!(!pop.is_empty(), "refine_p needs a non-empty population");
    state.iter = 0;
    state.iter_stag = 0;
    state.c1 = state.x_best.clone();
    state.w2 = false;

    let mut pop = pop;
    while state.iter_stag < STAGNATION_LIMIT {
        let children: Vec<Solution> = pop
            .iter()
            .map(|m| {
                let colors = mgpx3(&m.colors, &state.p1.colors, &state.p2.colors, obj.k, rng);
                evaluate(dg, colors, obj).expect("crossover keeps colors in range")
            })
            .collect();
        let next = tabu_pass(children, dg, obj, rng);
        let b = best_of(&next);
        if b.better_than(&state.p1) {
            state.w2 = true;
            state.iter_stag = 0;
            state.c1 = std::mem::replace(&mut state.p1, b.clone());
        } else {
            state.iter_stag += 1;
        }
        if b.better_than(&state.x_best) {
            state.x_best = b.clone();
        }
        if state.iter.is_multiple_of(SECONDARY_ELITE_PERIOD) && state.w2 {
            state.p2 = state.c1.clone();
            state.w2 = false;
        }
        pop = next;
        state.iter += 1;
    }

    let pop = tabu_pass(pop, dg, obj, rng);
    let b = best_of(&pop);
    state.p1 = b.clone();
    if b.better_than(&state.x_best) {
        state.x_best = b.clone();
    }
    pop
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub best: Solution,
    pub outer_iterations: usize,
    /// Best score before the first outer iteration and after each one.
    pub history: Vec<u128>,
}

/// Runs the full loop until the cost reaches zero or
/// `max_outer_iters` outer iterations have run. Deterministic per seed.
pub fn solve(dg: &DecompositionGraph, config: &SolverConfig) -> Result<SolveOutcome> {
    config.validate()?;
    let obj = config.objective();
    let n = dg.n();
    if n == 0 {
        return Ok(SolveOutcome {
            best: evaluate(dg, Vec::new(), &obj)?,
            outer_iterations: 0,
            history: vec![0],
        });
    }

    let mut rng = seeded(config.seed);
    let np = config.pop_size;
    let mut models = vec![init_distribution(n, config.k); np];
    let mut pop: Vec<Solution> = models
        .iter()
        .map(|model| evaluate(dg, sample_solution(model, None, config.inherit_rate, &mut rng), &obj))
        .collect::<Result<_>>()?;
    let mut state = RefineState::new(best_of(&pop).clone());
    let mut history = vec![state.x_best.score];

    let mut outer = 0;
    while state.x_best.score > 0 && outer < config.max_outer_iters {
        orthogonal_explore(&mut models, &pop, config, &mut rng);
        let sampled: Vec<Solution> = models
            .iter()
            .zip(&pop)
            .map(|(model, parent)| {
                let colors = sample_solution(model, Some(&parent.colors), config.inherit_rate, &mut rng);
                evaluate(dg, colors, &obj)
            })
            .collect::<Result<_>>()?;
        pop = refine_p(sampled, &mut state, dg, &obj, &mut rng);
        refine_q(&mut models, &pop, config.refine_rate);
        outer += 1;
        history.push(state.x_best.score);
    }

    Ok(SolveOutcome {
        best: state.x_best,
        outer_iterations: outer,
        history,
    })
}
