//! Tabu search over single-vertex recolorings.
//!
//! The neighborhood is every recoloring of a vertex touching a violated
//! edge (a monochrome conflict edge or a bichrome stitch edge). The best
//! non-tabu move is taken each iteration, ties broken at random, and the
//! reverse move is then forbidden for a tenure that grows with the number
//! of remaining violations.

use rand::Rng;

use crate::cost::{Objective, Solution};
use crate::decomp::DecompositionGraph;
use crate::rng::SolverRng;

/// Iteration at which a freshly forbidden assignment becomes legal again:
/// `count + floor(0.6 * (10 * conflicts + stitches)) + r`.
pub fn tabu_tenure(count: u64, conflicts: u64, stitches: u64, r: u64) -> u64 {
    count + 6 * (10 * conflicts + stitches) / 10 + r
}

pub fn default_budget(n: usize) -> usize {
    5 * n
}

#[derive(Clone, Debug)]
pub struct TabuOutcome {
    pub best: Solution,
    pub iterations: usize,
}

const ABSENT: usize = usize::MAX;

/// Working solution with per-vertex neighbor color counts.
struct Search<'a> {
    dg: &'a DecompositionGraph,
    k: usize,
    colors: Vec<usize>,
    /// `ce_count[v * k + c]`: conflict neighbors of `v` with color `c`.
    ce_count: Vec<u32>,
    se_count: Vec<u32>,
    conflicts: u64,
    stitches: u64,
    critical: Vec<usize>,
    slot: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(dg: &'a DecompositionGraph, k: usize, sol: &Solution) -> Self {
        let n = dg.n();
        let mut s = Search {
            dg,
            k,
            colors: sol.colors.clone(),
            ce_count: vec![0; n * k],
            se_count: vec![0; n * k],
            conflicts: sol.cost.conflicts,
            stitches: sol.cost.stitches,
            critical: Vec::new(),
            slot: vec![ABSENT; n],
        };
        for v in 0..n {
            for &u in dg.conflict_neighbors(v) {
                s.ce_count[v * k + s.colors[u]] += 1;
            }
            for &u in dg.stitch_neighbors(v) {
                s.se_count[v * k + s.colors[u]] += 1;
            }
        }
        for v in 0..n {
            s.refresh(v);
        }
        s
    }

    fn is_critical(&self, v: usize) -> bool {
        let at = v * self.k + self.colors[v];
        self.ce_count[at] > 0 || (self.se_count[at] as usize) < self.dg.stitch_neighbors(v).len()
    }

    fn refresh(&mut self, v: usize) {
        match (self.is_critical(v), self.slot[v] != ABSENT) {
            (true, false) => {
                self.slot[v] = self.critical.len();
                self.critical.push(v);
            }
            (false, true) => {
                let at = self.slot[v];
                self.critical.swap_remove(at);
                if let Some(&moved) = self.critical.get(at) {
                    self.slot[moved] = at;
                }
                self.slot[v] = ABSENT;
            }
            _ => {}
        }
    }

    /// (conflict delta, stitch delta) of moving `v` to `to`.
    fn delta(&self, v: usize, to: usize) -> (i64, i64) {
        let base = v * self.k;
        let from = self.colors[v];
        let dc = i64::from(self.ce_count[base + to]) - i64::from(self.ce_count[base + from]);
        let ds = i64::from(self.se_count[base + from]) - i64::from(self.se_count[base + to]);
        (dc, ds)
    }

    fn apply(&mut self, v: usize, to: usize) {
        let (dc, ds) = self.delta(v, to);
        let from = self.colors[v];
        self.colors[v] = to;
        self.conflicts = self.conflicts.wrapping_add_signed(dc);
        self.stitches = self.stitches.wrapping_add_signed(ds);
        let k = self.k;
        for i in 0..self.dg.conflict_neighbors(v).len() {
            let u = self.dg.conflict_neighbors(v)[i];
            self.ce_count[u * k + from] -= 1;
            self.ce_count[u * k + to] += 1;
            self.refresh(u);
        }
        for i in 0..self.dg.stitch_neighbors(v).len() {
            let u = self.dg.stitch_neighbors(v)[i];
            self.se_count[u * k + from] -= 1;
            self.se_count[u * k + to] += 1;
            self.refresh(u);
        }
        self.refresh(v);
    }
}

/// Best move by scaled cost delta, ties uniform at random.
#[derive(Default)]
struct Pick {
    best: Option<(i128, usize, usize)>,
    ties: u32,
}

impl Pick {
    fn offer(&mut self, delta: i128, v: usize, to: usize, rng: &mut SolverRng) {
        match self.best {
            Some((d, _, _)) if delta > d => {}
            Some((d, _, _)) if delta == d => {
                self.ties += 1;
                if rng.gen_range(0..self.ties) == 0 {
                    self.best = Some((delta, v, to));
                }
            }
            _ => {
                self.best = Some((delta, v, to));
                self.ties = 1;
            }
        }
    }
}

/// Improves `start` for at most `budget` iterations, stopping early once the
/// cost reaches zero. Never returns anything worse than `start`.
pub fn tabu_search(
    dg: &DecompositionGraph,
    start: Solution,
    obj: &Objective,
    rng: &mut SolverRng,
    budget: usize,
) -> TabuOutcome {
    let k = obj.k;
    let den = i128::from(obj.alpha.den());
    let num = i128::from(obj.alpha.num());
    let mut best = start;
    let mut work = Search::new(dg, k, &best);
    let mut tabu = vec![0u64; dg.n() * k];
    let mut count = 0usize;

    while best.score > 0 && count < budget {
        let mut allowed = Pick::default();
        let mut any = Pick::default();
        for &v in &work.critical {
            let from = work.colors[v];
            for to in (0..k).filter(|&c| c != from) {
                let (dc, ds) = work.delta(v, to);
                let delta = den * i128::from(dc) + num * i128::from(ds);
                if (count as u64) < tabu[v * k + to] {
                    // Only consulted when every move is tabu.
                    if allowed.best.is_none() {
                        any.offer(delta, v, to, rng);
                    }
                } else {
                    allowed.offer(delta, v, to, rng);
                }
            }
        }
        let Some((_, v, to)) = allowed.best.or(any.best) else {
            // No violated edge left: only possible when alpha is zero.
            break;
        };
        let from = work.colors[v];
        work.apply(v, to);
        let r = rng.gen_range(1..=10u64);
        tabu[v * k + from] = tabu_tenure(count as u64, work.conflicts, work.stitches, r);

        let score = obj.alpha.scaled(crate::cost::Cost {
            conflicts: work.conflicts,
            stitches: work.stitches,
        });
        if score < best.score {
            best.colors.copy_from_slice(&work.colors);
            best.cost.conflicts = work.conflicts;
            best.cost.stitches = work.stitches;
            best.score = score;
        }
        count += 1;
    }

    TabuOutcome {
        best,
        iterations: count,
    }
}
