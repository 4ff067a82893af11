//! Exact conflict + weighted stitch cost.
//!
//! Costs are kept as integer counts. The stitch weight is a decimal
//! `num / 10^d`, so every comparison runs on the exact integer
//! `10^d * conflicts + num * stitches` and printed costs carry no binary
//! rounding.

use std::fmt;
use std::str::FromStr;

use crate::decomp::DecompositionGraph;
use crate::error::{Error, Result};
use crate::Color;

const MAX_ALPHA_DIGITS: u32 = 9;

/// Non-negative decimal stitch weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u64,
    digits: u32,
}

impl Alpha {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::contract(format!("alpha must be a non-negative decimal, got {text:?}"));
        let (int, frac) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if (int.is_empty() && frac.is_empty()) || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        let digits = frac.len() as u32;
        if digits > MAX_ALPHA_DIGITS {
            return Err(Error::contract(format!(
                "alpha supports at most {MAX_ALPHA_DIGITS} decimal places, got {text:?}"
            )));
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(10u64.pow(digits))
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Alpha { num, digits })
    }

    /// Denominator of the weight, a power of ten.
    pub fn den(&self) -> u64 {
        10u64.pow(self.digits)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// `den * conflicts + num * stitches`, the exact comparison key.
    pub fn scaled(&self, cost: Cost) -> u128 {
        u128::from(self.den()) * u128::from(cost.conflicts) + u128::from(self.num) * u128::from(cost.stitches)
    }

    /// Renders a scaled cost as a decimal with at least one fractional digit.
    pub fn format_scaled(&self, scaled: u128) -> String {
        let den = u128::from(self.den());
        let int = scaled / den;
        let frac = scaled % den;
        if self.digits == 0 || frac == 0 {
            return format!("{int}.0");
        }
        let frac = format!("{:0width$}", frac, width = self.digits as usize);
        format!("{int}.{}", frac.trim_end_matches('0'))
    }

    pub fn format(&self, cost: Cost) -> String {
        self.format_scaled(self.scaled(cost))
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den() as f64
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha { num: 1, digits: 1 }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Alpha::parse(s)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.den();
        let (int, frac) = (self.num / den, self.num % den);
        if self.digits == 0 {
            write!(f, "{int}")
        } else {
            write!(f, "{int}.{:0width$}", frac, width = self.digits as usize)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cost {
    pub conflicts: u64,
    pub stitches: u64,
}

impl Cost {
    pub fn is_zero(&self) -> bool {
        self.conflicts == 0 && self.stitches == 0
    }
}

/// Mask count and stitch weight of one decomposition problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Objective {
    pub k: usize,
    pub alpha: Alpha,
}

impl Objective {
    pub fn new(k: usize, alpha: Alpha) -> Result<Self> {
        if k < 2 {
            return Err(Error::contract(format!("mask count must be at least 2, got {k}")));
        }
        Ok(Objective { k, alpha })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub colors: Vec<Color>,
    pub cost: Cost,
    /// `alpha.scaled(cost)` under the objective that produced this solution.
    pub score: u128,
}

impl Solution {
    pub fn better_than(&self, other: &Solution) -> bool {
        self.score < other.score
    }
}

fn check_colors(dg: &DecompositionGraph, colors: &[Color], k: usize) -> Result<()> {
    if colors.len() != dg.n() {
        return Err(Error::contract(format!(
            "assignment has {} entries for {} vertices",
            colors.len(),
            dg.n()
        )));
    }
    if let Some((v, c)) = colors.iter().enumerate().find(|(_, &c)| c >= k) {
        return Err(Error::contract(format!("vertex {v} has color {c} outside 0..{k}")));
    }
    Ok(())
}

/// Counts monochrome conflict edges and bichrome stitch edges.
pub fn count(dg: &DecompositionGraph, colors: &[Color]) -> Cost {
    Cost {
        conflicts: dg
            .conflict_edges()
            .iter()
            .filter(|&&(u, v)| colors[u] == colors[v])
            .count() as u64,
        stitches: dg
            .stitch_edges()
            .iter()
            .filter(|&&(u, v)| colors[u] != colors[v])
            .count() as u64,
    }
}

pub fn evaluate(dg: &DecompositionGraph, colors: Vec<Color>, obj: &Objective) -> Result<Solution> {
    check_colors(dg, &colors, obj.k)?;
    let cost = count(dg, &colors);
    Ok(Solution {
        score: obj.alpha.scaled(cost),
        colors,
        cost,
    })
}

/// Recoloring of one vertex with its effect on the counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub v: usize,
    pub from: Color,
    pub to: Color,
    pub delta_conflicts: i64,
    pub delta_stitches: i64,
}

impl Move {
    pub fn apply(&self, sol: &mut Solution, obj: &Objective) {
        debug_assert_eq!(sol.colors[self.v], self.from);
        sol.colors[self.v] = self.to;
        sol.cost.conflicts = sol.cost.conflicts.wrapping_add_signed(self.delta_conflicts);
        sol.cost.stitches = sol.cost.stitches.wrapping_add_signed(self.delta_stitches);
        sol.score = obj.alpha.scaled(sol.cost);
    }
}

/// Effect of recoloring `v` to `to`, from `v`'s incident edges only.
pub fn delta_evaluate(dg: &DecompositionGraph, sol: &Solution, v: usize, to: Color) -> Result<Move> {
    let from = *sol
        .colors
        .get(v)
        .ok_or_else(|| Error::contract(format!("vertex {v} out of range")))?;
    if from == to {
        return Err(Error::contract(format!("vertex {v} already has color {to}")));
    }
    let mut dc = 0i64;
    for &u in dg.conflict_neighbors(v) {
        let c = sol.colors[u];
        dc += i64::from(c == to) - i64::from(c == from);
    }
    let mut ds = 0i64;
    for &u in dg.stitch_neighbors(v) {
        let c = sol.colors[u];
        ds += i64::from(c == from) - i64::from(c == to);
    }
    Ok(Move {
        v,
        from,
        to,
        delta_conflicts: dc,
        delta_stitches: ds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cost(c: u64, s: u64) -> Cost {
        Cost {
            conflicts: c,
            stitches: s,
        }
    }

    #[test]
    fn table_costs_print_exactly() {
        let a = Alpha::default();
        assert_eq!(a.format(cost(0, 4)), "0.4");
        assert_eq!(a.format(cost(1, 205)), "21.5");
        assert_eq!(a.format(cost(19, 54)), "24.4");
        assert_eq!(a.format(cost(34, 97)), "43.7");
        assert_eq!(a.format(cost(0, 0)), "0.0");
        assert_eq!(a.format(cost(44, 40)), "48.0");
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!(Alpha::parse("0.1").unwrap(), Alpha::default());
        assert_eq!(Alpha::parse("0.10").unwrap(), Alpha::default());
        assert_eq!(Alpha::parse(".1").unwrap(), Alpha::default());
        let a = Alpha::parse("0.25").unwrap();
        assert_eq!((a.num(), a.den()), (25, 100));
        assert_eq!(a.to_string(), "0.25");
        assert_eq!(a.format(cost(1, 3)), "1.75");
        let a = Alpha::parse("2").unwrap();
        assert_eq!(a.format(cost(1, 3)), "7.0");
        assert_eq!(a.to_string(), "2");
        for bad in ["", ".", "-0.1", "1e-1", "0.1.2", "abc", "0.0000000001"] {
            assert!(Alpha::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn scaled_comparison_is_exact() {
        let a = Alpha::default();
        // 1 conflict == 10 stitches at alpha 0.1.
        assert_eq!(a.scaled(cost(1, 0)), a.scaled(cost(0, 10)));
        assert!(a.scaled(cost(0, 9)) < a.scaled(cost(1, 0)));
    }

    #[test]
    fn evaluate_triangle_monochrome() {
        let g = DecompositionGraph::new(3, [(0, 1), (1, 2), (0, 2)], []).unwrap();
        let obj = Objective::new(3, Alpha::default()).unwrap();
        let s = evaluate(&g, vec![0, 0, 0], &obj).unwrap();
        assert_eq!(s.cost, cost(3, 0));
        assert_eq!(obj.alpha.format(s.cost), "3.0");
        assert!(matches!(evaluate(&g, vec![0, 0, 3], &obj), Err(Error::Contract(_))));
        assert!(matches!(evaluate(&g, vec![0, 0], &obj), Err(Error::Contract(_))));
    }

    #[test]
    fn delta_examples() {
        let obj = Objective::new(3, Alpha::default()).unwrap();
        let g = DecompositionGraph::new(2, [], []).unwrap();
        let s = evaluate(&g, vec![0, 0], &obj).unwrap();
        let m = delta_evaluate(&g, &s, 0, 2).unwrap();
        assert_eq!((m.delta_conflicts, m.delta_stitches), (0, 0));

        let g = DecompositionGraph::new(2, [(0, 1)], []).unwrap();
        let s = evaluate(&g, vec![1, 1], &obj).unwrap();
        assert_eq!(delta_evaluate(&g, &s, 1, 0).unwrap().delta_conflicts, -1);
        assert!(delta_evaluate(&g, &s, 1, 1).is_err());

        // v=0 has CE neighbors 1, 2 and SE neighbor 3, all colored 2; v moves 0 -> 2.
        let g = DecompositionGraph::new(4, [(0, 1), (0, 2)], [(0, 3)]).unwrap();
        let mut s = evaluate(&g, vec![0, 2, 2, 2], &obj).unwrap();
        let m = delta_evaluate(&g, &s, 0, 2).unwrap();
        assert_eq!((m.delta_conflicts, m.delta_stitches), (2, -1));
        m.apply(&mut s, &obj);
        assert_eq!(s, evaluate(&g, s.colors.clone(), &obj).unwrap());
    }

    #[test]
    fn objective_requires_two_masks() {
        assert!(Objective::new(1, Alpha::default()).is_err());
    }
}
