//! Multi-parent greedy partition crossover.

use rand::Rng;

use crate::rng::SolverRng;
use crate::Color;

/// Builds a child coloring from `parents`, rotating through them: child
/// class `c` is the largest class of parent `c mod len`, counted over
/// vertices not yet assigned. Vertices left over after `k` classes get a
/// uniformly random color.
pub fn mgpx(parents: &[&[Color]], k: usize, rng: &mut SolverRng) -> Vec<Color> {
    assert!(!parents.is_empty(), "mgpx needs at least one parent");
    let n = parents[0].len();
    debug_assert!(parents.iter().all(|p| p.len() == n));

    let mut child: Vec<Option<Color>> = vec![None; n];
    let mut remaining = n;
    let mut sizes = vec![0usize; k];
    for c in 0..k {
        if remaining == 0 {
            break;
        }
        let parent = parents[c % parents.len()];
        sizes.iter_mut().for_each(|s| *s = 0);
        for (v, &pc) in parent.iter().enumerate() {
            if child[v].is_none() {
                sizes[pc] += 1;
            }
        }
        // Largest class, lowest label on ties.
        let (class, _) = sizes
            .iter()
            .enumerate()
            .fold((0, 0), |best, (i, &s)| if s > best.1 { (i, s) } else { best });
        for (v, &pc) in parent.iter().enumerate() {
            if pc == class && child[v].is_none() {
                child[v] = Some(c);
                remaining -= 1;
            }
        }
    }
    child
        .into_iter()
        .map(|c| c.unwrap_or_else(|| rng.gen_range(0..k)))
        .collect()
}

/// Three-parent form used by the solution refinement: `base` first, then the
/// two elites.
pub fn mgpx3(base: &[Color], p1: &[Color], p2: &[Color], k: usize, rng: &mut SolverRng) -> Vec<Color> {
    mgpx(&[base, p1, p2], k, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    /// True when `a` and `b` induce the same partition.
    fn same_partition(a: &[Color], b: &[Color]) -> bool {
        (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
    }

    #[test]
    fn identical_balanced_parents_reproduce_partition() {
        let p = vec![0, 1, 2, 0, 1, 2];
        let mut rng = seeded(0);
        let child = mgpx3(&p, &p, &p, 3, &mut rng);
        assert!(same_partition(&child, &p));
        // All classes came from parents: first pick is class 0 (tie, lowest label).
        assert_eq!(child, vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn single_vertex() {
        let mut rng = seeded(0);
        assert_eq!(mgpx3(&[2], &[1], &[0], 3, &mut rng), vec![0]);
    }

    #[test]
    fn disjoint_classes_cover_without_random_fill() {
        // x's biggest class is {0,1,2}; p1 then contributes {3}.
        let x = [0, 0, 0, 1];
        let p1 = [1, 1, 0, 0];
        let p2 = [0, 1, 0, 1];
        let mut rng = seeded(0);
        let child = mgpx3(&x, &p1, &p2, 2, &mut rng);
        assert_eq!(child, vec![0, 0, 0, 1]);
    }

    #[test]
    fn leftovers_are_filled_in_range() {
        // x gives {0,1}; p1 splits {2,3} into singletons and gives {2}; 3 is left over.
        let x = [0, 0, 1, 1];
        let p1 = [0, 1, 0, 1];
        for seed in 0..8 {
            let mut rng = seeded(seed);
            let child = mgpx3(&x, &p1, &x, 2, &mut rng);
            assert_eq!(&child[..3], &[0, 0, 1]);
            assert!(child[3] < 2);
        }
    }
}
