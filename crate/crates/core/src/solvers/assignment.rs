use crate::error::{Error, Result};
use crate::instance::{evaluate, Assignment, Instance};

use super::{SolveOutcome, Stats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HungarianResult {
    /// `row -> column`
    pub assignment: Vec<usize>,
    pub cost: i64,
    /// Inner relaxation steps, the unit of work of the `O(n³)` bound.
    pub steps: u64,
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// method with potentials).
pub fn hungarian(cost: &[Vec<i64>]) -> HungarianResult {
    let n = cost.len();
    const INF: i64 = i64::MAX / 4;
    // 1-based: index 0 is the virtual column/row
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut steps = 0u64;

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                steps += 1;
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();
    HungarianResult {
        assignment,
        cost: total,
        steps,
    }
}

/// Exact solver for two sets: a linear assignment on the matrix of folded
/// pair costs.
pub fn solve_m2(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    if instance.m() != 2 {
        return Err(Error::Arity {
            expected: "m = 2".into(),
            found: format!("m = {}", instance.m()),
        });
    }
    let n = instance.n();
    let matrix: Vec<Vec<i64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| instance.vector(0, a).and_count_zeros(instance.vector(1, b)) as i64)
                .collect()
        })
        .collect();
    let h = hungarian(&matrix);
    let assignment = Assignment::new(vec![(0..n).collect(), h.assignment])?;
    let best = evaluate(instance, &assignment)?;
    debug_assert_eq!(best.total_cost as i64, h.cost);
    let stats = Stats {
        nodes_expanded: h.steps,
        matchings_computed: 1,
        max_depth: 0,
    };
    Ok(SolveOutcome::from_optimum("m2", k, best, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::brute_force;

    fn brute_min(cost: &[Vec<i64>]) -> i64 {
        fn rec(cost: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i64 {
            if row == cost.len() {
                return 0;
            }
            let mut best = i64::MAX;
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(cost[row][j] + rec(cost, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        rec(cost, 0, &mut vec![false; cost.len()])
    }

    #[test]
    fn hungarian_matches_enumeration() {
        let mats = vec![
            vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]],
            vec![vec![7]],
            vec![vec![1, 1], vec![1, 1]],
            vec![
                vec![9, 2, 7, 8],
                vec![6, 4, 3, 7],
                vec![5, 8, 1, 8],
                vec![7, 6, 9, 4],
            ],
        ];
        for m in mats {
            let h = hungarian(&m);
            assert_eq!(h.cost, brute_min(&m));
        }
        assert_eq!(hungarian(&[]).cost, 0);
    }

    #[test]
    fn two_by_two_examples() {
        let inst = Instance::from_strs(&[&["10", "01"], &["10", "01"]]).unwrap();
        let out = solve_m2(&inst, None).unwrap();
        assert_eq!(out.optimum, Some(2));
        assert_eq!(out.best.unwrap().assignment, Assignment::identity(2, 2));

        let ones = Instance::from_strs(&[&["11", "11"], &["11", "11"]]).unwrap();
        assert_eq!(solve_m2(&ones, None).unwrap().optimum, Some(0));
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let inst = crate::fixtures::fig2();
        assert!(matches!(solve_m2(&inst, None), Err(Error::Arity { .. })));
    }

    #[test]
    fn agrees_with_brute_force_on_fixed_cases() {
        let inst = Instance::from_strs(&[
            &["0110", "1011", "1110", "0001"],
            &["1101", "0111", "1010", "1111"],
        ])
        .unwrap();
        assert_eq!(
            solve_m2(&inst, None).unwrap().optimum,
            brute_force(&inst, None).unwrap().optimum
        );
    }
}
