//! Branching algorithm parameterized by ζ_B = k − B.
//!
//! A set attaining `B` is used as the base. The remaining sets are merged
//! into it one at a time. When a perfect matching between the base and the
//! next set adds no zero to the base, the set is consumed by that matching.
//! Otherwise every assignment adds at least one zero, so the search branches
//! over the couples `(j1, j2)` with `base[j1] & next[j2] != base[j1]`,
//! replacing `base[j1]` by the AND. Each branch adds a zero to the base and
//! branches whose base costs more than `k` are pruned, so the tree has depth
//! at most `ζ_B + 1` and fan-out at most `n²`.
//!
//! A leaf (every set consumed) yields stacks from the recorded matchings.
//! The base only over-approximates their zeros, so the leaf is re-evaluated
//! on the original instance before it is accepted.

use std::collections::HashSet;

use crate::bits::BitVec;
use crate::instance::{evaluate, Assignment, CostedSolution, Instance};

use super::matching::zero_free_matching;
use super::{SolveOutcome, Stats, Verdict};

struct Search<'a> {
    instance: &'a Instance,
    base_set: usize,
    /// Sets to merge, in order.
    order: Vec<usize>,
    k: u64,
    stats: Stats,
}

fn base_cost(base: &[BitVec]) -> u64 {
    base.iter().map(|v| v.count_zeros() as u64).sum()
}

impl Search<'_> {
    fn run(
        &mut self,
        mut base: Vec<BitVec>,
        mut next: usize,
        mut matchings: Vec<Vec<usize>>,
        depth: u64,
    ) -> Option<CostedSolution> {
        if base_cost(&base) > self.k {
            return None;
        }
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);

        while next < self.order.len() {
            let other = self.instance.set(self.order[next]);
            self.stats.matchings_computed += 1;
            match zero_free_matching(&base, other) {
                Some(mu) => {
                    matchings.push(mu);
                    next += 1;
                }
                None => break,
            }
        }
        if next == self.order.len() {
            let solution = self.reconstruct(&matchings);
            return (solution.total_cost <= self.k).then_some(solution);
        }

        let other = self.instance.set(self.order[next]);
        let n = base.len();
        for j1 in 0..n {
            // equal results from different partners give identical children
            let mut tried: HashSet<BitVec> = HashSet::new();
            for partner in other {
                if partner.zeros_subset_of(&base[j1]) {
                    continue;
                }
                let folded = base[j1].and(partner);
                if !tried.insert(folded.clone()) {
                    continue;
                }
                let previous = std::mem::replace(&mut base[j1], folded);
                let found = self.run(base.clone(), next, matchings.clone(), depth + 1);
                base[j1] = previous;
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }

    fn reconstruct(&self, matchings: &[Vec<usize>]) -> CostedSolution {
        let n = self.instance.n();
        let mut perms = vec![Vec::new(); self.instance.m()];
        perms[self.base_set] = (0..n).collect();
        for (&set, mu) in self.order.iter().zip(matchings) {
            perms[set] = mu.clone();
        }
        let a = Assignment::new(perms)
            .expect("matchings are bijections")
            .canonical();
        evaluate(self.instance, &a).expect("assignment matches instance dimensions")
    }
}

fn outcome(k: u64, found: Option<CostedSolution>, stats: Stats) -> SolveOutcome {
    SolveOutcome {
        solver: "fpt-zb",
        budget: Some(k),
        verdict: if found.is_some() {
            Verdict::Yes
        } else {
            Verdict::No
        },
        best: found,
        optimum: None,
        stats,
    }
}

/// Decides whether a solution of cost at most `k` exists.
pub fn solve_fpt_zeta_b(instance: &Instance, k: u64) -> SolveOutcome {
    let base_set = (0..instance.m())
        .max_by_key(|&i| (instance.set_cost(i), std::cmp::Reverse(i)))
        .expect("instance has at least one set");
    if instance.n() <= 1 {
        // a single assignment: the root is the leaf
        if instance.set_cost(base_set) as u64 > k {
            return outcome(k, None, Stats::default());
        }
        let sol = evaluate(instance, &Assignment::identity(instance.m(), instance.n()))
            .expect("identity matches instance dimensions");
        let stats = Stats {
            nodes_expanded: 1,
            matchings_computed: 0,
            max_depth: 1,
        };
        return outcome(k, (sol.total_cost <= k).then_some(sol), stats);
    }
    let order = (0..instance.m()).filter(|&i| i != base_set).collect();
    let mut search = Search {
        instance,
        base_set,
        order,
        k,
        stats: Stats::default(),
    };
    let found = search.run(instance.set(base_set).to_vec(), 0, Vec::new(), 1);
    outcome(k, found, search.stats)
}

/// Optimum by increasing the budget from `B` until the decision succeeds.
pub fn optimize_fpt_zeta_b(instance: &Instance) -> SolveOutcome {
    let b = (0..instance.m())
        .map(|i| instance.set_cost(i) as u64)
        .max()
        .unwrap_or(0);
    let mut stats = Stats::default();
    let mut k = b;
    loop {
        let out = solve_fpt_zeta_b(instance, k);
        stats.merge(&out.stats);
        if let Some(best) = out.best {
            let opt = best.total_cost;
            return SolveOutcome {
                solver: "fpt-zb",
                budget: None,
                verdict: Verdict::Yes,
                best: Some(best),
                optimum: Some(opt),
                stats,
            };
        }
        k += 1;
    }
}
