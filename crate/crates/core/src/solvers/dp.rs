//! Layered search over stack multisets.
//!
//! After the first `i` sets are placed, only the multiset of partial stack
//! values matters for the rest of the search. Each layer keeps those
//! multisets (as sorted tuples) once, which collapses the stack symmetry that
//! plain enumeration pays for in full.

use std::collections::HashMap;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::instance::{evaluate, Assignment, Instance};

use super::brute::next_permutation;
use super::{SolveOutcome, Stats, Verdict};

/// Default limit on the number of states held in one layer.
pub const DEFAULT_STATE_CAP: usize = 4_000_000;

struct Layer {
    states: Vec<Vec<BitVec>>,
    /// Per state: parent index and, per sorted position, the unsorted stack
    /// it came from and the vector of this layer's set placed there.
    back: Vec<(usize, Vec<(usize, usize)>)>,
}

/// Distinct arrangements of a set, as `order[s] = vector index for stack s`.
fn arrangements(set: &[BitVec]) -> Vec<Vec<usize>> {
    let n = set.len();
    let class: Vec<usize> = (0..n).map(|j| (0..=j).find(|&t| set[t] == set[j]).unwrap()).collect();
    let mut labels = class.clone();
    labels.sort_unstable();
    let mut out = Vec::new();
    loop {
        let mut next_of: HashMap<usize, usize> = HashMap::new();
        let order = labels
            .iter()
            .map(|&c| {
                let from = next_of.entry(c).or_insert(0);
                let j = (*from..n).find(|&j| class[j] == c).unwrap();
                *from = j + 1;
                j
            })
            .collect();
        out.push(order);
        if !next_permutation(&mut labels) {
            return out;
        }
    }
}

fn zeros(state: &[BitVec]) -> u64 {
    state.iter().map(|v| v.count_zeros() as u64).sum()
}

/// Exact solver; with a budget, states already above it are discarded.
pub fn layered_dp(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    layered_dp_with_cap(instance, k, DEFAULT_STATE_CAP)
}

pub fn layered_dp_with_cap(instance: &Instance, k: Option<u64>, cap: usize) -> Result<SolveOutcome> {
    let (m, n) = (instance.m(), instance.n());
    let mut stats = Stats::default();
    let mut start: Vec<(BitVec, usize)> = (0..n).map(|j| (instance.vector(0, j).clone(), j)).collect();
    start.sort();
    let first = Layer {
        states: vec![start.iter().map(|(v, _)| v.clone()).collect()],
        back: vec![(0, start.iter().map(|&(_, j)| (j, j)).collect())],
    };
    let limit = k.unwrap_or(u64::MAX);
    let mut layers = vec![first];
    for i in 1..m {
        let set = instance.set(i);
        let orders = arrangements(set);
        let prev = layers.last().unwrap();
        let mut index: HashMap<Vec<BitVec>, usize> = HashMap::new();
        let mut next = Layer {
            states: Vec::new(),
            back: Vec::new(),
        };
        for (parent, state) in prev.states.iter().enumerate() {
            for order in &orders {
                stats.nodes_expanded += 1;
                let mut placed: Vec<(BitVec, usize, usize)> =
                    (0..n).map(|s| (state[s].and(&set[order[s]]), s, order[s])).collect();
                placed.sort();
                let values: Vec<BitVec> = placed.iter().map(|(v, _, _)| v.clone()).collect();
                if zeros(&values) > limit || index.contains_key(&values) {
                    continue;
                }
                if next.states.len() == cap {
                    return Err(Error::CapExceeded {
                        required: cap as u128 + 1,
                        cap: cap as u128,
                    });
                }
                index.insert(values.clone(), next.states.len());
                next.states.push(values);
                next.back.push((parent, placed.iter().map(|&(_, s, j)| (s, j)).collect()));
            }
        }
        stats.max_depth = i as u64;
        layers.push(next);
    }

    let last = layers.last().unwrap();
    let Some(best) = (0..last.states.len()).min_by_key(|&t| zeros(&last.states[t])) else {
        return Ok(SolveOutcome {
            solver: "layered-dp",
            budget: k,
            verdict: Verdict::No,
            best: None,
            optimum: None,
            stats,
        });
    };

    // walk back, tracking which unsorted stack each final position is
    let mut perms = vec![vec![0; n]; m];
    let mut pos: Vec<usize> = (0..n).collect();
    let mut t = best;
    for i in (0..m).rev() {
        let (parent, links) = &layers[i].back[t];
        for (stack, p) in pos.iter_mut().enumerate() {
            let (from, j) = links[*p];
            perms[i][stack] = j;
            *p = from;
        }
        t = *parent;
    }
    let solution = evaluate(instance, &Assignment::new(perms)?)?;
    Ok(SolveOutcome::from_optimum("layered-dp", k, solution, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solvers::brute_force;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arrangements_skip_repeats() {
        let v = |s: &str| s.parse::<BitVec>().unwrap();
        assert_eq!(arrangements(&[v("01"), v("10"), v("11")]).len(), 6);
        assert_eq!(arrangements(&[v("11"), v("01"), v("11")]).len(), 3);
        assert_eq!(arrangements(&[v("11"), v("11")]), vec![vec![0, 1]]);
    }

    #[test]
    fn figures() {
        let out = layered_dp(&fixtures::fig2(), None).unwrap();
        assert_eq!(out.optimum, Some(3));
        assert!(!layered_dp(&fixtures::fig2(), Some(2)).unwrap().is_yes());
        let fig1 = fixtures::fig1();
        assert_eq!(layered_dp(&fig1, None).unwrap().optimum, brute_force(&fig1, None).unwrap().optimum);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (m, n, p) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(0..=6));
            let density = rng.gen_range(0.05..0.6);
            let sets = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| BitVec::from_bools((0..p).map(|_| !rng.gen_bool(density))))
                        .collect()
                })
                .collect();
            let inst = Instance::new(p, sets).unwrap();
            let opt = brute_force(&inst, None).unwrap().optimum.unwrap();
            let out = layered_dp(&inst, None).unwrap();
            assert_eq!(out.optimum, Some(opt));
            let best = out.best.unwrap();
            assert_eq!(evaluate(&inst, &best.assignment).unwrap(), best);
            for k in opt.saturating_sub(1)..=opt {
                assert_eq!(layered_dp(&inst, Some(k)).unwrap().is_yes(), opt <= k);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::from_strs(&[&["01", "10"], &["01", "10"]]).unwrap();
        assert!(matches!(layered_dp_with_cap(&inst, None, 1), Err(Error::CapExceeded { .. })));
    }
}
