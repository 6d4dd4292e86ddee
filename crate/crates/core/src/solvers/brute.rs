use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::instance::{evaluate, Assignment, Instance};

use super::{SolveOutcome, Stats, Verdict};

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// Rearranges into the next lexicographic permutation. On the last one,
/// resets to ascending order and returns `false`.
pub(super) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Number of canonical assignments, `(n!)^(m-1)`, saturating.
pub fn enumeration_size(m: usize, n: usize) -> u128 {
    let fact = (2..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x));
    let Some(fact) = fact else {
        return if m <= 1 { 1 } else { u128::MAX };
    };
    (1..m).try_fold(1u128, |acc, _| acc.checked_mul(fact)).unwrap_or(u128::MAX)
}

/// Odometer over tuples of permutations for sets `1..m`, last set fastest.
/// Returns the index of the first set whose permutation changed.
fn advance(perms: &mut [Vec<usize>]) -> Option<usize> {
    (1..perms.len()).rev().find(|&i| next_permutation(&mut perms[i]))
}

/// All canonical assignments (first permutation fixed to the identity) in
/// lexicographic order of the remaining permutations.
pub struct CanonicalAssignments {
    perms: Vec<Vec<usize>>,
    done: bool,
}

impl CanonicalAssignments {
    pub fn new(m: usize, n: usize) -> Self {
        CanonicalAssignments {
            perms: vec![(0..n).collect(); m],
            done: false,
        }
    }
}

impl Iterator for CanonicalAssignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = Assignment::new(self.perms.clone()).expect("odometer yields bijections");
        if advance(&mut self.perms).is_none() {
            self.done = true;
        }
        Some(out)
    }
}

pub fn brute_force(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    brute_force_with_cap(instance, k, DEFAULT_ENUMERATION_CAP)
}

/// Exhaustive search over every canonical assignment. Ties resolve to the
/// lexicographically smallest permutation tuple.
pub fn brute_force_with_cap(instance: &Instance, k: Option<u64>, cap: u128) -> Result<SolveOutcome> {
    let (m, n) = (instance.m(), instance.n());
    let required = enumeration_size(m, n);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }

    let mut perms: Vec<Vec<usize>> = vec![(0..n).collect(); m];
    // prefix[i][s] = AND of the vectors of sets 0..=i placed in stack s
    let mut prefix: Vec<Vec<BitVec>> = vec![instance.set(0).to_vec(); m];
    let refresh = |prefix: &mut Vec<Vec<BitVec>>, perms: &[Vec<usize>], from: usize| {
        for i in from.max(1)..m {
            for s in 0..n {
                let v = prefix[i - 1][s].and(instance.vector(i, perms[i][s]));
                prefix[i][s] = v;
            }
        }
    };
    refresh(&mut prefix, &perms, 1);

    let mut stats = Stats::default();
    let mut best_cost = u64::MAX;
    let mut best_perms = perms.clone();
    loop {
        stats.nodes_expanded += 1;
        let cost: u64 = prefix[m - 1].iter().map(|v| v.count_zeros() as u64).sum();
        if cost < best_cost {
            best_cost = cost;
            best_perms.clone_from(&perms);
        }
        match advance(&mut perms) {
            Some(i) => refresh(&mut prefix, &perms, i),
            None => break,
        }
    }
    let best = evaluate(instance, &Assignment::new(best_perms)?)?;
    debug_assert_eq!(best.total_cost, best_cost);
    Ok(SolveOutcome::from_optimum("brute", k, best, stats))
}

struct BnbSearch<'a> {
    instance: &'a Instance,
    /// twin[i][j] = largest j' < j with an identical vector in set i
    twin: Vec<Vec<Option<usize>>>,
    /// zeros of the first-set vectors of stacks s.., for the lower bound
    suffix_first: Vec<u64>,
    /// zeros of the unplaced vectors of each set
    unplaced: Vec<u64>,
    used: Vec<Vec<bool>>,
    perms: Vec<Vec<usize>>,
    best_cost: u64,
    best_perms: Vec<Vec<usize>>,
    nodes: u64,
}

impl BnbSearch<'_> {
    /// Places a vector of set `i` into stack `s`; `done` is the cost of stacks `< s`.
    fn search(&mut self, s: usize, i: usize, partial: &BitVec, done: u64) {
        self.nodes += 1;
        let (m, n) = (self.instance.m(), self.instance.n());
        if s == n {
            if done < self.best_cost {
                self.best_cost = done;
                self.best_perms.clone_from(&self.perms);
            }
            return;
        }
        if i == m {
            let done = done + partial.count_zeros() as u64;
            if done + self.remaining_bound(m - 1).max(self.suffix_first[s + 1]) >= self.best_cost {
                return;
            }
            let next = if s + 1 < n {
                self.instance.vector(0, s + 1).clone()
            } else {
                BitVec::ones(self.instance.p())
            };
            self.search(s + 1, 1, &next, done);
            return;
        }
        for j in 0..n {
            if self.used[i][j] {
                continue;
            }
            if let Some(t) = self.twin[i][j] {
                if !self.used[i][t] {
                    continue;
                }
            }
            let folded = partial.and(self.instance.vector(i, j));
            let zeros = self.instance.vector(i, j).count_zeros() as u64;
            self.unplaced[i] -= zeros;
            let rest = self.remaining_bound(i).max(self.suffix_first[s + 1]);
            if done + folded.count_zeros() as u64 + rest < self.best_cost {
                self.used[i][j] = true;
                self.perms[i][s] = j;
                self.search(s, i + 1, &folded, done);
                self.used[i][j] = false;
            }
            self.unplaced[i] += zeros;
        }
    }

    /// Lower bound on the stacks after the current one. Sets `1..=upto`
    /// already have their vector for the current stack, so their unplaced
    /// vectors all land in later stacks, each adding its own zeros at least.
    fn remaining_bound(&self, upto: usize) -> u64 {
        self.unplaced[1..=upto].iter().copied().max().unwrap_or(0)
    }
}

/// Exact optimum by depth-first search, stack by stack, pruning on the
/// zeros already committed. Vectors repeated within a set are placed in
/// index order only. Exact, and usable well beyond the plain enumeration cap.
pub fn branch_and_bound(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    let (m, n) = (instance.m(), instance.n());
    let identity = evaluate(instance, &Assignment::identity(m, n))?;
    if m == 1 || n <= 1 {
        let stats = Stats {
            nodes_expanded: 1,
            ..Stats::default()
        };
        return Ok(SolveOutcome::from_optimum("branch-and-bound", k, identity, stats));
    }
    let twin = instance
        .sets()
        .iter()
        .map(|set| {
            (0..n)
                .map(|j| (0..j).rev().find(|&t| set[t] == set[j]))
                .collect()
        })
        .collect();
    let mut suffix_first = vec![0u64; n + 1];
    for s in (0..n).rev() {
        suffix_first[s] = suffix_first[s + 1] + instance.vector(0, s).count_zeros() as u64;
    }
    let mut search = BnbSearch {
        instance,
        twin,
        suffix_first,
        unplaced: (0..m)
            .map(|i| (0..n).map(|j| instance.vector(i, j).count_zeros() as u64).sum())
            .collect(),
        used: vec![vec![false; n]; m],
        perms: identity.assignment.perms().to_vec(),
        // with a budget only solutions within it matter
        best_cost: k.map_or(identity.total_cost, |k| identity.total_cost.min(k + 1)),
        best_perms: identity.assignment.perms().to_vec(),
        nodes: 0,
    };
    search.search(0, 1, instance.vector(0, 0), 0);
    let best = evaluate(instance, &Assignment::new(search.best_perms)?)?;
    let stats = Stats {
        nodes_expanded: search.nodes,
        ..Stats::default()
    };
    if k.is_some_and(|k| best.total_cost > k) {
        // nothing within the budget; the optimum itself stays unknown
        return Ok(SolveOutcome {
            solver: "branch-and-bound",
            budget: k,
            verdict: Verdict::No,
            best: None,
            optimum: None,
            stats,
        });
    }
    Ok(SolveOutcome::from_optimum("branch-and-bound", k, best, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn canonical_assignment_count() {
        assert_eq!(CanonicalAssignments::new(3, 3).count(), 36);
        assert_eq!(CanonicalAssignments::new(1, 4).count(), 1);
        assert_eq!(CanonicalAssignments::new(3, 0).count(), 1);
        assert!(CanonicalAssignments::new(3, 3).all(|a| a.is_canonical()));
        assert_eq!(enumeration_size(3, 4), 576);
        assert_eq!(enumeration_size(40, 30), u128::MAX);
    }

    #[test]
    fn fig2_optimum_is_three() {
        let out = brute_force(&fixtures::fig2(), Some(3)).unwrap();
        assert!(out.is_yes());
        assert_eq!(out.optimum, Some(3));
        assert_eq!(out.stats.nodes_expanded, 36);
        assert!(!brute_force(&fixtures::fig2(), Some(2)).unwrap().is_yes());
    }

    #[test]
    fn fig1_optimum_at_most_depicted() {
        let out = brute_force(&fixtures::fig1(), None).unwrap();
        let opt = out.optimum.unwrap();
        assert!(opt <= 17);
        // exhaustive recount over the same enumeration
        let recount = CanonicalAssignments::new(3, 4)
            .map(|a| evaluate(&fixtures::fig1(), &a).unwrap().total_cost)
            .min()
            .unwrap();
        assert_eq!(opt, recount);
    }

    #[test]
    fn ties_resolve_lexicographically() {
        let inst = Instance::from_strs(&[&["11", "11"], &["11", "11"]]).unwrap();
        let best = brute_force(&inst, None).unwrap().best.unwrap();
        assert_eq!(best.assignment, Assignment::identity(2, 2));
    }

    #[test]
    fn single_set_optimum_is_set_cost() {
        let inst = Instance::from_strs(&[&["010", "001", "111"]]).unwrap();
        let out = brute_force(&inst, None).unwrap();
        assert_eq!(out.optimum, Some(inst.set_cost(0) as u64));
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::new(1, vec![vec![BitVec::ones(1); 6]; 5]).unwrap();
        let err = brute_force_with_cap(&inst, None, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                required: 720u128.pow(4),
                cap: 1000
            }
        );
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=4);
            let p = rng.gen_range(0..=6);
            let density = rng.gen_range(0.05..0.6);
            let sets = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| BitVec::from_bools((0..p).map(|_| !rng.gen_bool(density))))
                        .collect()
                })
                .collect();
            let inst = Instance::new(p, sets).unwrap();
            let bf = brute_force(&inst, None).unwrap().optimum;
            let bb = branch_and_bound(&inst, None).unwrap();
            assert_eq!(bb.optimum, bf);
            let best = bb.best.unwrap();
            assert_eq!(evaluate(&inst, &best.assignment).unwrap(), best);
            let opt = bf.unwrap();
            for k in opt.saturating_sub(2)..=opt + 1 {
                let dec = branch_and_bound(&inst, Some(k)).unwrap();
                assert_eq!(dec.is_yes(), opt <= k);
                assert!(dec.optimum.is_none_or(|o| o == opt));
                if opt <= k {
                    assert_eq!(dec.optimum, Some(opt));
                }
            }
        }
    }
}
