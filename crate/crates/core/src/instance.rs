//! Instances, assignments and the cost function.

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// `m` sets of `n` binary vectors of dimension `p`, with an optional budget.
///
/// `m >= 1`. `n = 0` is accepted because kernelization with `k = 0` may peel
/// every stack away; such an instance has the single empty solution of cost 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    p: usize,
    sets: Vec<Vec<BitVec>>,
    budget: Option<u64>,
}

impl Instance {
    pub fn new(p: usize, sets: Vec<Vec<BitVec>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Dimension("an instance needs at least one set".into()));
        }
        let n = sets[0].len();
        for (i, set) in sets.iter().enumerate() {
            if set.len() != n {
                return Err(Error::Dimension(format!(
                    "set {} has {} vectors, expected {n}",
                    i + 1,
                    set.len()
                )));
            }
            for (j, v) in set.iter().enumerate() {
                if v.len() != p {
                    return Err(Error::Dimension(format!(
                        "vector {} of set {} has {} components, expected {p}",
                        j + 1,
                        i + 1,
                        v.len()
                    )));
                }
            }
        }
        Ok(Instance {
            p,
            sets,
            budget: None,
        })
    }

    /// Convenience constructor from `0`/`1` strings, one inner slice per set.
    pub fn from_strs(sets: &[&[&str]]) -> Result<Self> {
        let parsed: Vec<Vec<BitVec>> = sets
            .iter()
            .map(|set| set.iter().map(|s| s.parse()).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let p = parsed
            .first()
            .and_then(|s| s.first())
            .map(BitVec::len)
            .unwrap_or(0);
        Instance::new(p, parsed)
    }

    pub fn with_budget(mut self, k: Option<u64>) -> Self {
        self.budget = k;
        self
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn n(&self) -> usize {
        self.sets[0].len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn sets(&self) -> &[Vec<BitVec>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[BitVec] {
        &self.sets[i]
    }

    pub fn vector(&self, i: usize, j: usize) -> &BitVec {
        &self.sets[i][j]
    }

    /// Total number of zeros in set `i`.
    pub fn set_cost(&self, i: usize) -> usize {
        self.sets[i].iter().map(BitVec::count_zeros).sum()
    }

    pub fn into_sets(self) -> Vec<Vec<BitVec>> {
        self.sets
    }
}

/// For each set, a map from stack index to vector index (both 0-based).
///
/// Any tuple of bijections is a valid assignment; solvers emit the canonical
/// form where the first permutation is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    perms: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = perms.first().map_or(0, Vec::len);
        for (i, perm) in perms.iter().enumerate() {
            check_bijection(perm, n).map_err(|e| {
                Error::Validation(format!("permutation of set {}: {e}", i + 1))
            })?;
        }
        Ok(Assignment { perms })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Assignment {
            perms: vec![(0..n).collect(); m],
        }
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn m(&self) -> usize {
        self.perms.len()
    }

    pub fn n(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    /// Vector index chosen from each set for stack `s`.
    pub fn stack(&self, s: usize) -> Vec<usize> {
        self.perms.iter().map(|perm| perm[s]).collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.perms
            .first()
            .is_none_or(|p| p.iter().enumerate().all(|(s, &j)| s == j))
    }

    /// Relabels stacks so that stack `j` holds vector `j` of the first set.
    pub fn canonical(&self) -> Assignment {
        let Some(first) = self.perms.first() else {
            return self.clone();
        };
        let mut stack_of = vec![0; first.len()];
        for (s, &j) in first.iter().enumerate() {
            stack_of[j] = s;
        }
        let perms = self
            .perms
            .iter()
            .map(|perm| stack_of.iter().map(|&s| perm[s]).collect())
            .collect();
        Assignment { perms }
    }

    /// Applies a relabeling of stacks: new stack `t` is old stack `order[t]`.
    pub fn reorder_stacks(&self, order: &[usize]) -> Assignment {
        let perms = self
            .perms
            .iter()
            .map(|perm| order.iter().map(|&s| perm[s]).collect())
            .collect();
        Assignment { perms }
    }
}

fn check_bijection(perm: &[usize], n: usize) -> std::result::Result<(), String> {
    if perm.len() != n {
        return Err(format!("length {} differs from {n}", perm.len()));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n {
            return Err(format!("index {} out of range", j + 1));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(format!("index {} used twice", j + 1));
        }
    }
    Ok(())
}

/// An assignment with its stack vectors and total cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostedSolution {
    pub assignment: Assignment,
    pub stack_vectors: Vec<BitVec>,
    pub total_cost: u64,
}

impl CostedSolution {
    pub fn stack_costs(&self) -> Vec<usize> {
        self.stack_vectors.iter().map(BitVec::count_zeros).collect()
    }

    pub fn has_one_stack(&self) -> bool {
        self.stack_vectors.iter().any(BitVec::is_all_ones)
    }
}

/// Budget-related parameters of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub k: u64,
    /// Largest per-set zero count, a lower bound on every solution.
    pub b: u64,
    pub zeta_b: i64,
    pub zeta_p: i64,
}

/// Bitwise AND of a nonempty list of vectors of equal length.
pub fn and_fold<'a, I>(vectors: I) -> Result<BitVec>
where
    I: IntoIterator<Item = &'a BitVec>,
{
    let mut iter = vectors.into_iter();
    let mut acc = iter
        .next()
        .ok_or_else(|| Error::Dimension("cannot fold an empty list of vectors".into()))?
        .clone();
    for v in iter {
        if v.len() != acc.len() {
            return Err(Error::Dimension(format!(
                "cannot AND a vector of length {} with one of length {}",
                acc.len(),
                v.len()
            )));
        }
        acc.and_assign(v);
    }
    Ok(acc)
}

/// Number of zero components.
pub fn cost(v: &BitVec) -> u64 {
    v.count_zeros() as u64
}

pub fn evaluate(instance: &Instance, a: &Assignment) -> Result<CostedSolution> {
    if a.m() != instance.m() {
        return Err(Error::Dimension(format!(
            "assignment covers {} sets, instance has {}",
            a.m(),
            instance.m()
        )));
    }
    if a.n() != instance.n() {
        return Err(Error::Dimension(format!(
            "assignment has {} stacks, instance has {} vectors per set",
            a.n(),
            instance.n()
        )));
    }
    for (i, perm) in a.perms().iter().enumerate() {
        check_bijection(perm, instance.n())
            .map_err(|e| Error::Validation(format!("permutation of set {}: {e}", i + 1)))?;
    }
    let stack_vectors: Vec<BitVec> = (0..instance.n())
        .map(|s| {
            and_fold(
                a.perms()
                    .iter()
                    .enumerate()
                    .map(|(i, perm)| instance.vector(i, perm[s])),
            )
        })
        .collect::<Result<_>>()?;
    let total_cost = stack_vectors.iter().map(cost).sum();
    Ok(CostedSolution {
        assignment: a.clone(),
        stack_vectors,
        total_cost,
    })
}

pub fn derive_params(instance: &Instance, k: u64) -> Params {
    let b = (0..instance.m())
        .map(|i| instance.set_cost(i) as u64)
        .max()
        .unwrap_or(0);
    Params {
        k,
        b,
        zeta_b: k as i64 - b as i64,
        zeta_p: k as i64 - instance.p() as i64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn and_fold_examples() {
        let s1 = [bv("110111"), bv("110010"), bv("110110")];
        assert_eq!(and_fold(&s1).unwrap(), bv("110010"));
        let s2 = [bv("001101"), bv("110011"), bv("010110")];
        assert_eq!(and_fold(&s2).unwrap(), bv("000000"));
        assert_eq!(and_fold(&[bv("111111")]).unwrap(), bv("111111"));
    }

    #[test]
    fn and_fold_rejects_length_mismatch() {
        let err = and_fold(&[bv("11"), bv("111")]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(and_fold(std::iter::empty::<&BitVec>()).is_err());
    }

    #[test]
    fn cost_examples() {
        assert_eq!(cost(&bv("110010")), 3);
        assert_eq!(cost(&bv("000000")), 6);
        assert_eq!(cost(&bv("1111")), 0);
    }

    #[test]
    fn evaluate_fig1_depicted_solution() {
        let inst = fixtures::fig1();
        let sol = evaluate(&inst, &fixtures::fig1_depicted_assignment()).unwrap();
        assert_eq!(sol.total_cost, 17);
        assert_eq!(sol.stack_costs(), vec![3, 6, 4, 4]);
    }

    #[test]
    fn evaluate_fig2_depicted_solution() {
        let inst = fixtures::fig2();
        let sol = evaluate(&inst, &fixtures::fig2_depicted_assignment()).unwrap();
        assert_eq!(sol.total_cost, 3);
        assert_eq!(sol.stack_costs(), vec![1, 1, 1]);
    }

    #[test]
    fn single_set_identity_costs_the_set() {
        let inst = Instance::from_strs(&[&["0110", "1111", "0000"]]).unwrap();
        let sol = evaluate(&inst, &Assignment::identity(1, 3)).unwrap();
        assert_eq!(sol.total_cost, inst.set_cost(0) as u64);
    }

    #[test]
    fn evaluate_rejects_non_bijection() {
        let inst = fixtures::fig2();
        let bad = Assignment {
            perms: vec![vec![0, 1, 2], vec![0, 0, 2], vec![0, 1, 2]],
        };
        assert!(matches!(evaluate(&inst, &bad), Err(Error::Validation(_))));
        assert!(Assignment::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        let short = Assignment::identity(2, 3);
        assert!(matches!(evaluate(&inst, &short), Err(Error::Dimension(_))));
    }

    #[test]
    fn canonical_form_preserves_cost() {
        let inst = fixtures::fig1();
        let a = fixtures::fig1_depicted_assignment();
        assert!(!a.is_canonical());
        let c = a.canonical();
        assert!(c.is_canonical());
        assert_eq!(
            evaluate(&inst, &a).unwrap().total_cost,
            evaluate(&inst, &c).unwrap().total_cost
        );
    }

    #[test]
    fn params_of_fixtures() {
        // fig2: every set holds one 1-vector and two vectors with a single zero.
        let p = derive_params(&fixtures::fig2(), 3);
        assert_eq!((p.b, p.zeta_b, p.zeta_p), (2, 1, 0));
        let ones = Instance::new(3, vec![vec![BitVec::ones(3); 2]; 2]).unwrap();
        let p = derive_params(&ones, 5);
        assert_eq!((p.b, p.zeta_b), (0, 5));
    }

    #[test]
    fn constructor_checks_dimensions() {
        assert!(Instance::new(2, vec![]).is_err());
        assert!(Instance::new(2, vec![vec![bv("10")], vec![bv("10"), bv("01")]]).is_err());
        assert!(Instance::new(3, vec![vec![bv("10")]]).is_err());
    }
}
