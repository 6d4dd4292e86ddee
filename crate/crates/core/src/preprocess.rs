//! Safe reduction rules and the `O(k²m)`-bit kernel.
//!
//! Two rules are applied to a fixpoint:
//!
//! * **all-ones columns**: a component that is 1 in every vector never
//!   contributes a zero and is dropped. Afterwards every column holds a zero
//!   somewhere, so any solution costs at least `p`; `p > k` is a NO.
//! * **1-stack peeling**: while `n > k`, a YES solution must contain a stack
//!   of cost 0, so one all-ones vector is removed from every set. A set without
//!   an all-ones vector means every stack costs at least 1 and the instance
//!   is a NO.
//!
//! Every step is recorded with original indices so that a solution of the
//! reduced instance can be lifted back with [`lift_solution`].

use std::fmt;
use std::str::FromStr;

use crate::bits::BitVec;
use crate::error::{parse_err, Error, Result};
use crate::format::content_lines;
use crate::instance::{evaluate, Assignment, CostedSolution, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    /// Original 0-based component index.
    DroppedColumn(usize),
    /// Original 0-based vector index removed from each set.
    PeeledOneStack(Vec<usize>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dropped_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().filter_map(|s| match s {
            TraceStep::DroppedColumn(r) => Some(*r),
            _ => None,
        })
    }

    pub fn peels(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.steps.iter().filter_map(|s| match s {
            TraceStep::PeeledOneStack(v) => Some(v.as_slice()),
            _ => None,
        })
    }
}

/// One step per line, 1-based indices: `drop-column r` or `peel j_1 ... j_m`.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            match step {
                TraceStep::DroppedColumn(r) => writeln!(f, "drop-column {}", r + 1)?,
                TraceStep::PeeledOneStack(js) => {
                    f.write_str("peel")?;
                    for j in js {
                        write!(f, " {}", j + 1)?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (line_no, line) in content_lines(s) {
            let mut toks = line.split_whitespace();
            let kind = toks.next().unwrap_or_default();
            let idx: Vec<usize> = toks
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(parse_err(line_no, format!("bad index {t:?}"))),
                })
                .collect::<Result<_>>()?;
            match (kind, idx.len()) {
                ("drop-column", 1) => steps.push(TraceStep::DroppedColumn(idx[0])),
                ("peel", _) if !idx.is_empty() => steps.push(TraceStep::PeeledOneStack(idx)),
                _ => return Err(parse_err(line_no, format!("unrecognized trace step {line:?}"))),
            }
        }
        Ok(Trace { steps })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelVerdict {
    No { reason: String },
    Reduced,
}

#[derive(Clone, Debug)]
pub struct KernelResult {
    pub verdict: KernelVerdict,
    /// Present when the verdict is [`KernelVerdict::Reduced`].
    pub reduced: Option<Instance>,
    pub trace: Trace,
}

impl KernelResult {
    pub fn is_no(&self) -> bool {
        matches!(self.verdict, KernelVerdict::No { .. })
    }
}

/// Working instance plus maps from current to original indices.
struct KernelState {
    sets: Vec<Vec<BitVec>>,
    p: usize,
    col_map: Vec<usize>,
    vec_map: Vec<Vec<usize>>,
    trace: Trace,
}

impl KernelState {
    fn new(instance: &Instance) -> Self {
        KernelState {
            sets: instance.sets().to_vec(),
            p: instance.p(),
            col_map: (0..instance.p()).collect(),
            vec_map: vec![(0..instance.n()).collect(); instance.m()],
            trace: Trace::default(),
        }
    }

    fn n(&self) -> usize {
        self.sets[0].len()
    }

    /// Returns the number of dropped columns.
    fn drop_columns(&mut self) -> usize {
        let keep: Vec<usize> = (0..self.p)
            .filter(|&r| self.sets.iter().flatten().any(|v| !v.get(r)))
            .collect();
        let dropped = self.p - keep.len();
        if dropped == 0 {
            return 0;
        }
        for r in 0..self.p {
            if keep.binary_search(&r).is_err() {
                self.trace
                    .steps
                    .push(TraceStep::DroppedColumn(self.col_map[r]));
            }
        }
        for set in &mut self.sets {
            for v in set.iter_mut() {
                *v = v.select(&keep);
            }
        }
        self.col_map = keep.iter().map(|&r| self.col_map[r]).collect();
        self.p = keep.len();
        dropped
    }

    /// Removes the first all-ones vector from every set, or names a set that has none.
    fn peel(&mut self) -> std::result::Result<(), usize> {
        let mut chosen = Vec::with_capacity(self.sets.len());
        for (i, set) in self.sets.iter().enumerate() {
            match set.iter().position(BitVec::is_all_ones) {
                Some(j) => chosen.push(j),
                None => return Err(i),
            }
        }
        let mut original = Vec::with_capacity(chosen.len());
        for (i, &j) in chosen.iter().enumerate() {
            self.sets[i].remove(j);
            original.push(self.vec_map[i].remove(j));
        }
        self.trace.steps.push(TraceStep::PeeledOneStack(original));
        Ok(())
    }

    fn no(self, reason: String) -> KernelResult {
        KernelResult {
            verdict: KernelVerdict::No { reason },
            reduced: None,
            trace: self.trace,
        }
    }

    fn reduced(self, k: u64) -> KernelResult {
        let instance = Instance::new(self.p, self.sets)
            .expect("reduction rules preserve uniform dimensions")
            .with_budget(Some(k));
        KernelResult {
            verdict: KernelVerdict::Reduced,
            reduced: Some(instance),
            trace: self.trace,
        }
    }

    fn check_columns(&self, k: u64) -> Option<String> {
        (self.p as u64 > k).then(|| {
            format!(
                "all-ones column rule: {} columns each hold a zero, so every solution costs at least {} > k = {k}",
                self.p, self.p
            )
        })
    }
}

fn peel_failure(set: usize, n: usize, k: u64) -> String {
    format!(
        "1-stack rule: set {} has no all-ones vector while n = {n} > k = {k}, so every solution costs at least {n}",
        set + 1
    )
}

/// Drops every all-ones column once.
pub fn drop_allones_columns(instance: &Instance, k: u64) -> KernelResult {
    let mut st = KernelState::new(instance);
    st.drop_columns();
    match st.check_columns(k) {
        Some(reason) => st.no(reason),
        None => st.reduced(k),
    }
}

/// Peels 1-stacks while `n > k`.
pub fn peel_one_stacks(instance: &Instance, k: u64) -> KernelResult {
    let mut st = KernelState::new(instance);
    while st.n() as u64 > k {
        if let Err(set) = st.peel() {
            let n = st.n();
            return st.no(peel_failure(set, n, k));
        }
    }
    st.reduced(k)
}

/// Applies both rules to a fixpoint. On `Reduced`, the output has `n <= k`
/// and `p <= k`.
pub fn kernelize(instance: &Instance, k: u64) -> KernelResult {
    let mut st = KernelState::new(instance);
    loop {
        st.drop_columns();
        if let Some(reason) = st.check_columns(k) {
            return st.no(reason);
        }
        if st.n() as u64 <= k {
            return st.reduced(k);
        }
        if let Err(set) = st.peel() {
            let n = st.n();
            return st.no(peel_failure(set, n, k));
        }
    }
}

/// Maps a solution of the reduced instance back to `original`, appending the
/// peeled stacks. The lifted cost equals the reduced cost.
pub fn lift_solution(
    original: &Instance,
    trace: &Trace,
    reduced_solution: &CostedSolution,
) -> Result<CostedSolution> {
    let (m, n, p) = (original.m(), original.n(), original.p());

    let mut dropped = vec![false; p];
    for r in trace.dropped_columns() {
        if r >= p || std::mem::replace(&mut dropped[r], true) {
            return Err(Error::Integrity(format!("dropped column {} is invalid", r + 1)));
        }
        if original.sets().iter().flatten().any(|v| !v.get(r)) {
            return Err(Error::Integrity(format!(
                "dropped column {} is not all-ones in the original instance",
                r + 1
            )));
        }
    }

    let mut removed = vec![vec![false; n]; m];
    let peels: Vec<&[usize]> = trace.peels().collect();
    for peel in &peels {
        if peel.len() != m {
            return Err(Error::Integrity(format!(
                "peel step lists {} vectors for {m} sets",
                peel.len()
            )));
        }
        for (i, &j) in peel.iter().enumerate() {
            if j >= n || std::mem::replace(&mut removed[i][j], true) {
                return Err(Error::Integrity(format!(
                    "peeled vector {} of set {} is invalid",
                    j + 1,
                    i + 1
                )));
            }
            if !original.vector(i, j).is_all_ones() {
                return Err(Error::Integrity(format!(
                    "peeled vector {} of set {} is not an all-ones vector",
                    j + 1,
                    i + 1
                )));
            }
        }
    }

    let vec_map: Vec<Vec<usize>> = removed
        .iter()
        .map(|r| (0..n).filter(|&j| !r[j]).collect())
        .collect();
    let reduced_n = n - peels.len();
    let reduced_p = p - dropped.iter().filter(|&&d| d).count();
    let a = &reduced_solution.assignment;
    if a.m() != m || a.n() != reduced_n {
        return Err(Error::Integrity(format!(
            "reduced solution has {} sets and {} stacks, trace implies {m} and {reduced_n}",
            a.m(),
            a.n()
        )));
    }
    if let Some(v) = reduced_solution.stack_vectors.first() {
        if v.len() != reduced_p {
            return Err(Error::Integrity(format!(
                "reduced solution has dimension {}, trace implies {reduced_p}",
                v.len()
            )));
        }
    }

    let perms: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            a.perms()[i]
                .iter()
                .map(|&j| vec_map[i][j])
                .chain(peels.iter().map(|peel| peel[i]))
                .collect()
        })
        .collect();
    let lifted = Assignment::new(perms)?.canonical();
    let solution = evaluate(original, &lifted)?;
    if solution.total_cost != reduced_solution.total_cost {
        return Err(Error::Integrity(format!(
            "lifted cost {} differs from reduced cost {}",
            solution.total_cost, reduced_solution.total_cost
        )));
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solvers::brute_force;

    fn inst(sets: &[&[&str]]) -> Instance {
        Instance::from_strs(sets).unwrap()
    }

    #[test]
    fn drops_an_all_ones_column() {
        let i = inst(&[&["110", "011"], &["111", "010"]]);
        let res = drop_allones_columns(&i, 10);
        let red = res.reduced.unwrap();
        assert_eq!(red.p(), 2);
        assert_eq!(res.trace.steps, vec![TraceStep::DroppedColumn(1)]);
        assert_eq!(red.vector(0, 0).to_string(), "10");
        let opt = brute_force(&red, None).unwrap().best.unwrap();
        let lifted = lift_solution(&i, &res.trace, &opt).unwrap();
        assert_eq!(lifted.total_cost, opt.total_cost);
        assert!(lifted.stack_vectors.iter().all(|v| v.get(1)));
    }

    #[test]
    fn column_rule_detects_no() {
        let i = inst(&[&["101", "011"]]);
        let res = drop_allones_columns(&i, 1);
        assert!(res.is_no());
        assert_eq!(brute_force(&i, None).unwrap().best.unwrap().total_cost, 2);
    }

    #[test]
    fn fig1_has_no_all_ones_column() {
        let res = drop_allones_columns(&fixtures::fig1(), 17);
        assert!(res.trace.is_empty());
        assert_eq!(res.reduced.unwrap().p(), 6);
    }

    #[test]
    fn peels_one_stack() {
        let i = inst(&[&["111", "111", "101"], &["111", "110", "111"]]);
        let res = peel_one_stacks(&i, 2);
        let red = res.reduced.unwrap();
        assert_eq!(red.n(), 2);
        assert_eq!(res.trace.steps, vec![TraceStep::PeeledOneStack(vec![0, 0])]);
    }

    #[test]
    fn peel_rule_detects_no() {
        let i = inst(&[&["01", "10"]]);
        assert!(peel_one_stacks(&i, 1).is_no());
        assert_eq!(brute_force(&i, None).unwrap().best.unwrap().total_cost, 2);
    }

    #[test]
    fn fig2_is_not_peeled_at_k3() {
        let res = kernelize(&fixtures::fig2(), 3);
        assert!(res.trace.is_empty());
        assert_eq!(res.reduced.unwrap().sets(), fixtures::fig2().sets());
    }

    #[test]
    fn fixpoint_is_identity_when_nothing_fires() {
        let i = inst(&[&["01", "10"], &["10", "01"]]);
        let res = kernelize(&i, 3);
        assert!(res.trace.is_empty());
        assert_eq!(res.reduced.unwrap().sets(), i.sets());
    }

    #[test]
    fn all_ones_instance_reduces_to_empty_dimension() {
        let i = Instance::new(3, vec![vec![BitVec::ones(3); 5]; 2]).unwrap();
        let res = kernelize(&i, 2);
        let red = res.reduced.clone().unwrap();
        assert_eq!(red.p(), 0);
        assert!(red.n() <= 2);
        let opt = brute_force(&red, None).unwrap().best.unwrap();
        assert_eq!(opt.total_cost, 0);
        let lifted = lift_solution(&i, &res.trace, &opt).unwrap();
        assert_eq!(lifted.assignment.n(), 5);
        assert_eq!(lifted.total_cost, 0);
    }

    #[test]
    fn peels_twice_then_stops() {
        let i = inst(&[&["11", "11", "10", "01"]]);
        let res = kernelize(&i, 2);
        let red = res.reduced.clone().unwrap();
        assert_eq!(red.n(), 2);
        assert_eq!(
            red.set(0).iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            vec!["10", "01"]
        );
        let opt = brute_force(&red, None).unwrap().best.unwrap();
        assert_eq!(opt.total_cost, 2);
        let lifted = lift_solution(&i, &res.trace, &opt).unwrap();
        assert_eq!(lifted.assignment.n(), 4);
        assert_eq!(lifted.total_cost, 2);
    }

    #[test]
    fn empty_trace_lift_is_identity() {
        let i = fixtures::fig2();
        let opt = brute_force(&i, None).unwrap().best.unwrap();
        let lifted = lift_solution(&i, &Trace::default(), &opt).unwrap();
        assert_eq!(lifted, opt);
    }

    #[test]
    fn lift_rejects_inconsistent_traces() {
        let i = inst(&[&["110", "011"], &["111", "010"]]);
        let opt = brute_force(&i, None).unwrap().best.unwrap();
        let bad = Trace {
            steps: vec![TraceStep::DroppedColumn(0)],
        };
        assert!(matches!(lift_solution(&i, &bad, &opt), Err(Error::Integrity(_))));
        let bad = Trace {
            steps: vec![TraceStep::PeeledOneStack(vec![0, 0])],
        };
        assert!(matches!(lift_solution(&i, &bad, &opt), Err(Error::Integrity(_))));
        // dimension mismatch between trace and reduced solution
        let bad = Trace {
            steps: vec![TraceStep::DroppedColumn(1)],
        };
        assert!(matches!(lift_solution(&i, &bad, &opt), Err(Error::Integrity(_))));
    }

    #[test]
    fn trace_text_round_trip() {
        let t = Trace {
            steps: vec![
                TraceStep::DroppedColumn(2),
                TraceStep::PeeledOneStack(vec![0, 3, 1]),
            ],
        };
        let text = t.to_string();
        assert_eq!(text, "drop-column 3\npeel 1 4 2\n");
        assert_eq!(text.parse::<Trace>().unwrap(), t);
        assert!("peel".parse::<Trace>().is_err());
        assert!("drop-column 0".parse::<Trace>().is_err());
    }
}
