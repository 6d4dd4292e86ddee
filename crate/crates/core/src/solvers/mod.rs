//! Exact solvers and strategy dispatch.

mod assignment;
mod brute;
mod dp;
mod fpt;
mod matching;

use std::fmt;
use std::str::FromStr;

pub use assignment::{hungarian, solve_m2, HungarianResult};
pub use brute::{
    branch_and_bound, brute_force, brute_force_with_cap, enumeration_size, CanonicalAssignments,
    DEFAULT_ENUMERATION_CAP,
};
pub use dp::{layered_dp, layered_dp_with_cap, DEFAULT_STATE_CAP};
pub use fpt::{optimize_fpt_zeta_b, solve_fpt_zeta_b};
pub use matching::{perfect_matching, zero_free_matching};

use crate::error::{Error, Result};
use crate::instance::{evaluate, Assignment, CostedSolution, Instance};
use crate::preprocess::{kernelize, lift_solution, KernelVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes_expanded: u64,
    pub matchings_computed: u64,
    pub max_depth: u64,
}

impl Stats {
    pub fn merge(&mut self, other: &Stats) {
        self.nodes_expanded += other.nodes_expanded;
        self.matchings_computed += other.matchings_computed;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub solver: &'static str,
    /// `None` asks for an optimum; the verdict is then always YES.
    pub budget: Option<u64>,
    pub verdict: Verdict,
    /// Present on YES, validated against the input instance with cost `<= budget`.
    pub best: Option<CostedSolution>,
    /// Exact optimum when the solver determined it.
    pub optimum: Option<u64>,
    pub stats: Stats,
}

impl SolveOutcome {
    pub(crate) fn from_optimum(
        solver: &'static str,
        budget: Option<u64>,
        optimal: CostedSolution,
        stats: Stats,
    ) -> Self {
        let opt = optimal.total_cost;
        let yes = budget.is_none_or(|k| opt <= k);
        SolveOutcome {
            solver,
            budget,
            verdict: if yes { Verdict::Yes } else { Verdict::No },
            best: yes.then_some(optimal),
            optimum: Some(opt),
            stats,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Auto,
    Brute,
    BranchAndBound,
    LayeredDp,
    FptZetaB,
    M2,
    Oct,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Brute => "brute",
            Strategy::BranchAndBound => "bnb",
            Strategy::LayeredDp => "dp",
            Strategy::FptZetaB => "fpt-zb",
            Strategy::M2 => "m2",
            Strategy::Oct => "oct",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "brute" => Strategy::Brute,
            "bnb" => Strategy::BranchAndBound,
            "dp" => Strategy::LayeredDp,
            "fpt-zb" => Strategy::FptZetaB,
            "m2" => Strategy::M2,
            "oct" => Strategy::Oct,
            other => {
                return Err(Error::Dispatch {
                    strategy: other.to_string(),
                    reason: "unknown strategy (expected auto, brute, bnb, dp, fpt-zb, m2 or oct)".into(),
                })
            }
        })
    }
}

/// Single assignment: `m = 1` leaves no freedom and `n <= 1` allows only one stack.
fn solve_direct(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    let sol = evaluate(instance, &Assignment::identity(instance.m(), instance.n()))?;
    let stats = Stats {
        nodes_expanded: 1,
        ..Stats::default()
    };
    Ok(SolveOutcome::from_optimum("direct", k, sol, stats))
}

fn solve_kernel_fpt(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    let Some(k) = k else {
        return Ok(optimize_fpt_zeta_b(instance));
    };
    let kernel = kernelize(instance, k);
    match kernel.verdict {
        KernelVerdict::No { .. } => Ok(SolveOutcome {
            solver: "kernel+fpt-zb",
            budget: Some(k),
            verdict: Verdict::No,
            best: None,
            optimum: None,
            stats: Stats::default(),
        }),
        KernelVerdict::Reduced => {
            let reduced = kernel.reduced.as_ref().expect("reduced instance present");
            let mut out = solve_fpt_zeta_b(reduced, k);
            out.solver = "kernel+fpt-zb";
            if let Some(best) = out.best.take() {
                out.best = Some(lift_solution(instance, &kernel.trace, &best)?);
            }
            Ok(out)
        }
    }
}

/// Runs the requested strategy. `Auto` picks the direct evaluation for
/// `m = 1` or `n <= 1`, the assignment solver for `m = 2`, the odd cycle
/// transversal pipeline for `n = 2`, and kernelization followed by the
/// ζ_B branching otherwise.
pub fn solve(instance: &Instance, k: Option<u64>, strategy: Strategy) -> Result<SolveOutcome> {
    match strategy {
        Strategy::Auto => {
            if instance.m() == 1 || instance.n() <= 1 {
                solve_direct(instance, k)
            } else if instance.m() == 2 {
                solve_m2(instance, k)
            } else if instance.n() == 2 {
                crate::oct::solve_2bmva(instance, k)
            } else {
                solve_kernel_fpt(instance, k)
            }
        }
        Strategy::Brute => brute_force(instance, k),
        Strategy::BranchAndBound => branch_and_bound(instance, k),
        Strategy::LayeredDp => layered_dp(instance, k),
        Strategy::FptZetaB => Ok(match k {
            Some(k) => solve_fpt_zeta_b(instance, k),
            None => optimize_fpt_zeta_b(instance),
        }),
        Strategy::M2 => {
            if instance.m() != 2 {
                return Err(Error::Dispatch {
                    strategy: strategy.to_string(),
                    reason: format!("needs m = 2, instance has m = {}", instance.m()),
                });
            }
            solve_m2(instance, k)
        }
        Strategy::Oct => {
            if instance.n() != 2 {
                return Err(Error::Dispatch {
                    strategy: strategy.to_string(),
                    reason: format!("needs n = 2, instance has n = {}", instance.n()),
                });
            }
            crate::oct::solve_2bmva(instance, k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::Auto,
            Strategy::Brute,
            Strategy::BranchAndBound,
            Strategy::LayeredDp,
            Strategy::FptZetaB,
            Strategy::M2,
            Strategy::Oct,
        ] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("greedy".parse::<Strategy>().is_err());
    }

    #[test]
    fn inapplicable_strategies_are_refused() {
        let fig1 = fixtures::fig1();
        assert!(matches!(
            solve(&fig1, Some(17), Strategy::M2),
            Err(Error::Dispatch { .. })
        ));
        assert!(matches!(
            solve(&fig1, Some(17), Strategy::Oct),
            Err(Error::Dispatch { .. })
        ));
    }

    #[test]
    fn auto_matches_brute_force_on_fixtures() {
        for inst in [fixtures::fig1(), fixtures::fig2()] {
            let opt = brute_force(&inst, None).unwrap().optimum.unwrap();
            for k in opt.saturating_sub(2)..=opt + 2 {
                let out = solve(&inst, Some(k), Strategy::Auto).unwrap();
                assert_eq!(out.is_yes(), opt <= k, "k = {k}");
                if let Some(best) = &out.best {
                    assert!(best.total_cost <= k);
                    assert_eq!(evaluate(&inst, &best.assignment).unwrap(), *best);
                }
            }
            let out = solve(&inst, None, Strategy::Auto).unwrap();
            assert_eq!(out.best.unwrap().total_cost, opt);
        }
    }

    #[test]
    fn direct_strategy_for_single_set() {
        let inst = Instance::from_strs(&[&["0110", "1011"]]).unwrap();
        let out = solve(&inst, Some(2), Strategy::Auto).unwrap();
        assert_eq!(out.solver, "direct");
        assert_eq!(out.optimum, Some(3));
        assert!(!out.is_yes());
    }
}
