use std::fmt::Write as _;
use std::time::Duration;

use bmva::solvers::{SolveOutcome, Stats};
use bmva::{derive_params, CostedSolution, Instance};

/// Text report. Everything above the wall-time line depends only on the
/// inputs and flags.
#[derive(Default)]
pub struct Report {
    body: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.line(format_args!("command: {command}"));
        r
    }

    pub fn line(&mut self, args: std::fmt::Arguments<'_>) {
        writeln!(self.body, "{args}").unwrap();
    }

    pub fn instance(&mut self, label: &str, inst: &Instance, k: Option<u64>) {
        let params = derive_params(inst, k.unwrap_or(0));
        let (k_text, zb, zp) = match k {
            Some(k) => (k.to_string(), params.zeta_b.to_string(), params.zeta_p.to_string()),
            None => ("-".into(), "-".into(), "-".into()),
        };
        self.line(format_args!(
            "{label}: m={} n={} p={} k={k_text} B={} zeta_B={zb} zeta_p={zp}",
            inst.m(),
            inst.n(),
            inst.p(),
            params.b
        ));
    }

    pub fn stats(&mut self, label: &str, stats: &Stats) {
        self.line(format_args!(
            "{label}: nodes={} matchings={} max_depth={}",
            stats.nodes_expanded, stats.matchings_computed, stats.max_depth
        ));
    }

    pub fn outcome(&mut self, out: &SolveOutcome, emit_solution: bool) {
        self.line(format_args!("solver: {}", out.solver));
        self.line(format_args!("verdict: {}", out.verdict));
        match (&out.best, out.optimum) {
            (Some(best), Some(opt)) if out.budget.is_none() || best.total_cost == opt => {
                self.line(format_args!("cost: {} (optimal)", best.total_cost))
            }
            (Some(best), _) => self.line(format_args!("cost: {}", best.total_cost)),
            (None, Some(opt)) => self.line(format_args!("cost: - (optimum {opt})")),
            (None, None) => self.line(format_args!("cost: -")),
        }
        if emit_solution {
            if let Some(best) = &out.best {
                self.solution(best);
            }
        }
        self.stats("stats", &out.stats);
    }

    /// One line per stack: 1-based vector index taken from each set.
    pub fn solution(&mut self, sol: &CostedSolution) {
        let costs = sol.stack_costs();
        for (s, cost) in costs.iter().enumerate() {
            let picks: Vec<String> = sol
                .assignment
                .stack(s)
                .iter()
                .map(|j| (j + 1).to_string())
                .collect();
            self.line(format_args!(
                "stack {}: {}  value={} cost={cost}",
                s + 1,
                picks.join(" "),
                sol.stack_vectors[s]
            ));
        }
    }

    pub fn finish(mut self, elapsed: Duration) -> String {
        self.line(format_args!("wall_time_us: {}", elapsed.as_micros()));
        self.body
    }
}
