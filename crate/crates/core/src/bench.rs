//! Random-instance benchmark harness.
//!
//! A profile is a TOML file:
//!
//! ```toml
//! seed = 7
//! runs = 50
//! m = [2, 3]              # inclusive ranges, sampled uniformly
//! n = [2, 4]
//! p = [3, 6]
//! zero_density = [0.1, 0.5]
//! zeta_b = [0, 2]         # budget k = B + zeta_b
//! solvers = ["brute", "fpt-zb"]
//! ```
//!
//! Run `r` draws its instance from a ChaCha8 stream keyed by `(seed, r)`, so
//! the rows do not depend on how runs are scheduled across threads.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::instance::{derive_params, Instance};
use crate::solvers::{solve, Strategy};

pub const CSV_VERSION: &str = "# bmva-bench v1";
pub const CSV_COLUMNS: &str = "run,solver,m,n,p,k,B,zeta_B,verdict,nodes,matchings,micros";

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    #[serde(default)]
    pub seed: u64,
    pub runs: usize,
    pub m: [usize; 2],
    pub n: [usize; 2],
    pub p: [usize; 2],
    pub zero_density: [f64; 2],
    #[serde(default)]
    pub zeta_b: [u64; 2],
    pub solvers: Vec<String>,
}

impl Profile {
    pub fn parse(text: &str) -> Result<Self> {
        let profile: Profile = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(1, |s| text[..s.start].lines().count().max(1)),
            message: e.message().to_string(),
        })?;
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let ranges = [("m", self.m), ("n", self.n), ("p", self.p)];
        for (name, [lo, hi]) in ranges {
            if lo > hi {
                return Err(Error::Validation(format!("range {name} = [{lo}, {hi}] is empty")));
            }
        }
        if self.m[0] == 0 {
            return Err(Error::Validation("m must be at least 1".into()));
        }
        let [dlo, dhi] = self.zero_density;
        if !(0.0..=1.0).contains(&dlo) || !(0.0..=1.0).contains(&dhi) || dlo > dhi {
            return Err(Error::Validation(format!("zero_density = [{dlo}, {dhi}] is not a range in [0, 1]")));
        }
        if self.zeta_b[0] > self.zeta_b[1] {
            return Err(Error::Validation("range zeta_b is empty".into()));
        }
        for s in &self.solvers {
            s.parse::<Strategy>()?;
        }
        Ok(())
    }

    fn strategies(&self) -> Vec<Strategy> {
        self.solvers
            .iter()
            .map(|s| s.parse().expect("validated on load"))
            .collect()
    }
}

/// Instance with independent zeros, each component zero with probability
/// `density`.
pub fn random_instance<R: Rng>(rng: &mut R, m: usize, n: usize, p: usize, density: f64) -> Instance {
    let sets = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| BitVec::from_bools((0..p).map(|_| !rng.gen_bool(density))))
                .collect()
        })
        .collect();
    Instance::new(p, sets).expect("uniform shape by construction")
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub run: usize,
    pub solver: String,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub k: u64,
    pub b: u64,
    pub zeta_b: i64,
    /// `YES`, `NO`, or `SKIP` when the solver does not apply or refuses.
    pub verdict: String,
    pub nodes: u64,
    pub matchings: u64,
    pub micros: u128,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.run,
            self.solver,
            self.m,
            self.n,
            self.p,
            self.k,
            self.b,
            self.zeta_b,
            self.verdict,
            self.nodes,
            self.matchings,
            self.micros
        )
    }
}

fn draw(rng: &mut ChaCha8Rng, [lo, hi]: [usize; 2]) -> usize {
    rng.gen_range(lo..=hi)
}

/// Instance and budget of run `run`.
pub fn run_instance(profile: &Profile, run: usize) -> (Instance, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    rng.set_stream(run as u64);
    let (m, n, p) = (draw(&mut rng, profile.m), draw(&mut rng, profile.n), draw(&mut rng, profile.p));
    let [dlo, dhi] = profile.zero_density;
    let density = if dlo < dhi { rng.gen_range(dlo..=dhi) } else { dlo };
    let inst = random_instance(&mut rng, m, n, p, density);
    let zeta = rng.gen_range(profile.zeta_b[0]..=profile.zeta_b[1]);
    let k = derive_params(&inst, 0).b + zeta;
    (inst, k)
}

fn run_one(profile: &Profile, strategies: &[Strategy], run: usize) -> Vec<BenchRow> {
    let (inst, k) = run_instance(profile, run);
    let params = derive_params(&inst, k);
    strategies
        .iter()
        .map(|&strategy| {
            let start = Instant::now();
            let out = solve(&inst, Some(k), strategy);
            let micros = start.elapsed().as_micros();
            let (verdict, nodes, matchings) = match &out {
                Ok(o) => (o.verdict.to_string(), o.stats.nodes_expanded, o.stats.matchings_computed),
                Err(_) => ("SKIP".to_string(), 0, 0),
            };
            BenchRow {
                run,
                solver: strategy.name().to_string(),
                m: inst.m(),
                n: inst.n(),
                p: inst.p(),
                k,
                b: params.b,
                zeta_b: params.zeta_b,
                verdict,
                nodes,
                matchings,
                micros,
            }
        })
        .collect()
}

/// All rows, ordered by run index and then by the profile's solver order.
pub fn run_profile(profile: &Profile) -> Vec<BenchRow> {
    let strategies = profile.strategies();
    let mut rows: Vec<(usize, Vec<BenchRow>)> = (0..profile.runs)
        .into_par_iter()
        .map(|run| (run, run_one(profile, &strategies, run)))
        .collect();
    rows.sort_by_key(|(run, _)| *run);
    rows.into_iter().flat_map(|(_, r)| r).collect()
}

pub fn to_csv(profile: &Profile, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_VERSION} seed={}", profile.seed).unwrap();
    writeln!(out, "{CSV_COLUMNS}").unwrap();
    for row in rows {
        writeln!(out, "{}", row.to_csv()).unwrap();
    }
    out
}
