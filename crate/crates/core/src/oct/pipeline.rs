use crate::error::Result;
use crate::instance::{evaluate, Assignment, Instance};
use crate::solvers::{SolveOutcome, Stats, Verdict};

use super::{
    bip_oct_to_oct, normalize_n2, oct_minimum, placement_from_partition, require_two_vectors,
    to_bip_oct, BipOctInstance, OctGraph,
};

/// Intermediate objects of one run of the `n = 2` pipeline.
#[derive(Clone, Debug)]
pub struct TwoVectorRun {
    /// Original indices of dropped all-ones components.
    pub dropped_columns: Vec<usize>,
    /// Original indices of components zero in both vectors of some set.
    pub forced_columns: Vec<usize>,
    /// Dimension after both reductions.
    pub reduced_p: usize,
    pub bip_oct: Option<BipOctInstance>,
    pub graph: Option<OctGraph>,
    /// Size of a minimum transversal, when it fits the cap.
    pub transversal: Option<usize>,
    pub outcome: SolveOutcome,
}

/// Runs the whole chain: drop all-ones components, remove forced
/// components, read off bip-OCT, augment to OCT, solve, and map the
/// transversal back to two stacks.
///
/// The bMVA cost of the mapped solution is `p' + |X| + 2·forced`, so with a
/// budget the transversal is capped at `min(k' − p', p')`; without one at
/// `p'`, which always suffices.
pub fn pipeline_2bmva(instance: &Instance, k: Option<u64>) -> Result<TwoVectorRun> {
    require_two_vectors(instance)?;
    let (dropped_columns, kept_after_drop): (Vec<usize>, Vec<usize>) = (0..instance.p())
        .partition(|&r| instance.sets().iter().flatten().all(|v| v.get(r)));
    let sets = instance
        .sets()
        .iter()
        .map(|set| set.iter().map(|v| v.select(&kept_after_drop)).collect())
        .collect();
    let trimmed = Instance::new(kept_after_drop.len(), sets)?;
    let norm = normalize_n2(&trimmed, k.map_or(0, |k| k as i64))?;
    let forced_columns: Vec<usize> = norm.forced_columns.iter().map(|&r| kept_after_drop[r]).collect();
    let reduced = norm.instance;
    let p_red = reduced.p();
    let offset = p_red as u64 + 2 * forced_columns.len() as u64;

    let mut run = TwoVectorRun {
        dropped_columns,
        forced_columns,
        reduced_p: p_red,
        bip_oct: None,
        graph: None,
        transversal: None,
        outcome: SolveOutcome {
            solver: "oct",
            budget: k,
            verdict: Verdict::No,
            best: None,
            optimum: None,
            stats: Stats::default(),
        },
    };

    let cap = match k {
        Some(k) => {
            let slack = k as i64 - offset as i64;
            if slack < 0 {
                return Ok(run);
            }
            (slack as usize).min(p_red)
        }
        None => p_red,
    };
    let bi = to_bip_oct(&reduced, cap)?;
    let graph = bip_oct_to_oct(&bi);
    let (part, oct_stats) = oct_minimum(&graph, cap);
    run.outcome.stats = Stats {
        nodes_expanded: oct_stats.guesses,
        matchings_computed: oct_stats.flow_runs,
        max_depth: oct_stats.compressions,
    };
    run.bip_oct = Some(bi.clone());
    run.graph = Some(graph.clone());
    let Some(part) = part else {
        return Ok(run);
    };
    let ground = graph.restrict_to_ground(&part, bi.ground);
    debug_assert!(bi.is_feasible(&ground));
    run.transversal = Some(ground.x.len());

    let perms = placement_from_partition(&bi, &ground)
        .into_iter()
        .map(|first| if first == 0 { vec![0, 1] } else { vec![1, 0] })
        .collect();
    let assignment = Assignment::new(perms)?.canonical();
    let best = evaluate(instance, &assignment)?;
    debug_assert_eq!(best.total_cost, offset + ground.x.len() as u64);
    let stats = run.outcome.stats;
    run.outcome = SolveOutcome::from_optimum("oct", k, best, stats);
    Ok(run)
}

/// Exact solver for `n = 2`.
pub fn solve_2bmva(instance: &Instance, k: Option<u64>) -> Result<SolveOutcome> {
    pipeline_2bmva(instance, k).map(|run| run.outcome)
}
