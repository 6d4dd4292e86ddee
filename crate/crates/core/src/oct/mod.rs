//! Two vectors per set: reduction to odd cycle transversal.
//!
//! An `n = 2` instance becomes a bip-OCT instance over its components, with
//! one pair `(A_i, B_i)` of zero positions per set. Each pair is then turned
//! into a complete bipartite graph augmented with `c + 1` fresh vertices per
//! side, so that an odd cycle transversal of size `c` cannot split an `A_i`
//! or a `B_i` across the two colour classes.

mod pipeline;
mod solver;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

pub use pipeline::{pipeline_2bmva, solve_2bmva, TwoVectorRun};
pub use solver::{bipartition, oct_brute_force, oct_minimum, oct_solve, OctStats};

use crate::error::{parse_err, Error, Result};
use crate::format::{content_lines, parse_numbers};
use crate::instance::Instance;

/// Ground set `0..ground` with `m` disjoint pairs and a deletion budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipOctInstance {
    pub ground: usize,
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
    pub budget: usize,
}

/// A partition `(X, S1, S2)`, each part sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub x: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

impl Partition {
    /// Part of each vertex: 0 for `X`, 1 for `S1`, 2 for `S2`.
    pub fn parts(&self, n: usize) -> Vec<u8> {
        let mut out = vec![u8::MAX; n];
        for &v in &self.x {
            out[v] = 0;
        }
        for &v in &self.s1 {
            out[v] = 1;
        }
        for &v in &self.s2 {
            out[v] = 2;
        }
        out
    }

    pub fn from_parts(parts: &[u8]) -> Self {
        let mut p = Partition::default();
        for (v, &part) in parts.iter().enumerate() {
            match part {
                0 => p.x.push(v),
                1 => p.s1.push(v),
                _ => p.s2.push(v),
            }
        }
        p
    }

    fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        let all = self.x.iter().chain(&self.s1).chain(&self.s2);
        let mut count = 0;
        for &v in all {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
            count += 1;
        }
        count == n
    }
}

impl BipOctInstance {
    pub fn new(ground: usize, pairs: Vec<(Vec<usize>, Vec<usize>)>, budget: usize) -> Result<Self> {
        for (i, (a, b)) in pairs.iter().enumerate() {
            let a_set: BTreeSet<_> = a.iter().collect();
            if let Some(v) = a.iter().chain(b).find(|&&v| v >= ground) {
                return Err(Error::Contract(format!(
                    "pair {} uses vertex {} outside the ground set of size {ground}",
                    i + 1,
                    v + 1
                )));
            }
            if b.iter().any(|v| a_set.contains(v)) {
                return Err(Error::Contract(format!("pair {} has A and B intersecting", i + 1)));
            }
        }
        Ok(BipOctInstance {
            ground,
            pairs,
            budget,
        })
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        BipOctInstance {
            budget,
            ..self.clone()
        }
    }

    /// Every pair lies on opposite sides once `X` is removed.
    pub fn is_feasible(&self, sol: &Partition) -> bool {
        if !sol.covers(self.ground) {
            return false;
        }
        let parts = sol.parts(self.ground);
        self.pairs.iter().all(|(a, b)| {
            let side = |vs: &[usize], want: u8| vs.iter().all(|&v| parts[v] == 0 || parts[v] == want);
            (side(a, 1) && side(b, 2)) || (side(a, 2) && side(b, 1))
        })
    }

    pub fn is_solution(&self, sol: &Partition) -> bool {
        sol.x.len() <= self.budget && self.is_feasible(sol)
    }
}

/// Header `ground m c`, then one pair per line: `a ... | b ...`, 1-based.
impl fmt::Display for BipOctInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.ground, self.pairs.len(), self.budget)?;
        for (a, b) in &self.pairs {
            let mut line = String::new();
            for v in a {
                write!(line, "{} ", v + 1)?;
            }
            line.push('|');
            for v in b {
                write!(line, " {}", v + 1)?;
            }
            writeln!(f, "{}", line.trim())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BipOctInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = content_lines(s);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h = parse_numbers(hl, header, "header")?;
        if h.len() != 3 {
            return Err(parse_err(hl, "header must be \"ground m c\""));
        }
        let mut pairs = Vec::new();
        for (ln, line) in lines {
            let (a, b) = line
                .split_once('|')
                .ok_or_else(|| parse_err(ln, "pair line needs a '|' separator"))?;
            let side = |text: &str| -> Result<Vec<usize>> {
                parse_numbers(ln, text, "pair")?
                    .into_iter()
                    .map(|v| {
                        v.checked_sub(1)
                            .map(|v| v as usize)
                            .ok_or_else(|| parse_err(ln, "vertices are 1-based"))
                    })
                    .collect()
            };
            pairs.push((side(a)?, side(b)?));
        }
        if pairs.len() != h[1] as usize {
            return Err(parse_err(hl, format!("header declares {} pairs, found {}", h[1], pairs.len())));
        }
        BipOctInstance::new(h[0] as usize, pairs, h[2] as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexLabel {
    Ground(usize),
    Augment { pair: usize, side: Side, ordinal: usize },
}

/// Simple undirected graph with a deletion budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    pub budget: usize,
    labels: Vec<VertexLabel>,
}

impl OctGraph {
    /// Deduplicates edges; self-loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, budget: usize) -> Result<Self> {
        let labels = (0..n).map(VertexLabel::Ground).collect();
        Self::with_labels(n, edges, budget, labels)
    }

    fn with_labels(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        budget: usize,
        labels: Vec<VertexLabel>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Contract(format!("self-loop at vertex {}", u + 1)));
            }
            if u >= n || v >= n {
                return Err(Error::Contract(format!("edge {{{}, {}}} out of range", u + 1, v + 1)));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(OctGraph {
            n,
            edges: set.into_iter().collect(),
            budget,
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        OctGraph {
            budget,
            ..self.clone()
        }
    }

    /// No edge inside `S1` or `S2`, and `|X| <= budget`.
    pub fn is_solution(&self, sol: &Partition) -> bool {
        if !sol.covers(self.n) || sol.x.len() > self.budget {
            return false;
        }
        let parts = sol.parts(self.n);
        self.edges
            .iter()
            .all(|&(u, v)| parts[u] == 0 || parts[v] == 0 || parts[u] != parts[v])
    }

    /// Keeps only ground vertices, renumbered by their ground index.
    pub fn restrict_to_ground(&self, sol: &Partition, ground: usize) -> Partition {
        let parts = sol.parts(self.n);
        let mut out = vec![0u8; ground];
        for (v, label) in self.labels.iter().enumerate() {
            if let VertexLabel::Ground(r) = label {
                out[*r] = parts[v];
            }
        }
        Partition::from_parts(&out)
    }
}

/// Header `vertices edges c`, then `u v` per edge, 1-based. Augmentation
/// vertices are listed in comment lines.
impl fmt::Display for OctGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.edges.len(), self.budget)?;
        for (v, label) in self.labels.iter().enumerate() {
            if let VertexLabel::Augment { pair, side, ordinal } = label {
                writeln!(f, "# vertex {} = pair {} side {side:?} copy {}", v + 1, pair + 1, ordinal + 1)?;
            }
        }
        for &(u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for OctGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = content_lines(s);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h = parse_numbers(hl, header, "header")?;
        if h.len() != 3 {
            return Err(parse_err(hl, "header must be \"vertices edges c\""));
        }
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let e = parse_numbers(ln, line, "edge")?;
            if e.len() != 2 || e.contains(&0) {
                return Err(parse_err(ln, "edge line must be two 1-based vertices"));
            }
            edges.push((e[0] as usize - 1, e[1] as usize - 1));
        }
        if edges.len() != h[1] as usize {
            return Err(parse_err(hl, format!("header declares {} edges, found {}", h[1], edges.len())));
        }
        OctGraph::new(h[0] as usize, edges, h[2] as usize)
    }
}

/// Result of removing components where some set has both vectors zero.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub instance: Instance,
    /// `k − 2·forced`; negative means no solution within the budget.
    pub k: i64,
    /// Original 0-based indices of removed components.
    pub forced_columns: Vec<usize>,
    /// Original index of each remaining component.
    pub kept_columns: Vec<usize>,
}

impl Normalized {
    pub fn is_trivially_no(&self) -> bool {
        self.k < 0
    }
}

pub(crate) fn require_two_vectors(instance: &Instance) -> Result<()> {
    if instance.n() != 2 {
        return Err(Error::Arity {
            expected: "n = 2".into(),
            found: format!("n = {}", instance.n()),
        });
    }
    Ok(())
}

/// Removes every component that is zero in both vectors of some set. Each
/// such component is zero in both stacks of every solution, costing 2.
pub fn normalize_n2(instance: &Instance, k: i64) -> Result<Normalized> {
    require_two_vectors(instance)?;
    let forced = |r: usize| {
        instance
            .sets()
            .iter()
            .any(|set| !set[0].get(r) && !set[1].get(r))
    };
    let (forced_columns, kept_columns): (Vec<usize>, Vec<usize>) =
        (0..instance.p()).partition(|&r| forced(r));
    let sets = instance
        .sets()
        .iter()
        .map(|set| set.iter().map(|v| v.select(&kept_columns)).collect())
        .collect();
    let reduced = Instance::new(kept_columns.len(), sets)?;
    Ok(Normalized {
        instance: reduced,
        k: k - 2 * forced_columns.len() as i64,
        forced_columns,
        kept_columns,
    })
}

/// `A_i` and `B_i` are the zero positions of the two vectors of set `i`.
///
/// Requires a normalized instance without all-ones components.
pub fn to_bip_oct(instance: &Instance, budget: usize) -> Result<BipOctInstance> {
    require_two_vectors(instance)?;
    let p = instance.p();
    let mut covered = vec![false; p];
    let mut pairs = Vec::with_capacity(instance.m());
    for (i, set) in instance.sets().iter().enumerate() {
        let a: Vec<usize> = set[0].zero_positions().collect();
        let b: Vec<usize> = set[1].zero_positions().collect();
        if let Some(r) = a.iter().find(|r| b.contains(r)) {
            return Err(Error::Contract(format!(
                "set {} has both vectors zero at component {}; normalize first",
                i + 1,
                r + 1
            )));
        }
        for &r in a.iter().chain(&b) {
            covered[r] = true;
        }
        pairs.push((a, b));
    }
    if let Some(r) = covered.iter().position(|c| !c) {
        return Err(Error::Contract(format!(
            "component {} is all-ones; drop all-ones columns first",
            r + 1
        )));
    }
    BipOctInstance::new(p, pairs, budget)
}

/// Complete bipartite graph per pair, each side padded with `c + 1` fresh
/// vertices. Fresh vertices follow the ground vertices: pair `i` contributes
/// its `A'` copies, then its `B'` copies.
pub fn bip_oct_to_oct(bi: &BipOctInstance) -> OctGraph {
    let extra = bi.budget + 1;
    let mut labels: Vec<VertexLabel> = (0..bi.ground).map(VertexLabel::Ground).collect();
    let mut edges = Vec::new();
    for (i, (a, b)) in bi.pairs.iter().enumerate() {
        let mut left = a.clone();
        let mut right = b.clone();
        for (side, list) in [(Side::A, &mut left), (Side::B, &mut right)] {
            for ordinal in 0..extra {
                list.push(labels.len());
                labels.push(VertexLabel::Augment { pair: i, side, ordinal });
            }
        }
        for &u in &left {
            for &v in &right {
                edges.push((u, v));
            }
        }
    }
    OctGraph::with_labels(labels.len(), edges, bi.budget, labels)
        .expect("pairs are disjoint so the graph is simple")
}

/// The unaugmented graph: one complete bipartite graph per pair on the
/// ground set. Not equivalent to bip-OCT in general.
pub fn naive_oct_graph(bi: &BipOctInstance) -> OctGraph {
    let edges = bi
        .pairs
        .iter()
        .flat_map(|(a, b)| a.iter().flat_map(move |&u| b.iter().map(move |&v| (u, v))));
    OctGraph::new(bi.ground, edges, bi.budget).expect("pairs are disjoint so the graph is simple")
}

/// Exhaustive minimum over all `3^ground` partitions.
pub fn bip_oct_brute_force(bi: &BipOctInstance) -> Option<Partition> {
    let g = bi.ground;
    let total = 3usize.checked_pow(g as u32).expect("ground set too large for enumeration");
    let mut best: Option<Partition> = None;
    let mut parts = vec![0u8; g];
    for code in 0..total {
        let mut c = code;
        for slot in parts.iter_mut() {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        let x = parts.iter().filter(|&&p| p == 0).count();
        if x > bi.budget || best.as_ref().is_some_and(|b| b.x.len() <= x) {
            continue;
        }
        let cand = Partition::from_parts(&parts);
        if bi.is_feasible(&cand) {
            best = Some(cand);
        }
    }
    best
}

/// Builds the two stacks of an `n = 2` instance from a feasible bip-OCT
/// partition: set `i` sends its first vector to the stack on the side of
/// `A_i`. Returns the stack of each set's first vector.
pub(crate) fn placement_from_partition(bi: &BipOctInstance, sol: &Partition) -> Vec<usize> {
    let parts = sol.parts(bi.ground);
    bi.pairs
        .iter()
        .map(|(a, b)| {
            let fits = a.iter().all(|&v| parts[v] != 2) && b.iter().all(|&v| parts[v] != 1);
            if fits {
                0
            } else {
                1
            }
        })
        .collect()
}
