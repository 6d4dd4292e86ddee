//! Odd cycle transversal by iterative compression.
//!
//! Vertices are added one at a time while a minimum transversal `X` of the
//! induced prefix is maintained. When the new vertex `v` breaks
//! bipartiteness, `Y = X ∪ {v}` is a transversal one too large, and the
//! compression step looks for one of size `|Y| − 1`: it guesses, for each
//! vertex of `Y`, whether it stays deleted or joins colour class 0 or 1, and
//! repairs the rest with a minimum vertex cut in `G − Y` between vertices
//! that must keep their colour and vertices that must flip it.

use std::collections::VecDeque;

use super::{OctGraph, Partition};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OctStats {
    pub compressions: u64,
    pub guesses: u64,
    pub flow_runs: u64,
}

/// Proper 2-colouring of the vertices with `keep[v]`, if one exists.
/// Other vertices get colour 0.
pub fn bipartition(adj: &[Vec<usize>], keep: &[bool]) -> Option<Vec<u8>> {
    let n = adj.len();
    let mut colour = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !keep[start] || colour[start] != u8::MAX {
            continue;
        }
        colour[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !keep[w] {
                    continue;
                }
                if colour[w] == u8::MAX {
                    colour[w] = 1 - colour[u];
                    queue.push_back(w);
                } else if colour[w] == colour[u] {
                    return None;
                }
            }
        }
    }
    for c in colour.iter_mut() {
        if *c == u8::MAX {
            *c = 0;
        }
    }
    Some(colour)
}

fn partition_from(adj: &[Vec<usize>], deleted: &[bool]) -> Option<Partition> {
    let keep: Vec<bool> = deleted.iter().map(|d| !d).collect();
    let colour = bipartition(adj, &keep)?;
    let parts: Vec<u8> = (0..adj.len())
        .map(|v| if deleted[v] { 0 } else { colour[v] + 1 })
        .collect();
    Some(Partition::from_parts(&parts))
}

const INF: u32 = u32::MAX / 2;

/// Residual network with paired arcs (`e ^ 1` is the reverse of `e`).
struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn arc(&mut self, u: usize, v: usize, cap: u32) -> usize {
        let e = self.to.len();
        self.head[u].push(e);
        self.to.push(v);
        self.cap.push(cap);
        self.head[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
        e
    }

    /// Residual reachability from `s`; with `t`, also the augmenting path.
    fn bfs(&self, cap: &[u32], s: usize, t: usize) -> (Vec<bool>, Option<Vec<usize>>) {
        let mut seen = vec![false; self.head.len()];
        let mut via = vec![usize::MAX; self.head.len()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    if v == t {
                        let mut path = Vec::new();
                        let mut x = t;
                        while x != s {
                            path.push(via[x]);
                            x = self.to[via[x] ^ 1];
                        }
                        return (seen, Some(path));
                    }
                    queue.push_back(v);
                }
            }
        }
        (seen, None)
    }

    /// Unit augmentations until the flow exceeds `limit` or no path remains.
    /// Returns the flow value and the residual reachable set.
    fn max_flow(&self, cap: &mut [u32], s: usize, t: usize, limit: usize) -> (usize, Vec<bool>) {
        let mut flow = 0;
        loop {
            let (seen, path) = self.bfs(cap, s, t);
            let Some(path) = path else {
                return (flow, seen);
            };
            let bottleneck = path.iter().map(|&e| cap[e]).min().unwrap_or(0);
            for &e in &path {
                cap[e] -= bottleneck;
                cap[e ^ 1] += bottleneck;
            }
            flow += bottleneck as usize;
            if flow > limit {
                return (flow, seen);
            }
        }
    }
}

/// Working state of one compression: the graph `H = G_i − Y`, 2-coloured,
/// turned into a split-vertex network.
struct Compression<'a> {
    adj: &'a [Vec<usize>],
    active: &'a [bool],
    y: &'a [usize],
    /// local index of each vertex of H
    local: Vec<usize>,
    h: Vec<usize>,
    colour: Vec<u8>,
    net: Network,
    base_cap: Vec<u32>,
    /// arc s -> in(h) and out(h) -> t per local vertex
    source_arc: Vec<usize>,
    sink_arc: Vec<usize>,
}

impl<'a> Compression<'a> {
    fn new(adj: &'a [Vec<usize>], active: &'a [bool], y: &'a [usize]) -> Option<Self> {
        let n = adj.len();
        let mut in_h: Vec<bool> = active.to_vec();
        for &v in y {
            in_h[v] = false;
        }
        let colour = bipartition(adj, &in_h)?;
        let h: Vec<usize> = (0..n).filter(|&v| in_h[v]).collect();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in h.iter().enumerate() {
            local[v] = i;
        }
        let (s, t) = (2 * h.len(), 2 * h.len() + 1);
        let mut net = Network::new(2 * h.len() + 2);
        for i in 0..h.len() {
            net.arc(2 * i, 2 * i + 1, 1);
        }
        for (i, &v) in h.iter().enumerate() {
            for &w in &adj[v] {
                if in_h[w] {
                    net.arc(2 * i + 1, 2 * local[w], INF);
                }
            }
        }
        let source_arc = (0..h.len()).map(|i| net.arc(s, 2 * i, 0)).collect();
        let sink_arc = (0..h.len()).map(|i| net.arc(2 * i + 1, t, 0)).collect();
        let base_cap = net.cap.clone();
        Some(Compression {
            adj,
            active,
            y,
            local,
            h,
            colour,
            net,
            base_cap,
            source_arc,
            sink_arc,
        })
    }

    /// Tries one guess for `Y`: part 0 deleted, 1 and 2 colour classes 0
    /// and 1. Returns the deleted vertices of H if at most `budget`.
    fn try_guess(&self, guess: &[u8], budget: usize, stats: &mut OctStats) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut side = vec![u8::MAX; n];
        for (&v, &g) in self.y.iter().zip(guess) {
            if g > 0 {
                side[v] = g - 1;
            }
        }
        // need[i] bit c set: local vertex i must end with colour c
        let mut need = vec![0u8; self.h.len()];
        for (&v, &g) in self.y.iter().zip(guess) {
            if g == 0 {
                continue;
            }
            for &w in &self.adj[v] {
                if !self.active[w] {
                    continue;
                }
                if side[w] == side[v] {
                    return None;
                }
                if self.local[w] != usize::MAX {
                    need[self.local[w]] |= 1 << (1 - side[v]);
                }
            }
        }
        let mut cap = self.base_cap.clone();
        let mut any_keep = false;
        let mut any_flip = false;
        for (i, &req) in need.iter().enumerate() {
            let c = self.colour[self.h[i]];
            let keep = req & (1 << c) != 0;
            let flip = req & (1 << (1 - c)) != 0;
            if keep {
                cap[self.source_arc[i]] = INF;
                any_keep = true;
            }
            if flip {
                cap[self.sink_arc[i]] = INF;
                any_flip = true;
            }
        }
        if !any_keep || !any_flip {
            return Some(Vec::new());
        }
        stats.flow_runs += 1;
        let (s, t) = (2 * self.h.len(), 2 * self.h.len() + 1);
        let (flow, seen) = self.net.max_flow(&mut cap, s, t, budget);
        if flow > budget {
            return None;
        }
        let cut = (0..self.h.len())
            .filter(|&i| seen[2 * i] && !seen[2 * i + 1])
            .map(|i| self.h[i])
            .collect::<Vec<_>>();
        debug_assert_eq!(cut.len(), flow);
        Some(cut)
    }
}

/// Transversal of `G_i` of size `|y| − 1`, if one exists.
fn compress(adj: &[Vec<usize>], active: &[bool], y: &[usize], stats: &mut OctStats) -> Option<Vec<usize>> {
    stats.compressions += 1;
    let target = y.len() - 1;
    let comp = Compression::new(adj, active, y)?;
    let mut guess = vec![0u8; y.len()];
    let total = 3usize.pow(y.len() as u32);
    for code in 0..total {
        let mut c = code;
        for g in guess.iter_mut() {
            *g = (c % 3) as u8;
            c /= 3;
        }
        // colour classes are interchangeable: the first kept vertex takes class 0
        if guess.iter().find(|&&g| g != 0) == Some(&2) {
            continue;
        }
        let deleted = guess.iter().filter(|&&g| g == 0).count();
        if deleted > target {
            continue;
        }
        stats.guesses += 1;
        if let Some(cut) = comp.try_guess(&guess, target - deleted, stats) {
            let mut x: Vec<usize> = y
                .iter()
                .zip(&guess)
                .filter(|(_, &g)| g == 0)
                .map(|(&v, _)| v)
                .chain(cut)
                .collect();
            x.sort_unstable();
            return Some(x);
        }
    }
    None
}

/// Puts a large induced bipartite subgraph first so that compressions start
/// late.
fn greedy_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut chosen = vec![false; n];
    let mut rest = Vec::new();
    let mut order = Vec::with_capacity(n);
    for v in 0..n {
        chosen[v] = true;
        if bipartition(adj, &chosen).is_some() {
            order.push(v);
        } else {
            chosen[v] = false;
            rest.push(v);
        }
    }
    order.extend(rest);
    order
}

/// Minimum odd cycle transversal if its size is at most `cap`.
pub fn oct_minimum(g: &OctGraph, cap: usize) -> (Option<Partition>, OctStats) {
    let adj = g.adjacency();
    let n = adj.len();
    let mut stats = OctStats::default();
    let mut active = vec![false; n];
    let mut in_x = vec![false; n];
    let mut x: Vec<usize> = Vec::new();
    for v in greedy_order(&adj) {
        active[v] = true;
        let keep: Vec<bool> = (0..n).map(|u| active[u] && !in_x[u]).collect();
        if bipartition(&adj, &keep).is_some() {
            continue;
        }
        let mut y = x.clone();
        y.push(v);
        x = match compress(&adj, &active, &y, &mut stats) {
            Some(smaller) => smaller,
            None => y,
        };
        if x.len() > cap {
            return (None, stats);
        }
        in_x.fill(false);
        for &u in &x {
            in_x[u] = true;
        }
    }
    let part = partition_from(&adj, &in_x).expect("maintained transversal leaves a bipartite graph");
    (Some(part), stats)
}

/// Minimum transversal within the graph's budget.
pub fn oct_solve(g: &OctGraph) -> (Option<Partition>, OctStats) {
    oct_minimum(g, g.budget)
}

/// Smallest transversal by trying all vertex subsets in order of size, up
/// to the budget.
pub fn oct_brute_force(g: &OctGraph) -> Option<Partition> {
    let adj = g.adjacency();
    let n = adj.len();
    for size in 0..=g.budget.min(n) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let mut deleted = vec![false; n];
            for &v in &pick {
                deleted[v] = true;
            }
            if let Some(part) = partition_from(&adj, &deleted) {
                return Some(part);
            }
            // next combination
            let Some(i) = (0..size).rev().find(|&i| pick[i] < n - size + i) else {
                break;
            };
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> OctGraph {
        OctGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)), n).unwrap()
    }

    #[test]
    fn odd_and_even_cycles() {
        for n in 3..9 {
            let (part, _) = oct_solve(&cycle(n));
            let part = part.unwrap();
            assert_eq!(part.x.len(), n % 2);
            assert!(cycle(n).is_solution(&part));
        }
    }

    #[test]
    fn complete_graphs_need_all_but_two() {
        for n in 1..7 {
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let g = OctGraph::new(n, edges, n).unwrap();
            let (part, _) = oct_solve(&g);
            assert_eq!(part.unwrap().x.len(), n.saturating_sub(2));
        }
    }

    #[test]
    fn budget_is_respected() {
        let k5 = OctGraph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))), 2).unwrap();
        assert!(oct_solve(&k5).0.is_none());
        assert!(oct_brute_force(&k5).is_none());
        assert_eq!(oct_solve(&k5.with_budget(3)).0.unwrap().x.len(), 3);
    }

    #[test]
    fn empty_graph() {
        let g = OctGraph::new(0, [], 0).unwrap();
        assert_eq!(oct_solve(&g).0, Some(Partition::default()));
        assert_eq!(oct_brute_force(&g), Some(Partition::default()));
    }

    #[test]
    fn agrees_with_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=11);
            let density = rng.gen_range(0.1..0.7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(density) {
                        edges.push((u, v));
                    }
                }
            }
            let g = OctGraph::new(n, edges, n).unwrap();
            let brute = oct_brute_force(&g).unwrap();
            let (fast, _) = oct_solve(&g);
            let fast = fast.unwrap();
            assert!(g.is_solution(&fast));
            assert_eq!(fast.x.len(), brute.x.len(), "{g}");
        }
    }
}
