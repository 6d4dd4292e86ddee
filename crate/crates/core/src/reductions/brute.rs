use crate::error::{Error, Result};

use super::{ColoringInstance, DpmInstance, HittingSetInstance, KxKHittingSet};

const MAX_UNIVERSE: usize = 20;
const MAX_VERTICES: usize = 10;
const MAX_DPM_SIDE: usize = 5;

fn refuse(size: usize, cap: usize) -> Error {
    Error::CapExceeded {
        required: size as u128,
        cap: cap as u128,
    }
}

/// Smallest hitting set, smallest first in colexicographic bitmask order.
/// `None` when some family is empty.
pub fn hitting_set_bf(hs: &HittingSetInstance) -> Result<Option<Vec<usize>>> {
    if hs.universe > MAX_UNIVERSE {
        return Err(refuse(hs.universe, MAX_UNIVERSE));
    }
    let masks: Vec<u32> = hs
        .families
        .iter()
        .map(|f| f.iter().fold(0u32, |acc, &e| acc | 1 << e))
        .collect();
    let mut best: Option<u32> = None;
    for chosen in 0u32..1 << hs.universe {
        if best.is_some_and(|b| b.count_ones() <= chosen.count_ones()) {
            continue;
        }
        if masks.iter().all(|&f| f & chosen != 0) {
            best = Some(chosen);
        }
    }
    Ok(best.map(|b| (0..hs.universe).filter(|&e| b >> e & 1 == 1).collect()))
}

/// Whether the graph admits a proper colouring with `chi` colours.
pub fn coloring_bf(ci: &ColoringInstance) -> Result<bool> {
    let g = &ci.graph;
    if g.n > MAX_VERTICES {
        return Err(refuse(g.n, MAX_VERTICES));
    }
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn place(v: usize, adj: &[Vec<usize>], colour: &mut [usize], chi: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        // colours are symmetric: vertex v never needs a colour above max used + 1
        let limit = colour[..v].iter().map(|&c| c + 1).max().unwrap_or(0).min(chi - 1);
        for c in 0..=limit {
            if adj[v].iter().all(|&w| w > v || colour[w] != c) {
                colour[v] = c;
                if place(v + 1, adj, colour, chi) {
                    return true;
                }
            }
        }
        false
    }
    if ci.chi == 0 {
        return Ok(g.n == 0);
    }
    Ok(place(0, &adj, &mut vec![0; g.n], ci.chi))
}

/// Whether some `n` hyperedges cover every element of `X`, `Y` and `Z`.
pub fn dpm3_bf(d: &DpmInstance) -> Result<bool> {
    if d.n > MAX_DPM_SIDE {
        return Err(refuse(d.n, MAX_DPM_SIDE));
    }
    fn cover(x: usize, d: &DpmInstance, used_y: &mut [bool], used_z: &mut [bool]) -> bool {
        if x == d.n {
            return true;
        }
        for h in d.hyperedges.iter().filter(|h| h[0] == x) {
            if used_y[h[1]] || used_z[h[2]] {
                continue;
            }
            used_y[h[1]] = true;
            used_z[h[2]] = true;
            let ok = cover(x + 1, d, used_y, used_z);
            used_y[h[1]] = false;
            used_z[h[2]] = false;
            if ok {
                return true;
            }
        }
        false
    }
    Ok(cover(0, d, &mut vec![false; d.n], &mut vec![false; d.n]))
}

/// One column per row, chosen to hit every family; `None` if impossible.
pub fn kxk_hitting_set_bf(inst: &KxKHittingSet) -> Result<Option<Vec<usize>>> {
    let k = inst.k;
    let total = (k as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > 1 << MAX_UNIVERSE {
        return Err(Error::CapExceeded {
            required: total,
            cap: 1 << MAX_UNIVERSE,
        });
    }
    let mut cols = vec![0usize; k];
    loop {
        if inst
            .families
            .iter()
            .all(|f| f.iter().any(|&(r, c)| cols[r] == c))
        {
            return Ok(Some(cols));
        }
        let Some(r) = (0..k).rev().find(|&r| cols[r] + 1 < k) else {
            return Ok(None);
        };
        cols[r] += 1;
        for c in cols.iter_mut().skip(r + 1) {
            *c = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::Graph;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn hitting_set_examples() {
        let hs = HittingSetInstance::new(3, vec![vec![0, 1], vec![1, 2]], 1).unwrap();
        assert_eq!(hitting_set_bf(&hs).unwrap(), Some(vec![1]));
        let empty = HittingSetInstance::new(3, vec![vec![0], vec![]], 3).unwrap();
        assert_eq!(hitting_set_bf(&empty).unwrap(), None);
        let none = HittingSetInstance::new(2, vec![], 0).unwrap();
        assert_eq!(hitting_set_bf(&none).unwrap(), Some(vec![]));
        let big = HittingSetInstance::new(21, vec![], 0).unwrap();
        assert!(hitting_set_bf(&big).is_err());
    }

    #[test]
    fn odd_cycle_colourings() {
        let c5 = cycle(5);
        assert!(coloring_bf(&ColoringInstance { graph: c5.clone(), chi: 3 }).unwrap());
        assert!(!coloring_bf(&ColoringInstance { graph: c5, chi: 2 }).unwrap());
        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!coloring_bf(&ColoringInstance { graph: k4.clone(), chi: 3 }).unwrap());
        assert!(coloring_bf(&ColoringInstance { graph: k4, chi: 4 }).unwrap());
    }

    #[test]
    fn dpm_examples() {
        let yes = DpmInstance::new(2, vec![[0, 0, 0], [1, 1, 1]]).unwrap();
        assert!(dpm3_bf(&yes).unwrap());
        let no = DpmInstance::new(2, vec![[0, 0, 0], [1, 0, 1]]).unwrap();
        assert!(!dpm3_bf(&no).unwrap());
        let crossed = DpmInstance::new(2, vec![[0, 1, 0], [1, 0, 1], [0, 0, 0]]).unwrap();
        assert!(dpm3_bf(&crossed).unwrap());
    }

    #[test]
    fn kxk_examples() {
        let one = KxKHittingSet { k: 1, families: vec![vec![(0, 0)]] };
        assert_eq!(kxk_hitting_set_bf(&one).unwrap(), Some(vec![0]));
        // both families live in row 0 and need different columns
        let row0 = KxKHittingSet { k: 2, families: vec![vec![(0, 0)], vec![(0, 1)]] };
        assert_eq!(kxk_hitting_set_bf(&row0).unwrap(), None);
    }
}
