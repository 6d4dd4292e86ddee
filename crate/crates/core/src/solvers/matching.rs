use crate::bits::BitVec;

/// Perfect matching in a bipartite graph with `n` vertices per side given by
/// left adjacency lists. Returns `left -> right` when one exists.
///
/// Augmenting paths (Kuhn), `O(n · E)`.
pub fn perfect_matching(n: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if std::mem::replace(&mut visited[v], true) {
                continue;
            }
            if match_right[v].is_none_or(|w| augment(w, adj, visited, match_right)) {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    for u in 0..n {
        visited.fill(false);
        if !augment(u, adj, &mut visited, &mut match_right) {
            return None;
        }
    }
    let mut match_left = vec![0; n];
    for (v, u) in match_right.into_iter().enumerate() {
        match_left[u.expect("perfect matching covers the right side")] = v;
    }
    Some(match_left)
}

/// Pairs every vector of `va` with a distinct vector of `vb` that adds no
/// zero to it (`a & b == a`), if such a pairing exists.
pub fn zero_free_matching(va: &[BitVec], vb: &[BitVec]) -> Option<Vec<usize>> {
    if va.len() != vb.len() {
        return None;
    }
    let adj: Vec<Vec<usize>> = va
        .iter()
        .map(|a| {
            vb.iter()
                .enumerate()
                .filter(|(_, b)| b.zeros_subset_of(a))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    perfect_matching(va.len(), &adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(items: &[&str]) -> Vec<BitVec> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn is_zero_free(va: &[BitVec], vb: &[BitVec], mu: &[usize]) -> bool {
        let mut seen = vec![false; vb.len()];
        mu.iter().enumerate().all(|(a, &b)| {
            !std::mem::replace(&mut seen[b], true) && va[a].and(&vb[b]) == va[a]
        })
    }

    #[test]
    fn all_ones_partners_always_match() {
        let (a, b) = (vs(&["10", "01"]), vs(&["11", "11"]));
        let mu = zero_free_matching(&a, &b).unwrap();
        assert!(is_zero_free(&a, &b, &mu));
    }

    #[test]
    fn missing_partner_blocks_matching() {
        assert!(zero_free_matching(&vs(&["10", "01"]), &vs(&["10", "10"])).is_none());
    }

    #[test]
    fn identical_sets_match() {
        let a = vs(&["1100", "0011", "1010", "1100"]);
        let mu = zero_free_matching(&a, &a).unwrap();
        assert!(is_zero_free(&a, &a, &mu));
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy would pair 0 with 0 and strand 1
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(perfect_matching(2, &adj), Some(vec![1, 0]));
        assert_eq!(perfect_matching(2, &[vec![0], vec![0]]), None);
        assert_eq!(perfect_matching(0, &[]), Some(vec![]));
    }
}
