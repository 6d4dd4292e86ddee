use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::instance::Instance;

use super::{ColoringInstance, DpmInstance, HittingSetInstance, KxKHittingSet};

/// Hitting Set as bMVA with `n` equal to the universe size.
///
/// Family `R_i` becomes a set whose `j`-th vector is all ones except at `j`
/// when `j ∈ R_i`, and the 0-vector otherwise. A last set holds `n − 1`
/// 0-vectors and one 1-vector. The budget is `n(n − 1) + k`.
///
/// Requires `k < n`: with `k ≥ n` and an empty family the encoding answers
/// YES while the source answers NO.
pub fn gen_from_hitting_set(hs: &HittingSetInstance) -> Result<(Instance, u64)> {
    let n = hs.universe;
    if hs.k >= n {
        return Err(Error::Generator(format!(
            "hitting set size k = {} must be below the universe size {n}",
            hs.k
        )));
    }
    let mut sets: Vec<Vec<BitVec>> = hs
        .families
        .iter()
        .map(|fam| {
            (0..n)
                .map(|j| {
                    if fam.contains(&j) {
                        BitVec::ones_except(n, &[j])
                    } else {
                        BitVec::zeros(n)
                    }
                })
                .collect()
        })
        .collect();
    let mut star = vec![BitVec::zeros(n); n - 1];
    star.push(BitVec::ones(n));
    sets.push(star);
    let k = (n * (n - 1) + hs.k) as u64;
    Ok((Instance::new(n, sets)?, k))
}

/// χ-Colouring as bMVA with one set of `χ` vectors per edge and one
/// component per non-isolated vertex. Edge `{u, v}` contributes a vector
/// with its only zero at `u`, one with its only zero at `v`, and `χ − 2`
/// 1-vectors. The budget equals the dimension.
///
/// Isolated vertices carry no constraint and get no component, so the
/// dimension is the number of vertices of positive degree.
pub fn gen_from_coloring(ci: &ColoringInstance) -> Result<(Instance, u64)> {
    if ci.chi < 3 {
        return Err(Error::Generator(format!("chi = {} but at least 3 colours are required", ci.chi)));
    }
    let g = &ci.graph;
    if g.edges.is_empty() {
        return Err(Error::Generator("the graph has no edges".into()));
    }
    let mut column = vec![usize::MAX; g.n];
    let mut p = 0;
    for (v, col) in column.iter_mut().enumerate() {
        if g.degree(v) > 0 {
            *col = p;
            p += 1;
        }
    }
    let sets = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let mut set = vec![
                BitVec::ones_except(p, &[column[u]]),
                BitVec::ones_except(p, &[column[v]]),
            ];
            set.extend(std::iter::repeat_n(BitVec::ones(p), ci.chi - 2));
            set
        })
        .collect();
    Ok((Instance::new(p, sets)?, p as u64))
}

/// Output of [`gen_cross_composition`].
#[derive(Clone, Debug)]
pub struct CrossComposition {
    /// Three sets of `n · 2^q` vectors.
    pub instance: Instance,
    pub k: u64,
    pub q: usize,
    /// Number of dummy YES instances appended to reach `2^q`.
    pub padding: usize,
    /// Per instance and hyperedge slot, how many input copies the slot
    /// stands for. A slot freed by deduplication has multiplicity 0 and an
    /// all-zero incidence component.
    pub multiplicities: Vec<Vec<usize>>,
}

impl CrossComposition {
    pub fn had_duplicates(&self) -> bool {
        self.multiplicities.iter().flatten().any(|&c| c != 1)
    }
}

fn dummy_yes_instance(n: usize, m: usize) -> Result<DpmInstance> {
    if m < n || m > n * n * n {
        return Err(Error::Generator(format!(
            "padding needs a YES instance with n = {n} and m = {m} distinct hyperedges, which requires n <= m <= n^3"
        )));
    }
    let mut edges: Vec<[usize; 3]> = (0..n).map(|j| [j, j, j]).collect();
    'fill: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if edges.len() == m {
                    break 'fill;
                }
                if !(x == y && y == z) {
                    edges.push([x, y, z]);
                }
            }
        }
    }
    DpmInstance::new(n, edges)
}

/// AND-composition of `t` 3-DPM instances of equal shape into one bMVA
/// instance with three sets.
///
/// `t` is padded to `2^q` with YES instances. Vector `j` of instance `i` in
/// set `X*` has `m` incidence components (1 where hyperedge `k` of instance
/// `i` contains `x_j`), then `i − 1` in `q` bits, most significant first,
/// each bit written `m` times, then the complement of that block. `Y*` and
/// `Z*` are built the same way. `k* = n·2^q·(mq + m − 1)`.
///
/// Repeated hyperedges are merged; the freed slot keeps an all-zero
/// incidence component so every instance still has `m` slots.
pub fn gen_cross_composition(instances: &[DpmInstance]) -> Result<CrossComposition> {
    let first = instances
        .first()
        .ok_or_else(|| Error::Generator("at least one 3-DPM instance is required".into()))?;
    let (n, m) = (first.n, first.m());
    if let Some((i, d)) = instances.iter().enumerate().find(|(_, d)| (d.n, d.m()) != (n, m)) {
        return Err(Error::Arity {
            expected: format!("n = {n}, m = {m} for every instance"),
            found: format!("instance {} has n = {}, m = {}", i + 1, d.n, d.m()),
        });
    }
    if m == 0 {
        return Err(Error::Generator("instances need at least one hyperedge".into()));
    }
    let t = instances.len();
    let q = t.next_power_of_two().trailing_zeros() as usize;
    let total = 1usize << q;
    let mut all: Vec<DpmInstance> = instances.to_vec();
    if total > t {
        let dummy = dummy_yes_instance(n, m)?;
        all.resize(total, dummy);
    }

    let mut slots: Vec<Vec<Option<[usize; 3]>>> = Vec::with_capacity(total);
    let mut multiplicities = Vec::with_capacity(total);
    for d in &all {
        let mut distinct: Vec<[usize; 3]> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for h in &d.hyperedges {
            match distinct.iter().position(|e| e == h) {
                Some(pos) => counts[pos] += 1,
                None => {
                    distinct.push(*h);
                    counts.push(1);
                }
            }
        }
        let mut s: Vec<Option<[usize; 3]>> = distinct.into_iter().map(Some).collect();
        s.resize(m, None);
        counts.resize(m, 0);
        slots.push(s);
        multiplicities.push(counts);
    }

    let p = m + 2 * m * q;
    let mut sets: Vec<Vec<BitVec>> = (0..3).map(|_| Vec::with_capacity(n * total)).collect();
    for (i, inst_slots) in slots.iter().enumerate() {
        let mut code = BitVec::zeros(p);
        for b in 0..q {
            let bit = (i >> (q - 1 - b)) & 1 == 1;
            for r in 0..m {
                code.set(m + b * m + r, bit);
                code.set(m + m * q + b * m + r, !bit);
            }
        }
        for (coord, set) in sets.iter_mut().enumerate() {
            for j in 0..n {
                let mut v = code.clone();
                for (slot, h) in inst_slots.iter().enumerate() {
                    v.set(slot, h.is_some_and(|h| h[coord] == j));
                }
                set.push(v);
            }
        }
    }
    let k = (n * total * (m * q + m - 1)) as u64;
    Ok(CrossComposition {
        instance: Instance::new(p, sets)?,
        k,
        q,
        padding: total - t,
        multiplicities: multiplicities.into_iter().take(t).collect(),
    })
}

/// Flattens `[k] × [k]` row by row into `[k²]` and appends one family per
/// row holding all of its elements. A hitting set of size `k` must then
/// take exactly one element per row.
pub fn relax_kxk_hitting_set(inst: &KxKHittingSet) -> HittingSetInstance {
    let k = inst.k;
    let mut families: Vec<Vec<usize>> = inst
        .families
        .iter()
        .map(|f| f.iter().map(|&(r, c)| r * k + c).collect())
        .collect();
    families.extend((0..k).map(|r| (r * k..(r + 1) * k).collect()));
    HittingSetInstance::new(k * k, families, k).expect("grid elements lie in [k²]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::derive_params;
    use crate::reductions::{hitting_set_bf, kxk_hitting_set_bf, Graph};
    use crate::solvers::{branch_and_bound, brute_force};

    fn opt(inst: &Instance) -> u64 {
        branch_and_bound(inst, None).unwrap().optimum.unwrap()
    }

    #[test]
    fn hitting_set_small_example() {
        let hs = HittingSetInstance::new(2, vec![vec![0]], 1).unwrap();
        let (inst, k) = gen_from_hitting_set(&hs).unwrap();
        assert_eq!(inst, Instance::from_strs(&[&["01", "00"], &["00", "11"]]).unwrap());
        assert_eq!(k, 3);
        assert_eq!(brute_force(&inst, None).unwrap().optimum, Some(3));
        // a singleton family costs n² − (n − 1) = 3 > n(n − 1)
        assert_eq!(derive_params(&inst, k).b, 3);
    }

    #[test]
    fn hitting_set_b_with_large_families() {
        let hs = HittingSetInstance::new(4, vec![vec![0, 1], vec![1, 2, 3], vec![0, 3]], 2).unwrap();
        let (inst, k) = gen_from_hitting_set(&hs).unwrap();
        let params = derive_params(&inst, k);
        assert_eq!(params.b, 12);
        assert_eq!(params.zeta_b, 2);
        assert_eq!(opt(&inst) <= k, hitting_set_bf(&hs).unwrap().unwrap().len() <= hs.k);
    }

    #[test]
    fn hitting_set_empty_family_is_no() {
        let hs = HittingSetInstance::new(3, vec![vec![0, 1], vec![]], 2).unwrap();
        let (inst, k) = gen_from_hitting_set(&hs).unwrap();
        assert!(opt(&inst) > k);
        assert_eq!(opt(&inst), 9);
        let too_big = HittingSetInstance::new(3, vec![vec![]], 3).unwrap();
        assert!(matches!(gen_from_hitting_set(&too_big), Err(Error::Generator(_))));
    }

    #[test]
    fn colouring_examples() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let (inst, k) = gen_from_coloring(&ColoringInstance { graph: tri, chi: 3 }).unwrap();
        assert_eq!((inst.m(), inst.n(), inst.p(), k), (3, 3, 3, 3));
        assert_eq!(opt(&inst), 3);

        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (inst, k) = gen_from_coloring(&ColoringInstance { graph: k4, chi: 3 }).unwrap();
        assert!(opt(&inst) > k);
    }

    #[test]
    fn colouring_rejections_and_isolated_vertices() {
        let edgeless = Graph::new(3, vec![]).unwrap();
        assert!(gen_from_coloring(&ColoringInstance { graph: edgeless, chi: 3 }).is_err());
        let g = Graph::new(4, vec![(1, 3)]).unwrap();
        assert!(gen_from_coloring(&ColoringInstance { graph: g.clone(), chi: 2 }).is_err());
        let (inst, k) = gen_from_coloring(&ColoringInstance { graph: g, chi: 3 }).unwrap();
        assert_eq!((inst.p(), k), (2, 2));
        assert_eq!(inst.set(0)[0].to_string(), "01");
    }

    #[test]
    fn cross_composition_single_edge() {
        let d = DpmInstance::new(1, vec![[0, 0, 0]]).unwrap();
        let cc = gen_cross_composition(&[d]).unwrap();
        assert_eq!((cc.q, cc.k, cc.instance.p()), (0, 0, 1));
        assert!(cc.instance.sets().iter().flatten().all(|v| v.to_string() == "1"));
        assert_eq!(opt(&cc.instance), 0);
    }

    #[test]
    fn cross_composition_two_yes_instances() {
        let a = DpmInstance::new(2, vec![[0, 0, 0], [1, 1, 1]]).unwrap();
        let b = DpmInstance::new(2, vec![[0, 1, 1], [1, 0, 0]]).unwrap();
        let cc = gen_cross_composition(&[a.clone(), b]).unwrap();
        assert_eq!(cc.k, 12);
        assert_eq!(cc.instance.p(), 2 + 2 * 2);
        // instance 1 has code 0: block of zeros then its complement
        assert_eq!(cc.instance.vector(0, 0).to_string(), "100011");
        assert_eq!(cc.instance.vector(0, 3).to_string(), "011100");
        assert_eq!(opt(&cc.instance), 12);

        let no = DpmInstance::new(2, vec![[0, 0, 0], [1, 0, 1]]).unwrap();
        let cc = gen_cross_composition(&[a, no]).unwrap();
        assert!(opt(&cc.instance) > cc.k);
    }

    #[test]
    fn cross_composition_padding_and_duplicates() {
        let a = DpmInstance::new(2, vec![[0, 0, 0], [1, 1, 1], [0, 0, 0]]).unwrap();
        let cc = gen_cross_composition(&[a.clone(), a.clone(), a]).unwrap();
        assert_eq!((cc.q, cc.padding), (2, 1));
        assert_eq!(cc.multiplicities[0], vec![2, 1, 0]);
        assert!(cc.had_duplicates());
        assert_eq!(cc.instance.set(0).len(), 8);
        assert_eq!(opt(&cc.instance), cc.k);

        let short = DpmInstance::new(2, vec![[0, 0, 0]]).unwrap();
        assert!(gen_cross_composition(&[short.clone(), short.clone(), short]).is_err());
        let other = DpmInstance::new(1, vec![[0, 0, 0]]).unwrap();
        let two = DpmInstance::new(2, vec![[0, 0, 0]]).unwrap();
        assert!(matches!(gen_cross_composition(&[two, other]), Err(Error::Arity { .. })));
    }

    #[test]
    fn kxk_relaxation() {
        let one = KxKHittingSet { k: 1, families: vec![vec![(0, 0)]] };
        let hs = relax_kxk_hitting_set(&one);
        assert_eq!((hs.universe, hs.families.clone()), (1, vec![vec![0], vec![0]]));
        assert_eq!(hitting_set_bf(&hs).unwrap(), Some(vec![0]));

        let row0 = KxKHittingSet { k: 2, families: vec![vec![(0, 0)], vec![(0, 1)]] };
        let hs = relax_kxk_hitting_set(&row0);
        let best = hitting_set_bf(&hs).unwrap().unwrap();
        assert!(best.len() > hs.k);
        assert_eq!(kxk_hitting_set_bf(&row0).unwrap(), None);

        let empty = KxKHittingSet { k: 2, families: vec![] };
        let hs = relax_kxk_hitting_set(&empty);
        assert_eq!(hs.families, vec![vec![0, 1], vec![2, 3]]);
        assert!(hs.is_hitting_set(&[1, 2]));
    }
}
