//! Source problems and generators that encode them as bMVA instances.
//!
//! Each generator comes with a brute-force solver for its source problem so
//! both sides of the encoding can be checked on small inputs.
//!
//! Text formats, 1-based, `#` comments and blank lines ignored:
//!
//! ```text
//! hitting set:  n m k        then m lines of elements ("-" for an empty family)
//! graph:        n_G m_G      then m_G lines "u v"
//! 3-DPM:        n m          then m lines "x y z"; several instances may follow each other
//! ```

mod brute;
mod generators;

use std::collections::BTreeSet;
use std::fmt;

pub use brute::{coloring_bf, dpm3_bf, hitting_set_bf, kxk_hitting_set_bf};
pub use generators::{
    gen_cross_composition, gen_from_coloring, gen_from_hitting_set, relax_kxk_hitting_set, CrossComposition,
};

use crate::error::{parse_err, Error, Result};
use crate::format::{content_lines, parse_numbers};

fn one_based(line: usize, v: u64, bound: usize, what: &str) -> Result<usize> {
    if v == 0 || v as usize > bound {
        return Err(parse_err(line, format!("{what} {v} is outside 1..={bound}")));
    }
    Ok(v as usize - 1)
}

/// Families over `[universe]`, stored 0-based, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSetInstance {
    pub universe: usize,
    pub families: Vec<Vec<usize>>,
    pub k: usize,
}

impl HittingSetInstance {
    pub fn new(universe: usize, families: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let families = families
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                if let Some(e) = f.iter().find(|&&e| e >= universe) {
                    return Err(Error::Validation(format!(
                        "family {} contains element {} outside [{universe}]",
                        i + 1,
                        e + 1
                    )));
                }
                Ok(f.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            })
            .collect::<Result<_>>()?;
        Ok(HittingSetInstance { universe, families, k })
    }

    pub fn is_hitting_set(&self, chosen: &[usize]) -> bool {
        self.families.iter().all(|f| f.iter().any(|e| chosen.contains(e)))
    }
}

impl fmt::Display for HittingSetInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.universe, self.families.len(), self.k)?;
        for fam in &self.families {
            if fam.is_empty() {
                writeln!(f, "-")?;
            } else {
                let items: Vec<String> = fam.iter().map(|e| (e + 1).to_string()).collect();
                writeln!(f, "{}", items.join(" "))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for HittingSetInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = content_lines(s);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h = parse_numbers(hl, header, "header")?;
        if h.len() != 3 {
            return Err(parse_err(hl, "header must be \"n m k\""));
        }
        let universe = h[0] as usize;
        let mut families = Vec::new();
        for (ln, line) in lines {
            if line.trim() == "-" {
                families.push(Vec::new());
                continue;
            }
            let fam = parse_numbers(ln, line, "family")?
                .into_iter()
                .map(|e| one_based(ln, e, universe, "element"))
                .collect::<Result<_>>()?;
            families.push(fam);
        }
        if families.len() != h[1] as usize {
            return Err(parse_err(hl, format!("header declares {} families, found {}", h[1], families.len())));
        }
        HittingSetInstance::new(universe, families, h[2] as usize)
    }
}

/// Simple undirected graph on `0..n`, edges stored as `(min, max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Rejects self-loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge {{{}, {}}} outside [{n}]", u + 1, v + 1)));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at vertex {}", u + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Validation(format!("repeated edge {{{}, {}}}", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = content_lines(s);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let h = parse_numbers(hl, header, "header")?;
        if h.len() != 2 {
            return Err(parse_err(hl, "header must be \"n_G m_G\""));
        }
        let n = h[0] as usize;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let e = parse_numbers(ln, line, "edge")?;
            if e.len() != 2 {
                return Err(parse_err(ln, "edge line must be \"u v\""));
            }
            edges.push((one_based(ln, e[0], n, "vertex")?, one_based(ln, e[1], n, "vertex")?));
        }
        if edges.len() != h[1] as usize {
            return Err(parse_err(hl, format!("header declares {} edges, found {}", h[1], edges.len())));
        }
        Graph::new(n, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringInstance {
    pub graph: Graph,
    pub chi: usize,
}

/// 3-dimensional matching over `X = Y = Z = [n]`, 0-based triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpmInstance {
    pub n: usize,
    pub hyperedges: Vec<[usize; 3]>,
}

impl DpmInstance {
    pub fn new(n: usize, hyperedges: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(h) = hyperedges.iter().find(|h| h.iter().any(|&x| x >= n)) {
            return Err(Error::Validation(format!(
                "hyperedge ({}, {}, {}) outside [{n}]",
                h[0] + 1,
                h[1] + 1,
                h[2] + 1
            )));
        }
        Ok(DpmInstance { n, hyperedges })
    }

    pub fn m(&self) -> usize {
        self.hyperedges.len()
    }
}

impl fmt::Display for DpmInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.hyperedges.len())?;
        for h in &self.hyperedges {
            writeln!(f, "{} {} {}", h[0] + 1, h[1] + 1, h[2] + 1)?;
        }
        Ok(())
    }
}

/// Reads one or more consecutive 3-DPM instances.
pub fn parse_dpm_list(text: &str) -> Result<Vec<DpmInstance>> {
    let mut lines = content_lines(text).peekable();
    let mut out = Vec::new();
    while let Some((hl, header)) = lines.next() {
        let h = parse_numbers(hl, header, "header")?;
        if h.len() != 2 {
            return Err(parse_err(hl, "header must be \"n m\""));
        }
        let n = h[0] as usize;
        let mut hyperedges = Vec::new();
        for _ in 0..h[1] {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("header declares {} hyperedges", h[1])))?;
            let t = parse_numbers(ln, line, "hyperedge")?;
            if t.len() != 3 {
                return Err(parse_err(ln, "hyperedge line must be \"x y z\""));
            }
            hyperedges.push([
                one_based(ln, t[0], n, "element")?,
                one_based(ln, t[1], n, "element")?,
                one_based(ln, t[2], n, "element")?,
            ]);
        }
        out.push(DpmInstance::new(n, hyperedges)?);
    }
    if out.is_empty() {
        return Err(parse_err(1, "no 3-DPM instance found"));
    }
    Ok(out)
}

/// `k × k` Hitting Set: families over the grid `[k] × [k]`, 0-based
/// `(row, column)`; a solution takes exactly one element per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KxKHittingSet {
    pub k: usize,
    pub families: Vec<Vec<(usize, usize)>>,
}
