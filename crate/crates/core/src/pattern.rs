//! The pattern graph `F`: parsing, automorphisms, 1-density and strict
//! 1-balance, and the labeled copies of `F` on `r` labeled vertices.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::combinatorics::{factorial, next_permutation};
use crate::error::{Error, Result};

/// Largest `r` accepted by the exhaustive permutation and subgraph searches.
pub const MAX_PATTERN_VERTICES: usize = 10;

pub type Edge = (usize, usize);

/// A small simple graph on vertices `0..r`, with cached structural constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    r: usize,
    edges: Vec<Edge>,
    aut_count: u64,
    d1: Ratio<i64>,
}

impl Pattern {
    /// Builds a pattern from an edge list. Edges may be given in either
    /// orientation; they are stored as `(u, v)` with `u < v`, sorted.
    pub fn new(r: usize, edges: &[Edge]) -> Result<Self> {
        if r < 2 {
            return Err(Error::domain(format!("pattern needs r >= 2, got {r}")));
        }
        if r > MAX_PATTERN_VERTICES {
            return Err(Error::capability(format!(
                "pattern has {r} vertices; exhaustive search is limited to r <= {MAX_PATTERN_VERTICES}"
            )));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at vertex {a}")));
            }
            if a >= r || b >= r {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) out of range for r = {r}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate edge"));
        }
        if canon.is_empty() {
            return Err(Error::domain("pattern needs at least one edge"));
        }
        let s = canon.len() as i64;
        let mut pattern = Pattern {
            r,
            edges: canon,
            aut_count: 0,
            d1: Ratio::new(s, r as i64 - 1),
        };
        pattern.aut_count = count_automorphisms(r, &pattern.edges);
        Ok(pattern)
    }

    pub fn complete(r: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..r {
            for v in u + 1..r {
                edges.push((u, v));
            }
        }
        Self::new(r, &edges)
    }

    pub fn cycle(r: usize) -> Result<Self> {
        let edges: Vec<Edge> = (0..r).map(|i| (i, (i + 1) % r)).collect();
        Self::new(r, &edges)
    }

    pub fn path(r: usize) -> Result<Self> {
        let edges: Vec<Edge> = (0..r - 1).map(|i| (i, i + 1)).collect();
        Self::new(r, &edges)
    }

    /// `K4` minus one edge.
    pub fn diamond() -> Self {
        Self::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).expect("valid diamond")
    }

    /// Parses the pattern text format: a header line `r s` followed by `s`
    /// lines `u v` with `u < v < r`. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"r s\""))?;
        let (r, s) = parse_pair(hline, header)?;
        if r < 2 {
            return Err(Error::parse(hline, format!("r must be >= 2, got {r}")));
        }
        if s < 1 {
            return Err(Error::parse(hline, "s must be >= 1"));
        }

        let mut edges = Vec::with_capacity(s);
        let mut seen = BTreeSet::new();
        for (lineno, line) in lines {
            let (u, v) = parse_pair(lineno, line)?;
            if u >= v {
                return Err(Error::parse(
                    lineno,
                    format!("expected u < v, got \"{line}\""),
                ));
            }
            if v >= r {
                return Err(Error::parse(
                    lineno,
                    format!("vertex {v} out of range for r = {r}"),
                ));
            }
            if !seen.insert((u, v)) {
                return Err(Error::parse(lineno, format!("duplicate edge {u} {v}")));
            }
            edges.push((u, v));
        }
        if edges.len() != s {
            return Err(Error::parse(
                hline,
                format!("header declares {s} edges but {} were given", edges.len()),
            ));
        }
        Self::new(r, &edges)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// |aut(F)|.
    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    /// One-density `s / (r - 1)`.
    pub fn d1(&self) -> Ratio<i64> {
        self.d1
    }

    /// `r! / aut(F)`: the number of distinct copies of `F` on a fixed `r`-set.
    pub fn copies_per_set(&self) -> u64 {
        (factorial(self.r as u64).expect("r <= 10") / self.aut_count as u128) as u64
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.r * (self.r - 1) / 2
    }

    /// Pattern text format, inverse of [`Pattern::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.r, self.s());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F(r={}, s={}, aut={}, d1={})",
            self.r,
            self.s(),
            self.aut_count,
            self.d1
        )
    }
}

fn parse_pair(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| Error::parse(lineno, format!("missing {what} in \"{line}\"")))?;
        tok.parse::<usize>()
            .map_err(|_| Error::parse(lineno, format!("invalid integer \"{tok}\"")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::parse(
            lineno,
            format!("trailing fields in \"{line}\""),
        ));
    }
    Ok((a, b))
}

/// Image of a sorted edge set under the vertex map `perm`, sorted again.
pub fn relabel(edges: &[Edge], perm: &[usize]) -> Vec<Edge> {
    let mut out: Vec<Edge> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

fn count_automorphisms(r: usize, edges: &[Edge]) -> u64 {
    let mut perm: Vec<usize> = (0..r).collect();
    let mut count = 0;
    loop {
        if relabel(edges, &perm) == edges {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    count
}

/// `|aut(F)|` by exhaustive check of all `r!` vertex permutations.
pub fn automorphism_count(p: &Pattern) -> Result<u64> {
    if p.r > MAX_PATTERN_VERTICES {
        return Err(Error::capability(format!(
            "r = {} exceeds {MAX_PATTERN_VERTICES}",
            p.r
        )));
    }
    Ok(count_automorphisms(p.r, &p.edges))
}

/// A subgraph `F'` of `F` that violates strict 1-balance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub d1: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub strictly_balanced: bool,
    pub witness: Option<BalanceWitness>,
}

/// Decides strict 1-balance: every proper subgraph with at least two
/// vertices and one edge has `d1(F') < d1(F)`.
///
/// For a fixed vertex subset the densest subgraph keeps every induced edge,
/// so only that edge set needs checking, except on the full vertex set where
/// dropping one edge is the densest proper choice. The witness returned is
/// the first violation in subset-bitmask order.
pub fn is_strictly_1_balanced(p: &Pattern) -> Result<BalanceReport> {
    if p.r > MAX_PATTERN_VERTICES {
        return Err(Error::capability(format!(
            "r = {} exceeds {MAX_PATTERN_VERTICES}",
            p.r
        )));
    }
    let full = (1u32 << p.r) - 1;
    for mask in 1..=full {
        let nv = mask.count_ones() as usize;
        if nv < 2 {
            continue;
        }
        let mut induced: Vec<Edge> = p
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .collect();
        if mask == full {
            // F itself is excluded; its densest proper spanning subgraph drops an edge.
            induced.pop();
        }
        if induced.is_empty() {
            continue;
        }
        let d1 = Ratio::new(induced.len() as i64, nv as i64 - 1);
        if d1 >= p.d1 {
            let vertices = (0..p.r).filter(|&v| mask >> v & 1 == 1).collect();
            return Ok(BalanceReport {
                strictly_balanced: false,
                witness: Some(BalanceWitness {
                    vertices,
                    edges: induced,
                    d1,
                }),
            });
        }
    }
    Ok(BalanceReport {
        strictly_balanced: true,
        witness: None,
    })
}

/// The distinct edge sets obtained by relabeling `F` over its own vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCopySet {
    pattern: Pattern,
    representatives: Vec<Vec<Edge>>,
}

impl LabeledCopySet {
    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Sorted canonical edge sets, one per orbit.
    pub fn representatives(&self) -> &[Vec<Edge>] {
        &self.representatives
    }

    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    /// Index of a canonical (sorted) local edge set.
    pub fn index_of(&self, edges: &[Edge]) -> Option<usize> {
        self.representatives
            .binary_search_by(|rep| rep.as_slice().cmp(edges))
            .ok()
    }
}

pub fn labeled_copies(p: &Pattern) -> Result<LabeledCopySet> {
    if p.r > MAX_PATTERN_VERTICES {
        return Err(Error::capability(format!(
            "r = {} exceeds {MAX_PATTERN_VERTICES}",
            p.r
        )));
    }
    let mut set = BTreeSet::new();
    let mut perm: Vec<usize> = (0..p.r).collect();
    loop {
        set.insert(relabel(&p.edges, &perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(LabeledCopySet {
        pattern: p.clone(),
        representatives: set.into_iter().collect(),
    })
}
