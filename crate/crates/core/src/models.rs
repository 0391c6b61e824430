//! Seeded samplers for `G(n, p)` and random F-graphs `H_F(n, q)`, the
//! copy ranking used by the sparse sampler, and the support-level coupling
//! of an F-graph to an `r`-uniform hypergraph.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::combinatorics::{binomial, colex_rank, colex_unrank, BinomialTable};
use crate::error::{Error, Result};
use crate::pattern::{labeled_copies, LabeledCopySet, Pattern};

/// Reproducible RNG coordinates. `master` picks the key of a ChaCha8
/// generator and `stream` its independent stream, so replicates with
/// distinct stream indices never share random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }

    /// A seed for a sub-task identified by `tag`, independent of `self`'s
    /// own stream and of every other tag.
    pub fn derive(&self, tag: u64) -> Seed {
        Seed {
            master: splitmix64(self.master ^ splitmix64(self.stream.wrapping_add(0x5eed))),
            stream: tag,
        }
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// A simple graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl HostGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate host edge"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(HostGraph {
            n,
            edges: canon,
            adjacency,
        })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, &[]).expect("empty graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Text form: `n m` then `m` lines `u v`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header \"n m\""))?;
        let nums = parse_usizes(hline, header)?;
        if nums.len() != 2 {
            return Err(Error::parse(hline, "header must be \"n m\""));
        }
        let mut edges = Vec::with_capacity(nums[1]);
        for (lineno, line) in lines {
            match parse_usizes(lineno, line)?[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(Error::parse(lineno, "expected \"u v\"")),
            }
        }
        if edges.len() != nums[1] {
            return Err(Error::parse(
                hline,
                format!("header declares {} edges, found {}", nums[1], edges.len()),
            ));
        }
        Self::from_edges(nums[0], &edges)
    }
}

/// `G(n, p)`: every pair included independently with probability `p`.
pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<HostGraph> {
    check_probability("p", p)?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    HostGraph::from_edges(n, &edges)
}

/// Bijection between `0..C(n, r) * r!/aut(F)` and (colex-ranked `r`-subset,
/// copy index). `rank = subset_rank * copies_per_set + copy_index`.
#[derive(Debug, Clone)]
pub struct CopyRanker {
    n: usize,
    r: usize,
    per_set: u64,
    total: u64,
    table: BinomialTable,
}

impl CopyRanker {
    pub fn new(pattern: &Pattern, n: usize) -> Result<Self> {
        let r = pattern.r();
        if n < r {
            return Err(Error::domain(format!("n = {n} is smaller than r = {r}")));
        }
        let per_set = pattern.copies_per_set();
        let total = binomial(n as u64, r as u64)
            .and_then(|c| c.checked_mul(per_set as u128))
            .filter(|&t| t <= u64::MAX as u128)
            .ok_or_else(|| Error::capability(format!("C({n},{r}) * {per_set} overflows u64")))?
            as u64;
        Ok(CopyRanker {
            n,
            r,
            per_set,
            total,
            table: BinomialTable::new(n, r)?,
        })
    }

    /// Number of potential copies `C(n, r) * r!/aut(F)`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn rank(&self, subset: &[usize], copy_index: usize) -> Result<u64> {
        if subset.len() != self.r
            || subset.windows(2).any(|w| w[0] >= w[1])
            || subset.last().is_some_and(|&v| v >= self.n)
        {
            return Err(Error::domain(format!(
                "{subset:?} is not an increasing {}-subset of [0, {})",
                self.r, self.n
            )));
        }
        if copy_index as u64 >= self.per_set {
            return Err(Error::domain(format!(
                "copy index {copy_index} >= {}",
                self.per_set
            )));
        }
        Ok(colex_rank(subset, &self.table) * self.per_set + copy_index as u64)
    }

    pub fn unrank(&self, rank: u64) -> Result<(Vec<usize>, usize)> {
        if rank >= self.total {
            return Err(Error::domain(format!(
                "rank {rank} out of range [0, {})",
                self.total
            )));
        }
        let subset = colex_unrank(rank / self.per_set, self.r, self.n, &self.table);
        Ok((subset, (rank % self.per_set) as usize))
    }
}

pub fn rank_copy(pattern: &Pattern, n: usize, subset: &[usize], copy_index: usize) -> Result<u64> {
    CopyRanker::new(pattern, n)?.rank(subset, copy_index)
}

pub fn unrank_copy(pattern: &Pattern, n: usize, rank: u64) -> Result<(Vec<usize>, usize)> {
    CopyRanker::new(pattern, n)?.unrank(rank)
}

/// An F-graph on `0..n`. Hyperedges are stored flat (stride `r`) and kept
/// sorted by (vertex tuple, copy index).
#[derive(Debug, Clone, PartialEq)]
pub struct FHypergraph {
    n: usize,
    copies: Arc<LabeledCopySet>,
    q: Option<f64>,
    vertices: Vec<usize>,
    copy_index: Vec<usize>,
}

impl FHypergraph {
    /// Validates and canonicalizes a hyperedge list.
    pub fn new(
        copies: Arc<LabeledCopySet>,
        n: usize,
        q: Option<f64>,
        hyperedges: Vec<(Vec<usize>, usize)>,
    ) -> Result<Self> {
        let r = copies.pattern().r();
        let per_set = copies.count();
        let mut list = hyperedges;
        for (verts, idx) in &list {
            if verts.len() != r {
                return Err(Error::domain(format!(
                    "hyperedge {verts:?} does not have {r} vertices"
                )));
            }
            if verts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!(
                    "hyperedge {verts:?} is not strictly increasing"
                )));
            }
            if verts[r - 1] >= n {
                return Err(Error::domain(format!(
                    "hyperedge {verts:?} out of range for n = {n}"
                )));
            }
            if *idx >= per_set {
                return Err(Error::domain(format!("copy index {idx} >= {per_set}")));
            }
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate hyperedge"));
        }
        let mut vertices = Vec::with_capacity(list.len() * r);
        let mut copy_index = Vec::with_capacity(list.len());
        for (verts, idx) in list {
            vertices.extend_from_slice(&verts);
            copy_index.push(idx);
        }
        Ok(FHypergraph {
            n,
            copies,
            q,
            vertices,
            copy_index,
        })
    }

    pub fn empty(copies: Arc<LabeledCopySet>, n: usize) -> Self {
        FHypergraph {
            n,
            copies,
            q: None,
            vertices: Vec::new(),
            copy_index: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.copies.pattern().r()
    }

    pub fn pattern(&self) -> &Pattern {
        self.copies.pattern()
    }

    pub fn copies(&self) -> &Arc<LabeledCopySet> {
        &self.copies
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    /// Number of hyperedges `|E(H)|`.
    pub fn len(&self) -> usize {
        self.copy_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copy_index.is_empty()
    }

    pub fn hyperedge(&self, i: usize) -> (&[usize], usize) {
        let r = self.r();
        (&self.vertices[i * r..(i + 1) * r], self.copy_index[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], usize)> + '_ {
        self.vertices
            .chunks_exact(self.r())
            .zip(self.copy_index.iter().copied())
    }

    /// Global edge set of hyperedge `i`, i.e. the labeled copy transported
    /// onto its vertex tuple.
    pub fn host_edges(&self, i: usize) -> Vec<(usize, usize)> {
        let (verts, idx) = self.hyperedge(i);
        self.copies.representatives()[idx]
            .iter()
            .map(|&(a, b)| (verts[a], verts[b]))
            .collect()
    }

    /// Text form: `n m` then one line `v1 .. vr copy_index` per hyperedge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.len());
        for (verts, idx) in self.iter() {
            for v in verts {
                out.push_str(&v.to_string());
                out.push(' ');
            }
            out.push_str(&idx.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, pattern: &Pattern) -> Result<Self> {
        let copies = Arc::new(labeled_copies(pattern)?);
        let r = pattern.r();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header \"n m\""))?;
        let nums = parse_usizes(hline, header)?;
        if nums.len() != 2 {
            return Err(Error::parse(hline, "header must be \"n m\""));
        }
        let (n, m) = (nums[0], nums[1]);
        let mut list = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let nums = parse_usizes(lineno, line)?;
            if nums.len() != r + 1 {
                return Err(Error::parse(
                    lineno,
                    format!("expected {} fields, got {}", r + 1, nums.len()),
                ));
            }
            list.push((nums[..r].to_vec(), nums[r]));
        }
        if list.len() != m {
            return Err(Error::parse(
                hline,
                format!("header declares {m} hyperedges, found {}", list.len()),
            ));
        }
        Self::new(copies, n, None, list)
    }
}

fn parse_usizes(lineno: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("invalid integer \"{t}\"")))
        })
        .collect()
}

/// Which sampling path [`sample_fgraph_with`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Rank selection when the expected count is below `n ln n`, coin flips otherwise.
    Auto,
    /// Draw `Binomial(N, q)` then that many distinct uniform ranks.
    Sparse,
    /// One Bernoulli(q) flip per potential copy.
    Dense,
}

/// `H_F(n, q)`: each of the `C(n, r) * r!/aut(F)` potential copies of `F`
/// included independently with probability `q`.
pub fn sample_fgraph(pattern: &Pattern, n: usize, q: f64, seed: Seed) -> Result<FHypergraph> {
    let copies = Arc::new(labeled_copies(pattern)?);
    sample_fgraph_with(copies, n, q, seed, SamplingMode::Auto)
}

pub fn sample_fgraph_with(
    copies: Arc<LabeledCopySet>,
    n: usize,
    q: f64,
    seed: Seed,
    mode: SamplingMode,
) -> Result<FHypergraph> {
    check_probability("q", q)?;
    let ranker = CopyRanker::new(copies.pattern(), n)?;
    let total = ranker.total();
    let sparse = match mode {
        SamplingMode::Sparse => true,
        SamplingMode::Dense => false,
        SamplingMode::Auto => (total as f64) * q < (n as f64) * (n as f64).ln(),
    };
    let mut rng = seed.rng();
    let mut ranks: Vec<u64> = if sparse {
        let count = Binomial::new(total, q)
            .map_err(|e| Error::domain(format!("binomial({total}, {q}): {e}")))?
            .sample(&mut rng);
        let len = usize::try_from(total)
            .map_err(|_| Error::capability(format!("{total} potential copies exceed usize")))?;
        index::sample(&mut rng, len, count as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    } else {
        (0..total).filter(|_| rng.gen_bool(q)).collect()
    };
    ranks.sort_unstable();
    let list = ranks
        .into_iter()
        .map(|rank| ranker.unrank(rank))
        .collect::<Result<Vec<_>>>()?;
    FHypergraph::new(copies, n, Some(q), list)
}

/// Support-level coupling to an `r`-uniform hypergraph: one `K_r` hyperedge
/// on every `r`-set that carries at least one copy of `F` in `h`. The
/// returned `q` is `r!/aut(F) * q`, capped at 1.
pub fn couple_to_kr(h: &FHypergraph) -> Result<FHypergraph> {
    let kr = Pattern::complete(h.r())?;
    let copies = Arc::new(labeled_copies(&kr)?);
    let supports: BTreeSet<&[usize]> = h.iter().map(|(verts, _)| verts).collect();
    let q_bar = h
        .q()
        .map(|q| (q * h.pattern().copies_per_set() as f64).min(1.0));
    let list = supports.into_iter().map(|v| (v.to_vec(), 0)).collect();
    FHypergraph::new(copies, h.n(), q_bar, list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Pattern {
        Pattern::complete(3).unwrap()
    }

    #[test]
    fn seeds_are_reproducible_and_streams_differ() {
        let a: Vec<u64> = (0..4)
            .map(|_| 0)
            .scan(Seed::new(7, 1).rng(), |r, _| Some(r.gen()))
            .collect();
        let b: Vec<u64> = (0..4)
            .map(|_| 0)
            .scan(Seed::new(7, 1).rng(), |r, _| Some(r.gen()))
            .collect();
        let c: Vec<u64> = (0..4)
            .map(|_| 0)
            .scan(Seed::new(7, 2).rng(), |r, _| Some(r.gen()))
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_extremes() {
        assert!(sample_gnp(5, 0.0, Seed::new(1, 0))
            .unwrap()
            .edges()
            .is_empty());
        assert_eq!(
            sample_gnp(5, 1.0, Seed::new(1, 0)).unwrap().edges().len(),
            10
        );
        assert!(matches!(
            sample_gnp(5, 1.5, Seed::new(1, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = sample_gnp(50, 0.1, Seed::new(3, 9)).unwrap();
        let b = sample_gnp(50, 0.1, Seed::new(3, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fgraph_full_inclusion() {
        assert_eq!(
            sample_fgraph(&k3(), 5, 1.0, Seed::new(0, 0)).unwrap().len(),
            10
        );
        assert_eq!(
            sample_fgraph(&Pattern::diamond(), 4, 1.0, Seed::new(0, 0))
                .unwrap()
                .len(),
            6
        );
        let copies = Arc::new(labeled_copies(&k3()).unwrap());
        let sparse =
            sample_fgraph_with(copies, 5, 1.0, Seed::new(0, 0), SamplingMode::Sparse).unwrap();
        assert_eq!(sparse.len(), 10);
    }

    #[test]
    fn fgraph_rejects_small_n() {
        assert!(matches!(
            sample_fgraph(&k3(), 2, 0.5, Seed::new(0, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(unrank_copy(&k3(), 5, 0).unwrap(), (vec![0, 1, 2], 0));
        assert_eq!(
            unrank_copy(&Pattern::diamond(), 4, 5).unwrap(),
            (vec![0, 1, 2, 3], 5)
        );
        assert!(unrank_copy(&Pattern::diamond(), 4, 6).is_err());
    }

    #[test]
    fn rank_roundtrip_diamond_n6() {
        let d = Pattern::diamond();
        let ranker = CopyRanker::new(&d, 6).unwrap();
        assert_eq!(ranker.total(), 90);
        for rank in 0..90 {
            let (s, i) = ranker.unrank(rank).unwrap();
            assert_eq!(ranker.rank(&s, i).unwrap(), rank);
        }
    }

    #[test]
    fn coupling_deduplicates_supports() {
        let copies = Arc::new(labeled_copies(&Pattern::diamond()).unwrap());
        let h = FHypergraph::new(
            copies.clone(),
            6,
            None,
            vec![(vec![0, 1, 2, 3], 0), (vec![0, 1, 2, 3], 4)],
        )
        .unwrap();
        let k = couple_to_kr(&h).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k.hyperedge(0), (&[0usize, 1, 2, 3][..], 0));
        assert!(couple_to_kr(&FHypergraph::empty(copies, 6))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn hypergraph_rejects_bad_input() {
        let copies = Arc::new(labeled_copies(&k3()).unwrap());
        assert!(FHypergraph::new(copies.clone(), 5, None, vec![(vec![0, 2, 1], 0)]).is_err());
        assert!(FHypergraph::new(copies.clone(), 5, None, vec![(vec![0, 1, 2], 1)]).is_err());
        assert!(FHypergraph::new(copies.clone(), 5, None, vec![(vec![0, 1, 5], 0)]).is_err());
        assert!(FHypergraph::new(
            copies,
            5,
            None,
            vec![(vec![0, 1, 2], 0), (vec![0, 1, 2], 0)]
        )
        .is_err());
    }

    #[test]
    fn text_roundtrip() {
        let d = Pattern::diamond();
        let h = sample_fgraph(&d, 8, 0.05, Seed::new(11, 3)).unwrap();
        let back = FHypergraph::from_text(&h.to_text(), &d).unwrap();
        assert_eq!(back.to_text(), h.to_text());
        assert!(matches!(
            FHypergraph::from_text("5 1\n0 1 2\n", &d),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn host_text_roundtrip() {
        let g = sample_gnp(12, 0.4, Seed::new(3, 1)).unwrap();
        assert_eq!(HostGraph::parse(&g.to_text()).unwrap(), g);
        assert!(matches!(
            HostGraph::parse("3 1\n0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(HostGraph::parse("3 2\n0 1\n").is_err());
    }
}
