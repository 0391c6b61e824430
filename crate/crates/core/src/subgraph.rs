//! Copies of `F` inside a host graph, the monochromatic-count Hamiltonian,
//! and the spin-polynomial form of that Hamiltonian.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{factorial, permutations};
use crate::error::{Error, Result};
use crate::models::{FHypergraph, HostGraph};
use crate::pattern::{labeled_copies, LabeledCopySet, Pattern};
use crate::spin::SpinConfig;

/// Backtracking is refused when the estimated number of partial embeddings
/// exceeds this.
pub const EMBEDDING_WORK_LIMIT: f64 = 5e9;

/// The distinct subgraphs of a host graph isomorphic to `F`. Each copy is a
/// sorted vertex tuple plus the index of its labeled copy on that tuple.
#[derive(Debug, Clone)]
pub struct CopyList {
    n: usize,
    copies: Arc<LabeledCopySet>,
    entries: Vec<(Vec<usize>, usize)>,
    per_vertex_index: Vec<Vec<usize>>,
}

impl CopyList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pattern(&self) -> &Pattern {
        self.copies.pattern()
    }

    pub fn entries(&self) -> &[(Vec<usize>, usize)] {
        &self.entries
    }

    /// Indices of the copies that contain vertex `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.per_vertex_index[v]
    }

    /// Host-graph edges of copy `i`.
    pub fn host_edges(&self, i: usize) -> Vec<(usize, usize)> {
        let (verts, idx) = &self.entries[i];
        self.copies.representatives()[*idx]
            .iter()
            .map(|&(a, b)| (verts[a], verts[b]))
            .collect()
    }

    /// The same copies viewed as an F-graph on the host's vertex set.
    pub fn to_hypergraph(&self) -> FHypergraph {
        FHypergraph::new(self.copies.clone(), self.n, None, self.entries.clone())
            .expect("copy list entries are canonical")
    }
}

/// Orders pattern vertices so each one after the first of its component has
/// an already-placed neighbor, and records those earlier neighbors.
fn embedding_order(p: &Pattern) -> (Vec<usize>, Vec<Vec<usize>>) {
    let r = p.r();
    let mut adj = vec![Vec::new(); r];
    for &(u, v) in p.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut order = Vec::with_capacity(r);
    let mut placed = vec![false; r];
    while order.len() < r {
        // next: unplaced vertex with most placed neighbors, else highest degree
        let next = (0..r)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = adj[v].iter().filter(|&&w| placed[w]).count();
                (back, adj[v].len(), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex exists");
        placed[next] = true;
        order.push(next);
    }
    let position: Vec<usize> = {
        let mut pos = vec![0; r];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            adj[v]
                .iter()
                .copied()
                .filter(|&w| position[w] < i)
                .collect()
        })
        .collect();
    (order, back)
}

/// Upper estimate of the backtracking work for embedding `p` into `host`.
pub fn embedding_work_estimate(host: &HostGraph, p: &Pattern) -> f64 {
    let (_, back) = embedding_order(p);
    let n = host.n() as f64;
    let delta = host.max_degree() as f64;
    back.iter()
        .map(|b| if b.is_empty() { n } else { delta })
        .product()
}

/// All distinct copies of `F` in `host`, by backtracking over injective
/// homomorphisms. Each copy is reached `aut(F)` times and collapsed.
pub fn enumerate_copies(host: &HostGraph, pattern: &Pattern) -> Result<CopyList> {
    let work = embedding_work_estimate(host, pattern);
    if work > EMBEDDING_WORK_LIMIT {
        return Err(Error::capability(format!(
            "copy enumeration needs about {work:.3e} partial embeddings (limit {EMBEDDING_WORK_LIMIT:.0e})"
        )));
    }
    let copies = Arc::new(labeled_copies(pattern)?);
    let (order, back) = embedding_order(pattern);
    let r = pattern.r();
    let mut image = vec![usize::MAX; r];
    let mut used = vec![false; host.n()];
    let mut found: Vec<(Vec<usize>, usize)> = Vec::new();

    struct Search<'a> {
        host: &'a HostGraph,
        copies: &'a LabeledCopySet,
        order: &'a [usize],
        back: &'a [Vec<usize>],
    }

    fn record(s: &Search<'_>, image: &[usize], found: &mut Vec<(Vec<usize>, usize)>) {
        let mut verts = image.to_vec();
        verts.sort_unstable();
        let local = |x: usize| verts.binary_search(&x).expect("image vertex");
        let mut edges: Vec<(usize, usize)> = s
            .copies
            .pattern()
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (local(image[a]), local(image[b]));
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        let idx = s
            .copies
            .index_of(&edges)
            .expect("relabeled F is a labeled copy");
        found.push((verts, idx));
    }

    fn extend(
        s: &Search<'_>,
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        found: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if depth == s.order.len() {
            record(s, image, found);
            return;
        }
        let fv = s.order[depth];
        let back = &s.back[depth];
        let candidates: Vec<usize> = match back.first() {
            Some(&anchor) => s.host.neighbors(image[anchor]).to_vec(),
            None => (0..s.host.n()).collect(),
        };
        for hv in candidates {
            if used[hv] || !back.iter().all(|&w| s.host.has_edge(image[w], hv)) {
                continue;
            }
            image[fv] = hv;
            used[hv] = true;
            extend(s, depth + 1, image, used, found);
            used[hv] = false;
        }
        image[fv] = usize::MAX;
    }

    let search = Search {
        host,
        copies: &copies,
        order: &order,
        back: &back,
    };
    extend(&search, 0, &mut image, &mut used, &mut found);
    found.sort_unstable();
    found.dedup();

    let mut per_vertex_index = vec![Vec::new(); host.n()];
    for (i, (verts, _)) in found.iter().enumerate() {
        for &v in verts {
            per_vertex_index[v].push(i);
        }
    }
    Ok(CopyList {
        n: host.n(),
        copies,
        entries: found,
        per_vertex_index,
    })
}

fn check_len(n: usize, sigma: &SpinConfig) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::domain(format!(
            "spin configuration has length {}, expected {n}",
            sigma.len()
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn is_monochromatic(verts: &[usize], sigma: &SpinConfig) -> bool {
    let first = sigma.get(verts[0]);
    verts[1..].iter().all(|&v| sigma.get(v) == first)
}

/// `H(σ)`: the number of hyperedges whose vertices all carry the same spin.
pub fn hamiltonian(h: &FHypergraph, sigma: &SpinConfig) -> Result<u64> {
    check_len(h.n(), sigma)?;
    Ok(h.iter()
        .filter(|(verts, _)| is_monochromatic(verts, sigma))
        .count() as u64)
}

/// Monochromatic copies of `F` in a host graph under `σ`.
pub fn hamiltonian_graph(copies: &CopyList, sigma: &SpinConfig) -> Result<u64> {
    check_len(copies.n(), sigma)?;
    Ok(copies
        .entries()
        .iter()
        .filter(|(verts, _)| is_monochromatic(verts, sigma))
        .count() as u64)
}

/// The symmetric polynomial `f(x) = Σ_{m≥1} Σ_{|R|=2m} Π_{j∈R} x_j`,
/// evaluated through its closed form `2^{r-1}·1{all equal} − 1`.
pub fn f_poly(x: &[i8]) -> Result<i64> {
    if let Some(bad) = x.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::domain(format!(
            "f is defined on ±1 inputs, got {bad}"
        )));
    }
    if x.is_empty() {
        return Err(Error::domain("f needs at least one argument"));
    }
    let r = x.len() as u32;
    let all_equal = x.iter().all(|&s| s == x[0]);
    Ok(if all_equal { (1i64 << (r - 1)) - 1 } else { -1 })
}

/// `f` by its defining sum over even-size index subsets of size at least 2.
pub fn f_poly_subset_sum(x: &[i8]) -> i64 {
    let r = x.len();
    let mut total = 0i64;
    for mask in 0u32..(1u32 << r) {
        let size = mask.count_ones();
        if size < 2 || size % 2 == 1 {
            continue;
        }
        let prod: i64 = (0..r)
            .filter(|&j| mask >> j & 1 == 1)
            .map(|j| x[j] as i64)
            .product();
        total += prod;
    }
    total
}

/// `Σ_{v ∈ [n]^r} f(σ_{v_1}, …, σ_{v_r})` via the magnetization closed form
/// `n^r((1+σ̄)^r + (1−σ̄)^r − 2)/2 = ((2n₊)^r + (2n₋)^r − 2n^r)/2`.
pub fn f_tuple_sum(sigma: &SpinConfig, r: u32) -> Result<BigInt> {
    if r < 2 {
        return Err(Error::domain("f_tuple_sum needs r >= 2"));
    }
    let n = sigma.len() as u64;
    let plus = sigma.plus_count() as u64;
    let two_plus = BigInt::from(2 * plus).pow(r);
    let two_minus = BigInt::from(2 * (n - plus)).pow(r);
    let n_r = BigInt::from(n).pow(r);
    Ok((two_plus + two_minus - n_r * 2) / 2)
}

/// Right-hand side of the spin-polynomial identity for `H(σ)`:
///
/// `1/(aut(F)·2^{r−1}·r!) · Σ_{v distinct} Σ_{ρ ∈ S_r} 1{F(v_ρ) ∈ E} f(σ_v) + |E|/2^{r−1}`.
///
/// The indicator sum is realized by visiting, for every hyperedge `e`, each
/// ordering `w` of its vertex set with `F(w) = e`, and then every `ρ` with
/// `v = w∘ρ⁻¹`. `f` is evaluated by its subset-sum definition.
pub fn spin_form_rhs(h: &FHypergraph, sigma: &SpinConfig) -> Result<BigRational> {
    check_len(h.n(), sigma)?;
    let r = h.r();
    let pattern = h.pattern();
    let perms = permutations(r);
    let inverse: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; r];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi] = i;
            }
            inv
        })
        .collect();

    let mut indicator_sum = BigInt::zero();
    let mut w = vec![0usize; r];
    let mut v = vec![0usize; r];
    let mut spins = vec![0i8; r];
    for i in 0..h.len() {
        let (verts, _) = h.hyperedge(i);
        let mut target = h.host_edges(i);
        target.sort_unstable();
        for order in &perms {
            for j in 0..r {
                w[j] = verts[order[j]];
            }
            // F(w): F's edge (a, b) becomes (w_a, w_b)
            let mut transported: Vec<(usize, usize)> = pattern
                .edges()
                .iter()
                .map(|&(a, b)| (w[a].min(w[b]), w[a].max(w[b])))
                .collect();
            transported.sort_unstable();
            if transported != target {
                continue;
            }
            let mut local = 0i64;
            for inv in &inverse {
                for j in 0..r {
                    v[j] = w[inv[j]];
                    spins[j] = sigma.get(v[j]);
                }
                local += f_poly_subset_sum(&spins);
            }
            indicator_sum += local;
        }
    }

    let two_pow = BigInt::one() << (r - 1);
    let denom = BigInt::from(pattern.aut_count())
        * &two_pow
        * BigInt::from(factorial(r as u64).expect("r <= 10"));
    Ok(BigRational::new(indicator_sum, denom) + BigRational::new(BigInt::from(h.len()), two_pow))
}
