//! Exact and heuristic minimization of the monochromatic count `H(σ)`.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{FHypergraph, Seed};
use crate::spin::SpinConfig;
use crate::subgraph::is_monochromatic;

/// Largest `n` the exhaustive Gray-code scan accepts.
pub const EXACT_MAX_N: usize = 26;

/// Hyperedge supports with per-vertex incidence lists, the shared read-only
/// view every optimizer works on.
#[derive(Debug, Clone)]
pub struct Instance {
    n: usize,
    r: usize,
    supports: Vec<usize>,
    incidence: Vec<Vec<u32>>,
}

impl Instance {
    pub fn new(h: &FHypergraph) -> Self {
        let (n, r) = (h.n(), h.r());
        let mut supports = Vec::with_capacity(h.len() * r);
        let mut incidence = vec![Vec::new(); n];
        for (i, (verts, _)) in h.iter().enumerate() {
            supports.extend_from_slice(verts);
            for &v in verts {
                incidence[v].push(i as u32);
            }
        }
        Instance {
            n,
            r,
            supports,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        if self.r == 0 {
            0
        } else {
            self.supports.len() / self.r
        }
    }

    #[inline]
    fn support(&self, e: usize) -> &[usize] {
        &self.supports[e * self.r..(e + 1) * self.r]
    }

    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incidence[v]
    }

    /// Full recomputation of `H(σ)`.
    pub fn hamiltonian(&self, sigma: &SpinConfig) -> u64 {
        (0..self.edge_count())
            .filter(|&e| is_monochromatic(self.support(e), sigma))
            .count() as u64
    }

    /// `H(σ with v flipped) − H(σ)` from `v`'s incident hyperedges only.
    pub fn flip_delta(&self, sigma: &SpinConfig, v: usize) -> i64 {
        let sv = sigma.get(v);
        let mut delta = 0i64;
        for &e in &self.incidence[v] {
            let support = self.support(e as usize);
            let others_match = support.iter().all(|&u| u == v || sigma.get(u) == sv);
            let others_opposite = support.iter().all(|&u| u == v || sigma.get(u) == -sv);
            if others_match {
                delta -= 1;
            } else if others_opposite {
                delta += 1;
            }
        }
        delta
    }

    fn check_len(&self, sigma: &SpinConfig) -> Result<()> {
        if sigma.len() != self.n {
            return Err(Error::domain(format!(
                "spin configuration has length {}, expected {}",
                sigma.len(),
                self.n
            )));
        }
        Ok(())
    }
}

pub fn flip_delta(inst: &Instance, sigma: &SpinConfig, v: usize) -> Result<i64> {
    inst.check_len(sigma)?;
    if v >= inst.n {
        return Err(Error::domain(format!("vertex {v} out of range")));
    }
    Ok(inst.flip_delta(sigma, v))
}

/// Cut value `|E| − H(σ)`: hyperedges meeting both sides.
pub fn cut_value(h: &FHypergraph, sigma: &SpinConfig) -> Result<u64> {
    Ok(h.len() as u64 - crate::subgraph::hamiltonian(h, sigma)?)
}

/// Mutable spin state with per-hyperedge plus counts, so a flip costs
/// O(deg(v)).
#[derive(Debug, Clone)]
struct SpinState<'a> {
    inst: &'a Instance,
    sigma: SpinConfig,
    plus: Vec<u8>,
    energy: u64,
}

impl<'a> SpinState<'a> {
    fn new(inst: &'a Instance, sigma: SpinConfig) -> Self {
        let r = inst.r as u8;
        let plus: Vec<u8> = (0..inst.edge_count())
            .map(|e| {
                inst.support(e)
                    .iter()
                    .filter(|&&v| sigma.get(v) == 1)
                    .count() as u8
            })
            .collect();
        let energy = plus.iter().filter(|&&p| p == 0 || p == r).count() as u64;
        SpinState {
            inst,
            sigma,
            plus,
            energy,
        }
    }

    #[inline]
    fn delta(&self, v: usize) -> i64 {
        let r = self.inst.r as u8;
        let up = self.sigma.get(v) == -1;
        let mut delta = 0i64;
        for &e in &self.inst.incidence[v] {
            let p = self.plus[e as usize];
            let q = if up { p + 1 } else { p - 1 };
            delta += (q == 0 || q == r) as i64 - (p == 0 || p == r) as i64;
        }
        delta
    }

    #[inline]
    fn flip(&mut self, v: usize) {
        let r = self.inst.r as u8;
        let up = self.sigma.get(v) == -1;
        for &e in &self.inst.incidence[v] {
            let p = &mut self.plus[e as usize];
            let before = (*p == 0 || *p == r) as i64;
            if up {
                *p += 1;
            } else {
                *p -= 1;
            }
            let after = (*p == 0 || *p == r) as i64;
            self.energy = (self.energy as i64 + after - before) as u64;
        }
        self.sigma.flip(v);
    }
}

/// Allowed plus counts for a magnetization-constrained search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaConstraint {
    plus_counts: Vec<usize>,
}

impl SigmaConstraint {
    /// The balanced slice `S_0` (`n` even).
    pub fn balanced(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "balanced slice needs even n, got {n}"
            )));
        }
        Ok(SigmaConstraint {
            plus_counts: vec![n / 2],
        })
    }

    /// All slices with `|σ̄| ≤ h0`.
    pub fn band(n: usize, h0: f64) -> Result<Self> {
        let plus_counts: Vec<usize> = (0..=n)
            .filter(|&k| ((2 * k) as f64 - n as f64).abs() <= h0 * n as f64 + 1e-12)
            .collect();
        if plus_counts.is_empty() {
            return Err(Error::domain(format!(
                "no magnetization within {h0} for n = {n}"
            )));
        }
        Ok(SigmaConstraint { plus_counts })
    }

    pub fn from_plus_counts(n: usize, mut plus_counts: Vec<usize>) -> Result<Self> {
        plus_counts.sort_unstable();
        plus_counts.dedup();
        if plus_counts.is_empty() || plus_counts.iter().any(|&k| k > n) {
            return Err(Error::domain(
                "plus counts must be a non-empty subset of 0..=n",
            ));
        }
        Ok(SigmaConstraint { plus_counts })
    }

    pub fn plus_counts(&self) -> &[usize] {
        &self.plus_counts
    }

    pub fn allows(&self, plus: usize) -> bool {
        self.plus_counts.binary_search(&plus).is_ok()
    }

    fn symmetric(&self, n: usize) -> bool {
        self.plus_counts.iter().all(|&k| self.allows(n - k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Anneal,
    SwapAnneal,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Anneal => "anneal",
            Method::SwapAnneal => "swap-anneal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptResult {
    pub best_sigma: SpinConfig,
    pub best_value: u64,
    pub method: Method,
    pub evaluations: u64,
    pub wall_time: Duration,
    /// True only when `best_value` is a proven optimum.
    pub certified: bool,
}

/// Global minimum of `H` by a Gray-code walk over `{−1,1}^n`. The last spin
/// is pinned to `+1` whenever the constraint is invariant under `σ → −σ`.
pub fn minimize_exact(h: &FHypergraph, constraint: Option<&SigmaConstraint>) -> Result<OptResult> {
    let inst = Instance::new(h);
    if inst.n > EXACT_MAX_N {
        return Err(Error::capability(format!(
            "exact minimization limited to n <= {EXACT_MAX_N}, got {}",
            inst.n
        )));
    }
    gray_scan(&inst, constraint)
}

fn gray_scan(inst: &Instance, constraint: Option<&SigmaConstraint>) -> Result<OptResult> {
    let start = Instant::now();
    let n = inst.n;
    if n == 0 {
        return Err(Error::domain("empty vertex set"));
    }
    let pinned = constraint.is_none_or(|c| c.symmetric(n));
    let free = if pinned { n - 1 } else { n };

    // start: all -1 with the pinned spin at +1
    let mut init = vec![-1i8; n];
    if pinned {
        init[n - 1] = 1;
    }
    let mut state = SpinState::new(inst, SpinConfig::from_signs(&init)?);
    let allowed = |s: &SpinState<'_>| constraint.is_none_or(|c| c.allows(s.sigma.plus_count()));

    let mut best: Option<(u64, SpinConfig)> = None;
    if allowed(&state) {
        best = Some((state.energy, state.sigma.clone()));
    }
    let steps: u64 = 1u64 << free;
    for i in 1..steps {
        let v = i.trailing_zeros() as usize;
        state.flip(v);
        if allowed(&state) && best.as_ref().is_none_or(|(b, _)| state.energy < *b) {
            best = Some((state.energy, state.sigma.clone()));
        }
    }
    let (best_value, best_sigma) =
        best.ok_or_else(|| Error::domain("constraint admits no configuration"))?;
    let audited = inst.hamiltonian(&best_sigma);
    assert_eq!(
        audited, best_value,
        "Gray-code energy drifted from recomputation"
    );
    Ok(OptResult {
        best_value: audited,
        best_sigma,
        method: Method::Exact,
        evaluations: steps,
        wall_time: start.elapsed(),
        certified: true,
    })
}

/// Goodman's lower bound on monochromatic triangles in a 2-coloring of the
/// edges of `K_n`.
pub fn goodman_bound(n: u64) -> u64 {
    let u = n / 4;
    match n % 4 {
        0 | 2 => {
            let u = n / 2;
            u * u.saturating_sub(1) * u.saturating_sub(2) / 3
        }
        1 => 2 * u * u.saturating_sub(1) * (4 * u + 1) / 3,
        _ => 2 * u * (u + 1) * (4 * u).saturating_sub(1) / 3,
    }
}

/// Exact minimum number of monochromatic triangles over 2-colorings of the
/// edges of `K_n`: spins live on the `C(n, 2)` edges and every triangle is a
/// hyperedge on its three edges.
pub fn min_monochromatic_triangles_edge_coloring(n: usize) -> Result<u64> {
    let m = n * n.saturating_sub(1) / 2;
    if m > 28 {
        return Err(Error::capability(format!(
            "edge-coloring scan over 2^{m} colorings refused"
        )));
    }
    let edge_id = |a: usize, b: usize| -> usize {
        let (a, b) = (a.min(b), a.max(b));
        // index of (a, b) in lexicographic order of pairs
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    let mut supports = Vec::new();
    let mut incidence = vec![Vec::new(); m];
    let mut t = 0u32;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut tri = [edge_id(a, b), edge_id(a, c), edge_id(b, c)];
                tri.sort_unstable();
                for &e in &tri {
                    incidence[e].push(t);
                }
                supports.extend_from_slice(&tri);
                t += 1;
            }
        }
    }
    let inst = Instance {
        n: m,
        r: 3,
        supports,
        incidence,
    };
    Ok(gray_scan(&inst, None)?.best_value)
}

/// Simulated-annealing parameters. `steps_per_restart` and
/// `initial_temperature` default to `200·n` and twice the mean `|ΔH|` of 100
/// random flips.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub restarts: usize,
    pub steps_per_restart: Option<usize>,
    pub initial_temperature: Option<f64>,
    pub cooling_ratio: f64,
    pub seed: Seed,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            restarts: 16,
            steps_per_restart: None,
            initial_temperature: None,
            cooling_ratio: 0.999,
            seed: Seed::new(0, 0),
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: Seed) -> Self {
        AnnealConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cooling_ratio > 0.0 && self.cooling_ratio < 1.0) {
            return Err(Error::domain(format!(
                "cooling ratio {} not in (0, 1)",
                self.cooling_ratio
            )));
        }
        if self.steps_per_restart == Some(0) {
            return Err(Error::domain("steps per restart must be >= 1"));
        }
        if self.restarts == 0 {
            return Err(Error::domain("restarts must be >= 1"));
        }
        Ok(())
    }
}

fn auto_temperature(inst: &Instance, seed: Seed) -> f64 {
    let mut rng = seed.derive(u64::MAX).rng();
    let mut total = 0i64;
    for _ in 0..100 {
        let sigma = SpinConfig::random(inst.n, &mut rng);
        let v = rng.gen_range(0..inst.n);
        total += inst.flip_delta(&sigma, v).abs();
    }
    let mean = total as f64 / 100.0;
    if mean > 0.0 {
        2.0 * mean
    } else {
        1.0
    }
}

struct RestartOutcome {
    value: u64,
    sigma: SpinConfig,
    evaluations: u64,
}

fn anneal_restart(
    inst: &Instance,
    cfg: &AnnealConfig,
    constraint: Option<&SigmaConstraint>,
    t0: f64,
    steps: usize,
    restart: usize,
) -> RestartOutcome {
    let mut rng = cfg.seed.derive(restart as u64).rng();
    let n = inst.n;
    let initial = match constraint {
        None => SpinConfig::random(n, &mut rng),
        Some(c) => {
            let counts = c.plus_counts();
            let k = counts[rng.gen_range(0..counts.len())];
            SpinConfig::random_with_plus(n, k, &mut rng)
        }
    };
    let mut state = SpinState::new(inst, initial);
    let mut best_value = state.energy;
    let mut best_sigma = state.sigma.clone();
    let mut temperature = t0;
    let mut evaluations = 0u64;

    // side lists for swap moves
    let (mut plus_list, mut minus_list): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&v| state.sigma.get(v) == 1);
    let swap_mode = constraint.is_some() && !plus_list.is_empty() && !minus_list.is_empty();

    for _ in 0..steps {
        if best_value == 0 {
            break;
        }
        evaluations += 1;
        if swap_mode {
            let i = rng.gen_range(0..plus_list.len());
            let j = rng.gen_range(0..minus_list.len());
            let (u, w) = (plus_list[i], minus_list[j]);
            let d1 = state.delta(u);
            state.flip(u);
            let d2 = state.delta(w);
            let delta = d1 + d2;
            if delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temperature).exp() {
                state.flip(w);
                plus_list[i] = w;
                minus_list[j] = u;
            } else {
                state.flip(u);
            }
        } else {
            let v = rng.gen_range(0..n);
            let delta = state.delta(v);
            if delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temperature).exp() {
                state.flip(v);
            }
        }
        if state.energy < best_value {
            best_value = state.energy;
            best_sigma.clone_from(&state.sigma);
        }
        temperature *= cfg.cooling_ratio;
    }
    RestartOutcome {
        value: best_value,
        sigma: best_sigma,
        evaluations,
    }
}

/// Best-of-restarts simulated annealing. Without a constraint moves are
/// single-spin flips; with one, moves swap a `+` and a `−` spin so the
/// magnetization never changes. The result is an upper bound on the
/// (constrained) minimum; it is certified only when that bound is 0.
pub fn minimize_anneal(
    h: &FHypergraph,
    cfg: &AnnealConfig,
    constraint: Option<&SigmaConstraint>,
) -> Result<OptResult> {
    cfg.validate()?;
    let start = Instant::now();
    let inst = Instance::new(h);
    let n = inst.n;
    if n == 0 {
        return Err(Error::domain("empty vertex set"));
    }
    let method = if constraint.is_some() {
        Method::SwapAnneal
    } else {
        Method::Anneal
    };
    if inst.edge_count() == 0 {
        let sigma = match constraint {
            None => SpinConfig::all_plus(n),
            Some(c) => SpinConfig::from_plus_set(n, &(0..c.plus_counts()[0]).collect::<Vec<_>>()),
        };
        return Ok(OptResult {
            best_sigma: sigma,
            best_value: 0,
            method,
            evaluations: 0,
            wall_time: start.elapsed(),
            certified: true,
        });
    }
    let steps = cfg.steps_per_restart.unwrap_or(200 * n);
    let t0 = cfg
        .initial_temperature
        .unwrap_or_else(|| auto_temperature(&inst, cfg.seed));

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| anneal_restart(&inst, cfg, constraint, t0, steps, k))
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .into_iter()
        .min_by(|a, b| a.value.cmp(&b.value).then_with(|| a.sigma.cmp(&b.sigma)))
        .expect("at least one restart");
    // audit against a from-scratch evaluation
    let audited = inst.hamiltonian(&best.sigma);
    assert_eq!(
        audited, best.value,
        "incremental energy drifted from recomputation"
    );
    Ok(OptResult {
        best_sigma: best.sigma,
        best_value: audited,
        method,
        evaluations,
        wall_time: start.elapsed(),
        certified: audited == 0,
    })
}
