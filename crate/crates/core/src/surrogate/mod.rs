//! Gaussian surrogate for the minimum monochromatic count: the field
//! `U_n`, its normalization `W_n`, magnetization-constrained maxima
//! `T_n^α`, the Monte Carlo estimate of `V_n`, tail bounds, and the
//! leading-order predictor for `m(F, c)`.

mod exact;
mod field;
mod tails;

pub use exact::{
    balanced_pair_count, covariance_balanced_form, exact_covariance, ln_biguint, log_binomial,
    pair_count_stirling_log, stirling_log_binomial,
};
pub use field::{g_factor, w_norm, GaussianField, MAX_FIELD_ENTRIES};
pub use tails::{gauss_tail_bounds, normal_pdf, slepian_joint_bound};

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::models::Seed;
use crate::optimizer::SigmaConstraint;
use crate::pattern::Pattern;
use crate::spin::SpinConfig;
use field::{sqrt_factorial, SupportSums};

/// Exact slice enumeration is refused above this many configurations.
pub const EXACT_SLICE_LIMIT: u128 = 10_000_000;

/// Constants of the surrogate for a pattern and scale `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateConstants {
    /// `−1/(aut(F)·2^{r−1})`
    pub kappa1: f64,
    /// `1/(2^{2r−2}·r!·aut(F))`
    pub kappa2: f64,
    /// `c^s`
    pub d: f64,
    /// `c^s/(2^{r−1}·aut(F)) = |κ₁|·d`
    pub kappa: f64,
}

impl SurrogateConstants {
    pub fn new(pattern: &Pattern, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::domain(format!("c must be positive, got {c}")));
        }
        let r = pattern.r() as i32;
        let aut = pattern.aut_count() as f64;
        let d = c.powi(pattern.s() as i32);
        let half = 2f64.powi(r - 1);
        let r_fact = factorial(pattern.r() as u64).expect("r <= 10") as f64;
        Ok(SurrogateConstants {
            kappa1: -1.0 / (aut * half),
            kappa2: 1.0 / (half * half * r_fact * aut),
            d,
            kappa: d / (half * aut),
        })
    }
}

/// Leading-order predictor `κ + √(2 ln 2 · κ)` for `m(F, c)`; the `o_r(1)`
/// and `o_c(c^{s/2})` corrections are dropped.
pub fn predictor_m(pattern: &Pattern, c: f64) -> Result<f64> {
    let kappa = SurrogateConstants::new(pattern, c)?.kappa;
    Ok(kappa + (2.0 * std::f64::consts::LN_2 * kappa).sqrt())
}

/// `κ − √(2 ln 2 · κ)`. A uniformly random bipartition has `E[H]/n = κ`, so
/// the minimum density cannot exceed `κ`; this is the opposite-sign reading
/// of [`predictor_m`], reported next to it for comparison.
pub fn predictor_m_lower(pattern: &Pattern, c: f64) -> Result<f64> {
    let kappa = SurrogateConstants::new(pattern, c)?.kappa;
    Ok(kappa - (2.0 * std::f64::consts::LN_2 * kappa).sqrt())
}

/// `α = κ₁·((1+h)^r + (1−h)^r − 2)/2`, the constraint value of a slice with
/// magnetization `h`. Never positive.
pub fn alpha_for_magnetization(kappa1: f64, h: f64, r: usize) -> f64 {
    let r = r as i32;
    // + 0.0 turns −0 into 0
    kappa1 * ((1.0 + h).powi(r) + (1.0 - h).powi(r) - 2.0) / 2.0 + 0.0
}

/// How maxima over a slice are found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMode {
    Exact,
    SwapAnneal(SwapAnnealConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapAnnealConfig {
    pub restarts: usize,
    /// Swap proposals per restart; `None` means `400·n`.
    pub steps: Option<usize>,
    pub seed: Seed,
}

impl Default for SwapAnnealConfig {
    fn default() -> Self {
        SwapAnnealConfig {
            restarts: 4,
            steps: None,
            seed: Seed::new(0, 0),
        }
    }
}

/// Maximum of `U_n` over one slice `S_{2k−n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceMax {
    pub plus_count: usize,
    pub magnetization: Ratio<i64>,
    pub max_u: f64,
    pub max_w: f64,
    pub argmax: SpinConfig,
    /// True when the slice was enumerated exhaustively.
    pub exact: bool,
}

fn pair_sum_to_u(sums: &SupportSums, pair: f64, r: usize) -> f64 {
    sqrt_factorial(r) * ((1u64 << (r - 1)) as f64 * pair - sums.total())
}

fn slice_max_with(
    field: &GaussianField,
    sums: &SupportSums,
    plus: usize,
    mode: &SearchMode,
    tag: u64,
) -> Result<SliceMax> {
    let (n, r) = (field.n(), field.r());
    if plus > n {
        return Err(Error::domain(format!("plus count {plus} exceeds n = {n}")));
    }
    // U(σ) = U(−σ): search the smaller side and mirror
    let k = plus.min(n - plus);
    let (pair, plus_set, exact) = match mode {
        SearchMode::Exact => {
            let size = binomial(n as u64, k as u64).unwrap_or(u128::MAX);
            if size > EXACT_SLICE_LIMIT {
                return Err(Error::capability(format!(
                    "exact slice search over C({n},{k}) = {size} configurations exceeds {EXACT_SLICE_LIMIT}"
                )));
            }
            let (pair, set) = sums.max_pair_sum(k);
            (pair, set, true)
        }
        SearchMode::SwapAnneal(cfg) => {
            let (pair, set) = swap_anneal_pair_sum(sums, n, k, cfg, tag);
            (pair, set, false)
        }
    };
    let mut argmax = SpinConfig::from_plus_set(n, &plus_set);
    if k != plus {
        argmax = argmax.negated();
    }
    let max_u = pair_sum_to_u(sums, pair, r);
    Ok(SliceMax {
        plus_count: plus,
        magnetization: argmax.magnetization(),
        max_u,
        max_w: w_norm(max_u, n, r),
        argmax,
        exact,
    })
}

/// Maximum of `U_n` over configurations with exactly `plus` spins up.
pub fn slice_max(field: &GaussianField, plus: usize, mode: &SearchMode) -> Result<SliceMax> {
    let sums = SupportSums::new(field)?;
    slice_max_with(field, &sums, plus, mode, plus as u64)
}

/// Per-slice maxima of `W_n` over every slice with `|σ̄| ≤ h0`.
pub fn max_w_balanced(field: &GaussianField, h0: f64, mode: &SearchMode) -> Result<Vec<SliceMax>> {
    let sums = SupportSums::new(field)?;
    let band = SigmaConstraint::band(field.n(), h0)?;
    band.plus_counts()
        .iter()
        .map(|&k| slice_max_with(field, &sums, k, mode, k as u64))
        .collect()
}

fn swap_anneal_pair_sum(
    sums: &SupportSums,
    n: usize,
    plus: usize,
    cfg: &SwapAnnealConfig,
    tag: u64,
) -> (f64, Vec<usize>) {
    let all: Vec<usize> = (0..n).collect();
    if plus == 0 || plus == n {
        let set = if plus == 0 { Vec::new() } else { all };
        return (sums.total(), set);
    }
    let steps = cfg.steps.unwrap_or(400 * n);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for restart in 0..cfg.restarts.max(1) {
        let mut rng = cfg
            .seed
            .derive(tag.wrapping_mul(1_000_003).wrapping_add(restart as u64))
            .rng();
        let start = SpinConfig::random_with_plus(n, plus, &mut rng);
        let mut p_side = start.plus_vertices();
        let mut m_side: Vec<usize> = (0..n).filter(|&v| start.get(v) == -1).collect();
        let side_sum = |side: &[usize]| -> f64 {
            let mut acc = 0.0;
            for (i, &v) in side.iter().enumerate() {
                acc += sums.gain(v, &side[..i]);
            }
            acc
        };
        let mut current = side_sum(&p_side) + side_sum(&m_side);
        let mut scratch_p = Vec::with_capacity(n);
        let mut scratch_m = Vec::with_capacity(n);
        let mut propose = |p_side: &[usize], m_side: &[usize], i: usize, j: usize| -> f64 {
            let (u, w) = (p_side[i], m_side[j]);
            scratch_p.clear();
            scratch_p.extend(p_side.iter().copied().filter(|&x| x != u));
            scratch_m.clear();
            scratch_m.extend(m_side.iter().copied().filter(|&x| x != w));
            -sums.gain(u, &scratch_p) + sums.gain(w, &scratch_p) - sums.gain(w, &scratch_m)
                + sums.gain(u, &scratch_m)
        };
        // temperature scale from a few random proposals
        let mut scale = 0.0;
        for _ in 0..32 {
            let i = rng.gen_range(0..p_side.len());
            let j = rng.gen_range(0..m_side.len());
            scale += propose(&p_side, &m_side, i, j).abs();
        }
        let t0 = (scale / 32.0).max(1e-12);
        let cooling = (1e-3f64).powf(1.0 / steps as f64);
        let mut temperature = t0;
        let mut best_local = (current, p_side.clone());
        for _ in 0..steps {
            let i = rng.gen_range(0..p_side.len());
            let j = rng.gen_range(0..m_side.len());
            let delta = propose(&p_side, &m_side, i, j);
            if delta >= 0.0 || rng.gen::<f64>() < (delta / temperature).exp() {
                std::mem::swap(&mut p_side[i], &mut m_side[j]);
                current += delta;
                if current > best_local.0 {
                    best_local = (current, p_side.clone());
                }
            }
            temperature *= cooling;
        }
        // recompute the winner from scratch to shed accumulated rounding
        let mut set = best_local.1;
        set.sort_unstable();
        let complement: Vec<usize> = (0..n).filter(|v| set.binary_search(v).is_err()).collect();
        let value = side_sum(&set) + side_sum(&complement);
        if value > best.0 {
            best = (value, set);
        }
    }
    best
}

/// Monte Carlo settings for [`t_alpha_and_vn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateConfig {
    pub fields: usize,
    /// Only slices with `|σ̄| ≤ h0` are searched; the rest report `−∞`.
    pub h0: f64,
    pub mode: SearchMode,
    pub seed: Seed,
    /// Pair each field `J` with `−J`.
    pub antithetic: bool,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        SurrogateConfig {
            fields: 64,
            h0: 0.1,
            mode: SearchMode::Exact,
            seed: Seed::new(0, 0),
            antithetic: true,
        }
    }
}

impl SurrogateConfig {
    /// Field `i` uses stream `i/2` of the master seed and is negated when
    /// `i` is odd (antithetic mode); otherwise stream `i`, never negated.
    pub fn field_for(&self, n: usize, r: usize, i: usize) -> Result<GaussianField> {
        if self.antithetic {
            let base = GaussianField::sample(n, r, Seed::new(self.seed.master, (i / 2) as u64))?;
            Ok(if i % 2 == 1 { base.negated() } else { base })
        } else {
            GaussianField::sample(n, r, Seed::new(self.seed.master, i as u64))
        }
    }
}

/// One magnetization bucket of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaBucket {
    pub plus_count: usize,
    pub magnetization: Ratio<i64>,
    pub alpha: f64,
    /// `n^{−(r+1)/2}·√κ₂·max U` over the slice, `−∞` when not searched.
    pub t_alpha: f64,
    /// `α·c^s + T_n^α·c^{s/2}`.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldOutcome {
    pub field_index: usize,
    pub buckets: Vec<AlphaBucket>,
    pub best_objective: f64,
    pub winning_alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateRun {
    pub constants: SurrogateConstants,
    pub n: usize,
    pub r: usize,
    pub fields: Vec<FieldOutcome>,
    /// Monte Carlo mean of the per-field best objective.
    pub vn: f64,
    pub vn_stderr: f64,
    /// `max |α_win|·√(c^s)` over fields: the empirical constant in
    /// `|α_max| ≤ C/√d`.
    pub alpha_constant: f64,
    /// `κ − V_n`, the surrogate's estimate of `min H / n`.
    pub surrogate_m: f64,
}

/// Tabulates `T_n^α` per magnetization bucket for `cfg.fields` Gaussian
/// fields and averages `max_α (α c^s + T_n^α c^{s/2})` into `V_n`.
pub fn t_alpha_and_vn(
    pattern: &Pattern,
    n: usize,
    c: f64,
    cfg: &SurrogateConfig,
) -> Result<SurrogateRun> {
    let r = pattern.r();
    if n < r {
        return Err(Error::domain(format!("n = {n} must be at least r = {r}")));
    }
    if cfg.fields == 0 {
        return Err(Error::domain("need at least one field"));
    }
    let constants = SurrogateConstants::new(pattern, c)?;
    let band = SigmaConstraint::band(n, cfg.h0)?;
    let scale = (n as f64).powf(-(r as f64 + 1.0) / 2.0) * constants.kappa2.sqrt();
    let sqrt_d = constants.d.sqrt();

    let fields: Vec<FieldOutcome> = (0..cfg.fields)
        .into_par_iter()
        .map(|i| -> Result<FieldOutcome> {
            let field = cfg.field_for(n, r, i)?;
            let sums = SupportSums::new(&field)?;
            let mut buckets = Vec::with_capacity(n + 1);
            let mut searched = std::collections::HashMap::new();
            for k in 0..=n {
                let h = Ratio::new(2 * k as i64 - n as i64, n as i64);
                let hf = (2 * k) as f64 / n as f64 - 1.0;
                let alpha = alpha_for_magnetization(constants.kappa1, hf, r);
                let t_alpha = if band.allows(k) {
                    // slices k and n − k share their maximum
                    let key = k.min(n - k);
                    let max_u = match searched.get(&key) {
                        Some(&u) => u,
                        None => {
                            let u = slice_max_with(
                                &field,
                                &sums,
                                key,
                                &cfg.mode,
                                (i * (n + 1) + key) as u64,
                            )?
                            .max_u;
                            searched.insert(key, u);
                            u
                        }
                    };
                    scale * max_u
                } else {
                    f64::NEG_INFINITY
                };
                buckets.push(AlphaBucket {
                    plus_count: k,
                    magnetization: h,
                    alpha,
                    t_alpha,
                    objective: alpha * constants.d + t_alpha * sqrt_d,
                });
            }
            let winner = buckets
                .iter()
                .max_by(|a, b| a.objective.total_cmp(&b.objective))
                .expect("at least one bucket");
            Ok(FieldOutcome {
                field_index: i,
                best_objective: winner.objective,
                winning_alpha: winner.alpha,
                buckets,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let m = fields.len() as f64;
    let vn = fields.iter().map(|f| f.best_objective).sum::<f64>() / m;
    let var = if fields.len() > 1 {
        fields
            .iter()
            .map(|f| (f.best_objective - vn).powi(2))
            .sum::<f64>()
            / (m - 1.0)
    } else {
        0.0
    };
    let alpha_constant = fields
        .iter()
        .map(|f| f.winning_alpha.abs() * sqrt_d)
        .fold(0.0, f64::max);
    Ok(SurrogateRun {
        constants,
        n,
        r,
        vn,
        vn_stderr: (var / m).sqrt(),
        alpha_constant,
        surrogate_m: constants.kappa - vn,
        fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_relations() {
        let k3 = Pattern::complete(3).unwrap();
        let c = SurrogateConstants::new(&k3, 2.0).unwrap();
        assert!(c.kappa1 < 0.0 && c.kappa2 > 0.0);
        assert!((c.kappa - (-c.kappa1) * c.d).abs() < 1e-15);
        assert!((c.kappa - 1.0 / 3.0).abs() < 1e-15);
        assert!(SurrogateConstants::new(&k3, 0.0).is_err());
    }

    #[test]
    fn predictor_k3_c2() {
        let k3 = Pattern::complete(3).unwrap();
        let v = predictor_m(&k3, 2.0).unwrap();
        let expected = 1.0 / 3.0 + (2.0 * std::f64::consts::LN_2 / 3.0).sqrt();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 1.0131).abs() < 1e-4);
        assert!(predictor_m(&k3, -1.0).is_err());
        assert!(predictor_m(&k3, 1e-9).unwrap() < 1e-6);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_for_magnetization(-0.125, 0.0, 3), 0.0);
        for k in 0..=10 {
            let h = k as f64 / 10.0 * 2.0 - 1.0;
            assert!(alpha_for_magnetization(-0.125, h, 4) <= 0.0);
        }
    }

    #[test]
    fn zero_field_slice_maxima_vanish() {
        let field = GaussianField::zeros(8, 3).unwrap();
        for b in max_w_balanced(&field, 0.25, &SearchMode::Exact).unwrap() {
            assert_eq!(b.max_w, 0.0);
        }
    }

    #[test]
    fn slice_max_mirrors_large_plus_counts() {
        let field = GaussianField::sample(9, 3, Seed::new(4, 0)).unwrap();
        let lo = slice_max(&field, 3, &SearchMode::Exact).unwrap();
        let hi = slice_max(&field, 6, &SearchMode::Exact).unwrap();
        assert!((lo.max_u - hi.max_u).abs() < 1e-9);
        assert_eq!(hi.argmax.plus_count(), 6);
        assert!((field.u_field(&hi.argmax).unwrap() - hi.max_u).abs() < 1e-9);
    }

    #[test]
    fn exact_slice_refuses_oversize() {
        let field = GaussianField::zeros(30, 2).unwrap();
        assert!(matches!(
            slice_max(&field, 15, &SearchMode::Exact),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn vn_small_run() {
        let k3 = Pattern::complete(3).unwrap();
        let cfg = SurrogateConfig {
            fields: 4,
            h0: 0.5,
            ..SurrogateConfig::default()
        };
        let run = t_alpha_and_vn(&k3, 8, 2.0, &cfg).unwrap();
        assert_eq!(run.fields.len(), 4);
        for f in &run.fields {
            assert_eq!(f.buckets.len(), 9);
            assert!(f.buckets.iter().all(|b| b.alpha <= 0.0));
            // outside the band nothing is searched
            assert_eq!(f.buckets[0].t_alpha, f64::NEG_INFINITY);
            assert!(f.best_objective.is_finite());
        }
        assert!((run.surrogate_m - (run.constants.kappa - run.vn)).abs() < 1e-15);
    }
}
