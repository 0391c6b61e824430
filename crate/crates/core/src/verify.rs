//! Self-check battery: exact identities that must hold to the last bit and
//! statistical checks judged against standard errors.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::combinatorics::{binomial, for_each_subset};
use crate::error::Result;
use crate::models::{
    sample_fgraph, sample_fgraph_with, sample_gnp, CopyRanker, HostGraph, SamplingMode, Seed,
};
use crate::optimizer::{
    cut_value, flip_delta, goodman_bound, min_monochromatic_triangles_edge_coloring,
    minimize_anneal, minimize_exact, AnnealConfig, Instance,
};
use crate::oracles;
use crate::pattern::{automorphism_count, is_strictly_1_balanced, labeled_copies, Pattern};
use crate::spin::SpinConfig;
use crate::subgraph::{
    enumerate_copies, f_poly, f_poly_subset_sum, f_tuple_sum, hamiltonian, spin_form_rhs,
};
use crate::surrogate::{
    balanced_pair_count, covariance_balanced_form, exact_covariance, gauss_tail_bounds,
    pair_count_stirling_log, predictor_m, slepian_joint_bound, GaussianField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Exact,
    Statistical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Shift one entry of `J` by a constant in every field of the covariance
    /// Monte Carlo check. That check must then fail.
    pub corrupt_field_entry: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn count(&self, kind: CheckKind) -> usize {
        self.checks.iter().filter(|c| c.kind == kind).count()
    }

    pub fn all_exact_passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Exact)
            .all(|c| c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let kind = match c.kind {
                CheckKind::Exact => "exact",
                CheckKind::Statistical => "stat",
            };
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} [{kind}] {}: {}", c.name, c.detail)?;
        }
        let passed = |k| {
            self.checks
                .iter()
                .filter(|c| c.kind == k && c.passed)
                .count()
        };
        write!(
            f,
            "exact {}/{} passed, statistical {}/{} passed",
            passed(CheckKind::Exact),
            self.count(CheckKind::Exact),
            passed(CheckKind::Statistical),
            self.count(CheckKind::Statistical)
        )
    }
}

/// Mean and standard error of `E[U(x) U(y)]` over `fields` samples, next to
/// the exact value `r!·Σ f(x_v) f(y_v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub exact: f64,
}

impl CovarianceEstimate {
    pub fn z_score(&self) -> f64 {
        (self.mean - self.exact) / self.stderr
    }
}

/// Monte Carlo estimate of the field covariance. `corruption` adds a fixed
/// offset to one entry of every sampled `J`.
pub fn covariance_monte_carlo(
    x: &SpinConfig,
    y: &SpinConfig,
    r: usize,
    fields: usize,
    seed: Seed,
    corruption: Option<(&[usize], f64)>,
) -> Result<CovarianceEstimate> {
    let n = x.len();
    let exact = exact_covariance(x, y, r as u32)?;
    let r_fact = crate::combinatorics::factorial(r as u64).expect("small r") as f64;
    let exact = r_fact * big_to_f64(&exact);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..fields {
        let mut field = GaussianField::sample(n, r, seed.derive(i as u64))?;
        if let Some((tuple, offset)) = corruption {
            field.set(tuple, field.get(tuple) + offset);
        }
        let prod = field.u_field(x)? * field.u_field(y)?;
        sum += prod;
        sum_sq += prod * prod;
    }
    let m = fields as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean) * m / (m - 1.0);
    Ok(CovarianceEstimate {
        mean,
        stderr: (var / m).sqrt(),
        exact,
    })
}

fn big_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn run(
        &mut self,
        name: &'static str,
        kind: CheckKind,
        check: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let (passed, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(CheckResult {
            name,
            kind,
            passed,
            detail,
        });
    }
}

fn random_sigma(n: usize, rng: &mut impl Rng) -> SpinConfig {
    SpinConfig::random(n, rng)
}

/// Runs every check and returns the per-check verdicts. Never panics on a
/// failing identity; failures are report content.
pub fn verify_suite(options: &VerifyOptions) -> VerifyReport {
    let root = Seed::new(options.seed, 0);
    let mut s = Suite { checks: Vec::new() };
    use CheckKind::{Exact, Statistical};

    s.run("strict-balance-vs-naive", Exact, || {
        let cases = [
            Pattern::complete(3)?,
            Pattern::complete(4)?,
            Pattern::complete(5)?,
            Pattern::cycle(4)?,
            Pattern::cycle(5)?,
            Pattern::path(4)?,
            Pattern::diamond(),
            Pattern::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])?,
        ];
        let expected = [true, true, true, true, true, false, true, false];
        let mut wrong = Vec::new();
        for (p, &want) in cases.iter().zip(&expected) {
            let fast = is_strictly_1_balanced(p)?.strictly_balanced;
            if fast != want || fast != oracles::strictly_balanced_naive(p) {
                wrong.push(p.to_string());
            }
        }
        Ok((
            wrong.is_empty(),
            format!("{} patterns, mismatches: {wrong:?}", cases.len()),
        ))
    });

    s.run("automorphism-counts", Exact, || {
        let got = [
            automorphism_count(&Pattern::complete(3)?)?,
            automorphism_count(&Pattern::complete(4)?)?,
            automorphism_count(&Pattern::cycle(4)?)?,
            automorphism_count(&Pattern::diamond())?,
            automorphism_count(&Pattern::path(4)?)?,
        ];
        Ok((
            got == [6, 24, 8, 4, 2],
            format!("K3, K4, C4, diamond, P4 -> {got:?}"),
        ))
    });

    s.run("copies-times-aut-equals-homomorphisms", Exact, || {
        let mut rng = root.derive(1).rng();
        let mut ok = true;
        for (i, p) in [
            Pattern::complete(3)?,
            Pattern::cycle(4)?,
            Pattern::diamond(),
        ]
        .iter()
        .enumerate()
        {
            let host = sample_gnp(9, 0.5, root.derive(100 + i as u64))?;
            let copies = enumerate_copies(&host, p)?.len() as u64;
            ok &= copies * p.aut_count() == oracles::injective_homomorphisms(&host, p);
            let full = HostGraph::complete(5 + rng.gen_range(0..2));
            let k = enumerate_copies(&full, p)?.len() as u64;
            let n = full.n() as u64;
            ok &= k == binomial(n, p.r() as u64).unwrap() as u64 * p.copies_per_set();
        }
        Ok((ok, "G(9, 1/2) and complete hosts".into()))
    });

    s.run("copy-rank-roundtrip", Exact, || {
        let p = Pattern::diamond();
        let ranker = CopyRanker::new(&p, 9)?;
        let mut ok = true;
        for rank in 0..ranker.total() {
            let (subset, idx) = ranker.unrank(rank)?;
            ok &= ranker.rank(&subset, idx)? == rank;
        }
        Ok((ok, format!("{} diamond copies in [9]", ranker.total())))
    });

    s.run("spin-form-hamiltonian", Exact, || {
        let mut rng = root.derive(2).rng();
        let patterns = [
            Pattern::complete(2)?,
            Pattern::complete(3)?,
            Pattern::path(3)?,
            Pattern::cycle(4)?,
        ];
        let mut ok = true;
        let cases = 40;
        for i in 0..cases {
            let p = &patterns[i % patterns.len()];
            let n = rng.gen_range(p.r()..=8);
            let h = sample_fgraph(p, n, 0.3, root.derive(200 + i as u64))?;
            let sigma = random_sigma(n, &mut rng);
            let lhs = BigRational::from_integer(BigInt::from(hamiltonian(&h, &sigma)?));
            ok &= lhs == spin_form_rhs(&h, &sigma)?;
        }
        Ok((ok, format!("{cases} random instances, rational arithmetic")))
    });

    s.run("f-closed-form", Exact, || {
        let mut ok = true;
        let mut count = 0;
        for r in 1..=6 {
            for mask in 0u32..(1 << r) {
                let x: Vec<i8> = (0..r)
                    .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                    .collect();
                ok &= f_poly(&x)? == f_poly_subset_sum(&x);
                count += 1;
            }
        }
        Ok((ok, format!("{count} inputs, r <= 6")))
    });

    s.run("f-tuple-sum", Exact, || {
        let mut ok = true;
        for n in 1..=5 {
            for mask in 0u64..(1 << n) {
                let sigma = SpinConfig::from_mask(n, mask);
                for r in 2..=4 {
                    ok &= f_tuple_sum(&sigma, r as u32)? == oracles::f_tuple_sum_direct(&sigma, r);
                }
            }
        }
        Ok((ok, "all sigma, n <= 5, r <= 4".into()))
    });

    s.run("covariance-closed-form", Exact, || {
        let mut rng = root.derive(3).rng();
        let mut ok = true;
        for _ in 0..30 {
            let n = rng.gen_range(2..=5);
            let r = rng.gen_range(2..=4);
            let (x, y) = (random_sigma(n, &mut rng), random_sigma(n, &mut rng));
            ok &= exact_covariance(&x, &y, r as u32)? == oracles::covariance_direct(&x, &y, r);
        }
        Ok((ok, "30 random pairs vs brute force".into()))
    });

    s.run("covariance-balanced-form", Exact, || {
        let mut rng = root.derive(4).rng();
        let mut ok = true;
        for _ in 0..30 {
            let n = 2 * rng.gen_range(1..=6);
            let r = rng.gen_range(2..=5u32);
            let x = SpinConfig::random_with_plus(n, n / 2, &mut rng);
            let y = SpinConfig::random_with_plus(n, n / 2, &mut rng);
            let lhs = BigRational::from_integer(exact_covariance(&x, &y, r)?);
            ok &= lhs == covariance_balanced_form(n as u64, x.overlap(&y), r);
        }
        Ok((ok, "30 balanced pairs".into()))
    });

    s.run("field-fast-vs-naive", Exact, || {
        let mut rng = root.derive(5).rng();
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            let n = rng.gen_range(3..=8);
            let r = rng.gen_range(2..=4);
            let field = GaussianField::sample(n, r, root.derive(500 + i))?;
            let sigma = random_sigma(n, &mut rng);
            let (a, b) = (field.u_field(&sigma)?, field.u_field_naive(&sigma)?);
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
        Ok((worst < 1e-9, format!("max relative gap {worst:.2e}")))
    });

    s.run("goodman-edge-colorings", Exact, || {
        let got: Vec<u64> = (3..=7)
            .map(min_monochromatic_triangles_edge_coloring)
            .collect::<Result<_>>()?;
        let want: Vec<u64> = (3..=7).map(goodman_bound).collect();
        Ok((got == want, format!("n = 3..7 -> {got:?}, T(n) = {want:?}")))
    });

    s.run("complete-host-vertex-bipartitions", Exact, || {
        let k3 = Pattern::complete(3)?;
        let mut got = Vec::new();
        let mut want = Vec::new();
        for n in 5..=8usize {
            let h = enumerate_copies(&HostGraph::complete(n), &k3)?.to_hypergraph();
            got.push(minimize_exact(&h, None)?.best_value);
            let c3 = |a: usize| binomial(a as u64, 3).unwrap() as u64;
            want.push((0..=n).map(|a| c3(a) + c3(n - a)).min().unwrap());
        }
        Ok((got == want, format!("n = 5..8 -> {got:?}")))
    });

    s.run("exact-vs-naive-optimizer", Exact, || {
        let mut ok = true;
        let k3 = Pattern::complete(3)?;
        for i in 0..8u64 {
            let n = 6 + (i as usize % 5);
            let h = sample_fgraph(&k3, n, 0.15, root.derive(600 + i))?;
            ok &= minimize_exact(&h, None)?.best_value == oracles::minimize_naive(&h);
        }
        Ok((ok, "8 instances, n = 6..10".into()))
    });

    s.run("complement-and-flip-delta", Exact, || {
        let mut rng = root.derive(7).rng();
        let h = sample_fgraph(&Pattern::cycle(4)?, 10, 0.05, root.derive(700))?;
        let inst = Instance::new(&h);
        let mut ok = true;
        for _ in 0..200 {
            let mut sigma = random_sigma(10, &mut rng);
            let e = hamiltonian(&h, &sigma)?;
            ok &= e + cut_value(&h, &sigma)? == h.len() as u64;
            let v = rng.gen_range(0..10);
            let d = flip_delta(&inst, &sigma, v)?;
            sigma.flip(v);
            ok &= e as i64 + d == hamiltonian(&h, &sigma)? as i64;
        }
        Ok((ok, format!("200 configurations, |E| = {}", h.len())))
    });

    s.run("pair-count-sums", Exact, || {
        let mut ok = true;
        for n in [4u64, 8, 12] {
            let q = (n / 4) as i64;
            let total: num_bigint::BigUint = (-q..=q)
                .map(|y| balanced_pair_count(n, y))
                .sum::<Result<_>>()?;
            let half = num_bigint::BigUint::from(binomial(n, n / 2).unwrap());
            ok &= total == &half * &half;
        }
        Ok((ok, "n in {4, 8, 12}".into()))
    });

    s.run("pair-count-stirling", Exact, || {
        let mut worst: f64 = 0.0;
        for n in [64u64, 128, 256] {
            let q = (n / 4) as i64;
            for y in (-q + 1)..q {
                let exact = crate::surrogate::ln_biguint(&balanced_pair_count(n, y)?);
                let approx = pair_count_stirling_log(n, y)?;
                worst = worst.max(((approx - exact) / exact).abs());
            }
        }
        Ok((worst < 0.01, format!("max relative log error {worst:.2e}")))
    });

    s.run("gaussian-tail-sandwich", Exact, || {
        let mut ok = true;
        let mut x = 0.5;
        while x <= 8.0 + 1e-9 {
            let (lo, hi) = gauss_tail_bounds(x)?;
            let t = oracles::normal_tail(x);
            ok &= lo <= t && t <= hi;
            x += 0.25;
        }
        Ok((ok, "x in [0.5, 8], step 0.25".into()))
    });

    s.run("predictor-arithmetic", Exact, || {
        let v = predictor_m(&Pattern::complete(3)?, 2.0)?;
        let want = 1.0 / 3.0 + (2.0 * std::f64::consts::LN_2 / 3.0).sqrt();
        let k3 = Pattern::complete(3)?;
        let monotone = (1..20).all(|i| {
            predictor_m(&k3, i as f64 * 0.25).unwrap()
                < predictor_m(&k3, (i + 1) as f64 * 0.25).unwrap()
        });
        Ok((
            (v - want).abs() < 1e-12 && monotone,
            format!("m(K3, 2) = {v}"),
        ))
    });

    s.run("sampler-mean-edges", Statistical, || {
        let k3 = Pattern::complete(3)?;
        let counts: Vec<f64> = (0..500)
            .map(|i| sample_fgraph(&k3, 10, 0.08, root.derive(10_000 + i)).map(|h| h.len() as f64))
            .collect::<Result<_>>()?;
        let (mean, se) = mean_se(&counts);
        let z = (mean - 9.6) / se;
        Ok((z.abs() <= 3.0, format!("mean {mean:.3} vs 9.6, z = {z:.2}")))
    });

    s.run("sampler-inclusion-frequency", Statistical, || {
        let p = Pattern::path(3)?;
        let copies = Arc::new(labeled_copies(&p)?);
        let ranker = CopyRanker::new(&p, 7)?;
        let target = ranker.unrank(17)?;
        let trials = 2000;
        let q = 0.2;
        let mut hits = 0;
        for i in 0..trials {
            let h = sample_fgraph_with(
                copies.clone(),
                7,
                q,
                root.derive(20_000 + i),
                SamplingMode::Auto,
            )?;
            hits += h
                .iter()
                .any(|(v, c)| v == target.0.as_slice() && c == target.1) as u64;
        }
        let freq = hits as f64 / trials as f64;
        let z = (freq - q) / (q * (1.0 - q) / trials as f64).sqrt();
        Ok((
            z.abs() <= 4.0,
            format!("frequency {freq:.4} vs {q}, z = {z:.2}"),
        ))
    });

    s.run("sparse-vs-dense-sampler", Statistical, || {
        let k3 = Pattern::complete(3)?;
        let copies = Arc::new(labeled_copies(&k3)?);
        let draw = |mode, base: u64| -> Result<Vec<f64>> {
            (0..400)
                .map(|i| {
                    sample_fgraph_with(copies.clone(), 12, 0.05, root.derive(base + i), mode)
                        .map(|h| h.len() as f64)
                })
                .collect()
        };
        let (ms, ss) = mean_se(&draw(SamplingMode::Sparse, 30_000)?);
        let (md, sd) = mean_se(&draw(SamplingMode::Dense, 40_000)?);
        let z = (ms - md) / (ss * ss + sd * sd).sqrt();
        Ok((
            z.abs() <= 4.0,
            format!("sparse {ms:.2}, dense {md:.2}, z = {z:.2}"),
        ))
    });

    s.run("gnp-edge-count", Statistical, || {
        let counts: Vec<f64> = (0..300)
            .map(|i| sample_gnp(20, 0.3, root.derive(50_000 + i)).map(|g| g.edges().len() as f64))
            .collect::<Result<_>>()?;
        let (mean, se) = mean_se(&counts);
        let z = (mean - 57.0) / se;
        Ok((z.abs() <= 4.0, format!("mean {mean:.2} vs 57, z = {z:.2}")))
    });

    s.run("field-covariance-monte-carlo", Statistical, || {
        let n = 8;
        let x = SpinConfig::from_plus_set(n, &[0, 1, 2, 3]);
        let y = SpinConfig::from_plus_set(n, &[0, 1, 4, 5]);
        let corruption = options.corrupt_field_entry.then(|| {
            let mut rng = root.derive(8).rng();
            let mut t: Vec<usize> = (0..3).map(|_| rng.gen_range(0..n)).collect();
            t.sort_unstable();
            t
        });
        let est = covariance_monte_carlo(
            &x,
            &y,
            3,
            4000,
            root.derive(60_000),
            corruption.as_deref().map(|t| (t, 20.0)),
        )?;
        let z = est.z_score();
        Ok((
            z.abs() <= 4.0,
            format!(
                "E[U(x)U(y)] {:.1} vs exact {:.1}, z = {z:.2}",
                est.mean, est.exact
            ),
        ))
    });

    s.run("slepian-vs-monte-carlo", Statistical, || {
        let mut rng = root.derive(9).rng();
        let pairs = 200_000;
        let mut ok = true;
        let mut notes = Vec::new();
        for rho in [0.0, 0.5, 0.9f64] {
            let draws: Vec<(f64, f64)> = (0..pairs)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    (a, rho * a + (1.0 - rho * rho).sqrt() * b)
                })
                .collect();
            for u in [1.5, 2.5] {
                let freq =
                    draws.iter().filter(|(a, b)| *a > u && *b > u).count() as f64 / pairs as f64;
                let se = (freq * (1.0 - freq) / pairs as f64).sqrt();
                let bound = slepian_joint_bound(rho, u)?;
                ok &= freq - 3.0 * se <= bound;
                notes.push(format!("({rho}, {u}): {freq:.2e} <= {bound:.2e}"));
            }
        }
        Ok((ok, notes.join("; ")))
    });

    s.run("anneal-matches-exact", Statistical, || {
        let k3 = Pattern::complete(3)?;
        let mut matches = 0;
        let mut sound = true;
        let total = 10;
        for i in 0..total {
            let h = sample_fgraph(&k3, 14, 0.12, root.derive(70_000 + i))?;
            let exact = minimize_exact(&h, None)?.best_value;
            let cfg = AnnealConfig::with_seed(root.derive(71_000 + i));
            let anneal = minimize_anneal(&h, &cfg, None)?.best_value;
            sound &= anneal >= exact;
            matches += (anneal == exact) as u64;
        }
        Ok((
            sound && matches * 10 >= 9 * total,
            format!("{matches}/{total} equal at n = 14"),
        ))
    });

    s.run("negation-symmetry-of-max", Statistical, || {
        let n = 10;
        let mut gaps = Vec::new();
        for i in 0..200 {
            let field = GaussianField::sample(n, 3, root.derive(80_000 + i))?;
            let neg = field.negated();
            let (mut best, mut best_neg) = (f64::MIN, f64::MIN);
            for_each_subset(n, n / 2, |set| {
                let s = SpinConfig::from_plus_set(n, set);
                best = best.max(field.u_field(&s).unwrap());
                best_neg = best_neg.max(neg.u_field(&s).unwrap());
            });
            gaps.push(best - best_neg);
        }
        let (mean, se) = mean_se(&gaps);
        let z = mean / se;
        Ok((
            z.abs() <= 4.0,
            format!("mean max(J) - max(-J) = {mean:.2}, z = {z:.2}"),
        ))
    });

    VerifyReport { checks: s.checks }
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_se_of_constant() {
        assert_eq!(mean_se(&[2.0, 2.0, 2.0]), (2.0, 0.0));
    }

    #[test]
    fn covariance_estimate_of_uncorrupted_field() {
        let x = SpinConfig::from_plus_set(4, &[0, 1]);
        let est = covariance_monte_carlo(&x, &x, 2, 2000, Seed::new(5, 0), None).unwrap();
        // Var U = 2!·n^2·(2 − 1) = 32 on the balanced slice
        assert_eq!(est.exact, 32.0);
        assert!(est.z_score().abs() < 4.0);
    }
}
