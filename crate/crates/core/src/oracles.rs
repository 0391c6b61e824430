//! Brute-force reference computations. Each one follows a definition
//! directly and shares no code path with the routine it is used to check;
//! they back the property tests and the `verify` suite.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::models::{FHypergraph, HostGraph};
use crate::pattern::Pattern;
use crate::spin::SpinConfig;
use crate::subgraph::f_poly_subset_sum;

/// Strict 1-balance by enumerating every vertex subset and every subset of
/// its induced edges.
pub fn strictly_balanced_naive(p: &Pattern) -> bool {
    let r = p.r();
    let d1 = Ratio::new(p.s() as i64, r as i64 - 1);
    for vmask in 1u32..(1 << r) {
        let nv = vmask.count_ones() as i64;
        if nv < 2 {
            continue;
        }
        let induced: Vec<_> = p
            .edges()
            .iter()
            .filter(|&&(u, v)| vmask >> u & 1 == 1 && vmask >> v & 1 == 1)
            .collect();
        for emask in 1u64..(1u64 << induced.len()) {
            let ne = emask.count_ones() as usize;
            let whole = nv as usize == r && ne == p.s();
            if whole {
                continue;
            }
            if Ratio::new(ne as i64, nv - 1) >= d1 {
                return false;
            }
        }
    }
    true
}

/// Number of injective maps `V(F) → V(G)` carrying edges to edges, by
/// scanning all `n^r` vertex tuples.
pub fn injective_homomorphisms(host: &HostGraph, p: &Pattern) -> u64 {
    let (n, r) = (host.n(), p.r());
    let mut tuple = vec![0usize; r];
    let mut count = 0u64;
    loop {
        let injective = (0..r).all(|i| (i + 1..r).all(|j| tuple[i] != tuple[j]));
        if injective
            && p.edges()
                .iter()
                .all(|&(a, b)| host.has_edge(tuple[a], tuple[b]))
        {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == r {
                return count;
            }
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// `H(σ)` by counting plus and minus spins in every hyperedge.
pub fn hamiltonian_scan(h: &FHypergraph, sigma: &[i8]) -> u64 {
    h.iter()
        .filter(|(verts, _)| {
            let plus = verts.iter().filter(|&&v| sigma[v] > 0).count();
            plus == 0 || plus == verts.len()
        })
        .count() as u64
}

/// `min_σ H(σ)` over all `2^n` configurations, no symmetry, no Gray code.
pub fn minimize_naive(h: &FHypergraph) -> u64 {
    let n = h.n();
    let mut sigma = vec![0i8; n];
    (0u64..1 << n)
        .map(|mask| {
            for (i, s) in sigma.iter_mut().enumerate() {
                *s = if mask >> i & 1 == 1 { 1 } else { -1 };
            }
            hamiltonian_scan(h, &sigma)
        })
        .min()
        .unwrap_or(0)
}

fn for_each_tuple(n: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; r];
    loop {
        visit(&tuple);
        let mut i = 0;
        loop {
            if i == r {
                return;
            }
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// `Σ_{v ∈ [n]^r} f(σ_v)` with `f` from its subset-sum definition.
pub fn f_tuple_sum_direct(sigma: &SpinConfig, r: usize) -> BigInt {
    let mut total = 0i64;
    let mut spins = vec![0i8; r];
    for_each_tuple(sigma.len(), r, |t| {
        for (s, &v) in spins.iter_mut().zip(t) {
            *s = sigma.get(v);
        }
        total += f_poly_subset_sum(&spins);
    });
    BigInt::from(total)
}

/// `Σ_{v ∈ [n]^r} f(x_v) f(y_v)` by direct enumeration.
pub fn covariance_direct(x: &SpinConfig, y: &SpinConfig, r: usize) -> BigInt {
    let mut total = 0i64;
    let mut xs = vec![0i8; r];
    let mut ys = vec![0i8; r];
    for_each_tuple(x.len(), r, |t| {
        for j in 0..r {
            xs[j] = x.get(t[j]);
            ys[j] = y.get(t[j]);
        }
        total += f_poly_subset_sum(&xs) * f_poly_subset_sum(&ys);
    });
    BigInt::from(total)
}

/// Visits every ordered tuple in `[n]^r`.
pub fn ordered_tuples(n: usize, r: usize, visit: impl FnMut(&[usize])) {
    for_each_tuple(n, r, visit)
}

/// `P[N(0,1) ≥ x]` to near machine precision: the Taylor series of `Φ` for
/// `x < 3`, a Lentz continued fraction beyond.
pub fn normal_tail(x: f64) -> f64 {
    let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x < 0.0 {
        return 1.0 - normal_tail(-x);
    }
    if x < 3.0 {
        // Φ(x) − 1/2 = φ(x) Σ_k x^{2k+1} / (1·3·…·(2k+1))
        let mut term = x;
        let mut sum = x;
        let mut k = 0.0;
        while term.abs() > 1e-18 * sum.abs() {
            k += 1.0;
            term *= x * x / (2.0 * k + 1.0);
            sum += term;
        }
        0.5 - phi * sum
    } else {
        // Q(x) = φ(x) / (x + 1/(x + 2/(x + 3/(x + …))))
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..500 {
            let a = k as f64;
            d = x + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = x + a / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        phi / f
    }
}
