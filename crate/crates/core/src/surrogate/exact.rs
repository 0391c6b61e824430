//! Exact covariance of the surrogate field and balanced-pair counting.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::spin::SpinConfig;

/// `Σ_{v ∈ [n]^r} f(x_v) f(y_v)`, which is `Cov(U_n(x), U_n(y)) / r!`.
///
/// With `f = 2^{r−1}·A − 1` and `A` the all-equal indicator this is
/// `4^{r−1} Σ_{ab} n_ab^r − 2^{r−1}(n₊(x)^r + n₋(x)^r) − 2^{r−1}(n₊(y)^r + n₋(y)^r) + n^r`,
/// where `n_ab` counts coordinates with `(x_i, y_i) = (a, b)`.
pub fn exact_covariance(x: &SpinConfig, y: &SpinConfig, r: u32) -> Result<BigInt> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if r < 2 {
        return Err(Error::domain("r must be >= 2"));
    }
    let mut joint = [[0u64; 2]; 2];
    for (&a, &b) in x.as_slice().iter().zip(y.as_slice()) {
        joint[(a == -1) as usize][(b == -1) as usize] += 1;
    }
    let pow = |k: u64| BigInt::from(k).pow(r);
    let n = x.len() as u64;
    let half = BigInt::one() << (r - 1);
    let quarter = BigInt::one() << (2 * (r - 1));
    let joint_sum: BigInt = joint.iter().flatten().map(|&k| pow(k)).sum();
    let x_side = pow(x.plus_count() as u64) + pow(n - x.plus_count() as u64);
    let y_side = pow(y.plus_count() as u64) + pow(n - y.plus_count() as u64);
    Ok(quarter * joint_sum - &half * x_side - &half * y_side + pow(n))
}

/// `n^r((1+ℓ)^r + (1−ℓ)^r − 2)/2` with `ℓ = overlap / n`, the balanced-pair
/// form of the covariance.
pub fn covariance_balanced_form(n: u64, overlap: i64, r: u32) -> BigRational {
    let ell = BigRational::new(BigInt::from(overlap), BigInt::from(n));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let n_r = BigRational::from_integer(BigInt::from(n).pow(r));
    n_r * ((&one + &ell).pow(r as i32) + (&one - &ell).pow(r as i32) - &two) / two
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of a big unsigned integer without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln C(m, k)` from the exact integer.
pub fn log_binomial(m: u64, k: u64) -> f64 {
    ln_biguint(&binomial_big(m, k))
}

/// Stirling form of `ln C(m, βm)`:
/// `−½ ln(2πmβ(1−β)) − m(β ln β + (1−β) ln(1−β))`.
pub fn stirling_log_binomial(m: u64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("β = {beta} not in (0, 1)")));
    }
    let m = m as f64;
    let entropy = beta * beta.ln() + (1.0 - beta) * (1.0 - beta).ln();
    Ok(-0.5 * (2.0 * std::f64::consts::PI * m * beta * (1.0 - beta)).ln() - m * entropy)
}

fn check_pair_args(n: u64, y: i64) -> Result<()> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::domain(format!(
            "n = {n} must be a positive multiple of 4"
        )));
    }
    if y.unsigned_abs() > n / 4 {
        return Err(Error::domain(format!(
            "|y| = {} exceeds n/4 = {}",
            y.unsigned_abs(),
            n / 4
        )));
    }
    Ok(())
}

/// Number of pairs `(σ, σ′)` of balanced configurations with
/// `Σ σ_i σ′_i = 4y`: `C(n, n/2)·C(n/2, n/4 − y)²`.
pub fn balanced_pair_count(n: u64, y: i64) -> Result<BigUint> {
    check_pair_args(n, y)?;
    let q = (n / 4) as i64;
    let inner = binomial_big(n / 2, (q - y) as u64);
    Ok(binomial_big(n, n / 2) * &inner * inner)
}

/// Stirling approximation of `ln balanced_pair_count(n, y)`:
/// `(2πn)^{−3/2}·16/(1 − 16y²/n²)·(4/(1 + 4y/n))^{n/2+2y}·(4/(1 − 4y/n))^{n/2−2y}`.
/// Undefined at `|y| = n/4`, where a factorial of zero appears.
pub fn pair_count_stirling_log(n: u64, y: i64) -> Result<f64> {
    check_pair_args(n, y)?;
    if y.unsigned_abs() == n / 4 {
        return Err(Error::domain("Stirling form is undefined at |y| = n/4"));
    }
    let nf = n as f64;
    let yf = y as f64;
    let t = 4.0 * yf / nf;
    Ok(-1.5 * (2.0 * std::f64::consts::PI * nf).ln()
        + (16.0 / (1.0 - t * t)).ln()
        + (nf / 2.0 + 2.0 * yf) * (4.0 / (1.0 + t)).ln()
        + (nf / 2.0 - 2.0 * yf) * (4.0 / (1.0 - t)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn covariance_same_balanced_config() {
        let x = SpinConfig::from_signs(&[1, -1, 1, -1, 1, -1]).unwrap();
        for r in 2..=4u32 {
            let expected = BigInt::from(6u64.pow(r) * ((1u64 << (r - 1)) - 1));
            assert_eq!(exact_covariance(&x, &x, r).unwrap(), expected);
        }
    }

    #[test]
    fn balanced_form_at_full_overlap() {
        let v = covariance_balanced_form(8, 8, 3);
        assert_eq!(v, BigRational::from_u64(512 * 3).unwrap());
    }

    #[test]
    fn pair_count_examples() {
        assert_eq!(balanced_pair_count(4, 0).unwrap(), BigUint::from(24u32));
        assert_eq!(balanced_pair_count(4, 1).unwrap(), BigUint::from(6u32));
        assert!(balanced_pair_count(6, 0).is_err());
        assert!(balanced_pair_count(8, 3).is_err());
    }

    #[test]
    fn log_binomial_matches_small_values() {
        assert!((log_binomial(10, 3) - 120f64.ln()).abs() < 1e-12);
        assert!(stirling_log_binomial(10, 0.0).is_err());
    }

    #[test]
    fn ln_biguint_large() {
        let big = BigUint::one() << 5000u32;
        assert!((ln_biguint(&big) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
