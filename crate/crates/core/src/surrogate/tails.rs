use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `(φ(x)(1/x − 1/x³), φ(x)/x)`, which sandwich `P[N(0,1) ≥ x]`. The lower
/// value is negative for `x < 1` and returned as is.
pub fn gauss_tail_bounds(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("tail bounds need x > 0, got {x}")));
    }
    let phi = normal_pdf(x);
    Ok((phi * (1.0 / x - 1.0 / (x * x * x)), phi / x))
}

/// Upper bound on `P(Z > u, Z_ρ > u)` for a standard bivariate normal pair
/// with correlation `ρ`:
/// `(1+ρ)²/(2π u² √(1−ρ²)) · exp(−u²/(1+ρ))`.
pub fn slepian_joint_bound(rho: f64, u: f64) -> Result<f64> {
    if !(rho > -1.0 && rho < 1.0) {
        return Err(Error::domain(format!("correlation {rho} not in (-1, 1)")));
    }
    if !(u > 0.0) {
        return Err(Error::domain(format!("threshold {u} must be positive")));
    }
    Ok(
        (1.0 + rho).powi(2) / (2.0 * PI * u * u * (1.0 - rho * rho).sqrt())
            * (-u * u / (1.0 + rho)).exp(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_vanishes_at_one() {
        let (lo, hi) = gauss_tail_bounds(1.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        assert!(gauss_tail_bounds(0.0).is_err());
        assert!(gauss_tail_bounds(-1.0).is_err());
    }

    #[test]
    fn slepian_at_zero_correlation() {
        let b = slepian_joint_bound(0.0, 2.0).unwrap();
        let expected = (-4.0f64).exp() / (8.0 * PI);
        assert!((b - expected).abs() < 1e-15);
        assert!((b - 7.29e-4).abs() < 1e-6);
    }

    #[test]
    fn slepian_blows_up_near_one() {
        let a = slepian_joint_bound(0.99, 1.0).unwrap();
        let b = slepian_joint_bound(0.999999, 1.0).unwrap();
        assert!(b > 10.0 * a);
        assert!(slepian_joint_bound(1.0, 1.0).is_err());
    }
}
