use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A spin configuration `σ ∈ {-1, +1}^n` with its plus count cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    sigma: Vec<i8>,
    plus_count: usize,
}

impl SpinConfig {
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::domain(format!("spin value {bad} is not +1 or -1")));
        }
        Ok(Self::from_signs_unchecked(signs.to_vec()))
    }

    fn from_signs_unchecked(sigma: Vec<i8>) -> Self {
        let plus_count = sigma.iter().filter(|&&s| s == 1).count();
        SpinConfig { sigma, plus_count }
    }

    pub fn all_plus(n: usize) -> Self {
        SpinConfig {
            sigma: vec![1; n],
            plus_count: n,
        }
    }

    /// Bit `i` of `mask` set means `σ_i = +1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_signs_unchecked(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
    }

    /// `σ_i = +1` exactly for `i` in `plus`.
    pub fn from_plus_set(n: usize, plus: &[usize]) -> Self {
        let mut sigma = vec![-1i8; n];
        for &v in plus {
            sigma[v] = 1;
        }
        Self::from_signs_unchecked(sigma)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_signs_unchecked(
            (0..n)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect(),
        )
    }

    /// Uniform configuration with exactly `plus` spins equal to `+1`.
    pub fn random_with_plus<R: Rng + ?Sized>(n: usize, plus: usize, rng: &mut R) -> Self {
        let mut sigma: Vec<i8> = (0..n).map(|i| if i < plus { 1 } else { -1 }).collect();
        sigma.shuffle(rng);
        SpinConfig {
            sigma,
            plus_count: plus.min(n),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> i8 {
        self.sigma[v]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.sigma
    }

    pub fn plus_count(&self) -> usize {
        self.plus_count
    }

    /// `Σ σ_i`.
    pub fn spin_sum(&self) -> i64 {
        2 * self.plus_count as i64 - self.sigma.len() as i64
    }

    /// `σ̄ = (2·plus − n)/n`, exact.
    pub fn magnetization(&self) -> Ratio<i64> {
        Ratio::new(self.spin_sum(), self.sigma.len() as i64)
    }

    pub fn magnetization_f64(&self) -> f64 {
        self.spin_sum() as f64 / self.sigma.len() as f64
    }

    #[inline]
    pub fn flip(&mut self, v: usize) {
        if self.sigma[v] == 1 {
            self.plus_count -= 1;
        } else {
            self.plus_count += 1;
        }
        self.sigma[v] = -self.sigma[v];
    }

    pub fn negated(&self) -> Self {
        SpinConfig {
            sigma: self.sigma.iter().map(|s| -s).collect(),
            plus_count: self.sigma.len() - self.plus_count,
        }
    }

    pub fn plus_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.sigma[v] == 1).collect()
    }

    /// Overlap `Σ x_i y_i`.
    pub fn overlap(&self, other: &SpinConfig) -> i64 {
        self.sigma
            .iter()
            .zip(&other.sigma)
            .map(|(&a, &b)| (a * b) as i64)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_spins() {
        assert!(SpinConfig::from_signs(&[1, 0, -1]).is_err());
    }

    proptest! {
        #[test]
        fn magnetization_matches_plus_count(signs in prop::collection::vec(prop::bool::ANY, 1..40), flips in prop::collection::vec(0usize..40, 0..10)) {
            let raw: Vec<i8> = signs.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let mut s = SpinConfig::from_signs(&raw).unwrap();
            for v in flips {
                s.flip(v % raw.len());
            }
            let n = s.len() as i64;
            prop_assert_eq!(s.magnetization(), Ratio::new(2 * s.plus_count() as i64 - n, n));
            prop_assert_eq!(s.plus_count(), s.as_slice().iter().filter(|&&x| x == 1).count());
        }
    }
}
