//! The Gaussian array `J` over non-decreasing `r`-tuples and the field
//! `U_n(σ)` it induces.

use rand_distr::{Distribution, StandardNormal};

use crate::combinatorics::{
    binomial, colex_rank, distinct_orderings, factorial, for_each_multiset, BinomialTable,
};
use crate::error::{Error, Result};
use crate::models::Seed;
use crate::spin::SpinConfig;
use crate::subgraph::f_poly;

/// Refuse fields with more entries than this.
pub const MAX_FIELD_ENTRIES: u128 = 50_000_000;

/// `√(number of distinct orderings of the tuple)`.
pub fn g_factor(tuple: &[usize]) -> Result<f64> {
    if tuple.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain(format!("{tuple:?} is not non-decreasing")));
    }
    Ok((distinct_orderings(tuple) as f64).sqrt())
}

/// Independent standard normals `J_v` for every non-decreasing `v ∈ [n]^r`,
/// stored by the colex rank of `(v_1, v_2 + 1, …, v_r + r − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianField {
    n: usize,
    r: usize,
    values: Vec<f64>,
    seed: Option<Seed>,
    table: BinomialTable,
}

impl GaussianField {
    pub fn entry_count(n: usize, r: usize) -> Option<u128> {
        binomial((n + r - 1) as u64, r as u64)
    }

    fn check_dims(n: usize, r: usize) -> Result<usize> {
        if r < 2 || n < 1 {
            return Err(Error::domain(format!(
                "field needs n >= 1 and r >= 2, got n = {n}, r = {r}"
            )));
        }
        let count = Self::entry_count(n, r).unwrap_or(u128::MAX);
        if count > MAX_FIELD_ENTRIES {
            return Err(Error::capability(format!(
                "field with {count} entries exceeds {MAX_FIELD_ENTRIES}"
            )));
        }
        Ok(count as usize)
    }

    pub fn sample(n: usize, r: usize, seed: Seed) -> Result<Self> {
        let count = Self::check_dims(n, r)?;
        let mut rng = seed.rng();
        let values = (0..count)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Ok(GaussianField {
            n,
            r,
            values,
            seed: Some(seed),
            table: BinomialTable::new(n + r, r)?,
        })
    }

    pub fn zeros(n: usize, r: usize) -> Result<Self> {
        let count = Self::check_dims(n, r)?;
        Ok(GaussianField {
            n,
            r,
            values: vec![0.0; count],
            seed: None,
            table: BinomialTable::new(n + r, r)?,
        })
    }

    /// `J → −J`, the antithetic partner.
    pub fn negated(&self) -> Self {
        GaussianField {
            values: self.values.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn seed(&self) -> Option<Seed> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        let shifted: Vec<usize> = tuple.iter().enumerate().map(|(i, &v)| v + i).collect();
        colex_rank(&shifted, &self.table) as usize
    }

    /// `J` at any tuple; order does not matter.
    pub fn get(&self, tuple: &[usize]) -> f64 {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        self.values[self.index_of(&sorted)]
    }

    pub fn set(&mut self, tuple: &[usize], value: f64) {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        let i = self.index_of(&sorted);
        self.values[i] = value;
    }

    fn check_sigma(&self, sigma: &SpinConfig) -> Result<()> {
        if sigma.len() != self.n {
            return Err(Error::domain(format!(
                "σ has length {}, field has n = {}",
                sigma.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Σ over non-decreasing tuples of `g·J` restricted to tuples inside `members`.
    fn restricted_sum(&self, members: &[usize]) -> f64 {
        let mut total = 0.0;
        let mut tuple = vec![0usize; self.r];
        for_each_multiset(members.len(), self.r, |m| {
            for (slot, &i) in tuple.iter_mut().zip(m) {
                *slot = members[i];
            }
            total +=
                (distinct_orderings(&tuple) as f64).sqrt() * self.values[self.index_of(&tuple)];
        });
        total
    }

    /// Σ over all non-decreasing tuples of `g·J`; independent of `σ`.
    pub fn total_sum(&self) -> f64 {
        let all: Vec<usize> = (0..self.n).collect();
        self.restricted_sum(&all)
    }

    /// `U_n(σ)` via `f = 2^{r−1}·1{all equal} − 1`:
    /// `√(r!)·[2^{r−1}(S₊ + S₋) − S_tot]`.
    pub fn u_field(&self, sigma: &SpinConfig) -> Result<f64> {
        self.check_sigma(sigma)?;
        let (plus, minus): (Vec<usize>, Vec<usize>) = (0..self.n).partition(|&v| sigma.get(v) == 1);
        let coupling = (1u64 << (self.r - 1)) as f64;
        let inner = coupling * (self.restricted_sum(&plus) + self.restricted_sum(&minus))
            - self.total_sum();
        Ok(sqrt_factorial(self.r) * inner)
    }

    /// `U_n(σ)` summed term by term from its definition.
    pub fn u_field_naive(&self, sigma: &SpinConfig) -> Result<f64> {
        self.check_sigma(sigma)?;
        let mut total = 0.0;
        let mut spins = vec![0i8; self.r];
        for_each_multiset(self.n, self.r, |tuple| {
            for (s, &v) in spins.iter_mut().zip(tuple) {
                *s = sigma.get(v);
            }
            let f = f_poly(&spins).expect("spins are ±1") as f64;
            total += g_factor(tuple).expect("sorted") * self.values[self.index_of(tuple)] * f;
        });
        Ok(sqrt_factorial(self.r) * total)
    }
}

pub(crate) fn sqrt_factorial(r: usize) -> f64 {
    (factorial(r as u64).expect("small r") as f64).sqrt()
}

/// `W_n = U / (√(r!)·n^{(r+1)/2}·√(2^{r−1} − 1))`, so that `W_n(σ) ~ N(0, 1/n)`
/// on the balanced slice.
pub fn w_norm(u_value: f64, n: usize, r: usize) -> f64 {
    let scale = sqrt_factorial(r)
        * (n as f64).powf((r as f64 + 1.0) / 2.0)
        * (((1u64 << (r - 1)) - 1) as f64).sqrt();
    u_value / scale
}

/// The field regrouped by support: `c_T = Σ g·J` over the non-decreasing
/// tuples whose set of distinct entries is exactly `T`, for `1 ≤ |T| ≤ r`.
/// Then `S_A = Σ_{T ⊆ A} c_T`.
#[derive(Debug, Clone)]
pub(crate) struct SupportSums {
    n: usize,
    r: usize,
    coeffs: Vec<Vec<f64>>,
    table: BinomialTable,
    total: f64,
}

impl SupportSums {
    pub(crate) fn new(field: &GaussianField) -> Result<Self> {
        let (n, r) = (field.n, field.r);
        let table = BinomialTable::new(n, r)?;
        let mut coeffs: Vec<Vec<f64>> = (0..=r)
            .map(|j| vec![0.0; if j == 0 { 0 } else { table.get(n, j) as usize }])
            .collect();
        let mut total = 0.0;
        let mut support = Vec::with_capacity(r);
        for_each_multiset(n, r, |tuple| {
            support.clear();
            support.extend_from_slice(tuple);
            support.dedup();
            let weight =
                (distinct_orderings(tuple) as f64).sqrt() * field.values[field.index_of(tuple)];
            coeffs[support.len()][colex_rank(&support, &table) as usize] += weight;
            total += weight;
        });
        Ok(SupportSums {
            n,
            r,
            coeffs,
            table,
            total,
        })
    }

    /// Σ of `c_T` over `T ∋ v` with `T \ {v} ⊆ side`; `v` must not be in `side`.
    pub(crate) fn gain(&self, v: usize, side: &[usize]) -> f64 {
        let mut total = self.coeffs[1][v];
        let mut subset = Vec::with_capacity(self.r);
        for size in 1..self.r.min(side.len() + 1) {
            crate::combinatorics::for_each_subset(side.len(), size, |idx| {
                subset.clear();
                subset.extend(idx.iter().map(|&i| side[i]));
                subset.push(v);
                subset.sort_unstable();
                total += self.coeffs[size + 1][colex_rank(&subset, &self.table) as usize];
            });
        }
        total
    }

    /// Exact maximum of `S₊ + S₋` over configurations with exactly `plus`
    /// spins up. Depth-first over vertices `0..n`, each side keeping the
    /// (size, colex rank) of its subsets of size `< r` so that placing a
    /// vertex costs one pass over that list. Vertex 0 is pinned to the plus
    /// side when `plus = n − plus`.
    pub(crate) fn max_pair_sum(&self, plus: usize) -> (f64, Vec<usize>) {
        let n = self.n;
        let pinned = 2 * plus == n;
        let mut search = SliceSearch {
            sums: self,
            best: f64::NEG_INFINITY,
            best_plus: Vec::new(),
            sides: [SideState::new(), SideState::new()],
            plus_members: Vec::with_capacity(plus),
            target_plus: plus,
        };
        if pinned && plus > 0 {
            search.place(0, 0, 0.0);
        } else {
            search.descend(0, 0.0);
        }
        (search.best, search.best_plus)
    }

    pub(crate) fn total(&self) -> f64 {
        self.total
    }
}

#[derive(Debug, Clone)]
struct SideState {
    // (size, rank) of every subset of the side with size < r, stacked by level
    subsets: Vec<(usize, u64)>,
    marks: Vec<usize>,
    count: usize,
}

impl SideState {
    fn new() -> Self {
        SideState {
            subsets: vec![(0, 0)],
            marks: Vec::new(),
            count: 0,
        }
    }
}

struct SliceSearch<'a> {
    sums: &'a SupportSums,
    best: f64,
    best_plus: Vec<usize>,
    sides: [SideState; 2],
    plus_members: Vec<usize>,
    target_plus: usize,
}

impl SliceSearch<'_> {
    fn descend(&mut self, v: usize, acc: f64) {
        let n = self.sums.n;
        if v == n {
            if acc > self.best {
                self.best = acc;
                self.best_plus = self.plus_members.clone();
            }
            return;
        }
        let remaining = n - v;
        let plus_needed = self.target_plus - self.sides[0].count;
        let minus_needed = (n - self.target_plus) - self.sides[1].count;
        if plus_needed > 0 {
            self.place(v, 0, acc);
        }
        if minus_needed > 0 && plus_needed < remaining {
            self.place(v, 1, acc);
        }
    }

    fn place(&mut self, v: usize, side: usize, acc: f64) {
        let r = self.sums.r;
        let table = &self.sums.table;
        let coeffs = &self.sums.coeffs;
        let state = &mut self.sides[side];
        let mut gain = 0.0;
        let mark = state.subsets.len();
        for i in 0..mark {
            let (size, rank) = state.subsets[i];
            let new_rank = rank + table.get(v, size + 1);
            gain += coeffs[size + 1][new_rank as usize];
            if size + 1 < r {
                state.subsets.push((size + 1, new_rank));
            }
        }
        state.marks.push(mark);
        state.count += 1;
        if side == 0 {
            self.plus_members.push(v);
        }

        self.descend(v + 1, acc + gain);

        let state = &mut self.sides[side];
        let mark = state.marks.pop().expect("balanced push/pop");
        state.subsets.truncate(mark);
        state.count -= 1;
        if side == 0 {
            self.plus_members.pop();
        }
    }
}
