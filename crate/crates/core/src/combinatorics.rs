//! Binomial tables, colexicographic subset ranking and permutation helpers.

use crate::error::{Error, Result};

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

/// Pascal table `table[m][k] = C(m, k)` for `m <= n`, `k <= k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialTable {
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(n: usize, k_max: usize) -> Result<Self> {
        let mut rows = vec![vec![0u64; k_max + 1]; n + 1];
        for m in 0..=n {
            rows[m][0] = 1;
            for k in 1..=k_max.min(m) {
                let above = if k < m { rows[m - 1][k] } else { 0 };
                rows[m][k] = rows[m - 1][k - 1]
                    .checked_add(above)
                    .ok_or_else(|| Error::capability(format!("C({m},{k}) overflows u64")))?;
            }
        }
        Ok(Self { rows })
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k >= self.rows[0].len() || n >= self.rows.len() {
            // callers stay within the table; anything else is a logic bug
            panic!("binomial table lookup C({n},{k}) out of range");
        }
        self.rows[n][k]
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Colex rank of a strictly increasing subset: `sum_i C(s_i, i + 1)`.
pub fn colex_rank(subset: &[usize], table: &BinomialTable) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &v)| table.get(v, i + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for subsets of size `k` drawn from `[0, n)`.
pub fn colex_unrank(mut rank: u64, k: usize, n: usize, table: &BinomialTable) -> Vec<usize> {
    let mut out = vec![0usize; k];
    let mut hi = n;
    for i in (0..k).rev() {
        // largest v < hi with C(v, i + 1) <= rank
        let mut v = hi - 1;
        while table.get(v, i + 1) > rank {
            v -= 1;
        }
        out[i] = v;
        rank -= table.get(v, i + 1);
        hi = v;
    }
    out
}

/// Advances `perm` to the next lexicographic permutation; false when exhausted.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// All permutations of `0..r` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..r).collect();
    let mut out = vec![perm.clone()];
    while next_permutation(&mut perm) {
        out.push(perm.clone());
    }
    out
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Calls `visit` on every non-decreasing `k`-tuple over `0..n`.
pub fn for_each_multiset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - 1 {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[i];
        }
    }
}

/// Number of distinct orderings of a multiset given as a sorted slice.
pub fn distinct_orderings(sorted: &[usize]) -> u128 {
    let mut denom: u128 = 1;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run).expect("small run");
            run = 1;
        }
    }
    if !sorted.is_empty() {
        denom *= factorial(run).expect("small run");
    }
    factorial(sorted.len() as u64).expect("r <= 30") / denom
}
