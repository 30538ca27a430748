//! Log-space combinatorics shared by the state constructors and the beam
//! splitter expansion.

/// ln(n!) by direct summation. Exact enough for every cutoff used here and
/// never overflows.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Table of ln(n!) for n < len, for inner loops that need many lookups.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(len: usize) -> Self {
        let mut table = Vec::with_capacity(len.max(1));
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..len.max(1) {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LnFactorials(table)
    }

    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    #[inline]
    pub fn binomial(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// `base^exp` with the convention 0^0 = 1.
#[inline]
pub fn powi(base: f64, exp: usize) -> f64 {
    base.powi(exp as i32)
}

/// Index of the first photon number in the top tenth of `cutoff` indices.
pub fn tail_start(cutoff: usize) -> usize {
    cutoff - cutoff.div_ceil(10)
}
