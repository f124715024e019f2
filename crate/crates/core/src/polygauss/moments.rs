//! Isserlis (Wick) moments of a zero-mean Gaussian.

use std::collections::HashMap;

use super::poly::Exponents;

/// Raw moments `E[v^e]` of a zero-mean Gaussian with covariance `cov`,
/// memoized per multi-index.
///
/// Uses the recursion `E[v_a v^e] = sum_j cov[a][j] e_j E[v^(e - 1_j)]`,
/// which sums the same pair partitions as Isserlis' theorem without
/// enumerating them.
#[derive(Debug, Clone)]
pub struct GaussianMoments {
    dim: usize,
    cov: Vec<f64>,
    memo: HashMap<Exponents, f64>,
}

impl GaussianMoments {
    /// `cov` is row-major `dim x dim`.
    pub fn new(dim: usize, cov: Vec<f64>) -> Self {
        assert_eq!(cov.len(), dim * dim);
        assert!(dim <= 4);
        Self {
            dim,
            cov,
            memo: HashMap::new(),
        }
    }

    pub fn moment(&mut self, e: Exponents) -> f64 {
        let total: u32 = e.iter().map(|&k| k as u32).sum();
        if total == 0 {
            return 1.0;
        }
        if total % 2 == 1 {
            return 0.0;
        }
        if let Some(&m) = self.memo.get(&e) {
            return m;
        }
        let a = e.iter().position(|&k| k > 0).expect("nonzero total");
        let mut rest = e;
        rest[a] -= 1;
        let mut acc = 0.0;
        for j in 0..self.dim {
            if rest[j] == 0 {
                continue;
            }
            let s = self.cov[a * self.dim + j];
            if s == 0.0 {
                continue;
            }
            let mut r = rest;
            r[j] -= 1;
            acc += s * rest[j] as f64 * self.moment(r);
        }
        self.memo.insert(e, acc);
        acc
    }
}
