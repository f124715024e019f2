#![allow(dead_code)]

use cvsteer::polygauss::Exponents;
use cvsteer::{MultiPoly, PolyGauss, QuadForm};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

/// Gauss-Hermite nodes and weights (weight `exp(-x^2)`) by Golub-Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Random positive-definite 4x4 form `M^T M + c I`.
pub fn random_quad<R: Rng>(rng: &mut R) -> QuadForm {
    let m = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-0.6..0.6));
    let a = m.transpose() * &m + DMatrix::identity(4, 4) * rng.gen_range(0.3..1.2);
    QuadForm::new(a).unwrap()
}

/// Random polynomial with up to `terms` monomials of total degree <= `max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, terms: usize, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for _ in 0..terms {
        let mut e: Exponents = [0; 4];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..4)] += 1;
        }
        p.add_term(e, rng.gen_range(-1.0..1.0));
    }
    p
}

pub fn random_pg<R: Rng>(rng: &mut R, terms: usize, max_deg: u32) -> PolyGauss {
    PolyGauss::full(random_poly(rng, terms, max_deg), random_quad(rng)).unwrap()
}

/// `L^{-T}` for `A = L L^T`, so that `v = L^{-T} z` turns `v^T A v` into `|z|^2`.
pub fn whitening(q: &QuadForm) -> DMatrix<f64> {
    let l = q.matrix().clone().cholesky().unwrap().l();
    l.transpose().try_inverse().unwrap()
}
