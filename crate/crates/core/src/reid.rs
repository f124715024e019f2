//! Reid EPR criterion from exact second moments.
//!
//! Alice's rotated quadrature `X_theta = cos(theta) X + sin(theta) P_X` is
//! estimated linearly from Bob's `Y_phi = cos(phi) Y + sin(phi) P_Y`. With the
//! optimal gain `g = <X_theta Y_phi>/<Y_phi^2>` the residual variance is
//! `<X_theta^2> - <X_theta Y_phi>^2 / <Y_phi^2>`. Steering is declared when the
//! product of the two inferred variances drops below 1/4.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygauss::{PolyGauss, QuadratureLabel};
use crate::states::StateFamily;

/// Heisenberg bound on the product of inferred variances.
pub const REID_BOUND: f64 = 0.25;
pub const PHI_SCAN_POINTS: usize = 720;
pub const PHI_TOL: f64 = 1e-10;
/// Below this |C| the state is treated as uncorrelated.
pub const ZERO_CORRELATION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedMoments {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

/// The ten second moments of a zero-mean two-mode state.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondMoments {
    m: [[f64; 4]; 4],
}

impl SecondMoments {
    pub fn of(pg: &PolyGauss) -> Result<Self> {
        if pg.axes() != QuadratureLabel::ALL {
            return Err(Error::InvalidAxes(
                "Reid analysis needs a function over (X, P_X, Y, P_Y)".into(),
            ));
        }
        let s = pg.second_moments()?;
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = s[(i, j)];
            }
        }
        Ok(Self { m })
    }

    pub fn get(&self, a: QuadratureLabel, b: QuadratureLabel) -> f64 {
        self.m[a.index()][b.index()]
    }

    pub fn rotated(&self, theta: f64, phi: f64) -> RotatedMoments {
        let a = [theta.cos(), theta.sin(), 0.0, 0.0];
        let b = [0.0, 0.0, phi.cos(), phi.sin()];
        let form = |u: &[f64; 4], v: &[f64; 4]| -> f64 {
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    s += u[i] * self.m[i][j] * v[j];
                }
            }
            s
        };
        RotatedMoments {
            xx: form(&a, &a),
            yy: form(&b, &b),
            xy: form(&a, &b),
        }
    }

    pub fn correlation(&self, theta: f64, phi: f64) -> Result<f64> {
        let r = self.rotated(theta, phi);
        if !(r.xx > 0.0 && r.yy > 0.0) {
            return Err(Error::DegenerateState(format!(
                "zero quadrature variance at theta={theta}, phi={phi}"
            )));
        }
        Ok(r.xy / (r.xx * r.yy).sqrt())
    }

    /// Maximizes `|C(theta, phi)|` over `phi in [0, 2 pi)`: a uniform scan
    /// followed by golden-section refinement around the best scan point.
    pub fn optimal_phi(&self, theta: f64) -> Result<PhiOptimum> {
        let step = 2.0 * PI / PHI_SCAN_POINTS as f64;
        let mut best_i = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..PHI_SCAN_POINTS {
            let c = self.correlation(theta, i as f64 * step)?.abs();
            if c > best {
                best = c;
                best_i = i;
            }
        }
        if best < ZERO_CORRELATION {
            return Ok(PhiOptimum {
                phi: 0.0,
                correlation: 0.0,
                zero_correlation: true,
            });
        }
        let center = best_i as f64 * step;
        let f = |phi: f64| self.correlation(theta, phi).map(f64::abs).unwrap_or(0.0);
        let mut phi = golden_max(f, center - step, center + step, PHI_TOL);
        if f(center) > f(phi) {
            phi = center;
        }
        phi = phi.rem_euclid(2.0 * PI);
        // the maximum is flat, so the search only pins phi to ~1e-8
        let near_zero = phi.min(2.0 * PI - phi) < 1e-7;
        if near_zero && f(0.0) >= f(phi) * (1.0 - 1e-12) {
            phi = 0.0;
        }
        Ok(PhiOptimum {
            phi,
            correlation: self.correlation(theta, phi)?,
            zero_correlation: false,
        })
    }

    pub fn inferred_variance(&self, theta: f64, phi: f64) -> Result<Inference> {
        let r = self.rotated(theta, phi);
        if !(r.yy > 0.0) {
            return Err(Error::DegenerateState(format!("<Y_phi^2> = {} at phi={phi}", r.yy)));
        }
        let gain = r.xy / r.yy;
        Ok(Inference {
            variance: (r.xx - r.xy * gain).max(0.0),
            gain,
        })
    }

    /// Optimizes `phi1`, `phi2` independently and forms the Reid product.
    pub fn reid_test(&self, theta1: f64, theta2: f64) -> Result<ReidReport> {
        let o1 = self.optimal_phi(theta1)?;
        let o2 = self.optimal_phi(theta2)?;
        let i1 = self.inferred_variance(theta1, o1.phi)?;
        let i2 = self.inferred_variance(theta2, o2.phi)?;
        let product = i1.variance * i2.variance;
        Ok(ReidReport {
            theta1,
            theta2,
            phi1: o1.phi,
            phi2: o2.phi,
            g1: i1.gain,
            g2: i2.gain,
            var1: i1.variance,
            var2: i2.variance,
            product,
            four_product: 4.0 * product,
            steerable: product < REID_BOUND,
        })
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiOptimum {
    pub phi: f64,
    /// Signed correlation at `phi`.
    pub correlation: f64,
    /// Set when `|C|` vanishes for every `phi`; then `phi = 0` is reported.
    pub zero_correlation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inference {
    pub variance: f64,
    pub gain: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReidReport {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub g1: f64,
    pub g2: f64,
    pub var1: f64,
    pub var2: f64,
    pub product: f64,
    /// `4 * product`, the form used in comparison tables.
    pub four_product: f64,
    pub steerable: bool,
}

pub const DEFAULT_THETA1: f64 = 0.0;
pub const DEFAULT_THETA2: f64 = FRAC_PI_2;

pub fn rotated_second_moments(pg: &PolyGauss, theta: f64, phi: f64) -> Result<RotatedMoments> {
    Ok(SecondMoments::of(pg)?.rotated(theta, phi))
}

pub fn correlation(pg: &PolyGauss, theta: f64, phi: f64) -> Result<f64> {
    SecondMoments::of(pg)?.correlation(theta, phi)
}

pub fn optimal_phi(pg: &PolyGauss, theta: f64) -> Result<PhiOptimum> {
    SecondMoments::of(pg)?.optimal_phi(theta)
}

pub fn inferred_variance(pg: &PolyGauss, theta: f64, phi: f64) -> Result<Inference> {
    SecondMoments::of(pg)?.inferred_variance(theta, phi)
}

pub fn reid_test(pg: &PolyGauss, theta1: f64, theta2: f64) -> Result<ReidReport> {
    SecondMoments::of(pg)?.reid_test(theta1, theta2)
}

/// Squeezing at which the Reid product of `make(r)` crosses 1/4, by
/// bisection on `[lo, hi]`. The product must straddle the bound at the ends.
pub fn bound_crossing<F>(make: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> StateFamily,
{
    let excess = |r: f64| -> Result<f64> {
        let w = make(r).wigner()?;
        Ok(reid_test(&w, DEFAULT_THETA1, DEFAULT_THETA2)?.product - REID_BOUND)
    };
    let (mut a, mut b) = (lo, hi);
    let fa = excess(a)?;
    let fb = excess(b)?;
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidParameter(format!(
            "Reid product does not cross the bound on [{lo}, {hi}]"
        )));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if excess(m)?.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
