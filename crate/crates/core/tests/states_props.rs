use std::f64::consts::PI;

use cvsteer::states::{lg_wigner, noon_wigner, subtract_photons, tmsv_quad_form, tmsv_wigner};
use cvsteer::{MultiPoly, PolyGauss, StateFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn families() -> Vec<StateFamily> {
    let mut v = Vec::new();
    for n in 0..=10 {
        v.push(StateFamily::Lg { n, m: 0 });
    }
    v.push(StateFamily::Lg { n: 2, m: 3 });
    for r in [0.0, 0.3, 1.0, 1.4] {
        v.push(StateFamily::Tmsv { r });
    }
    for r in [1e-3, 0.4, 1.0, 1.4] {
        for order in 1..=2 {
            for k in 0..=1 {
                v.push(StateFamily::PhotonSubtracted { r, order, k });
            }
        }
    }
    for n in 1..=5 {
        v.push(StateFamily::Noon { n });
    }
    v
}

#[test]
fn every_state_is_normalized() {
    for f in families() {
        let z = f.wigner().unwrap().integrate().unwrap();
        assert!((z - 1.0).abs() < 1e-9, "{f}: {z}");
    }
}

#[test]
fn parity_is_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for f in families() {
        let w = f.wigner().unwrap();
        let spread = 1.0 + w.variance(cvsteer::QuadratureLabel::X).unwrap().sqrt();
        for _ in 0..10_000 {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0 * spread..2.0 * spread));
            let p = PI * PI * w.evaluate(&v);
            assert!(p.abs() <= 1.0 + 1e-9, "{f} at {v:?}: {p}");
        }
    }
}

/// Laguerre polynomial by the three-term recurrence.
fn laguerre(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 1.0 - x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let k = k as f64;
        let c = ((2.0 * k + 1.0 - x) * b - k * a) / (k + 1.0);
        a = b;
        b = c;
    }
    b
}

#[test]
fn lg_matches_laguerre_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 0..=10 {
        for m in [0, 1, 3] {
            let w = lg_wigner(n, m).unwrap();
            for _ in 0..100 {
                let [x, px, y, py]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                let q0 = (x * x + y * y + px * px + py * py) / 4.0;
                let q2 = (x * py - y * px) / 2.0;
                let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
                let want = sign / (PI * PI)
                    * laguerre(n, 4.0 * (q0 + q2))
                    * laguerre(m, 4.0 * (q0 - q2))
                    * (-4.0 * q0).exp();
                let got = w.evaluate(&[x, px, y, py]);
                assert!((got - want).abs() < 1e-10, "n={n} m={m}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn lg_one_zero_closed_form() {
    let w = lg_wigner(1, 0).unwrap();
    let v: [f64; 4] = [0.3, -0.7, 1.1, 0.2];
    let [x, px, y, py] = v;
    let want = (-(x * x + y * y + px * px + py * py)).exp() * ((px - y).powi(2) + (py + x).powi(2) - 1.0) / (PI * PI);
    assert!((w.evaluate(&v) - want).abs() < 1e-14);
}

#[test]
fn tmsv_small_squeezing_tends_to_vacuum() {
    let vac = lg_wigner(0, 0).unwrap();
    let w = tmsv_wigner(1e-7).unwrap();
    for v in [[0.0; 4], [0.5, -0.2, 0.3, 0.9], [1.0, 1.0, -1.0, 0.0]] {
        assert!((w.evaluate(&v) - vac.evaluate(&v)).abs() < 1e-6);
    }
}

#[test]
fn single_subtraction_matches_closed_form() {
    for r in [0.2f64, 0.8, 1.3] {
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let d = MultiPoly::linear(&[1.0, 0.0, -1.0, 0.0]);
        let dp = MultiPoly::linear(&[0.0, 1.0, 0.0, -1.0]);
        let d2 = &d * &d;
        let dp2 = &dp * &dp;
        let bracket = &(&(&dp2 - &d2).scale(-s) + &(&dp2 + &d2).scale(c)) - &MultiPoly::constant(1.0);
        let printed = PolyGauss::full(bracket.scale(1.0 / (PI * PI)), tmsv_quad_form(r).unwrap()).unwrap();
        let z = printed.integrate().unwrap();
        // the closed form is already normalized
        assert!((z - 1.0).abs() < 1e-12, "r={r}: {z}");
        let ours = subtract_photons(r, 1, 1).unwrap();
        let want = printed.scale(1.0 / z);
        let scale = want.poly().max_abs_coeff();
        for (e, c) in want.poly().terms() {
            assert!((ours.poly().coeff(e) - c).abs() < 1e-12 * scale, "{e:?}");
        }
        assert_eq!(ours.poly().len(), want.poly().len());
    }
}

#[test]
fn degree_bounds() {
    for f in families() {
        let w = f.wigner().unwrap();
        let bound = match f {
            StateFamily::Lg { n, m } => 2 * (n + m),
            StateFamily::Tmsv { .. } => 0,
            StateFamily::PhotonSubtracted { order, .. } => 2 * order,
            StateFamily::Noon { n } => 2 * n,
        };
        assert!(w.poly().degree() <= bound as usize, "{f}: {} > {bound}", w.poly().degree());
    }
    assert_eq!(subtract_photons(0.5, 2, 0).unwrap().poly().degree(), 4);
    assert_eq!(noon_wigner(3).unwrap().poly().degree(), 6);
}
