use std::f64::consts::PI;

use cvsteer::reid::{bound_crossing, SecondMoments};
use cvsteer::StateFamily;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn product(f: StateFamily) -> f64 {
    SecondMoments::of(&f.wigner().unwrap()).unwrap().reid_test(0.0, PI / 2.0).unwrap().product
}

#[test]
fn tmsv_product_closed_form() {
    for i in 0..=8 {
        let r = 0.25 * i as f64;
        let want = 1.0 / (4.0 * (2.0 * r).cosh().powi(2));
        let got = product(StateFamily::Tmsv { r });
        assert!((got - want).abs() < 1e-9, "r={r}: {got} vs {want}");
    }
}

#[test]
fn subtracted_product_closed_form() {
    for i in 1..=20 {
        let r = 0.1 * i as f64;
        let want = 9.0 / (2.0 * (3.0 * (4.0 * r).cosh() + 5.0));
        for k in 0..=1 {
            let got = product(StateFamily::PhotonSubtracted { r, order: 1, k });
            assert!((got - want).abs() < 1e-8, "r={r} k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn subtracted_crossing() {
    let r = bound_crossing(|r| StateFamily::PhotonSubtracted { r, order: 1, k: 1 }, 0.2, 1.0, 1e-12).unwrap();
    assert!((r - (13.0f64 / 3.0).acosh() / 4.0).abs() < 1e-9, "{r}");
}

#[test]
fn lg_four_product() {
    for n in 0..=10u32 {
        let want = ((2 * n + 1) as f64 / (n + 1) as f64).powi(2);
        let got = 4.0 * product(StateFamily::Lg { n, m: 0 });
        assert!((got - want).abs() < 1e-9, "n={n}: {got}");
    }
}

#[test]
fn correlation_and_inference_bounds() {
    let states = [
        StateFamily::Lg { n: 2, m: 1 },
        StateFamily::Tmsv { r: 0.9 },
        StateFamily::PhotonSubtracted { r: 0.5, order: 2, k: 0 },
        StateFamily::Noon { n: 3 },
        StateFamily::Lg { n: 0, m: 0 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for f in states {
        let m = SecondMoments::of(&f.wigner().unwrap()).unwrap();
        for _ in 0..200 {
            let theta = rng.gen_range(0.0..2.0 * PI);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let c = m.correlation(theta, phi).unwrap();
            assert!(c.abs() <= 1.0 + 1e-12, "{f}: {c}");
            let inf = m.inferred_variance(theta, phi).unwrap();
            assert!(inf.variance <= m.rotated(theta, phi).xx + 1e-12);
        }
    }
}
