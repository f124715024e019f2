//! Wigner functions of the supported two-mode state families, expressed in
//! the dimensionless quadratures `(X, P_X, Y, P_Y)`.
//!
//! Phases are fixed: the squeezing phase of the two-mode squeezed vacuum is 0
//! and the relative phase of the N00N superposition is pi.
//!
//! For the photon-subtracted family, `k = 1` (the `a - b` subtraction) is the
//! branch whose single-subtraction Wigner function carries the `(X - Y)^2` and
//! `(P_X - P_Y)^2` structure; `k = 0` gives the mirrored `(X + Y)^2`,
//! `(P_X + P_Y)^2` form. Both give the same Reid product.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygauss::{MultiPoly, PolyGauss, QuadForm, QuadratureLabel};

/// Parametric descriptor of a two-mode state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily {
    /// Laguerre-Gaussian mode of the 2D oscillator.
    Lg { n: u32, m: u32 },
    /// Two-mode squeezed vacuum.
    Tmsv { r: f64 },
    /// `(a + (-1)^k b)^order` applied to the squeezed vacuum, normalized.
    PhotonSubtracted { r: f64, order: u32, k: u32 },
    Noon { n: u32 },
}

impl StateFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::Lg { .. } => Ok(()),
            StateFamily::Tmsv { r } => check_r(r),
            StateFamily::PhotonSubtracted { r, order, k } => {
                check_r(r)?;
                if !(1..=2).contains(&order) {
                    return Err(Error::InvalidParameter(format!("order must be 1 or 2, got {order}")));
                }
                if k > 1 {
                    return Err(Error::InvalidParameter(format!("k must be 0 or 1, got {k}")));
                }
                Ok(())
            }
            StateFamily::Noon { n } => {
                if n == 0 {
                    Err(Error::InvalidParameter("N00N photon number must be >= 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Normalized Wigner function of this state.
    pub fn wigner(&self) -> Result<PolyGauss> {
        self.validate()?;
        match *self {
            StateFamily::Lg { n, m } => lg_wigner(n, m),
            StateFamily::Tmsv { r } => tmsv_wigner(r),
            StateFamily::PhotonSubtracted { r, order, k } => subtract_photons(r, order, k),
            StateFamily::Noon { n } => noon_wigner(n),
        }
    }

    /// Squeezing parameter, for the families that have one.
    pub fn squeezing(&self) -> Option<f64> {
        match *self {
            StateFamily::Tmsv { r } | StateFamily::PhotonSubtracted { r, .. } => Some(r),
            _ => None,
        }
    }

    /// Same family with a different squeezing parameter.
    pub fn with_squeezing(&self, r: f64) -> Option<StateFamily> {
        match *self {
            StateFamily::Tmsv { .. } => Some(StateFamily::Tmsv { r }),
            StateFamily::PhotonSubtracted { order, k, .. } => {
                Some(StateFamily::PhotonSubtracted { r, order, k })
            }
            _ => None,
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("squeezing r must be finite and >= 0, got {r}")))
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateFamily::Lg { n, m } => write!(f, "lg:n={n},m={m}"),
            StateFamily::Tmsv { r } => write!(f, "tmsv:r={r}"),
            StateFamily::PhotonSubtracted { r, order, k } => {
                write!(f, "sub:r={r},order={order},k={k}")
            }
            StateFamily::Noon { n } => write!(f, "noon:N={n}"),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// Grammar: `lg:n=<int>,m=<int>` | `tmsv:r=<float>` |
    /// `sub:r=<float>,order=<1|2>,k=<0|1>` | `noon:N=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("state `{s}`: expected `<family>:<key>=<value>,...`")))?;
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for item in rest.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("state `{s}`: malformed parameter `{item}`")))?;
            let k = k.trim();
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Parse(format!("state `{s}`: duplicate key `{k}`")));
            }
            pairs.push((k, v.trim()));
        }
        let allowed: &[&str] = match kind {
            "lg" => &["n", "m"],
            "tmsv" => &["r"],
            "sub" => &["r", "order", "k"],
            "noon" => &["N"],
            other => return Err(Error::Parse(format!("unknown state family `{other}`"))),
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(Error::Parse(format!("state `{s}`: unknown key `{k}`")));
        }
        let get = |key: &str| -> Result<&str> {
            pairs
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("state `{s}`: missing key `{key}`")))
        };
        let int = |key: &str| -> Result<u32> {
            get(key)?
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("state `{s}`: `{key}`: {e}")))
        };
        let real = |key: &str| -> Result<f64> {
            get(key)?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("state `{s}`: `{key}`: {e}")))
        };
        let family = match kind {
            "lg" => StateFamily::Lg { n: int("n")?, m: int("m")? },
            "tmsv" => StateFamily::Tmsv { r: real("r")? },
            "sub" => StateFamily::PhotonSubtracted {
                r: real("r")?,
                order: int("order")?,
                k: int("k")?,
            },
            _ => StateFamily::Noon { n: int("N")? },
        };
        family.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(family)
    }
}

/// Coefficients of the Laguerre polynomial `L_n(u) = sum_k c_k u^k`.
pub fn laguerre_coefficients(n: u32) -> Vec<f64> {
    let n = n as usize;
    let mut c = Vec::with_capacity(n + 1);
    let mut binom = 1.0f64;
    let mut fact = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n + 1 - k) as f64 / k as f64;
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c.push(sign * binom / fact);
    }
    c
}

/// `L_n(u)` for a polynomial argument, by Horner's rule.
fn laguerre_of(n: u32, u: &MultiPoly) -> MultiPoly {
    let c = laguerre_coefficients(n);
    let mut acc = MultiPoly::constant(c[n as usize]);
    for k in (0..n as usize).rev() {
        acc = &(&acc * u) + &MultiPoly::constant(c[k]);
    }
    acc
}

fn square_of_linear(coeffs: [f64; 4]) -> MultiPoly {
    let l = MultiPoly::linear(&coeffs);
    &l * &l
}

/// Laguerre-Gaussian `W_nm = (-1)^(n+m)/pi^2 L_n[4(Q0+Q2)] L_m[4(Q0-Q2)] e^(-4 Q0)`
/// with `Q0 = |v|^2/4` and `Q2 = (X P_Y - Y P_X)/2`.
pub fn lg_wigner(n: u32, m: u32) -> Result<PolyGauss> {
    // 4(Q0 + Q2) = (X + P_Y)^2 + (P_X - Y)^2
    let plus = &square_of_linear([1.0, 0.0, 0.0, 1.0]) + &square_of_linear([0.0, 1.0, -1.0, 0.0]);
    // 4(Q0 - Q2) = (X - P_Y)^2 + (P_X + Y)^2
    let minus = &square_of_linear([1.0, 0.0, 0.0, -1.0]) + &square_of_linear([0.0, 1.0, 1.0, 0.0]);
    let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
    let poly = (&laguerre_of(n, &plus) * &laguerre_of(m, &minus)).scale(sign / (PI * PI));
    PolyGauss::full(poly, QuadForm::identity(4))
}

/// Quadratic form of the two-mode squeezed vacuum:
/// `v^T A v = |v|^2 cosh 2r - 2 sinh 2r (X Y - P_X P_Y)`.
pub fn tmsv_quad_form(r: f64) -> Result<QuadForm> {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    #[rustfmt::skip]
    let rows = [
        c,   0.0, -s,  0.0,
        0.0, c,   0.0, s,
        -s,  0.0, c,   0.0,
        0.0, s,   0.0, c,
    ];
    QuadForm::from_row_slice(4, &rows)
}

pub fn tmsv_wigner(r: f64) -> Result<PolyGauss> {
    check_r(r)?;
    PolyGauss::full(MultiPoly::constant(1.0 / (PI * PI)), tmsv_quad_form(r)?)
}

/// One application of the subtraction map for `(a + s b)`, `s = +-1`:
/// `W -> 1/2 [D1^2 + D2^2] W` with `D1 = (X + sY) + (d_X + s d_Y)/2` and
/// `D2 = (P_X + sP_Y) + (d_PX + s d_PY)/2`.
pub fn apply_subtraction(w: &PolyGauss, s: f64) -> Result<PolyGauss> {
    use QuadratureLabel::*;
    let ladder = |f: &PolyGauss, q: QuadratureLabel, p: QuadratureLabel| -> Result<PolyGauss> {
        let mult = f.mul_axis(q)?.add(&f.mul_axis(p)?.scale(s))?;
        let deriv = f.differentiate(q)?.add(&f.differentiate(p)?.scale(s))?;
        mult.add(&deriv.scale(0.5))
    };
    let d1 = ladder(&ladder(w, X, Y)?, X, Y)?;
    let d2 = ladder(&ladder(w, Px, Py)?, Px, Py)?;
    Ok(d1.add(&d2)?.scale(0.5))
}

/// Photon-subtracted squeezed vacuum, renormalized to unit integral.
///
/// The subtraction is carried out in whitened coordinates `z`, with
/// `v = T z` and `v^T A v = |z|^2`, where the polynomial keeps coefficients
/// of order one. Expanding in `v` first would mix `e^{2r}` and `e^{-2r}`
/// scales and lose the normalization to cancellation at large `r`.
pub fn subtract_photons(r: f64, order: u32, k: u32) -> Result<PolyGauss> {
    use QuadratureLabel::*;
    StateFamily::PhotonSubtracted { r, order, k }.validate()?;
    if r <= 0.0 {
        return Err(Error::DegenerateState(
            "photon subtraction from the vacuum (r = 0) gives the zero vector".into(),
        ));
    }
    let s = if k == 0 { 1.0 } else { -1.0 };
    let (t, t_inv) = tmsv_whitening(r);
    let transform = |c: [f64; 4]| {
        let mut m = [0.0; 4];
        let mut d = [0.0; 4];
        for j in 0..4 {
            for i in 0..4 {
                m[j] += t[i][j] * c[i];
                d[j] += t_inv[j][i] * c[i];
            }
        }
        (m, d)
    };
    let mut c1 = [0.0; 4];
    c1[X.index()] = 1.0;
    c1[Y.index()] = s;
    let mut c2 = [0.0; 4];
    c2[Px.index()] = 1.0;
    c2[Py.index()] = s;
    let (m1, d1) = transform(c1);
    let (m2, d2) = transform(c2);

    // |det T| = 1, so the whitened function integrates to the same value
    let mut w = PolyGauss::full(MultiPoly::constant(1.0 / (PI * PI)), QuadForm::identity(4))?;
    for _ in 0..order {
        let a = ladder(&ladder(&w, &m1, &d1)?, &m1, &d1)?;
        let b = ladder(&ladder(&w, &m2, &d2)?, &m2, &d2)?;
        w = a.add(&b)?.scale(0.5);
        let z = w.integrate()?;
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::DegenerateState(format!("subtracted state has norm {z}")));
        }
        w = w.scale(1.0 / z);
    }
    let map = DMatrix::from_fn(4, 4, |i, j| t_inv[i][j]);
    PolyGauss::full(w.poly().substitute_linear(&t_inv), tmsv_quad_form(r)?)?.with_frame(
        map,
        w.poly().clone(),
        QuadForm::identity(4),
    )
}

/// `f -> (m . z) f + 1/2 (d . grad) f`.
fn ladder(f: &PolyGauss, m: &[f64; 4], d: &[f64; 4]) -> Result<PolyGauss> {
    let mut out = f.mul_poly(&MultiPoly::linear(m));
    for (i, &di) in d.iter().enumerate() {
        if di != 0.0 {
            out = out.add(&f.differentiate(QuadratureLabel::ALL[i])?.scale(0.5 * di))?;
        }
    }
    Ok(out)
}

/// Rows of `T` (`v = T z`) and of `T^{-1}` for the squeezed vacuum quadratic
/// form. `z` runs over `(X - Y)`, `(P_X + P_Y)`, `(X + Y)`, `(P_X - P_Y)`,
/// each scaled to unit Gaussian width.
fn tmsv_whitening(r: f64) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = ((-r).exp(), r.exp());
    #[rustfmt::skip]
    let t = [
        [h * a, 0.0, h * b, 0.0],
        [0.0, h * a, 0.0, h * b],
        [-h * a, 0.0, h * b, 0.0],
        [0.0, h * a, 0.0, -h * b],
    ];
    #[rustfmt::skip]
    let t_inv = [
        [h / a, 0.0, -h / a, 0.0],
        [0.0, h / a, 0.0, h / a],
        [h / b, 0.0, h / b, 0.0],
        [0.0, h / b, 0.0, -h / b],
    ];
    (t, t_inv)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// N00N state `(|N,0> - |0,N>)/sqrt 2`.
pub fn noon_wigner(n: u32) -> Result<PolyGauss> {
    StateFamily::Noon { n }.validate()?;
    let nf: f64 = (1..=n).map(|i| i as f64).product();
    // (X + i P_X)^N (Y - i P_Y)^N + c.c.
    let mut cross = MultiPoly::zero();
    for a in 0..=n {
        for b in 0..=n {
            if (a + b) % 2 == 1 {
                continue;
            }
            let re_i = if ((a + b) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let sign_b = if b % 2 == 0 { 1.0 } else { -1.0 };
            let c = 2.0 * binomial(n, a) * binomial(n, b) * sign_b * re_i;
            cross.add_term([(n - a) as u8, a as u8, (n - b) as u8, b as u8], c);
        }
    }
    let rad_a = square_of_linear([1.0, 0.0, 0.0, 0.0]).scale(2.0);
    let rad_a = &rad_a + &square_of_linear([0.0, 1.0, 0.0, 0.0]).scale(2.0);
    let rad_b = &square_of_linear([0.0, 0.0, 1.0, 0.0]).scale(2.0)
        + &square_of_linear([0.0, 0.0, 0.0, 1.0]).scale(2.0);
    let lag = &laguerre_of(n, &rad_a) + &laguerre_of(n, &rad_b);
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let bracket = &cross.scale(-(2f64.powi(n as i32))) + &lag.scale(parity * nf);
    let poly = bracket.scale(1.0 / (2.0 * PI * PI * nf));
    PolyGauss::full(poly, QuadForm::identity(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi2() -> f64 {
        PI * PI
    }

    #[test]
    fn laguerre_small_orders() {
        assert_eq!(laguerre_coefficients(0), vec![1.0]);
        assert_eq!(laguerre_coefficients(1), vec![1.0, -1.0]);
        assert_eq!(laguerre_coefficients(2), vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn lg00_is_vacuum() {
        let w = lg_wigner(0, 0).unwrap();
        assert_eq!(w.poly().len(), 1);
        assert!((w.evaluate(&[0.0; 4]) - 1.0 / pi2()).abs() < 1e-16);
    }

    #[test]
    fn lg10_matches_printed_form() {
        let w = lg_wigner(1, 0).unwrap();
        for v in [[0.0f64; 4], [0.3, -0.2, 0.7, 1.1], [-1.0, 0.5, 0.25, -0.75]] {
            let [x, px, y, py] = v;
            let printed = (-(x * x + y * y + px * px + py * py)).exp()
                * ((px - y).powi(2) + (py + x).powi(2) - 1.0)
                / pi2();
            assert!((w.evaluate(&v) - printed).abs() < 1e-15);
        }
        assert!((w.evaluate(&[0.0; 4]) + 1.0 / pi2()).abs() < 1e-16);
    }

    #[test]
    fn tmsv_at_zero_squeezing_is_vacuum() {
        let w = tmsv_wigner(0.0).unwrap();
        assert!((w.evaluate(&[0.0; 4]) - 1.0 / pi2()).abs() < 1e-16);
        assert_eq!(w.quad(), &QuadForm::identity(4));
    }

    #[test]
    fn whitened_subtraction_matches_direct_operator() {
        for (order, k) in [(1, 0), (1, 1), (2, 1)] {
            let r = 0.7;
            let s = if k == 0 { 1.0 } else { -1.0 };
            let mut direct = tmsv_wigner(r).unwrap();
            for _ in 0..order {
                direct = apply_subtraction(&direct, s).unwrap();
            }
            let direct = direct.scale(1.0 / direct.integrate().unwrap());
            let w = subtract_photons(r, order, k).unwrap();
            for v in [[0.0, 0.0, 0.0, 0.0], [0.3, -0.2, 0.5, 0.1], [-1.0, 0.4, 0.2, 0.9]] {
                let (a, b) = (w.evaluate(&v), direct.evaluate(&v));
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "order {order} k {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn large_squeezing_stays_normalized() {
        for r in [3.0, 4.4, 5.0] {
            let w = subtract_photons(r, 2, 1).unwrap();
            let p = w.evaluate(&[0.0; 4]) * PI * PI;
            assert!(p.is_finite() && p.abs() <= 1.0 + 1e-9);
            assert!((w.integrate().unwrap() - 1.0).abs() < 1e-12, "r={r}");
            let xy = w.marginalize(&[QuadratureLabel::X, QuadratureLabel::Y]).unwrap();
            assert!((xy.integrate().unwrap() - 1.0).abs() < 1e-12, "r={r}");
            let x = xy.marginalize(&[QuadratureLabel::X]).unwrap();
            assert!((x.integrate().unwrap() - 1.0).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn frame_agrees_with_expansion_at_moderate_squeezing() {
        use QuadratureLabel::*;
        let w = subtract_photons(0.7, 2, 0).unwrap();
        assert!(w.has_frame());
        let plain = PolyGauss::full(w.poly().clone(), w.quad().clone()).unwrap();
        let pts = [[0.3, -0.2, 0.5, 1.1], [-1.0, 0.4, 0.0, -0.7], [2.0, 1.5, 1.8, -1.2]];
        for v in pts {
            let (a, b) = (w.evaluate(&v), plain.evaluate(&v));
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        for (i, j) in [(0, 0), (0, 2), (1, 3), (2, 2), (0, 3)] {
            let mut e = [0u8; 4];
            e[i] += 1;
            e[j] += 1;
            let (a, b) = (w.moment(e).unwrap(), plain.moment(e).unwrap());
            assert!((a - b).abs() < 1e-11, "{e:?}: {a} vs {b}");
        }
        for keep in [&[X, Y][..], &[X, Py], &[Py, Px], &[Y], &[Px]] {
            let (m, n) = (w.marginalize(keep).unwrap(), plain.marginalize(keep).unwrap());
            assert!(m.has_frame() && !n.has_frame());
            assert_eq!(m.axes(), n.axes());
            for v in pts {
                let (a, b) = (m.evaluate(&v[..keep.len()]), n.evaluate(&v[..keep.len()]));
                assert!((a - b).abs() < 1e-13, "{keep:?} at {v:?}: {a} vs {b}");
            }
            for (e, c) in n.poly().terms() {
                assert!((m.poly().coeff(e) - c).abs() < 1e-10 * n.poly().max_abs_coeff());
            }
            assert!((m.quad().matrix() - n.quad().matrix()).amax() < 1e-12);
        }
        let inner = w.marginalize(&[X, Y]).unwrap().marginalize(&[Y]).unwrap();
        let direct = plain.marginalize(&[Y]).unwrap();
        for y in [-1.0, 0.2, 2.5] {
            assert!((inner.evaluate(&[y]) - direct.evaluate(&[y])).abs() < 1e-13);
        }
    }

    #[test]
    fn subtraction_rejects_zero_squeezing() {
        assert!(matches!(subtract_photons(0.0, 1, 1), Err(Error::DegenerateState(_))));
        assert!(matches!(subtract_photons(1.0, 3, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn noon_one_at_origin() {
        let w = noon_wigner(1).unwrap();
        assert!((w.evaluate(&[0.0; 4]) + 1.0 / pi2()).abs() < 1e-16);
    }

    #[test]
    fn noon_two_is_even_quartic() {
        let w = noon_wigner(2).unwrap();
        assert_eq!(w.poly().degree(), 4);
        assert!(w.poly().is_even());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["lg:n=1,m=0", "tmsv:r=1", "sub:r=1.5,order=2,k=1", "noon:N=3"] {
            let f: StateFamily = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<StateFamily>().unwrap(), f);
        }
        assert_eq!(
            "sub:r=1.0,order=1,k=1".parse::<StateFamily>().unwrap(),
            StateFamily::PhotonSubtracted { r: 1.0, order: 1, k: 1 }
        );
    }

    #[test]
    fn parse_rejects_bad_input() {
        for s in [
            "lg:n=1",
            "lg:n=1,m=0,q=2",
            "tmsv:r=-1",
            "sub:r=1,order=3,k=0",
            "sub:r=1,order=1,k=2",
            "noon:N=0",
            "coherent:a=1",
            "tmsv",
            "lg:n=1,n=2,m=0",
            "tmsv:r=abc",
        ] {
            assert!(s.parse::<StateFamily>().is_err(), "{s} should be rejected");
        }
    }
}
