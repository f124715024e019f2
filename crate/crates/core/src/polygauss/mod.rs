//! Exact calculus for functions `P(v) * exp(-v^T A v)` on quadrature phase space.
//!
//! Every Wigner function handled by this crate is a polynomial times one
//! zero-mean Gaussian, so integration, marginals and moments all reduce to
//! Gaussian moments of monomials and can be done in closed form.
//!
//! The measure is `dX dP_X dY dP_Y`. Formulas written over complex
//! displacements (`d^2 alpha d^2 beta`) pick up a factor 1/4 when imported,
//! since `alpha = (X + i P_X)/sqrt(2)`.

mod moments;
mod poly;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use moments::GaussianMoments;
pub use poly::{CompiledPoly, Exponents, MultiPoly, PRUNE_RELATIVE};

/// One axis of the two-mode phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadratureLabel {
    #[serde(rename = "X")]
    X,
    #[serde(rename = "P_X")]
    Px,
    #[serde(rename = "Y")]
    Y,
    #[serde(rename = "P_Y")]
    Py,
}

impl QuadratureLabel {
    pub const ALL: [QuadratureLabel; 4] = [Self::X, Self::Px, Self::Y, Self::Py];

    /// Position in the canonical ordering `(X, P_X, Y, P_Y)`.
    pub fn index(self) -> usize {
        match self {
            Self::X => 0,
            Self::Px => 1,
            Self::Y => 2,
            Self::Py => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::X => "X",
            Self::Px => "P_X",
            Self::Y => "Y",
            Self::Py => "P_Y",
        }
    }
}

impl fmt::Display for QuadratureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuadratureLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Self::X),
            "P_X" | "PX" | "px" | "p_x" => Ok(Self::Px),
            "Y" | "y" => Ok(Self::Y),
            "P_Y" | "PY" | "py" | "p_y" => Ok(Self::Py),
            other => Err(Error::Parse(format!("unknown quadrature `{other}`"))),
        }
    }
}

/// Symmetric positive-definite matrix `A` of the exponent `-v^T A v`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm {
    m: DMatrix<f64>,
}

impl QuadForm {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 || m.nrows() > 4 {
            return Err(Error::InvalidAxes(format!(
                "quadratic form must be square of size 1..=4, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let asym = (&m - m.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::NotSymmetric(asym));
        }
        if m.iter().any(|x| !x.is_finite()) || m.clone().cholesky().is_none() {
            return Err(Error::NotIntegrable);
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_row_slice(dim: usize, rows: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(dim, dim, rows))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// `v^T A v`
    pub fn quadratic(&self, v: &[f64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            let mut row = 0.0;
            for j in 0..d {
                row += self.m[(i, j)] * v[j];
            }
            s += v[i] * row;
        }
        s
    }

    /// Covariance `A^-1 / 2` of the normalized Gaussian `exp(-v^T A v)`.
    pub fn covariance(&self) -> Result<DMatrix<f64>> {
        let chol = self.m.clone().cholesky().ok_or(Error::NotIntegrable)?;
        Ok(chol.inverse() * 0.5)
    }

    /// `integral exp(-v^T A v) dv = pi^(d/2) / sqrt(det A)`.
    pub fn gaussian_mass(&self) -> Result<f64> {
        let chol = self.m.clone().cholesky().ok_or(Error::NotIntegrable)?;
        let det = chol.determinant();
        Ok(PI.powf(self.dim() as f64 / 2.0) / det.sqrt())
    }
}

/// `P(v) * exp(-v^T A v)` over an ordered set of quadrature axes.
///
/// Optionally carries an equivalent form `Q(u) exp(-u^T B u)` in coordinates
/// `u = M v` (see [`PolyGauss::with_frame`]). When present it is used for
/// integrals, moments, marginals and point values; `poly()` and `quad()`
/// still describe the function in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGauss {
    axes: Vec<QuadratureLabel>,
    poly: MultiPoly,
    quad: QuadForm,
    frame: Option<Box<Frame>>,
}

#[derive(Clone, Debug, PartialEq)]
struct Frame {
    map: DMatrix<f64>,
    poly: MultiPoly,
    quad: QuadForm,
}

impl Frame {
    fn forms(m: &DMatrix<f64>) -> Vec<[f64; 4]> {
        (0..m.nrows())
            .map(|i| {
                let mut f = [0.0; 4];
                for (j, x) in f.iter_mut().enumerate().take(m.ncols()) {
                    *x = m[(i, j)];
                }
                f
            })
            .collect()
    }

    /// `v = M^-1 u` as substitution forms.
    fn inverse_forms(&self) -> Result<Vec<[f64; 4]>> {
        let inv = self.map.clone().try_inverse().ok_or(Error::NotIntegrable)?;
        Ok(Self::forms(&inv))
    }
}

impl PolyGauss {
    pub fn new(axes: Vec<QuadratureLabel>, poly: MultiPoly, quad: QuadForm) -> Result<Self> {
        if axes.is_empty() || axes.len() != quad.dim() {
            return Err(Error::InvalidAxes(format!(
                "{} axes for a {}-dimensional quadratic form",
                axes.len(),
                quad.dim()
            )));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(Error::InvalidAxes(format!("axis {a} repeated")));
            }
        }
        if let Some((e, _)) = poly.terms().find(|(e, _)| e[axes.len()..].iter().any(|&k| k > 0)) {
            return Err(Error::InvalidAxes(format!(
                "monomial {e:?} uses more than {} variables",
                axes.len()
            )));
        }
        Ok(Self { axes, poly, quad, frame: None })
    }

    /// Attaches the equivalent form `Q(u) exp(-u^T B u)` with `u = M v`.
    ///
    /// The caller guarantees `Q(M v) = P(v)`; `M^T B M = A` is checked.
    pub fn with_frame(mut self, map: DMatrix<f64>, poly: MultiPoly, quad: QuadForm) -> Result<Self> {
        let d = self.dim();
        if map.nrows() != d || map.ncols() != d || quad.dim() != d {
            return Err(Error::InvalidAxes(format!("frame must be {d}-dimensional")));
        }
        let back = map.transpose() * quad.matrix() * &map;
        let scale = self.quad.matrix().amax();
        if !((back - self.quad.matrix()).amax() <= 1e-9 * scale) {
            return Err(Error::InvalidParameter("frame does not reproduce the quadratic form".into()));
        }
        if map.clone().try_inverse().is_none() {
            return Err(Error::InvalidParameter("frame map is singular".into()));
        }
        self.frame = Some(Box::new(Frame { map, poly, quad }));
        Ok(self)
    }

    pub fn has_frame(&self) -> bool {
        self.frame.is_some()
    }

    /// Function over all four quadratures in canonical order.
    pub fn full(poly: MultiPoly, quad: QuadForm) -> Result<Self> {
        Self::new(QuadratureLabel::ALL.to_vec(), poly, quad)
    }

    pub fn axes(&self) -> &[QuadratureLabel] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn quad(&self) -> &QuadForm {
        &self.quad
    }

    pub fn position(&self, axis: QuadratureLabel) -> Option<usize> {
        self.axes.iter().position(|&a| a == axis)
    }

    fn require_position(&self, axis: QuadratureLabel) -> Result<usize> {
        self.position(axis)
            .ok_or_else(|| Error::InvalidAxes(format!("axis {axis} not present")))
    }

    /// `P(v) exp(-v^T A v)` at a point given in this function's axis order.
    pub fn evaluate(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim());
        match &self.frame {
            None => self.poly.eval(v) * (-self.quad.quadratic(v)).exp(),
            Some(f) => {
                let u: Vec<f64> = (0..v.len())
                    .map(|i| (0..v.len()).map(|j| f.map[(i, j)] * v[j]).sum())
                    .collect();
                f.poly.eval(&u) * (-f.quad.quadratic(&u)).exp()
            }
        }
    }

    /// Compiled evaluator for repeated point values.
    pub fn evaluator(&self) -> PointEvaluator {
        PointEvaluator::new(self)
    }

    /// Exact partial derivative along `axis`.
    pub fn differentiate(&self, axis: QuadratureLabel) -> Result<PolyGauss> {
        let p = self.require_position(axis)?;
        let d = self.dim();
        let mut out = self.poly.derivative(p);
        for j in 0..d {
            let a = self.quad.get(p, j);
            if a != 0.0 {
                out = &out - &self.poly.mul_var(j).scale(2.0 * a);
            }
        }
        Ok(Self {
            axes: self.axes.clone(),
            poly: out,
            quad: self.quad.clone(),
            frame: None,
        })
    }

    /// Multiplies the prefactor by the coordinate `axis`.
    pub fn mul_axis(&self, axis: QuadratureLabel) -> Result<PolyGauss> {
        let p = self.require_position(axis)?;
        Ok(Self {
            axes: self.axes.clone(),
            poly: self.poly.mul_var(p),
            quad: self.quad.clone(),
            frame: None,
        })
    }

    pub fn mul_poly(&self, q: &MultiPoly) -> PolyGauss {
        Self {
            axes: self.axes.clone(),
            poly: &self.poly * q,
            quad: self.quad.clone(),
            frame: None,
        }
    }

    pub fn scale(&self, s: f64) -> PolyGauss {
        Self {
            axes: self.axes.clone(),
            poly: self.poly.scale(s),
            quad: self.quad.clone(),
            frame: self.frame.as_ref().map(|f| {
                Box::new(Frame {
                    map: f.map.clone(),
                    poly: f.poly.scale(s),
                    quad: f.quad.clone(),
                })
            }),
        }
    }

    /// Sum of two functions sharing the same axes and quadratic form.
    pub fn add(&self, other: &PolyGauss) -> Result<PolyGauss> {
        if self.axes != other.axes || self.quad != other.quad {
            return Err(Error::InvalidAxes(
                "sum requires identical axes and Gaussian".into(),
            ));
        }
        Ok(Self {
            axes: self.axes.clone(),
            poly: &self.poly + &other.poly,
            quad: self.quad.clone(),
            frame: None,
        })
    }

    /// The representation used for exact integrals: `(Q, B, 1/|det M|)`.
    fn working_form(&self) -> (&MultiPoly, &QuadForm, f64) {
        match &self.frame {
            None => (&self.poly, &self.quad, 1.0),
            Some(f) => (&f.poly, &f.quad, 1.0 / f.map.determinant().abs()),
        }
    }

    /// Exact integral over all of phase space.
    pub fn integrate(&self) -> Result<f64> {
        let (poly, quad, jac) = self.working_form();
        let mass = quad.gaussian_mass()?;
        let mut g = moments_engine(quad)?;
        let s: f64 = poly.terms().map(|(e, c)| c * g.moment(*e)).sum();
        Ok(mass * s * jac)
    }

    /// Normalized moment `int v^e f / int f`, exponents in this function's axis order.
    pub fn moment(&self, e: Exponents) -> Result<f64> {
        let (poly, quad, _) = self.working_form();
        let weight = match &self.frame {
            None => MultiPoly::monomial(e, 1.0),
            Some(f) => MultiPoly::monomial(e, 1.0).substitute_linear(&f.inverse_forms()?),
        };
        let mass = quad.gaussian_mass()?;
        let mut g = moments_engine(quad)?;
        let mut num = 0.0;
        let mut den = 0.0;
        let mut den_abs = 0.0;
        for (t, c) in poly.terms() {
            let w = c * g.moment(*t);
            den += w;
            den_abs += w.abs();
            for (x, cx) in weight.terms() {
                let shifted = [t[0] + x[0], t[1] + x[1], t[2] + x[2], t[3] + x[3]];
                num += c * cx * g.moment(shifted);
            }
        }
        if !(den * mass).is_finite() || den.abs() <= 64.0 * f64::EPSILON * den_abs {
            return Err(Error::DegenerateState("zero total mass".into()));
        }
        Ok(num / den)
    }

    /// Second moments `<v_i v_j>` over this function's axes.
    pub fn second_moments(&self) -> Result<DMatrix<f64>> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut e = [0u8; 4];
                e[i] += 1;
                e[j] += 1;
                let v = self.moment(e)?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    /// Normalized `<axis^2>`.
    pub fn variance(&self, axis: QuadratureLabel) -> Result<f64> {
        let p = self.require_position(axis)?;
        let mut e = [0u8; 4];
        e[p] = 2;
        self.moment(e)
    }

    /// Exact marginal over `keep` (in the given order), integrating out the rest.
    pub fn marginalize(&self, keep: &[QuadratureLabel]) -> Result<PolyGauss> {
        let d = self.dim();
        if keep.is_empty() || keep.len() >= d {
            return Err(Error::InvalidAxes(format!(
                "marginal must keep a proper nonempty subset of {d} axes, got {}",
                keep.len()
            )));
        }
        let mut kpos = Vec::with_capacity(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            if keep[..i].contains(&a) {
                return Err(Error::InvalidAxes(format!("axis {a} repeated")));
            }
            kpos.push(self.require_position(a)?);
        }
        let ipos: Vec<usize> = (0..d).filter(|p| !kpos.contains(p)).collect();
        match &self.frame {
            None => {
                let (poly, schur) = integrate_out(&self.poly, &self.quad, &kpos, &ipos)?;
                PolyGauss::new(keep.to_vec(), poly, QuadForm::new(schur)?)
            }
            Some(f) => self.marginalize_in_frame(f, keep, &kpos),
        }
    }

    /// Rotates the frame so the kept axes depend on its first `k` coordinates
    /// only, integrates out the rest there and maps back.
    fn marginalize_in_frame(&self, f: &Frame, keep: &[QuadratureLabel], kpos: &[usize]) -> Result<PolyGauss> {
        let d = self.dim();
        let k = kpos.len();
        let inv = f.map.clone().try_inverse().ok_or(Error::NotIntegrable)?;
        // kept v = K u; an orthonormal basis whose first k vectors span K's rows
        let mut c = DMatrix::zeros(d, k + d);
        for (j, &p) in kpos.iter().enumerate() {
            for i in 0..d {
                c[(i, j)] = inv[(p, i)];
            }
        }
        for i in 0..d {
            c[(i, k + i)] = 1.0;
        }
        let qr = c.qr();
        let q = qr.q();
        let r1 = qr.r().view((0, 0), (k, k)).into_owned();
        let rotated = f.poly.substitute_linear(&Frame::forms(&q));
        let b = q.transpose() * f.quad.matrix() * &q;
        let b = QuadForm::new((&b + b.transpose()) * 0.5)?;
        let kept: Vec<usize> = (0..k).collect();
        let rest: Vec<usize> = (k..d).collect();
        let (poly, schur) = integrate_out(&rotated, &b, &kept, &rest)?;
        let schur = QuadForm::new(schur)?;
        // kept v = R1^T p
        let g = r1.transpose().try_inverse().ok_or(Error::NotIntegrable)?;
        let a = g.transpose() * schur.matrix() * &g;
        let a = QuadForm::new((&a + a.transpose()) * 0.5)?;
        // density in the kept axes is F(G w) |det G| / |det M|
        let poly = poly.scale(g.determinant().abs() / f.map.determinant().abs());
        let mut view = poly.substitute_linear(&Frame::forms(&g));
        view.prune();
        PolyGauss::new(keep.to_vec(), view, a)?.with_frame(g, poly, schur)
    }

    /// Debug dump: `{"axes": [...], "A": row-major, "terms": [{"idx": [...], "c": ..}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let d = self.dim();
        let a: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| self.quad.get(i, j)).collect())
            .collect();
        let terms: Vec<serde_json::Value> = self
            .poly
            .terms()
            .map(|(e, c)| serde_json::json!({ "idx": &e[..d], "c": c }))
            .collect();
        serde_json::json!({ "axes": self.axes, "A": a, "terms": terms })
    }
}

fn moments_engine(quad: &QuadForm) -> Result<GaussianMoments> {
    let cov = quad.covariance()?;
    let d = quad.dim();
    let mut flat = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            flat.push(cov[(i, j)]);
        }
    }
    Ok(GaussianMoments::new(d, flat))
}

/// Integrates `poly * exp(-v^T A v)` over the `ipos` coordinates, returning the
/// prefactor over the `kpos` coordinates (in that order) and the Schur complement.
fn integrate_out(poly: &MultiPoly, quad: &QuadForm, kpos: &[usize], ipos: &[usize]) -> Result<(MultiPoly, DMatrix<f64>)> {
    let d = kpos.len() + ipos.len();
    let k = kpos.len();
    let m = ipos.len();
    let a = quad.matrix();
    let akk = DMatrix::from_fn(k, k, |i, j| a[(kpos[i], kpos[j])]);
    let aki = DMatrix::from_fn(k, m, |i, j| a[(kpos[i], ipos[j])]);
    let aii = DMatrix::from_fn(m, m, |i, j| a[(ipos[i], ipos[j])]);
    let chol = aii.clone().cholesky().ok_or(Error::NotIntegrable)?;
    let aii_inv = chol.inverse();
    let det = chol.determinant();
    let schur = &akk - &aki * &aii_inv * aki.transpose();
    let schur = (&schur + schur.transpose()) * 0.5;
    // conditional mean of the integrated block: z = mean * x
    let mean = -(&aii_inv * aki.transpose());
    let cov_z = &aii_inv * 0.5;

    // old position -> linear form over (x_0..x_k, w_0..w_m)
    let mut forms = vec![[0.0f64; 4]; d];
    for (j, &p) in kpos.iter().enumerate() {
        forms[p][j] = 1.0;
    }
    for (l, &p) in ipos.iter().enumerate() {
        forms[p][k + l] = 1.0;
        for j in 0..k {
            forms[p][j] = mean[(l, j)];
        }
    }
    let sub = poly.substitute_linear(&forms);

    let mut flat = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            flat.push(cov_z[(i, j)]);
        }
    }
    let mut g = GaussianMoments::new(m, flat);
    let mass = PI.powf(m as f64 / 2.0) / det.sqrt();
    let mut out = MultiPoly::zero();
    for (e, c) in sub.terms() {
        let mut we = [0u8; 4];
        we[..m].copy_from_slice(&e[k..k + m]);
        let w = g.moment(we);
        if w == 0.0 {
            continue;
        }
        let mut ke = [0u8; 4];
        ke[..k].copy_from_slice(&e[..k]);
        out.add_term(ke, c * w * mass);
    }
    out.prune();
    Ok((out, schur))
}

/// Point evaluator for hot loops; goes through the frame when there is one.
#[derive(Clone, Debug)]
pub struct PointEvaluator {
    dim: usize,
    map: Option<[[f64; 4]; 4]>,
    poly: CompiledPoly,
    quad: [[f64; 4]; 4],
}

impl PointEvaluator {
    fn new(pg: &PolyGauss) -> Self {
        let d = pg.dim();
        let (poly, quad, map) = match &pg.frame {
            None => (&pg.poly, &pg.quad, None),
            Some(f) => (&f.poly, &f.quad, Some(to_array(&f.map))),
        };
        Self {
            dim: d,
            map,
            poly: CompiledPoly::new(poly),
            quad: to_array(quad.matrix()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        let d = self.dim;
        let mut u = [0.0; 4];
        match &self.map {
            None => u[..d].copy_from_slice(&v[..d]),
            Some(m) => {
                for i in 0..d {
                    u[i] = (0..d).map(|j| m[i][j] * v[j]).sum();
                }
            }
        }
        let mut q = 0.0;
        for i in 0..d {
            for j in 0..d {
                q += u[i] * self.quad[i][j] * u[j];
            }
        }
        let g = (-q).exp();
        if g == 0.0 {
            return 0.0;
        }
        self.poly.eval(&u[..d]) * g
    }
}

fn to_array(m: &DMatrix<f64>) -> [[f64; 4]; 4] {
    let mut a = [[0.0; 4]; 4];
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            a[i][j] = m[(i, j)];
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn vacuum() -> PolyGauss {
        PolyGauss::full(MultiPoly::constant(1.0 / (PI * PI)), QuadForm::identity(4)).unwrap()
    }

    #[test]
    fn unit_gaussian_integral_is_pi_squared() {
        let pg = PolyGauss::full(MultiPoly::constant(1.0), QuadForm::identity(4)).unwrap();
        assert!((pg.integrate().unwrap() - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn x_squared_moment_of_vacuum() {
        let pg = vacuum().mul_poly(&MultiPoly::monomial([2, 0, 0, 0], 1.0));
        assert!((pg.integrate().unwrap() - 0.5).abs() < 1e-14);
        assert!((vacuum().moment([2, 0, 0, 0]).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(vacuum().moment([1, 0, 0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn derivative_of_gaussian() {
        let pg = PolyGauss::full(MultiPoly::constant(1.0), QuadForm::identity(4)).unwrap();
        let d = pg.differentiate(QuadratureLabel::X).unwrap();
        assert_eq!(d.poly(), &MultiPoly::monomial([1, 0, 0, 0], -2.0));
        let d2 = pg.mul_axis(QuadratureLabel::X).unwrap().differentiate(QuadratureLabel::X).unwrap();
        assert_eq!(d2.poly().coeff(&[0; 4]), 1.0);
        assert_eq!(d2.poly().coeff(&[2, 0, 0, 0]), -2.0);
        let dd = d.differentiate(QuadratureLabel::X).unwrap();
        assert!(dd.integrate().unwrap().abs() < 1e-13);
    }

    #[test]
    fn vacuum_marginal_factorizes() {
        let m = vacuum()
            .marginalize(&[QuadratureLabel::X, QuadratureLabel::Py])
            .unwrap();
        assert_eq!(m.axes(), &[QuadratureLabel::X, QuadratureLabel::Py]);
        assert!((m.poly().coeff(&[0; 4]) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(m.poly().len(), 1);
        assert!((m.quad().get(0, 0) - 1.0).abs() < 1e-15);
        assert_eq!(m.quad().get(0, 1), 0.0);
    }

    #[test]
    fn rejects_indefinite_form() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(QuadForm::new(m), Err(Error::NotIntegrable));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(QuadForm::new(m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn marginalize_rejects_bad_keep_sets() {
        let v = vacuum();
        assert!(v.marginalize(&[]).is_err());
        assert!(v.marginalize(&QuadratureLabel::ALL).is_err());
        assert!(v.marginalize(&[QuadratureLabel::X, QuadratureLabel::X]).is_err());
    }

    #[test]
    fn zero_mass_moment_is_degenerate() {
        // X^2 - 1/2 integrates to zero against exp(-|v|^2)
        let p = MultiPoly::from_terms([([2, 0, 0, 0], 1.0), ([0; 4], -0.5)]);
        let pg = PolyGauss::full(p, QuadForm::identity(4)).unwrap();
        assert!(matches!(pg.moment([0, 0, 2, 0]), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn json_dump_shape() {
        let j = vacuum().to_json();
        assert_eq!(j["A"].as_array().unwrap().len(), 4);
        assert_eq!(j["terms"][0]["idx"].as_array().unwrap().len(), 4);
    }
}
