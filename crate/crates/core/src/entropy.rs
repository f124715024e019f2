//! Differential entropies of quadrature marginals on uniform midpoint grids.
//!
//! Marginals are taken analytically (see [`PolyGauss::marginalize`]) and then
//! sampled at cell midpoints. Entropies are in nats.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygauss::{PointEvaluator, PolyGauss, QuadratureLabel};

pub const DEFAULT_NODES_1D: usize = 8192;
pub const DEFAULT_NODES_2D: usize = 1024;
pub const MIN_NODES: usize = 16;
pub const DEFAULT_HALF_WIDTH_MULT: f64 = 6.0;
/// Minimum number of cells across the narrowest principal width of a 2D joint.
pub const RIDGE_CELLS: f64 = 24.0;
/// Allowed truncation loss of probability mass.
pub const MASS_TOL: f64 = 1e-4;
/// Densities below `-NEGATIVITY_TOL` are treated as a genuine error rather than round-off.
pub const NEGATIVITY_TOL: f64 = 1e-10;
/// Largest automatic grid. Strong squeezing (r around 3) would otherwise ask
/// for ~10^9 points per 2D marginal.
pub const MAX_GRID_POINTS: u64 = 1 << 30;
const TINY_DENSITY: f64 = 1e-300;

/// Uniform midpoint grid, symmetric about the origin on every axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_widths: Vec<f64>,
    pub nodes: Vec<usize>,
}

impl GridSpec {
    pub fn new(half_widths: Vec<f64>, nodes: Vec<usize>) -> Result<Self> {
        if half_widths.is_empty() || half_widths.len() > 2 || half_widths.len() != nodes.len() {
            return Err(Error::InvalidParameter(
                "grid must have one or two axes with matching half-widths and node counts".into(),
            ));
        }
        if let Some(h) = half_widths.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            return Err(Error::InvalidParameter(format!("half-width must be positive, got {h}")));
        }
        if let Some(n) = nodes.iter().find(|&&n| n < MIN_NODES) {
            return Err(Error::InvalidParameter(format!(
                "node count must be at least {MIN_NODES}, got {n}"
            )));
        }
        Ok(Self { half_widths, nodes })
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn cell_width(&self, axis: usize) -> f64 {
        2.0 * self.half_widths[axis] / self.nodes[axis] as f64
    }

    pub fn cell_area(&self) -> f64 {
        (0..self.dim()).map(|a| self.cell_width(a)).product()
    }

    pub fn midpoint(&self, axis: usize, i: usize) -> f64 {
        -self.half_widths[axis] + (i as f64 + 0.5) * self.cell_width(axis)
    }

    pub fn len(&self) -> usize {
        self.nodes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same extent with `factor` times as many cells per axis.
    pub fn refined(&self, factor: usize) -> GridSpec {
        GridSpec {
            half_widths: self.half_widths.clone(),
            nodes: self.nodes.iter().map(|n| n * factor.max(1)).collect(),
        }
    }
}

/// Overrides for [`auto_grid_with`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub half_width_mult: f64,
    /// Base node count per axis; defaults depend on dimension.
    pub nodes: Option<usize>,
    /// Multiplies the final node count.
    pub refine: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            half_width_mult: DEFAULT_HALF_WIDTH_MULT,
            nodes: None,
            refine: 1,
        }
    }
}

impl GridOptions {
    pub fn refined(&self, factor: usize) -> GridOptions {
        GridOptions {
            refine: self.refine * factor,
            ..self.clone()
        }
    }
}

pub fn auto_grid(pg: &PolyGauss, axes: &[QuadratureLabel]) -> Result<GridSpec> {
    auto_grid_with(pg, axes, &GridOptions::default())
}

/// Half-width `mult * sigma + 1` per axis from analytic variances. 2D grids
/// get at least `RIDGE_CELLS` cells across the narrowest principal width.
/// Fails with [`Error::GridTooLarge`] above [`MAX_GRID_POINTS`].
pub fn auto_grid_with(pg: &PolyGauss, axes: &[QuadratureLabel], opts: &GridOptions) -> Result<GridSpec> {
    if axes.is_empty() || axes.len() > 2 || (axes.len() == 2 && axes[0] == axes[1]) {
        return Err(Error::InvalidAxes("distribution needs one or two distinct axes".into()));
    }
    if !(opts.half_width_mult.is_finite() && opts.half_width_mult > 0.0) {
        return Err(Error::InvalidParameter("half-width multiplier must be positive".into()));
    }
    let mut vars = Vec::with_capacity(axes.len());
    for &a in axes {
        let v = pg.variance(a)?;
        if !(v > 0.0) {
            return Err(Error::DegenerateState(format!("variance of {a} is {v}")));
        }
        vars.push(v);
    }
    let half_widths: Vec<f64> = vars.iter().map(|v| opts.half_width_mult * v.sqrt() + 1.0).collect();
    let nodes = if axes.len() == 1 {
        vec![opts.nodes.unwrap_or(DEFAULT_NODES_1D)]
    } else {
        let base = opts.nodes.unwrap_or(DEFAULT_NODES_2D);
        let (pa, pb) = (pg.position(axes[0]).unwrap(), pg.position(axes[1]).unwrap());
        let mut e = [0u8; 4];
        e[pa] += 1;
        e[pb] += 1;
        let cov = pg.moment(e)?;
        let (va, vb) = (vars[0], vars[1]);
        let tr = va + vb;
        let disc = ((va - vb).powi(2) + 4.0 * cov * cov).sqrt();
        // smaller eigenvalue, written to avoid cancellation
        let lam_min = (va * vb - cov * cov) / (0.5 * (tr + disc));
        let sigma_min = lam_min.max(0.0).sqrt();
        half_widths
            .iter()
            .map(|hw| {
                let ridge = if sigma_min > 0.0 {
                    (RIDGE_CELLS * hw / sigma_min).ceil() as usize
                } else {
                    base
                };
                base.max(ridge)
            })
            .collect()
    };
    let nodes: Vec<usize> = nodes.into_iter().map(|n| n * opts.refine.max(1)).collect();
    let points = nodes.iter().fold(1u64, |acc, &n| acc.saturating_mul(n as u64));
    if points > MAX_GRID_POINTS {
        return Err(Error::GridTooLarge { points, limit: MAX_GRID_POINTS });
    }
    GridSpec::new(half_widths, nodes)
}

/// Marginal density prepared for row-by-row evaluation.
struct DensityKernel {
    spec: GridSpec,
    /// 1D: coefficients of x^i. 2D: `rows[j]` lists `(i, c)` for the `x^i y^j` terms.
    by_y_power: Vec<Vec<(u32, f64)>>,
    a: f64,
    b: f64,
    c: f64,
    /// Set for marginals carrying a frame; used instead of the expansion.
    point: Option<PointEvaluator>,
}

impl DensityKernel {
    fn new(marginal: &PolyGauss, spec: &GridSpec) -> Result<Self> {
        let d = marginal.dim();
        if d != spec.dim() {
            return Err(Error::InvalidAxes(format!(
                "grid has {} axes, marginal has {d}",
                spec.dim()
            )));
        }
        let max_j = if d == 2 { marginal.poly().max_exponent(1) } else { 0 };
        let mut by_y_power = vec![Vec::new(); max_j + 1];
        for (e, c) in marginal.poly().terms() {
            let j = if d == 2 { e[1] as usize } else { 0 };
            by_y_power[j].push((e[0] as u32, *c));
        }
        let q = marginal.quad();
        let (a, b, c) = if d == 2 {
            (q.get(0, 0), q.get(0, 1), q.get(1, 1))
        } else {
            (q.get(0, 0), 0.0, 0.0)
        };
        Ok(Self {
            spec: spec.clone(),
            by_y_power,
            a,
            b,
            c,
            point: marginal.has_frame().then(|| marginal.evaluator()),
        })
    }

    fn rows(&self) -> usize {
        self.spec.nodes[0]
    }

    fn row_len(&self) -> usize {
        if self.spec.dim() == 2 {
            self.spec.nodes[1]
        } else {
            1
        }
    }

    fn poly_x(coeffs: &[(u32, f64)], x: f64) -> f64 {
        coeffs.iter().map(|(i, c)| c * x.powi(*i as i32)).sum()
    }

    /// Raw (unclamped) densities of row `i` into `out`.
    fn fill_row(&self, i: usize, out: &mut [f64]) {
        let x = self.spec.midpoint(0, i);
        if let Some(pe) = &self.point {
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = if self.spec.dim() == 1 { pe.eval(&[x]) } else { pe.eval(&[x, self.spec.midpoint(1, j)]) };
            }
            return;
        }
        if self.spec.dim() == 1 {
            out[0] = Self::poly_x(&self.by_y_power[0], x) * (-self.a * x * x).exp();
            return;
        }
        let cy: Vec<f64> = self.by_y_power.iter().map(|t| Self::poly_x(t, x)).collect();
        let ax2 = self.a * x * x;
        let bx2 = 2.0 * self.b * x;
        for (j, slot) in out.iter_mut().enumerate() {
            let y = self.spec.midpoint(1, j);
            let mut p = 0.0;
            for c in cy.iter().rev() {
                p = p * y + c;
            }
            *slot = p * (-(ax2 + bx2 * y + self.c * y * y)).exp();
        }
    }
}

fn marginal_for(pg: &PolyGauss, axes: &[QuadratureLabel]) -> Result<PolyGauss> {
    if pg.axes() == axes {
        Ok(pg.clone())
    } else {
        pg.marginalize(axes)
    }
}

/// Neumaier-compensated sum in slice order.
fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn neg_p_ln_p(p: f64) -> f64 {
    if p < TINY_DENSITY {
        0.0
    } else {
        -p * p.ln()
    }
}

#[derive(Clone, Copy, Debug)]
struct RowStats {
    min: f64,
    mass: f64,
    clamped: f64,
    entropy: f64,
}

fn check_stats(stats: &[RowStats], area: f64) -> Result<(f64, f64)> {
    let min = stats.iter().fold(f64::INFINITY, |m, s| m.min(s.min));
    if min < -NEGATIVITY_TOL {
        return Err(Error::MarginalNegativity { min });
    }
    let mass = compensated_sum(stats.iter().map(|s| s.mass)) * area;
    if !(mass >= 1.0 - MASS_TOL && mass <= 1.0 + 1e-9) {
        return Err(Error::MassLoss { mass });
    }
    let entropy = compensated_sum(stats.iter().map(|s| s.entropy)) * area;
    Ok((mass, entropy))
}

fn row_stats(row: &mut [f64]) -> RowStats {
    let mut min = f64::INFINITY;
    let mut clamped = 0.0;
    for p in row.iter_mut() {
        min = min.min(*p);
        if *p < 0.0 {
            clamped += -*p;
            *p = 0.0;
        }
    }
    RowStats {
        min,
        mass: compensated_sum(row.iter().copied()),
        clamped,
        entropy: compensated_sum(row.iter().map(|&p| neg_p_ln_p(p))),
    }
}

/// A sampled 1D or 2D probability density over quadrature axes.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionGrid {
    axes: Vec<QuadratureLabel>,
    spec: GridSpec,
    /// Row-major, first axis outer.
    values: Vec<f64>,
    mass: f64,
    clamped_mass: f64,
}

impl DistributionGrid {
    pub fn axes(&self) -> &[QuadratureLabel] {
        &self.axes
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `sum(values) * cell_area` after clamping.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Probability mass removed by clamping tiny negative values.
    pub fn clamped_mass(&self) -> f64 {
        self.clamped_mass
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// CSV with header `axis1,axis2,density` (2D) or `axis,density` (1D),
    /// midpoint coordinates, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        if self.spec.dim() == 2 {
            writeln!(w, "axis1,axis2,density")?;
            let ny = self.spec.nodes[1];
            for (idx, p) in self.values.iter().enumerate() {
                let (i, j) = (idx / ny, idx % ny);
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_sig(self.spec.midpoint(0, i)),
                    fmt_sig(self.spec.midpoint(1, j)),
                    fmt_sig(*p)
                )?;
            }
        } else {
            writeln!(w, "axis,density")?;
            for (i, p) in self.values.iter().enumerate() {
                writeln!(w, "{},{}", fmt_sig(self.spec.midpoint(0, i)), fmt_sig(*p))?;
            }
        }
        Ok(())
    }
}

/// Formats with 17 significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.16e}")
}

/// Samples the exact marginal over `axes` at the midpoints of `spec`.
pub fn sample_distribution(pg: &PolyGauss, axes: &[QuadratureLabel], spec: &GridSpec) -> Result<DistributionGrid> {
    if axes.len() != spec.dim() {
        return Err(Error::InvalidAxes("axes and grid dimension differ".into()));
    }
    let marginal = marginal_for(pg, axes)?;
    let kernel = DensityKernel::new(&marginal, spec)?;
    let row_len = kernel.row_len();
    let mut values = vec![0.0; spec.len()];
    let stats: Vec<RowStats> = values
        .par_chunks_mut(row_len)
        .enumerate()
        .map(|(i, row)| {
            kernel.fill_row(i, row);
            row_stats(row)
        })
        .collect();
    let area = spec.cell_area();
    let (mass, _) = check_stats(&stats, area)?;
    let clamped_mass = stats.iter().map(|s| s.clamped).sum::<f64>() * area;
    Ok(DistributionGrid {
        axes: axes.to_vec(),
        spec: spec.clone(),
        values,
        mass,
        clamped_mass,
    })
}

/// Midpoint-rule `-sum p ln p * area`, with `0 ln 0 = 0`.
pub fn differential_entropy(d: &DistributionGrid) -> f64 {
    let row_len = if d.spec.dim() == 2 { d.spec.nodes[1] } else { 1 };
    let rows: Vec<f64> = d
        .values
        .par_chunks(row_len)
        .map(|row| compensated_sum(row.iter().map(|&p| neg_p_ln_p(p))))
        .collect();
    compensated_sum(rows) * d.spec.cell_area()
}

/// Entropy of the marginal over `axes` without materializing the grid.
/// Pairs are evaluated in canonical axis order, so `h(X, Y)` and `h(Y, X)`
/// agree exactly; for canonical order the result is bit-identical to
/// `differential_entropy(&sample_distribution(..))`.
pub fn grid_entropy(pg: &PolyGauss, axes: &[QuadratureLabel], spec: &GridSpec) -> Result<f64> {
    if axes.len() != spec.dim() {
        return Err(Error::InvalidAxes("axes and grid dimension differ".into()));
    }
    if axes.len() == 2 && axes[0].index() > axes[1].index() {
        let swapped = GridSpec::new(
            vec![spec.half_widths[1], spec.half_widths[0]],
            vec![spec.nodes[1], spec.nodes[0]],
        )?;
        return grid_entropy(pg, &[axes[1], axes[0]], &swapped);
    }
    let marginal = marginal_for(pg, axes)?;
    let kernel = DensityKernel::new(&marginal, spec)?;
    let row_len = kernel.row_len();
    let stats: Vec<RowStats> = (0..kernel.rows())
        .into_par_iter()
        .map_init(
            || vec![0.0; row_len],
            |buf, i| {
                kernel.fill_row(i, buf);
                row_stats(buf)
            },
        )
        .collect();
    let (_, h) = check_stats(&stats, spec.cell_area())?;
    Ok(h)
}

/// Entropy of the marginal over `axes` on an automatically sized grid.
pub fn marginal_entropy(pg: &PolyGauss, axes: &[QuadratureLabel], opts: &GridOptions) -> Result<f64> {
    let spec = auto_grid_with(pg, axes, opts)?;
    grid_entropy(pg, axes, &spec)
}

/// `h(target | given) = h(target, given) - h(given)`.
pub fn conditional_entropy(
    pg: &PolyGauss,
    target: QuadratureLabel,
    given: QuadratureLabel,
    opts: &GridOptions,
) -> Result<f64> {
    if target == given {
        return Err(Error::InvalidAxes(format!("cannot condition {target} on itself")));
    }
    let joint = marginal_entropy(pg, &[given, target], opts)?;
    let marginal = marginal_entropy(pg, &[given], opts)?;
    Ok(joint - marginal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{lg_wigner, tmsv_wigner};
    use std::f64::consts::{E, PI};
    use QuadratureLabel::*;

    #[test]
    fn vacuum_grid_size() {
        let w = lg_wigner(0, 0).unwrap();
        let g = auto_grid(&w, &[X]).unwrap();
        assert!((g.half_widths[0] - (6.0 * 0.5f64.sqrt() + 1.0)).abs() < 1e-12);
        assert_eq!(g.nodes, vec![DEFAULT_NODES_1D]);
        assert!((g.midpoint(0, 0) + g.midpoint(0, g.nodes[0] - 1)).abs() < 1e-12);
    }

    #[test]
    fn squeezed_grid_half_width() {
        let w = tmsv_wigner(1.4).unwrap();
        let g = auto_grid(&w, &[X]).unwrap();
        let want = 6.0 * ((2.8f64).cosh() / 2.0).sqrt() + 1.0;
        assert!((g.half_widths[0] - want).abs() < 1e-9);
        assert!((g.half_widths[0] - 13.2).abs() < 0.05);
        let g2 = auto_grid(&w, &[X, Y]).unwrap();
        assert!(g2.nodes[0] > DEFAULT_NODES_2D);
    }

    #[test]
    fn gaussian_entropy_1d() {
        let w = lg_wigner(0, 0).unwrap();
        let h = marginal_entropy(&w, &[X], &GridOptions::default()).unwrap();
        assert!((h - 0.5 * (PI * E).ln()).abs() < 1e-4, "{h}");
    }

    #[test]
    fn streaming_matches_stored() {
        let w = lg_wigner(1, 0).unwrap();
        let spec = GridSpec::new(vec![7.0, 7.0], vec![200, 180]).unwrap();
        let d = sample_distribution(&w, &[X, Py], &spec).unwrap();
        assert_eq!(differential_entropy(&d), grid_entropy(&w, &[X, Py], &spec).unwrap());
    }

    #[test]
    fn entropy_is_symmetric_in_axis_order() {
        let w = tmsv_wigner(0.6).unwrap();
        let spec = GridSpec::new(vec![8.0, 8.0], vec![300, 300]).unwrap();
        let a = grid_entropy(&w, &[X, Y], &spec).unwrap();
        let b = grid_entropy(&w, &[Y, X], &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncated_grid_reports_mass_loss() {
        let w = lg_wigner(0, 0).unwrap();
        let spec = GridSpec::new(vec![1.0], vec![64]).unwrap();
        assert!(matches!(grid_entropy(&w, &[X], &spec), Err(Error::MassLoss { .. })));
    }

    #[test]
    fn bad_grid_specs_rejected() {
        assert!(GridSpec::new(vec![1.0], vec![8]).is_err());
        assert!(GridSpec::new(vec![-1.0], vec![64]).is_err());
        assert!(GridSpec::new(vec![1.0, 1.0], vec![64]).is_err());
    }

    #[test]
    fn conditioning_on_self_rejected() {
        let w = lg_wigner(0, 0).unwrap();
        assert!(conditional_entropy(&w, X, X, &GridOptions::default()).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let w = lg_wigner(0, 0).unwrap();
        let spec = GridSpec::new(vec![6.0, 6.0], vec![16, 16]).unwrap();
        // coarse grid loses no mass for a unit Gaussian at this extent
        let d = sample_distribution(&w, &[X, Y], &spec).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("axis1,axis2,density"));
        assert_eq!(lines.count(), 256);
    }
}
