//! Bell-CHSH test with displaced-parity correlators
//! `Pi(alpha, beta) = pi^2 W(sqrt2 Re alpha, sqrt2 Im alpha, sqrt2 Re beta, sqrt2 Im beta)`.

use std::f64::consts::{PI, SQRT_2};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::fmt_sig;
use crate::error::{Error, Result};
use crate::optim::{nelder_mead_traced, NelderMeadOptions, TracePoint};
use crate::polygauss::{PointEvaluator, PolyGauss, QuadratureLabel};
use crate::states::StateFamily;

/// Local-realist bound on `|BI|`.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// `|BI|` must exceed the classical bound by this much to count as a
/// violation, so that a sum of exactly 2 is not flagged by rounding.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Largest allowed `|displacement|`.
pub const DISPLACEMENT_BOX: f64 = 10.0;
pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Upper end of the squeezing range searched when `r` is free.
pub const R_MAX: f64 = 5.0;

/// Complex displacement stored as `[Re, Im]`.
pub type Displacement = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellSettings {
    pub s1: Displacement,
    pub s2: Displacement,
    pub t1: Displacement,
    pub t2: Displacement,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
}

impl BellSettings {
    pub fn real(s1: f64, s2: f64, t1: f64, t2: f64) -> Self {
        Self {
            s1: [s1, 0.0],
            s2: [s2, 0.0],
            t1: [t1, 0.0],
            t2: [t2, 0.0],
            r: None,
        }
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for d in [self.s1, self.s2, self.t1, self.t2] {
            if !(d[0].is_finite() && d[1].is_finite()) || d[0].hypot(d[1]) > DISPLACEMENT_BOX {
                return Err(Error::InvalidParameter(format!(
                    "displacement {d:?} outside |d| <= {DISPLACEMENT_BOX}"
                )));
            }
        }
        if let Some(r) = self.r {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::InvalidParameter(format!("squeezing r = {r}")));
            }
        }
        Ok(())
    }
}

pub fn phase_point(alpha: Displacement, beta: Displacement) -> [f64; 4] {
    [SQRT_2 * alpha[0], SQRT_2 * alpha[1], SQRT_2 * beta[0], SQRT_2 * beta[1]]
}

fn require_full(pg: &PolyGauss) -> Result<()> {
    if pg.axes() != QuadratureLabel::ALL {
        return Err(Error::InvalidAxes("parity needs a function over (X, P_X, Y, P_Y)".into()));
    }
    Ok(())
}

pub fn wigner_transform(pg: &PolyGauss, alpha: Displacement, beta: Displacement) -> Result<f64> {
    require_full(pg)?;
    Ok(PI * PI * pg.evaluate(&phase_point(alpha, beta)))
}

/// `Pi(s1,t1) + Pi(s1,t2) + Pi(s2,t1) - Pi(s2,t2)`.
pub fn bell_sum(pg: &PolyGauss, settings: &BellSettings) -> Result<f64> {
    Ok(ParityEvaluator::new(pg)?.bell_sum(settings))
}

/// Precompiled `pi^2 W` for repeated evaluation.
#[derive(Clone, Debug)]
pub struct ParityEvaluator {
    eval: PointEvaluator,
}

impl ParityEvaluator {
    pub fn new(pg: &PolyGauss) -> Result<Self> {
        require_full(pg)?;
        Ok(Self {
            eval: pg.scale(PI * PI).evaluator(),
        })
    }

    pub fn parity(&self, alpha: Displacement, beta: Displacement) -> f64 {
        self.eval.eval(&phase_point(alpha, beta))
    }

    pub fn bell_sum(&self, s: &BellSettings) -> f64 {
        self.parity(s.s1, s.t1) + self.parity(s.s1, s.t2) + self.parity(s.s2, s.t1)
            - self.parity(s.s2, s.t2)
    }
}

/// Large-squeezing Bell sum `1 - exp(-4 J e^{2r}) + 2 exp(-J e^{2r})` for the
/// settings `(0, sqrt J | 0, -sqrt J)`.
pub fn tmsv_bell_closed_form(j: f64, r: f64) -> Result<f64> {
    if !(j >= 0.0) {
        return Err(Error::InvalidParameter(format!("J must be >= 0, got {j}")));
    }
    let u = j * (2.0 * r).exp();
    Ok(1.0 - (-4.0 * u).exp() + 2.0 * (-u).exp())
}

/// Same geometry without the large-`r` approximation.
pub fn tmsv_bell_exact(j: f64, r: f64) -> f64 {
    1.0 + 2.0 * (-2.0 * j * (2.0 * r).cosh()).exp() - (-4.0 * j * (2.0 * r).exp()).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellOptions {
    pub starts: usize,
    pub seed: u64,
    /// Optimize the squeezing parameter as well.
    pub free_r: bool,
    /// Search all eight real displacement components.
    pub complex: bool,
    /// Initial displacements are drawn from `[-w, w]` in scaled units.
    pub init_half_width: f64,
    pub r_max: f64,
    pub local: NelderMeadOptions,
}

impl Default for BellOptions {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            seed: DEFAULT_SEED,
            free_r: false,
            complex: false,
            init_half_width: 0.5,
            r_max: R_MAX,
            local: NelderMeadOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerInfo {
    pub starts: usize,
    pub evaluations: usize,
    pub seed: u64,
    pub best_start: usize,
    pub converged: bool,
    pub complex: bool,
    pub free_r: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub settings: BellSettings,
    pub bi: f64,
    pub abs_bi: f64,
    /// `|BI| / 2`; above 1 means violation.
    pub ratio: f64,
    pub violation: bool,
    pub optimizer: OptimizerInfo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub bi: f64,
    pub settings: BellSettings,
}

/// Maps optimizer coordinates to settings. Displacements are measured in
/// units of `e^{-r}` for squeezed families so the search scale does not
/// shrink with squeezing; Bob's displacement is rotated onto the quadrature
/// Alice's position correlates with (`P_Y` for LG modes).
struct Search {
    family: StateFamily,
    complex: bool,
    free_r: bool,
    bob_imaginary: bool,
    r_max: f64,
    fixed: Option<ParityEvaluator>,
}

impl Search {
    fn new(family: &StateFamily, opts: &BellOptions) -> Result<Self> {
        family.validate()?;
        if opts.free_r && family.squeezing().is_none() {
            return Err(Error::InvalidParameter(format!("{family} has no squeezing parameter to free")));
        }
        if !(opts.r_max > 0.0 && opts.r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("r_max = {}", opts.r_max)));
        }
        let fixed = if opts.free_r {
            None
        } else {
            Some(ParityEvaluator::new(&family.wigner()?)?)
        };
        Ok(Self {
            family: *family,
            complex: opts.complex,
            free_r: opts.free_r,
            bob_imaginary: matches!(family, StateFamily::Lg { .. }),
            r_max: opts.r_max,
            fixed,
        })
    }

    fn per_setting(&self) -> usize {
        if self.complex { 2 } else { 1 }
    }

    fn dim(&self) -> usize {
        4 * self.per_setting() + usize::from(self.free_r)
    }

    fn r_of(&self, x: &[f64]) -> Option<f64> {
        if self.free_r { Some(x[x.len() - 1]) } else { self.family.squeezing() }
    }

    fn settings(&self, x: &[f64]) -> BellSettings {
        let scale = self.r_of(x).map_or(1.0, |r| (-r).exp());
        let k = self.per_setting();
        let d = |i: usize, bob: bool| -> Displacement {
            let re = x[k * i] * scale;
            let im = if self.complex { x[k * i + 1] * scale } else { 0.0 };
            if bob && self.bob_imaginary { [-im, re] } else { [re, im] }
        };
        BellSettings {
            s1: d(0, false),
            s2: d(1, false),
            t1: d(2, true),
            t2: d(3, true),
            r: if self.free_r { self.r_of(x) } else { None },
        }
    }

    fn bell(&self, x: &[f64]) -> f64 {
        let s = self.settings(x);
        if s.validate().is_err() {
            return f64::NAN;
        }
        match (&self.fixed, s.r) {
            (Some(ev), _) => ev.bell_sum(&s),
            (None, Some(r)) => {
                if r > self.r_max {
                    return f64::NAN;
                }
                self.family
                    .with_squeezing(r)
                    .and_then(|f| f.wigner().ok())
                    .and_then(|w| ParityEvaluator::new(&w).ok())
                    .map_or(f64::NAN, |ev| ev.bell_sum(&s))
            }
            (None, None) => f64::NAN,
        }
    }

    fn start(&self, opts: &BellOptions, index: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(index as u64));
        let w = opts.init_half_width;
        let mut x: Vec<f64> = (0..self.dim()).map(|_| rng.gen_range(-w..=w)).collect();
        if self.free_r {
            let n = x.len();
            x[n - 1] = rng.gen_range(0.0..=self.r_max);
        }
        // every fourth start mirrors Bob's settings onto Alice's
        if index % 4 == 3 {
            let k = self.per_setting();
            for i in 0..2 * k {
                x[2 * k + i] = -x[i];
            }
        }
        x
    }
}

fn run_start(search: &Search, opts: &BellOptions, index: usize, trace: Option<&mut Vec<TracePoint>>) -> (Vec<f64>, f64, usize, bool) {
    let x0 = search.start(opts, index);
    let m = nelder_mead_traced(|x| -search.bell(x).abs(), &x0, &opts.local, trace);
    (m.x, -m.f, m.evals, m.converged)
}

/// Multi-start maximization of `|BI|`. Starts run in parallel and are reduced
/// by largest `|BI|`, ties going to the lower start index, so the result is
/// independent of thread scheduling.
pub fn bell_optimize(family: &StateFamily, opts: &BellOptions) -> Result<BellReport> {
    Ok(bell_optimize_traced(family, opts, false)?.0)
}

/// Like [`bell_optimize`], also returning the iteration history of the
/// winning start when `trace` is set.
pub fn bell_optimize_traced(
    family: &StateFamily,
    opts: &BellOptions,
    trace: bool,
) -> Result<(BellReport, Vec<TraceRow>)> {
    if opts.starts == 0 {
        return Err(Error::InvalidParameter("need at least one start".into()));
    }
    let search = Search::new(family, opts)?;
    let results: Vec<_> = (0..opts.starts)
        .into_par_iter()
        .map(|i| run_start(&search, opts, i, None))
        .collect();
    let evaluations = results.iter().map(|r| r.2).sum();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.1 > results[best].1 {
            best = i;
        }
    }
    let (x, _, _, converged) = &results[best];
    let settings = search.settings(x);
    let bi = search.bell(x);
    let report = BellReport {
        settings,
        bi,
        abs_bi: bi.abs(),
        ratio: bi.abs() / CLASSICAL_BOUND,
        violation: bi.abs() > CLASSICAL_BOUND + VIOLATION_TOL,
        optimizer: OptimizerInfo {
            starts: opts.starts,
            evaluations,
            seed: opts.seed,
            best_start: best,
            converged: *converged,
            complex: opts.complex,
            free_r: opts.free_r,
        },
    };
    let mut rows = Vec::new();
    if trace {
        let mut pts = Vec::new();
        run_start(&search, opts, best, Some(&mut pts));
        rows = pts
            .into_iter()
            .map(|p| TraceRow {
                iteration: p.iteration,
                bi: search.bell(&p.x),
                settings: search.settings(&p.x),
            })
            .collect();
    }
    Ok((report, rows))
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut w: W) -> io::Result<()> {
    writeln!(w, "iteration,bi,s1_re,s1_im,s2_re,s2_im,t1_re,t1_im,t2_re,t2_im,r")?;
    for row in rows {
        let s = &row.settings;
        write!(w, "{},{}", row.iteration, fmt_sig(row.bi))?;
        for d in [s.s1, s.s2, s.t1, s.t2] {
            write!(w, ",{},{}", fmt_sig(d[0]), fmt_sig(d[1]))?;
        }
        match s.r {
            Some(r) => writeln!(w, ",{}", fmt_sig(r))?,
            None => writeln!(w, ",")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{lg_wigner, noon_wigner, tmsv_wigner};

    #[test]
    fn vacuum_parity_is_one() {
        let w = lg_wigner(0, 0).unwrap();
        assert!((wigner_transform(&w, [0.0, 0.0], [0.0, 0.0]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_photon_parity() {
        let w = noon_wigner(1).unwrap();
        assert!((wigner_transform(&w, [0.0, 0.0], [0.0, 0.0]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn tmsv_single_displacement() {
        let (j, r) = (0.03f64, 0.7f64);
        let w = tmsv_wigner(r).unwrap();
        let p = wigner_transform(&w, [j.sqrt(), 0.0], [0.0, 0.0]).unwrap();
        assert!((p - (-2.0 * j * (2.0 * r).cosh()).exp()).abs() < 1e-13);
    }

    #[test]
    fn equal_settings_never_violate() {
        let w = noon_wigner(1).unwrap();
        let s = BellSettings::real(0.2, 0.2, 0.2, 0.2);
        let bi = bell_sum(&w, &s).unwrap();
        assert!((bi - 2.0 * wigner_transform(&w, [0.2, 0.0], [0.2, 0.0]).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(tmsv_bell_closed_form(0.0, 1.0).unwrap(), 2.0);
        let u = 2f64.ln() / 3.0;
        assert!((tmsv_bell_closed_form(u, 0.0).unwrap() - 2.19055).abs() < 1e-5);
        assert!(tmsv_bell_closed_form(-1.0, 0.0).is_err());
    }

    #[test]
    fn settings_box() {
        assert!(BellSettings::real(0.0, 11.0, 0.0, 0.0).validate().is_err());
        assert!(BellSettings::real(0.0, 1.0, 0.0, 0.0).with_r(-1.0).validate().is_err());
    }

    #[test]
    fn lg_bob_axis_is_momentum() {
        let s = Search::new(&StateFamily::Lg { n: 1, m: 0 }, &BellOptions::default()).unwrap();
        let set = s.settings(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(set.s1, [0.1, 0.0]);
        assert_eq!(set.t2, [-0.0, 0.4]);
    }

    #[test]
    fn free_r_needs_squeezing() {
        let opts = BellOptions { free_r: true, ..Default::default() };
        assert!(bell_optimize(&StateFamily::Noon { n: 1 }, &opts).is_err());
    }
}
