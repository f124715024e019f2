//! Entropic steering inequality `h(R_B|R_A) + h(S_B|S_A) >= ln(pi e)`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{auto_grid_with, conditional_entropy, fmt_sig, GridOptions};
use crate::error::{Error, Result};
use crate::polygauss::{PolyGauss, QuadratureLabel};
use crate::states::StateFamily;

/// Smallest margin treated as resolved when flagging near-bound verdicts;
/// tail truncation of the grid is not captured by `grid_delta`.
pub const NEAR_BOUND_FLOOR: f64 = 1e-9;

/// `ln(pi e)`, the entropic uncertainty bound for a conjugate pair.
pub fn entropic_bound() -> f64 {
    (PI * E).ln()
}

/// One conditional term `h(target | given)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditional {
    pub target: QuadratureLabel,
    pub given: QuadratureLabel,
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.target, self.given)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing(pub Conditional, pub Conditional);

impl Pairing {
    pub fn new(
        target1: QuadratureLabel,
        given1: QuadratureLabel,
        target2: QuadratureLabel,
        given2: QuadratureLabel,
    ) -> Self {
        Pairing(
            Conditional { target: target1, given: given1 },
            Conditional { target: target2, given: given2 },
        )
    }

    fn validate(&self) -> Result<()> {
        for c in [self.0, self.1] {
            if c.target == c.given {
                return Err(Error::InvalidAxes(format!("pairing term {c} conditions an axis on itself")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Pairs each of Bob's quadratures with the Alice quadrature it is correlated
/// with: `X`-`P_Y` for LG modes, `X`-`Y` for the squeezed families and N00N.
pub fn default_pairing(family: &StateFamily) -> Pairing {
    use QuadratureLabel::*;
    match family {
        StateFamily::Lg { .. } => Pairing::new(X, Py, Px, Y),
        _ => Pairing::new(Y, X, Py, Px),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropicReport {
    pub pairing: Pairing,
    pub h1: f64,
    pub h2: f64,
    pub lhs: f64,
    pub bound: f64,
    pub ratio: f64,
    pub steerable: bool,
    /// `lhs` on a grid refined twice per axis, minus `lhs`.
    pub grid_delta: f64,
    /// Set when `|lhs - bound|` is within `max(|grid_delta|, NEAR_BOUND_FLOOR)`.
    pub near_bound: bool,
    pub grid: GridOptions,
}

fn lhs_terms(pg: &PolyGauss, pairing: &Pairing, opts: &GridOptions) -> Result<(f64, f64)> {
    let h1 = conditional_entropy(pg, pairing.0.target, pairing.0.given, opts)?;
    let h2 = conditional_entropy(pg, pairing.1.target, pairing.1.given, opts)?;
    Ok((h1, h2))
}

pub fn entropic_test(pg: &PolyGauss, pairing: &Pairing, opts: &GridOptions) -> Result<EntropicReport> {
    pairing.validate()?;
    // size check for the finest grids before any integration
    let fine = opts.refined(2);
    for c in [pairing.0, pairing.1] {
        auto_grid_with(pg, &[c.given, c.target], &fine)?;
    }
    let (h1, h2) = lhs_terms(pg, pairing, opts)?;
    let lhs = h1 + h2;
    let (r1, r2) = lhs_terms(pg, pairing, &opts.refined(2))?;
    let grid_delta = r1 + r2 - lhs;
    let bound = entropic_bound();
    Ok(EntropicReport {
        pairing: *pairing,
        h1,
        h2,
        lhs,
        bound,
        ratio: bound / lhs,
        steerable: lhs < bound,
        grid_delta,
        near_bound: (lhs - bound).abs() < grid_delta.abs().max(NEAR_BOUND_FLOOR),
        grid: opts.clone(),
    })
}

/// Entropic test for a family with its default pairing.
pub fn entropic_test_family(family: &StateFamily, opts: &GridOptions) -> Result<EntropicReport> {
    entropic_test(&family.wigner()?, &default_pairing(family), opts)
}

/// Runs `entropic_test` for `make(p)` over every parameter, in parallel.
/// Output order follows `params`.
pub fn steering_ratio_sweep<F>(
    make: F,
    params: &[f64],
    pairing: Option<Pairing>,
    opts: &GridOptions,
) -> Result<Vec<(f64, EntropicReport)>>
where
    F: Fn(f64) -> StateFamily + Sync,
{
    params
        .par_iter()
        .map(|&p| {
            let fam = make(p);
            let pairing = pairing.unwrap_or_else(|| default_pairing(&fam));
            entropic_test(&fam.wigner()?, &pairing, opts).map(|r| (p, r))
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[(f64, EntropicReport)], mut w: W) -> io::Result<()> {
    writeln!(w, "param,lhs,bound,ratio,steerable,grid_delta")?;
    for (p, r) in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_sig(*p),
            fmt_sig(r.lhs),
            fmt_sig(r.bound),
            fmt_sig(r.ratio),
            r.steerable,
            fmt_sig(r.grid_delta)
        )?;
    }
    Ok(())
}
