//! Derivative-free local minimization (Nelder-Mead) with a simplex-diameter
//! stopping rule.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evals: usize,
    /// Number of fresh simplices built around the converged point.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            diameter_tol: 1e-10,
            max_evals: 20_000,
            restarts: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Best vertex after each iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub f: f64,
    pub x: Vec<f64>,
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+inf`, which
/// lets callers encode box constraints by returning infinity outside.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    nelder_mead_traced(f, x0, opts, None)
}

pub fn nelder_mead_traced<F>(
    f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
    mut trace: Option<&mut Vec<TracePoint>>,
) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };
    let mut evals = 0;
    let mut iterations = 0;
    let mut start = x0.to_vec();
    let mut best = Minimum {
        x: start.clone(),
        f: eval(&start),
        evals: 1,
        iterations: 0,
        converged: false,
    };
    evals += 1;
    for _round in 0..=opts.restarts {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.clone(), eval(&start)));
        evals += 1;
        for i in 0..n {
            let mut v = start.clone();
            v[i] += opts.initial_step;
            let fv = eval(&v);
            evals += 1;
            simplex.push((v, fv));
        }
        let mut converged = false;
        loop {
            // stable sort keeps the older vertex first on ties
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if let Some(t) = trace.as_deref_mut() {
                t.push(TracePoint { iteration: iterations, f: simplex[0].1, x: simplex[0].0.clone() });
            }
            if diameter(&simplex) < opts.diameter_tol {
                converged = true;
                break;
            }
            if evals >= opts.max_evals {
                break;
            }
            iterations += 1;
            evals += step(&mut simplex, &eval);
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        if fx <= best.f {
            best.x = x;
            best.f = fx;
        }
        best.converged = converged;
        start = best.x.clone();
        if evals >= opts.max_evals {
            break;
        }
    }
    best.evals = evals;
    best.iterations = iterations;
    best
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let b = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(v, _)| v.iter().zip(b).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// One reflection/expansion/contraction/shrink step on a sorted simplex.
/// Returns the number of function evaluations spent.
fn step<F: Fn(&[f64]) -> f64>(simplex: &mut [(Vec<f64>, f64)], f: &F) -> usize {
    let n = simplex.len() - 1;
    let mut centroid = vec![0.0; n];
    for (v, _) in &simplex[..n] {
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x / n as f64;
        }
    }
    let along = |t: f64| -> Vec<f64> {
        centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect()
    };
    let xr = along(1.0);
    let fr = f(&xr);
    if fr < simplex[0].1 {
        let xe = along(2.0);
        let fe = f(&xe);
        simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        return 2;
    }
    if fr < simplex[n - 1].1 {
        simplex[n] = (xr, fr);
        return 1;
    }
    let (xc, fc) = if fr < simplex[n].1 {
        let x = along(0.5);
        let v = f(&x);
        (x, v)
    } else {
        let x = along(-0.5);
        let v = f(&x);
        (x, v)
    };
    if fc < fr.min(simplex[n].1) {
        simplex[n] = (xc, fc);
        return 2;
    }
    let best = simplex[0].0.clone();
    for (v, fv) in simplex[1..].iter_mut() {
        for (x, b) in v.iter_mut().zip(&best) {
            *x = b + 0.5 * (*x - b);
        }
        *fv = f(v);
    }
    2 + n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn finds_rosenbrock_minimum() {
        let m = nelder_mead(rosenbrock, &[-1.2, 1.0], &NelderMeadOptions::default());
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-7 && (m.x[1] - 1.0).abs() < 1e-7, "{:?}", m.x);
    }

    #[test]
    fn respects_infinite_walls() {
        // minimum of the parabola is at 3 but the feasible set ends at 2
        let f = |x: &[f64]| if x[0] > 2.0 { f64::INFINITY } else { (x[0] - 3.0).powi(2) + x[1] * x[1] };
        let m = nelder_mead(f, &[0.0, 0.5], &NelderMeadOptions::default());
        assert!(m.x[0] <= 2.0 && m.x[0] > 1.999, "{:?}", m.x);
    }

    #[test]
    fn eval_cap_stops_search() {
        let opts = NelderMeadOptions { max_evals: 30, ..Default::default() };
        let m = nelder_mead(rosenbrock, &[-1.2, 1.0], &opts);
        assert!(!m.converged);
        assert!(m.evals < 40);
    }

    #[test]
    fn trace_is_monotone() {
        let mut t = Vec::new();
        nelder_mead_traced(rosenbrock, &[0.0, 0.0], &NelderMeadOptions::default(), Some(&mut t));
        assert!(t.len() > 10);
        assert!(t.windows(2).all(|w| w[1].f <= w[0].f || w[1].iteration == 0));
    }
}
