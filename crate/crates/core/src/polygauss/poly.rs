//! Sparse real polynomials in up to four variables.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponents of a monomial. Positions beyond the owning function's
/// dimension are always zero.
pub type Exponents = [u8; 4];

/// Coefficients whose magnitude falls below this fraction of the largest
/// coefficient are dropped.
pub const PRUNE_RELATIVE: f64 = 1e-15;

/// A sparse polynomial `sum c_e * v^e` with a deterministic term order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, f64>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0; 4], c)
    }

    /// The polynomial `v_i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; 4];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn monomial(e: Exponents, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Linear form `sum_i coeffs[i] * v_i`.
    pub fn linear(coeffs: &[f64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = [0u8; 4];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, f64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p.prune();
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of variable `i` over all terms.
    pub fn max_exponent(&self, i: usize) -> usize {
        self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops coefficients below `PRUNE_RELATIVE` times the largest one.
    pub fn prune(&mut self) {
        let cut = PRUNE_RELATIVE * self.max_abs_coeff();
        self.terms.retain(|_, c| c.abs() > cut);
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    /// Multiplies by `v_i`.
    pub fn mul_var(&self, i: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut m = *e;
                    m[i] += 1;
                    (m, *c)
                })
                .collect(),
        }
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for (x, &k) in v.iter().zip(e.iter()) {
                    if k > 0 {
                        t *= x.powi(k as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes `v_i = sum_j forms[i][j] * u_j` and returns the polynomial in `u`.
    pub fn substitute_linear(&self, forms: &[[f64; 4]]) -> Self {
        let images: Vec<MultiPoly> = forms.iter().map(|f| MultiPoly::linear(f)).collect();
        // powers[i][k] = images[i]^k, built lazily up to the needed degree
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|img| vec![MultiPoly::constant(1.0), img.clone()])
            .collect();
        for (i, pw) in powers.iter_mut().enumerate() {
            let need = self.max_exponent(i);
            while pw.len() <= need {
                let next = &pw[pw.len() - 1] * &images[i];
                pw.push(next);
            }
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(*c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out.prune();
        out
    }

    /// True when every term has even total degree.
    pub fn is_even(&self) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&k| k as u32).sum::<u32>() % 2 == 0)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out.prune();
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -*c);
        }
        out.prune();
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out.prune();
        out
    }
}

impl Mul<f64> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: f64) -> MultiPoly {
        self.scale(rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(-1.0)
    }
}

/// Dense evaluator for hot loops: terms flattened into a vector.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Exponents, f64)>,
    max_exp: [usize; 4],
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let mut max_exp = [0; 4];
        for (i, m) in max_exp.iter_mut().enumerate() {
            *m = p.max_exponent(i);
        }
        Self {
            terms: p.terms().map(|(e, c)| (*e, *c)).collect(),
            max_exp,
        }
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        let mut pows = [[1.0f64; 32]; 4];
        for (i, &x) in v.iter().enumerate() {
            let top = self.max_exp[i].min(31);
            for k in 1..=top {
                pows[i][k] = pows[i][k - 1] * x;
            }
        }
        let mut s = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for i in 0..v.len() {
                let k = e[i] as usize;
                if k > 0 {
                    t *= if k < 32 { pows[i][k] } else { v[i].powi(k as i32) };
                }
            }
            s += t;
        }
        s
    }
}
