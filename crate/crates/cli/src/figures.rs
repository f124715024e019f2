//! Plot data. Every figure is a single CSV table.

use clap::ValueEnum;

use cvsteer::entropy::{auto_grid_with, sample_distribution, GridOptions};
use cvsteer::reid::{self, DEFAULT_THETA1, DEFAULT_THETA2, REID_BOUND};
use cvsteer::steering::{self, entropic_bound};
use cvsteer::{QuadratureLabel, Result, StateFamily};

use crate::output::{Cell, Table};
use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Reid product of LG modes versus n
    Fig1,
    /// Entropic lhs of LG modes versus n
    Fig2,
    /// Reid product versus r for the squeezed and subtracted states
    Fig3a,
    /// Entropic lhs versus r for the squeezed and subtracted states
    Fig3b,
    /// Joint distribution P(X, Y) of N00N states, N = 1 and 4
    Fig4,
}

pub const FIG4_NODES: usize = 161;

pub fn build(which: Which, s: &Settings) -> Result<Table> {
    match which {
        Which::Fig1 => fig1(),
        Which::Fig2 => fig2(s),
        Which::Fig3a => fig3a(),
        Which::Fig3b => fig3b(s),
        Which::Fig4 => fig4(s),
    }
}

fn reid_product(fam: StateFamily) -> Result<f64> {
    Ok(reid::reid_test(&fam.wigner()?, DEFAULT_THETA1, DEFAULT_THETA2)?.product)
}

fn fig1() -> Result<Table> {
    let mut t = Table::new(&["n", "reid_product", "bound"]);
    for n in 0..=10u32 {
        let p = reid_product(StateFamily::Lg { n, m: 0 })?;
        t.push(vec![Cell::Int(n.into()), Cell::Num(p), Cell::Num(REID_BOUND)]);
    }
    Ok(t)
}

fn fig2(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&["n", "lhs", "bound"]);
    for n in 1..=10u32 {
        let rep = steering::entropic_test_family(&StateFamily::Lg { n, m: 0 }, &s.grid)?;
        t.push(vec![Cell::Int(n.into()), Cell::Num(rep.lhs), Cell::Num(rep.bound)]);
    }
    Ok(t)
}

fn fig3a() -> Result<Table> {
    let mut t = Table::new(&["r", "tmsv", "sub1", "bound"]);
    for i in 1..=200 {
        let r = i as f64 * 0.01;
        let a = reid_product(StateFamily::Tmsv { r })?;
        let b = reid_product(StateFamily::PhotonSubtracted { r, order: 1, k: 1 })?;
        t.push(vec![Cell::Num(r), Cell::Num(a), Cell::Num(b), Cell::Num(REID_BOUND)]);
    }
    Ok(t)
}

fn fig3b(s: &Settings) -> Result<Table> {
    let rs: Vec<f64> = (1..=28).map(|i| i as f64 * 0.05).collect();
    let tmsv = steering::steering_ratio_sweep(|r| StateFamily::Tmsv { r }, &rs, None, &s.grid)?;
    let sub = steering::steering_ratio_sweep(
        |r| StateFamily::PhotonSubtracted { r, order: 1, k: 1 },
        &rs,
        None,
        &s.grid,
    )?;
    let mut t = Table::new(&["r", "tmsv", "sub1", "bound"]);
    for ((r, a), (_, b)) in tmsv.iter().zip(&sub) {
        t.push(vec![Cell::Num(*r), Cell::Num(a.lhs), Cell::Num(b.lhs), Cell::Num(entropic_bound())]);
    }
    Ok(t)
}

fn fig4(s: &Settings) -> Result<Table> {
    use QuadratureLabel::{X, Y};
    let opts = GridOptions { nodes: Some(s.grid.nodes.unwrap_or(FIG4_NODES)), ..s.grid.clone() };
    // the wider N = 4 state sets a grid shared by both panels
    let spec = auto_grid_with(&StateFamily::Noon { n: 4 }.wigner()?, &[X, Y], &opts)?;
    let mut t = Table::new(&["N", "X", "Y", "density"]);
    for n in [1u32, 4] {
        let d = sample_distribution(&StateFamily::Noon { n }.wigner()?, &[X, Y], &spec)?;
        let ny = spec.nodes[1];
        for (idx, &p) in d.values().iter().enumerate() {
            let (i, j) = (idx / ny, idx % ny);
            t.push(vec![
                Cell::Int(n.into()),
                Cell::Num(spec.midpoint(0, i)),
                Cell::Num(spec.midpoint(1, j)),
                Cell::Num(p),
            ]);
        }
    }
    Ok(t)
}
