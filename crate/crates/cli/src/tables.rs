//! Comparison tables with reference values and absolute differences.

use clap::ValueEnum;

use cvsteer::bell::{self, BellOptions};
use cvsteer::reid::{self, DEFAULT_THETA1, DEFAULT_THETA2};
use cvsteer::steering;
use cvsteer::{Result, StateFamily};

use crate::output::{Cell, Table};
use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Lg,
    TmsvSweep,
}

pub const LG_BELL_RATIO: [f64; 11] = [
    1.0, 1.11934, 1.17437, 1.20128, 1.21738, 1.22813, 1.23584, 1.24165, 1.24618, 1.24982, 1.25281,
];
pub const LG_STEERING_RATIO: [f64; 11] = [
    1.0, 1.04381, 1.0567, 1.06256, 1.06572, 1.06758, 1.0687, 1.06939, 1.0698, 1.07002, 1.07011,
];
pub const LG_REID_4PRODUCT: [f64; 11] = [
    1.0, 2.25, 2.77778, 3.0625, 3.24, 3.36111, 3.44898, 3.51563, 3.5679, 3.61, 3.64463,
];

pub const SWEEP_R: [f64; 8] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4];
pub const TMSV_BELL_RATIO: [f64; 8] = [1.0, 1.040, 1.091, 1.125, 1.144, 1.153, 1.159, 1.160];
pub const TMSV_STEERING_RATIO: [f64; 8] = [1.0, 1.038, 1.157, 1.383, 1.790, 2.616, 4.991, 62.737];
pub const SUB1_BELL_RATIO: [f64; 8] = [1.120, 1.189, 1.229, 1.252, 1.263, 1.267, 1.271, 1.271];
pub const SUB1_STEERING_RATIO: [f64; 8] = [1.044, 1.061, 1.124, 1.264, 1.529, 2.027, 3.132, 7.531];

/// Squeezing used in place of `r = 0` for the subtracted state, which is
/// undefined there.
pub const SUB_R_FLOOR: f64 = 1e-3;

fn with_ref(value: f64, reference: f64) -> [Cell; 3] {
    [Cell::Num(value), Cell::Num(reference), Cell::Num((value - reference).abs())]
}

pub fn build(which: Which, s: &Settings) -> Result<Table> {
    match which {
        Which::Lg => lg_table(s),
        Which::TmsvSweep => tmsv_sweep(s),
    }
}

fn bell_opts(s: &Settings) -> BellOptions {
    BellOptions { seed: s.seed, ..Default::default() }
}

fn lg_table(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&[
        "n",
        "bell_ratio",
        "steering_ratio",
        "reid_4product",
        "bell_ratio_ref",
        "bell_ratio_abs_diff",
        "steering_ratio_ref",
        "steering_ratio_abs_diff",
        "reid_4product_ref",
        "reid_4product_abs_diff",
    ]);
    for n in 0..=10u32 {
        let fam = StateFamily::Lg { n, m: 0 };
        let w = fam.wigner()?;
        let bell = bell::bell_optimize(&fam, &bell_opts(s))?.ratio;
        let steer = steering::entropic_test(&w, &steering::default_pairing(&fam), &s.grid)?.ratio;
        let reid4 = reid::reid_test(&w, DEFAULT_THETA1, DEFAULT_THETA2)?.four_product;
        let i = n as usize;
        let [b, br, bd] = with_ref(bell, LG_BELL_RATIO[i]);
        let [e, er, ed] = with_ref(steer, LG_STEERING_RATIO[i]);
        let [q, qr, qd] = with_ref(reid4, LG_REID_4PRODUCT[i]);
        t.push(vec![Cell::Int(n.into()), b.clone(), e.clone(), q.clone(), br, bd, er, ed, qr, qd]);
    }
    Ok(t)
}

fn tmsv_sweep(s: &Settings) -> Result<Table> {
    let mut t = Table::new(&[
        "state",
        "r",
        "bell_ratio",
        "steering_ratio",
        "bell_ratio_ref",
        "bell_ratio_abs_diff",
        "steering_ratio_ref",
        "steering_ratio_abs_diff",
        "note",
    ]);
    let series: [(&str, &[f64; 8], &[f64; 8]); 2] = [
        ("tmsv", &TMSV_BELL_RATIO, &TMSV_STEERING_RATIO),
        ("sub1", &SUB1_BELL_RATIO, &SUB1_STEERING_RATIO),
    ];
    for (name, bell_ref, steer_ref) in series {
        for (i, &r) in SWEEP_R.iter().enumerate() {
            let (fam, note) = match name {
                "tmsv" => (StateFamily::Tmsv { r }, Cell::Empty),
                _ if r < SUB_R_FLOOR => (
                    StateFamily::PhotonSubtracted { r: SUB_R_FLOOR, order: 1, k: 1 },
                    Cell::Text(format!("computed at r={SUB_R_FLOOR}")),
                ),
                _ => (StateFamily::PhotonSubtracted { r, order: 1, k: 1 }, Cell::Empty),
            };
            let bell = bell::bell_optimize(&fam, &bell_opts(s))?.ratio;
            let steer = steering::entropic_test_family(&fam, &s.grid)?.ratio;
            let [b, br, bd] = with_ref(bell, bell_ref[i]);
            let [e, er, ed] = with_ref(steer, steer_ref[i]);
            t.push(vec![Cell::Text(name.into()), Cell::Num(r), b, e, br, bd, er, ed, note]);
        }
    }
    Ok(t)
}
