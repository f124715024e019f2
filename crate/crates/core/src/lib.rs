#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

//! EPR steering (Reid and entropic criteria) and Bell-CHSH nonlocality for
//! continuous-variable two-mode states described by polynomial-times-Gaussian
//! Wigner functions.

pub mod bell;
pub mod entropy;
pub mod error;
pub mod optim;
pub mod polygauss;
pub mod reid;
pub mod states;
pub mod steering;

pub use error::{Error, Result};
pub use polygauss::{MultiPoly, PolyGauss, QuadForm, QuadratureLabel};
pub use states::StateFamily;
pub use bell::{BellOptions, BellReport, BellSettings};
pub use entropy::{DistributionGrid, GridOptions, GridSpec};
pub use reid::ReidReport;
pub use steering::{EntropicReport, Pairing};
