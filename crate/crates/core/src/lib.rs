//! # wdmt
//!
//! Diversity-multiplexing tradeoff (DMT) of weighted parallel fading
//! channels, and of the multi-antenna broadcast channel under zero-forcing
//! (ZF) and dirty-paper coding (DPC) when the scheduler maximizes a
//! weighted sum rate.
//!
//! The crate has three layers:
//!
//! - closed-form curves ([`analytic`]) with an exact vertex-enumeration LP
//!   oracle and a lattice search to certify them ([`lp`]);
//! - a finite-SNR Rayleigh Monte Carlo of the weighted-sum-rate outage
//!   probability, including ZF/DPC null-space projections ([`sim`]);
//! - slope fitting of the simulated outage curves against the analytic
//!   exponents ([`fit`]).
//!
//! The `wdmt` binary wraps these in the `curve`, `simulate`, `fit` and
//! `validate` subcommands ([`cli`]).
//!
//! ```
//! use wdmt::{dmt_bc_dpc, dmt_bc_zf, validate_weights};
//!
//! let zf = dmt_bc_zf(3, 2, &validate_weights(&[0.5, 0.5]).unwrap()).unwrap();
//! let dpc = dmt_bc_dpc(3, 2, &validate_weights(&[0.6, 0.4]).unwrap()).unwrap();
//! assert_eq!(zf.max_diversity(), 4.0);
//! assert_eq!(dpc.max_diversity(), 5.0);
//! assert_eq!(dpc.eval(1.0).unwrap(), 2.5);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod curve;
pub mod error;
pub mod fit;
pub mod lp;
pub mod model;
pub mod sim;

pub use analytic::{
    dmt_bc_dpc, dmt_bc_zf, dmt_different, dmt_identical, lp_greedy, optimal_weights, ExponentSolution,
};
pub use curve::{eval_dmt, Corner, DmtCurve};
pub use error::{Error, Result};
pub use fit::{compare, fit_slope, SlopeFit, SnrWindow, Verdict};
pub use lp::{lp_grid, lp_vertex, LpForm, LpInstance};
pub use model::{
    ordering, validate_weights, AntennaProfile, ChannelOrdering, Scenario, ScenarioKind, Topology, Weights,
};
