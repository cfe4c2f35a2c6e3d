//! Growth-optimal portfolios under floor and drawdown constraints.
//!
//! The crate builds constrained wealth processes from an unconstrained
//! optimiser via the Azéma–Yor transform, simulates them in a complete
//! Itô market, and estimates long-run growth rates of expected utility.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub use nalgebra;

pub mod cer;
pub mod constraints;
pub mod error;
pub mod market;
pub mod model;
pub mod montecarlo;
pub mod noise;
pub mod paths;
pub mod quadrature;
pub mod stats;
pub mod transforms;
pub mod utility;

pub use cer::{
    certainty_equivalent_loss, estimate_expected_utility, fit_rate, gap_from_estimates, long_run_gap, sandwich_check,
    sweep_expected_utility, write_sweep, CertaintyEquivalentLoss, GapReport, HorizonGrid, SandwichReport, SandwichRow,
    SweepReport, UtilityEstimate,
};
pub use constraints::{
    drawdown_optimal, floor_optimal, shift_floor, validate_drawdown, validate_floor, ConstraintReport, DrawdownOptimal,
    FloorKind, FloorOptimal, FloorSpec, Shifted,
};
pub use error::{Error, Result};
pub use market::{
    closed_form_value, merton_wealth, CoefficientSchedule, MertonModel, MertonStrategy, ValueFunctionQuery,
};
pub use model::{ConstantWealth, FnModel, Scaled, WealthModel};
pub use noise::{NoiseBlock, RNG_ALGORITHM};
pub use paths::{integrate_against, running_max, DiscretePath, MaxPath, TimeGrid};
pub use transforms::{
    azema_yor, azema_yor_integral_form, build_scale_pair, linear_drawdown_scale, DrawdownSpec, ScalePair,
    SmoothIncreasingFn,
};
pub use utility::{compose_with_scale, signed_log, CustomUtility, GammaBound, PowerUtility, Utility};
