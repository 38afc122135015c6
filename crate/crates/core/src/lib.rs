//! Riemann zeta function on the critical line: fast evaluation, zero
//! location, and empirical statistics of small values and zero gaps.
//!
//! The evaluation kernels are generic over [`Real`] (`f32`/`f64`); the
//! aliases at the crate root fix them to `f64`, which is what every
//! statistic uses.

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod gaps;
pub mod io;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod special;
pub mod values;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::Real;
pub use special::phi;
pub use zeta::{em_zeta, theta, z_function, zeta_half};

pub type EvalConfig = zeta::EvalConfig<f64>;
pub type ZetaSample = zeta::ZetaSample<f64>;
pub type ZEvaluator = zeta::ZEvaluator<f64>;
pub type EmValue = zeta::EmValue<f64>;

pub use zeros::{
    count_main_term, refine_zero, s_value, scan_zeros, scan_zeros_with_report, verify_completeness, CompletenessReport,
    Source, ZeroTable,
};

pub use values::{
    band_measure, clt_distribution, level_set_measure, s_diff_moment, selberg_moment, small_exponent_integral,
    DistributionReport, MeasureEstimate, MomentReport, SetSpec, ValueSamples,
};

pub use gaps::{
    ab_measure, abd_counts, gap_power_sum, gap_threshold_count, gaps, montgomery_integral, pair_correlation,
    starred_gap_sum, GapReport, PairCorrelationReport, ThresholdMode,
};

pub use io::{cross_check, load_zero_table, save_zero_table, CrossCheckReport};
