//! Statistics of the values of |ζ(½+it)|: level-set measures, the
//! log-normal limit law, fractional moments and moments of S-increments.

pub mod distribution;
pub mod measure;
pub mod sdiff;

pub use distribution::{
    clt_distribution, clt_normalizer, lambda_max, psi, selberg_k_window, selberg_moment, small_exponent_integral,
    DistributionReport, MomentReport, SmallExponentReport, ValueSamples,
};
pub use measure::{
    band_from_levels, band_measure, default_measure_step, gaussian_band_prediction, level_set_measure,
    level_set_measures, MeasureEstimate, SetSpec,
};
pub use sdiff::{s_diff_integral, s_diff_moment, tsang_main_term};
