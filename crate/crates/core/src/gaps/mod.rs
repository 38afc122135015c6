//! Statistics of gaps between consecutive zeros.

mod intervals;
mod pair;

pub use intervals::{
    ab_measure, abd_counts, interval_maxima, starred_gap_sum, AbMeasure, AbdCounts, IntervalMax, StarredSum,
    MAX_SAMPLES,
};
pub use pair::{montgomery_integral, montgomery_integrand, pair_correlation, PairCorrelationReport};

use crate::error::{Error, Result};
use crate::zeros::{ZeroTable, MAX_GAP};

/// Coverage a table needs beyond `T` so that the gap after the last zero
/// below `T` is known.
pub const GAP_MARGIN: f64 = MAX_GAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdMode {
    /// `γ_{n+1} − γ_n ≥ λ/log T`.
    AtLeast,
    /// `γ_{n+1} − γ_n ≤ κ/log T`.
    AtMost,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub t: f64,
    /// Ordinates `γ_n ≤ T`, each paired with the gap that follows it.
    pub starts: Vec<f64>,
    pub gaps: Vec<f64>,
    /// `gap · log(γ_n/2π) / 2π`.
    pub normalized_gaps: Vec<f64>,
    /// `(α, Σ gap^α)`.
    pub power_sums: Vec<(f64, f64)>,
    pub counts: Option<AbdCounts>,
}

impl GapReport {
    pub fn with_power_sums(mut self, alphas: &[f64]) -> Result<Self> {
        self.power_sums = alphas
            .iter()
            .map(|&a| Ok((a, power_sum(&self.gaps, a)?)))
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn mean_normalized_gap(&self) -> f64 {
        self.normalized_gaps.iter().sum::<f64>() / self.normalized_gaps.len() as f64
    }
}

/// Ordinates `γ_n ≤ T` and the ordinate after the last of them.
pub(crate) fn gap_slice(table: &ZeroTable, t: f64) -> Result<&[f64]> {
    table.require_cover(t + GAP_MARGIN)?;
    let ords = table.ordinates();
    let n = table.count_up_to(t);
    if n == 0 {
        return Ok(&ords[..0]);
    }
    if n == ords.len() {
        return Err(Error::IncompleteTable { needed: t + GAP_MARGIN });
    }
    Ok(&ords[..=n])
}

/// One gap `γ_{n+1} − γ_n` for every `γ_n ≤ T`.
pub fn gaps(table: &ZeroTable, t: f64) -> Result<GapReport> {
    let ords = gap_slice(table, t)?;
    let starts: Vec<f64> = ords.iter().take(ords.len().saturating_sub(1)).copied().collect();
    let gaps: Vec<f64> = ords.windows(2).map(|w| w[1] - w[0]).collect();
    let tau = std::f64::consts::TAU;
    let normalized_gaps = starts
        .iter()
        .zip(&gaps)
        .map(|(g, d)| d * (g / tau).ln() / tau)
        .collect();
    Ok(GapReport {
        t,
        starts,
        gaps,
        normalized_gaps,
        power_sums: Vec::new(),
        counts: None,
    })
}

/// Number of `γ_n ≤ T` whose following gap passes `λ/log T` in the given
/// direction; ties count as passing.
pub fn gap_threshold_count(table: &ZeroTable, t: f64, lambda: f64, mode: ThresholdMode) -> Result<usize> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid("threshold parameter must be >= 0"));
    }
    let ords = gap_slice(table, t)?;
    let v = lambda / t.ln();
    Ok(ords
        .windows(2)
        .filter(|w| {
            let d = w[1] - w[0];
            match mode {
                ThresholdMode::AtLeast => d >= v,
                ThresholdMode::AtMost => d <= v,
            }
        })
        .count())
}

fn power_sum(gaps: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::invalid("power sum needs alpha >= 1"));
    }
    Ok(gaps.iter().map(|d| d.powf(alpha)).sum())
}

/// `Σ_{γ_n ≤ T} (γ_{n+1} − γ_n)^α` for `α ≥ 1`.
pub fn gap_power_sum(table: &ZeroTable, t: f64, alpha: f64) -> Result<f64> {
    let ords = gap_slice(table, t)?;
    let gaps: Vec<f64> = ords.windows(2).map(|w| w[1] - w[0]).collect();
    power_sum(&gaps, alpha)
}

/// Fujii's upper bound for the sum of squared gaps, `9 · 2πT / log(T/2π)`.
pub fn fujii_bound(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    9.0 * tau * t / (t / tau).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::Source;

    fn table(ords: Vec<f64>, hi: f64) -> ZeroTable {
        let mut t = ZeroTable::new(0.0, hi, ords, Source::Ingested).unwrap();
        t.complete = true;
        t
    }

    #[test]
    fn single_gap() {
        let t = table(vec![14.1347, 21.0220], 25.0);
        let r = gaps(&t, 15.0).unwrap();
        assert_eq!(r.gaps.len(), 1);
        assert!((r.gaps[0] - 6.8873).abs() < 1e-12);
        assert!(
            (r.normalized_gaps[0] - 6.8873 * (14.1347 / std::f64::consts::TAU).ln() / std::f64::consts::TAU).abs()
                < 1e-12
        );
    }

    #[test]
    fn empty_range_and_missing_margin() {
        let t = table(vec![14.1347, 21.0220], 25.0);
        assert!(gaps(&t, 10.0).unwrap().gaps.is_empty());
        // needs coverage to T + 10
        assert!(matches!(gaps(&t, 16.0), Err(Error::IncompleteTable { .. })));
        // covered, but no zero after T
        let t = table(vec![14.1347, 21.0220], 40.0);
        assert!(matches!(gaps(&t, 22.0), Err(Error::IncompleteTable { .. })));
    }

    #[test]
    fn thresholds_and_power_sums() {
        let t = table(vec![1.0, 2.0, 4.0, 4.5, 8.0], 30.0);
        let log = 5f64.ln();
        assert_eq!(gap_threshold_count(&t, 5.0, 0.0, ThresholdMode::AtLeast).unwrap(), 4);
        assert_eq!(gap_threshold_count(&t, 5.0, 0.0, ThresholdMode::AtMost).unwrap(), 0);
        // tie at gap 2 counts in both directions
        assert_eq!(
            gap_threshold_count(&t, 5.0, 2.0 * log, ThresholdMode::AtLeast).unwrap(),
            2
        );
        assert_eq!(
            gap_threshold_count(&t, 5.0, 2.0 * log, ThresholdMode::AtMost).unwrap(),
            3
        );
        assert_eq!(gap_power_sum(&t, 5.0, 1.0).unwrap(), 7.0);
        assert_eq!(gap_power_sum(&t, 5.0, 2.0).unwrap(), 1.0 + 4.0 + 0.25 + 12.25);
        assert!(gap_power_sum(&t, 5.0, 0.5).is_err());
        assert!(gap_threshold_count(&t, 5.0, -1.0, ThresholdMode::AtLeast).is_err());
    }

    #[test]
    fn fujii_value() {
        let want = 9.0 * std::f64::consts::TAU * 1e4 / (1e4 / std::f64::consts::TAU).ln();
        assert_eq!(fujii_bound(1e4), want);
    }
}
