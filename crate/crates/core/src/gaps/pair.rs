//! Pair correlation of zero ordinates against Montgomery's prediction.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::zeros::ZeroTable;

/// Absolute tolerance requested from the adaptive quadrature.
pub const MONTGOMERY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PairCorrelationReport {
    pub t: f64,
    pub alpha_grid: Vec<f64>,
    /// Ordered pairs with `0 < γ − γ' ≤ α · window_scale`, over `N(T)`.
    pub empirical: Vec<f64>,
    pub gue_prediction: Vec<f64>,
    /// `2π / log(T/2π)`.
    pub window_scale: f64,
    pub n: usize,
}

impl PairCorrelationReport {
    pub fn max_deviation(&self) -> f64 {
        self.empirical
            .iter()
            .zip(&self.gue_prediction)
            .map(|(e, p)| (e - p).abs())
            .fold(0.0, f64::max)
    }
}

/// `1 − (sin πt / πt)²`, continuous at 0.
pub fn montgomery_integrand(t: f64) -> f64 {
    let x = PI * t;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        x2 / 3.0 - 2.0 * x2 * x2 / 45.0
    } else {
        let s = x.sin() / x;
        1.0 - s * s
    }
}

/// `∫₀^α (1 − (sin πt / πt)²) dt`.
pub fn montgomery_integral(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha must be finite and >= 0"));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    Ok(integrate(montgomery_integrand, 0.0, alpha, MONTGOMERY_TOL).value)
}

/// Counts ordered pairs of distinct ordinates in `(0, T]` in one sweep.
pub fn pair_correlation(table: &ZeroTable, t: f64, alpha_grid: &[f64]) -> Result<PairCorrelationReport> {
    table.require_cover(t)?;
    if alpha_grid.is_empty() || alpha_grid[0] <= 0.0 || alpha_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateGrid);
    }
    if !(t > TAU) {
        return Err(Error::invalid("pair correlation needs T > 2π"));
    }
    let window_scale = TAU / (t / TAU).ln();
    let widths: Vec<f64> = alpha_grid.iter().map(|a| a * window_scale).collect();
    let widest = widths[widths.len() - 1];
    let ords = &table.ordinates()[..table.count_up_to(t)];
    let mut hist = vec![0u64; widths.len()];
    for (i, &g) in ords.iter().enumerate() {
        for &h in &ords[i + 1..] {
            let d = h - g;
            if d > widest {
                break;
            }
            hist[widths.partition_point(|&w| w < d)] += 1;
        }
    }
    let n = ords.len();
    let mut running = 0u64;
    let empirical = hist
        .iter()
        .map(|&c| {
            running += c;
            if n == 0 {
                0.0
            } else {
                running as f64 / n as f64
            }
        })
        .collect();
    let gue_prediction = alpha_grid
        .iter()
        .map(|&a| montgomery_integral(a))
        .collect::<Result<_>>()?;
    Ok(PairCorrelationReport {
        t,
        alpha_grid: alpha_grid.to_vec(),
        empirical,
        gue_prediction,
        window_scale,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre5;
    use crate::zeros::Source;

    fn composite(alpha: f64, panels: usize) -> f64 {
        let h = alpha / panels as f64;
        (0..panels)
            .map(|i| gauss_legendre5(montgomery_integrand, i as f64 * h, (i + 1) as f64 * h))
            .sum()
    }

    #[test]
    fn integrand_is_continuous_at_zero() {
        assert_eq!(montgomery_integrand(0.0), 0.0);
        // just past the series cutoff the direct formula agrees with the series
        let x: f64 = 1.001e-4;
        let series = x * x / 3.0 - 2.0 * x.powi(4) / 45.0;
        assert!((montgomery_integrand(x / PI) - series).abs() < 1e-15);
        assert!((montgomery_integrand(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integral_matches_composite_rule() {
        assert_eq!(montgomery_integral(0.0).unwrap(), 0.0);
        for alpha in [0.25, 1.0, 2.0, 3.7] {
            let got = montgomery_integral(alpha).unwrap();
            assert!((got - composite(alpha, 10_000)).abs() < 1e-9, "alpha {alpha}");
        }
        assert!(montgomery_integral(-1.0).is_err());
    }

    #[test]
    fn counts_ordered_pairs() {
        let mut table = ZeroTable::new(0.0, 100.0, vec![20.0, 20.5, 21.5, 30.0, 39.0], Source::Ingested).unwrap();
        table.complete = true;
        let scale = TAU / (100.0 / TAU).ln();
        let grid = [0.4 / scale, 1.01 / scale, 1.51 / scale];
        let r = pair_correlation(&table, 100.0, &grid).unwrap();
        // differences 0.5, 1.0, 1.5; the rest are beyond the widest window
        assert_eq!(r.empirical, vec![0.0, 0.4, 0.6]);
        assert!(matches!(
            pair_correlation(&table, 100.0, &[1.0, 1.0]),
            Err(Error::DegenerateGrid)
        ));
        assert!(matches!(
            pair_correlation(&table, 100.0, &[0.0, 1.0]),
            Err(Error::DegenerateGrid)
        ));
    }
}
