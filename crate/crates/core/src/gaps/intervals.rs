//! Per-interval comparisons of |Z| against the local gap length.

use rayon::prelude::*;

use super::gap_slice;
use crate::error::{Error, Result};
use crate::roots::golden_max;
use crate::values::measure::{default_measure_step, range_tally, MeasureEstimate, SetSpec, Tally};
use crate::zeros::ZeroTable;
use crate::zeta::{EvalConfig, ZEvaluator};

/// Initial samples per interval when locating the maximum of |Z|.
pub const MAX_SAMPLES: usize = 64;
/// Refinement of the maximiser, relative to the interval length.
pub const MAX_REL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalMax {
    pub lo: f64,
    pub hi: f64,
    /// `max |Z|` over `[lo, hi]`.
    pub max: f64,
}

impl IntervalMax {
    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }

    /// `max |ζ| ≤ gap` on the closed interval.
    pub fn dominated(&self) -> bool {
        self.max <= self.gap()
    }
}

fn interval_max(ev: &ZEvaluator<f64>, lo: f64, hi: f64, samples: usize) -> f64 {
    let h = (hi - lo) / (samples - 1) as f64;
    let z = ev.z_grid(lo, h, samples);
    let (i, best) =
        z.iter().map(|v| v.abs()).enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let a = lo + i.saturating_sub(1) as f64 * h;
    let b = if i + 1 >= samples { hi } else { lo + (i + 1) as f64 * h };
    let rel = MAX_REL_TOL * (hi - lo) / b.abs().max(1.0);
    let (_, refined) = golden_max(|t| ev.z(t).abs(), a, b, rel, 200);
    refined.max(best)
}

/// `max |Z|` on `[γ_n, γ_{n+1}]` for every `γ_n ≤ T`.
pub fn interval_maxima(table: &ZeroTable, t: f64, cfg: &EvalConfig<f64>) -> Result<Vec<IntervalMax>> {
    interval_maxima_with(table, t, cfg, MAX_SAMPLES)
}

pub(crate) fn interval_maxima_with(
    table: &ZeroTable,
    t: f64,
    cfg: &EvalConfig<f64>,
    samples: usize,
) -> Result<Vec<IntervalMax>> {
    let ords = gap_slice(table, t)?;
    if ords.is_empty() {
        return Ok(Vec::new());
    }
    let ev = ZEvaluator::new(*cfg, ords[ords.len() - 1])?;
    Ok(ords
        .par_windows(2)
        .with_min_len(64)
        .map(|w| IntervalMax {
            lo: w[0],
            hi: w[1],
            max: interval_max(&ev, w[0], w[1], samples),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbdCounts {
    /// Zeros `γ_n ≤ T` whose following interval has `max |ζ| ≤ gap`.
    pub a: usize,
    pub b: usize,
    /// As `a`, restricted to `γ_n < γ_{n+1}`.
    pub d: usize,
    pub n0: usize,
}

impl AbdCounts {
    pub fn from_maxima(maxima: &[IntervalMax]) -> Self {
        let a = maxima.iter().filter(|m| m.dominated()).count();
        let d = maxima.iter().filter(|m| m.lo < m.hi && m.dominated()).count();
        let n0 = maxima.len();
        Self { a, b: n0 - a, d, n0 }
    }
}

pub fn abd_counts(table: &ZeroTable, t: f64, cfg: &EvalConfig<f64>) -> Result<AbdCounts> {
    Ok(AbdCounts::from_maxima(&interval_maxima(table, t, cfg)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarredSum {
    pub t: f64,
    /// `(log log T)^6 / log T`.
    pub threshold: f64,
    /// True when no observed gap reaches the threshold, so only the
    /// `max |ζ| > gap` condition is active.
    pub threshold_vacuous: bool,
    /// Sum of gaps below the threshold with `max |ζ| > gap`.
    pub sum: f64,
    pub count: usize,
    /// Sum of gaps with `max |ζ| ≤ gap`.
    pub complementary_sum: f64,
    pub complementary_count: usize,
}

impl StarredSum {
    pub fn from_maxima(t: f64, maxima: &[IntervalMax]) -> Self {
        let ll = t.ln().ln();
        let threshold = ll.powi(6) / t.ln();
        let max_gap = maxima.iter().map(IntervalMax::gap).fold(0.0, f64::max);
        let mut s = StarredSum {
            t,
            threshold,
            threshold_vacuous: max_gap < threshold,
            sum: 0.0,
            count: 0,
            complementary_sum: 0.0,
            complementary_count: 0,
        };
        for m in maxima {
            if m.dominated() {
                s.complementary_sum += m.gap();
                s.complementary_count += 1;
            } else if m.gap() < threshold {
                s.sum += m.gap();
                s.count += 1;
            }
        }
        s
    }
}

pub fn starred_gap_sum(table: &ZeroTable, t: f64, cfg: &EvalConfig<f64>) -> Result<StarredSum> {
    if !(t >= 100.0) {
        return Err(Error::OutOfWindow {
            name: "T",
            value: t,
            lo: 100.0,
            hi: f64::INFINITY,
        });
    }
    Ok(StarredSum::from_maxima(t, &interval_maxima(table, t, cfg)?))
}

/// Measures of the gap-dominated set and its complement in `(γ_1, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbMeasure {
    pub a: MeasureEstimate,
    pub b: MeasureEstimate,
    /// Length of `(0, min(γ_1, T)]`, where the local gap is undefined.
    pub excluded: f64,
}

/// Splits `(γ_1, T]` by whether `|ζ(½+it)| ≤ γ₊(t) − γ₋(t)`.
///
/// The threshold is constant on each open zero interval; the zeros
/// themselves (where the local gap is 0) have measure zero.
pub fn ab_measure(table: &ZeroTable, t: f64, cfg: &EvalConfig<f64>, step: Option<f64>) -> Result<AbMeasure> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("T must be positive"));
    }
    let step = step.unwrap_or_else(|| default_measure_step(t));
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    let ords = gap_slice(table, t)?;
    let excluded = ords.first().map_or(t, |&g| g.min(t));
    let len = t - excluded;
    let tally = if ords.is_empty() {
        Tally::default()
    } else {
        let ev = ZEvaluator::new(*cfg, ords[ords.len() - 1] + step)?;
        let parts: Vec<Tally> = ords
            .par_windows(2)
            .with_min_len(64)
            .map(|w| range_tally(&ev, w[0], w[1].min(t), step, w[1] - w[0]))
            .collect::<Result<_>>()?;
        let mut total = Tally::default();
        for p in &parts {
            total.add(p);
        }
        total
    };
    let uncertainty = tally.uncertainty();
    let limit = t / 10.0;
    if uncertainty > limit {
        return Err(Error::StepTooCoarse { uncertainty, limit });
    }
    let estimate = |set_spec, value: f64| MeasureEstimate {
        t_lo: excluded,
        t,
        set_spec,
        value: value.clamp(0.0, len),
        uncertainty: uncertainty.min(len),
        resolution: step,
        crossings: tally.crossings,
    };
    Ok(AbMeasure {
        a: estimate(SetSpec::GapDominated, len - tally.outside),
        b: estimate(SetSpec::GapExceeded, tally.outside),
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::scan_zeros;

    fn zeros_to(t: f64) -> ZeroTable {
        scan_zeros(0.0, t, &EvalConfig::default(), None).unwrap()
    }

    #[test]
    fn counts_are_consistent() {
        let table = zeros_to(600.0);
        let maxima = interval_maxima(&table, 500.0, &EvalConfig::default()).unwrap();
        let c = AbdCounts::from_maxima(&maxima);
        assert_eq!(c.n0, table.count_up_to(500.0));
        assert_eq!(c.a + c.b, c.n0);
        assert_eq!(c.d, c.a);
        // the first interval [14.13, 21.02] has max |Z| ≈ 1.5, well below its gap
        assert!(maxima[0].dominated());
    }

    #[test]
    fn maxima_agree_with_dense_sampling() {
        let table = zeros_to(400.0);
        let cfg = EvalConfig::default();
        let coarse = interval_maxima(&table, 300.0, &cfg).unwrap();
        let dense = interval_maxima_with(&table, 300.0, &cfg, 64 * MAX_SAMPLES).unwrap();
        for (c, d) in coarse.iter().zip(&dense) {
            assert!((c.max - d.max).abs() <= 1e-6 * d.max, "{c:?} vs {d:?}");
        }
    }

    #[test]
    fn partition_of_the_range() {
        let table = zeros_to(1100.0);
        let m = ab_measure(&table, 1000.0, &EvalConfig::default(), None).unwrap();
        assert!((m.excluded - 14.134725141734694).abs() < 1e-8);
        let total = m.a.value + m.b.value + m.excluded;
        assert!((total - 1000.0).abs() <= 1e-9 * 1000.0 + m.a.uncertainty);
        assert!(m.a.value > 0.0 && m.b.value > 0.0);
    }

    #[test]
    fn starred_sum_is_a_subsum() {
        let table = zeros_to(1100.0);
        let s = starred_gap_sum(&table, 1000.0, &EvalConfig::default()).unwrap();
        let total = super::super::gap_power_sum(&table, 1000.0, 1.0).unwrap();
        assert!(s.threshold_vacuous);
        assert!((s.sum + s.complementary_sum - total).abs() < 1e-9);
        assert!(s.sum <= 1000.0 + 10.0);
        assert!(starred_gap_sum(&table, 50.0, &EvalConfig::default()).is_err());
    }
}
