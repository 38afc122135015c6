//! Measure of the sets `{t : |Z(t)| ≤ c}` from one shared grid pass.
//!
//! Each grid cell is first tested for quietness: both endpoints on the same
//! side of `+c` and of `−c`, by more than the local second difference. Quiet
//! cells are classified from their endpoints. The rest are probed at quarter
//! steps and every crossing of `±c` is refined.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::refine_bracket;
use crate::special::phi;
use crate::zeta::{z_grid_reflected, EvalConfig, ZEvaluator};

/// Absolute tolerance on refined level crossings.
pub const CROSSING_TOL: f64 = 1e-8;

const CELLS_PER_TASK: usize = 4096;
const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SetSpec {
    BelowC(f64),
    Band(f64, f64),
    GapDominated,
    GapExceeded,
}

impl SetSpec {
    pub fn label(&self) -> String {
        match self {
            SetSpec::BelowC(c) => format!("below_c({c})"),
            SetSpec::Band(c1, c2) => format!("band({c1},{c2})"),
            SetSpec::GapDominated => "gap_dominated".to_string(),
            SetSpec::GapExceeded => "gap_exceeded".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureEstimate {
    /// Lower end of the height range (0 for the sets `A_c(T)`).
    pub t_lo: f64,
    pub t: f64,
    pub set_spec: SetSpec,
    pub value: f64,
    /// Width of grid cells whose crossing structure stayed ambiguous, plus
    /// `2·CROSSING_TOL` per refined crossing.
    pub uncertainty: f64,
    pub resolution: f64,
    pub crossings: u64,
}

/// Sixteen samples per mean zero gap at height `t`, never coarser than 1/8.
pub fn default_measure_step(t: f64) -> f64 {
    let log = (t / std::f64::consts::TAU).ln().max(2.0);
    (std::f64::consts::TAU / (16.0 * log)).min(0.125)
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Tally {
    pub outside: f64,
    pub ambiguous: f64,
    pub crossings: u64,
}

impl Tally {
    pub fn uncertainty(&self) -> f64 {
        self.ambiguous + 2.0 * CROSSING_TOL * self.crossings as f64
    }

    pub fn add(&mut self, o: &Tally) {
        self.outside += o.outside;
        self.ambiguous += o.ambiguous;
        self.crossings += o.crossings;
    }
}

#[inline]
fn same_side(x: f64, y: f64) -> bool {
    (x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0)
}

#[inline]
fn crosses(x: f64, y: f64) -> bool {
    (x > 0.0 && y < 0.0) || (x < 0.0 && y > 0.0)
}

/// Classifies one probed cell for level `c`; `z` holds Z at the cell ends
/// and its quarter points.
fn resolve_cell(ev: &ZEvaluator<f64>, ts: &[f64; 5], z: &[f64; 5], c: f64) -> Result<Tally> {
    let mut tally = Tally::default();
    for lv in [c, -c] {
        let changes = z.windows(2).filter(|w| crosses(w[0] - lv, w[1] - lv)).count();
        if changes >= 2 {
            tally.ambiguous = ts[4] - ts[0];
        }
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(4);
    for j in 0..4 {
        let (u, v) = (z[j], z[j + 1]);
        pts.clear();
        pts.push((ts[j], u));
        for lv in [c, -c] {
            if crosses(u - lv, v - lv) {
                let x = refine_bracket(
                    |t| ev.z(t) - lv,
                    ts[j],
                    ts[j + 1],
                    u - lv,
                    v - lv,
                    0.5 * CROSSING_TOL,
                    MAX_BISECTIONS,
                )?;
                pts.push((x, lv));
                tally.crossings += 1;
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.push((ts[j + 1], v));
        // Between breakpoints Z stays on one side of each level; the chord
        // midpoint tells which.
        for w in pts.windows(2) {
            if (0.5 * (w[0].1 + w[1].1)).abs() > c {
                tally.outside += w[1].0 - w[0].0;
            }
        }
    }
    Ok(tally)
}

#[allow(clippy::too_many_arguments)]
fn measure_block(
    ev: &ZEvaluator<f64>,
    t_lo: f64,
    t_hi: f64,
    h: f64,
    cells: usize,
    k0: usize,
    k1: usize,
    levels: &[f64],
) -> Result<Vec<Tally>> {
    let node = |k: usize| if k == cells { t_hi } else { t_lo + k as f64 * h };
    // z[i] = Z(node(k0 + i − 1))
    let z = z_grid_reflected(ev, t_lo + (k0 as f64 - 1.0) * h, h, k1 - k0 + 3);
    let mut tallies = vec![Tally::default(); levels.len()];
    for k in k0..k1 {
        let i = k - k0 + 1;
        let (za, zb) = (z[i], z[i + 1]);
        let margin = (z[i - 1] - 2.0 * za + zb).abs().max((za - 2.0 * zb + z[i + 2]).abs());
        let (a, b) = (node(k), node(k + 1));
        let mut probes: Option<([f64; 5], [f64; 5])> = None;
        for (tally, &c) in tallies.iter_mut().zip(levels) {
            let quiet = [c, -c]
                .iter()
                .all(|&lv| same_side(za - lv, zb - lv) && (za - lv).abs().min((zb - lv).abs()) > margin);
            if quiet {
                if za.abs() > c {
                    tally.outside += b - a;
                }
                continue;
            }
            let (ts, zs) = probes.get_or_insert_with(|| {
                let q = 0.25 * (b - a);
                let ts = [a, a + q, a + 2.0 * q, a + 3.0 * q, b];
                (ts, [za, ev.z(ts[1]), ev.z(ts[2]), ev.z(ts[3]), zb])
            });
            tally.add(&resolve_cell(ev, ts, zs, c)?);
        }
    }
    Ok(tallies)
}

/// Sequential tally of `{t ∈ (lo, hi] : |Z(t)| > c}` on a grid no coarser
/// than `step`.
pub(crate) fn range_tally(ev: &ZEvaluator<f64>, lo: f64, hi: f64, step: f64, c: f64) -> Result<Tally> {
    let cells = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / cells as f64;
    Ok(measure_block(ev, lo, hi, h, cells, 0, cells, &[c])?[0])
}

/// Measures `{t ∈ (t_lo, t_hi] : |Z(t)| ≤ c}` for every level in one pass
/// over a shared grid. Levels may be `+∞`.
pub fn level_set_measures(
    t_lo: f64,
    t_hi: f64,
    levels: &[f64],
    cfg: &EvalConfig<f64>,
    step: Option<f64>,
) -> Result<Vec<MeasureEstimate>> {
    if !(t_lo >= 0.0 && t_lo < t_hi && t_hi.is_finite()) {
        return Err(Error::invalid("measure requires 0 <= t_lo < t_hi < inf"));
    }
    if let Some(&c) = levels.iter().find(|&&c| !(c > 0.0)) {
        return Err(Error::invalid(format!("level {c} must be positive")));
    }
    let step = step.unwrap_or_else(|| default_measure_step(t_hi));
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    let ev = ZEvaluator::new(*cfg, t_hi + step)?;
    let cells = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let h = (t_hi - t_lo) / cells as f64;
    let blocks: Vec<Vec<Tally>> = (0..cells.div_ceil(CELLS_PER_TASK))
        .into_par_iter()
        .map(|b| {
            let k0 = b * CELLS_PER_TASK;
            let k1 = (k0 + CELLS_PER_TASK).min(cells);
            measure_block(&ev, t_lo, t_hi, h, cells, k0, k1, levels)
        })
        .collect::<Result<_>>()?;
    let mut totals = vec![Tally::default(); levels.len()];
    for block in &blocks {
        for (total, t) in totals.iter_mut().zip(block) {
            total.add(t);
        }
    }
    let len = t_hi - t_lo;
    let limit = len / 10.0;
    totals
        .iter()
        .zip(levels)
        .map(|(tally, &c)| {
            let uncertainty = tally.uncertainty();
            if uncertainty > limit {
                return Err(Error::StepTooCoarse { uncertainty, limit });
            }
            Ok(MeasureEstimate {
                t_lo,
                t: t_hi,
                set_spec: SetSpec::BelowC(c),
                value: (len - tally.outside).clamp(0.0, len),
                uncertainty: uncertainty.min(len),
                resolution: h,
                crossings: tally.crossings,
            })
        })
        .collect()
}

/// `μ{0 < t ≤ T : |ζ(½+it)| ≤ c}`.
pub fn level_set_measure(t: f64, c: f64, cfg: &EvalConfig<f64>, step: Option<f64>) -> Result<MeasureEstimate> {
    Ok(level_set_measures(0.0, t, &[c], cfg, step)?.remove(0))
}

/// Combines two single-level estimates from the same grid into the band
/// `c1 ≤ |ζ| ≤ c2`.
pub fn band_from_levels(lower: &MeasureEstimate, upper: &MeasureEstimate) -> Result<MeasureEstimate> {
    let (SetSpec::BelowC(c1), SetSpec::BelowC(c2)) = (lower.set_spec, upper.set_spec) else {
        return Err(Error::invalid("band needs two level-set estimates"));
    };
    if !(c1 <= c2) {
        return Err(Error::invalid("band requires c1 <= c2"));
    }
    Ok(MeasureEstimate {
        set_spec: SetSpec::Band(c1, c2),
        value: (upper.value - lower.value).max(0.0),
        uncertainty: lower.uncertainty + upper.uncertainty,
        crossings: lower.crossings + upper.crossings,
        ..*upper
    })
}

/// `μ{0 < t ≤ T : c1 ≤ |ζ(½+it)| ≤ c2}` from shared samples. `c1 = c2`
/// gives the empty band.
pub fn band_measure(t: f64, c1: f64, c2: f64, cfg: &EvalConfig<f64>, step: Option<f64>) -> Result<MeasureEstimate> {
    if !(c1 > 0.0 && c1 <= c2) {
        return Err(Error::invalid("band requires 0 < c1 <= c2"));
    }
    let m = level_set_measures(0.0, t, &[c1, c2], cfg, step)?;
    band_from_levels(&m[0], &m[1])
}

/// Gaussian-integral prediction for the measure of `e^a ≤ |ζ| ≤ e^b` on a
/// range of length `len`: `len·∫ e^{−πv²} dv` over `[a, b]/√(πψ)`.
pub fn gaussian_band_prediction(len: f64, a: f64, b: f64, psi: f64) -> f64 {
    let s = (2.0 / psi).sqrt();
    len * (phi(b * s) - phi(a * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    #[test]
    fn infinite_level_is_everything() {
        let m = level_set_measure(200.0, f64::INFINITY, &cfg(), None).unwrap();
        assert_eq!(m.value, 200.0);
        assert_eq!(m.uncertainty, 0.0);
    }

    #[test]
    fn tiny_level_is_nearly_empty() {
        let m = level_set_measure(100.0, 1e-6, &cfg(), None).unwrap();
        // roughly 2c/|Z'| per zero, 29 zeros
        assert!(m.value < 1e-3, "{m:?}");
        assert_eq!(m.crossings, 58);
    }

    #[test]
    fn matches_dense_riemann_sum() {
        let ev = ZEvaluator::new(cfg(), 100.0).unwrap();
        let n = 1_000_000;
        let h = 100.0 / n as f64;
        let dense = (0..n).filter(|&i| ev.z((i as f64 + 0.5) * h).abs() <= 1.0).count() as f64 * h;
        for step in [0.05, 0.1] {
            let m = level_set_measure(100.0, 1.0, &cfg(), Some(step)).unwrap();
            assert!((m.value - dense).abs() <= 2.0 * step, "{} vs {dense}", m.value);
            assert!((m.value - dense).abs() <= 1e-3, "{} vs {dense}", m.value);
        }
    }

    #[test]
    fn band_of_equal_levels_is_empty() {
        let m = band_measure(300.0, 0.7, 0.7, &cfg(), None).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(band_measure(300.0, 0.7, 0.5, &cfg(), None).is_err());
    }

    #[test]
    fn coarse_step_is_rejected() {
        match level_set_measure(200.0, 1.0, &cfg(), Some(5.0)) {
            Err(Error::StepTooCoarse { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(level_set_measure(-1.0, 1.0, &cfg(), None).is_err());
        assert!(level_set_measure(10.0, 0.0, &cfg(), None).is_err());
        assert!(level_set_measure(10.0, 1.0, &cfg(), Some(0.0)).is_err());
    }

    #[test]
    fn gaussian_prediction_is_symmetric_probability() {
        let p = gaussian_band_prediction(1.0, -1.0, 1.0, 2.0);
        // ∫_{-1/√(2π)}^{1/√(2π)} e^{-πv²} dv = erf(1/√2)
        assert!((p - 0.682_689_492_137_085_9).abs() < 1e-12);
        assert_eq!(gaussian_band_prediction(5.0, 0.3, 0.3, 2.0), 0.0);
    }
}
