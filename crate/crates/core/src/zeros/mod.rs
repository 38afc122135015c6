//! Zero location on the critical line and the zero-counting function.
//!
//! Zeros are found as sign changes of Z on a uniform grid and refined to
//! 1e-9. Grid points where |Z| has a same-sign local minimum are probed for
//! a hidden pair of close zeros. Completeness is judged against the smooth
//! part of the Riemann-von Mangoldt formula.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::{golden_max, refine_bracket};
use crate::scalar::Real;
use crate::zeta::{grid_values, EvalConfig, ZEvaluator};

/// Absolute tolerance on refined ordinates.
pub const ZERO_TOL: f64 = 1e-9;
/// Upper bound on consecutive gaps accepted in a table.
pub const MAX_GAP: f64 = 10.0;
/// Default admissible |found − expected| in the completeness check.
pub const DEFAULT_S_BOUND: f64 = 3.0;
/// Scanning passes (the initial one plus rescans at a quarter step each).
pub const MAX_SCAN_PASSES: u32 = 3;
/// Ordinates closer than this are treated as the same zero when merging.
pub const MERGE_TOL: f64 = 1e-8;

const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Computed,
    Ingested,
    Merged,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Ingested => "ingested",
            Source::Merged => "merged",
        }
    }
}

/// Ordered zero ordinates over `(range_lo, range_hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    range_lo: f64,
    range_hi: f64,
    ordinates: Vec<f64>,
    /// Global index of the first listed zero, when known (always 1 for
    /// tables that start at height 0).
    pub first_index: Option<u64>,
    pub complete: bool,
    pub source: Source,
}

impl ZeroTable {
    /// Validates ordering, range membership and the gap bound. The table
    /// starts out incomplete.
    pub fn new(range_lo: f64, range_hi: f64, ordinates: Vec<f64>, source: Source) -> Result<Self> {
        if !(range_lo >= 0.0 && range_lo <= range_hi && range_hi.is_finite()) {
            return Err(Error::invalid(format!("invalid table range ({range_lo}, {range_hi}]")));
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotone { line: i + 2 });
            }
            if w[1] - w[0] >= MAX_GAP {
                return Err(Error::invalid(format!(
                    "gap {} between {} and {} exceeds {MAX_GAP}",
                    w[1] - w[0],
                    w[0],
                    w[1]
                )));
            }
        }
        if let (Some(&first), Some(&last)) = (ordinates.first(), ordinates.last()) {
            if !(first > range_lo && last <= range_hi) {
                return Err(Error::invalid("ordinates outside the table range"));
            }
        }
        Ok(Self {
            range_lo,
            range_hi,
            ordinates,
            first_index: if range_lo == 0.0 { Some(1) } else { None },
            complete: false,
            source,
        })
    }

    pub fn range_lo(&self) -> f64 {
        self.range_lo
    }

    pub fn range_hi(&self) -> f64 {
        self.range_hi
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Number of listed ordinates `≤ t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// True when the table is complete from height 0 through `t`.
    pub fn covers(&self, t: f64) -> bool {
        self.complete && self.range_lo == 0.0 && self.range_hi >= t
    }

    pub fn require_cover(&self, t: f64) -> Result<()> {
        if self.covers(t) {
            Ok(())
        } else {
            Err(Error::IncompleteTable { needed: t })
        }
    }

    /// The ordinates restricted to `(lo, hi]`, with completeness carried
    /// over when the sub-range lies inside this table's range.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<ZeroTable> {
        let a = self.ordinates.partition_point(|&g| g <= lo);
        let b = self.ordinates.partition_point(|&g| g <= hi);
        let mut t = ZeroTable::new(lo, hi, self.ordinates[a..b].to_vec(), self.source)?;
        let inside = lo >= self.range_lo && hi <= self.range_hi;
        t.complete = self.complete && inside;
        t.first_index = match (lo == 0.0, self.first_index) {
            (true, _) => Some(1),
            (false, Some(f)) if inside => Some(f + a as u64),
            _ => None,
        };
        Ok(t)
    }

    /// Union of two tables whose ranges overlap or touch. Ordinates within
    /// `MERGE_TOL` of each other are kept once.
    pub fn merge(&self, other: &ZeroTable) -> Result<ZeroTable> {
        let (a, b) = if self.range_lo <= other.range_lo {
            (self, other)
        } else {
            (other, self)
        };
        if b.range_lo > a.range_hi {
            return Err(Error::invalid("cannot merge tables with disjoint ranges"));
        }
        let mut all: Vec<f64> = a.ordinates.iter().chain(&b.ordinates).copied().collect();
        all.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::with_capacity(all.len());
        for g in all {
            match merged.last() {
                Some(&last) if g - last <= MERGE_TOL => {}
                _ => merged.push(g),
            }
        }
        let mut t = ZeroTable::new(a.range_lo, a.range_hi.max(b.range_hi), merged, Source::Merged)?;
        t.complete = a.complete && b.complete;
        t.first_index = a.first_index;
        Ok(t)
    }
}

/// Outcome of comparing a table against the Riemann-von Mangoldt main term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessReport {
    /// Smooth count over the table range, including the 7/8.
    pub expected_count: f64,
    pub found_count: usize,
    pub residual: f64,
    /// Largest |S| just before or at a listed ordinate (0 when the global
    /// index is unknown).
    pub max_abs_s: f64,
    pub refined_passes: u32,
    pub passed: bool,
}

/// Smooth part of the zero count: `(T/2π) ln(T/2π) − T/2π + 7/8`.
///
/// Returns NaN for `T ≤ 0`.
pub fn count_main_term<F: Real>(t: F) -> F {
    if !(t > F::zero()) {
        return F::nan();
    }
    let x = t / F::TAU();
    x * x.ln() - x + F::lit(0.875)
}

/// Eight grid points per mean zero gap at the top of the range, never
/// coarser than 0.25.
pub fn default_grid_step(t_hi: f64) -> f64 {
    let log = (t_hi / std::f64::consts::TAU).ln().max(2.0);
    (std::f64::consts::TAU / (8.0 * log)).min(0.25)
}

/// Refines a zero of Z inside a sign-change bracket to `ZERO_TOL`.
pub fn refine_zero(lo: f64, hi: f64, cfg: &EvalConfig<f64>) -> Result<f64> {
    if !(lo >= 0.0 && lo < hi) {
        return Err(Error::invalid("refine_zero requires 0 <= lo < hi"));
    }
    let ev = ZEvaluator::new(*cfg, hi)?;
    refine_with(&ev, lo, hi, ev.z(lo), ev.z(hi))
}

fn refine_with(ev: &ZEvaluator<f64>, lo: f64, hi: f64, z_lo: f64, z_hi: f64) -> Result<f64> {
    refine_bracket(|t| ev.z(t), lo, hi, z_lo, z_hi, 0.5 * ZERO_TOL, MAX_BISECTIONS)
}

#[inline]
fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

enum Candidate {
    Exact(f64),
    Bracket { lo: f64, hi: f64, z_lo: f64, z_hi: f64 },
    Dip { lo: f64, hi: f64, z_lo: f64, z_hi: f64 },
}

/// One scanning pass over `(t_lo, t_hi]` with the given grid step.
pub fn scan_pass(ev: &ZEvaluator<f64>, t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_lo >= 0.0 && t_lo < t_hi && t_hi.is_finite()) {
        return Err(Error::invalid("scan requires 0 <= t_lo < t_hi"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("grid step must be positive"));
    }
    let cells = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let h = (t_hi - t_lo) / cells as f64;
    let node = |j: isize| -> f64 {
        if j == cells as isize {
            t_hi
        } else {
            t_lo + j as f64 * h
        }
    };
    // values[i] = Z(node(i - 1)); Z is even, so the node left of 0 reflects.
    let mut values = grid_values(ev, t_lo - h, h, cells + 3);
    values[cells + 1] = ev.z(t_hi);
    let z = |j: isize| values[(j + 1) as usize];

    let mut candidates = Vec::new();
    for j in 0..cells as isize {
        let (a, b) = (z(j), z(j + 1));
        if b == 0.0 {
            candidates.push(Candidate::Exact(node(j + 1)));
        } else if a != 0.0 && sign(a) != sign(b) {
            candidates.push(Candidate::Bracket {
                lo: node(j),
                hi: node(j + 1),
                z_lo: a,
                z_hi: b,
            });
        }
    }
    // same-sign local minima of |Z| may hide a pair of close zeros
    for j in 0..=cells as isize {
        let (l, c, r) = (z(j - 1), z(j), z(j + 1));
        let s = sign(c);
        if s == 0 || sign(l) != s || sign(r) != s {
            continue;
        }
        if c.abs() <= l.abs() && c.abs() <= r.abs() && (c.abs() < l.abs() || c.abs() < r.abs()) {
            candidates.push(Candidate::Dip {
                lo: (node(j - 1)).max(0.0),
                hi: node(j + 1),
                z_lo: l,
                z_hi: r,
            });
        }
    }

    let found: Vec<Vec<f64>> = candidates
        .into_par_iter()
        .map(|c| -> Result<Vec<f64>> {
            match c {
                Candidate::Exact(t) => Ok(vec![t]),
                Candidate::Bracket { lo, hi, z_lo, z_hi } => Ok(vec![refine_with(ev, lo, hi, z_lo, z_hi)?]),
                Candidate::Dip { lo, hi, z_lo, z_hi } => {
                    let s = z_lo.signum();
                    let (x, neg_min) = golden_max(|t| -s * ev.z(t), lo, hi, 1e-13, 200);
                    if neg_min <= 0.0 {
                        return Ok(Vec::new());
                    }
                    let z_x = ev.z(x);
                    let first = refine_with(ev, lo, x, z_lo, z_x)?;
                    let second = refine_with(ev, x, hi, z_x, z_hi)?;
                    Ok(vec![first, second])
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut zeros: Vec<f64> = found.into_iter().flatten().filter(|&g| g > t_lo && g <= t_hi).collect();
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
    Ok(zeros)
}

/// Compares the table's count with the smooth main term.
pub fn verify_completeness(table: &ZeroTable) -> CompletenessReport {
    verify_with_bound(table, DEFAULT_S_BOUND, 1)
}

fn verify_with_bound(table: &ZeroTable, s_bound: f64, passes: u32) -> CompletenessReport {
    let hi = table.range_hi();
    let lo = table.range_lo();
    let main_hi = if hi > 0.0 { count_main_term(hi) } else { 0.0 };
    let (expected, bound) = if lo == 0.0 {
        (main_hi, s_bound)
    } else {
        // two fluctuating terms, one at each end
        (main_hi - count_main_term(lo), 2.0 * s_bound)
    };
    let found = table.len();
    let residual = (found as f64 - expected).abs();
    let max_abs_s = match table.first_index {
        Some(first) => table
            .ordinates()
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let n = first as f64 + i as f64;
                let m = count_main_term(g);
                (n - m).abs().max((n - 1.0 - m).abs())
            })
            .fold(0.0, f64::max),
        None => 0.0,
    };
    CompletenessReport {
        expected_count: expected,
        found_count: found,
        residual,
        max_abs_s,
        refined_passes: passes,
        passed: residual <= bound,
    }
}

/// Scans `(t_lo, t_hi]`, rescanning at a quarter of the step while the
/// completeness check fails. Returns the table (marked complete) and the
/// final report.
pub fn scan_zeros_with_report(
    t_lo: f64,
    t_hi: f64,
    cfg: &EvalConfig<f64>,
    grid_step: Option<f64>,
) -> Result<(ZeroTable, CompletenessReport)> {
    let ev = ZEvaluator::new(*cfg, t_hi)?;
    let mut step = grid_step.unwrap_or_else(|| default_grid_step(t_hi));
    let mut last = None;
    for pass in 1..=MAX_SCAN_PASSES {
        let zeros = scan_pass(&ev, t_lo, t_hi, step)?;
        let mut table = ZeroTable::new(t_lo, t_hi, zeros, Source::Computed)?;
        let report = verify_with_bound(&table, DEFAULT_S_BOUND, pass);
        if report.passed {
            table.complete = true;
            return Ok((table, report));
        }
        last = Some(report);
        step /= 4.0;
    }
    let residual = last.map(|r| r.residual).unwrap_or(f64::NAN);
    Err(Error::ExhaustedRefinement {
        passes: MAX_SCAN_PASSES,
        residual,
    })
}

/// Locates every zero of Z in `(t_lo, t_hi]`; see [`scan_zeros_with_report`].
pub fn scan_zeros(t_lo: f64, t_hi: f64, cfg: &EvalConfig<f64>, grid_step: Option<f64>) -> Result<ZeroTable> {
    scan_zeros_with_report(t_lo, t_hi, cfg, grid_step).map(|(t, _)| t)
}

/// `S(T) = N(T) − main term`, with N counted from a complete table.
pub fn s_value(t: f64, table: &ZeroTable) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid("s_value requires T > 0"));
    }
    table.require_cover(t)?;
    Ok(table.count_up_to(t) as f64 - count_main_term(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    // First zeros, from an arbitrary-precision zero finder.
    const GAMMA_1: f64 = 14.134_725_141_734_694;
    const GAMMA_2: f64 = 21.022_039_638_771_555;

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    #[test]
    fn main_term_values() {
        assert!((count_main_term(std::f64::consts::TAU) + 0.125).abs() < 1e-15);
        // direct arithmetic: x = 100/2π, x ln x − x + 7/8
        let x = 100.0 / std::f64::consts::TAU;
        assert!((count_main_term(100.0) - (x * x.ln() - x + 0.875)).abs() < 1e-13);
        assert!((count_main_term(100.0_f64) - 29.002_8).abs() < 1e-3);
        assert!(count_main_term(0.0_f64).is_nan());
        let mut prev = count_main_term(2.0 * std::f64::consts::PI * std::f64::consts::E);
        for k in 1..50 {
            let v = count_main_term(17.1 + k as f64 * 3.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn refine_known_zeros() {
        let g1 = refine_zero(14.0, 14.5, &cfg()).unwrap();
        assert!((g1 - GAMMA_1).abs() < 1e-9);
        let g2 = refine_zero(21.0, 21.1, &cfg()).unwrap();
        assert!((g2 - GAMMA_2).abs() < 1e-9);
        assert!(matches!(
            refine_zero(15.0, 16.0, &cfg()),
            Err(Error::InvalidBracket { .. })
        ));
    }

    #[test]
    fn empty_low_range_is_complete() {
        let (t, r) = scan_zeros_with_report(0.0, 10.0, &cfg(), None).unwrap();
        assert!(t.is_empty());
        assert!(t.complete);
        assert!(r.passed);
        assert_eq!(r.refined_passes, 1);
    }

    #[test]
    fn first_hundred() {
        let (t, r) = scan_zeros_with_report(0.0, 100.0, &cfg(), None).unwrap();
        assert_eq!(t.len(), 29);
        assert!((t.ordinates()[0] - GAMMA_1).abs() < 1e-9);
        assert!(r.residual < 0.01, "{}", r.residual);
        assert!(r.max_abs_s < 3.0);
    }

    #[test]
    fn dropped_ordinate_still_passes_count_check() {
        let t = scan_zeros(0.0, 100.0, &cfg(), None).unwrap();
        let mut ords = t.ordinates().to_vec();
        ords.remove(10);
        let damaged = ZeroTable::new(0.0, 100.0, ords, Source::Computed).unwrap();
        let r = verify_completeness(&damaged);
        assert!((r.residual - 1.0028).abs() < 1e-3, "{}", r.residual);
        assert!(r.passed);
    }

    #[test]
    fn s_value_at_twenty() {
        let t = scan_zeros(0.0, 30.0, &cfg(), None).unwrap();
        let s = s_value(20.0, &t).unwrap();
        assert!((s - (1.0 - count_main_term(20.0))).abs() < 1e-15);
        assert!((s + 0.377_49).abs() < 1e-4, "{s}");
        assert!(s_value(40.0, &t).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(ZeroTable::new(0.0, 10.0, vec![3.0, 2.0], Source::Computed).is_err());
        assert!(ZeroTable::new(0.0, 30.0, vec![3.0, 14.0], Source::Computed).is_err());
        assert!(ZeroTable::new(5.0, 10.0, vec![5.0], Source::Computed).is_err());
        assert!(ZeroTable::new(0.0, 10.0, vec![], Source::Computed).is_ok());
    }

    #[test]
    fn merge_and_restrict() {
        let a = scan_zeros(0.0, 60.0, &cfg(), None).unwrap();
        let b = scan_zeros(40.0, 100.0, &cfg(), None).unwrap();
        let m = a.merge(&b).unwrap();
        assert!(m.complete);
        assert_eq!(m.source, Source::Merged);
        assert_eq!(m.len(), 29);
        let r = m.restrict(0.0, 50.0).unwrap();
        assert_eq!(r.len(), a.count_up_to(50.0));
        assert!(r.complete);
    }
}
