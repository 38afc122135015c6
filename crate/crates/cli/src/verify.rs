//! Acceptance checks, one function per criterion.
//!
//! Fixed-height criteria run only when their height is inside the tier;
//! trend criteria use every tier height. Shared inputs (the zero table,
//! value samples, measures) are computed once per verifier.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use serde_json::json;
use zetaline::gaps::{fujii_bound, montgomery_integral};
use zetaline::values::lambda_max;
use zetaline::zeros::MAX_GAP;
use zetaline::{
    ab_measure, abd_counts, band_measure, count_main_term, em_zeta, gap_power_sum, level_set_measure, pair_correlation,
    s_diff_moment, scan_zeros, z_function, EvalConfig, MeasureEstimate, ValueSamples, ZeroTable,
};

use crate::args::Tier;
use crate::cache::{canonical_height, TableCache};
use crate::emit::Report;
use crate::thresholds::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub summary: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<22} {}  {}",
            self.id, self.name, self.status, self.summary
        )
    }
}

pub const NAMES: [&str; 15] = [
    "zero-regression",
    "oracle-agreement",
    "completeness",
    "level-set-trend",
    "band-consistency",
    "value-distribution",
    "moments",
    "small-exponent",
    "fujii-bound",
    "gap-identities",
    "gap-partition",
    "interval-counts",
    "pair-correlation",
    "s-increment-moments",
    "determinism",
];

fn outcome(id: u8, pass: bool, summary: String) -> Outcome {
    Outcome {
        id,
        name: NAMES[id as usize - 1],
        status: if pass { Status::Pass } else { Status::Fail },
        summary,
    }
}

fn skipped(id: u8, why: String) -> Outcome {
    Outcome {
        id,
        name: NAMES[id as usize - 1],
        status: Status::Skip,
        summary: why,
    }
}

fn failed(id: u8, e: impl fmt::Display) -> Outcome {
    outcome(id, false, format!("error: {e}"))
}

pub fn tier_cap(tier: Tier) -> f64 {
    match tier {
        Tier::Small => 1e3,
        Tier::Medium => 1e4,
        Tier::Large => 1e5,
    }
}

pub fn tier_name(tier: Tier) -> &'static str {
    match tier {
        Tier::Small => "small",
        Tier::Medium => "medium",
        Tier::Large => "large",
    }
}

type Memo<T> = OnceLock<Result<T, String>>;

fn memo<T, E: fmt::Display>(cell: &Memo<T>, f: impl FnOnce() -> Result<T, E>) -> Result<&T, String> {
    cell.get_or_init(|| f().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(Clone::clone)
}

pub struct Verifier {
    tier: Tier,
    cfg: EvalConfig,
    cache: Mutex<TableCache>,
    table: Memo<ZeroTable>,
    samples: [Memo<ValueSamples>; 3],
    level: [Memo<MeasureEstimate>; 3],
    ab: [Memo<zetaline::gaps::AbMeasure>; 3],
}

impl Verifier {
    pub fn new(tier: Tier, cfg: EvalConfig, cache_dir: Option<PathBuf>) -> Self {
        Self {
            tier,
            cfg,
            cache: Mutex::new(TableCache::new(cache_dir, cfg)),
            table: OnceLock::new(),
            samples: Default::default(),
            level: Default::default(),
            ab: Default::default(),
        }
    }

    pub fn tier(&self) -> Tier {
        self.tier
    }

    /// Tier heights, in increasing order.
    pub fn heights(&self) -> Vec<f64> {
        HEIGHTS.iter().copied().filter(|&t| t <= tier_cap(self.tier)).collect()
    }

    fn has(&self, t: f64) -> bool {
        t <= tier_cap(self.tier)
    }

    fn slot(t: f64) -> usize {
        HEIGHTS.iter().position(|&h| h == t).expect("tier height")
    }

    /// Height through which the shared table is complete.
    pub fn table_height(&self) -> f64 {
        let mut need = tier_cap(self.tier) + MAX_GAP + 1.0;
        if self.has(C14_T) {
            need = need.max(C14_T + C14_BIG_H + 1.0);
        }
        canonical_height(need)
    }

    pub fn table(&self) -> Result<&ZeroTable, String> {
        memo(&self.table, || {
            let mut cache = self.cache.lock().unwrap_or_else(|p| p.into_inner());
            cache.zeros(0.0, self.table_height(), None)
        })
    }

    /// Cache warnings collected so far.
    pub fn warnings(&self) -> Vec<String> {
        self.cache.lock().map(|c| c.warnings.clone()).unwrap_or_default()
    }

    fn samples(&self, t: f64) -> Result<&ValueSamples, String> {
        memo(&self.samples[Self::slot(t)], || {
            ValueSamples::new(t, SAMPLE_STEP, &self.cfg)
        })
    }

    fn level(&self, t: f64) -> Result<&MeasureEstimate, String> {
        memo(&self.level[Self::slot(t)], || {
            level_set_measure(t, C4_LEVEL, &self.cfg, None)
        })
    }

    fn ab(&self, t: f64) -> Result<&zetaline::gaps::AbMeasure, String> {
        memo(&self.ab[Self::slot(t)], || {
            ab_measure(self.table()?, t, &self.cfg, None).map_err(|e| e.to_string())
        })
    }

    pub fn run(&self, id: u8) -> Outcome {
        match id {
            1 => self.c1(),
            2 => self.c2(),
            3 => self.c3(),
            4 => self.c4(),
            5 => self.c5(),
            6 => self.c6(),
            7 => self.c7(),
            8 => self.c8(),
            9 => self.c9(),
            10 => self.c10(),
            11 => self.c11(),
            12 => self.c12(),
            13 => self.c13(),
            14 => self.c14(),
            15 => self.c15(),
            _ => panic!("no criterion {id}"),
        }
    }

    pub fn run_all(&self) -> Vec<Outcome> {
        (1..=15).map(|id| self.run(id)).collect()
    }

    fn needs(&self, id: u8, t: f64) -> Option<Outcome> {
        (!self.has(t)).then(|| skipped(id, format!("needs T = {t:e}, above the {} tier", tier_name(self.tier))))
    }

    pub fn c1(&self) -> Outcome {
        let table = match scan_zeros(0.0, C1_RANGE_HI, &self.cfg, None) {
            Ok(t) => t,
            Err(e) => return failed(1, e),
        };
        let Some(&g1) = table.ordinates().first() else {
            return outcome(1, false, "no zeros found".into());
        };
        let oracle = match bisect_first_zero(&self.cfg) {
            Ok(x) => x,
            Err(e) => return failed(1, e),
        };
        let count_ok = table.len() == C1_COUNT;
        let printed_ok = (g1 * 100.0).floor() == (C1_PRINTED * 100.0).round();
        let digits_ok = (g1 - C1_GAMMA1).abs() <= C1_TOL && (g1 - oracle).abs() <= C1_TOL;
        outcome(
            1,
            count_ok && printed_ok && digits_ok,
            format!(
                "{} zeros in (0, 100]; gamma_1 = {g1:.10}, bisection {oracle:.10}",
                table.len()
            ),
        )
    }

    pub fn c2(&self) -> Outcome {
        let rs_cfg = EvalConfig {
            rs_min_t: C2_T_MIN,
            ..self.cfg
        };
        let mut worst_ratio: f64 = 0.0;
        let mut worst_bound: f64 = 0.0;
        for t in quasi_random_heights() {
            let rs = match z_function(t, &rs_cfg) {
                Ok(s) => s,
                Err(e) => return failed(2, e),
            };
            let em = match em_zeta(0.5, t, C2_EM_TERMS) {
                Ok(v) => v,
                Err(e) => return failed(2, e),
            };
            let diff = (rs.zeta_re - em.value.re).hypot(rs.zeta_im - em.value.im);
            worst_ratio = worst_ratio.max(diff / (rs.err_bound + em.err_bound));
            if t >= C2_BOUND_FROM {
                match z_function(t, &self.cfg) {
                    Ok(s) => worst_bound = worst_bound.max(s.err_bound),
                    Err(e) => return failed(2, e),
                }
            }
        }
        outcome(
            2,
            worst_ratio <= 1.0 && worst_bound <= C2_MAX_BOUND,
            format!("max |RS - EM| / combined bound = {worst_ratio:.3e}; max bound for t >= 30 = {worst_bound:.3e}"),
        )
    }

    pub fn c3(&self) -> Outcome {
        let table = match self.table() {
            Ok(t) => t,
            Err(e) => return failed(3, e),
        };
        let mut ok = true;
        let mut parts = Vec::new();
        for t in self.heights() {
            let found = table.count_up_to(t);
            let residual = (found as f64 - count_main_term(t)).abs();
            ok &= residual <= C3_MAX_RESIDUAL;
            parts.push(format!("N({t:e}) = {found}, residual {residual:.3}"));
        }
        outcome(3, ok, parts.join("; "))
    }

    pub fn c4(&self) -> Outcome {
        let mut ratios = Vec::new();
        for t in self.heights() {
            match self.level(t) {
                Ok(m) => ratios.push(m.value / t),
                Err(e) => return failed(4, e),
            }
        }
        let in_band = ratios.iter().all(|&r| r > C4_BAND.0 && r < C4_BAND.1);
        let trend = ratios
            .windows(2)
            .all(|w| (w[1] - 0.5).abs() - (w[0] - 0.5).abs() <= C4_GROWTH_PER_DECADE);
        outcome(4, in_band && trend, format!("mu(A_1)/T = {}", list(&ratios, 4)))
    }

    pub fn c5(&self) -> Outcome {
        if let Some(o) = self.needs(5, C5_T) {
            return o;
        }
        let (c1, c2) = C5_LEVELS;
        let run = || -> zetaline::Result<(f64, f64)> {
            let band = band_measure(C5_T, c1, c2, &self.cfg, None)?;
            let l1 = level_set_measure(C5_T, c1, &self.cfg, None)?;
            let l2 = level_set_measure(C5_T, c2, &self.cfg, None)?;
            let diff = (band.value + l1.value - l2.value).abs();
            Ok((diff, band.uncertainty + l1.uncertainty + l2.uncertainty))
        };
        match run() {
            Ok((diff, unc)) => outcome(
                5,
                diff <= unc,
                format!("|band + level(c1) - level(c2)| = {diff:.3e}, combined uncertainty {unc:.3e}"),
            ),
            Err(e) => failed(5, e),
        }
    }

    pub fn c6(&self) -> Outcome {
        if let Some(o) = self.needs(6, 1e5) {
            return o;
        }
        let ks = |t: f64| -> Result<f64, String> {
            Ok(self
                .samples(t)?
                .distribution(&y_grid())
                .map_err(|e| e.to_string())?
                .ks_distance)
        };
        let (lo, hi) = match (ks(1e3), ks(1e5)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return failed(6, e),
        };
        let limit = C6_FACTOR * C6_KS_PILOT;
        outcome(
            6,
            hi < limit && hi <= lo + C6_SLACK,
            format!("KS(1e3) = {lo:.4}, KS(1e5) = {hi:.4}, limit {limit:.4}"),
        )
    }

    pub fn c7(&self) -> Outcome {
        if let Some(o) = self.needs(7, 1e5) {
            return o;
        }
        let m = match self
            .samples(1e5)
            .and_then(|s| s.selberg_moment(C7_K).map_err(|e| e.to_string()))
        {
            Ok(m) => m,
            Err(e) => return failed(7, e),
        };
        let limit = C7_FACTOR * C7_REL_PILOT;
        let constant_ok = (m.predicted - C7_E_HALF).abs() < 5e-6;
        outcome(
            7,
            constant_ok && m.rel_error < limit,
            format!(
                "empirical {:.5}, predicted {:.5}, rel error {:.4}, limit {limit:.4}",
                m.empirical, m.predicted, m.rel_error
            ),
        )
    }

    pub fn c8(&self) -> Outcome {
        if let Some(o) = self.needs(8, C8_T) {
            return o;
        }
        let lambda = lambda_max(C8_T);
        let r = match self
            .samples(C8_T)
            .and_then(|s| s.small_exponent_integral(lambda).map_err(|e| e.to_string()))
        {
            Ok(r) => r,
            Err(e) => return failed(8, e),
        };
        outcome(
            8,
            r.ratio >= C8_BAND.0 && r.ratio <= C8_BAND.1,
            format!(
                "lambda = {lambda:.4}, ratio {:.4}, band [{}, {}]",
                r.ratio, C8_BAND.0, C8_BAND.1
            ),
        )
    }

    pub fn c9(&self) -> Outcome {
        let table = match self.table() {
            Ok(t) => t,
            Err(e) => return failed(9, e),
        };
        let mut ratios = Vec::new();
        for t in self.heights() {
            match gap_power_sum(table, t, 2.0) {
                Ok(s) => ratios.push(s / fujii_bound(t)),
                Err(e) => return failed(9, e),
            }
        }
        outcome(
            9,
            ratios.iter().all(|&r| r <= 1.0),
            format!("sum of squared gaps / bound = {}", list(&ratios, 4)),
        )
    }

    pub fn c10(&self) -> Outcome {
        let table = match self.table() {
            Ok(t) => t,
            Err(e) => return failed(10, e),
        };
        let mut worst_tel: f64 = 0.0;
        let mut worst_cs: f64 = f64::NEG_INFINITY;
        for t in self.heights() {
            let run = || -> zetaline::Result<(f64, f64)> {
                let s1 = gap_power_sum(table, t, 1.0)?;
                let s2 = gap_power_sum(table, t, 2.0)?;
                let n = table.count_up_to(t);
                let ords = table.ordinates();
                let telescoped = ords[n] - ords[0];
                // (Σd)² ≤ n Σd², as a relative excess
                let cs = (s1 * s1 - n as f64 * s2) / (n as f64 * s2);
                Ok(((s1 - telescoped).abs(), cs))
            };
            match run() {
                Ok((tel, cs)) => {
                    worst_tel = worst_tel.max(tel);
                    worst_cs = worst_cs.max(cs);
                }
                Err(e) => return failed(10, e),
            }
        }
        outcome(
            10,
            worst_tel <= C10_TOL && worst_cs <= C10_TOL,
            format!("telescoping error {worst_tel:.3e}; Cauchy-Schwarz excess {worst_cs:.3e}"),
        )
    }

    pub fn c11(&self) -> Outcome {
        if let Some(o) = self.needs(11, C11_T) {
            return o;
        }
        let mut ratios = Vec::new();
        let mut partition = (0.0, 0.0);
        for t in self.heights() {
            let m = match self.ab(t) {
                Ok(m) => m,
                Err(e) => return failed(11, e),
            };
            ratios.push(m.a.value / t);
            if t == C11_T {
                let residual = (m.a.value + m.b.value - (t - m.excluded)).abs();
                partition = (residual, m.a.uncertainty + m.b.uncertainty);
            }
        }
        let trend = ratios.windows(2).all(|w| w[1] <= w[0] + C11_SLACK);
        outcome(
            11,
            partition.0 <= partition.1 && trend,
            format!(
                "partition residual {:.3e} (uncertainty {:.3e}); mu(A)/T = {}",
                partition.0,
                partition.1,
                list(&ratios, 4)
            ),
        )
    }

    pub fn c12(&self) -> Outcome {
        if let Some(o) = self.needs(12, C12_T) {
            return o;
        }
        let c = match self
            .table()
            .and_then(|t| abd_counts(t, C12_T, &self.cfg).map_err(|e| e.to_string()))
        {
            Ok(c) => c,
            Err(e) => return failed(12, e),
        };
        let share = c.b as f64 / c.n0 as f64;
        outcome(
            12,
            c.a + c.b == c.n0 && c.d == c.a && share >= C12_FLOOR,
            format!(
                "A = {}, B = {}, D = {}, N0 = {}, B/N0 = {share:.4}",
                c.a, c.b, c.d, c.n0
            ),
        )
    }

    pub fn c13(&self) -> Outcome {
        if let Some(o) = self.needs(13, C13_T) {
            return o;
        }
        let alpha = c13_alpha_grid();
        let p = match self
            .table()
            .and_then(|t| pair_correlation(t, C13_T, &alpha).map_err(|e| e.to_string()))
        {
            Ok(p) => p,
            Err(e) => return failed(13, e),
        };
        let mut quad_err: f64 = 0.0;
        for &a in &alpha {
            match montgomery_integral(a) {
                Ok(v) => quad_err = quad_err.max((v - simpson_montgomery(a, C13_ORACLE_PANELS)).abs()),
                Err(e) => return failed(13, e),
            }
        }
        let dev = p.max_deviation();
        outcome(
            13,
            dev <= C13_MAX_DEVIATION && quad_err <= C13_ORACLE_TOL,
            format!("max deviation {dev:.4} on [0.25, 2]; quadrature vs oracle {quad_err:.2e}"),
        )
    }

    pub fn c14(&self) -> Outcome {
        if let Some(o) = self.needs(14, C14_T) {
            return o;
        }
        let m = match self
            .table()
            .and_then(|t| s_diff_moment(C14_T, C14_BIG_H, C14_H, C14_K, t).map_err(|e| e.to_string()))
        {
            Ok(m) => m,
            Err(e) => return failed(14, e),
        };
        let ratio = m.empirical / m.predicted;
        outcome(
            14,
            ratio >= C14_BAND.0 && ratio <= C14_BAND.1,
            format!(
                "empirical {:.3}, predicted {:.3}, ratio {ratio:.4}",
                m.empirical, m.predicted
            ),
        )
    }

    /// Runs the small tier twice on fresh verifiers and compares the bytes
    /// of both renderings.
    pub fn c15(&self) -> Outcome {
        let dir = self.cache.lock().ok().and_then(|c| c.dir().map(PathBuf::from));
        let render = || -> std::io::Result<Vec<u8>> {
            let v = Verifier::new(Tier::Small, self.cfg, dir.clone());
            let outcomes: Vec<Outcome> = (1..=14).map(|id| v.run(id)).collect();
            let r = report(Tier::Small, &outcomes);
            let mut bytes = r.render(crate::emit::OutputFormat::Csv)?;
            bytes.extend(r.render(crate::emit::OutputFormat::Json)?);
            Ok(bytes)
        };
        match (render(), render()) {
            (Ok(a), Ok(b)) => outcome(
                15,
                a == b,
                format!(
                    "two small-tier runs: {} and {} bytes, identical: {}",
                    a.len(),
                    b.len(),
                    a == b
                ),
            ),
            (Err(e), _) | (_, Err(e)) => failed(15, e),
        }
    }
}

fn list(xs: &[f64], digits: usize) -> String {
    xs.iter()
        .map(|x| format!("{x:.digits$}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Additive-recurrence points in `[C2_T_MIN, C2_T_MAX)`.
pub fn quasi_random_heights() -> Vec<f64> {
    const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..C2_POINTS)
        .map(|i| {
            let u = (0.5 + i as f64 * INV_GOLDEN).fract();
            C2_T_MIN + (C2_T_MAX - C2_T_MIN) * u
        })
        .collect()
}

/// Plain bisection on the sign of Z over [14, 14.3].
fn bisect_first_zero(cfg: &EvalConfig) -> zetaline::Result<f64> {
    let (mut lo, mut hi) = (14.0, 14.3);
    let mut z_lo = z_function(lo, cfg)?.z;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let z = z_function(mid, cfg)?.z;
        if (z > 0.0) == (z_lo > 0.0) {
            lo = mid;
            z_lo = z;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Composite Simpson rule for `∫₀^α (1 − (sin πt/πt)²) dt`.
pub fn simpson_montgomery(alpha: f64, panels: usize) -> f64 {
    let f = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            let s = (PI * t).sin() / (PI * t);
            1.0 - s * s
        }
    };
    let n = 2 * panels;
    let h = alpha / n as f64;
    let inner: f64 = (1..n)
        .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h))
        .sum();
    (f(0.0) + inner + f(alpha)) * h / 3.0
}

pub fn report(tier: Tier, outcomes: &[Outcome]) -> Report {
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let json = json!({
        "tier": tier_name(tier),
        "passed": count(Status::Pass),
        "failed": count(Status::Fail),
        "skipped": count(Status::Skip),
        "criteria": outcomes.iter().map(|o| json!({
            "id": o.id, "name": o.name, "status": o.status.to_string(), "summary": o.summary,
        })).collect::<Vec<_>>(),
    });
    let mut r = Report::new(json, vec!["criterion", "name", "status", "summary"]);
    for o in outcomes {
        r = r.row(vec![
            u64::from(o.id).into(),
            o.name.into(),
            o.status.to_string().into(),
            o.summary.clone().into(),
        ]);
    }
    r
}
