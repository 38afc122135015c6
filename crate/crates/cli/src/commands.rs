//! One function per subcommand, each building a [`Report`].

use std::path::Path;

use serde_json::{json, Map, Value};
use zetaline::gaps::{fujii_bound, starred_gap_sum, ThresholdMode};
use zetaline::io::{save_zero_table, Format};
use zetaline::values::{default_measure_step, gaussian_band_prediction};
use zetaline::zeros::MAX_GAP;
use zetaline::{
    ab_measure, abd_counts, band_measure, cross_check, gap_threshold_count, gaps, level_set_measure, load_zero_table,
    pair_correlation, s_diff_moment, verify_completeness, z_function, Error, EvalConfig, MeasureEstimate, Result,
    ValueSamples, ZeroTable,
};

use crate::args::{
    AbMeasureArgs, BandArgs, CrosscheckArgs, DistributionArgs, EvalArgs, GapsArgs, HeightArgs, IngestArgs, Lambda,
    MeasureArgs, MomentsArgs, PaircorrArgs, SdiffArgs, ZerosArgs,
};
use crate::cache::TableCache;
use crate::emit::{num, nums, Cell, Report};
use crate::thresholds;

/// Largest number of points `eval` will produce for a grid.
pub const MAX_EVAL_POINTS: usize = 10_000_000;

pub struct Context {
    pub cfg: EvalConfig,
    pub cache: TableCache,
}

impl Context {
    pub fn new(cache: TableCache) -> Self {
        Self {
            cfg: *cache.config(),
            cache,
        }
    }

    /// A complete table from 0 with room for the gap after `t`.
    pub fn table_for(&mut self, t: f64) -> Result<ZeroTable> {
        self.cache.zeros_through(t + MAX_GAP + 1.0)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn height(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(invalid(format!("T must be positive and finite, got {t}")))
    }
}

pub fn eval(ctx: &Context, a: &EvalArgs) -> Result<Report> {
    let ts: Vec<f64> = match (a.t, a.from, a.to) {
        (Some(t), _, _) => vec![t],
        (None, Some(lo), Some(hi)) => {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(invalid("eval needs finite --from <= --to"));
            }
            if !(a.step > 0.0 && a.step.is_finite()) {
                return Err(invalid("step must be positive"));
            }
            let n = ((hi - lo) / a.step + 1e-9).floor();
            if n >= MAX_EVAL_POINTS as f64 {
                return Err(invalid(format!("grid would exceed {MAX_EVAL_POINTS} points")));
            }
            (0..=n as usize).map(|i| lo + i as f64 * a.step).collect()
        }
        _ => return Err(invalid("eval needs --T or --from and --to")),
    };
    let columns = vec!["t", "theta", "z", "zeta_re", "zeta_im", "abs_zeta", "err_bound"];
    let mut samples = Vec::with_capacity(ts.len());
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let s = z_function(t, &ctx.cfg)?;
        samples.push(json!({
            "t": num(s.t), "theta": num(s.theta), "z": num(s.z), "zeta_re": num(s.zeta_re),
            "zeta_im": num(s.zeta_im), "abs_zeta": num(s.z.abs()), "err_bound": num(s.err_bound),
        }));
        rows.push(vec![
            Cell::from(s.t),
            s.theta.into(),
            s.z.into(),
            s.zeta_re.into(),
            s.zeta_im.into(),
            s.z.abs().into(),
            s.err_bound.into(),
        ]);
    }
    let mut r = Report::new(json!({ "samples": samples }), columns);
    r.rows = rows;
    Ok(r)
}

pub fn zeros(ctx: &mut Context, a: &ZerosArgs) -> Result<Report> {
    if !(a.from >= 0.0 && a.from < a.to && a.to.is_finite()) {
        return Err(invalid("zeros needs 0 <= --from < --to"));
    }
    let table = ctx.cache.zeros(a.from, a.to, a.step)?;
    let check = verify_completeness(&table);
    let index = |i: usize| table.first_index.map(|f| f + i as u64);
    let mut r = Report::new(
        json!({
            "from": num(a.from),
            "to": num(a.to),
            "count": table.len(),
            "complete": table.complete,
            "expected_count": num(check.expected_count),
            "residual": num(check.residual),
            "first_index": table.first_index,
            "ordinates": nums(table.ordinates()),
        }),
        vec!["index", "ordinate"],
    );
    for (i, &g) in table.ordinates().iter().enumerate() {
        r = r.row(vec![index(i).into(), g.into()]);
    }
    Ok(r)
}

fn measure_fields(m: &MeasureEstimate) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("set".into(), m.set_spec.label().into());
    o.insert("T".into(), num(m.t));
    o.insert("value".into(), num(m.value));
    o.insert("uncertainty".into(), num(m.uncertainty));
    o.insert("ratio_to_T".into(), num(m.value / m.t));
    o.insert("resolution".into(), num(m.resolution));
    o.insert("crossings".into(), m.crossings.into());
    o
}

const MEASURE_COLUMNS: [&str; 7] = [
    "set",
    "T",
    "value",
    "uncertainty",
    "ratio_to_T",
    "resolution",
    "crossings",
];

fn measure_row(m: &MeasureEstimate) -> Vec<Cell> {
    vec![
        m.set_spec.label().into(),
        m.t.into(),
        m.value.into(),
        m.uncertainty.into(),
        (m.value / m.t).into(),
        m.resolution.into(),
        m.crossings.into(),
    ]
}

pub fn measure(ctx: &Context, a: &MeasureArgs) -> Result<Report> {
    let t = height(a.t)?;
    let m = level_set_measure(t, a.c, &ctx.cfg, a.step)?;
    Ok(Report::new(Value::Object(measure_fields(&m)), MEASURE_COLUMNS.to_vec()).row(measure_row(&m)))
}

pub fn band(ctx: &Context, a: &BandArgs) -> Result<Report> {
    let t = height(a.t)?;
    let m = band_measure(t, a.c1, a.c2, &ctx.cfg, a.step)?;
    let psi = t.ln().ln();
    let predicted = gaussian_band_prediction(t, a.c1.ln(), a.c2.ln(), psi);
    let mut fields = measure_fields(&m);
    fields.insert("gaussian_prediction".into(), num(predicted));
    let mut columns = MEASURE_COLUMNS.to_vec();
    columns.push("gaussian_prediction");
    let mut row = measure_row(&m);
    row.push(predicted.into());
    Ok(Report::new(Value::Object(fields), columns).row(row))
}

pub fn distribution(ctx: &Context, a: &DistributionArgs) -> Result<Report> {
    let t = height(a.t)?;
    let d = ValueSamples::new(t, a.step, &ctx.cfg)?.distribution(&thresholds::y_grid())?;
    let mut r = Report::new(
        json!({
            "T": num(d.t),
            "step": num(a.step),
            "normalizer": num(d.normalizer),
            "samples": d.samples,
            "skipped": d.skipped,
            "ks_distance": num(d.ks_distance),
            "y": nums(&d.y_grid),
            "empirical_cdf": nums(&d.empirical_cdf),
            "phi_cdf": nums(&d.phi_cdf),
        }),
        vec!["y", "empirical_cdf", "phi_cdf"],
    );
    for i in 0..d.y_grid.len() {
        r = r.row(vec![d.y_grid[i].into(), d.empirical_cdf[i].into(), d.phi_cdf[i].into()]);
    }
    Ok(r)
}

pub fn moments(ctx: &Context, a: &MomentsArgs) -> Result<Report> {
    let t = height(a.t)?;
    let samples = ValueSamples::new(t, a.step, &ctx.cfg)?;
    if let Some(lambda) = a.lambda {
        let lambda = match lambda {
            Lambda::Max => zetaline::values::lambda_max(t),
            Lambda::Value(x) => x,
        };
        let s = samples.small_exponent_integral(lambda)?;
        let r = Report::new(
            json!({
                "T": num(s.t), "lambda": num(s.lambda), "lambda_max": num(s.lambda_max),
                "integral": num(s.integral), "ratio": num(s.ratio),
            }),
            vec!["T", "lambda", "lambda_max", "integral", "ratio"],
        );
        return Ok(r.row(vec![
            s.t.into(),
            s.lambda.into(),
            s.lambda_max.into(),
            s.integral.into(),
            s.ratio.into(),
        ]));
    }
    let reports =
        a.k.iter()
            .map(|&k| samples.selberg_moment(k))
            .collect::<Result<Vec<_>>>()?;
    let mut r = Report::new(
        json!({
            "T": num(t),
            "step": num(samples.resolution()),
            "moments": reports.iter().map(|m| json!({
                "k": num(m.k), "exponent": num(m.exponent), "empirical": num(m.empirical),
                "predicted": num(m.predicted), "rel_error": num(m.rel_error),
            })).collect::<Vec<_>>(),
        }),
        vec!["k", "exponent", "empirical", "predicted", "rel_error"],
    );
    for m in &reports {
        r = r.row(vec![
            m.k.into(),
            m.exponent.into(),
            m.empirical.into(),
            m.predicted.into(),
            m.rel_error.into(),
        ]);
    }
    Ok(r)
}

pub fn sdiff(ctx: &mut Context, a: &SdiffArgs) -> Result<Report> {
    let t = height(a.t)?;
    if !(a.big_h > 0.0 && a.big_h <= t) {
        return Err(invalid("H must lie in (0, T]"));
    }
    let table = ctx.table_for(t + a.big_h)?;
    let m = s_diff_moment(t, a.big_h, a.h, a.k, &table)?;
    let ratio = m.empirical / m.predicted;
    let r = Report::new(
        json!({
            "T": num(t), "H": num(a.big_h), "h": num(a.h), "k": a.k,
            "empirical": num(m.empirical), "predicted": num(m.predicted),
            "ratio": num(ratio), "rel_error": num(m.rel_error),
        }),
        vec!["T", "H", "h", "k", "empirical", "predicted", "ratio", "rel_error"],
    );
    Ok(r.row(vec![
        t.into(),
        a.big_h.into(),
        a.h.into(),
        u64::from(a.k).into(),
        m.empirical.into(),
        m.predicted.into(),
        ratio.into(),
        m.rel_error.into(),
    ]))
}

pub fn gap_stats(ctx: &mut Context, a: &GapsArgs) -> Result<Report> {
    let t = height(a.t)?;
    let table = ctx.table_for(t)?;
    let g = gaps(&table, t)?.with_power_sums(&a.alpha)?;
    let counts = a
        .lambda
        .iter()
        .map(|&l| {
            Ok((
                l,
                gap_threshold_count(&table, t, l, ThresholdMode::AtLeast)?,
                gap_threshold_count(&table, t, l, ThresholdMode::AtMost)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r = Report::new(
        json!({
            "T": num(t),
            "n": g.gaps.len(),
            "mean_normalized_gap": num(g.mean_normalized_gap()),
            "power_sums": g.power_sums.iter().map(|&(al, s)| json!({"alpha": num(al), "sum": num(s)})).collect::<Vec<_>>(),
            "threshold_counts": counts.iter().map(|&(l, ge, le)| json!({"lambda": num(l), "at_least": ge, "at_most": le})).collect::<Vec<_>>(),
        }),
        vec!["quantity", "parameter", "value"],
    );
    for &(al, s) in &g.power_sums {
        r = r.row(vec!["power_sum".into(), al.into(), s.into()]);
    }
    for &(l, ge, le) in &counts {
        r = r.row(vec!["count_at_least".into(), l.into(), ge.into()]);
        r = r.row(vec!["count_at_most".into(), l.into(), le.into()]);
    }
    Ok(r)
}

pub fn fujii(ctx: &mut Context, a: &HeightArgs) -> Result<Report> {
    let t = height(a.t)?;
    let table = ctx.table_for(t)?;
    let sum = zetaline::gap_power_sum(&table, t, 2.0)?;
    let bound = fujii_bound(t);
    let ratio = sum / bound;
    let r = Report::new(
        json!({"T": num(t), "sum_sq_gaps": num(sum), "bound": num(bound), "ratio": num(ratio), "holds": sum <= bound}),
        vec!["T", "sum_sq_gaps", "bound", "ratio", "holds"],
    );
    Ok(r.row(vec![
        t.into(),
        sum.into(),
        bound.into(),
        ratio.into(),
        (sum <= bound).into(),
    ]))
}

pub fn abmeasure(ctx: &mut Context, a: &AbMeasureArgs) -> Result<Report> {
    let t = height(a.t)?;
    let table = ctx.table_for(t)?;
    let m = ab_measure(&table, t, &ctx.cfg, a.step)?;
    let mut r = Report::new(
        json!({
            "T": num(t),
            "excluded": num(m.excluded),
            "step": num(a.step.unwrap_or_else(|| default_measure_step(t))),
            "dominated": Value::Object(measure_fields(&m.a)),
            "exceeded": Value::Object(measure_fields(&m.b)),
            "partition_residual": num(m.a.value + m.b.value - (t - m.excluded)),
        }),
        MEASURE_COLUMNS.to_vec(),
    );
    r = r.row(measure_row(&m.a)).row(measure_row(&m.b));
    Ok(r)
}

pub fn abd(ctx: &mut Context, a: &HeightArgs) -> Result<Report> {
    let t = height(a.t)?;
    let table = ctx.table_for(t)?;
    let c = abd_counts(&table, t, &ctx.cfg)?;
    let s = if t >= 100.0 {
        Some(starred_gap_sum(&table, t, &ctx.cfg)?)
    } else {
        None
    };
    let mut json = json!({"T": num(t), "A": c.a, "B": c.b, "D": c.d, "N0": c.n0});
    if let Some(s) = &s {
        json["starred"] = json!({
            "threshold": num(s.threshold), "threshold_vacuous": s.threshold_vacuous,
            "sum": num(s.sum), "count": s.count,
            "complementary_sum": num(s.complementary_sum), "complementary_count": s.complementary_count,
        });
    }
    let mut columns = vec!["T", "A", "B", "D", "N0"];
    let mut row: Vec<Cell> = vec![t.into(), c.a.into(), c.b.into(), c.d.into(), c.n0.into()];
    columns.extend(["starred_threshold", "starred_sum", "starred_count"]);
    match &s {
        Some(s) => row.extend([s.threshold.into(), s.sum.into(), s.count.into()]),
        None => row.extend([f64::NAN.into(), f64::NAN.into(), Cell::from("")]),
    }
    Ok(Report::new(json, columns).row(row))
}

pub fn paircorr(ctx: &mut Context, a: &PaircorrArgs) -> Result<Report> {
    let t = height(a.t)?;
    let alpha = if a.alpha.is_empty() {
        thresholds::c13_alpha_grid()
    } else {
        a.alpha.clone()
    };
    let table = ctx.table_for(t)?;
    let p = pair_correlation(&table, t, &alpha)?;
    let mut r = Report::new(
        json!({
            "T": num(t),
            "n": p.n,
            "window_scale": num(p.window_scale),
            "max_deviation": num(p.max_deviation()),
            "alpha": nums(&p.alpha_grid),
            "empirical": nums(&p.empirical),
            "gue_prediction": nums(&p.gue_prediction),
        }),
        vec!["alpha", "empirical", "gue_prediction"],
    );
    for i in 0..p.alpha_grid.len() {
        r = r.row(vec![
            p.alpha_grid[i].into(),
            p.empirical[i].into(),
            p.gue_prediction[i].into(),
        ]);
    }
    Ok(r)
}

fn file_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("ztbl") => Format::Cached,
        _ => Format::PlainText,
    }
}

pub fn ingest(a: &IngestArgs) -> Result<Report> {
    let mut table = load_zero_table(&a.path, file_format(&a.path))?;
    let check = verify_completeness(&table);
    table.complete = check.passed;
    if let Some(out) = &a.save {
        save_zero_table(&table, out)?;
    }
    let first = table.ordinates().first().copied().unwrap_or(f64::NAN);
    let last = table.ordinates().last().copied().unwrap_or(f64::NAN);
    let r = Report::new(
        json!({
            "count": table.len(), "range_lo": num(table.range_lo()), "range_hi": num(table.range_hi()),
            "first": num(first), "last": num(last), "source": table.source.as_str(),
            "expected_count": num(check.expected_count), "residual": num(check.residual),
            "max_abs_s": num(check.max_abs_s), "complete": table.complete,
        }),
        vec![
            "count",
            "range_lo",
            "range_hi",
            "first",
            "last",
            "expected_count",
            "residual",
            "complete",
        ],
    );
    Ok(r.row(vec![
        table.len().into(),
        table.range_lo().into(),
        table.range_hi().into(),
        first.into(),
        last.into(),
        check.expected_count.into(),
        check.residual.into(),
        table.complete.into(),
    ]))
}

pub fn crosscheck(ctx: &mut Context, a: &CrosscheckArgs) -> Result<Report> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(invalid("tol must be positive"));
    }
    let ingested = load_zero_table(&a.path, file_format(&a.path))?;
    let hi = ingested.range_hi();
    if hi <= 0.0 {
        return Err(invalid("table is empty"));
    }
    let computed = ctx.cache.zeros_through(hi + 1.0)?;
    let c = cross_check(&computed, &ingested, a.tol);
    let agree = c.unmatched_computed.is_empty() && c.unmatched_ingested.is_empty();
    let r = Report::new(
        json!({
            "overlap_lo": num(c.overlap_lo), "overlap_hi": num(c.overlap_hi), "tol": num(a.tol),
            "matched": c.matched, "max_deviation": num(c.max_deviation),
            "unmatched_computed": nums(&c.unmatched_computed),
            "unmatched_ingested": nums(&c.unmatched_ingested),
            "agree": agree,
        }),
        vec![
            "overlap_lo",
            "overlap_hi",
            "matched",
            "unmatched_computed",
            "unmatched_ingested",
            "max_deviation",
            "agree",
        ],
    );
    Ok(r.row(vec![
        c.overlap_lo.into(),
        c.overlap_hi.into(),
        c.matched.into(),
        c.unmatched_computed.len().into(),
        c.unmatched_ingested.len().into(),
        c.max_deviation.into(),
        agree.into(),
    ]))
}
