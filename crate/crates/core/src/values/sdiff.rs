//! Even moments of the increment `S(t+h) − S(t)` over `[T, T+H]`.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre5;
use crate::values::distribution::MomentReport;
use crate::zeros::{count_main_term, ZeroTable};

/// Exponent of the lower end of the admissible `H` range, `T^a ≤ H ≤ T`.
pub const H_EXPONENT: f64 = 0.6;
/// Integration pieces are at most `h / PIECES_PER_H` long.
pub const PIECES_PER_H: f64 = 8.0;

/// `H (2k)! / ((2π²)^k k!) · log^k(2 + h log T)`.
pub fn tsang_main_term(t: f64, big_h: f64, h: f64, k: u32) -> f64 {
    let k_fact: f64 = (1..=k).map(f64::from).product();
    let two_k_fact: f64 = (1..=2 * k).map(f64::from).product();
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    big_h * two_k_fact / (two_pi_sq.powi(k as i32) * k_fact) * (2.0 + h * t.ln()).ln().powi(k as i32)
}

/// `∫_T^{T+H} (S(t+h) − S(t))^{2k} dt`, with `S = N − main term`.
///
/// `N(t+h) − N(t)` is constant between the points `γ` and `γ − h`; each
/// such piece is integrated by 5-point Gauss-Legendre on sub-pieces no
/// longer than `h/8`, so the only error is quadrature of the smooth drift.
pub fn s_diff_integral(t: f64, big_h: f64, h: f64, k: u32, table: &ZeroTable) -> Result<f64> {
    let end = t + big_h;
    table.require_cover(end + h)?;
    let ords = table.ordinates();
    let mut breaks: Vec<f64> = vec![t, end];
    let lo = ords.partition_point(|&g| g <= t);
    let hi = ords.partition_point(|&g| g <= end + h);
    for &g in &ords[lo..hi] {
        for b in [g, g - h] {
            if b > t && b < end {
                breaks.push(b);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let power = 2 * k as i32;
    let max_piece = h / PIECES_PER_H;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (u, v) = (w[0], w[1]);
        if v <= u {
            continue;
        }
        let mid = 0.5 * (u + v);
        let jumps = (table.count_up_to(mid + h) - table.count_up_to(mid)) as f64;
        let f = |s: f64| (jumps - (count_main_term(s + h) - count_main_term(s))).powi(power);
        let n = ((v - u) / max_piece).ceil().max(1.0) as usize;
        let d = (v - u) / n as f64;
        for i in 0..n {
            let a = u + i as f64 * d;
            let b = if i + 1 == n { v } else { a + d };
            total += gauss_legendre5(f, a, b);
        }
    }
    Ok(total)
}

/// Empirical S-increment moment against the asymptotic main term.
pub fn s_diff_moment(t: f64, big_h: f64, h: f64, k: u32, table: &ZeroTable) -> Result<MomentReport> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::invalid("T must exceed 1"));
    }
    let h_lo = t.powf(H_EXPONENT);
    if !(big_h >= h_lo && big_h <= t) {
        return Err(Error::OutOfWindow {
            name: "H",
            value: big_h,
            lo: h_lo,
            hi: t,
        });
    }
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::OutOfWindow {
            name: "h",
            value: h,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if k == 0 {
        return Err(Error::invalid("k must be a positive integer"));
    }
    table.require_cover(t + big_h + 1.0)?;
    let empirical = s_diff_integral(t, big_h, h, k, table)?;
    let predicted = tsang_main_term(t, big_h, h, k);
    Ok(MomentReport {
        t,
        k: f64::from(k),
        exponent: f64::from(2 * k),
        empirical,
        predicted,
        rel_error: (empirical - predicted).abs() / predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::zeros::Source;

    fn sparse_table() -> ZeroTable {
        // nothing in [30, 38.7]
        let mut t = ZeroTable::new(0.0, 50.0, vec![14.0, 21.0, 25.0, 29.9, 38.8, 45.0], Source::Ingested).unwrap();
        t.complete = true;
        t
    }

    #[test]
    fn zero_free_window_is_pure_drift() {
        let table = sparse_table();
        let (t, big_h, h) = (30.0, 30f64.powf(0.6), 0.5);
        for k in 1..=3 {
            let got = s_diff_moment(t, big_h, h, k, &table).unwrap().empirical;
            let drift = |s: f64| (count_main_term(s + h) - count_main_term(s)).powi(2 * k as i32);
            let want = integrate(drift, t, t + big_h, 1e-13).value;
            assert!((got - want).abs() <= 1e-10 * want, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn single_jump_is_counted_over_its_shadow() {
        // one zero at 36 inside the window: N(t+h) − N(t) = 1 on (35.5, 36)
        let mut table = ZeroTable::new(0.0, 50.0, vec![14.0, 21.0, 25.0, 29.9, 36.0, 45.0], Source::Ingested).unwrap();
        table.complete = true;
        let (t, big_h, h) = (30.0, 30f64.powf(0.6), 0.5);
        let got = s_diff_integral(t, big_h, h, 1, &table).unwrap();
        let drift = |s: f64| count_main_term(s + h) - count_main_term(s);
        let want = integrate(|s| drift(s).powi(2), t, 35.5, 1e-13).value
            + integrate(|s| (1.0 - drift(s)).powi(2), 35.5, 36.0, 1e-13).value
            + integrate(|s| drift(s).powi(2), 36.0, t + big_h, 1e-13).value;
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn main_term_value() {
        // k = 1: H·2/(2π²)·log(2 + h log T)
        let m = tsang_main_term(1000.0, 900.0, 0.1, 1);
        let want = 900.0 / std::f64::consts::PI.powi(2) * (2.0 + 0.1 * 1000f64.ln()).ln();
        assert!((m - want).abs() < 1e-12 * want);
    }

    #[test]
    fn window_checks() {
        let table = sparse_table();
        assert!(matches!(
            s_diff_moment(30.0, 3.0, 0.5, 1, &table),
            Err(Error::OutOfWindow { name: "H", .. })
        ));
        assert!(matches!(
            s_diff_moment(30.0, 8.0, 1.0, 1, &table),
            Err(Error::OutOfWindow { name: "h", .. })
        ));
        assert!(s_diff_moment(30.0, 8.0, 0.5, 0, &table).is_err());
        let mut short = table.restrict(0.0, 35.0).unwrap();
        short.complete = true;
        assert!(matches!(
            s_diff_moment(30.0, 8.0, 0.5, 1, &short),
            Err(Error::IncompleteTable { .. })
        ));
    }
}
