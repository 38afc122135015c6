//! Pass/fail limits used by `verify`. Values marked "pilot" were measured
//! once with the default configuration and frozen here.

/// Heights at which trend criteria are evaluated.
pub const HEIGHTS: [f64; 3] = [1e3, 1e4, 1e5];

pub const C1_RANGE_HI: f64 = 100.0;
pub const C1_COUNT: usize = 29;
pub const C1_PRINTED: f64 = 14.13;
pub const C1_GAMMA1: f64 = 14.134725;
pub const C1_TOL: f64 = 1e-6;

pub const C2_POINTS: usize = 100;
pub const C2_T_MIN: f64 = 10.0;
pub const C2_T_MAX: f64 = 500.0;
/// Euler-Maclaurin summation length for the oracle side.
pub const C2_EM_TERMS: usize = 400;
pub const C2_BOUND_FROM: f64 = 30.0;
pub const C2_MAX_BOUND: f64 = 1e-6;

pub const C3_MAX_RESIDUAL: f64 = 3.0;

pub const C4_LEVEL: f64 = 1.0;
pub const C4_BAND: (f64, f64) = (0.2, 0.8);
pub const C4_GROWTH_PER_DECADE: f64 = 0.05;

pub const C5_T: f64 = 1e4;
pub const C5_LEVELS: (f64, f64) = (0.5, 2.0);

/// Sampling step for value-distribution statistics.
pub const SAMPLE_STEP: f64 = 0.01;
pub const Y_MIN: f64 = -6.0;
pub const Y_MAX: f64 = 6.0;
pub const Y_STEP: f64 = 0.1;
/// Pilot: KS distance at T = 1e4.
pub const C6_KS_PILOT: f64 = 0.058_932_4;
pub const C6_FACTOR: f64 = 1.5;
pub const C6_SLACK: f64 = 0.02;

pub const C7_K: f64 = 1.0;
/// Pilot: relative error of the k = 1 moment at T = 1e4.
pub const C7_REL_PILOT: f64 = 0.056_781_7;
pub const C7_FACTOR: f64 = 1.5;
/// `e^{k²/2}` at k = 1 to the printed digits.
pub const C7_E_HALF: f64 = 1.64872;

pub const C8_T: f64 = 1e5;
pub const C8_BAND: (f64, f64) = (0.9, 1.3);

pub const C10_TOL: f64 = 1e-6;

pub const C11_T: f64 = 1e4;
pub const C11_SLACK: f64 = 0.02;

pub const C12_T: f64 = 1e4;
pub const C12_FLOOR: f64 = 1.0 / 9.0 - 0.05;

pub const C13_T: f64 = 1e5;
pub const C13_ALPHA_MIN: f64 = 0.25;
pub const C13_ALPHA_MAX: f64 = 2.0;
pub const C13_ALPHA_STEP: f64 = 0.05;
pub const C13_MAX_DEVIATION: f64 = 0.2;
pub const C13_ORACLE_PANELS: usize = 10_000;
pub const C13_ORACLE_TOL: f64 = 1e-9;

pub const C14_T: f64 = 1e3;
pub const C14_BIG_H: f64 = 900.0;
pub const C14_H: f64 = 0.1;
pub const C14_K: u32 = 1;
pub const C14_BAND: (f64, f64) = (0.5, 2.0);

/// `lo, lo + step, ..., hi`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

pub fn y_grid() -> Vec<f64> {
    grid(Y_MIN, Y_MAX, Y_STEP)
}

pub fn c13_alpha_grid() -> Vec<f64> {
    grid(C13_ALPHA_MIN, C13_ALPHA_MAX, C13_ALPHA_STEP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_their_endpoints() {
        let y = y_grid();
        assert_eq!(y.len(), 121);
        assert_eq!(y[0], -6.0);
        assert!((y[120] - 6.0).abs() < 1e-12);
        let a = c13_alpha_grid();
        assert_eq!(a.len(), 36);
        assert!((a[35] - 2.0).abs() < 1e-12);
    }
}
