//! Evaluation of the Riemann-Siegel theta function, the Hardy Z-function and
//! `ζ(½ + it)`.
//!
//! Above `EvalConfig::rs_min_t` the Riemann-Siegel formula is used: the main
//! sum `2 Σ_{n ≤ a} n^{-1/2} cos(θ(t) − t ln n)` with `a = √(t/2π)`, plus the
//! remainder series `(−1)^{N−1} a^{−1/2} Σ_k C_k(p) a^{−k}` truncated after
//! `rs_corrections + 1` terms. Below it, ζ is summed with Euler-Maclaurin,
//! which also serves as the independent oracle for the fast path.

mod rs_coeffs;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ln_gamma_im, BERNOULLI_OVER_FACTORIAL};

/// Below this height θ is computed from the complex log-Gamma function
/// instead of its asymptotic series.
const THETA_SERIES_MIN_T: f64 = 10.0;

/// `sup_{0≤p≤1} |C_k(p)|` for `k = 0..=5`, rounded up. The C5 entry is a
/// measured supremum (C5 is not tabulated); the others come from the tables.
const RS_COEFF_SUP: [f64; 6] = [0.9239, 0.030_598, 0.005_190_7, 0.000_317_39, 0.000_464_84, 0.000_076];

/// Safety factor applied to the first omitted Riemann-Siegel term.
const RS_BOUND_FACTOR: f64 = 2.0;

/// Maximum supported number of Riemann-Siegel correction terms.
pub const MAX_RS_CORRECTIONS: usize = 4;

/// Evaluation parameters shared by every Z/ζ computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig<F> {
    /// Height from which the Riemann-Siegel formula is used.
    pub rs_min_t: F,
    /// Minimum Euler-Maclaurin summation length; the Euler-Maclaurin path
    /// lengthens the sum as needed for the requested height.
    pub em_terms: usize,
    /// Number of Riemann-Siegel correction terms beyond `C_0` (0..=4).
    pub rs_corrections: usize,
}

impl<F: Real> Default for EvalConfig<F> {
    fn default() -> Self {
        Self {
            rs_min_t: F::lit(260.0),
            em_terms: 50,
            rs_corrections: 2,
        }
    }
}

impl<F: Real> EvalConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rs_min_t > F::zero()) || !self.rs_min_t.is_finite() {
            return Err(Error::invalid("rs_min_t must be positive and finite"));
        }
        if self.em_terms < 10 {
            return Err(Error::invalid("em_terms must be at least 10"));
        }
        if self.rs_corrections > MAX_RS_CORRECTIONS {
            return Err(Error::invalid(format!(
                "rs_corrections must be in [0, {MAX_RS_CORRECTIONS}]"
            )));
        }
        Ok(())
    }
}

/// One evaluation point on the critical line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaSample<F> {
    pub t: F,
    pub theta: F,
    pub z: F,
    pub zeta_re: F,
    pub zeta_im: F,
    /// Absolute bound on the error of `z`.
    pub err_bound: F,
}

/// Euler-Maclaurin value of ζ(s) with its remainder bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmValue<F> {
    pub value: Complex<F>,
    pub err_bound: F,
    /// Number of Bernoulli correction terms used.
    pub corrections: usize,
}

/// Riemann-Siegel theta function `θ(t) = Im ln Γ(¼ + it/2) − (t/2) ln π`.
pub fn theta<F: Real>(t: F) -> F {
    if t == F::zero() {
        return F::zero();
    }
    let at = t.abs();
    let v = if at >= F::lit(THETA_SERIES_MIN_T) {
        theta_series(at)
    } else {
        theta_direct(at)
    };
    if t < F::zero() {
        -v
    } else {
        v
    }
}

fn theta_series<F: Real>(t: F) -> F {
    let two_pi = F::TAU();
    let half = F::lit(0.5);
    let inv = t.recip();
    let inv2 = inv * inv;
    // 1/(48t) + 7/(5760t³) + 31/(80640t⁵) + 127/(430080t⁷) + 511/(1216512t⁹)
    let tail = inv
        * (F::lit(1.0 / 48.0)
            + inv2
                * (F::lit(7.0 / 5760.0)
                    + inv2
                        * (F::lit(31.0 / 80640.0)
                            + inv2 * (F::lit(127.0 / 430080.0) + inv2 * F::lit(511.0 / 1216512.0)))));
    half * t * (t / two_pi).ln() - half * t - F::PI() / F::lit(8.0) + tail
}

fn theta_direct<F: Real>(t: F) -> F {
    let half = F::lit(0.5);
    ln_gamma_im(Complex::new(F::lit(0.25), half * t)) - half * t * F::PI().ln()
}

/// Euler-Maclaurin evaluation of ζ(σ + it) with `terms` summands.
///
/// Domain: `σ ∈ [0.4, 2.1]`, `terms ≥ 10`, `|t| ≤ 10·terms`, `s ≠ 1`.
pub fn em_zeta<F: Real>(sigma: F, t: F, terms: usize) -> Result<EmValue<F>> {
    if !(sigma >= F::lit(0.4) && sigma <= F::lit(2.1)) {
        return Err(Error::invalid("em_zeta: sigma must lie in [0.4, 2.1]"));
    }
    if terms < 10 {
        return Err(Error::invalid("em_zeta: terms must be at least 10"));
    }
    if !t.is_finite() || t.abs() > F::from_usize_lossy(10 * terms) {
        return Err(Error::invalid("em_zeta: |t| must not exceed 10·terms"));
    }
    if sigma == F::one() && t == F::zero() {
        return Err(Error::invalid("em_zeta: pole at s = 1"));
    }
    Ok(em_unchecked(Complex::new(sigma, t), terms))
}

fn em_unchecked<F: Real>(s: Complex<F>, n: usize) -> EmValue<F> {
    let one = F::one();
    let mut acc = Complex::new(F::zero(), F::zero());
    for k in 1..n {
        let ln_k = F::from_usize_lossy(k).ln();
        let mag = (-s.re * ln_k).exp();
        let ph = s.im * ln_k;
        acc = acc + Complex::new(mag * ph.cos(), -mag * ph.sin());
    }
    let big_n = F::from_usize_lossy(n);
    let ln_n = big_n.ln();
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    acc = acc + n_pow * big_n / (s - one) + n_pow * F::lit(0.5);

    // T_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let inv_n2 = (big_n * big_n).recip();
    let mut poch = s;
    let mut npow = n_pow / big_n;
    let mut prev_mag = F::infinity();
    let mut omitted = F::zero();
    let mut used = 0usize;
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = poch * npow * F::lit(b);
        let mag = term.norm();
        let m = used; // terms already added
        if mag >= prev_mag || mag <= F::epsilon() * F::epsilon() * acc.norm() {
            let kk = F::from_usize_lossy(2 * m + 1);
            omitted = mag * (s + kk).norm() / (s.re + kk);
            break;
        }
        acc = acc + term;
        used += 1;
        prev_mag = mag;
        if k + 1 == BERNOULLI_OVER_FACTORIAL.len() {
            // terms are still decreasing, so the next one is below `mag`
            let kk = F::from_usize_lossy(2 * used + 1);
            omitted = mag * (s + kk).norm() / (s.re + kk);
        }
        let a = F::from_usize_lossy(2 * k + 1);
        poch = poch * (s + a) * (s + a + one);
        npow = npow * inv_n2;
    }
    let rounding = F::lit(8.0) * F::epsilon() * F::from_usize_lossy(n) * (one + acc.norm());
    EmValue {
        value: acc,
        err_bound: omitted + rounding,
        corrections: used,
    }
}

/// `Σ_k C_k(p) a^{-k}` for `k = 0..=corrections`.
fn rs_remainder_series<F: Real>(p: F, a: F, corrections: usize) -> F {
    let z = p + p - F::one();
    let tables: [&[f64]; 5] = [
        &rs_coeffs::C0,
        &rs_coeffs::C1,
        &rs_coeffs::C2,
        &rs_coeffs::C3,
        &rs_coeffs::C4,
    ];
    let inv_a = a.recip();
    let mut scale = F::one();
    let mut total = F::zero();
    for table in tables.iter().take(corrections + 1) {
        let mut poly = F::zero();
        for &c in table.iter().rev() {
            poly = poly * z + F::lit(c);
        }
        total = total + poly * scale;
        scale = scale * inv_a;
    }
    total
}

/// Declared truncation bound of the Riemann-Siegel remainder at height `t`.
pub fn rs_truncation_bound<F: Real>(t: F, corrections: usize) -> F {
    let a = (t / F::TAU()).sqrt();
    let expo = F::lit(-(2.0 * corrections as f64 + 3.0) / 2.0);
    F::lit(RS_BOUND_FACTOR * RS_COEFF_SUP[corrections + 1]) * a.powf(expo)
}

/// Precomputed `ln n` and `n^{-1/2}` for the Riemann-Siegel main sum.
#[derive(Clone, Debug)]
struct MainSumTable<F> {
    ln: Vec<F>,
    inv_sqrt: Vec<F>,
}

impl<F: Real> MainSumTable<F> {
    fn new(len: usize) -> Self {
        let mut ln = Vec::with_capacity(len);
        let mut inv_sqrt = Vec::with_capacity(len);
        for n in 1..=len {
            let nf = F::from_usize_lossy(n);
            ln.push(nf.ln());
            inv_sqrt.push(nf.sqrt().recip());
        }
        Self { ln, inv_sqrt }
    }
}

/// Z-function evaluator with cached main-sum tables.
///
/// Pure apart from its read-only tables; share it across threads freely.
#[derive(Clone, Debug)]
pub struct ZEvaluator<F> {
    cfg: EvalConfig<F>,
    table: MainSumTable<F>,
}

impl<F: Real> ZEvaluator<F> {
    /// Builds an evaluator whose tables cover heights up to `t_max`; larger
    /// heights still work, with the extra terms computed on the fly.
    pub fn new(cfg: EvalConfig<F>, t_max: F) -> Result<Self> {
        cfg.validate()?;
        let t_max = if t_max.is_finite() && t_max > F::zero() {
            t_max
        } else {
            F::zero()
        };
        let len = (t_max / F::TAU()).sqrt().floor().to_usize().unwrap_or(0) + 1;
        Ok(Self {
            cfg,
            table: MainSumTable::new(len),
        })
    }

    pub fn config(&self) -> &EvalConfig<F> {
        &self.cfg
    }

    /// `Z(t)` for `t ≥ 0`, without error bookkeeping.
    #[inline]
    pub fn z(&self, t: F) -> F {
        if t >= self.cfg.rs_min_t {
            self.rs_z(t, theta(t))
        } else {
            self.em_z(t, theta(t)).0
        }
    }

    /// Full sample at `t ≥ 0`.
    pub fn sample(&self, t: F) -> ZetaSample<F> {
        let th = theta(t);
        let (z, err_bound) = if t >= self.cfg.rs_min_t {
            let z = self.rs_z(t, th);
            (z, self.rs_err(t, th))
        } else {
            self.em_z(t, th)
        };
        ZetaSample {
            t,
            theta: th,
            z,
            zeta_re: z * th.cos(),
            zeta_im: -z * th.sin(),
            err_bound,
        }
    }

    fn rs_z(&self, t: F, th: F) -> F {
        let a = (t / F::TAU()).sqrt();
        let n = a.floor().to_usize().unwrap_or(1).max(1);
        let cached = n.min(self.table.ln.len());
        let mut sum = F::zero();
        for k in 0..cached {
            sum = sum + self.table.inv_sqrt[k] * (th - t * self.table.ln[k]).cos();
        }
        for k in cached + 1..=n {
            let kf = F::from_usize_lossy(k);
            sum = sum + (th - t * kf.ln()).cos() / kf.sqrt();
        }
        sum + sum + self.rs_remainder(t)
    }

    /// `(−1)^{N−1} a^{−1/2} Σ_k C_k(p) a^{−k}`.
    #[inline]
    fn rs_remainder(&self, t: F) -> F {
        let a = (t / F::TAU()).sqrt();
        let n = a.floor().to_usize().unwrap_or(1).max(1);
        let p = a - F::from_usize_lossy(n);
        let sign = if n % 2 == 1 { F::one() } else { -F::one() };
        rs_remainder_series(p, a, self.cfg.rs_corrections) * sign / a.sqrt()
    }

    fn ln_inv_sqrt(&self, n: usize) -> (F, F) {
        if n <= self.table.ln.len() {
            (self.table.ln[n - 1], self.table.inv_sqrt[n - 1])
        } else {
            let nf = F::from_usize_lossy(n);
            (nf.ln(), nf.sqrt().recip())
        }
    }

    /// `Z(t0 + j·h)` for `j = 0..count`, all heights `≥ 0`.
    ///
    /// On the Riemann-Siegel path each term `n^{-1/2} e^{-it ln n}` is
    /// advanced by the fixed rotation `e^{-ih ln n}`, re-seeded exactly every
    /// `GRID_RESEED` points. Agrees with [`ZEvaluator::z`] to rounding.
    pub fn z_grid(&self, t0: F, h: F, count: usize) -> Vec<F> {
        const GRID_RESEED: usize = 64;
        let mut out = Vec::with_capacity(count);
        let (mut w_re, mut w_im, mut r_re, mut r_im) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut j = 0usize;
        while j < count {
            let t_start = t0 + h * F::from_usize_lossy(j);
            if t_start < self.cfg.rs_min_t {
                out.push(self.z(t_start));
                j += 1;
                continue;
            }
            let block = GRID_RESEED.min(count - j);
            let t_end = t0 + h * F::from_usize_lossy(j + block - 1);
            let n_max = (t_end / F::TAU()).sqrt().floor().to_usize().unwrap_or(1).max(1);
            w_re.clear();
            w_im.clear();
            r_re.clear();
            r_im.clear();
            for n in 1..=n_max {
                let (ln, inv_sqrt) = self.ln_inv_sqrt(n);
                let (s, c) = (t_start * ln).sin_cos();
                w_re.push(inv_sqrt * c);
                w_im.push(-inv_sqrt * s);
                let (s, c) = (h * ln).sin_cos();
                r_re.push(c);
                r_im.push(-s);
            }
            for k in 0..block {
                let t = t0 + h * F::from_usize_lossy(j + k);
                let n = (t / F::TAU()).sqrt().floor().to_usize().unwrap_or(1).clamp(1, n_max);
                let (mut sr, mut si) = (F::zero(), F::zero());
                for i in 0..n {
                    sr = sr + w_re[i];
                    si = si + w_im[i];
                }
                let (s, c) = theta(t).sin_cos();
                let main = c * sr - s * si;
                out.push(main + main + self.rs_remainder(t));
                for i in 0..n_max {
                    let (a, b) = (w_re[i], w_im[i]);
                    w_re[i] = a * r_re[i] - b * r_im[i];
                    w_im[i] = a * r_im[i] + b * r_re[i];
                }
            }
            j += block;
        }
        out
    }

    fn rs_err(&self, t: F, th: F) -> F {
        let a = (t / F::TAU()).sqrt();
        let n = a.floor().max(F::one());
        let phase_scale = th.abs() + t * n.ln() + F::one();
        let rounding = F::lit(4.0) * F::epsilon() * n.sqrt() * phase_scale;
        rs_truncation_bound(t, self.cfg.rs_corrections) + rounding
    }

    /// Euler-Maclaurin path: `Z = Re(e^{iθ} ζ(½ + it))`.
    fn em_z(&self, t: F, th: F) -> (F, F) {
        let needed = (t / F::PI()).ceil().to_usize().unwrap_or(0) + 1;
        let n = self.cfg.em_terms.max(needed);
        let em = em_unchecked(Complex::new(F::lit(0.5), t), n);
        let rot = Complex::new(th.cos(), th.sin());
        let z = (rot * em.value).re;
        let phase_err = F::epsilon() * (th.abs() + F::one()) * em.value.norm();
        (z, em.err_bound + phase_err)
    }
}

/// `Z(|t0 + j·h|)` for `j = 0..count`, evaluated in parallel blocks.
pub(crate) fn grid_values<F: Real>(ev: &ZEvaluator<F>, t0: F, h: F, count: usize) -> Vec<F> {
    const BLOCK: usize = 2048;
    let blocks: Vec<Vec<F>> = (0..count.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let j0 = b * BLOCK;
            z_grid_reflected(ev, t0 + h * F::from_usize_lossy(j0), h, BLOCK.min(count - j0))
        })
        .collect();
    blocks.concat()
}

/// Sequential `Z(|t0 + j·h|)`; points left of 0 use the evenness of Z.
pub(crate) fn z_grid_reflected<F: Real>(ev: &ZEvaluator<F>, t0: F, h: F, count: usize) -> Vec<F> {
    let at = |j: usize| t0 + h * F::from_usize_lossy(j);
    let negative = (0..count).take_while(|&j| at(j) < F::zero()).count();
    let mut out: Vec<F> = (0..negative).map(|j| ev.z(-at(j))).collect();
    if negative < count {
        out.extend(ev.z_grid(at(negative), h, count - negative));
    }
    out
}

pub fn z_function<F: Real>(t: F, cfg: &EvalConfig<F>) -> Result<ZetaSample<F>> {
    if !t.is_finite() || t < F::zero() {
        return Err(Error::invalid("z_function requires finite t >= 0"));
    }
    Ok(ZEvaluator::new(*cfg, F::zero())?.sample(t))
}

/// `ζ(½ + it)` for any finite `t`, using `ζ(½ − it) = conj ζ(½ + it)`.
pub fn zeta_half<F: Real>(t: F, cfg: &EvalConfig<F>) -> Result<ZetaSample<F>> {
    if !t.is_finite() {
        return Err(Error::invalid("zeta_half requires finite t"));
    }
    let mut s = z_function(t.abs(), cfg)?;
    if t < F::zero() {
        s.t = t;
        s.theta = -s.theta;
        s.zeta_im = -s.zeta_im;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values below come from an arbitrary-precision evaluation
    // (50 digits) and are frozen here.
    const ZETA_HALF: f64 = -1.460_354_508_809_586_8;
    const THETA_100: f64 = 87.972_165_231_787_22;
    const THETA_5: f64 = -3.459_620_375_363_462_5;
    const THETA_50: f64 = 26.461_366_070_161_41;
    const Z_1000: f64 = 0.997_794_637_521_586_6;

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    #[test]
    fn theta_is_odd_and_vanishes_at_zero() {
        assert_eq!(theta(0.0_f64), 0.0);
        let t = 50.0_f64;
        assert!((theta(-t) + theta(t)).abs() <= 4.0 * f64::EPSILON * theta(t).abs());
    }

    #[test]
    fn theta_matches_reference() {
        assert!((theta(100.0_f64) - THETA_100).abs() < 1e-9);
        assert!((theta(50.0_f64) - THETA_50).abs() < 1e-11);
        assert!((theta(5.0_f64) - THETA_5).abs() < 1e-12);
    }

    #[test]
    fn theta_branches_agree_at_switch() {
        let t = THETA_SERIES_MIN_T;
        assert!((theta_series(t) - theta_direct(t)).abs() < 1e-12);
    }

    #[test]
    fn z_at_origin_is_zeta_half() {
        let s = z_function(0.0, &cfg()).unwrap();
        assert!((s.z - ZETA_HALF).abs() < 1e-12);
        assert_eq!(s.zeta_im, 0.0);
        assert!((s.zeta_re - ZETA_HALF).abs() < 1e-12);
    }

    #[test]
    fn z_at_first_zero_is_small() {
        let s = z_function(14.134_725_141_734_694, &cfg()).unwrap();
        assert!(s.z.abs() < 1e-6, "{}", s.z);
        let s = zeta_half(14.134_725_141_734_694, &cfg()).unwrap();
        assert!(s.zeta_re.hypot(s.zeta_im) < 1e-6);
    }

    #[test]
    fn z_at_1000_matches_reference_and_modulus() {
        let s = z_function(1000.0, &cfg()).unwrap();
        assert!((s.z - Z_1000).abs() <= s.err_bound, "{} vs bound {}", s.z, s.err_bound);
        let hi = z_function(
            1000.0,
            &EvalConfig {
                rs_corrections: 4,
                ..cfg()
            },
        )
        .unwrap();
        assert!((hi.z - Z_1000).abs() < 1e-10);
        let modulus = s.zeta_re.hypot(s.zeta_im);
        assert!((modulus - s.z.abs()).abs() <= 8.0 * f64::EPSILON * (1.0 + s.z.abs()));
    }

    #[test]
    fn negative_t_rejected_by_z_but_not_zeta_half() {
        assert!(z_function(-1.0, &cfg()).is_err());
        let a = zeta_half(30.0, &cfg()).unwrap();
        let b = zeta_half(-30.0, &cfg()).unwrap();
        assert_eq!(a.zeta_re, b.zeta_re);
        assert_eq!(a.zeta_im, -b.zeta_im);
    }

    #[test]
    fn em_classical_values() {
        let v = em_zeta(2.0_f64, 0.0, 50).unwrap();
        assert!((v.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        let a = em_zeta(0.5_f64, 0.0, 50).unwrap();
        let b = em_zeta(0.5, 0.0, 200).unwrap();
        assert!((a.value.re - b.value.re).abs() < 1e-10);
        assert!((a.value.re - ZETA_HALF).abs() < 1e-12);
    }

    #[test]
    fn em_domain_checks() {
        assert!(em_zeta(0.3, 0.0, 50).is_err());
        assert!(em_zeta(2.2, 0.0, 50).is_err());
        assert!(em_zeta(0.5, 0.0, 9).is_err());
        assert!(em_zeta(0.5, 501.0, 50).is_err());
        assert!(em_zeta(1.0, 0.0, 50).is_err());
    }

    #[test]
    fn em_agrees_with_rs_at_50() {
        let c = EvalConfig {
            rs_min_t: 30.0,
            ..cfg()
        };
        let rs = zeta_half(50.0, &c).unwrap();
        let em = em_zeta(0.5, 50.0, 200).unwrap();
        let diff = (Complex::new(rs.zeta_re, rs.zeta_im) - em.value).norm();
        assert!(
            diff <= rs.err_bound + em.err_bound,
            "{diff} > {}",
            rs.err_bound + em.err_bound
        );
    }

    #[test]
    fn config_validation() {
        assert!(EvalConfig { rs_min_t: 0.0, ..cfg() }.validate().is_err());
        assert!(EvalConfig { em_terms: 9, ..cfg() }.validate().is_err());
        assert!(EvalConfig {
            rs_corrections: 5,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(cfg().validate().is_ok());
    }

    #[test]
    fn evaluator_table_overflow_matches_fresh_sum() {
        let small = ZEvaluator::new(cfg(), 300.0).unwrap();
        let big = ZEvaluator::new(cfg(), 2.0e5).unwrap();
        let t = 123_456.789;
        assert!((small.z(t) - big.z(t)).abs() < 1e-10);
    }

    #[test]
    fn grid_matches_pointwise() {
        let ev = ZEvaluator::new(cfg(), 1.1e5).unwrap();
        for (t0, h) in [(100.0, 0.37), (99_990.0, 0.013), (250.0, 0.5)] {
            let grid = ev.z_grid(t0, h, 300);
            for (j, g) in grid.iter().enumerate() {
                let t = t0 + h * j as f64;
                let s = ev.sample(t);
                assert!((g - s.z).abs() <= s.err_bound, "t={t}: {g} vs {}", s.z);
            }
        }
    }

    #[test]
    fn f32_kernel_is_coarse_but_sane() {
        let c = EvalConfig::<f32>::default();
        let s = z_function(0.0_f32, &c).unwrap();
        assert!((s.z - ZETA_HALF as f32).abs() < 1e-4);
        let s = z_function(14.134_725_f32, &c).unwrap();
        assert!(s.z.abs() < 1e-3);
    }
}
