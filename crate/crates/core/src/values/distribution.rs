//! Value distribution of `log|ζ(½+it)|` and small fractional moments, from
//! midpoint samples of |Z| over `(0, T]`.

use crate::error::{Error, Result};
use crate::special::phi;
use crate::zeta::{grid_values, EvalConfig, ZEvaluator};

/// Smallest height accepted by the distribution operations.
pub const MIN_HEIGHT: f64 = 100.0;
/// Upper end of the admissible `k` range for the Selberg moment.
pub const SELBERG_K_MAX: f64 = 4.0;
/// Samples with |Z| below this are treated as sitting on a zero.
pub const NEAR_ZERO: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionReport {
    pub t: f64,
    pub y_grid: Vec<f64>,
    pub empirical_cdf: Vec<f64>,
    pub phi_cdf: Vec<f64>,
    pub ks_distance: f64,
    /// `√(½ log log T)`.
    pub normalizer: f64,
    pub samples: usize,
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub t: f64,
    pub k: f64,
    /// Power applied to |ζ| (or to the S-increment).
    pub exponent: f64,
    pub empirical: f64,
    pub predicted: f64,
    pub rel_error: f64,
}

impl MomentReport {
    fn new(t: f64, k: f64, exponent: f64, empirical: f64, predicted: f64) -> Self {
        Self {
            t,
            k,
            exponent,
            empirical,
            predicted,
            rel_error: (empirical - predicted).abs() / predicted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallExponentReport {
    pub t: f64,
    pub lambda: f64,
    pub lambda_max: f64,
    pub integral: f64,
    pub ratio: f64,
}

fn log_log(t: f64) -> f64 {
    t.ln().ln()
}

/// `√(½ log log T)`.
pub fn clt_normalizer(t: f64) -> f64 {
    (0.5 * log_log(t)).sqrt()
}

/// `log log T / (9 (log log log T)²)`.
pub fn psi(t: f64) -> f64 {
    let ll = log_log(t);
    ll / (9.0 * ll.ln().powi(2))
}

/// Largest admissible exponent `(ψ(T) log log T)^{−1/2}`.
pub fn lambda_max(t: f64) -> f64 {
    (psi(t) * log_log(t)).sqrt().recip()
}

/// Admissible `k` for the Selberg moment: `[e^{−√(log log T)}, SELBERG_K_MAX]`.
pub fn selberg_k_window(t: f64) -> (f64, f64) {
    ((-log_log(t).sqrt()).exp(), SELBERG_K_MAX)
}

/// |Z| at the midpoints of a uniform grid over `(0, T]`.
#[derive(Clone, Debug)]
pub struct ValueSamples {
    t: f64,
    h: f64,
    abs_z: Vec<f64>,
}

impl ValueSamples {
    pub fn new(t: f64, step: f64, cfg: &EvalConfig<f64>) -> Result<Self> {
        if !(t >= MIN_HEIGHT && t.is_finite()) {
            return Err(Error::OutOfWindow {
                name: "T",
                value: t,
                lo: MIN_HEIGHT,
                hi: f64::INFINITY,
            });
        }
        if !(step > 0.0 && step < t) {
            return Err(Error::invalid("step must lie in (0, T)"));
        }
        let cells = (t / step).ceil() as usize;
        let h = t / cells as f64;
        let ev = ZEvaluator::new(*cfg, t)?;
        let mut abs_z = grid_values(&ev, 0.5 * h, h, cells);
        for z in &mut abs_z {
            *z = z.abs();
        }
        Ok(Self { t, h, abs_z })
    }

    pub fn height(&self) -> f64 {
        self.t
    }

    pub fn resolution(&self) -> f64 {
        self.h
    }

    pub fn abs_values(&self) -> &[f64] {
        &self.abs_z
    }

    /// Empirical CDF of `log|Z|/√(½ log log T)` on `y_grid`, against Φ.
    pub fn distribution(&self, y_grid: &[f64]) -> Result<DistributionReport> {
        if y_grid.is_empty() || y_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::DegenerateGrid);
        }
        let normalizer = clt_normalizer(self.t);
        let mut xs: Vec<f64> = self
            .abs_z
            .iter()
            .filter(|&&z| z >= NEAR_ZERO)
            .map(|z| z.ln() / normalizer)
            .collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let empirical_cdf: Vec<f64> = y_grid
            .iter()
            .map(|&y| xs.partition_point(|&x| x <= y) as f64 / n)
            .collect();
        let phi_cdf: Vec<f64> = y_grid.iter().map(|&y| phi(y)).collect();
        let ks_distance = empirical_cdf
            .iter()
            .zip(&phi_cdf)
            .map(|(e, p)| (e - p).abs())
            .fold(0.0, f64::max);
        Ok(DistributionReport {
            t: self.t,
            y_grid: y_grid.to_vec(),
            empirical_cdf,
            phi_cdf,
            ks_distance,
            normalizer,
            samples: xs.len(),
            skipped: self.abs_z.len() - xs.len(),
        })
    }

    /// `(1/T) ∫ |ζ|^{2k/√(2 log log T)}` against `e^{k²/2}`.
    pub fn selberg_moment(&self, k: f64) -> Result<MomentReport> {
        let (lo, hi) = selberg_k_window(self.t);
        if !(k >= lo && k <= hi) {
            return Err(Error::OutOfWindow {
                name: "k",
                value: k,
                lo,
                hi,
            });
        }
        let exponent = 2.0 * k / (2.0 * log_log(self.t)).sqrt();
        let empirical = self.power_integral(exponent) / self.t;
        Ok(MomentReport::new(self.t, k, exponent, empirical, (0.5 * k * k).exp()))
    }

    /// `∫₀^T |ζ|^λ dt` for `0 ≤ λ ≤ (ψ(T) log log T)^{−1/2}`.
    pub fn small_exponent_integral(&self, lambda: f64) -> Result<SmallExponentReport> {
        let hi = lambda_max(self.t);
        if !(lambda >= 0.0 && lambda <= hi) {
            return Err(Error::OutOfWindow {
                name: "lambda",
                value: lambda,
                lo: 0.0,
                hi,
            });
        }
        let integral = if lambda == 0.0 {
            self.t
        } else {
            self.power_integral(lambda)
        };
        Ok(SmallExponentReport {
            t: self.t,
            lambda,
            lambda_max: hi,
            integral,
            ratio: integral / self.t,
        })
    }

    /// Midpoint sum of `|Z|^p`.
    pub fn power_integral(&self, p: f64) -> f64 {
        self.abs_z.iter().map(|z| z.powf(p)).sum::<f64>() * self.h
    }
}

pub fn clt_distribution(t: f64, step: f64, y_grid: &[f64], cfg: &EvalConfig<f64>) -> Result<DistributionReport> {
    if y_grid.is_empty() || y_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateGrid);
    }
    ValueSamples::new(t, step, cfg)?.distribution(y_grid)
}

pub fn selberg_moment(t: f64, k: f64, step: f64, cfg: &EvalConfig<f64>) -> Result<MomentReport> {
    ValueSamples::new(t, step, cfg)?.selberg_moment(k)
}

pub fn small_exponent_integral(t: f64, lambda: f64, step: f64, cfg: &EvalConfig<f64>) -> Result<SmallExponentReport> {
    ValueSamples::new(t, step, cfg)?.small_exponent_integral(lambda)
}
