//! Special functions: the normal probability integral and the imaginary part
//! of the complex log-Gamma function.

use num_complex::Complex;

use crate::scalar::Real;

/// `B_{2k} / (2k)!` for `k = 1..=30`.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
    2.267952452337683e-24,
    -5.744790668872202e-26,
    1.455172475614865e-27,
    -3.6859949406653103e-29,
    9.336734257095045e-31,
    -2.36502241570063e-32,
    5.990671762482134e-34,
    -1.5174548844682903e-35,
    3.843758125454189e-37,
    -9.736353072646691e-39,
    2.466247044200681e-40,
    -6.247076741820743e-42,
    1.5824030244644914e-43,
    -4.008273685948936e-45,
    1.0153075855569557e-46,
    -2.5718041582418717e-48,
];

/// Stirling series coefficients `B_{2k} / (2k (2k - 1))`.
const STIRLING: [f64; 10] = [
    0.08333333333333333,
    -0.002777777777777778,
    0.0007936507936507937,
    -0.0005952380952380953,
    0.0008417508417508417,
    -0.0019175269175269176,
    0.00641025641025641,
    -0.029550653594771242,
    0.17964437236883057,
    -1.3924322169059011,
];

/// Imaginary part of `ln Γ(z)` on the branch continuous from the positive
/// real axis, for `Re z > 0`.
pub fn ln_gamma_im<F: Real>(z: Complex<F>) -> F {
    debug_assert!(z.re > F::zero());
    let shift = 12usize;
    let mut arg_sum = F::zero();
    let mut w = z;
    for _ in 0..shift {
        arg_sum = arg_sum + w.arg();
        w = w + F::one();
    }
    // Stirling: (w - 1/2) ln w - w + ln(2π)/2 + Σ c_k / w^(2k-1)
    let ln_w = w.ln();
    let half = F::lit(0.5);
    let mut acc = (w - half) * ln_w - w;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING {
        acc = acc + pow * F::lit(c);
        pow = pow * inv2;
    }
    acc.im - arg_sum
}

/// `erf(x)` for `0 <= x`, by the positive-term series
/// `erf x = 2/√π · e^{-x²} · Σ 2ⁿ x^{2n+1} / (1·3···(2n+1))`.
fn erf_series<F: Real>(x: F) -> F {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    loop {
        let denom = F::from_usize_lossy(2 * n + 3);
        term = term * (x2 + x2) / denom;
        sum = sum + term;
        n += 1;
        if term <= sum * F::epsilon() || n > 500 {
            break;
        }
    }
    F::FRAC_2_SQRT_PI() * (-x2).exp() * sum
}

/// `erfc(x)` for `x >= 2`, continued fraction evaluated with the modified
/// Lentz algorithm.
fn erfc_cf<F: Real>(x: F) -> F {
    // erfc x = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = F::min_positive_value() / F::epsilon();
    let half = F::lit(0.5);
    let mut f = x;
    let mut c = x;
    let mut d = F::zero();
    for k in 1..500usize {
        let a = F::from_usize_lossy(k) * half;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - F::one()).abs() <= F::epsilon() {
            break;
        }
    }
    (-x * x).exp() * F::FRAC_2_SQRT_PI() * F::lit(0.5) / f
}

/// Complementary error function.
pub fn erfc<F: Real>(x: F) -> F {
    if x.is_nan() {
        return x;
    }
    let cut = F::lit(2.5);
    if x >= cut {
        erfc_cf(x)
    } else if x >= F::zero() {
        F::one() - erf_series(x)
    } else if -x < cut {
        F::one() + erf_series(-x)
    } else {
        F::lit(2.0) - erfc_cf(-x)
    }
}

/// The probability integral `Φ(y) = (2π)^{-1/2} ∫_{-∞}^{y} e^{-u²/2} du`.
pub fn phi<F: Real>(y: F) -> F {
    if y == F::infinity() {
        return F::one();
    }
    if y == F::neg_infinity() {
        return F::zero();
    }
    F::lit(0.5) * erfc(-y * F::FRAC_1_SQRT_2())
}
