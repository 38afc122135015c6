//! Adaptive Gauss-Kronrod integration and a fixed Gauss-Legendre rule.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<F> {
    pub value: F,
    /// Sum of the Gauss/Kronrod differences over the accepted panels.
    pub error: F,
}

fn gk15<F: Real, G: FnMut(F) -> F>(f: &mut G, a: F, b: F) -> (F, F) {
    let half = F::lit(0.5);
    let center = (a + b) * half;
    let radius = (b - a) * half;
    let fc = f(center);
    let mut kronrod = fc * F::lit(WGK[7]);
    let mut gauss = fc * F::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * F::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * F::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * F::lit(WG[j / 2]);
        }
    }
    (kronrod * radius, ((kronrod - gauss) * radius).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by recursive
/// bisection of Gauss-Kronrod 7/15 panels.
pub fn integrate<F, G>(mut f: G, a: F, b: F, tol: F) -> Integral<F>
where
    F: Real,
    G: FnMut(F) -> F,
{
    if a == b {
        return Integral {
            value: F::zero(),
            error: F::zero(),
        };
    }
    let mut value = F::zero();
    let mut error = F::zero();
    // (lo, hi, tolerance, depth)
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, local_tol, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        if e <= local_tol || depth >= 40 {
            value = value + v;
            error = error + e;
        } else {
            let mid = (lo + hi) * F::lit(0.5);
            let half_tol = local_tol * F::lit(0.5);
            stack.push((mid, hi, half_tol, depth + 1));
            stack.push((lo, mid, half_tol, depth + 1));
        }
    }
    Integral { value, error }
}

const GL5_X: [f64; 3] = [0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];
const GL5_W: [f64; 3] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

/// Five-point Gauss-Legendre rule on `[a, b]`; exact for polynomials of
/// degree nine.
pub fn gauss_legendre5<F, G>(mut f: G, a: F, b: F) -> F
where
    F: Real,
    G: FnMut(F) -> F,
{
    let half = F::lit(0.5);
    let c = (a + b) * half;
    let r = (b - a) * half;
    let mut acc = f(c) * F::lit(GL5_W[0]);
    for j in 1..3 {
        let dx = r * F::lit(GL5_X[j]);
        acc = acc + (f(c - dx) + f(c + dx)) * F::lit(GL5_W[j]);
    }
    acc * r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_on_polynomials() {
        let r = integrate(|x: f64| x.powi(20) - 3.0 * x.powi(7), -1.0, 2.0, 1e-13);
        let exact = (2f64.powi(21) + 1.0) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((r.value - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((r.value - exact).abs() < 1e-8, "{} vs {}", r.value, exact);
    }

    #[test]
    fn gauss5_degree_nine() {
        let v = gauss_legendre5(|x: f64| x.powi(9) + x.powi(8), 0.0, 1.0);
        assert!((v - (0.1 + 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x: f64| x, 3.0, 3.0, 1e-12).value, 0.0);
    }
}
