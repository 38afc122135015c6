use proptest::prelude::*;
use zetaline::{em_zeta, phi, theta, z_function, zeta_half, EvalConfig};

const EPS: f64 = f64::EPSILON;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modulus_identity(t in 0.0f64..5000.0) {
        let s = z_function(t, &EvalConfig::default()).unwrap();
        let modulus = s.zeta_re.hypot(s.zeta_im);
        prop_assert!((modulus - s.z.abs()).abs() <= 8.0 * EPS * (1.0 + s.z.abs()));
    }

    #[test]
    fn z_even_theta_odd(t in 0.0f64..5000.0) {
        let cfg = EvalConfig::default();
        let (p, m) = (zeta_half(t, &cfg).unwrap(), zeta_half(-t, &cfg).unwrap());
        prop_assert!((p.z - m.z).abs() <= 4.0 * EPS * (1.0 + p.z.abs()));
        prop_assert!((theta(t) + theta(-t)).abs() <= 4.0 * EPS * (1.0 + theta(t).abs()));
        prop_assert!((p.zeta_im + m.zeta_im).abs() <= 4.0 * EPS * (1.0 + p.z.abs()));
    }

    #[test]
    fn bound_never_grows_with_more_corrections(t in 260.0f64..1e6) {
        let mut last = f64::INFINITY;
        for r in 0..=4 {
            let cfg = EvalConfig { rs_corrections: r, ..EvalConfig::default() };
            let b = z_function(t, &cfg).unwrap().err_bound;
            prop_assert!(b <= last, "r = {r}: {b} > {last}");
            last = b;
        }
    }

    #[test]
    fn riemann_siegel_agrees_with_euler_maclaurin(t in 260.0f64..3000.0) {
        let rs = z_function(t, &EvalConfig::default()).unwrap();
        let terms = (t / 2.0) as usize + 50;
        let em = em_zeta(0.5, t, terms).unwrap();
        let diff = (rs.zeta_re - em.value.re).hypot(rs.zeta_im - em.value.im);
        prop_assert!(diff <= rs.err_bound + em.err_bound, "diff {diff:e}, bounds {:e} + {:e}", rs.err_bound, em.err_bound);
    }
}

/// `Φ(y)` from composite Simpson on the density, integrated from 0.
fn phi_oracle(y: f64) -> f64 {
    let n = 20_000;
    let h = y / n as f64;
    let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let inner: f64 = (1..n)
        .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h))
        .sum();
    0.5 + (f(0.0) + inner + f(y)) * h / 3.0
}

#[test]
fn phi_matches_quadrature_oracle() {
    for i in 0..20 {
        let y = -6.0 + 12.0 * i as f64 / 19.0;
        let (got, want) = (phi(y), phi_oracle(y));
        assert!((got - want).abs() < 1e-10, "y = {y}: {got} vs {want}");
    }
}

#[test]
fn default_bound_is_tight_above_thirty() {
    let cfg = EvalConfig::default();
    for i in 0..200 {
        let t = 30.0 + 5.0 * i as f64;
        assert!(z_function(t, &cfg).unwrap().err_bound <= 1e-6, "t = {t}");
    }
}
