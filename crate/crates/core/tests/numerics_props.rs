use hardwall::numerics::{
    compensated_sum, euler_maclaurin_sum, find_root_monotone, integrate, log_integrate_exp,
};
use hardwall::specfun::{erfcx, gamma_p, gamma_q, log_half_erfc, log_lower_gamma, phi_prime};
use hardwall::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(al in -3.0f64..3.0, be in -3.0f64..3.0, w in 0.5f64..6.0) {
        let f = |x: f64| (w * x).sin();
        let g = |x: f64| (-x * x).exp();
        let lhs = integrate(|x| al * f(x) + be * g(x), 0.0, 2.0, &cfg()).unwrap().value;
        let rhs = al * integrate(f, 0.0, 2.0, &cfg()).unwrap().value
            + be * integrate(g, 0.0, 2.0, &cfg()).unwrap().value;
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn log_integral_shift(c in -500.0f64..500.0, k in 1.0f64..400.0) {
        let g = |r: f64| 3.0 * r.ln() - k * r * r;
        let base = log_integrate_exp(g, 0.0, 1.0, &cfg()).unwrap();
        let shifted = log_integrate_exp(|r| g(r) + c, 0.0, 1.0, &cfg()).unwrap();
        prop_assert!((shifted - base - c).abs() < 1e-10 * (1.0 + c.abs()));
    }

    #[test]
    fn euler_maclaurin_exact_on_cubics(
        c in prop::array::uniform4(-2.0f64..2.0),
        p in -20i64..20,
        len in 0i64..40,
    ) {
        let q = p + len;
        let f = |x: f64| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x;
        let d1 = |x: f64| c[1] + 2.0 * c[2] * x + 3.0 * c[3] * x * x;
        let d3 = |_: f64| 6.0 * c[3];
        let em = euler_maclaurin_sum(f, &[&d1, &d3], p, q, 2, &cfg()).unwrap();
        let direct = compensated_sum((p..=q).map(|i| f(i as f64)));
        prop_assert!((em - direct).abs() < 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn root_is_bracketed_and_accurate(c in -50.0f64..50.0) {
        let f = |x: f64| x * x * x + x - c;
        let r = find_root_monotone(f, -10.0, 10.0, 1e-14).unwrap();
        prop_assert!((-10.0..=10.0).contains(&r));
        prop_assert!(f(r).abs() < 1e-10 * (1.0 + c.abs()));
    }

    #[test]
    fn regularized_gammas_sum_to_one(a in 0.05f64..300.0, z in 0.0f64..400.0) {
        let s = gamma_p(a, z).unwrap() + gamma_q(a, z).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-13);
    }

    #[test]
    fn erfcx_matches_laplace_integral(x in 0.0f64..8.0) {
        // e^{x²} erfc(x) = (2/√π) ∫_0^∞ e^{−t² − 2xt} dt
        let i = integrate(|t| (-t * t - 2.0 * x * t).exp(), 0.0, 40.0, &cfg()).unwrap().value;
        let oracle = 2.0 / std::f64::consts::PI.sqrt() * i;
        prop_assert!((erfcx(x).unwrap() / oracle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_prime_matches_difference(x in -20.0f64..20.0) {
        let h = 1e-5;
        let fd = (log_half_erfc(x + h) - log_half_erfc(x - h)) / (2.0 * h);
        prop_assert!((phi_prime(x) - fd).abs() < 1e-6 * (1.0 + fd.abs()));
    }

    #[test]
    fn lower_gamma_matches_integral(a in 1.0f64..30.0, z in 0.1f64..60.0) {
        let direct = log_integrate_exp(|t: f64| (a - 1.0) * t.ln() - t, 0.0, z, &cfg()).unwrap();
        prop_assert!((log_lower_gamma(a, z).unwrap() - direct).abs() < 1e-11);
    }
}

#[test]
fn doubling_subdivisions_is_stable() {
    let f = |x: f64| (1.0 / (x + 1e-3)).sin();
    let coarse = QuadratureConfig::new(1e-10, 0.0, 4000).unwrap();
    let fine = coarse.with_max_subdivisions(8000).unwrap();
    let a = integrate(f, 0.0, 1.0, &coarse).unwrap();
    let b = integrate(f, 0.0, 1.0, &fine).unwrap();
    assert!((a.value - b.value).abs() < 1e-9);
}
