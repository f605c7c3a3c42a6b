use hardwall::potential::{critical_radius, laplacian, v_tau};
use hardwall::{droplet_geometry, log_uj_gamma_oracle, log_uj_quadrature, QuadratureConfig, RadialPotential};
use proptest::prelude::*;

fn preset() -> impl Strategy<Value = RadialPotential> {
    prop_oneof![
        (0.05f64..2.0).prop_map(|a| RadialPotential::annulus_log(a).unwrap()),
        (1.0f64..4.0).prop_map(|c| RadialPotential::pinned(c).unwrap()),
        (0.2f64..1.5).prop_map(|s| RadialPotential::gauss_scaled(s).unwrap()),
        (-0.5f64..1.5, 0.0f64..1.5).prop_map(|(mu, a)| RadialPotential::mittag(mu, a).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn descriptor_round_trips(pot in preset()) {
        let again = RadialPotential::parse(&pot.descriptor()).unwrap();
        prop_assert_eq!(again.descriptor(), pot.descriptor());
        for r in [0.3, 0.9, 1.7] {
            prop_assert!((again.q(r) - pot.q(r)).abs() < 1e-14 * (1.0 + pot.q(r).abs()));
        }
    }

    #[test]
    fn eta_and_tau0_are_complementary(pot in preset()) {
        let g = droplet_geometry(&pot).unwrap();
        let raw = pot.dq(1.0) / 2.0;
        prop_assert!((g.eta + raw - 1.0).abs() < 1e-12);
        if (0.0..=1.0).contains(&raw) {
            prop_assert!((g.eta + g.tau0 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_radius_solves_and_moves_at_expected_rate(pot in preset(), tau in 0.05f64..0.95) {
        let r = critical_radius(&pot, tau).unwrap();
        prop_assert!((r * pot.dq(r) - 2.0 * tau).abs() < 1e-10);
        // d(r q')/dr = r ΔQ, so dr/dτ = 2 / (r ΔQ(r))
        let h = 1e-5;
        let fd = (critical_radius(&pot, tau + h).unwrap() - critical_radius(&pot, tau - h).unwrap()) / (2.0 * h);
        let expect = 2.0 / (r * laplacian(&pot, r, 0).unwrap());
        prop_assert!((fd - expect).abs() < 1e-5 * (1.0 + expect.abs()), "{} vs {}", fd, expect);
    }

    #[test]
    fn laplacian_derivative_matches_difference(pot in preset(), r in 0.2f64..2.0) {
        let h = 1e-5;
        let fd = (laplacian(&pot, r + h, 0).unwrap() - laplacian(&pot, r - h, 0).unwrap()) / (2.0 * h);
        let d1 = laplacian(&pot, r, 1).unwrap();
        prop_assert!((fd - d1).abs() < 1e-5 * (1.0 + d1.abs()));
    }

    #[test]
    fn v_tau_derivatives_chain(pot in preset(), tau in 0.0f64..1.0, r in 0.3f64..1.8) {
        let h = 1e-4;
        for order in 1..=3 {
            let fd = (v_tau(&pot, tau, r + h, order - 1).unwrap() - v_tau(&pot, tau, r - h, order - 1).unwrap()) / (2.0 * h);
            let exact = v_tau(&pot, tau, r, order).unwrap();
            prop_assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "order {}: {} vs {}", order, fd, exact);
        }
    }

    #[test]
    fn oracle_equivalence(pot in preset(), n in 1usize..150, frac in 0.0f64..1.0) {
        let j = ((n as f64 * frac) as usize).min(n - 1);
        let cfg = QuadratureConfig::default();
        let q = log_uj_quadrature(&pot, n, j, &cfg).unwrap();
        let o = log_uj_gamma_oracle(&pot, n, j).unwrap();
        prop_assert!((q - o).abs() < 1e-9, "{}: {} vs {}", pot.descriptor(), q, o);
    }

    #[test]
    fn offset_scales_every_term(pot in preset(), c in -3.0f64..3.0, n in 1usize..80) {
        let cfg = QuadratureConfig::default();
        let j = n / 2;
        let shifted = pot.clone().with_offset(c);
        let nf = n as f64;
        let dq = log_uj_quadrature(&shifted, n, j, &cfg).unwrap() - log_uj_quadrature(&pot, n, j, &cfg).unwrap();
        let dor = log_uj_gamma_oracle(&shifted, n, j).unwrap() - log_uj_gamma_oracle(&pot, n, j).unwrap();
        prop_assert!((dq + nf * c).abs() < 1e-9 * (1.0 + nf * c.abs()));
        prop_assert!((dor + nf * c).abs() < 1e-9 * (1.0 + nf * c.abs()));
    }
}

#[test]
fn subharmonicity_is_enforced() {
    let bad = RadialPotential::custom("cap", |r: f64| -r * r, |r: f64| -2.0 * r);
    assert!(bad.is_err());
}
