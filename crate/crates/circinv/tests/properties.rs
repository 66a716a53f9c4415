use circinv::asymptotics::{kernel_g, predict_first_column, predict_first_column_via_baseline, ColumnBaseline};
use circinv::coefficients::{beta_theta0_series, beta_tilde, gamma_fn};
use circinv::inversion::{HankelQuadrature, InversionOperator};
use circinv::symbol::{outer_factorize, symbol_fourier, FourierMethod, GegenbauerSymbol, RationalRegularPart};
use circinv::toeplitz::{build_system, dense_inverse, gs_entry, predictor, verify_polpred, DENSE_CAP};
use circinv::C64;
use proptest::prelude::*;

fn symbol_strategy() -> impl Strategy<Value = GegenbauerSymbol> {
    (-0.45f64..0.45, 0.3f64..2.8, prop::option::of(-0.6f64..0.6)).prop_map(|(a, t, b)| {
        let reg = match b {
            Some(b) => RationalRegularPart::new(&[1.0, b], &[1.0]).unwrap(),
            None => RationalRegularPart::one(),
        };
        GegenbauerSymbol::new(a, t, reg).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn fourier_methods_agree(sym in symbol_strategy()) {
        let a = symbol_fourier(&sym, 32, FourierMethod::Analytic).unwrap();
        let q = symbol_fourier(&sym, 32, FourierMethod::Quadrature).unwrap();
        prop_assert!(a.max_diff(&q) < 1e-8);
    }

    #[test]
    fn outer_factor_reproduces_modulus(b in -0.9f64..0.9, d in -0.5f64..0.5, theta in 0.0f64..6.28) {
        let reg = RationalRegularPart::new(&[1.0, b], &[1.0, d]).unwrap();
        let outer = outer_factorize(&reg, 64).unwrap();
        let v = outer.eval(C64::from_polar(1.0, theta)).norm_sqr();
        prop_assert!((v / reg.eval(theta) - 1.0).abs() < 1e-9);
        prop_assert!(outer.at_zero() > 0.0);
    }

    #[test]
    fn solver_paths_agree(sym in symbol_strategy(), n in 4usize..40, pairs in prop::collection::vec((0usize..40, 0usize..40), 10)) {
        let sys = build_system(&sym, n).unwrap();
        let inv = dense_inverse(&sys, DENSE_CAP).unwrap();
        let col = sys.first_column_inverse().unwrap();
        for k in 0..=n {
            prop_assert!((col[k] - inv[(k, 0)]).norm() <= 1e-8 * inv[(0, 0)].norm());
        }
        let pred = predictor(&sys).unwrap();
        for (k, l) in pairs {
            let (k, l) = (k % (n + 1), l % (n + 1));
            prop_assert!((gs_entry(&pred, k, l).unwrap() - inv[(k, l)]).norm() < 1e-8);
            prop_assert!((inv[(k, l)] - inv[(n - l, n - k)]).norm() < 1e-10);
            prop_assert!((inv[(k, l)] - inv[(n - k, n - l)].conj()).norm() < 1e-10);
        }
        prop_assert!(verify_polpred(&pred, &sys).unwrap() < 1e-7);
    }

    #[test]
    fn series_inversion_is_hermitian(sym in symbol_strategy(), k in 0usize..9, l in 0usize..9) {
        let nodes = if sym.alpha.abs() > 0.3 { 512 } else { 256 };
        let op = InversionOperator::new(&sym, 8, HankelQuadrature::new(nodes, 1e-12)).unwrap();
        let a = op.entry(k, l).unwrap();
        let b = op.entry(l, k).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-10);
        let inv = dense_inverse(&build_system(&sym, 8).unwrap(), DENSE_CAP).unwrap();
        prop_assert!((a - inv[(k, l)]).norm() < 1e-6);
    }

    #[test]
    fn kernel_is_symmetric(a in 0.05f64..0.5, x in 0.05f64..0.95, y in 0.05f64..0.95) {
        prop_assume!((x - y).abs() > 1e-3);
        let u = kernel_g(a, x, y).unwrap();
        let v = kernel_g(a, y, x).unwrap();
        prop_assert!((u - v).abs() <= 1e-10 * u.abs());
        prop_assert!(u > 0.0);
    }

    #[test]
    fn binomial_recurrence_matches_gamma_ratio(a in -0.49f64..0.49, k in 0usize..50) {
        prop_assume!(a.abs() > 1e-3);
        let direct = gamma_fn(k as f64 + a) / (gamma_fn(a) * gamma_fn(k as f64 + 1.0));
        prop_assert!((beta_tilde(a, k) - direct).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn reflected_angle_flips_parity(a in -0.45f64..0.45, t in 0.1f64..3.0) {
        let b1 = beta_theta0_series(a, t, 30);
        let b2 = beta_theta0_series(a, std::f64::consts::PI - t, 30);
        for k in 0..=30 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((b2[k] - b1[k].conj() * sign).norm() < 1e-13);
        }
    }

    #[test]
    fn formula_baseline_is_the_closed_form(sym in symbol_strategy(), x in 0.05f64..0.95) {
        prop_assume!(sym.alpha.abs() > 1e-3);
        let n = 1000;
        let k = (x * n as f64) as usize;
        let a = predict_first_column(&sym, k, n).unwrap();
        let b = predict_first_column_via_baseline(&sym, k, n, &ColumnBaseline::Formula).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
    }
}
