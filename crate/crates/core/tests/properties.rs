use proptest::prelude::*;
use univalence::criteria::{eval_theorem2, eval_theorem3, sup_disk, CriterionParams, GridConfig};
use univalence::integral_op::{f_beta_point, f_beta_series, IntegralOperatorInput};
use univalence::operators::{ruscheweyh, salagean, RuscheweyhOrder, SalageanOrder};
use univalence::{AnalyticFunction, Complex64, PowerSeries};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn coeff(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

/// Normalized polynomial `z + a_2 z^2 + ... + a_d z^d`.
fn normalized(max_degree: usize, bound: f64) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(coeff(bound), 0..max_degree).prop_map(|tail| {
        let mut coeffs = vec![c(0.0, 0.0), c(1.0, 0.0)];
        coeffs.extend(tail);
        PowerSeries::new(coeffs)
    })
}

fn max_diff(a: &PowerSeries, b: &PowerSeries) -> f64 {
    let n = a.order().max(b.order());
    (0..=n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ruscheweyh_recurrence(f in normalized(31, 2.0), n in 0u32..8) {
        let rn = ruscheweyh(&f, RuscheweyhOrder::new(n as f64).unwrap()).unwrap();
        let rn1 = ruscheweyh(&f, RuscheweyhOrder::new(n as f64 + 1.0).unwrap()).unwrap();
        let lhs = rn.z_differentiate();
        let rhs = rn1.scale(c(n as f64 + 1.0, 0.0));
        let rhs = PowerSeries::from_fn(rhs.order(), |k| rhs.coeff(k) - rn.coeff(k) * n as f64);
        let scale = (0..=lhs.order()).map(|k| lhs.coeff(k).norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-10 * scale);
    }

    #[test]
    fn salagean_step_is_z_derivative(f in normalized(31, 2.0), n in 0u32..8) {
        let sn = salagean(&f, SalageanOrder(n)).unwrap();
        let sn1 = salagean(&f, SalageanOrder(n + 1)).unwrap();
        prop_assert_eq!(sn1, sn.z_differentiate());
    }

    #[test]
    fn operators_preserve_normalization(f in normalized(16, 2.0), n in 0u32..6, lambda in 0.0f64..4.0) {
        for s in [
            ruscheweyh(&f, RuscheweyhOrder::new(n as f64).unwrap()).unwrap(),
            ruscheweyh(&f, RuscheweyhOrder::new(lambda).unwrap()).unwrap(),
            salagean(&f, SalageanOrder(n)).unwrap(),
        ] {
            prop_assert!(s.is_normalized());
        }
    }

    #[test]
    fn unit_beta_returns_f(f in normalized(12, 0.5), g in normalized(12, 0.5)) {
        let f = PowerSeries::padded(f.coeffs(), 16);
        let g = PowerSeries::padded(g.coeffs(), 16);
        let input = IntegralOperatorInput::new(f.clone(), g, c(1.0, 0.0));
        prop_assert!(max_diff(&f_beta_series(&input).unwrap(), &f) <= 1e-12);
    }

    #[test]
    fn f_beta_routes_agree(
        a2 in coeff(0.15),
        b2 in coeff(0.15),
        beta in (0.8f64..2.5, -0.4f64..0.4),
        z in (0.0f64..0.7, 0.0f64..std::f64::consts::TAU),
    ) {
        let f = PowerSeries::padded(&[c(0.0, 0.0), c(1.0, 0.0), a2], 48);
        let g = PowerSeries::padded(&[c(0.0, 0.0), c(1.0, 0.0), b2], 48);
        let input = IntegralOperatorInput::new(f, g, c(beta.0, beta.1));
        let z = Complex64::from_polar(z.0, z.1);
        let series = f_beta_series(&input).unwrap().evaluate(z).unwrap();
        prop_assert!((series - f_beta_point(&input, z).unwrap()).norm() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sup_is_monotone_under_doubling(a in coeff(0.4), b in coeff(0.2)) {
        let expr = |z: Complex64| Ok(((1.0 - z.norm_sqr()) * (z * (2.0 * a + 6.0 * b * z) / (1.0 + 2.0 * a * z + 3.0 * b * z * z))).norm());
        let grid = GridConfig { n_radii: 16, n_angles: 32, ..Default::default() };
        let coarse = sup_disk(expr, &grid).unwrap();
        let fine = sup_disk(expr, &grid.doubled()).unwrap();
        let raw = |s: &[Option<f64>]| s.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(raw(&fine.samples) >= raw(&coarse.samples));
        prop_assert!(coarse.sup_estimate >= raw(&coarse.samples));
        prop_assert!(fine.sup_estimate >= raw(&fine.samples));
    }

    #[test]
    fn t3_implies_t2(
        a in coeff(0.3),
        b in coeff(0.1),
        beta in (0.9f64..1.6, -0.2f64..0.2),
        cc in coeff(0.3),
        m in 0.8f64..2.0,
    ) {
        let f = AnalyticFunction::from(PowerSeries::padded(&[c(0.0, 0.0), c(1.0, 0.0), a, b], 8));
        let params = CriterionParams { beta: c(beta.0, beta.1), c: cc, m, ..Default::default() };
        let grid = GridConfig { n_radii: 16, n_angles: 32, ..Default::default() };
        let t3 = eval_theorem3(&f, &f, &f, &params, &grid).unwrap();
        if t3.satisfied && t3.worst_margin() > 0.01 {
            let t2 = eval_theorem2(&f, &f, &f, &params, &grid).unwrap();
            prop_assert!(t2.satisfied, "{t2:#?}");
        }
    }
}
