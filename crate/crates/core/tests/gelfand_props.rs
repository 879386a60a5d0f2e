use proptest::prelude::*;
use qha_core::gelfand::{
    approx_in_ddelta, divided_difference, extend_plus, extend_real, modulus_of_continuity, sample_at_sqrt,
    sample_expr_at_sqrt, shift_left, shift_right, sqrt_metric, ExtendedFunction, Extension, SequenceFunction,
};
use qha_core::radial::{d_delta_defect, toeplitz_eigenvalues};
use qha_core::{parse_symbol, QhaError, QuadratureScheme, RadialSymbol};

fn sin_sqrt(len: usize) -> SequenceFunction {
    SequenceFunction::from_fn(len, |m| (m as f64).sqrt().sin()).unwrap()
}

#[test]
fn metric_examples() {
    assert_eq!(sqrt_metric(4, 4), 0.0);
    assert_eq!(sqrt_metric(0, 1), 1.0);
    assert_eq!(sqrt_metric(100, 121), 1.0);
    assert_eq!(sqrt_metric(121, 100), 1.0);
}

#[test]
fn modulus_examples() {
    let constant = SequenceFunction::from_fn(50, |_| 2.0).unwrap();
    assert_eq!(modulus_of_continuity(&constant, 0.3).unwrap(), 0.0);
    assert!(modulus_of_continuity(&sin_sqrt(400), 0.1).unwrap() <= 0.1 + 1e-12);
    let rough = SequenceFunction::from_fn(400, |m| (m as f64).sin()).unwrap();
    assert!(modulus_of_continuity(&rough, 0.1).unwrap() > 0.5);
}

#[test]
fn extension_examples() {
    let two = SequenceFunction::new(vec![0.0, 1.0]).unwrap();
    assert!((extend_plus(&two, 0.5).unwrap() - 0.5_f64.sqrt()).abs() < 1e-15);
    let sigma = sin_sqrt(400);
    for m in [0usize, 1, 17, 398] {
        assert_eq!(extend_plus(&sigma, m as f64).unwrap(), sigma.values()[m]);
        assert_eq!(extend_real(&sigma, (m as f64).sqrt()).unwrap(), sigma.values()[m]);
    }
    assert!(matches!(extend_plus(&sigma, 399.5), Err(QhaError::OutOfRange { .. })));
    assert!(matches!(extend_plus(&sigma, -0.1), Err(QhaError::OutOfRange { .. })));
    // f_σ ≈ sin(|x|): linear interpolation in √x of sin has error ≤ h²/8 per cell
    for i in 0..=1900 {
        let x = i as f64 / 100.0;
        let cell = x * x;
        let m = cell.floor();
        let h = (m + 1.0).sqrt() - m.sqrt();
        assert!((extend_real(&sigma, x).unwrap() - x.sin()).abs() <= h * h / 8.0 + 1e-12, "x={x}");
        assert_eq!(extend_real(&sigma, -x).unwrap(), extend_real(&sigma, x).unwrap());
    }
    let f = ExtendedFunction::new(sigma.clone(), Extension::RealLine);
    assert_eq!(f.eval(2.0).unwrap(), sigma.values()[4]);
}

#[test]
fn shift_examples() {
    let sigma = sin_sqrt(20);
    assert_eq!(shift_left(&sigma, 0).unwrap(), sigma);
    assert_eq!(shift_left(&shift_right(&sigma, 2), 2).unwrap(), sigma);
    assert_eq!(shift_right(&sigma, 3).values()[..3], [sigma.values()[0]; 3]);
    assert!(matches!(shift_left(&sigma, 19), Err(QhaError::ShiftTooLarge { .. })));
}

#[test]
fn dimension_two_eigenvalues_are_a_left_shift() {
    let q = QuadratureScheme::gauss_laguerre(96).unwrap();
    for text in ["1", "s^2", "exp(-s^2)", "ind(0, 1)"] {
        let a = RadialSymbol::parse(text, true).unwrap();
        let one = SequenceFunction::new(toeplitz_eigenvalues(&a, 1, 31, &q).unwrap().into_values()).unwrap();
        let two = toeplitz_eigenvalues(&a, 2, 30, &q).unwrap();
        let shifted = shift_left(&one, 1).unwrap();
        for (x, y) in shifted.values().iter().zip(two.values()) {
            assert!((x - y).abs() < 1e-8, "{text}");
        }
    }
    let s2 = RadialSymbol::parse("s^2", true).unwrap();
    let two = toeplitz_eigenvalues(&s2, 2, 10, &q).unwrap();
    for (m, v) in two.values().iter().enumerate() {
        assert!((v - (m + 2) as f64 / std::f64::consts::PI).abs() < 1e-11);
    }
}

#[test]
fn sampling_examples() {
    let constant = sample_at_sqrt(|_| 3.0, 50).unwrap();
    assert_eq!(d_delta_defect(&constant.to_eigen_sequence()).unwrap(), 0.0);
    let square = sample_expr_at_sqrt(&parse_symbol("s^2").unwrap(), 50).unwrap();
    assert!(square.values().iter().enumerate().all(|(n, v)| (v - n as f64).abs() < 1e-12));
    assert!(d_delta_defect(&square.to_eigen_sequence()).unwrap() < 1e-10);
    let sine = sample_at_sqrt(f64::sin, 400).unwrap();
    assert!(d_delta_defect(&sine.to_eigen_sequence()).unwrap() < 0.5 + 0.5);
}

#[test]
fn divided_difference_is_second_divided_difference_of_f() {
    // ½(√(n+1)+√(n−1))(√(n+1)+√n)Δ²σ_{n−1} + Δσ_{n−1} = f[√(n−1), √n, √(n+1)]
    let f = |x: f64| (0.7 * x).cos() + 0.1 * x * x * x;
    let sigma = sample_at_sqrt(f, 200).unwrap();
    for n in 1..199 {
        let (a, b, c) = (((n - 1) as f64).sqrt(), (n as f64).sqrt(), ((n + 1) as f64).sqrt());
        let oracle = ((f(c) - f(b)) / (c - b) - (f(b) - f(a)) / (b - a)) / (c - a);
        let q = divided_difference(&sigma, n).unwrap();
        assert!((q - oracle).abs() < 1e-8 * (1.0 + oracle.abs()), "n={n}: {q} vs {oracle}");
    }
    assert!(divided_difference(&sigma, 0).is_err());
    assert!(divided_difference(&sigma, 199).is_err());
}

#[test]
fn density_examples() {
    let constant = SequenceFunction::from_fn(200, |_| 0.75).unwrap();
    let approx = approx_in_ddelta(&constant, 0.04).unwrap();
    assert!(approx.window_error(&constant) < 1e-10);
    let sigma = sin_sqrt(400);
    let approx = approx_in_ddelta(&sigma, 0.04).unwrap();
    assert!(approx.window_error(&sigma) < 0.05);
    assert!(approx.window_error(&sigma) <= approx.error_bound);
    assert!(d_delta_defect(&approx.nu.to_eigen_sequence()).unwrap() < 2.0);
    let errors: Vec<f64> =
        [0.16, 0.04, 0.01].iter().map(|&s| approx_in_ddelta(&sigma, s).unwrap().window_error(&sigma)).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(approx_in_ddelta(&sin_sqrt(5), 4.0).is_err());
}

fn values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_preserves_sup_norm(v in values(40)) {
        let sigma = SequenceFunction::new(v).unwrap();
        let mut sup = 0.0_f64;
        for i in 0..=390 {
            sup = sup.max(extend_plus(&sigma, i as f64 / 10.0).unwrap().abs());
        }
        prop_assert!((sup - sigma.sup_norm()).abs() < 1e-12);
    }

    #[test]
    fn extension_stays_within_cell_bounds(v in values(30), x in 0.0..29.0f64) {
        let sigma = SequenceFunction::new(v).unwrap();
        let m = x.floor() as usize;
        let (a, b) = (sigma.values()[m], sigma.values()[m + 1]);
        let y = extend_plus(&sigma, x).unwrap();
        prop_assert!(y >= a.min(b) - 1e-15 && y <= a.max(b) + 1e-15);
    }

    #[test]
    fn shifts_compose_and_contract(v in values(25), k in 0usize..10) {
        let sigma = SequenceFunction::new(v).unwrap();
        prop_assert_eq!(shift_left(&shift_right(&sigma, k), k).unwrap(), sigma.clone());
        prop_assert!(shift_left(&sigma, k).unwrap().sup_norm() <= sigma.sup_norm());
        prop_assert!(shift_right(&sigma, k).sup_norm() == sigma.sup_norm());
    }

    #[test]
    fn modulus_is_monotone_in_delta(v in values(60), d in 0.01..1.0f64) {
        let sigma = SequenceFunction::new(v).unwrap();
        let small = modulus_of_continuity(&sigma, d).unwrap();
        let large = modulus_of_continuity(&sigma, 2.0 * d).unwrap();
        prop_assert!(small <= large);
    }

    #[test]
    fn euclidean_modulus_of_extension_is_controlled(v in values(50), d in 0.05..0.5f64) {
        // |f_σ(x) − f_σ(y)| over |x − y| ≤ d is at most ω_σ(d + 2w), w the widest cell met
        let sigma = SequenceFunction::new(v).unwrap();
        let top = 49.0_f64.sqrt() - 1e-9;
        let grid: Vec<f64> = (0..=200).map(|i| top * i as f64 / 200.0).collect();
        let mut lhs = 0.0_f64;
        for &x in &grid {
            for &y in grid.iter().filter(|&&y| y >= x && y - x <= d) {
                lhs = lhs.max((extend_real(&sigma, x).unwrap() - extend_real(&sigma, y).unwrap()).abs());
            }
        }
        prop_assert!(lhs <= modulus_of_continuity(&sigma, d + 2.0).unwrap() + 1e-12);
    }

    #[test]
    fn divided_difference_obeys_mean_value_bound(n in 1usize..300) {
        let sigma = sample_at_sqrt(f64::sin, 302).unwrap();
        let q = divided_difference(&sigma, n).unwrap();
        let (lo, hi) = (((n - 1) as f64).sqrt(), ((n + 1) as f64).sqrt());
        let samples: Vec<f64> = (0..=200).map(|i| -0.5 * (lo + (hi - lo) * i as f64 / 200.0).sin()).collect();
        let min = samples.iter().cloned().fold(f64::MAX, f64::min);
        let max = samples.iter().cloned().fold(f64::MIN, f64::max);
        let slack = 0.5 * (hi - lo) / 200.0 + 1e-10;
        prop_assert!(q >= min - slack && q <= max + slack);
    }
}
