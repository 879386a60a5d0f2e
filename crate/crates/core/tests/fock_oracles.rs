use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qha_core::fock::{
    heat_kernel, heat_kernel_dt, monomial_basis_value, normalized_kernel_coeffs, parity_matrix, translate_operator,
    weyl_matrix,
};
use qha_core::{ComplexPoint, OperatorMatrix, QhaError, QuadratureScheme, TruncationSpec};

fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (ln_fact(n) - ln_fact(k) - ln_fact(n - k)).exp().round()
}

/// `<W_z e_k, e_j>` by expanding `e_k(w - z) k_z(w)` in powers of `w`.
fn weyl_series(z: ComplexPoint, j: usize, k: usize) -> Complex64 {
    let zc = Complex64::new(z.re, z.im);
    let mut coeff = Complex64::new(0.0, 0.0);
    for i in 0..=k.min(j) {
        let from_monomial = binomial(k, i) * (-zc).powu((k - i) as u32);
        let from_kernel = (zc.conj() * PI).powu((j - i) as u32) / ln_fact(j - i).exp();
        coeff += from_monomial * from_kernel;
    }
    let norm_k = (k as f64 * PI.ln() - ln_fact(k)).exp().sqrt();
    let inv_norm_j = (ln_fact(j) - j as f64 * PI.ln()).exp().sqrt();
    coeff * norm_k * inv_norm_j * (-PI * z.norm_sqr() / 2.0).exp()
}

#[test]
fn weyl_matrix_matches_series_expansion() {
    let trunc = TruncationSpec::default();
    for (re, im) in [(0.3, 0.1), (-0.5, 0.4), (0.0, -0.8), (0.7, 0.7)] {
        let z = ComplexPoint::new(re, im).unwrap();
        let w = weyl_matrix(z, &trunc).unwrap();
        for j in 0..10 {
            for k in 0..10 {
                let err = (w.get(j, k) - weyl_series(z, j, k)).norm();
                assert!(err < 1e-11, "z=({re},{im}) entry ({j},{k}) off by {err}");
            }
        }
    }
}

#[test]
fn monomials_are_orthonormal_under_gaussian_measure() {
    // e^{-π|z|^2} dz with z = (x + iy)/√π becomes the Hermite weight e^{-x^2-y^2}/π
    let rule = QuadratureScheme::gauss_hermite_2d(40).unwrap();
    let n = 12;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for ((x, y), w) in rule.tensor() {
        let z = ComplexPoint::new(x / PI.sqrt(), y / PI.sqrt()).unwrap();
        let vals: Vec<Complex64> = (0..n).map(|m| monomial_basis_value(m, z)).collect();
        for j in 0..n {
            for k in 0..n {
                gram[j][k] += vals[k] * vals[j].conj() * (w / PI);
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            assert!((gram[j][k] - target).norm() < 1e-12, "gram[{j}][{k}] = {}", gram[j][k]);
        }
    }
}

#[test]
fn kernel_coefficient_at_one() {
    let z = ComplexPoint::new(1.0, 0.0).unwrap();
    let c = normalized_kernel_coeffs(z, &TruncationSpec::default()).unwrap();
    assert!((c[1].re - (-PI / 2.0).exp() * PI.sqrt()).abs() < 1e-15);
    assert!((c[0].re - (-PI / 2.0).exp()).abs() < 1e-15);
}

#[test]
fn kernel_is_the_reproducing_kernel() {
    // <e_m, k_z> = e_m(z) e^{-π|z|^2/2}, so c_m = conj(e_m(z)) e^{-π|z|^2/2}
    let trunc = TruncationSpec::default();
    let z = ComplexPoint::new(0.4, -0.9).unwrap();
    let c = normalized_kernel_coeffs(z, &trunc).unwrap();
    for (m, cm) in c.iter().enumerate().take(20) {
        let expected = monomial_basis_value(m, z).conj() * (-PI * z.norm_sqr() / 2.0).exp();
        assert!((cm - expected).norm() < 1e-14);
    }
}

#[test]
fn heat_kernel_values() {
    let z = ComplexPoint::new(0.5, 0.5).unwrap();
    assert!((heat_kernel(1.0, z).unwrap() - (-PI * 0.5).exp()).abs() < 1e-15);
    let t = 2.0;
    let expected = (-PI * 0.5 / t).exp() / t;
    assert!((heat_kernel(t, z).unwrap() - expected).abs() < 1e-15);
    assert!(matches!(heat_kernel(0.0, z), Err(QhaError::InvalidArgument(_))));
    let h = 1e-5;
    let fd = (heat_kernel(t + h, z).unwrap() - heat_kernel(t - h, z).unwrap()) / (2.0 * h);
    assert!((heat_kernel_dt(t, z).unwrap() - fd).abs() < 1e-9);
}

#[test]
fn truncation_rejects_heavy_tails_and_bad_shapes() {
    assert!(TruncationSpec::new(48, 24, 2.0).is_ok());
    assert!(TruncationSpec::new(10, 5, 2.0).is_err());
    assert!(TruncationSpec::new(48, 49, 1.0).is_err());
    assert!(TruncationSpec::new(48, 24, -1.0).is_err());
    let trunc = TruncationSpec::default();
    let far = ComplexPoint::new(2.5, 0.0).unwrap();
    assert!(matches!(weyl_matrix(far, &trunc), Err(QhaError::RadiusExceeded { .. })));
    assert!(ComplexPoint::new(f64::NAN, 0.0).is_err());
}

#[test]
fn translating_a_diagonal_operator_at_origin_is_identity_map() {
    let trunc = TruncationSpec::default();
    let d = OperatorMatrix::diagonal(trunc, &(0..48).map(|m| m as f64).collect::<Vec<_>>());
    let moved = translate_operator(ComplexPoint::new(0.0, 0.0).unwrap(), &d).unwrap();
    assert!(moved.inner_max_abs_diff(&d).unwrap() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weyl_is_unitary_on_inner_block_near_origin(r in 0.0..0.5f64, theta in 0.0..6.3f64) {
        let trunc = TruncationSpec::default();
        let w = weyl_matrix(ComplexPoint::polar(r, theta), &trunc).unwrap();
        let gram = w.adjoint().matmul(&w).unwrap();
        let id = OperatorMatrix::identity(trunc);
        prop_assert!(gram.inner_max_abs_diff(&id).unwrap() < 1e-8);
    }

    #[test]
    fn weyl_adjoint_is_reverse_translation(r in 0.0..0.6f64, theta in 0.0..6.3f64) {
        let trunc = TruncationSpec::default();
        let z = ComplexPoint::polar(r, theta);
        let w = weyl_matrix(z, &trunc).unwrap();
        let back = weyl_matrix(ComplexPoint::new(-z.re, -z.im).unwrap(), &trunc).unwrap();
        prop_assert!(w.adjoint().inner_max_abs_diff(&back).unwrap() < 1e-13);
    }

    #[test]
    fn parity_flips_weyl(r in 0.0..2.0f64, theta in 0.0..6.3f64) {
        let trunc = TruncationSpec::default();
        let z = ComplexPoint::polar(r, theta);
        let u = parity_matrix(&trunc);
        let lhs = u.matmul(&weyl_matrix(z, &trunc).unwrap()).unwrap().matmul(&u).unwrap();
        let rhs = weyl_matrix(ComplexPoint::new(-z.re, -z.im).unwrap(), &trunc).unwrap();
        prop_assert!(lhs.inner_max_abs_diff(&rhs).unwrap() < 1e-13);
    }

    #[test]
    fn kernel_mass_is_one_up_to_tail(r in 0.0..2.0f64, theta in 0.0..6.3f64) {
        let trunc = TruncationSpec::default();
        let c = normalized_kernel_coeffs(ComplexPoint::polar(r, theta), &trunc).unwrap();
        let mass: f64 = c.iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((mass - 1.0).abs() <= trunc.tail_bound(r) + 1e-13);
    }
}
