//! Identity suites producing residual records.
//!
//! Every check is evaluated on the inner block of the configured truncation.
//! Identities involving infinite-rank operators (`I`, `W_z^* W_z`) are only
//! sampled at small `|z|`, where column leakage past `dim` stays negligible.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{QhaError, Result};
use crate::fock::{normalized_kernel_coeffs, parity_matrix, translate_operator, weyl_matrix, ComplexPoint, TruncationSpec};
use crate::gelfand::{
    approx_in_ddelta, divided_difference, extend_plus, modulus_of_continuity, sample_at_sqrt, shift_left,
    shift_right, SequenceFunction,
};
use crate::lab::{
    berezin, conv_fun_op_with_order, conv_op_op, derivative_in_t, heat_quotient, laplacian_estimate,
    laplacian_of_berezin, random_hermitian, rank_one_phi, toeplitz_matrix, ConvolutionMode, SymbolFunction,
    LAPLACIAN_STEP,
};
use crate::matrix::OperatorMatrix;
use crate::quadrature::QuadratureScheme;
use crate::radial::{
    berezin_radial, d_delta_defect, heat_kernel_matrix, heat_radial, laplacian_sequence, toeplitz_eigenvalues,
    window_looks_bounded, EigenSequence,
};
use crate::symbol::{Expr, RadialSymbol};

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Residual {
    /// `params` must be a JSON object; anything else is stored under `"value"`.
    pub fn new(identity: impl Into<String>, params: Value, residual: f64, tolerance: f64) -> Self {
        let params = match params {
            Value::Object(map) => map.into_iter().collect(),
            Value::Null => BTreeMap::new(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        Self { identity: identity.into(), params, residual, tolerance, pass: residual.is_finite() && residual <= tolerance }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Laplacian,
    Heat,
    Gelfand,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Identities, Suite::Laplacian, Suite::Heat, Suite::Gelfand];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Laplacian => "laplacian",
            Suite::Heat => "heat",
            Suite::Gelfand => "gelfand",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = QhaError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| QhaError::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Inputs shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub trunc: TruncationSpec,
    /// Gauss–Laguerre order for radial integrals.
    pub quad_order: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { trunc: TruncationSpec::default(), quad_order: 96, seed: 7 }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Residual>> {
    let mut out = Vec::new();
    match suite {
        Suite::Identities => identities(cfg, &mut out)?,
        Suite::Laplacian => laplacian(cfg, &mut out)?,
        Suite::Heat => heat(cfg, &mut out)?,
        Suite::Gelfand => gelfand(cfg, &mut out)?,
    }
    Ok(out)
}

/// Deterministic sample points with `|z| <= r_max`, on a spiral.
pub fn sample_points(count: usize, r_max: f64) -> Vec<ComplexPoint> {
    (0..count)
        .map(|i| {
            let r = r_max * ((i + 1) as f64 / count as f64).sqrt();
            ComplexPoint::polar(r, 2.399_963_229_728_653 * i as f64)
        })
        .collect()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()))
}

fn inner(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    m.view((0, 0), (k, k)).into_owned()
}

fn conv(psi: &SymbolFunction, s: &OperatorMatrix, cfg: &VerifyConfig) -> Result<OperatorMatrix> {
    conv_fun_op_with_order(psi, s, ConvolutionMode::Integrable, cfg.quad_order)
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn identities(cfg: &VerifyConfig, out: &mut Vec<Residual>) -> Result<()> {
    let trunc = cfg.trunc;
    let k = trunc.inner_dim;
    let r_max = trunc.radius.min(1.5);
    let points = sample_points(10, r_max);

    let mut worst = 0.0_f64;
    for z in sample_points(20, trunc.radius) {
        let c = normalized_kernel_coeffs(z, &trunc)?;
        let mass: f64 = c.iter().map(|v| v.norm_sqr()).sum();
        worst = worst.max((mass - 1.0).abs());
    }
    out.push(Residual::new(
        "kernel_normalization",
        json!({"radius": trunc.radius}),
        worst,
        trunc.tail_bound(trunc.radius) + 1e-13,
    ));

    let t_one = toeplitz_matrix(&SymbolFunction::new(Expr::Num(1.0))?, &trunc)?;
    let gram = t_one.entries() - DMatrix::<Complex64>::identity(trunc.dim, trunc.dim);
    out.push(Residual::new("basis_orthonormality", json!({"dim": trunc.dim}), max_abs(&gram), 1e-10));

    let mut worst = 0.0_f64;
    for &z in &points {
        let w = weyl_matrix(z, &trunc)?;
        let c = normalized_kernel_coeffs(z, &trunc)?;
        for (j, cj) in c.iter().enumerate() {
            worst = worst.max((w.get(j, 0) - cj).norm());
        }
    }
    out.push(Residual::new("weyl_moves_vacuum_to_kernel", json!({"points": points.len()}), worst, 1e-12));

    for r in [0.25_f64, 0.5] {
        let z = ComplexPoint::polar(r.min(trunc.radius), 0.7);
        let w = weyl_matrix(z, &trunc)?;
        let gram = w.adjoint().matmul(&w)?;
        let defect = inner(&(gram.entries() - DMatrix::<Complex64>::identity(trunc.dim, trunc.dim)), k);
        out.push(Residual::new("weyl_unitarity", json!({"abs_z": z.norm()}), max_abs(&defect), 1e-8));
    }

    let (z, w) = (ComplexPoint::polar(0.3, 0.4), ComplexPoint::polar(0.25, -1.1));
    let sum = ComplexPoint::new(z.re + w.re, z.im + w.im)?;
    let product = weyl_matrix(z, &trunc)?.matmul(&weyl_matrix(w, &trunc)?)?;
    let direct = weyl_matrix(sum, &trunc)?;
    let moduli = DMatrix::from_fn(k, k, |i, j| Complex64::new(product.get(i, j).norm() - direct.get(i, j).norm(), 0.0));
    out.push(Residual::new("weyl_composition_moduli", json!({"z": [z.re, z.im], "w": [w.re, w.im]}), max_abs(&moduli), 1e-8));

    let u = parity_matrix(&trunc);
    let u2 = u.matmul(&u)?;
    let mut worst = max_abs(&(u2.entries() - DMatrix::<Complex64>::identity(trunc.dim, trunc.dim)));
    for &z in &points {
        let flipped = u.matmul(&weyl_matrix(z, &trunc)?)?.matmul(&u)?;
        let minus = weyl_matrix(ComplexPoint::new(-z.re, -z.im)?, &trunc)?;
        worst = worst.max(max_abs(&(flipped.entries() - minus.entries())));
    }
    out.push(Residual::new("parity_conjugates_weyl", json!({"points": points.len()}), worst, 1e-13));

    let phi = rank_one_phi(&trunc);
    let projection = max_abs(&(phi.matmul(&phi)?.entries() - phi.entries())) + (phi.trace().re - 1.0).abs();
    out.push(Residual::new("phi_unit_trace_projection", json!({}), projection, 1e-15));

    let mut worst = 0.0_f64;
    for &z in &points {
        let moved = translate_operator(z, &phi)?;
        let c = normalized_kernel_coeffs(z, &trunc)?;
        let outer = DMatrix::from_fn(trunc.dim, trunc.dim, |i, j| c[i] * c[j].conj());
        worst = worst.max(max_abs(&(moved.entries() - outer)));
    }
    out.push(Residual::new("translated_phi_is_kernel_projection", json!({"points": points.len()}), worst, 1e-12));

    let mut worst_phi = 0.0_f64;
    let mut worst_em = 0.0_f64;
    let mut worst_id = 0.0_f64;
    let identity = OperatorMatrix::identity(trunc);
    for &z in &points {
        let x = PI * z.norm_sqr();
        worst_phi = worst_phi.max((berezin(&phi, z)?.re - (-x).exp()).abs());
        for m in [1, 3, 10] {
            let em = OperatorMatrix::projection(trunc, m.min(trunc.dim - 1))?;
            let m = m.min(trunc.dim - 1);
            let exact = (m as f64 * x.ln() - x - crate::special::ln_factorial(m)).exp();
            worst_em = worst_em.max((berezin(&em, z)?.re - exact).abs());
        }
        worst_id = worst_id.max((berezin(&identity, z)?.re - 1.0).abs());
    }
    out.push(Residual::new("berezin_of_phi", json!({"points": points.len()}), worst_phi, 1e-14));
    out.push(Residual::new("berezin_of_basis_projection", json!({"m": [1, 3, 10]}), worst_em, 1e-14));
    out.push(Residual::new("berezin_of_identity", json!({"points": points.len()}), worst_id, trunc.tail_bound(r_max) + 1e-13));

    let s2 = toeplitz_matrix(&SymbolFunction::parse("s^2", true)?, &trunc)?;
    let mut worst = 0.0_f64;
    for &z in points.iter().filter(|z| z.norm() <= 1.0) {
        worst = worst.max((berezin(&s2, z)?.re - (z.norm_sqr() + 1.0 / PI)).abs());
    }
    out.push(Residual::new("berezin_of_toeplitz_s2", json!({"max_abs_z": 1.0}), worst, 1e-8));

    let s = random_hermitian(&trunc, cfg.seed, k)?;
    let s_other = random_hermitian(&trunc, cfg.seed.wrapping_add(1), k)?;
    let (mut worst_pp, mut worst_ps, mut worst_comm) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &z in &points {
        worst_pp = worst_pp.max((conv_op_op(&phi, &phi, z)? - Complex64::new((-PI * z.norm_sqr()).exp(), 0.0)).norm());
        worst_ps = worst_ps.max((conv_op_op(&phi, &s, z)? - berezin(&s, z)?).norm());
        worst_comm = worst_comm.max((conv_op_op(&s, &s_other, z)? - conv_op_op(&s_other, &s, z)?).norm());
    }
    out.push(Residual::new("phi_conv_phi_is_gaussian", json!({"points": points.len()}), worst_pp, 1e-8));
    out.push(Residual::new("phi_conv_s_is_berezin", json!({"points": points.len(), "seed": cfg.seed}), worst_ps, 1e-8));
    out.push(Residual::new("operator_convolution_commutes", json!({"points": points.len(), "seed": cfg.seed}), worst_comm, 1e-10));

    let mut worst = 0.0_f64;
    for &z in &points {
        let lhs = conv_op_op(&s, &s_other, z)?.norm();
        worst = worst.max(lhs - s_other.schatten_norm(1.0)? * s.op_norm());
    }
    out.push(Residual::new("operator_convolution_young_bound", json!({"seed": cfg.seed}), worst.max(0.0), 1e-9));

    let smoothed = conv(&SymbolFunction::heat_kernel(1.0)?, &s, cfg)?;
    let toeplitz_b = crate::lab::toeplitz_matrix_with_order(&crate::lab::berezin_symbol(&s), &trunc, 96)?;
    out.push(Residual::new(
        "heat_conv_is_toeplitz_of_berezin",
        json!({"seed": cfg.seed, "t": 1.0}),
        smoothed.inner_max_abs_diff(&toeplitz_b)?,
        1e-6,
    ));
    out.push(Residual::new(
        "heat_conv_young_bound",
        json!({"seed": cfg.seed, "t": 1.0}),
        (smoothed.inner_op_norm() - s.op_norm()).max(0.0),
        1e-9,
    ));

    let mut worst = 0.0_f64;
    for text in ["1", "s^2", "ind(0, 1)", "exp(-s^2)", "sin(s^2) * exp(-s^2)"] {
        let a = SymbolFunction::parse(text, true)?;
        let ta = toeplitz_matrix(&a, &trunc)?;
        let conv = conv_fun_op_with_order(&a, &phi, ConvolutionMode::BoundedAgainstFiniteRank, cfg.quad_order)?;
        worst = worst.max(ta.inner_max_abs_diff(&conv)?);
    }
    out.push(Residual::new("toeplitz_is_symbol_conv_phi", json!({"symbols": 5}), worst, 1e-7));

    let shift = ComplexPoint::new(0.3, 0.2)?;
    let a = SymbolFunction::parse("exp(-s^2)", false)?;
    let shifted = SymbolFunction::parse("exp(-((re - 0.3) * (re - 0.3) + (im - 0.2) * (im - 0.2)))", false)?;
    let moved = translate_operator(shift, &toeplitz_matrix(&a, &trunc)?)?;
    out.push(Residual::new(
        "translation_covariance",
        json!({"symbol": "exp(-s^2)", "z": [shift.re, shift.im]}),
        moved.inner_max_abs_diff(&toeplitz_matrix(&shifted, &trunc)?)?,
        1e-7,
    ));

    let (t1, t2) = (0.3, 0.2);
    let twice = conv(&SymbolFunction::heat_kernel(t1)?, &conv(&SymbolFunction::heat_kernel(t2)?, &s, cfg)?, cfg)?;
    let once = conv(&SymbolFunction::heat_kernel(t1 + t2)?, &s, cfg)?;
    out.push(Residual::new(
        "convolution_associativity",
        json!({"seed": cfg.seed, "t1": t1, "t2": t2}),
        twice.inner_max_abs_diff(&once)?,
        1e-6,
    ));
    Ok(())
}

/// Fourth-order central stencil for `∂∂̄ = (∂x² + ∂y²)/4`.
fn fd_laplacian(f: &dyn Fn(f64, f64) -> Result<f64>, x: f64, y: f64, h: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (c, d) in [(-1.0, 2.0), (16.0, 1.0), (-30.0, 0.0), (16.0, -1.0), (-1.0, -2.0)] {
        acc += c * (f(x + d * h, y)? + f(x, y + d * h)?);
    }
    Ok(0.25 * acc / (12.0 * h * h))
}

fn laplacian(cfg: &VerifyConfig, out: &mut Vec<Residual>) -> Result<()> {
    let trunc = cfg.trunc;
    let k = trunc.inner_dim;
    let points = sample_points(20, trunc.radius.min(1.5));

    let mut worst_fd = 0.0_f64;
    for seed in 0..5 {
        let s = random_hermitian(&trunc, cfg.seed.wrapping_add(seed), k)?;
        let b = |x: f64, y: f64| Ok(berezin(&s, ComplexPoint::new(x, y)?)?.re);
        for &z in &points {
            let exact = laplacian_of_berezin(&s, z)?;
            worst_fd = worst_fd.max((exact.re - fd_laplacian(&b, z.re, z.im, 1e-3)?).abs() + exact.im.abs());
        }
    }
    out.push(Residual::new("berezin_laplacian_vs_finite_differences", json!({"seeds": 5, "points": points.len()}), worst_fd, 1e-5));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lambda = EigenSequence::new((0..trunc.dim).map(|_| rng.random_range(-1.0..1.0)).collect())?;
    let diag = OperatorMatrix::diagonal(trunc, lambda.values());
    let mu = laplacian_sequence(&lambda)?;
    let mut worst = 0.0_f64;
    for &z in &points {
        worst = worst.max((laplacian_of_berezin(&diag, z)?.re - berezin_radial(&mu, z)?).abs());
    }
    out.push(Residual::new("berezin_laplacian_dual_path_radial", json!({"seed": cfg.seed}), worst, 1e-6));

    let phi = rank_one_phi(&trunc);
    let mut worst = 0.0_f64;
    for &z in &points {
        let x = PI * z.norm_sqr();
        worst = worst.max((laplacian_of_berezin(&phi, z)?.re - PI * (x - 1.0) * (-x).exp()).abs());
    }
    out.push(Residual::new("berezin_laplacian_of_phi", json!({}), worst, 1e-13));

    let linear = EigenSequence::from_fn(trunc.dim, |m| m as f64)?;
    let mu = laplacian_sequence(&linear)?;
    let constant = laplacian_sequence(&EigenSequence::constant(trunc.dim, 1.0))?;
    let worst = mu.values().iter().map(|v| (v - PI).abs()).chain(constant.values().iter().map(|v| v.abs())).fold(0.0, f64::max);
    out.push(Residual::new("laplacian_sequence_linear_and_constant", json!({}), worst, 1e-12));

    for j in [0usize, 1, 5, 10] {
        let ej = OperatorMatrix::projection(trunc, j)?;
        let target = |r: usize, c: usize| -> f64 {
            match (r as i64 - j as i64, r == c) {
                (-1, true) => PI * j as f64,
                (0, true) => -PI * (2 * j + 1) as f64,
                (1, true) => PI * (j + 1) as f64,
                _ => 0.0,
            }
        };
        let err = |t: f64| -> Result<f64> {
            let q = heat_quotient(&ej, t)?.scale(PI);
            let mut worst = 0.0_f64;
            for r in 0..k {
                for c in 0..k {
                    worst = worst.max((q.get(r, c) - Complex64::new(target(r, c), 0.0)).norm());
                }
            }
            Ok(worst)
        };
        let (e1, e2) = (err(0.02)?, err(0.01)?);
        let constant = 2.0 * PI * (3 * j * j + 3 * j + 1) as f64;
        out.push(Residual::new("delta_e_m_lemma", json!({"j": j, "t": 0.01, "bound": constant * 0.01}), e2 / (constant * 0.01), 1.0));
        out.push(Residual::new("delta_e_m_halving_ratio", json!({"j": j, "ratio": e1 / e2}), (e1 / e2 - 2.0).abs(), 0.4));
    }

    for text in ["exp(-s^2)", "s^2 * exp(-s^2)"] {
        let a = SymbolFunction::parse(text, false)?;
        let ta = toeplitz_matrix(&a, &trunc)?;
        let lap = a.expr().expect("parsed").laplacian()?;
        let t_lap = toeplitz_matrix(&SymbolFunction::new(lap)?, &trunc)?;
        let e1 = heat_quotient(&ta, 0.01)?.scale(PI).inner_max_abs_diff(&t_lap)?;
        let e2 = heat_quotient(&ta, 0.005)?.scale(PI).inner_max_abs_diff(&t_lap)?;
        out.push(Residual::new("toeplitz_laplacian_is_toeplitz_of_laplacian", json!({"symbol": text, "t": 0.01}), e1, 5e-3));
        out.push(Residual::new("toeplitz_laplacian_halving", json!({"symbol": text, "ratio": e1 / e2}), (1.6 - e1 / e2).max(0.0), 0.0));
    }
    Ok(())
}

fn heat(cfg: &VerifyConfig, out: &mut Vec<Residual>) -> Result<()> {
    let trunc = cfg.trunc;
    let k = trunc.inner_dim;
    let t = 0.5;
    let s = random_hermitian(&trunc, cfg.seed, k)?;
    let smoothed = conv(&SymbolFunction::heat_kernel(t)?, &s, cfg)?;
    let lhs = laplacian_estimate(&smoothed, LAPLACIAN_STEP)?;
    let rhs = derivative_in_t(&s, t)?.scale(PI);
    out.push(Residual::new(
        "operator_heat_equation",
        json!({"seed": cfg.seed, "t": t, "step": LAPLACIAN_STEP}),
        max_abs(&inner(&(lhs.entries() - rhs.entries()), k)),
        1e-3,
    ));

    let h = 1e-3;
    let plus = conv(&SymbolFunction::heat_kernel(t + h)?, &s, cfg)?;
    let minus = conv(&SymbolFunction::heat_kernel(t - h)?, &s, cfg)?;
    let central = plus.sub(&minus)?.scale(0.5 / h);
    out.push(Residual::new(
        "time_derivative_vs_central_difference",
        json!({"seed": cfg.seed, "t": t, "h": h}),
        central.inner_max_abs_diff(&derivative_in_t(&s, t)?)?,
        1e-5,
    ));

    let identity = OperatorMatrix::identity(trunc);
    let smoothed_id = conv(&SymbolFunction::heat_kernel(0.05)?, &identity, cfg)?;
    out.push(Residual::new("heat_fixes_identity", json!({"t": 0.05}), smoothed_id.inner_max_abs_diff(&identity)?, 1e-8));

    let mut worst = 0.0_f64;
    for t in [0.25, 1.0, 4.0] {
        worst = worst.max((SymbolFunction::heat_kernel(t)?.l1_norm()? - 1.0).abs());
    }
    out.push(Residual::new("heat_kernel_unit_mass", json!({"t": [0.25, 1.0, 4.0]}), worst, 1e-10));

    // heat-matrix checks use a long sequence so row deficits stay below the tolerances
    let len = 4 * k;
    let sin_sqrt = EigenSequence::from_fn(len, |m| (m as f64).sqrt().sin())?;
    let h1 = heat_kernel_matrix(1.0, len)?;
    let row = h1.row_sums().iter().take(k).fold(0.0_f64, |acc, v| acc.max((v - 1.0).abs()));
    out.push(Residual::new("heat_matrix_row_sums", json!({"t": 1.0, "len": len}), row, 1e-8));
    let fixed = h1.apply(&EigenSequence::constant(len, 1.0))?;
    out.push(Residual::new("heat_matrix_constant_fixed_point", json!({"t": 1.0, "len": len}), fixed.max_abs_diff(&EigenSequence::constant(len, 1.0), k), 1e-8));
    let mut worst = 0.0_f64;
    for (a, b) in [(0.25, 0.25), (0.25, 0.5), (0.5, 0.25), (0.5, 0.5)] {
        let two = heat_radial(&heat_radial(&sin_sqrt, b)?, a)?;
        worst = worst.max(two.max_abs_diff(&heat_radial(&sin_sqrt, a + b)?, k));
    }
    out.push(Residual::new("heat_semigroup", json!({"len": len}), worst, 1e-6));

    let t = 0.25;
    let panels = 32;
    let step = t / panels as f64;
    let mut integral = vec![0.0; len - 1];
    for i in 0..=panels {
        let weight = if i == 0 || i == panels { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let s_i = i as f64 * step;
        let state = if i == 0 { sin_sqrt.clone() } else { heat_radial(&sin_sqrt, s_i)? };
        for (acc, v) in integral.iter_mut().zip(laplacian_sequence(&state)?.values()) {
            *acc += weight * v * step / 3.0;
        }
    }
    let evolved = heat_radial(&sin_sqrt, t)?;
    let worst = (0..k)
        .map(|m| (evolved.values()[m] - sin_sqrt.values()[m] - integral[m] / PI).abs())
        .fold(0.0, f64::max);
    out.push(Residual::new("heat_integral_identity", json!({"t": t, "panels": panels}), worst, 1e-4));

    let lambda = EigenSequence::from_fn(trunc.dim, |m| (m as f64).sqrt().sin())?;
    let diag = OperatorMatrix::diagonal(trunc, lambda.values());
    let smoothed = conv(&SymbolFunction::heat_kernel(0.5)?, &diag, cfg)?;
    let radial = heat_radial(&lambda, 0.5)?;
    let mut worst = 0.0_f64;
    for r in 0..trunc.dim {
        for c in 0..trunc.dim {
            let expected = if r == c { radial.values()[r] } else { 0.0 };
            worst = worst.max((smoothed.get(r, c) - Complex64::new(expected, 0.0)).norm());
        }
    }
    out.push(Residual::new("heat_conv_matches_heat_radial", json!({"t": 0.5, "len": trunc.dim}), worst, 1e-7));

    let mu = laplacian_sequence(&sin_sqrt)?;
    let small = 1e-4;
    let quotient = heat_radial(&sin_sqrt, small)?;
    let worst = (0..k)
        .map(|m| ((quotient.values()[m] - sin_sqrt.values()[m]) / small - mu.values()[m] / PI).abs())
        .fold(0.0, f64::max);
    out.push(Residual::new("heat_radial_small_time_generator", json!({"t": small}), worst, 1e-3));
    Ok(())
}

fn gelfand(cfg: &VerifyConfig, out: &mut Vec<Residual>) -> Result<()> {
    let len = 400;
    let sin_sqrt = EigenSequence::from_fn(len, |m| (m as f64).sqrt().sin())?;
    let sin_lin = EigenSequence::from_fn(len, |m| (m as f64).sin())?;
    let d_smooth = d_delta_defect(&sin_sqrt)?;
    let d_rough = d_delta_defect(&sin_lin)?;
    out.push(Residual::new("defect_bounded_for_sin_sqrt", json!({"len": len, "defect": d_smooth}), d_smooth, 1.5));
    out.push(Residual::new("defect_large_for_sin", json!({"len": len, "defect": d_rough}), (50.0 - d_rough).max(0.0), 0.0));

    let mut disagreements = 0.0;
    for x in [&sin_sqrt, &sin_lin] {
        let mu = laplacian_sequence(x)?;
        let v = x.values();
        let defects: Vec<f64> = (1..v.len() - 1).map(|m| m as f64 * (v[m + 1] - 2.0 * v[m] + v[m - 1])).collect();
        if window_looks_bounded(mu.values()) != window_looks_bounded(&defects) {
            disagreements += 1.0;
        }
    }
    out.push(Residual::new("laplacian_boundedness_matches_defect", json!({"len": len}), disagreements, 0.0));

    let sigma = SequenceFunction::from_fn(len, |m| (m as f64).sqrt().sin())?;
    let mut at_integers = 0.0_f64;
    for m in 0..len - 1 {
        at_integers = at_integers.max((extend_plus(&sigma, m as f64)? - sigma.values()[m]).abs());
    }
    out.push(Residual::new("extension_interpolates", json!({"len": len}), at_integers, 0.0));

    // ten points per unit, integers included
    let grid = 10 * (len - 1);
    let mut sup = 0.0_f64;
    for i in 0..grid {
        sup = sup.max(extend_plus(&sigma, i as f64 / 10.0)?.abs());
    }
    let sup_window = sigma.values()[..len - 1].iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    out.push(Residual::new("extension_isometry", json!({"grid": grid}), (sup - sup_window).abs(), 1e-12));

    let q = QuadratureScheme::gauss_laguerre(cfg.quad_order)?;
    let mut worst = 0.0_f64;
    for text in ["1", "s^2", "exp(-s^2)"] {
        let a = RadialSymbol::parse(text, true)?;
        let g1 = SequenceFunction::new(toeplitz_eigenvalues(&a, 1, 41, &q)?.into_values())?;
        let g2 = toeplitz_eigenvalues(&a, 2, 40, &q)?;
        worst = worst.max(sup_diff(shift_left(&g1, 1)?.values(), g2.values()));
    }
    out.push(Residual::new("dimension_shift_reduction", json!({"symbols": ["1", "s^2", "exp(-s^2)"]}), worst, 1e-8));

    let round = shift_left(&shift_right(&sigma, 2), 2)?;
    out.push(Residual::new("shift_round_trip", json!({"k": 2}), sup_diff(round.values(), sigma.values()), 0.0));

    let mut worst = 0.0_f64;
    for n in 1..len - 1 {
        let q = divided_difference(&sigma, n)?;
        let (lo, hi) = (((n - 1) as f64).sqrt(), ((n + 1) as f64).sqrt());
        // f = sin, f''/2 = -sin/2 over [lo, hi]
        let samples: Vec<f64> = (0..=64).map(|i| -0.5 * (lo + (hi - lo) * i as f64 / 64.0).sin()).collect();
        let (min, max) = samples.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        let slack = 0.5 * ((hi - lo) / 64.0);
        worst = worst.max((min - slack - q).max(q - max - slack).max(0.0));
    }
    out.push(Residual::new("divided_difference_mean_value", json!({"len": len}), worst, 1e-9));

    let smooth = sample_at_sqrt(f64::sin, len)?;
    let omega = modulus_of_continuity(&smooth, 0.1)?;
    out.push(Residual::new("sqrt_metric_modulus_sin_sqrt", json!({"delta": 0.1}), (omega - 0.1).max(0.0), 1e-12));

    let mut errors = Vec::new();
    for s in [0.16, 0.04, 0.01] {
        let approx = approx_in_ddelta(&sigma, s)?;
        let err = approx.window_error(&sigma);
        if s == 0.04 {
            out.push(Residual::new("density_window_error", json!({"s": s}), err, 0.05));
            let defect = d_delta_defect(&approx.nu.to_eigen_sequence())?;
            out.push(Residual::new("density_approximant_defect", json!({"s": s}), defect, 2.0));
        }
        errors.push(err);
    }
    let monotone = errors.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max);
    out.push(Residual::new("density_error_monotone", json!({"errors": errors}), monotone, 0.0));
    Ok(())
}
