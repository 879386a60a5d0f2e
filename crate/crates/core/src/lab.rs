//! Truncated-matrix quantum harmonic analysis for general operators in one dimension.
//!
//! Operators are N×N blocks in the monomial basis, read as finite-rank
//! operators. For such `S`, every entry of `α_z(S) = W_z S W_z^*` inside the
//! block is exact, so function–operator convolutions integrate over the whole
//! plane without clipping.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::fock::{displacement_real, kernel_coeffs, translate_entries, ComplexPoint, TruncationSpec};
use crate::matrix::OperatorMatrix;
use crate::quadrature::{self, QuadratureKind};
use crate::radial::QUADRATURE_TOLERANCE;
use crate::symbol::{parse_symbol, Expr, Growth, RadialSymbol};

/// Default per-axis Gauss–Hermite order for Toeplitz matrices.
pub const HERMITE_ORDER: usize = 64;
/// Default Gauss–Laguerre order for radial integrals.
pub const LAGUERRE_ORDER: usize = 96;
/// Default step of [`laplacian_estimate`].
pub const LAPLACIAN_STEP: f64 = 0.005;

type Callable = Arc<dyn Fn(ComplexPoint) -> f64 + Send + Sync>;

/// A real function on the plane: a grammar expression or a native callable.
///
/// Callables carry their own growth class, since nothing can be inferred from a closure.
#[derive(Clone)]
pub enum SymbolFunction {
    Expr { expr: Expr, growth: Growth },
    Callable { name: String, radial: bool, growth: Growth, f: Callable },
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolFunction::Expr { expr, .. } => write!(f, "SymbolFunction({expr})"),
            SymbolFunction::Callable { name, .. } => write!(f, "SymbolFunction(<{name}>)"),
        }
    }
}

impl fmt::Display for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolFunction::Expr { expr, .. } => expr.fmt(f),
            SymbolFunction::Callable { name, .. } => f.write_str(name),
        }
    }
}

impl SymbolFunction {
    /// A bounded expression.
    pub fn new(expr: Expr) -> Result<Self> {
        expr.check_bounded()?;
        let growth = expr.growth();
        Ok(SymbolFunction::Expr { expr, growth })
    }

    /// An expression of at most polynomial growth.
    pub fn new_tempered(expr: Expr) -> Result<Self> {
        expr.check_tempered()?;
        let growth = expr.growth();
        Ok(SymbolFunction::Expr { expr, growth })
    }

    pub fn parse(text: &str, allow_unbounded: bool) -> Result<Self> {
        let expr = parse_symbol(text)?;
        if allow_unbounded {
            Self::new_tempered(expr)
        } else {
            Self::new(expr)
        }
    }

    pub fn from_radial(a: &RadialSymbol) -> Self {
        SymbolFunction::Expr { expr: a.expr().clone(), growth: a.growth() }
    }

    /// Heat kernel `φ_t`.
    pub fn heat_kernel(t: f64) -> Result<Self> {
        check_time(t)?;
        Self::new(Expr::heat_kernel(t))
    }

    /// `∂_t φ_t`.
    pub fn heat_kernel_dt(t: f64) -> Result<Self> {
        check_time(t)?;
        Self::new(Expr::heat_kernel_dt(t))
    }

    /// Native function with a declared growth class.
    pub fn callable(
        name: impl Into<String>,
        radial: bool,
        growth: Growth,
        f: impl Fn(ComplexPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SymbolFunction::Callable { name: name.into(), radial, growth, f: Arc::new(f) }
    }

    pub fn eval(&self, z: ComplexPoint) -> f64 {
        match self {
            SymbolFunction::Expr { expr, .. } => expr.eval(z),
            SymbolFunction::Callable { f, .. } => f(z),
        }
    }

    pub fn is_radial(&self) -> bool {
        match self {
            SymbolFunction::Expr { expr, .. } => expr.is_radial(),
            SymbolFunction::Callable { radial, .. } => *radial,
        }
    }

    pub fn growth(&self) -> Growth {
        match self {
            SymbolFunction::Expr { growth, .. } | SymbolFunction::Callable { growth, .. } => *growth,
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match self {
            SymbolFunction::Expr { expr, .. } => Some(expr),
            SymbolFunction::Callable { .. } => None,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            SymbolFunction::Expr { expr, .. } => expr.breakpoints(),
            SymbolFunction::Callable { .. } => Vec::new(),
        }
    }

    /// `‖ψ‖_1 = ∫ |ψ(z)| dz`.
    pub fn l1_norm(&self) -> Result<f64> {
        if !self.growth().is_integrable() {
            return Err(QhaError::NotIntegrable(self.to_string()));
        }
        let rate = self.growth().decay_rate().max(1.0);
        let nodes = radial_nodes_rate(&self.breakpoints(), rate, LAGUERRE_ORDER)?;
        let angles = 256;
        let mut total = 0.0;
        for (&r, &w) in nodes.r.iter().zip(&nodes.w) {
            let mean = if self.is_radial() {
                self.eval(ComplexPoint::polar(r, 0.0)).abs()
            } else {
                (0..angles)
                    .map(|a| self.eval(ComplexPoint::polar(r, 2.0 * PI * a as f64 / angles as f64)).abs())
                    .sum::<f64>()
                    / angles as f64
            };
            total += w * mean;
        }
        Ok(total)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(QhaError::InvalidArgument(format!("heat time {t} must be positive")));
    }
    Ok(())
}

/// Nodes for `∫_0^∞ F(r) 2πr dr` where `F` carries a Gaussian factor `e^{-rate r^2}`.
struct RadialNodes {
    r: Vec<f64>,
    w: Vec<f64>,
}

/// Gauss–Legendre in `r` between breakpoints, then Gauss–Laguerre in `v = rate (r^2 - b^2)`.
/// The Laguerre weights absorb `e^{-rate r^2}` only partially: `w` includes `e^{v}`,
/// so `F` must be evaluated in full.
fn radial_nodes_rate(breaks: &[f64], rate: f64, order: usize) -> Result<RadialNodes> {
    let legendre = quadrature::cached(QuadratureKind::GaussLegendre, order)?;
    let laguerre = quadrature::cached(QuadratureKind::GaussLaguerre, order)?;
    let mut r = Vec::new();
    let mut w = Vec::new();
    let mut lo = 0.0;
    for &b in breaks {
        for (x, wx) in legendre.legendre_on(lo, b) {
            r.push(x);
            w.push(wx * 2.0 * PI * x);
        }
        lo = b;
    }
    let u0 = rate * lo * lo;
    for (v, wv) in laguerre.laguerre_unweighted() {
        r.push(((u0 + v) / rate).sqrt());
        w.push(wv * PI / rate);
    }
    Ok(RadialNodes { r, w })
}

/// Radial nodes for an integrand `ψ(z) × (polynomial) × e^{-π|z|^2}`, `ψ ~ e^{-c|z|^2}`.
fn radial_nodes(breaks: &[f64], decay_rate: f64, order: usize) -> Result<RadialNodes> {
    radial_nodes_rate(breaks, PI + decay_rate, order)
}

/// Values `e_k(z_i)` for `k < dim`, by the recurrence `e_{k+1} = e_k z sqrt(π/(k+1))`.
fn basis_row(z: Complex64, dim: usize, out: &mut Vec<Complex64>) {
    out.clear();
    let mut e = Complex64::new(1.0, 0.0);
    for k in 0..dim {
        out.push(e);
        e *= z * (PI / (k + 1) as f64).sqrt();
    }
}

/// Toeplitz matrix with the default quadrature order.
pub fn toeplitz_matrix(a: &SymbolFunction, trunc: &TruncationSpec) -> Result<OperatorMatrix> {
    toeplitz_matrix_with_order(a, trunc, HERMITE_ORDER)
}

/// `(T_a)_{jk} = ∫ a(z) e_k(z) conj(e_j(z)) e^{-π|z|^2} dz`.
///
/// Smooth symbols use a tensor Gauss–Hermite rule scaled to the symbol's
/// Gaussian rate; symbols with indicators use a polar rule split at their radii.
/// The rule is compared with twice its order on the inner block and the finer
/// result is returned.
pub fn toeplitz_matrix_with_order(
    a: &SymbolFunction,
    trunc: &TruncationSpec,
    order: usize,
) -> Result<OperatorMatrix> {
    if a.growth() == Growth::Exponential {
        return Err(QhaError::UnboundedSymbol { subtree: a.to_string() });
    }
    let breaks = a.breakpoints();
    let build = |q: usize| {
        if breaks.is_empty() {
            toeplitz_hermite(a, trunc.dim, q)
        } else {
            toeplitz_polar(a, &breaks, trunc.dim, q)
        }
    };
    let coarse = build(order)?;
    let fine = build(2 * order)?;
    let k = trunc.inner_dim;
    let mut estimate = 0.0_f64;
    for j in 0..k {
        for i in 0..k {
            estimate = estimate.max((coarse[(i, j)] - fine[(i, j)]).norm());
        }
    }
    if !(estimate <= QUADRATURE_TOLERANCE) {
        return Err(QhaError::QuadratureOrderTooLow { estimate, tolerance: QUADRATURE_TOLERANCE });
    }
    OperatorMatrix::new(fine, *trunc)
}

fn toeplitz_hermite(a: &SymbolFunction, dim: usize, order: usize) -> Result<DMatrix<Complex64>> {
    let rule = quadrature::cached(QuadratureKind::GaussHermite2d, order)?;
    let beta = 1.0 + a.growth().decay_rate() / PI;
    let scale = 1.0 / (beta * PI).sqrt();
    let n = rule.order;
    let mut basis = DMatrix::<Complex64>::zeros(n * n, dim);
    let mut g = vec![0.0; n * n];
    let mut row = Vec::with_capacity(dim);
    for (ix, (&xi, &lx)) in rule.nodes.iter().zip(&rule.ln_weights).enumerate() {
        for (iy, (&eta, &ly)) in rule.nodes.iter().zip(&rule.ln_weights).enumerate() {
            let i = ix * n + iy;
            let z = ComplexPoint { re: xi * scale, im: eta * scale };
            let v = a.eval(z);
            if v == 0.0 {
                continue;
            }
            // w e^{(β-1)π|z|^2} / (βπ): the rule's weight is e^{-βπ|z|^2} in z
            g[i] = v * (lx + ly + (beta - 1.0) * PI * z.norm_sqr()).exp() / (beta * PI);
            basis_row(z.to_c64(), dim, &mut row);
            for (k, e) in row.iter().enumerate() {
                basis[(i, k)] = *e;
            }
        }
    }
    let weighted = DMatrix::from_fn(n * n, dim, |i, k| basis[(i, k)] * g[i]);
    Ok(basis.adjoint() * weighted)
}

fn toeplitz_polar(a: &SymbolFunction, breaks: &[f64], dim: usize, order: usize) -> Result<DMatrix<Complex64>> {
    let nodes = radial_nodes(breaks, a.growth().decay_rate(), order)?;
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    let radial = a.is_radial();
    let angles = 8 * dim;
    let band = if radial { 0 } else { dim - 1 };
    let ln_norm: Vec<f64> = (0..dim)
        .map(|k| 0.5 * (k as f64 * PI.ln() - crate::special::ln_factorial(k)))
        .collect();
    for (&r, &w) in nodes.r.iter().zip(&nodes.w) {
        // angular Fourier coefficients (1/2π)∫ a e^{-inθ} dθ for |n| <= band
        let coeffs: Vec<Complex64> = if radial {
            vec![Complex64::new(a.eval(ComplexPoint::polar(r, 0.0)), 0.0)]
        } else {
            angular_coefficients(a, r, band, angles)
        };
        if coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            continue;
        }
        let gauss = -PI * r * r;
        let ln_r = r.ln();
        for j in 0..dim {
            let lo = j.saturating_sub(band);
            let hi = (j + band).min(dim - 1);
            for k in lo..=hi {
                let n = j as i64 - k as i64;
                let c = coeffs[(n + band as i64) as usize];
                let ln_mod = ln_norm[j] + ln_norm[k] + (j + k) as f64 * ln_r + gauss;
                out[(j, k)] += c * (w * ln_mod.exp());
            }
        }
    }
    Ok(out)
}

/// `(1/2π) ∫ ψ(r, θ) e^{-inθ} dθ` for `n = -band..=band` by the trapezoid rule.
fn angular_coefficients(psi: &SymbolFunction, r: f64, band: usize, angles: usize) -> Vec<Complex64> {
    let samples: Vec<(f64, f64)> = (0..angles)
        .map(|a| {
            let theta = 2.0 * PI * a as f64 / angles as f64;
            (theta, psi.eval(ComplexPoint::polar(r, theta)))
        })
        .collect();
    (-(band as i64)..=band as i64)
        .map(|n| {
            samples
                .iter()
                .map(|&(theta, v)| Complex64::from_polar(v, -(n as f64) * theta))
                .sum::<Complex64>()
                / angles as f64
        })
        .collect()
}

/// `Φ = 1 ⊗ 1`, the projection onto constants.
pub fn rank_one_phi(trunc: &TruncationSpec) -> OperatorMatrix {
    OperatorMatrix::projection(*trunc, 0).expect("dim >= 1")
}

fn quadratic_form(c: &[Complex64], s: &DMatrix<Complex64>) -> Complex64 {
    let sc = s * nalgebra::DVector::from_column_slice(c);
    c.iter().zip(sc.iter()).map(|(ci, v)| ci.conj() * v).sum()
}

/// `B(S)(z) = <S k_z, k_z>`.
pub fn berezin(s: &OperatorMatrix, z: ComplexPoint) -> Result<Complex64> {
    s.trunc().check_radius(z)?;
    Ok(quadratic_form(&kernel_coeffs(z, s.dim()), s.entries()))
}

/// `z ↦ B(S)(z)` as a symbol, valid on the whole plane for a finite-rank `S`.
pub fn berezin_symbol(s: &OperatorMatrix) -> SymbolFunction {
    let entries = s.entries().clone();
    let radial = (0..s.dim()).all(|j| (0..s.dim()).all(|k| j == k || entries[(j, k)] == Complex64::new(0.0, 0.0)));
    SymbolFunction::callable("B(S)", radial, Growth::Decaying { rate: PI }, move |z| {
        quadratic_form(&kernel_coeffs(z, entries.nrows()), &entries).re
    })
}

/// Whether `ψ` must be integrable for `ψ * S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionMode {
    /// `ψ ∈ L^1`, checked structurally.
    #[default]
    Integrable,
    /// Any symbol of at most polynomial growth. Entries of `α_z(S)` for a
    /// finite-rank `S` decay like `e^{-π|z|^2}`, so `T_a = a * Φ` converges.
    BoundedAgainstFiniteRank,
}

/// `ψ * S = ∫ α_z(S) ψ(z) dz` with the default radial order.
pub fn conv_fun_op(psi: &SymbolFunction, s: &OperatorMatrix, mode: ConvolutionMode) -> Result<OperatorMatrix> {
    conv_fun_op_with_order(psi, s, mode, LAGUERRE_ORDER)
}

/// Polar quadrature of `∫ α_z(S) ψ(z) dz`.
///
/// With `W_z = P D(√π r) P^*`, `P = diag(e^{-ijθ})`, the angular integral of the
/// `(j, k)` entry is `Σ_{l,m} D_{jl} S_{lm} D_{km} ψ̂(r, (j-k)-(l-m))`. For radial
/// `ψ` only `l - m = j - k` survives.
pub fn conv_fun_op_with_order(
    psi: &SymbolFunction,
    s: &OperatorMatrix,
    mode: ConvolutionMode,
    order: usize,
) -> Result<OperatorMatrix> {
    let growth = psi.growth();
    match mode {
        ConvolutionMode::Integrable if !growth.is_integrable() => {
            return Err(QhaError::NotIntegrable(psi.to_string()))
        }
        ConvolutionMode::BoundedAgainstFiniteRank if growth == Growth::Exponential => {
            return Err(QhaError::UnboundedSymbol { subtree: psi.to_string() })
        }
        _ => {}
    }
    let dim = s.dim();
    let order = order.max(dim + 8);
    let nodes = radial_nodes(&psi.breakpoints(), growth.decay_rate(), order)?;
    let entries = s.entries();
    let nonzero: Vec<(usize, usize, Complex64)> = (0..dim)
        .flat_map(|l| (0..dim).map(move |m| (l, m)))
        .filter_map(|(l, m)| {
            let v = entries[(l, m)];
            (v != Complex64::new(0.0, 0.0)).then_some((l, m, v))
        })
        .collect();
    let radial = psi.is_radial();
    let parts: Vec<DMatrix<Complex64>> = nodes
        .r
        .par_iter()
        .zip(nodes.w.par_iter())
        .map(|(&r, &w)| {
            let d = displacement_real(PI.sqrt() * r, dim);
            if radial {
                let v = psi.eval(ComplexPoint::polar(r, 0.0));
                if v == 0.0 {
                    return DMatrix::zeros(dim, dim);
                }
                radial_block(&d, entries, dim) * Complex64::new(w * v, 0.0)
            } else {
                let band = 2 * (dim - 1);
                let coeffs = angular_coefficients(psi, r, band, 8 * dim);
                let mut out = DMatrix::<Complex64>::zeros(dim, dim);
                for &(l, m, slm) in &nonzero {
                    for j in 0..dim {
                        let djl = d[(j, l)];
                        if djl == 0.0 {
                            continue;
                        }
                        for k in 0..dim {
                            let n = (j as i64 - k as i64) - (l as i64 - m as i64);
                            let c = coeffs[(n + band as i64) as usize];
                            out[(j, k)] += slm * c * (djl * d[(k, m)]);
                        }
                    }
                }
                out * Complex64::new(w, 0.0)
            }
        })
        .collect();
    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for p in &parts {
        total += p;
    }
    Ok(OperatorMatrix::from_parts(total, s.trunc()))
}

/// `A_{jk} = Σ_m D_{j,m+d} S_{m+d,m} D_{k,m}` with `d = j - k`.
fn radial_block(d: &DMatrix<f64>, s: &DMatrix<Complex64>, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |j, k| {
        let off = j as i64 - k as i64;
        let m_lo = 0.max(-off) as usize;
        let m_hi = (dim as i64).min(dim as i64 - off) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in m_lo..m_hi {
            let l = (m as i64 + off) as usize;
            acc += s[(l, m)] * (d[(j, l)] * d[(k, m)]);
        }
        acc
    })
}

/// `S * T (z) = Tr(S α_z(U T U))`.
pub fn conv_op_op(s: &OperatorMatrix, t: &OperatorMatrix, z: ComplexPoint) -> Result<Complex64> {
    if s.dim() != t.dim() {
        return Err(QhaError::DimensionMismatch { expected: s.dim(), got: t.dim() });
    }
    s.trunc().check_radius(z)?;
    Ok(conv_op_op_entries(s.entries(), t.entries(), z))
}

fn reflect(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(t.nrows(), t.ncols(), |j, k| if (j + k) % 2 == 0 { t[(j, k)] } else { -t[(j, k)] })
}

fn conv_op_op_entries(s: &DMatrix<Complex64>, t: &DMatrix<Complex64>, z: ComplexPoint) -> Complex64 {
    let moved = translate_entries(z, &reflect(t));
    // Tr(S X) = Σ_{jk} S_{jk} X_{kj}
    s.iter().zip(moved.transpose().iter()).map(|(a, b)| a * b).sum()
}

/// `S * T` as a function on the plane.
#[derive(Debug, Clone, Serialize)]
pub struct ConvolutionResultFunction {
    pub left: String,
    pub right: String,
    pub trunc: TruncationSpec,
    /// Whether the right operand is treated as trace class (always true for truncations).
    pub trace_class: bool,
    #[serde(skip)]
    s: DMatrix<Complex64>,
    #[serde(skip)]
    t: DMatrix<Complex64>,
}

impl ConvolutionResultFunction {
    pub fn new(
        left: impl Into<String>,
        s: &OperatorMatrix,
        right: impl Into<String>,
        t: &OperatorMatrix,
    ) -> Result<Self> {
        if s.dim() != t.dim() {
            return Err(QhaError::DimensionMismatch { expected: s.dim(), got: t.dim() });
        }
        Ok(Self {
            left: left.into(),
            right: right.into(),
            trunc: s.trunc(),
            trace_class: true,
            s: s.entries().clone(),
            t: t.entries().clone(),
        })
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<Complex64> {
        self.trunc.check_radius(z)?;
        Ok(conv_op_op_entries(&self.s, &self.t, z))
    }
}

/// `ΔB(S)(z) = π(π <S ṽ, ṽ> - <S k_z, k_z>)` with `ṽ = (w - z) k_z`.
///
/// This is the `∂∂̄` Laplacian; `w e_m = sqrt((m+1)/π) e_{m+1}` gives
/// `ṽ_m = sqrt(m/π) c_{m-1} - z c_m`.
pub fn laplacian_of_berezin(s: &OperatorMatrix, z: ComplexPoint) -> Result<Complex64> {
    s.trunc().check_radius(z)?;
    let dim = s.dim();
    let c = kernel_coeffs(z, dim);
    let zc = z.to_c64();
    let v: Vec<Complex64> = (0..dim)
        .map(|m| {
            let shifted = if m == 0 { Complex64::new(0.0, 0.0) } else { c[m - 1] * (m as f64 / PI).sqrt() };
            shifted - zc * c[m]
        })
        .collect();
    let e = s.entries();
    Ok((quadratic_form(&v, e) * PI - quadratic_form(&c, e)) * PI)
}

/// `(φ_t * S - S) / t`.
pub fn heat_quotient(s: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(QhaError::OutOfRange { x: t, lo: 0.0, hi: 1.0 });
    }
    let smoothed = conv_fun_op(&SymbolFunction::heat_kernel(t)?, s, ConvolutionMode::Integrable)?;
    Ok(smoothed.sub(s)?.scale(1.0 / t))
}

/// Richardson estimate `ΔS ≈ π(2 Q(τ/2) - Q(τ))` of the operator Laplacian, `Q` the heat quotient.
pub fn laplacian_estimate(s: &OperatorMatrix, step: f64) -> Result<OperatorMatrix> {
    let coarse = heat_quotient(s, step)?;
    let fine = heat_quotient(s, step / 2.0)?;
    Ok(fine.scale(2.0).sub(&coarse)?.scale(PI))
}

/// `d/dt (φ_t * S) = (∂_t φ_t) * S`.
pub fn derivative_in_t(s: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(QhaError::OutOfRange { x: t, lo: 0.0, hi: 1.0 });
    }
    conv_fun_op(&SymbolFunction::heat_kernel_dt(t)?, s, ConvolutionMode::Integrable)
}

/// Seeded random Hermitian operator of unit operator norm supported on the leading `support` block.
pub fn random_hermitian(trunc: &TruncationSpec, seed: u64, support: usize) -> Result<OperatorMatrix> {
    if support == 0 || support > trunc.dim {
        return Err(QhaError::OutOfRange { x: support as f64, lo: 1.0, hi: trunc.dim as f64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::<Complex64>::zeros(trunc.dim, trunc.dim);
    for j in 0..support {
        for k in 0..support {
            a[(j, k)] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let op = OperatorMatrix::from_parts(h, *trunc);
    let norm = op.op_norm();
    Ok(op.scale(1.0 / norm))
}
