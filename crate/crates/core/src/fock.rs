//! Kernel and basis formulas of the Fock space `F^2(C)` with the Gaussian
//! measure `e^{-pi|z|^2} dz`, and truncated matrices of the Weyl and parity
//! unitaries.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::matrix::OperatorMatrix;
use crate::special::{laguerre_scaled, ln_factorial, poisson_tail};

/// A point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub const ORIGIN: ComplexPoint = ComplexPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(QhaError::InvalidArgument(format!("non-finite point ({re}, {im})")));
        }
        Ok(Self { re, im })
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Self { re: r * theta.cos(), im: r * theta.sin() }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl TryFrom<[f64; 2]> for ComplexPoint {
    type Error = QhaError;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<ComplexPoint> for [f64; 2] {
    fn from(p: ComplexPoint) -> Self {
        [p.re, p.im]
    }
}

/// Largest coherent-state tail mass accepted for `(dim, radius)`.
pub const TRUNCATION_TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTruncation")]
pub struct TruncationSpec {
    /// Number of retained basis vectors `e_0, ..., e_{dim-1}`.
    pub dim: usize,
    /// Leading sub-block on which identities are checked.
    pub inner_dim: usize,
    /// Largest `|z|` at which truncated formulas are trusted.
    pub radius: f64,
}

#[derive(Deserialize)]
struct RawTruncation {
    dim: usize,
    inner_dim: usize,
    radius: f64,
}

impl TryFrom<RawTruncation> for TruncationSpec {
    type Error = QhaError;
    fn try_from(raw: RawTruncation) -> Result<Self> {
        TruncationSpec::new(raw.dim, raw.inner_dim, raw.radius)
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { dim: 48, inner_dim: 24, radius: 2.0 }
    }
}

impl TruncationSpec {
    pub fn new(dim: usize, inner_dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 || inner_dim == 0 || inner_dim > dim {
            return Err(QhaError::InvalidArgument(format!(
                "need 1 <= inner_dim <= dim, got inner_dim={inner_dim}, dim={dim}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(QhaError::InvalidArgument(format!("radius {radius} must be positive")));
        }
        let spec = Self { dim, inner_dim, radius };
        let tail = spec.tail_bound(radius);
        if tail > TRUNCATION_TAIL_TOLERANCE {
            return Err(QhaError::InvalidArgument(format!(
                "coherent-state tail {tail:e} at radius {radius} exceeds {TRUNCATION_TAIL_TOLERANCE:e}; \
                 increase dim or decrease radius"
            )));
        }
        Ok(spec)
    }

    /// `sum_{m >= dim} |c_m(z)|^2` for `|z| = modulus`, the mass of `k_z`
    /// outside the retained span.
    pub fn tail_bound(&self, modulus: f64) -> f64 {
        poisson_tail(self.dim, PI * modulus * modulus)
    }

    pub fn check_radius(&self, z: ComplexPoint) -> Result<()> {
        let modulus = z.norm();
        if modulus > self.radius * (1.0 + 1e-12) {
            return Err(QhaError::RadiusExceeded { modulus, radius: self.radius });
        }
        Ok(())
    }
}

/// `e_m(z) = sqrt(pi^m / m!) z^m`.
pub fn monomial_basis_value(m: usize, z: ComplexPoint) -> Complex64 {
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let w = z.to_c64();
    if w == Complex64::new(0.0, 0.0) {
        return w;
    }
    if m <= 20 {
        let scale = (PI.powi(m as i32) / ln_factorial(m).exp()).sqrt();
        return w.powu(m as u32) * scale;
    }
    let ln_mod = 0.5 * (m as f64 * PI.ln() - ln_factorial(m)) + m as f64 * z.norm().ln();
    Complex64::from_polar(ln_mod.exp(), m as f64 * z.arg())
}

/// Coefficients `c_m(z)` of `k_z = sum_m c_m(z) e_m` for `m < dim`, without the radius check.
pub(crate) fn kernel_coeffs(z: ComplexPoint, dim: usize) -> Vec<Complex64> {
    let x = PI * z.norm_sqr();
    if x == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        if dim > 0 {
            v[0] = Complex64::new(1.0, 0.0);
        }
        return v;
    }
    let theta = z.arg();
    (0..dim)
        .map(|m| {
            let ln_mod = -0.5 * x + 0.5 * m as f64 * x.ln() - 0.5 * ln_factorial(m);
            Complex64::from_polar(ln_mod.exp(), -(m as f64) * theta)
        })
        .collect()
}

/// Expansion coefficients of the normalized reproducing kernel
/// `k_z(w) = e^{pi conj(z) w - pi|z|^2/2}` in the monomial basis.
pub fn normalized_kernel_coeffs(z: ComplexPoint, trunc: &TruncationSpec) -> Result<Vec<Complex64>> {
    trunc.check_radius(z)?;
    Ok(kernel_coeffs(z, trunc.dim))
}

/// Heat kernel `phi_t(z) = t^{-1} e^{-pi|z|^2/t}` in one complex dimension.
pub fn heat_kernel(t: f64, z: ComplexPoint) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(QhaError::InvalidArgument(format!("heat time {t} must be positive")));
    }
    Ok((-PI * z.norm_sqr() / t).exp() / t)
}

/// `d/dt phi_t(z) = (pi|z|^2/t - 1) phi_t(z) / t`.
pub fn heat_kernel_dt(t: f64, z: ComplexPoint) -> Result<f64> {
    let phi = heat_kernel(t, z)?;
    Ok((PI * z.norm_sqr() / t - 1.0) * phi / t)
}

/// Matrix of the displacement `D(rho)` for real `rho >= 0`.
///
/// `W_z = D(alpha)` with `alpha = sqrt(pi) conj(z)`, and
/// `(W_z)_{jk} = D_{jk}(|alpha|) e^{-i(j-k) arg z}`.
pub(crate) fn displacement_real(rho: f64, dim: usize) -> DMatrix<f64> {
    if rho == 0.0 {
        return DMatrix::identity(dim, dim);
    }
    let x = rho * rho;
    let ln_rho = rho.ln();
    let mut out = DMatrix::zeros(dim, dim);
    let mut lag = Vec::with_capacity(dim);
    for d in 0..dim {
        // entries (k + d, k): L_k^{(d)}(x)
        laguerre_scaled(dim - d, d as f64, x, &mut lag);
        for (k, l) in lag.iter().enumerate() {
            let j = k + d;
            if l.mantissa == 0.0 {
                continue;
            }
            let ln_pref = 0.5 * (ln_factorial(k) - ln_factorial(j)) + d as f64 * ln_rho - 0.5 * x;
            let v = l.signum() * (ln_pref + l.ln_abs()).exp();
            out[(j, k)] = v;
            if d > 0 {
                out[(k, j)] = if d % 2 == 0 { v } else { -v };
            }
        }
    }
    out
}

/// Truncated Weyl matrix without the radius check.
pub(crate) fn weyl_entries(z: ComplexPoint, dim: usize) -> DMatrix<Complex64> {
    let rho = (PI * z.norm_sqr()).sqrt();
    let d = displacement_real(rho, dim);
    let theta = z.arg();
    let phases: Vec<Complex64> =
        (0..dim).map(|j| Complex64::from_polar(1.0, -(j as f64) * theta)).collect();
    DMatrix::from_fn(dim, dim, |j, k| phases[j] * phases[k].conj() * d[(j, k)])
}

/// `(W_z)_{jk} = <W_z e_k, e_j>` for `W_z f(w) = k_z(w) f(w - z)`, from the
/// closed associated-Laguerre form.
pub fn weyl_matrix(z: ComplexPoint, trunc: &TruncationSpec) -> Result<OperatorMatrix> {
    trunc.check_radius(z)?;
    Ok(OperatorMatrix::from_parts(weyl_entries(z, trunc.dim), *trunc))
}

/// `(U f)(z) = f(-z)`, i.e. `diag((-1)^m)`.
pub fn parity_matrix(trunc: &TruncationSpec) -> OperatorMatrix {
    let diag: Vec<f64> = (0..trunc.dim).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect();
    OperatorMatrix::diagonal(*trunc, &diag)
}

/// `W_z S W_z^*`, exact on the retained block for S supported there.
pub(crate) fn translate_entries(z: ComplexPoint, s: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let w = weyl_entries(z, s.nrows());
    &w * s * w.adjoint()
}

/// Operator translation `alpha_z(S) = W_z S W_z^*`.
pub fn translate_operator(z: ComplexPoint, s: &OperatorMatrix) -> Result<OperatorMatrix> {
    s.trunc().check_radius(z)?;
    Ok(OperatorMatrix::from_parts(translate_entries(z, s.entries()), s.trunc()))
}
