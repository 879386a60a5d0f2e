//! Sequences on `ℕ₀` with the square-root metric `ρ(m, n) = |√m - √n|`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::quadrature::simpson;
use crate::radial::EigenSequence;
use crate::symbol::Expr;
use crate::fock::ComplexPoint;

/// A finite sequence `σ_0, ..., σ_{M-1}` with `M >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SequenceFunction {
    values: Vec<f64>,
}

impl SequenceFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(QhaError::SequenceTooShort { len: values.len(), min: 2 });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(QhaError::InvalidArgument(format!("non-finite sequence entry {bad}")));
        }
        Ok(Self { values })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..len).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn to_eigen_sequence(&self) -> EigenSequence {
        EigenSequence::new(self.values.clone()).expect("entries are finite")
    }

    /// Largest `x` on which `f_σ^+` is defined.
    pub fn extent(&self) -> f64 {
        (self.len() - 1) as f64
    }
}

impl<'de> Deserialize<'de> for SequenceFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SequenceFunction::new(Vec::<f64>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<&EigenSequence> for SequenceFunction {
    type Error = QhaError;
    fn try_from(e: &EigenSequence) -> Result<Self> {
        SequenceFunction::new(e.values().to_vec())
    }
}

/// `ρ(m1, m2) = |√m1 - √m2|`.
pub fn sqrt_metric(m1: usize, m2: usize) -> f64 {
    ((m1 as f64).sqrt() - (m2 as f64).sqrt()).abs()
}

/// `max{|σ_{m1} - σ_{m2}| : ρ(m1, m2) <= δ}` by an exhaustive pair scan.
pub fn modulus_of_continuity(sigma: &SequenceFunction, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(QhaError::InvalidArgument(format!("δ = {delta} must be positive")));
    }
    let v = sigma.values();
    let mut worst = 0.0_f64;
    for m1 in 0..v.len() {
        let reach = (m1 as f64).sqrt() + delta;
        for (m2, &b) in v.iter().enumerate().skip(m1 + 1) {
            if (m2 as f64).sqrt() > reach * (1.0 + 1e-15) {
                break;
            }
            worst = worst.max((v[m1] - b).abs());
        }
    }
    Ok(worst)
}

/// `f_σ^+(x)`: interpolation linear in `√x` between neighbouring integers.
pub fn extend_plus(sigma: &SequenceFunction, x: f64) -> Result<f64> {
    let hi = sigma.extent();
    if !(0.0..=hi).contains(&x) {
        return Err(QhaError::OutOfRange { x, lo: 0.0, hi });
    }
    let v = sigma.values();
    let m = x.floor() as usize;
    if m + 1 >= v.len() {
        return Ok(v[v.len() - 1]);
    }
    let (sm, sm1) = ((m as f64).sqrt(), (m as f64 + 1.0).sqrt());
    Ok(v[m] + (v[m + 1] - v[m]) * (x.sqrt() - sm) / (sm1 - sm))
}

/// `f_σ(x) = f_σ^+(x^2)`, an even function on `|x| <= √(M-1)`.
pub fn extend_real(sigma: &SequenceFunction, x: f64) -> Result<f64> {
    let hi = sigma.extent().sqrt();
    if !(x.abs() <= hi) {
        return Err(QhaError::OutOfRange { x, lo: -hi, hi });
    }
    extend_plus(sigma, (x * x).min(sigma.extent()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// `f_σ^+` on `[0, M-1]`.
    HalfLine,
    /// `f_σ` on `[-√(M-1), √(M-1)]`.
    RealLine,
}

/// An extension of a sequence together with its source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedFunction {
    pub source: SequenceFunction,
    pub kind: Extension,
}

impl ExtendedFunction {
    pub fn new(source: SequenceFunction, kind: Extension) -> Self {
        Self { source, kind }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            Extension::HalfLine => extend_plus(&self.source, x),
            Extension::RealLine => extend_real(&self.source, x),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            Extension::HalfLine => (0.0, self.source.extent()),
            Extension::RealLine => {
                let r = self.source.extent().sqrt();
                (-r, r)
            }
        }
    }
}

/// `τ_L^k`: drop the first `k` entries. The result must keep at least two.
pub fn shift_left(sigma: &SequenceFunction, k: usize) -> Result<SequenceFunction> {
    if k + 2 > sigma.len() {
        return Err(QhaError::ShiftTooLarge { k, len: sigma.len() });
    }
    SequenceFunction::new(sigma.values[k..].to_vec())
}

/// `τ_R^k`: prepend `k` copies of `σ_0`.
pub fn shift_right(sigma: &SequenceFunction, k: usize) -> SequenceFunction {
    let mut values = vec![sigma.values[0]; k];
    values.extend_from_slice(&sigma.values);
    SequenceFunction { values }
}

/// `σ_n = f(√n)` for `n < len`.
pub fn sample_at_sqrt(f: impl Fn(f64) -> f64, len: usize) -> Result<SequenceFunction> {
    SequenceFunction::from_fn(len, |n| f((n as f64).sqrt()))
}

/// `σ_n = f(√n)` for a grammar expression read as a function of a real `x`
/// (`s = |x|`, `re = x`, `im = 0`).
pub fn sample_expr_at_sqrt(f: &Expr, len: usize) -> Result<SequenceFunction> {
    sample_at_sqrt(|x| f.eval(ComplexPoint { re: x, im: 0.0 }), len)
}

/// `½(√(n+1)+√(n-1))(√(n+1)+√n) Δ²σ_{n-1} + Δσ_{n-1}`, the second divided
/// difference of `f` at `√(n-1), √n, √(n+1)` when `σ_n = f(√n)`.
pub fn divided_difference(sigma: &SequenceFunction, n: usize) -> Result<f64> {
    if n == 0 || n + 1 >= sigma.len() {
        return Err(QhaError::OutOfRange { x: n as f64, lo: 1.0, hi: (sigma.len() - 2) as f64 });
    }
    let v = sigma.values();
    let (a, b, c) = (((n - 1) as f64).sqrt(), (n as f64).sqrt(), ((n + 1) as f64).sqrt());
    let d2 = v[n + 1] - 2.0 * v[n] + v[n - 1];
    Ok(0.5 * (c + a) * (c + b) * d2 + (v[n] - v[n - 1]))
}

/// One-dimensional heat kernel `κ_s(x) = s^{-1/2} e^{-πx^2/s}`.
pub fn smoothing_kernel(s: f64, x: f64) -> f64 {
    (-PI * x * x / s).exp() / s.sqrt()
}

/// Output of [`approx_in_ddelta`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityApproximant {
    /// `ν_n = (κ_s * f_σ)(√n)` wherever the smoothing support stays inside the extension.
    pub nu: SequenceFunction,
    /// Trusted indices `lo..=hi`, those with `√n ∈ [4√s, √(M-1) - 4√s]`.
    pub window: (usize, usize),
    /// `ω_σ(4√s + 2w)`, `w` the widest interpolation cell met in the window.
    pub error_bound: f64,
}

impl DensityApproximant {
    /// `max |σ_n - ν_n|` over the trusted window.
    pub fn window_error(&self, sigma: &SequenceFunction) -> f64 {
        (self.window.0..=self.window.1)
            .map(|n| (sigma.values()[n] - self.nu.values()[n]).abs())
            .fold(0.0, f64::max)
    }
}

/// Smooth `f_σ` with `κ_s` and sample the result at `√n`.
pub fn approx_in_ddelta(sigma: &SequenceFunction, s: f64) -> Result<DensityApproximant> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(QhaError::InvalidArgument(format!("bandwidth {s} must be positive")));
    }
    let half_width = 4.0 * s.sqrt();
    let top = sigma.extent().sqrt();
    let step = 0.01_f64.min(s.sqrt() / 20.0);
    let panels = (2.0 * half_width / step).ceil() as usize;
    let last = (0..sigma.len()).take_while(|&n| (n as f64).sqrt() + half_width <= top).last();
    let lo = (0..sigma.len()).find(|&n| (n as f64).sqrt() >= half_width);
    let (Some(last), Some(lo)) = (last, lo) else {
        return Err(QhaError::OutOfRange { x: half_width, lo: 0.0, hi: top / 2.0 });
    };
    if lo > last {
        return Err(QhaError::OutOfRange { x: half_width, lo: 0.0, hi: top / 2.0 });
    }
    let mut nu = Vec::with_capacity(last + 1);
    for n in 0..=last {
        let x = (n as f64).sqrt();
        let g = simpson(
            |y| smoothing_kernel(s, x - y) * extend_real(sigma, y.clamp(-top, top)).unwrap_or(0.0),
            x - half_width,
            x + half_width,
            panels,
        );
        nu.push(g);
    }
    let nu = SequenceFunction::new(nu)?;
    let reach_hi = (last as f64).sqrt() + half_width;
    let cells_hi = (reach_hi * reach_hi).ceil() as usize;
    let reach_lo = ((lo as f64).sqrt() - half_width).max(0.0);
    let first_cell = (reach_lo * reach_lo).floor() as usize;
    let widest = (first_cell..cells_hi.min(sigma.len() - 1))
        .map(|m| ((m + 1) as f64).sqrt() - (m as f64).sqrt())
        .fold(0.0, f64::max);
    let error_bound = modulus_of_continuity(sigma, half_width + 2.0 * widest)?;
    Ok(DensityApproximant { nu, window: (lo, last), error_bound })
}
