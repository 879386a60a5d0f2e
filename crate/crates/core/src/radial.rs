//! Sequence-level calculus of radial operators.
//!
//! A radial operator is diagonal in the monomial basis, so it is determined by
//! its eigenvalue sequence `λ_m`. Everything here works on finite prefixes of
//! such sequences.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::fock::ComplexPoint;
use crate::quadrature::{self, QuadratureKind, QuadratureScheme};
use crate::special::{laguerre_scaled, ln_factorial, poisson_ln_pmf, poisson_tail};
use crate::symbol::RadialSymbol;

/// Error tolerance of the order-doubling check.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
/// Relative Poisson tail mass tolerated by [`berezin_radial`].
pub const POISSON_TAIL_TOLERANCE: f64 = 1e-10;
/// Heat matrix entries below this are set to zero.
pub const HEAT_CLAMP: f64 = 1e-14;

/// Finite prefix `(λ_0, ..., λ_{M-1})` of an eigenvalue sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EigenSequence {
    values: Vec<f64>,
}

impl EigenSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(QhaError::InvalidArgument(format!("non-finite sequence entry {bad}")));
        }
        Ok(Self { values })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..len).map(f).collect())
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Self { values: vec![value; len] }
    }

    /// The eigenvalue sequence of the projection `E_j`.
    pub fn indicator(len: usize, j: usize) -> Self {
        Self { values: (0..len).map(|m| if m == j { 1.0 } else { 0.0 }).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `max_{m < window} |self_m - other_m|`.
    pub fn max_abs_diff(&self, other: &Self, window: usize) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .take(window)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    fn require(&self, min: usize) -> Result<()> {
        if self.len() < min {
            return Err(QhaError::SequenceTooShort { len: self.len(), min });
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for EigenSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        EigenSequence::new(values).map_err(serde::de::Error::custom)
    }
}

/// Which radius scaling to use inside the eigenvalue integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `a(sqrt(r / pi))`, consistent with the measure `e^{-pi|z|^2} dz`.
    #[default]
    Corrected,
    /// `a(sqrt(r))` as literally printed; only for comparison.
    Literal,
}

/// Whether the tridiagonal Laplacian rule carries the factor `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianConvention {
    #[default]
    Pi,
    Literal,
}

fn integrate_segments(
    f: &dyn Fn(f64) -> f64,
    ln_weight: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    tail_rate: f64,
    order: usize,
) -> Result<f64> {
    let legendre = quadrature::cached(QuadratureKind::GaussLegendre, order)?;
    let laguerre = quadrature::cached(QuadratureKind::GaussLaguerre, order)?;
    let mut total = 0.0;
    let mut lo = 0.0;
    for &b in breaks {
        for (r, w) in legendre.legendre_on(lo, b) {
            let v = f(r);
            if v != 0.0 {
                total += w * v * ln_weight(r).exp();
            }
        }
        lo = b;
    }
    // tail [lo, inf): r = lo + v / beta
    for (&v, &lw) in laguerre.nodes.iter().zip(&laguerre.ln_weights) {
        let r = lo + v / tail_rate;
        let fr = f(r);
        if fr != 0.0 {
            total += fr * (lw + v + ln_weight(r) - tail_rate.ln()).exp();
        }
    }
    Ok(total)
}

fn eigenvalues_at_order(
    a: &RadialSymbol,
    n: usize,
    len: usize,
    order: usize,
    norm: Normalization,
) -> Result<Vec<f64>> {
    let (radius_of, to_r): (fn(f64) -> f64, fn(f64) -> f64) = match norm {
        Normalization::Corrected => (|r| (r / PI).sqrt(), |s| PI * s * s),
        Normalization::Literal => (|r| r.sqrt(), |s| s * s),
    };
    let rate_scale = match norm {
        Normalization::Corrected => 1.0 / PI,
        Normalization::Literal => 1.0,
    };
    let breaks: Vec<f64> = a.breakpoints().into_iter().map(to_r).collect();
    let beta = 1.0 + a.decay_rate() * rate_scale;
    let f = |r: f64| a.eval(radius_of(r));
    (0..len)
        .into_par_iter()
        .map(|m| {
            let k = m + n - 1;
            let ln_fact = ln_factorial(k);
            let ln_weight = |r: f64| {
                if r == 0.0 {
                    if k == 0 {
                        -ln_fact
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    k as f64 * r.ln() - r - ln_fact
                }
            };
            integrate_segments(&f, &ln_weight, &breaks, beta, order)
        })
        .collect()
}

/// `γ_{n,a}(m) = (1/(n-1+m)!) ∫_0^∞ a(sqrt(r/π)) r^{m+n-1} e^{-r} dr` for `m < len`.
///
/// The integral is split at indicator radii. Finite pieces use Gauss–Legendre
/// and the tail uses the Laguerre rule `q`, scaled by the symbol's Gaussian rate.
/// The rule is checked against twice its order and the finer result is returned.
pub fn toeplitz_eigenvalues(
    a: &RadialSymbol,
    n: usize,
    len: usize,
    q: &QuadratureScheme,
) -> Result<EigenSequence> {
    toeplitz_eigenvalues_with(a, n, len, q, Normalization::Corrected)
}

pub fn toeplitz_eigenvalues_with(
    a: &RadialSymbol,
    n: usize,
    len: usize,
    q: &QuadratureScheme,
    norm: Normalization,
) -> Result<EigenSequence> {
    if q.kind != QuadratureKind::GaussLaguerre {
        return Err(QhaError::InvalidArgument("eigenvalue integrals need a Gauss–Laguerre rule".into()));
    }
    if n == 0 {
        return Err(QhaError::InvalidArgument("dimension n must be at least 1".into()));
    }
    let coarse = eigenvalues_at_order(a, n, len, q.order, norm)?;
    let fine = eigenvalues_at_order(a, n, len, 2 * q.order, norm)?;
    let estimate = coarse.iter().zip(&fine).fold(0.0_f64, |acc, (c, f)| acc.max((c - f).abs()));
    if !(estimate <= QUADRATURE_TOLERANCE) {
        return Err(QhaError::QuadratureOrderTooLow { estimate, tolerance: QUADRATURE_TOLERANCE });
    }
    EigenSequence::new(fine)
}

/// Tridiagonal operator Laplacian on eigenvalue sequences:
/// `μ_m = π[(m+1)λ_{m+1} - (2m+1)λ_m + mλ_{m-1}]` for `m <= M-2`.
pub fn laplacian_sequence(lambda: &EigenSequence) -> Result<EigenSequence> {
    laplacian_sequence_with(lambda, LaplacianConvention::Pi)
}

pub fn laplacian_sequence_with(lambda: &EigenSequence, conv: LaplacianConvention) -> Result<EigenSequence> {
    lambda.require(3)?;
    let l = lambda.values();
    let scale = match conv {
        LaplacianConvention::Pi => PI,
        LaplacianConvention::Literal => 1.0,
    };
    let mu = (0..l.len() - 1)
        .map(|m| {
            let mf = m as f64;
            let below = if m == 0 { 0.0 } else { mf * l[m - 1] };
            scale * ((mf + 1.0) * l[m + 1] - (2.0 * mf + 1.0) * l[m] + below)
        })
        .collect();
    EigenSequence::new(mu)
}

/// `B(S)(z) = Σ λ_m e^{-π|z|^2} (π|z|^2)^m / m!`, the Poisson(π|z|^2) mean of `λ`.
pub fn berezin_radial(lambda: &EigenSequence, z: ComplexPoint) -> Result<f64> {
    let x = PI * z.norm_sqr();
    let len = lambda.len();
    let sup = lambda.sup_norm();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let tail = poisson_tail(len, x);
    let bound = POISSON_TAIL_TOLERANCE;
    if len == 0 || tail > bound {
        return Err(QhaError::TailTooHeavy { tail, len, bound });
    }
    Ok(lambda
        .values()
        .iter()
        .enumerate()
        .map(|(m, l)| l * poisson_ln_pmf(m, x).exp())
        .sum())
}

/// `ΔB(S)(z)` through the tridiagonal rule: `berezin_radial(laplacian_sequence(λ), z)`.
pub fn laplacian_of_berezin_radial(lambda: &EigenSequence, z: ComplexPoint) -> Result<f64> {
    berezin_radial(&laplacian_sequence(lambda)?, z)
}

/// `h_{km}(t) = ∫ |<e_k, W_z e_m>|^2 φ_t(z) dz`, the heat semigroup on diagonals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatKernelMatrix {
    #[serde(serialize_with = "serialize_rows")]
    h: DMatrix<f64>,
    t: f64,
}

fn serialize_rows<S: serde::Serializer>(h: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = (0..h.nrows()).map(|i| h.row(i).iter().copied().collect()).collect();
    rows.serialize(s)
}

impl HeatKernelMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.h.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.h.nrows() == 0
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.h.row(k).sum()).collect()
    }

    pub fn apply(&self, lambda: &EigenSequence) -> Result<EigenSequence> {
        if lambda.len() != self.len() {
            return Err(QhaError::DimensionMismatch { expected: self.len(), got: lambda.len() });
        }
        let out = (0..self.len())
            .map(|k| self.h.row(k).iter().zip(lambda.values()).map(|(h, l)| h * l).sum())
            .collect();
        EigenSequence::new(out)
    }
}

/// Heat kernel matrix of size `len × len`.
///
/// With `x = π|z|^2`, `|D_{km}|^2 = (lo!/hi!) x^{hi-lo} L_lo^{(hi-lo)}(x)^2 e^{-x}`, so
/// `h_{km} = (1/(t+1)) Σ_i w_i P_{km}(v_i / β)` with `β = 1 + 1/t` on a Laguerre rule
/// of order above `len`, which is exact.
pub fn heat_kernel_matrix(t: f64, len: usize) -> Result<HeatKernelMatrix> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(QhaError::InvalidArgument(format!("heat time {t} must be positive")));
    }
    let rule = quadrature::cached(QuadratureKind::GaussLaguerre, (len + 8).max(96))?;
    let beta = 1.0 + 1.0 / t;
    let prefactor_ln = -(t + 1.0).ln();
    // one band (fixed offset d = hi - lo) per task; node order inside a band is fixed
    let bands: Vec<Vec<f64>> = (0..len)
        .into_par_iter()
        .map(|d| {
            let count = len - d;
            let mut acc = vec![0.0; count];
            let mut lag = Vec::with_capacity(count);
            for (&v, &lw) in rule.nodes.iter().zip(&rule.ln_weights) {
                let x = v / beta;
                laguerre_scaled(count, d as f64, x, &mut lag);
                for (lo, l) in lag.iter().enumerate() {
                    if l.mantissa == 0.0 {
                        continue;
                    }
                    let ln_p = ln_factorial(lo) - ln_factorial(lo + d) + d as f64 * x.ln() + 2.0 * l.ln_abs();
                    acc[lo] += (lw + prefactor_ln + ln_p).exp();
                }
            }
            acc
        })
        .collect();
    let mut h = DMatrix::zeros(len, len);
    for (d, band) in bands.iter().enumerate() {
        for (lo, &v) in band.iter().enumerate() {
            let v = if v < HEAT_CLAMP { 0.0 } else { v };
            h[(lo + d, lo)] = v;
            h[(lo, lo + d)] = v;
        }
    }
    Ok(HeatKernelMatrix { h, t })
}

/// `φ_t * diag(λ)` as a sequence: `h(t) λ`.
pub fn heat_radial(lambda: &EigenSequence, t: f64) -> Result<EigenSequence> {
    heat_kernel_matrix(t, lambda.len())?.apply(lambda)
}

/// `max_{1 <= m <= M-2} |m Δ² x_{m-1}|`, a finite-window proxy for membership in `d_Δ`.
pub fn d_delta_defect(x: &EigenSequence) -> Result<f64> {
    x.require(3)?;
    let v = x.values();
    Ok((1..v.len() - 1).fold(0.0_f64, |acc, m| {
        acc.max((m as f64 * (v[m + 1] - 2.0 * v[m] + v[m - 1])).abs())
    }))
}

/// Heuristic growth verdict on a finite window: the sequence looks unbounded when
/// its upper half exceeds `1.5 ×` the lower half's sup plus one.
pub fn window_looks_bounded(values: &[f64]) -> bool {
    let half = values.len() / 2;
    let sup = |s: &[f64]| s.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    sup(&values[half..]) <= 1.5 * sup(&values[..half]) + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laguerre96() -> QuadratureScheme {
        QuadratureScheme::gauss_laguerre(96).unwrap()
    }

    #[test]
    fn constant_symbol_has_unit_eigenvalues() {
        let a = RadialSymbol::parse("1", false).unwrap();
        for n in [1, 2, 3] {
            let g = toeplitz_eigenvalues(&a, n, 30, &laguerre96()).unwrap();
            assert!(g.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn quadratic_symbol_gamma_oracle() {
        let a = RadialSymbol::parse("s^2", true).unwrap();
        let g = toeplitz_eigenvalues(&a, 1, 40, &laguerre96()).unwrap();
        for (m, v) in g.values().iter().enumerate() {
            assert!((v - (m as f64 + 1.0) / PI).abs() < 1e-11, "m={m}");
        }
        let lit = toeplitz_eigenvalues_with(&a, 1, 5, &laguerre96(), Normalization::Literal).unwrap();
        assert!((lit.values()[2] - 3.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_laguerre_rule() {
        let a = RadialSymbol::parse("1", false).unwrap();
        let q = QuadratureScheme::gauss_legendre(10).unwrap();
        assert!(toeplitz_eigenvalues(&a, 1, 3, &q).is_err());
    }

    #[test]
    fn laplacian_sequence_examples() {
        let lin = EigenSequence::from_fn(10, |m| m as f64).unwrap();
        let mu = laplacian_sequence(&lin).unwrap();
        assert_eq!(mu.len(), 9);
        assert!(mu.values().iter().all(|v| (v - PI).abs() < 1e-12));
        let j = 4;
        let e = laplacian_sequence(&EigenSequence::indicator(10, j)).unwrap();
        assert!((e.values()[j - 1] - PI * j as f64).abs() < 1e-12);
        assert!((e.values()[j] + PI * (2 * j + 1) as f64).abs() < 1e-12);
        assert!((e.values()[j + 1] - PI * (j + 1) as f64).abs() < 1e-12);
        assert!(matches!(
            laplacian_sequence(&EigenSequence::constant(2, 1.0)),
            Err(QhaError::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn berezin_radial_examples() {
        let z = ComplexPoint::new(0.6, 0.8).unwrap();
        let ones = EigenSequence::constant(60, 1.0);
        assert!((berezin_radial(&ones, z).unwrap() - 1.0).abs() < 1e-13);
        let e0 = EigenSequence::indicator(60, 0);
        assert!((berezin_radial(&e0, z).unwrap() - (-PI).exp()).abs() < 1e-15);
        let lap = laplacian_of_berezin_radial(&e0, z).unwrap();
        assert!((lap - PI * (PI - 1.0) * (-PI).exp()).abs() < 1e-13);
        let far = ComplexPoint::new(5.0, 0.0).unwrap();
        assert!(matches!(berezin_radial(&ones, far), Err(QhaError::TailTooHeavy { .. })));
    }

    #[test]
    fn heat_matrix_is_stochastic_on_the_window() {
        let h = heat_kernel_matrix(1.0, 96).unwrap();
        for (k, s) in h.row_sums().iter().enumerate().take(24) {
            assert!((s - 1.0).abs() < 1e-8, "row {k}: {s}");
        }
        assert!(h.matrix().iter().all(|&v| v >= 0.0));
        // t = 1, E_0: <e_k, (φ*Φ) e_k> = γ of e^{-π s^2} = 2^{-(k+1)}
        let out = h.apply(&EigenSequence::indicator(96, 0)).unwrap();
        for k in 0..20 {
            assert!((out.values()[k] - 0.5f64.powi(k as i32 + 1)).abs() < 1e-13);
        }
    }

    #[test]
    fn defect_examples() {
        let sin_m = EigenSequence::from_fn(400, |m| (m as f64).sin()).unwrap();
        let sin_sqrt = EigenSequence::from_fn(400, |m| (m as f64).sqrt().sin()).unwrap();
        assert!(d_delta_defect(&sin_m).unwrap() > 50.0);
        assert!(d_delta_defect(&sin_sqrt).unwrap() < 1.5);
        assert_eq!(d_delta_defect(&EigenSequence::constant(5, 2.0)).unwrap(), 0.0);
    }
}
