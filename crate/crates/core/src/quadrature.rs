//! Gauss rules built from the Jacobi matrix of each orthogonal family.
//!
//! Nodes come from the symmetric tridiagonal eigenproblem and are then
//! polished by Newton iteration on the orthonormal recurrence. Weights are
//! Christoffel numbers `1 / sum_k q_k(x)^2` evaluated in the log domain, so
//! the tiny weights at the far end of high-order Laguerre and Hermite rules
//! keep full relative precision. Integrands that are not polynomial against
//! the weight can then use `exp(ln_weight + x)` safely.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    /// `int_0^inf f(x) e^{-x} dx`
    GaussLaguerre,
    /// `int_R f(x) e^{-x^2} dx`, tensorized over the plane.
    GaussHermite2d,
    /// `int_{-1}^{1} f(x) dx`
    GaussLegendre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    pub kind: QuadratureKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Natural log of each weight; finite even where `weights` underflows.
    pub ln_weights: Vec<f64>,
}

impl QuadratureScheme {
    pub fn gauss_laguerre(order: usize) -> Result<Self> {
        check_order(order)?;
        let (nodes, ln_weights) = gauss_rule(order, |k| 2.0 * k as f64 + 1.0, |k| (k * k) as f64, 1.0);
        Ok(Self::assemble(QuadratureKind::GaussLaguerre, nodes, ln_weights))
    }

    /// One-dimensional Hermite rule; use [`QuadratureScheme::tensor`] for the plane.
    pub fn gauss_hermite_2d(order: usize) -> Result<Self> {
        check_order(order)?;
        let (nodes, ln_weights) =
            gauss_rule(order, |_| 0.0, |k| k as f64 / 2.0, std::f64::consts::PI.sqrt());
        Ok(Self::assemble(QuadratureKind::GaussHermite2d, nodes, ln_weights))
    }

    pub fn gauss_legendre(order: usize) -> Result<Self> {
        check_order(order)?;
        let (nodes, ln_weights) = gauss_rule(
            order,
            |_| 0.0,
            |k| {
                let k = k as f64;
                k * k / (4.0 * k * k - 1.0)
            },
            2.0,
        );
        Ok(Self::assemble(QuadratureKind::GaussLegendre, nodes, ln_weights))
    }

    /// Same family at a different order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        match self.kind {
            QuadratureKind::GaussLaguerre => Self::gauss_laguerre(order),
            QuadratureKind::GaussHermite2d => Self::gauss_hermite_2d(order),
            QuadratureKind::GaussLegendre => Self::gauss_legendre(order),
        }
    }

    fn assemble(kind: QuadratureKind, nodes: Vec<f64>, ln_weights: Vec<f64>) -> Self {
        let weights = ln_weights.iter().map(|lw| lw.exp()).collect();
        Self { kind, order: nodes.len(), nodes, weights, ln_weights }
    }

    /// Highest polynomial degree integrated exactly against the weight.
    pub fn exactness_degree(&self) -> usize {
        2 * self.order - 1
    }

    /// Tensor-product nodes `((x, y), w)` of a planar Hermite rule.
    pub fn tensor(&self) -> impl Iterator<Item = ((f64, f64), f64)> + '_ {
        self.nodes.iter().zip(&self.weights).flat_map(move |(&x, &wx)| {
            self.nodes.iter().zip(&self.weights).map(move |(&y, &wy)| ((x, y), wx * wy))
        })
    }

    /// Gauss–Legendre on `[a, b]`: `(node, weight)` pairs.
    pub fn legendre_on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        debug_assert_eq!(self.kind, QuadratureKind::GaussLegendre);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// `w_i e^{x_i}` for a Laguerre rule, i.e. the weights for `int_0^inf f(x) dx`.
    pub fn laguerre_unweighted(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        debug_assert_eq!(self.kind, QuadratureKind::GaussLaguerre);
        self.nodes.iter().zip(&self.ln_weights).map(|(&x, &lw)| (x, (lw + x).exp()))
    }
}

/// Shared, lazily built rules; building a high-order rule costs a dense eigenproblem.
pub(crate) fn cached(kind: QuadratureKind, order: usize) -> Result<Arc<QuadratureScheme>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(QuadratureKind, usize), Arc<QuadratureScheme>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&(kind, order)) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(match kind {
        QuadratureKind::GaussLaguerre => QuadratureScheme::gauss_laguerre(order)?,
        QuadratureKind::GaussHermite2d => QuadratureScheme::gauss_hermite_2d(order)?,
        QuadratureKind::GaussLegendre => QuadratureScheme::gauss_legendre(order)?,
    });
    cache.lock().unwrap().insert((kind, order), rule.clone());
    Ok(rule)
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > 2048 {
        return Err(QhaError::InvalidArgument(format!("quadrature order {order} not in 1..=2048")));
    }
    Ok(())
}

const RESCALE: f64 = 1e120;

/// Orthonormal recurrence at `x`: returns `(q_n, q_n')` up to a common
/// positive factor, and `ln sum_{k<n} q_k^2`.
fn recurrence(
    n: usize,
    x: f64,
    a: &impl Fn(usize) -> f64,
    sqrt_b: &[f64],
    mu0: f64,
) -> (f64, f64, f64) {
    let mut q_prev = 0.0_f64;
    let mut q = 1.0 / mu0.sqrt();
    let mut dq_prev = 0.0_f64;
    let mut dq = 0.0_f64;
    let mut sum = 0.0_f64;
    let mut ln_scale = 0.0_f64;
    for k in 0..n {
        sum += q * q;
        let next = ((x - a(k)) * q - sqrt_b[k] * q_prev) / sqrt_b[k + 1];
        let dnext = ((x - a(k)) * dq + q - sqrt_b[k] * dq_prev) / sqrt_b[k + 1];
        q_prev = q;
        q = next;
        dq_prev = dq;
        dq = dnext;
        if q.abs() > RESCALE || dq.abs() > RESCALE {
            q /= RESCALE;
            q_prev /= RESCALE;
            dq /= RESCALE;
            dq_prev /= RESCALE;
            sum /= RESCALE * RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (q, dq, sum.ln() + 2.0 * ln_scale)
}

/// Nodes and log-weights of the `n`-point Gauss rule for the monic
/// recurrence `p_{k+1} = (x - a_k) p_k - b_k p_{k-1}` with total mass `mu0`.
fn gauss_rule(
    n: usize,
    a: impl Fn(usize) -> f64,
    b: impl Fn(usize) -> f64,
    mu0: f64,
) -> (Vec<f64>, Vec<f64>) {
    let sqrt_b: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { b(k).sqrt() }).collect();
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jacobi[(k, k)] = a(k);
        if k + 1 < n {
            jacobi[(k, k + 1)] = sqrt_b[k + 1];
            jacobi[(k + 1, k)] = sqrt_b[k + 1];
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut ln_weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (q, dq, _) = recurrence(n, *x, &a, &sqrt_b, mu0);
            if dq == 0.0 {
                break;
            }
            let step = q / dq;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, _, ln_sum) = recurrence(n, *x, &a, &sqrt_b, mu0);
        ln_weights.push(-ln_sum);
    }
    (nodes, ln_weights)
}

/// Composite Simpson rule with `panels` subintervals (rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(2) + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_factorial;

    #[test]
    fn laguerre_integrates_monomials() {
        let q = QuadratureScheme::gauss_laguerre(96).unwrap();
        // int x^k e^{-x} = k!, compared in relative terms
        for k in [0usize, 1, 5, 40, 120, 191] {
            let approx: f64 = q
                .nodes
                .iter()
                .zip(&q.ln_weights)
                .map(|(&x, &lw)| (lw + k as f64 * x.ln() - ln_factorial(k)).exp())
                .sum();
            assert!((approx - 1.0).abs() < 1e-12, "k={k}: {approx}");
        }
        assert!(q.weights.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn high_order_laguerre_weights_stay_finite_in_log() {
        let q = QuadratureScheme::gauss_laguerre(192).unwrap();
        assert!(q.ln_weights.iter().all(|lw| lw.is_finite()));
        let total: f64 = q.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        // unweighted form integrates e^{-2x} = 1/2
        let half: f64 = q.laguerre_unweighted().map(|(x, w)| w * (-2.0 * x).exp()).sum();
        assert!((half - 0.5).abs() < 1e-13);
    }

    #[test]
    fn hermite_integrates_even_moments() {
        let q = QuadratureScheme::gauss_hermite_2d(64).unwrap();
        // int x^{2k} e^{-x^2} = Gamma(k + 1/2)
        let mut gamma_half = std::f64::consts::PI.sqrt();
        for k in 0..=63usize {
            let approx: f64 =
                q.nodes.iter().zip(&q.weights).map(|(&x, &w)| w * x.powi(2 * k as i32)).sum();
            assert!(((approx - gamma_half) / gamma_half).abs() < 1e-12, "k={k}");
            gamma_half *= k as f64 + 0.5;
        }
        let odd: f64 = q.nodes.iter().zip(&q.weights).map(|(&x, &w)| w * x.powi(7)).sum();
        assert!(odd.abs() < 1e-12);
    }

    #[test]
    fn legendre_on_interval() {
        let q = QuadratureScheme::gauss_legendre(20).unwrap();
        let v: f64 = q.legendre_on(0.0, 2.0).map(|(x, w)| w * x.powi(39)).sum();
        let exact = 2f64.powi(40) / 40.0;
        assert!(((v - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - x, 0.0, 2.0, 4);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_order() {
        assert!(QuadratureScheme::gauss_laguerre(0).is_err());
    }
}
