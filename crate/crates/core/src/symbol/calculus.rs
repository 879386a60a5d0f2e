//! Symbolic derivatives and the Laplacian `∂∂̄ = (∂x² + ∂y²)/4`.

use super::Expr;
use crate::error::{QhaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    X,
    Y,
    /// `u = s^2`, for radial expressions.
    U,
}

fn derivative(e: &Expr, v: Var) -> Result<Expr> {
    let d = match e {
        Expr::Num(_) => Expr::Num(0.0),
        Expr::S => {
            return Err(QhaError::Unsupported(
                "bare `s` is not differentiable at the origin; write it through s^2".into(),
            ))
        }
        Expr::S2 => match v {
            Var::X => Expr::mul(Expr::Num(2.0), Expr::Re),
            Var::Y => Expr::mul(Expr::Num(2.0), Expr::Im),
            Var::U => Expr::Num(1.0),
        },
        Expr::Re | Expr::Im => {
            let hit = matches!((e, v), (Expr::Re, Var::X) | (Expr::Im, Var::Y));
            if v == Var::U {
                return Err(QhaError::Unsupported("re/im in a radial derivative".into()));
            }
            Expr::Num(if hit { 1.0 } else { 0.0 })
        }
        Expr::Exp(a) => Expr::mul(e.clone(), derivative(a, v)?),
        Expr::Sin(a) => Expr::mul(Expr::Cos(a.clone()), derivative(a, v)?),
        Expr::Cos(a) => Expr::neg(Expr::mul(Expr::Sin(a.clone()), derivative(a, v)?)),
        Expr::Ind(..) => {
            return Err(QhaError::Unsupported("the Laplacian of an indicator is a distribution".into()))
        }
        Expr::Add(a, b) => Expr::add(derivative(a, v)?, derivative(b, v)?),
        Expr::Sub(a, b) => Expr::sub(derivative(a, v)?, derivative(b, v)?),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(derivative(a, v)?, (**b).clone()),
            Expr::mul((**a).clone(), derivative(b, v)?),
        ),
        Expr::Neg(a) => Expr::neg(derivative(a, v)?),
    };
    Ok(simplify(&d))
}

pub(super) fn laplacian(e: &Expr) -> Result<Expr> {
    let out = if e.is_radial() {
        // for a(u), u = |z|^2: ∂∂̄ a = a' + u a''
        let du = derivative(e, Var::U)?;
        let duu = derivative(&du, Var::U)?;
        Expr::add(du, Expr::mul(Expr::S2, duu))
    } else {
        let xx = derivative(&derivative(e, Var::X)?, Var::X)?;
        let yy = derivative(&derivative(e, Var::Y)?, Var::Y)?;
        Expr::mul(Expr::Num(0.25), Expr::add(xx, yy))
    };
    Ok(simplify(&out))
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

/// Constant folding plus the identities `0 + x`, `1 * x`, `0 * x`.
pub(super) fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Exp(a) => Expr::exp(simplify(a)),
        Expr::Sin(a) => Expr::sin(simplify(a)),
        Expr::Cos(a) => Expr::cos(simplify(a)),
        Expr::Neg(a) => match simplify(a) {
            Expr::Num(v) => Expr::Num(-v),
            Expr::Neg(inner) => *inner,
            other => Expr::neg(other),
        },
        Expr::Add(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
                _ if is_num(&a, 0.0) => b,
                _ if is_num(&b, 0.0) => a,
                _ => Expr::add(a, b),
            }
        }
        Expr::Sub(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
                _ if is_num(&b, 0.0) => a,
                _ if is_num(&a, 0.0) => simplify(&Expr::neg(b)),
                _ => Expr::sub(a, b),
            }
        }
        Expr::Mul(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
                _ if is_num(&a, 0.0) || is_num(&b, 0.0) => Expr::Num(0.0),
                _ if is_num(&a, 1.0) => b,
                _ if is_num(&b, 1.0) => a,
                // gather numeric factors on the left
                (_, Expr::Num(_)) => simplify(&Expr::mul(b, a)),
                (Expr::Num(x), Expr::Mul(l, r)) if matches!(**l, Expr::Num(_)) => {
                    let Expr::Num(y) = **l else { unreachable!() };
                    simplify(&Expr::mul(Expr::Num(x * y), (**r).clone()))
                }
                _ => Expr::mul(a, b),
            }
        }
        other => other.clone(),
    }
}
