//! Structural growth classification of symbol expressions.

use serde::{Deserialize, Serialize};

use super::Expr;
use crate::error::{QhaError, Result};

/// Coarse growth class of `|a(z)|` as `|z| -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Growth {
    /// Vanishes outside a bounded disk.
    Compact,
    /// `|a| <~ poly * e^{-rate |z|^2}`.
    Decaying { rate: f64 },
    Bounded,
    /// Polynomial of the given degree.
    Growing { degree: u32 },
    Exponential,
}

impl Growth {
    pub fn is_bounded(self) -> bool {
        matches!(self, Growth::Compact | Growth::Decaying { .. } | Growth::Bounded)
    }

    pub fn is_integrable(self) -> bool {
        matches!(self, Growth::Compact | Growth::Decaying { .. })
    }

    pub fn decay_rate(self) -> f64 {
        match self {
            Growth::Decaying { rate } => rate,
            _ => 0.0,
        }
    }

    fn rank(self) -> u8 {
        match self {
            Growth::Compact => 0,
            Growth::Decaying { .. } => 1,
            Growth::Bounded => 2,
            Growth::Growing { .. } => 3,
            Growth::Exponential => 4,
        }
    }
}

fn sum(a: Growth, b: Growth) -> Growth {
    use Growth::*;
    match (a, b) {
        (Decaying { rate: r1 }, Decaying { rate: r2 }) => Decaying { rate: r1.min(r2) },
        (Growing { degree: d1 }, Growing { degree: d2 }) => Growing { degree: d1.max(d2) },
        _ => {
            if a.rank() >= b.rank() {
                a
            } else {
                b
            }
        }
    }
}

fn product(a: Growth, b: Growth) -> Growth {
    use Growth::*;
    match (a, b) {
        (Compact, _) | (_, Compact) => Compact,
        (Exponential, _) | (_, Exponential) => Exponential,
        (Decaying { rate: r1 }, Decaying { rate: r2 }) => Decaying { rate: r1 + r2 },
        (Decaying { rate }, _) | (_, Decaying { rate }) => Decaying { rate },
        (Growing { degree: d1 }, Growing { degree: d2 }) => Growing { degree: d1 + d2 },
        (Growing { degree }, Bounded) | (Bounded, Growing { degree }) => Growing { degree },
        (Bounded, Bounded) => Bounded,
    }
}

/// Polynomial of degree at most two in `(x, y)`:
/// `c + lx x + ly y + qxx x^2 + qxy x y + qyy y^2`.
#[derive(Debug, Clone, Copy, Default)]
struct Quadratic {
    c: f64,
    lx: f64,
    ly: f64,
    qxx: f64,
    qxy: f64,
    qyy: f64,
}

impl Quadratic {
    fn is_constant(&self) -> bool {
        self.lx == 0.0 && self.ly == 0.0 && self.is_affine()
    }

    fn is_affine(&self) -> bool {
        self.qxx == 0.0 && self.qxy == 0.0 && self.qyy == 0.0
    }

    fn scale(self, k: f64) -> Self {
        Quadratic {
            c: k * self.c,
            lx: k * self.lx,
            ly: k * self.ly,
            qxx: k * self.qxx,
            qxy: k * self.qxy,
            qyy: k * self.qyy,
        }
    }

    fn add(self, o: Self) -> Self {
        Quadratic {
            c: self.c + o.c,
            lx: self.lx + o.lx,
            ly: self.ly + o.ly,
            qxx: self.qxx + o.qxx,
            qxy: self.qxy + o.qxy,
            qyy: self.qyy + o.qyy,
        }
    }

    fn mul(self, o: Self) -> Option<Self> {
        if !(self.is_affine() && o.is_affine()) {
            if self.is_constant() {
                return Some(o.scale(self.c));
            }
            if o.is_constant() {
                return Some(self.scale(o.c));
            }
            return None;
        }
        Some(Quadratic {
            c: self.c * o.c,
            lx: self.c * o.lx + self.lx * o.c,
            ly: self.c * o.ly + self.ly * o.c,
            qxx: self.lx * o.lx,
            qxy: self.lx * o.ly + self.ly * o.lx,
            qyy: self.ly * o.ly,
        })
    }

    /// Largest eigenvalue of the quadratic part.
    fn top_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.qxx, 0.5 * self.qxy, self.qyy);
        0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b * b).sqrt()
    }
}

fn quadratic(e: &Expr) -> Option<Quadratic> {
    let q = match e {
        Expr::Num(v) => Quadratic { c: *v, ..Default::default() },
        Expr::Re => Quadratic { lx: 1.0, ..Default::default() },
        Expr::Im => Quadratic { ly: 1.0, ..Default::default() },
        Expr::S2 => Quadratic { qxx: 1.0, qyy: 1.0, ..Default::default() },
        Expr::Add(a, b) => quadratic(a)?.add(quadratic(b)?),
        Expr::Sub(a, b) => quadratic(a)?.add(quadratic(b)?.scale(-1.0)),
        Expr::Neg(a) => quadratic(a)?.scale(-1.0),
        Expr::Mul(a, b) => quadratic(a)?.mul(quadratic(b)?)?,
        _ => return None,
    };
    Some(q)
}

fn exp_growth(arg: &Expr) -> Growth {
    if classify(arg).is_bounded() {
        return Growth::Bounded;
    }
    match quadratic(arg) {
        Some(q) => {
            let top = q.top_eigenvalue();
            if top < 0.0 {
                Growth::Decaying { rate: -top }
            } else if q.is_constant() {
                Growth::Bounded
            } else {
                Growth::Exponential
            }
        }
        None => Growth::Exponential,
    }
}

pub(super) fn classify(e: &Expr) -> Growth {
    match e {
        Expr::Num(_) => Growth::Bounded,
        Expr::S | Expr::Re | Expr::Im => Growth::Growing { degree: 1 },
        Expr::S2 => Growth::Growing { degree: 2 },
        Expr::Ind(..) => Growth::Compact,
        Expr::Sin(_) | Expr::Cos(_) => Growth::Bounded,
        Expr::Exp(a) => exp_growth(a),
        Expr::Add(a, b) | Expr::Sub(a, b) => sum(classify(a), classify(b)),
        Expr::Mul(a, b) => product(classify(a), classify(b)),
        Expr::Neg(a) => classify(a),
    }
}

/// Smallest subtree responsible for the growth of `e`.
fn culprit(e: &Expr, tempered: bool) -> &Expr {
    let bad = |x: &Expr| {
        let g = classify(x);
        if tempered {
            g == Growth::Exponential
        } else {
            !g.is_bounded()
        }
    };
    match e {
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            if bad(a) && !matches!(e, Expr::Mul(..)) {
                return culprit(a, tempered);
            }
            if bad(b) && !matches!(e, Expr::Mul(..)) {
                return culprit(b, tempered);
            }
            e
        }
        Expr::Neg(a) => culprit(a, tempered),
        _ => e,
    }
}

pub(super) fn check(e: &Expr, allow_polynomial: bool) -> Result<()> {
    let g = classify(e);
    let ok = if allow_polynomial { g != Growth::Exponential } else { g.is_bounded() };
    if ok {
        Ok(())
    } else {
        Err(QhaError::UnboundedSymbol { subtree: culprit(e, allow_polynomial).to_string() })
    }
}
