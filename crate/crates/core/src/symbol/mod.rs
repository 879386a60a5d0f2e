//! Expression language for Toeplitz symbols.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | number | 'pi' | 's' | 's^2' | 're' | 'im'
//!         | 'exp(' expr ')' | 'sin(' expr ')' | 'cos(' expr ')'
//!         | 'ind(' number ',' number ')' | '(' expr ')'
//! ```
//!
//! `s` is the radial variable `|z|`, `re`/`im` are the Cartesian coordinates
//! of `z`, and `ind(a, b)` is the indicator of `a <= |z| < b`.

mod calculus;
mod growth;
mod parse;

use std::fmt;

use num_complex::Complex64;

use crate::error::{QhaError, Result};
use crate::fock::ComplexPoint;

pub use growth::Growth;
pub use parse::{parse_symbol, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// `|z|`
    S,
    /// `|z|^2`
    S2,
    Re,
    Im,
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// Indicator of `lo <= |z| < hi`.
    Ind(f64, f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

// Small constructors keep symbolic code readable.
impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }
    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }
    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }
    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// Gaussian `scale * exp(-rate * s^2)`.
    pub fn gaussian(scale: f64, rate: f64) -> Expr {
        Expr::mul(Expr::num(scale), Expr::exp(Expr::mul(Expr::num(-rate), Expr::S2)))
    }

    /// Heat kernel `phi_t = t^{-1} exp(-(pi/t) s^2)` as an expression.
    pub fn heat_kernel(t: f64) -> Expr {
        Expr::gaussian(1.0 / t, std::f64::consts::PI / t)
    }

    /// `d/dt phi_t = ((pi/t^2) s^2 - 1/t) t^{-1} exp(-(pi/t) s^2)`.
    pub fn heat_kernel_dt(t: f64) -> Expr {
        let poly = Expr::sub(
            Expr::mul(Expr::num(std::f64::consts::PI / (t * t)), Expr::S2),
            Expr::num(1.0 / t),
        );
        Expr::mul(poly, Expr::heat_kernel(t))
    }

    pub fn eval(&self, z: ComplexPoint) -> f64 {
        self.eval_parts(z.norm(), z.re, z.im)
    }

    fn eval_parts(&self, s: f64, x: f64, y: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::S => s,
            Expr::S2 => s * s,
            Expr::Re => x,
            Expr::Im => y,
            Expr::Exp(a) => a.eval_parts(s, x, y).exp(),
            Expr::Sin(a) => a.eval_parts(s, x, y).sin(),
            Expr::Cos(a) => a.eval_parts(s, x, y).cos(),
            Expr::Ind(lo, hi) => {
                if *lo <= s && s < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Expr::Add(a, b) => a.eval_parts(s, x, y) + b.eval_parts(s, x, y),
            Expr::Sub(a, b) => a.eval_parts(s, x, y) - b.eval_parts(s, x, y),
            Expr::Mul(a, b) => {
                let l = a.eval_parts(s, x, y);
                // 0 * (huge polynomial) stays 0 outside an indicator's support
                if l == 0.0 {
                    0.0
                } else {
                    l * b.eval_parts(s, x, y)
                }
            }
            Expr::Neg(a) => -a.eval_parts(s, x, y),
        }
    }

    /// Evaluation at radius `s` along the positive real axis.
    pub fn eval_radial(&self, s: f64) -> f64 {
        self.eval_parts(s, s, 0.0)
    }

    pub fn is_radial(&self) -> bool {
        !self.any(&|e| matches!(e, Expr::Re | Expr::Im))
    }

    pub fn has_indicator(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Ind(..)))
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Neg(a) => a.any(pred),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.any(pred) || b.any(pred),
            _ => false,
        }
    }

    /// Sorted, deduplicated positive finite indicator endpoints (radii).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Ind(lo, hi) => {
                for &v in &[*lo, *hi] {
                    if v > 0.0 && v.is_finite() {
                        out.push(v);
                    }
                }
            }
            Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Neg(a) => a.collect_breakpoints(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_breakpoints(out);
                b.collect_breakpoints(out);
            }
            _ => {}
        }
    }

    pub fn growth(&self) -> Growth {
        growth::classify(self)
    }

    /// Check the structural boundedness rules; the error names the offending subtree.
    pub fn check_bounded(&self) -> Result<()> {
        growth::check(self, false)
    }

    /// Like [`Expr::check_bounded`] but admits polynomial growth.
    pub fn check_tempered(&self) -> Result<()> {
        growth::check(self, true)
    }

    /// Symbolic `∂∂̄`, the Laplacian convention of the heat equation
    /// `Δu = π ∂_t u` solved by `φ_t`.
    pub fn laplacian(&self) -> Result<Expr> {
        calculus::laplacian(self)
    }

    pub fn simplify(&self) -> Expr {
        calculus::simplify(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) if *v != 0.0 && v.is_finite() && !(1e-4..1e16).contains(&v.abs()) => write!(f, "{v:e}")?,
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::S => f.write_str("s")?,
            Expr::S2 => f.write_str("s^2")?,
            Expr::Re => f.write_str("re")?,
            Expr::Im => f.write_str("im")?,
            Expr::Exp(a) => write!(f, "exp({a})")?,
            Expr::Sin(a) => write!(f, "sin({a})")?,
            Expr::Cos(a) => write!(f, "cos({a})")?,
            Expr::Ind(lo, hi) => write!(f, "ind({lo}, {hi})")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                // "-1" would read back as a literal
                let min = if matches!(**a, Expr::Num(_)) { 5 } else { 3 };
                a.fmt_prec(f, min)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A bounded (or, when explicitly allowed, polynomially growing) radial symbol `a(|z|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSymbol {
    expr: Expr,
    growth: Growth,
}

impl RadialSymbol {
    pub fn new(expr: Expr) -> Result<Self> {
        Self::build(expr, false)
    }

    /// Admit polynomial growth; eigenvalue integrals against `e^{-r}` still converge.
    pub fn new_allow_unbounded(expr: Expr) -> Result<Self> {
        Self::build(expr, true)
    }

    pub fn parse(text: &str, allow_unbounded: bool) -> Result<Self> {
        Self::build(parse_symbol(text)?, allow_unbounded)
    }

    fn build(expr: Expr, allow_unbounded: bool) -> Result<Self> {
        if !expr.is_radial() {
            return Err(QhaError::InvalidArgument(format!("`{expr}` depends on re/im, not only on |z|")));
        }
        growth::check(&expr, allow_unbounded)?;
        let growth = expr.growth();
        Ok(Self { expr, growth })
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.expr.eval_radial(s)
    }

    pub fn eval_at(&self, z: ComplexPoint) -> Complex64 {
        Complex64::new(self.expr.eval(z), 0.0)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    /// Gaussian decay rate `c` with `|a(s)| <~ e^{-c s^2}`, zero if none.
    pub fn decay_rate(&self) -> f64 {
        self.growth.decay_rate()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.expr.breakpoints()
    }
}

impl fmt::Display for RadialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}
