//! Quantum harmonic analysis on the Bargmann–Fock space `F²(ℂ)` at desk-scale precision.
//!
//! * [`fock`]: kernels, the monomial basis and truncated Weyl operators.
//! * [`radial`]: eigenvalue sequences of radial operators and their calculus.
//! * [`lab`]: truncated-matrix convolutions, Berezin transforms and heat semigroup.
//! * [`gelfand`]: square-root-metric sequence algebra.
//! * [`verify`]: identity suites producing residual records.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod error;
pub mod fock;
pub mod gelfand;
pub mod lab;
pub mod matrix;
pub mod quadrature;
pub mod radial;
pub mod special;
pub mod symbol;
pub mod verify;

pub use error::{QhaError, Result};
pub use fock::{ComplexPoint, TruncationSpec};
pub use matrix::OperatorMatrix;
pub use quadrature::{QuadratureKind, QuadratureScheme};
pub use symbol::{parse_symbol, Expr, Growth, ParseError, RadialSymbol};
