//! Operators on the truncated monomial basis.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{QhaError, Result};
use crate::fock::TruncationSpec;

/// An N×N complex matrix in the basis `e_0, ..., e_{N-1}`.
///
/// The matrix is read as the finite-rank operator that vanishes on the
/// orthogonal complement of the retained span.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    trunc: TruncationSpec,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, trunc: TruncationSpec) -> Result<Self> {
        if entries.nrows() != trunc.dim || entries.ncols() != trunc.dim {
            return Err(QhaError::DimensionMismatch {
                expected: trunc.dim,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(QhaError::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self { entries, trunc })
    }

    pub(crate) fn from_parts(entries: DMatrix<Complex64>, trunc: TruncationSpec) -> Self {
        debug_assert_eq!(entries.nrows(), trunc.dim);
        Self { entries, trunc }
    }

    pub fn zeros(trunc: TruncationSpec) -> Self {
        Self::from_parts(DMatrix::zeros(trunc.dim, trunc.dim), trunc)
    }

    pub fn identity(trunc: TruncationSpec) -> Self {
        Self::from_parts(DMatrix::identity(trunc.dim, trunc.dim), trunc)
    }

    /// Diagonal operator; missing entries are zero, extra entries are dropped.
    pub fn diagonal(trunc: TruncationSpec, values: &[f64]) -> Self {
        let mut m = DMatrix::zeros(trunc.dim, trunc.dim);
        for (k, &v) in values.iter().take(trunc.dim).enumerate() {
            m[(k, k)] = Complex64::new(v, 0.0);
        }
        Self::from_parts(m, trunc)
    }

    /// The rank-one projection `E_m` onto `e_m`.
    pub fn projection(trunc: TruncationSpec, m: usize) -> Result<Self> {
        if m >= trunc.dim {
            return Err(QhaError::OutOfRange { x: m as f64, lo: 0.0, hi: (trunc.dim - 1) as f64 });
        }
        let mut out = Self::zeros(trunc);
        out.entries[(m, m)] = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn inner_block(&self) -> DMatrix<Complex64> {
        let k = self.trunc.inner_dim;
        self.entries.view((0, 0), (k, k)).into_owned()
    }

    pub fn diagonal_re(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.entries[(k, k)].re).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.entries.adjoint(), self.trunc)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_parts(&self.entries * &other.entries, self.trunc))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_parts(&self.entries + &other.entries, self.trunc))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self::from_parts(&self.entries - &other.entries, self.trunc))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.entries.map(|c| c * factor), self.trunc)
    }

    pub fn op_norm(&self) -> f64 {
        spectral_norm(&self.entries)
    }

    /// Operator norm of the trusted inner block.
    pub fn inner_op_norm(&self) -> f64 {
        spectral_norm(&self.inner_block())
    }

    /// `‖(self - other)|_inner‖` in operator norm.
    pub fn inner_distance(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let k = self.trunc.inner_dim;
        let diff = self.entries.view((0, 0), (k, k)) - other.entries.view((0, 0), (k, k));
        Ok(spectral_norm(&diff))
    }

    /// Largest entrywise modulus of the inner-block difference.
    pub fn inner_max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let k = self.trunc.inner_dim;
        let mut worst = 0.0_f64;
        for j in 0..k {
            for i in 0..k {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        Ok(worst)
    }

    /// Schatten-p norm of the truncation from its singular values; `p = inf` is the operator norm.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(QhaError::InvalidArgument(format!("Schatten exponent {p} < 1")));
        }
        let sv = self.entries.clone().singular_values();
        if p.is_infinite() {
            return Ok(sv.max());
        }
        Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(QhaError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

#[derive(Serialize, Deserialize)]
struct OperatorMatrixJson {
    trunc: TruncationSpec,
    /// Row-major `[re, im]` pairs.
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im]).collect())
            .collect();
        OperatorMatrixJson { trunc: self.trunc, entries: rows }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = OperatorMatrixJson::deserialize(deserializer)?;
        let n = raw.trunc.dim;
        if raw.entries.len() != n || raw.entries.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom(format!("entries must be {n}x{n}")));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = raw.entries[i][j];
            Complex64::new(re, im)
        });
        OperatorMatrix::new(m, raw.trunc).map_err(D::Error::custom)
    }
}
