//! The Lorentzian space ℝ^{n+3}₂ that carries sphere coordinates.
//!
//! The inner product is
//! `⟨X,Y⟩ = −X₀Y₀ + X₁Y₁ + … + X_{n+1}Y_{n+1} − X_{n+2}Y_{n+2}`
//! (0-based indices). Matrices act on row vectors, `X ↦ XT`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported base dimension.
pub const MIN_BASE_DIM: usize = 3;

/// Default relative tolerance for predicates on vectors and matrices.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point of ℝ^{n+3}₂.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LorentzVector(Vec<f64>);

impl LorentzVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < MIN_BASE_DIM + 3 {
            return Err(Error::usage(format!(
                "a Lorentz vector needs at least {} entries, got {}",
                MIN_BASE_DIM + 3,
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|e| !e.is_finite()) {
            return Err(Error::usage(format!("entry {i} is not finite")));
        }
        Ok(LorentzVector(entries))
    }

    /// Wraps entries without validation. Callers guarantee length and finiteness.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        LorentzVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        LorentzVector(vec![0.0; n + 3])
    }

    /// Standard basis vector with a 1 at 0-based position `i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n + 3];
        v[i] = 1.0;
        LorentzVector(v)
    }

    /// The distinguished lightlike vector ℘ = (1, −1, 0, …, 0).
    pub fn wp(n: usize) -> Self {
        let mut v = vec![0.0; n + 3];
        v[0] = 1.0;
        v[1] = -1.0;
        LorentzVector(v)
    }

    /// Base dimension n.
    pub fn base_dim(&self) -> usize {
        self.0.len() - 3
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn inner(&self, other: &LorentzVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::usage(format!(
                "dimension mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(inner(&self.0, &other.0))
    }

    pub fn norm_sq(&self) -> f64 {
        inner(&self.0, &self.0)
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn causal_type(&self, tol: f64) -> CausalType {
        causal_type(self, tol)
    }

    /// Row action `X ↦ XT`.
    pub fn act(&self, t: &DMatrix<f64>) -> Result<LorentzVector> {
        if t.nrows() != self.len() || t.ncols() != self.len() {
            return Err(Error::usage(format!(
                "matrix of shape {}x{} cannot act on a vector of length {}",
                t.nrows(),
                t.ncols(),
                self.len()
            )));
        }
        Ok(LorentzVector(row_times(&self.0, t)))
    }

    pub fn scale(&self, s: f64) -> LorentzVector {
        LorentzVector(self.0.iter().map(|x| x * s).collect())
    }
}

impl TryFrom<Vec<f64>> for LorentzVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        LorentzVector::new(v)
    }
}

impl From<LorentzVector> for Vec<f64> {
    fn from(v: LorentzVector) -> Self {
        v.0
    }
}

impl fmt::Debug for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("LorentzVector").field(&self.0).finish()
    }
}

impl std::ops::Index<usize> for LorentzVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: &LorentzVector) -> LorentzVector {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: &LorentzVector) -> LorentzVector {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: f64) -> LorentzVector {
        self.scale(s)
    }
}

impl Neg for &LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        self.scale(-1.0)
    }
}

/// Inner product on raw slices of equal length, signature (−,+,…,+,−).
pub fn inner(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let last = a.len() - 1;
    let mut s = -a[0] * b[0] - a[last] * b[last];
    for i in 1..last {
        s += a[i] * b[i];
    }
    s
}

/// Diagonal of the signature matrix of ℝ^{n+3}₂.
pub fn signature(n: usize) -> Vec<f64> {
    let mut g = vec![1.0; n + 3];
    g[0] = -1.0;
    g[n + 2] = -1.0;
    g
}

pub fn signature_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(signature(n)))
}

/// `x T` for a row vector `x`.
pub(crate) fn row_times(x: &[f64], t: &DMatrix<f64>) -> Vec<f64> {
    let d = x.len();
    let mut out = vec![0.0; d];
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += xi * t[(i, j)];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalType {
    Lightlike,
    Timelike,
    Spacelike,
    Zero,
}

/// Sign of `⟨X,X⟩`, with `tol` relative to the squared Euclidean norm.
pub fn causal_type(x: &LorentzVector, tol: f64) -> CausalType {
    let scale = x.euclid_norm_sq();
    if scale == 0.0 {
        return CausalType::Zero;
    }
    let q = x.norm_sq();
    if q.abs() <= tol * scale {
        CausalType::Lightlike
    } else if q < 0.0 {
        CausalType::Timelike
    } else {
        CausalType::Spacelike
    }
}

/// Base dimension of a square matrix acting on ℝ^{n+3}₂.
pub fn matrix_base_dim(t: &DMatrix<f64>) -> Result<usize> {
    if t.nrows() != t.ncols() {
        return Err(Error::usage(format!(
            "matrix is not square: {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if t.nrows() < MIN_BASE_DIM + 3 {
        return Err(Error::usage(format!(
            "matrix size {} is below the minimum {}",
            t.nrows(),
            MIN_BASE_DIM + 3
        )));
    }
    Ok(t.nrows() - 3)
}

/// Entrywise deviations `max|T G Tᵗ − G|` and `max|℘T − ℘|`, both relative
/// to `max(1, max|T|²)` and `max(1, max|T|)` respectively.
pub fn laguerre_defects(t: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = matrix_base_dim(t)?;
    let g = signature_matrix(n);
    let scale = t.amax().max(1.0);
    let gram = t * &g * t.transpose();
    let ortho = (&gram - &g).amax() / (scale * scale);
    let wp = LorentzVector::wp(n);
    let image = row_times(wp.as_slice(), t);
    let fix = image
        .iter()
        .zip(wp.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    Ok((ortho, fix))
}

/// Whether `T` preserves the inner product and fixes ℘.
pub fn is_laguerre_matrix(t: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let (ortho, fix) = laguerre_defects(t)?;
    Ok(ortho <= tol && fix <= tol)
}
