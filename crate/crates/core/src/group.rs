//! The Laguerre group: matrices of O(n+1,2) fixing ℘, acting on row vectors.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{self, matrix_base_dim};
use crate::spheres::{self, ContactElement, ProjectivePoint};

/// Membership tolerance used when wrapping a matrix.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Tolerance on orthogonality of the linear part of an isometry.
pub const ORTHOGONAL_TOL: f64 = 1e-10;

/// A Laguerre transformation, stored as its (n+3)×(n+3) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreTransform {
    matrix: DMatrix<f64>,
}

impl LaguerreTransform {
    /// Wraps a matrix after checking group membership and `w² = 1 + |v|²`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_tol(matrix, MEMBERSHIP_TOL)
    }

    pub fn with_tol(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = matrix_base_dim(&matrix)?;
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidElement("matrix has non-finite entries".into()));
        }
        let (ortho, fix) = lorentz::laguerre_defects(&matrix)?;
        if ortho > tol {
            return Err(Error::InvalidElement(format!(
                "matrix does not preserve the inner product (defect {ortho:e})"
            )));
        }
        if fix > tol {
            return Err(Error::InvalidElement(format!(
                "matrix does not fix ℘ (defect {fix:e})"
            )));
        }
        let last = n + 2;
        let w = matrix[(last, last)];
        let v2: f64 = (2..n + 2).map(|j| matrix[(last, j)].powi(2)).sum();
        let scale = w.abs().max(1.0);
        if (w * w - 1.0 - v2).abs() > tol * scale * scale {
            return Err(Error::InvalidElement(format!(
                "w² − 1 − |v|² = {:e}",
                w * w - 1.0 - v2
            )));
        }
        Ok(LaguerreTransform { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        LaguerreTransform { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LaguerreTransform {
            matrix: DMatrix::identity(n + 3, n + 3),
        }
    }

    pub fn base_dim(&self) -> usize {
        self.matrix.nrows() - 3
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `self · other`: apply `self` first under the row action.
    pub fn then(&self, other: &LaguerreTransform) -> Result<LaguerreTransform> {
        if self.base_dim() != other.base_dim() {
            return Err(Error::usage("transforms act on different dimensions"));
        }
        Ok(LaguerreTransform {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `T⁻¹ = G Tᵗ G`.
    pub fn inverse(&self) -> LaguerreTransform {
        let g = lorentz::signature_matrix(self.base_dim());
        LaguerreTransform {
            matrix: &g * self.matrix.transpose() * &g,
        }
    }

    /// Whether the block scalar `w` is positive, i.e. the transform keeps
    /// the plane member of every Lie line finite.
    pub fn is_orthochronous(&self) -> bool {
        let last = self.base_dim() + 2;
        self.matrix[(last, last)] > 0.0
    }
}

/// Generator families of the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    /// The Euclidean motion `x ↦ xA + a`.
    Isometry {
        #[serde(rename = "A")]
        linear: Vec<Vec<f64>>,
        a: Vec<f64>,
    },
    /// Parallel transformation `(x, ξ) ↦ (x + tξ, ξ)`.
    Parabolic { t: f64 },
    /// Boost mixing the last base coordinate with the radius slot.
    Hyperbolic { t: f64 },
}

/// Linear part and translation of a Euclidean motion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Isometry {
    #[serde(serialize_with = "serialize_matrix")]
    pub linear: DMatrix<f64>,
    pub translation: Vec<f64>,
}

impl Isometry {
    pub fn new(linear: DMatrix<f64>, translation: Vec<f64>) -> Result<Self> {
        let n = linear.nrows();
        if linear.ncols() != n || translation.len() != n {
            return Err(Error::usage("isometry blocks have inconsistent sizes"));
        }
        let defect = (&linear * linear.transpose() - DMatrix::identity(n, n)).amax();
        if defect > ORTHOGONAL_TOL {
            return Err(Error::usage(format!(
                "linear part is not orthogonal (defect {defect:e})"
            )));
        }
        Ok(Isometry { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            linear: DMatrix::identity(n, n),
            translation: vec![0.0; n],
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let n = self.linear.nrows();
        (&self.linear - DMatrix::identity(n, n)).amax() <= tol
            && self.translation.iter().all(|a| a.abs() <= tol)
    }

    pub fn transform(&self) -> LaguerreTransform {
        isometry_matrix(&self.linear, &self.translation)
    }
}

pub(crate) fn serialize_matrix<S: serde::Serializer>(
    m: &DMatrix<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    matrix_rows(m).serialize(s)
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if nr == 0 || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Input("matrix rows are empty or ragged".into()));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

fn isometry_matrix(a_mat: &DMatrix<f64>, a: &[f64]) -> LaguerreTransform {
    let n = a.len();
    let a2: f64 = a.iter().map(|x| x * x).sum();
    let av = DVector::from_column_slice(a);
    let aa = a_mat * &av;
    let mut m = DMatrix::zeros(n + 3, n + 3);
    m[(0, 0)] = 1.0 + 0.5 * a2;
    m[(0, 1)] = -0.5 * a2;
    m[(1, 0)] = 0.5 * a2;
    m[(1, 1)] = 1.0 - 0.5 * a2;
    for j in 0..n {
        m[(0, 2 + j)] = a[j];
        m[(1, 2 + j)] = a[j];
    }
    for i in 0..n {
        m[(2 + i, 0)] = aa[i];
        m[(2 + i, 1)] = -aa[i];
        for j in 0..n {
            m[(2 + i, 2 + j)] = a_mat[(i, j)];
        }
    }
    m[(n + 2, n + 2)] = 1.0;
    LaguerreTransform::from_matrix_unchecked(m)
}

fn parabolic_matrix(n: usize, t: f64) -> LaguerreTransform {
    let mut m = DMatrix::identity(n + 3, n + 3);
    let h = 0.5 * t * t;
    let last = n + 2;
    m[(0, 0)] = 1.0 - h;
    m[(0, 1)] = h;
    m[(0, last)] = -t;
    m[(1, 0)] = -h;
    m[(1, 1)] = 1.0 + h;
    m[(1, last)] = -t;
    m[(last, 0)] = t;
    m[(last, 1)] = -t;
    LaguerreTransform::from_matrix_unchecked(m)
}

fn hyperbolic_matrix(n: usize, t: f64) -> LaguerreTransform {
    let mut m = DMatrix::identity(n + 3, n + 3);
    let (i, j) = (n + 1, n + 2);
    let (sh, ch) = (t.sinh(), t.cosh());
    m[(i, i)] = ch;
    m[(i, j)] = sh;
    m[(j, i)] = sh;
    m[(j, j)] = ch;
    LaguerreTransform::from_matrix_unchecked(m)
}

/// The matrix of a generator acting on ℝⁿ.
pub fn generator(n: usize, kind: &Generator) -> Result<LaguerreTransform> {
    if n < lorentz::MIN_BASE_DIM {
        return Err(Error::usage(format!("base dimension {n} is below 3")));
    }
    match kind {
        Generator::Isometry { linear, a } => {
            let m = matrix_from_rows(linear)?;
            if m.nrows() != n || m.ncols() != n || a.len() != n {
                return Err(Error::usage(format!(
                    "isometry blocks must be {n}x{n} and length {n}"
                )));
            }
            let iso = Isometry::new(m, a.clone())?;
            Ok(iso.transform())
        }
        Generator::Parabolic { t } => {
            finite_param(*t)?;
            Ok(parabolic_matrix(n, *t))
        }
        Generator::Hyperbolic { t } => {
            finite_param(*t)?;
            Ok(hyperbolic_matrix(n, *t))
        }
    }
}

fn finite_param(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::usage("flow parameter must be finite"))
    }
}

pub fn isometry(linear: DMatrix<f64>, translation: Vec<f64>) -> Result<LaguerreTransform> {
    Ok(Isometry::new(linear, translation)?.transform())
}

pub fn parabolic(n: usize, t: f64) -> LaguerreTransform {
    parabolic_matrix(n, t)
}

pub fn hyperbolic(n: usize, t: f64) -> LaguerreTransform {
    hyperbolic_matrix(n, t)
}

/// `diag(1, 1, I, −1)`: reverses every orientation, `(x, ξ) ↦ (x, −ξ)`.
pub fn orientation_reversal(n: usize) -> LaguerreTransform {
    let mut m = DMatrix::identity(n + 3, n + 3);
    m[(n + 2, n + 2)] = -1.0;
    LaguerreTransform::from_matrix_unchecked(m)
}

/// Blocks `(A, u, v, w, a, ρ)` of a group element.
///
/// `[[A, u], [v, w]]` is the linear part and `(a, ρ)` the translation of the
/// corresponding affine Lorentz transformation of ℝ^{n+1}₁.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockData {
    #[serde(rename = "A", serialize_with = "serialize_matrix")]
    pub linear: DMatrix<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: f64,
    pub a: Vec<f64>,
    pub rho: f64,
}

impl BlockData {
    pub fn identity(n: usize) -> Self {
        BlockData {
            linear: DMatrix::identity(n, n),
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: 1.0,
            a: vec![0.0; n],
            rho: 0.0,
        }
    }

    pub fn base_dim(&self) -> usize {
        self.a.len()
    }

    /// `[[A, u], [v, w]]`.
    pub fn lorentz_part(&self) -> DMatrix<f64> {
        let n = self.base_dim();
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.linear);
        for i in 0..n {
            m[(i, n)] = self.u[i];
            m[(n, i)] = self.v[i];
        }
        m[(n, n)] = self.w;
        m
    }

    /// `max|M J Mᵗ − J|` with `J = diag(I_n, −1)`.
    pub fn lorentz_defect(&self) -> f64 {
        let n = self.base_dim();
        let m = self.lorentz_part();
        let mut j = DMatrix::identity(n + 1, n + 1);
        j[(n, n)] = -1.0;
        let scale = m.amax().max(1.0);
        (&m * &j * m.transpose() - j).amax() / (scale * scale)
    }

    /// The (n+2)×(n+2) matrix `[[A, u, 0], [v, w, 0], [a, ρ, 1]]`.
    pub fn affine_lorentz_matrix(&self) -> DMatrix<f64> {
        let n = self.base_dim();
        let mut m = DMatrix::zeros(n + 2, n + 2);
        m.view_mut((0, 0), (n + 1, n + 1)).copy_from(&self.lorentz_part());
        for j in 0..n {
            m[(n + 1, j)] = self.a[j];
        }
        m[(n + 1, n)] = self.rho;
        m[(n + 1, n + 1)] = 1.0;
        m
    }
}

pub fn from_blocks(b: &BlockData) -> Result<LaguerreTransform> {
    let n = b.base_dim();
    if n < lorentz::MIN_BASE_DIM
        || b.linear.nrows() != n
        || b.linear.ncols() != n
        || b.u.len() != n
        || b.v.len() != n
    {
        return Err(Error::usage("block sizes are inconsistent"));
    }
    let defect = b.lorentz_defect();
    if defect > MEMBERSHIP_TOL {
        return Err(Error::usage(format!(
            "linear part is not in O(n,1) (defect {defect:e})"
        )));
    }
    Ok(assemble(b))
}

fn assemble(b: &BlockData) -> LaguerreTransform {
    let n = b.base_dim();
    let last = n + 2;
    let a2: f64 = b.a.iter().map(|x| x * x).sum();
    let r2 = b.rho * b.rho;
    let av = DVector::from_column_slice(&b.a);
    let aa = &b.linear * &av;
    let va: f64 = b.v.iter().zip(&b.a).map(|(x, y)| x * y).sum();
    let mut m = DMatrix::zeros(n + 3, n + 3);
    m[(0, 0)] = 1.0 + 0.5 * a2 - 0.5 * r2;
    m[(0, 1)] = -0.5 * a2 + 0.5 * r2;
    m[(1, 0)] = 0.5 * a2 - 0.5 * r2;
    m[(1, 1)] = 1.0 - 0.5 * a2 + 0.5 * r2;
    m[(0, last)] = b.rho;
    m[(1, last)] = b.rho;
    for j in 0..n {
        m[(0, 2 + j)] = b.a[j];
        m[(1, 2 + j)] = b.a[j];
    }
    for i in 0..n {
        let c = aa[i] - b.rho * b.u[i];
        m[(2 + i, 0)] = c;
        m[(2 + i, 1)] = -c;
        for j in 0..n {
            m[(2 + i, 2 + j)] = b.linear[(i, j)];
        }
        m[(2 + i, last)] = b.u[i];
    }
    let c = va - b.rho * b.w;
    m[(last, 0)] = c;
    m[(last, 1)] = -c;
    for j in 0..n {
        m[(last, 2 + j)] = b.v[j];
    }
    m[(last, last)] = b.w;
    LaguerreTransform::from_matrix_unchecked(m)
}

pub fn to_blocks(t: &LaguerreTransform) -> BlockData {
    let n = t.base_dim();
    let m = t.matrix();
    let last = n + 2;
    BlockData {
        linear: m.view((2, 2), (n, n)).into_owned(),
        u: (0..n).map(|i| m[(2 + i, last)]).collect(),
        v: (0..n).map(|j| m[(last, 2 + j)]).collect(),
        w: m[(last, last)],
        a: (0..n).map(|j| m[(0, 2 + j)]).collect(),
        rho: m[(0, last)],
    }
}

/// Checks membership before extracting blocks.
pub fn matrix_to_blocks(m: &DMatrix<f64>) -> Result<BlockData> {
    Ok(to_blocks(&LaguerreTransform::new(m.clone())?))
}

pub fn act_on_coord(t: &LaguerreTransform, gamma: &ProjectivePoint) -> Result<ProjectivePoint> {
    let image = gamma.representative().act(t.matrix())?;
    Ok(ProjectivePoint::normalize(image))
}

/// Maps the Lie line of `c` and reads the contact element of the image.
pub fn act_on_contact(t: &LaguerreTransform, c: &ContactElement) -> Result<ContactElement> {
    if c.base_dim() != t.base_dim() {
        return Err(Error::usage("contact element and transform differ in dimension"));
    }
    let (g1, g2) = spheres::lie_vectors(&c.x, &c.xi);
    let a = lorentz::row_times(&g1, t.matrix());
    let b = lorentz::row_times(&g2, t.matrix());
    // b is the only plane member of the image pencil
    let (x, xi) = spheres::contact_from_span(&a, &b).map_err(|e| Error::InvalidElement(e.to_string()))?;
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidElement(format!(
            "image normal has length {norm}"
        )));
    }
    Ok(ContactElement {
        x,
        xi: xi.iter().map(|v| v / norm).collect(),
    })
}

/// Direct formulas for the generators acting on contact elements.
pub fn act_on_contact_closed_form(kind: &Generator, c: &ContactElement) -> Result<ContactElement> {
    let n = c.base_dim();
    match kind {
        Generator::Isometry { linear, a } => {
            let m = matrix_from_rows(linear)?;
            if m.nrows() != n || m.ncols() != n || a.len() != n {
                return Err(Error::usage("isometry blocks do not match the contact element"));
            }
            let row = |v: &[f64]| -> Vec<f64> {
                (0..n).map(|j| (0..n).map(|i| v[i] * m[(i, j)]).sum()).collect()
            };
            let x: Vec<f64> = row(&c.x).iter().zip(a).map(|(p, q)| p + q).collect();
            Ok(ContactElement { x, xi: row(&c.xi) })
        }
        Generator::Parabolic { t } => Ok(ContactElement {
            x: c.x.iter().zip(&c.xi).map(|(x, e)| x + t * e).collect(),
            xi: c.xi.clone(),
        }),
        Generator::Hyperbolic { t } => {
            let (sh, ch) = (t.sinh(), t.cosh());
            let x1 = c.x[n - 1];
            let xi1 = c.xi[n - 1];
            let d = sh * xi1 + ch;
            let mut x: Vec<f64> = (0..n - 1).map(|i| c.x[i] - sh * x1 / d * c.xi[i]).collect();
            x.push(x1 / d);
            let mut xi: Vec<f64> = (0..n - 1).map(|i| c.xi[i] / d).collect();
            xi.push((ch * xi1 + sh) / d);
            Ok(ContactElement { x, xi })
        }
    }
}

/// A factorization `T = σ₂ ψ_t φ_s σ₁`, times the orientation reversal
/// when `epsilon = −1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factorization {
    pub epsilon: i8,
    pub sigma2: Isometry,
    pub t: f64,
    pub s: f64,
    pub sigma1: Isometry,
}

impl Factorization {
    pub fn base_dim(&self) -> usize {
        self.sigma1.translation.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.base_dim();
        let mut m = self.sigma2.transform().matrix().clone();
        m *= hyperbolic_matrix(n, self.t).matrix();
        m *= parabolic_matrix(n, self.s).matrix();
        m *= self.sigma1.transform().matrix();
        if self.epsilon < 0 {
            m *= orientation_reversal(n).matrix();
        }
        m
    }

    /// `max|reconstruct − T| / max(1, max|T|)`.
    pub fn reconstruction_error(&self, t: &DMatrix<f64>) -> f64 {
        (self.reconstruct() - t).amax() / t.amax().max(1.0)
    }
}

/// Householder reflection `H` with `v̂ H = e_last`; identity when `v = 0`.
fn align_to_last_axis(v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }
    let mut u: Vec<f64> = v.iter().map(|x| x / norm).collect();
    u[n - 1] -= 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    if uu <= 1e-30 {
        return DMatrix::identity(n, n);
    }
    let uv = DVector::from_vec(u);
    DMatrix::identity(n, n) - (&uv * uv.transpose()) * (2.0 / uu)
}

/// Constructive factorization into two isometries and one flow of each kind.
pub fn decompose(m: &DMatrix<f64>) -> Result<Factorization> {
    let t = LaguerreTransform::new(m.clone())?;
    let n = t.base_dim();
    let (work, epsilon) = if t.is_orthochronous() {
        (t, 1)
    } else {
        (t.then(&orientation_reversal(n))?, -1)
    };
    let b = to_blocks(&work);
    let va: f64 = b.v.iter().zip(&b.a).map(|(x, y)| x * y).sum();
    let s = (va - b.rho * b.w) / b.w;
    let vnorm = b.v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let boost = vnorm.asinh();
    let a1 = align_to_last_axis(&b.v);
    let mut star = work.matrix().clone();
    star *= isometry_matrix(&a1, &vec![0.0; n]).matrix();
    star *= parabolic_matrix(n, -s).matrix();
    star *= hyperbolic_matrix(n, -boost).matrix();
    let linear2 = star.view((2, 2), (n, n)).into_owned();
    let translation2: Vec<f64> = (0..n).map(|j| star[(0, 2 + j)]).collect();
    let f = Factorization {
        epsilon,
        sigma2: Isometry {
            linear: linear2,
            translation: translation2,
        },
        t: boost,
        s,
        sigma1: Isometry {
            linear: a1.transpose(),
            translation: vec![0.0; n],
        },
    };
    log::debug!("decompose: t = {boost}, s = {s}, epsilon = {epsilon}");
    Ok(f)
}

/// Parameter ranges for [`random_element`].
#[derive(Debug, Clone, Copy)]
pub struct RandomElementOptions {
    pub max_translation: f64,
    pub max_shift: f64,
    pub max_boost: f64,
}

impl Default for RandomElementOptions {
    fn default() -> Self {
        RandomElementOptions {
            max_translation: 2.0,
            max_shift: 1.0,
            max_boost: 1.0,
        }
    }
}

/// Haar-like random element of O(n) via QR of a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, max_translation: f64) -> Isometry {
    let linear = random_orthogonal(rng, n);
    let translation = (0..n)
        .map(|_| rng.random_range(-max_translation..=max_translation))
        .collect();
    Isometry {
        linear,
        translation,
    }
}

/// Composite `σ ψ_t φ_s σ′ φ_s′ ψ_t′` with random parameters.
pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    opts: RandomElementOptions,
) -> LaguerreTransform {
    let mut m = random_isometry(rng, n, opts.max_translation).transform().matrix;
    let t1 = rng.random_range(-opts.max_boost..=opts.max_boost);
    let s1 = rng.random_range(-opts.max_shift..=opts.max_shift);
    m *= hyperbolic_matrix(n, 0.5 * t1).matrix();
    m *= parabolic_matrix(n, 0.5 * s1).matrix();
    m *= random_isometry(rng, n, opts.max_translation).transform().matrix();
    let t2 = rng.random_range(-opts.max_boost..=opts.max_boost);
    let s2 = rng.random_range(-opts.max_shift..=opts.max_shift);
    m *= parabolic_matrix(n, 0.5 * s2).matrix();
    m *= hyperbolic_matrix(n, 0.5 * t2).matrix();
    LaguerreTransform::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres::{classify_coord, sphere_coord, Classified, SphereElement};
    use crate::lorentz::LorentzVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn parabolic_zero_is_identity() {
        assert_eq!(parabolic(3, 0.0).matrix(), &DMatrix::identity(6, 6));
    }

    #[test]
    fn flow_laws() {
        let (s, t) = (0.4, -1.3);
        let p = parabolic(3, s).then(&parabolic(3, t)).unwrap();
        assert!(close(p.matrix(), parabolic(3, s + t).matrix(), 1e-12));
        let h = hyperbolic(4, s).then(&hyperbolic(4, t)).unwrap();
        assert!(close(h.matrix(), hyperbolic(4, s + t).matrix(), 1e-12));
    }

    #[test]
    fn translation_first_row() {
        let t = isometry(DMatrix::identity(3, 3), vec![1.0, 0.0, 0.0]).unwrap();
        let row: Vec<f64> = (0..6).map(|j| t.matrix()[(0, j)]).collect();
        assert_eq!(row, vec![1.5, -0.5, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn generators_are_members() {
        let g = Generator::Isometry {
            linear: vec![vec![0.0, 1.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
            a: vec![0.3, -2.0, 1.0],
        };
        for kind in [g, Generator::Parabolic { t: 1.0 }, Generator::Hyperbolic { t: -0.8 }] {
            let t = generator(3, &kind).unwrap();
            assert!(lorentz::is_laguerre_matrix(t.matrix(), 1e-12).unwrap());
        }
        let bad = Generator::Isometry {
            linear: vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            a: vec![0.0; 3],
        };
        assert!(matches!(generator(3, &bad), Err(Error::Usage(_))));
    }

    #[test]
    fn blocks_of_generators() {
        assert_eq!(from_blocks(&BlockData::identity(3)).unwrap(), LaguerreTransform::identity(3));
        let t = 0.9;
        let mut b = BlockData::identity(3);
        b.rho = -t;
        assert!(close(from_blocks(&b).unwrap().matrix(), parabolic(3, t).matrix(), 1e-15));
        let blocks = to_blocks(&parabolic(3, t));
        assert_eq!(blocks.rho, -t);
        assert!(blocks.a.iter().all(|x| *x == 0.0));
        assert!(close(&blocks.lorentz_part(), &DMatrix::identity(4, 4), 0.0));

        let mut b = BlockData::identity(3);
        b.linear[(2, 2)] = t.cosh();
        b.u[2] = t.sinh();
        b.v[2] = t.sinh();
        b.w = t.cosh();
        assert!(close(from_blocks(&b).unwrap().matrix(), hyperbolic(3, t).matrix(), 1e-15));
    }

    #[test]
    fn from_blocks_rejects_non_lorentz() {
        let mut b = BlockData::identity(3);
        b.w = 2.0;
        assert!(matches!(from_blocks(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn parabolic_shifts_radius() {
        let t = 0.75;
        let s = SphereElement::sphere(vec![1.0, -2.0, 0.5], 1.5).unwrap();
        let image = act_on_coord(&parabolic(3, t), &sphere_coord(&s)).unwrap();
        match classify_coord(&image, 1e-9).unwrap() {
            Classified::Element(SphereElement::Sphere { center, radius }) => {
                assert!((radius - (1.5 + t)).abs() < 1e-12);
                for (a, b) in center.iter().zip(&[1.0, -2.0, 0.5]) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
            other => panic!("expected a sphere, got {other:?}"),
        }
    }

    #[test]
    fn planes_stay_planes() {
        let p = SphereElement::plane(vec![0.0, 0.6, 0.8], 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_element(&mut rng, 3, RandomElementOptions::default());
        let image = act_on_coord(&t, &sphere_coord(&p)).unwrap();
        let r = image.representative();
        assert!(r.inner(&LorentzVector::wp(3)).unwrap().abs() < 1e-12 * r.euclid_norm());
    }

    #[test]
    fn contact_actions_match_closed_forms() {
        let c = ContactElement::new(vec![0.4, -1.0, 2.0], vec![0.0, 0.6, 0.8]).unwrap();
        let kinds = [
            Generator::Parabolic { t: 1.3 },
            Generator::Hyperbolic { t: -0.6 },
            Generator::Isometry {
                linear: vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
                a: vec![1.0, 2.0, 3.0],
            },
        ];
        for kind in &kinds {
            let m = act_on_contact(&generator(3, kind).unwrap(), &c).unwrap();
            let f = act_on_contact_closed_form(kind, &c).unwrap();
            for (a, b) in m.x.iter().chain(&m.xi).zip(f.x.iter().chain(&f.xi)) {
                assert!((a - b).abs() < 1e-12, "{kind:?}: {m:?} vs {f:?}");
            }
        }
    }

    #[test]
    fn boost_along_normal_scales_height() {
        let t = 0.7;
        let c = ContactElement::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0]).unwrap();
        let m = act_on_contact(&hyperbolic(3, t), &c).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-14);
        assert!((m.x[1] - 2.0).abs() < 1e-14);
        assert!((m.x[2] - 3.0 * (-t).exp()).abs() < 1e-14);
        assert!((m.xi[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decompose_identity_and_boost() {
        let f = decompose(&DMatrix::identity(6, 6)).unwrap();
        assert_eq!(f.epsilon, 1);
        assert_eq!((f.t, f.s), (0.0, 0.0));
        assert!(f.sigma1.is_identity(0.0) && f.sigma2.is_identity(0.0));

        let h = hyperbolic(3, 0.7);
        let f = decompose(h.matrix()).unwrap();
        assert!((f.t - 0.7).abs() < 1e-14);
        assert!(f.s.abs() < 1e-14);
        assert!(f.reconstruction_error(h.matrix()) < 1e-14);
    }

    #[test]
    fn decompose_reversed_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_element(&mut rng, 4, RandomElementOptions::default())
            .then(&orientation_reversal(4))
            .unwrap();
        let f = decompose(t.matrix()).unwrap();
        assert_eq!(f.epsilon, -1);
        assert!(f.reconstruction_error(t.matrix()) < 1e-10);
    }

    #[test]
    fn decompose_rejects_non_members() {
        let mut m = DMatrix::identity(6, 6);
        m[(2, 3)] = 0.1;
        assert!(matches!(decompose(&m), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn inverse_and_affine_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_element(&mut rng, 3, RandomElementOptions::default());
        let b = random_element(&mut rng, 3, RandomElementOptions::default());
        let id = a.then(&a.inverse()).unwrap();
        assert!(close(id.matrix(), &DMatrix::identity(6, 6), 1e-9));
        let ab = a.then(&b).unwrap();
        let lhs = to_blocks(&ab).affine_lorentz_matrix();
        let rhs = to_blocks(&a).affine_lorentz_matrix() * to_blocks(&b).affine_lorentz_matrix();
        assert!((&lhs - &rhs).amax() < 1e-9 * lhs.amax());
    }

    #[test]
    fn random_elements_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let t = random_element(&mut rng, 5, RandomElementOptions::default());
            assert!(LaguerreTransform::new(t.matrix().clone()).is_ok());
        }
    }
}
