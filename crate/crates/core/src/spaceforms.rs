//! Lorentzian and degenerate Laguerre space forms and their embeddings
//! into the Euclidean contact bundle.
//!
//! Lie-sphere vectors of ℝⁿ₁ put the constant slot before the point
//! (`(·, ·, c, x)`); those of ℝⁿ₀ drop it (`(·, ·, x)` with `x ∈ ℝ^{n+1}₁`).
//! [`Space::tail`] owns this layout.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::zip_map;
use crate::hypersurface::{shape_data, Analysis, ShapeData, SurfacePatch};
use crate::lorentz::{inner, LorentzVector};
use crate::spheres::{ContactElement, ProjectivePoint, SphereElement};
use crate::surface::{form, Space};

const FORM_TOL: f64 = 1e-10;

/// Oriented spheres and spacelike planes of the two non-Euclidean forms.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceFormSphere {
    /// `H(p, r) = {x − p = rξ}` in ℝⁿ₁.
    Hyperboloid { center: Vec<f64>, radius: f64 },
    /// `{⟨x, ξ⟩ = λ}` in ℝⁿ₁ with `⟨ξ, ξ⟩ = −1`.
    LorentzPlane { normal: Vec<f64>, offset: f64 },
    /// `C(p)` in ℝⁿ₀ with `p ∈ ℝ^{n+1}₁`.
    Paraboloid { vertex: Vec<f64> },
    /// `{⟨x, ξ⟩ = λ}` in ℝⁿ₀ with `⟨ξ, ξ⟩ = 0` and `⟨ξ, ν⟩ = 1`.
    DegeneratePlane { normal: Vec<f64>, offset: f64 },
}

fn lorentz_sig(d: usize) -> Vec<f64> {
    let mut g = vec![1.0; d];
    g[d - 1] = -1.0;
    g
}

/// `⟨v, ν⟩` for `ν = (1, 0, …, 0, 1)` in ℝ^{n+1}₁.
fn nu_pairing(v: &[f64]) -> f64 {
    v[0] - v[v.len() - 1]
}

impl SpaceFormSphere {
    pub fn space(&self) -> Space {
        match self {
            SpaceFormSphere::Hyperboloid { .. } | SpaceFormSphere::LorentzPlane { .. } => Space::Lorentzian,
            _ => Space::Degenerate,
        }
    }

    pub fn base_dim(&self) -> usize {
        match self {
            SpaceFormSphere::Hyperboloid { center, .. } => center.len(),
            SpaceFormSphere::LorentzPlane { normal, .. } => normal.len(),
            SpaceFormSphere::Paraboloid { vertex } => vertex.len() - 1,
            SpaceFormSphere::DegeneratePlane { normal, .. } => normal.len() - 1,
        }
    }

    fn validate(&self) -> Result<()> {
        let v = match self {
            SpaceFormSphere::Hyperboloid { center, .. } => center,
            SpaceFormSphere::LorentzPlane { normal, .. } => normal,
            SpaceFormSphere::Paraboloid { vertex } => vertex,
            SpaceFormSphere::DegeneratePlane { normal, .. } => normal,
        };
        if self.base_dim() < 3 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("space-form spheres need finite data with n ≥ 3".into()));
        }
        match self {
            SpaceFormSphere::LorentzPlane { normal, .. } => {
                let q = form(&lorentz_sig(normal.len()), normal, normal);
                if (q + 1.0).abs() > FORM_TOL {
                    return Err(Error::Input(format!("plane normal has ⟨ξ,ξ⟩ = {q}, expected −1")));
                }
            }
            SpaceFormSphere::DegeneratePlane { normal, .. } => {
                let q = form(&lorentz_sig(normal.len()), normal, normal);
                if q.abs() > FORM_TOL || (nu_pairing(normal) - 1.0).abs() > FORM_TOL {
                    return Err(Error::Input("plane normal needs ⟨ξ,ξ⟩ = 0 and ⟨ξ,ν⟩ = 1".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Lightlike coordinate vector of a space-form sphere in ℝ^{n+3}₂.
pub fn spaceform_sphere_coord(s: &SpaceFormSphere) -> Result<ProjectivePoint> {
    s.validate()?;
    let v = match s {
        SpaceFormSphere::Hyperboloid { center, radius } => {
            let pp = form(&lorentz_sig(center.len()), center, center);
            let r2 = radius * radius;
            let mut v = vec![0.5 * (1.0 + pp + r2), 0.5 * (1.0 - pp - r2), -radius];
            v.extend_from_slice(center);
            v
        }
        SpaceFormSphere::LorentzPlane { normal, offset } => {
            let mut v = vec![*offset, -offset, 1.0];
            v.extend_from_slice(normal);
            v
        }
        SpaceFormSphere::Paraboloid { vertex } => {
            let pp = form(&lorentz_sig(vertex.len()), vertex, vertex);
            let mut v = vec![0.5 * (1.0 + pp), 0.5 * (1.0 - pp)];
            v.extend_from_slice(vertex);
            v
        }
        SpaceFormSphere::DegeneratePlane { normal, offset } => {
            let mut v = vec![*offset, -offset];
            v.extend_from_slice(normal);
            v
        }
    };
    ProjectivePoint::new(LorentzVector::new(v)?, 1e-9)
}

/// Image of a space-form sphere under the Laguerre embedding.
pub fn embed_sphere(s: &SpaceFormSphere) -> Result<SphereElement> {
    s.validate()?;
    match s {
        SpaceFormSphere::Hyperboloid { center, radius } => {
            let (p0, p1) = center.split_at(center.len() - 1);
            let mut c = vec![-radius];
            c.extend_from_slice(p0);
            SphereElement::sphere(c, -p1[0])
        }
        SpaceFormSphere::LorentzPlane { normal, offset } => {
            let xi1 = normal[normal.len() - 1];
            let mut xi = vec![1.0 / xi1];
            xi.extend(normal[..normal.len() - 1].iter().map(|v| v / xi1));
            SphereElement::plane(xi, offset / xi1)
        }
        SpaceFormSphere::Paraboloid { vertex } => {
            let last = vertex[vertex.len() - 1];
            let mut c = vec![vertex[0]];
            c.extend_from_slice(&vertex[1..vertex.len() - 1]);
            SphereElement::sphere(c, -last)
        }
        SpaceFormSphere::DegeneratePlane { normal, offset } => {
            let xi1 = normal[normal.len() - 1];
            if xi1.abs() <= FORM_TOL {
                return Err(Error::EmbeddingDomain("plane normal has ξ₁ = 0".into()));
            }
            let mut xi = vec![1.0 + 1.0 / xi1];
            xi.extend(normal[1..normal.len() - 1].iter().map(|v| v / xi1));
            SphereElement::plane(xi, offset / xi1)
        }
    }
}

/// Contact element of ℝⁿ₁: a point and a unit timelike normal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactElementR31 {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl ContactElementR31 {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.len() < 3 {
            return Err(Error::usage("point and normal need equal length n ≥ 3"));
        }
        let q = form(&lorentz_sig(xi.len()), &xi, &xi);
        if (q + 1.0).abs() > FORM_TOL {
            return Err(Error::usage(format!("normal has ⟨ξ,ξ⟩ = {q}, expected −1")));
        }
        Ok(ContactElementR31 { x, xi })
    }
}

/// Contact element of ℝⁿ₀ inside ℝ^{n+1}₁.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactElementR30 {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl ContactElementR30 {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.len() < 4 {
            return Err(Error::usage("point and normal need equal length n + 1 ≥ 4"));
        }
        let q = form(&lorentz_sig(xi.len()), &xi, &xi);
        if nu_pairing(&x).abs() > FORM_TOL {
            return Err(Error::usage("point leaves the degenerate hyperplane"));
        }
        if q.abs() > FORM_TOL || (nu_pairing(&xi) - 1.0).abs() > FORM_TOL {
            return Err(Error::usage("normal needs ⟨ξ,ξ⟩ = 0 and ⟨ξ,ν⟩ = 1"));
        }
        Ok(ContactElementR30 { x, xi })
    }
}

fn embed(x0: &[f64], x1: f64, xi0: &[f64], xi1: f64, first: f64) -> Result<ContactElement> {
    if xi1.abs() <= FORM_TOL {
        return Err(Error::EmbeddingDomain("normal has ξ₁ = 0".into()));
    }
    let k = x1 / xi1;
    let mut x = vec![-k];
    x.extend(x0.iter().zip(xi0).map(|(a, b)| a - k * b));
    let mut xi = vec![first];
    xi.extend(xi0.iter().map(|v| v / xi1));
    ContactElement::new(x, xi)
}

/// `σ: Uℝⁿ₁ → Uℝⁿ`.
pub fn embed_sigma(c: &ContactElementR31) -> Result<ContactElement> {
    let n = c.x.len();
    let xi1 = c.xi[n - 1];
    embed(&c.x[..n - 1], c.x[n - 1], &c.xi[..n - 1], xi1, 1.0 / xi1)
}

/// `τ: Uℝⁿ₀ → Uℝⁿ`.
pub fn embed_tau(c: &ContactElementR30) -> Result<ContactElement> {
    let d = c.x.len();
    let xi1 = c.xi[d - 1];
    embed(&c.x[1..d - 1], c.x[d - 1], &c.xi[1..d - 1], xi1, 1.0 + 1.0 / xi1)
}

/// Principal data of a spacelike hypersurface in ℝⁿ₁ or ℝⁿ₀.
pub fn spaceform_shape_data(patch: &SurfacePatch) -> Result<ShapeData> {
    if patch.space() == Space::Euclidean {
        return Err(Error::usage("patch is Euclidean; use shape_data"));
    }
    shape_data(patch)
}

/// Maximal deviations of the invariant-transfer identities between a
/// space-form patch and its embedded image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferReport {
    /// `r_i′ = ξ₁ r_i + x₁`.
    pub radii: f64,
    /// `r′ = ξ₁ r + x₁`.
    pub mean_radius: f64,
    /// `ρ′ = |ξ₁| ρ`.
    pub rho: f64,
    /// `Y′ = sign(ξ₁) Y`.
    pub position: f64,
    /// `η′ = η`.
    pub gauss_map: f64,
    /// `g′ = g`.
    pub metric: f64,
}

impl TransferReport {
    pub fn entries(&self) -> [(&'static str, f64); 6] {
        [
            ("radii", self.radii),
            ("mean_radius", self.mean_radius),
            ("rho", self.rho),
            ("position", self.position),
            ("gauss_map", self.gauss_map),
            ("metric", self.metric),
        ]
    }

    /// Fails with the first identity that exceeds `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        for (name, value) in self.entries() {
            if !(value <= tol) {
                return Err(Error::ToleranceBreach {
                    identity: format!("transfer/{name}"),
                    value,
                    limit: tol,
                });
            }
        }
        Ok(())
    }
}

pub fn transfer_check(base: &Analysis, embedded: &Analysis) -> Result<TransferReport> {
    if base.patch.space() == Space::Euclidean || embedded.patch.space() != Space::Euclidean {
        return Err(Error::usage("transfer compares a space-form patch with its Euclidean image"));
    }
    let grid = base.patch.grid();
    if !grid.same_shape(embedded.patch.grid()) {
        return Err(Error::usage("patches must share the grid"));
    }
    let d = base.patch.points().comps();
    let m = base.patch.params();
    let len = base.patch.base_dim() + 3;
    let (a, b) = (&base.shape, &embedded.shape);
    let worst = |f: crate::grid::Field| f.max_abs(grid);
    let radii = worst(zip_map(
        grid,
        &[base.patch.points(), base.patch.normals(), a.radii(), b.radii()],
        1,
        |v, o| {
            let (x1, xi1) = (v[0][d - 1], v[1][d - 1]);
            let mut pred: Vec<f64> = v[2].iter().map(|r| xi1 * r + x1).collect();
            let mut got = v[3].to_vec();
            pred.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            o[0] = pred.iter().zip(&got).fold(0.0, |acc, (p, g)| acc.max((p - g).abs()));
        },
    ));
    let mean_radius = worst(zip_map(
        grid,
        &[base.patch.points(), base.patch.normals(), a.mean_radius(), b.mean_radius()],
        1,
        |v, o| o[0] = v[1][d - 1] * v[2][0] + v[0][d - 1] - v[3][0],
    ));
    let rho = worst(zip_map(grid, &[base.patch.normals(), a.rho(), b.rho()], 1, |v, o| {
        o[0] = v[0][d - 1].abs() * v[1][0] - v[2][0]
    }));
    let position = worst(zip_map(
        grid,
        &[base.patch.normals(), base.lift.position(), embedded.lift.position()],
        1,
        |v, o| {
            let s = v[0][d - 1].signum();
            o[0] = (0..len).fold(0.0, |acc, c| acc.max((s * v[1][c] - v[2][c]).abs()));
        },
    ));
    let gauss_map = worst(zip_map(
        grid,
        &[base.lift.gauss_map(), embedded.lift.gauss_map()],
        1,
        |v, o| o[0] = (0..len).fold(0.0, |acc, c| acc.max((v[0][c] - v[1][c]).abs())),
    ));
    let metric = worst(zip_map(
        grid,
        &[base.invariants.metric(), embedded.invariants.metric()],
        1,
        |v, o| o[0] = (0..m * m).fold(0.0, |acc, k| acc.max((v[0][k] - v[1][k]).abs())),
    ));
    Ok(TransferReport {
        radii,
        mean_radius,
        rho,
        position,
        gauss_map,
        metric,
    })
}

/// Deviations of `⟨Y, c⟩ = ρ` and `⟨η, c⟩ = r` for the probe `c` of the
/// patch's space form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusProbeReport {
    pub rho: f64,
    pub mean_radius: f64,
}

pub fn radius_probe_check(a: &Analysis) -> RadiusProbeReport {
    let grid = a.patch.grid();
    let c = a.patch.space().radius_probe(a.patch.base_dim());
    let rho = zip_map(grid, &[a.lift.position(), a.shape.rho()], 1, |v, o| {
        o[0] = inner(v[0], &c) - v[1][0]
    })
    .max_abs(grid);
    let mean_radius = zip_map(grid, &[a.lift.gauss_map(), a.shape.mean_radius()], 1, |v, o| {
        o[0] = inner(v[0], &c) - v[1][0]
    })
    .max_abs(grid);
    RadiusProbeReport { rho, mean_radius }
}
