use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::{FdOrder, Field, Grid, Region};
use crate::jet::{self, Jet};
use crate::surface::{form, ContactSurface, Space};

const UNIT_TOL: f64 = 1e-10;
const LEGENDRE_TOL: f64 = 1e-8;
const SAMPLE_LEGENDRE_TOL: f64 = 1e-4;

/// A sampled hypersurface with its normal, derivatives and fundamental
/// forms on a parameter grid.
///
/// Vector fields over the parameters are laid out `[α][component]`;
/// second derivatives `[α][β][component]`; form gradients `[γ][α][β]`.
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub(crate) n: usize,
    pub(crate) space: Space,
    pub(crate) grid: Grid,
    pub(crate) region: Region,
    pub(crate) x: Field,
    pub(crate) dx: Field,
    pub(crate) ddx: Field,
    pub(crate) xi: Field,
    pub(crate) dxi: Field,
    pub(crate) first: Field,
    pub(crate) second: Field,
    pub(crate) third: Field,
    pub(crate) dfirst: Field,
    pub(crate) dsecond: Field,
    pub(crate) metadata: Value,
}

impl SurfacePatch {
    pub fn base_dim(&self) -> usize {
        self.n
    }

    /// Number of surface parameters, `n − 1`.
    pub fn params(&self) -> usize {
        self.n - 1
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Grid points where all patch data is valid.
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn points(&self) -> &Field {
        &self.x
    }

    pub fn normals(&self) -> &Field {
        &self.xi
    }

    pub fn tangents(&self) -> &Field {
        &self.dx
    }

    /// `∂_α∂_β x`, laid out `[α][β][component]`.
    pub fn second_derivatives(&self) -> &Field {
        &self.ddx
    }

    pub fn normal_derivatives(&self) -> &Field {
        &self.dxi
    }

    pub fn first_form(&self) -> &Field {
        &self.first
    }

    pub fn second_form(&self) -> &Field {
        &self.second
    }

    pub fn third_form(&self) -> &Field {
        &self.third
    }

    pub fn metadata(&self) -> &Value {
        &self.metadata
    }

    /// Diagonal of the ambient form.
    pub fn signature(&self) -> Vec<f64> {
        self.space.signature(self.n)
    }

    /// Diagonal of the bounding box of all sample points.
    pub fn diameter(&self) -> f64 {
        let d = self.x.comps();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for flat in self.region.indices(&self.grid) {
            for (c, v) in self.x.at(flat).iter().enumerate() {
                lo[c] = lo[c].min(*v);
                hi[c] = hi[c].max(*v);
            }
        }
        lo.iter().zip(&hi).map(|(l, h)| (h - l).powi(2)).sum::<f64>().sqrt()
    }
}

fn check_normal(space: Space, n: usize, x_a: &[Vec<f64>], xi: &[f64], legendre_tol: f64) -> std::result::Result<(), String> {
    let sig = space.signature(n);
    let q = form(&sig, xi, xi);
    match space {
        Space::Euclidean if (q - 1.0).abs() > UNIT_TOL => {
            return Err(format!("normal has length² {q}"));
        }
        Space::Lorentzian if (q + 1.0).abs() > UNIT_TOL => {
            return Err(format!("normal has ⟨ξ,ξ⟩ = {q}, expected −1"));
        }
        Space::Degenerate => {
            let nu = xi[0] - xi[n];
            if q.abs() > UNIT_TOL || (nu - 1.0).abs() > UNIT_TOL {
                return Err(format!("normal has ⟨ξ,ξ⟩ = {q} and ⟨ξ,ν⟩ = {nu}"));
            }
        }
        _ => {}
    }
    for (a, t) in x_a.iter().enumerate() {
        let scale = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        let d = form(&sig, t, xi);
        if d.abs() > legendre_tol * scale.max(1.0) {
            return Err(format!("contact condition fails along axis {a}: ⟨∂x, ξ⟩ = {d:e}"));
        }
    }
    Ok(())
}

fn check_immersion(first: &[f64], m: usize) -> std::result::Result<(), String> {
    let mat = nalgebra::DMatrix::from_row_slice(m, m, first);
    if mat.cholesky().is_none() {
        return Err("first fundamental form is not positive definite".into());
    }
    Ok(())
}

/// Samples a surface on `grid` using its analytic jets.
pub fn build_patch(surface: &dyn ContactSurface, grid: &Grid) -> Result<SurfacePatch> {
    let n = surface.base_dim();
    let m = n - 1;
    if grid.dim() != m {
        return Err(Error::usage(format!(
            "surface has {m} parameters but the grid has {} axes",
            grid.dim()
        )));
    }
    let space = surface.space();
    let sig = space.signature(n);
    let d = space.ambient_dim(n);
    let region = Region::full(grid);
    let len = grid.len();

    let mut x = Field::new(grid, d, region.clone());
    let mut dx = Field::new(grid, m * d, region.clone());
    let mut ddx = Field::new(grid, m * m * d, region.clone());
    let mut xi = Field::new(grid, d, region.clone());
    let mut dxi = Field::new(grid, m * d, region.clone());
    let mut first = Field::new(grid, m * m, region.clone());
    let mut second = Field::new(grid, m * m, region.clone());
    let mut third = Field::new(grid, m * m, region.clone());
    let mut dfirst = Field::new(grid, m * m * m, region.clone());
    let mut dsecond = Field::new(grid, m * m * m, region.clone());

    for flat in 0..len {
        let at = |e: Error| match e {
            Error::DegenerateSurface { reason, .. } => Error::degenerate(grid.multi(flat), reason),
            other => other,
        };
        let params = grid.point(flat);
        let cj = surface.contact_jet(&params, 2).map_err(at)?;
        let x_a: Vec<Vec<Jet>> = (0..m)
            .map(|a| cj.x.iter().map(|c| c.partial(a)).collect())
            .collect();
        let xi_a: Vec<Vec<Jet>> = (0..m)
            .map(|a| cj.xi.iter().map(|c| c.partial(a)).collect())
            .collect();

        x.at_mut(flat).copy_from_slice(&cj.x.iter().map(Jet::value).collect::<Vec<_>>());
        xi.at_mut(flat).copy_from_slice(&cj.xi.iter().map(Jet::value).collect::<Vec<_>>());
        let tangent: Vec<Vec<f64>> = x_a
            .iter()
            .map(|v| v.iter().map(Jet::value).collect())
            .collect();
        {
            let out = dx.at_mut(flat);
            for a in 0..m {
                out[a * d..(a + 1) * d].copy_from_slice(&tangent[a]);
            }
            let out = dxi.at_mut(flat);
            for a in 0..m {
                for c in 0..d {
                    out[a * d + c] = xi_a[a][c].value();
                }
            }
            let out = ddx.at_mut(flat);
            for a in 0..m {
                for b in 0..m {
                    for c in 0..d {
                        out[(a * m + b) * d + c] = x_a[a][c].d1(b);
                    }
                }
            }
        }
        for a in 0..m {
            for b in a..m {
                let i_ab = jet::dot(&sig, &x_a[a], &x_a[b]);
                let x_ab: Vec<Jet> = x_a[a].iter().map(|c| c.partial(b)).collect();
                let ii_ab = jet::dot(&sig, &cj.xi, &x_ab);
                let iii_ab = jet::dot(&sig, &xi_a[a], &xi_a[b]);
                for (i, j) in [(a, b), (b, a)] {
                    first.at_mut(flat)[i * m + j] = i_ab.value();
                    second.at_mut(flat)[i * m + j] = ii_ab.value();
                    third.at_mut(flat)[i * m + j] = iii_ab.value();
                    for g in 0..m {
                        dfirst.at_mut(flat)[(g * m + i) * m + j] = i_ab.d1(g);
                        dsecond.at_mut(flat)[(g * m + i) * m + j] = ii_ab.d1(g);
                    }
                }
            }
        }
        check_normal(space, n, &tangent, xi.at(flat), LEGENDRE_TOL)
            .and_then(|_| check_immersion(first.at(flat), m))
            .map_err(|reason| Error::degenerate(grid.multi(flat), reason))?;
    }

    Ok(SurfacePatch {
        n,
        space,
        grid: grid.clone(),
        region,
        x,
        dx,
        ddx,
        xi,
        dxi,
        first,
        second,
        third,
        dfirst,
        dsecond,
        metadata: surface.metadata(),
    })
}

/// Builds a patch from sampled points and normals, differentiating on the
/// grid. Non-periodic axes lose the stencil radius once per derivative.
pub fn patch_from_samples(
    space: Space,
    grid: &Grid,
    points: &[Vec<f64>],
    normals: &[Vec<f64>],
    order: FdOrder,
) -> Result<SurfacePatch> {
    let m = grid.dim();
    let n = m + 1;
    let d = space.ambient_dim(n);
    if points.len() != grid.len() || normals.len() != grid.len() {
        return Err(Error::Input(format!(
            "expected {} samples, got {} points and {} normals",
            grid.len(),
            points.len(),
            normals.len()
        )));
    }
    if let Some(bad) = points.iter().chain(normals).find(|p| p.len() != d) {
        return Err(Error::Input(format!(
            "samples in {} need {d} coordinates, got {}",
            space.tag(),
            bad.len()
        )));
    }
    if points.iter().chain(normals).flatten().any(|v| !v.is_finite()) {
        return Err(Error::Input("samples must be finite".into()));
    }
    if space == Space::Degenerate {
        if let Some(i) = points.iter().position(|p| (p[0] - p[n]).abs() > UNIT_TOL * (1.0 + p[0].abs())) {
            return Err(Error::Input(format!(
                "sample {i} leaves the degenerate hyperplane: first and last coordinates differ"
            )));
        }
    }
    let sig = space.signature(n);
    let full = Region::full(grid);
    let x = Field::from_fn(grid, d, full.clone(), |f, out| out.copy_from_slice(&points[f]));
    let xi = Field::from_fn(grid, d, full, |f, out| out.copy_from_slice(&normals[f]));
    let dx = x.gradient(grid, order);
    let ddx_raw = dx.gradient(grid, order);
    // symmetrize the mixed partials
    let ddx = Field::from_fn(grid, m * m * d, ddx_raw.region().clone(), |f, out| {
        let v = ddx_raw.at(f);
        for a in 0..m {
            for b in 0..m {
                for c in 0..d {
                    out[(a * m + b) * d + c] =
                        0.5 * (v[(b * m + a) * d + c] + v[(a * m + b) * d + c]);
                }
            }
        }
    });
    let dxi = xi.gradient(grid, order);
    let forms = crate::grid::zip_map(grid, &[&dx, &ddx, &xi, &dxi], 3 * m * m, |v, out| {
        let (t, tt, nrm, nt) = (v[0], v[1], v[2], v[3]);
        for a in 0..m {
            for b in 0..m {
                let k = a * m + b;
                out[k] = form(&sig, &t[a * d..(a + 1) * d], &t[b * d..(b + 1) * d]);
                out[m * m + k] = form(&sig, nrm, &tt[k * d..(k + 1) * d]);
                out[2 * m * m + k] = form(&sig, &nt[a * d..(a + 1) * d], &nt[b * d..(b + 1) * d]);
            }
        }
    });
    let pick = |k: usize| {
        Field::from_fn(grid, m * m, forms.region().clone(), |f, out| {
            out.copy_from_slice(&forms.at(f)[k * m * m..(k + 1) * m * m])
        })
    };
    let (first, second, third) = (pick(0), pick(1), pick(2));
    let dfirst = first.gradient(grid, order);
    let dsecond = second.gradient(grid, order);
    let region = dfirst.region().intersect(dsecond.region());
    if region.is_empty() {
        return Err(Error::InsufficientInterior(format!(
            "sample grid {:?} is too small for {}-point stencils",
            grid.counts(),
            2 * order.radius() + 1
        )));
    }
    for flat in region.indices(grid) {
        let tangent: Vec<Vec<f64>> = (0..m).map(|a| dx.at(flat)[a * d..(a + 1) * d].to_vec()).collect();
        check_normal(space, n, &tangent, xi.at(flat), SAMPLE_LEGENDRE_TOL)
            .and_then(|_| check_immersion(first.at(flat), m))
            .map_err(|reason| Error::degenerate(grid.multi(flat), reason))?;
    }
    Ok(SurfacePatch {
        n,
        space,
        grid: grid.clone(),
        region,
        x,
        dx,
        ddx,
        xi,
        dxi,
        first,
        second,
        third,
        dfirst,
        dsecond,
        metadata: json!({"samples": grid.len(), "space": space.tag()}),
    })
}
