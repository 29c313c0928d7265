use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{Field, Region};

use super::patch::SurfacePatch;

/// Relative eigenvalue gap below which principal curvatures are treated
/// as crossing.
const CROSSING_TOL: f64 = 1e-8;

/// Principal curvature data at every grid point of a patch.
///
/// Directions are stored `[i][α]` as parameter-space vectors, orthonormal
/// for the first fundamental form. `d_mean_radius` and `d_rho` are
/// parameter gradients.
#[derive(Debug, Clone)]
pub struct ShapeData {
    pub(crate) curvatures: Field,
    pub(crate) radii: Field,
    pub(crate) mean_radius: Field,
    pub(crate) rho: Field,
    pub(crate) d_mean_radius: Field,
    pub(crate) d_rho: Field,
    pub(crate) directions: Field,
    pub(crate) weingarten: Field,
    pub(crate) umbilic_tol: f64,
    pub(crate) curvature_zero_tol: f64,
}

impl ShapeData {
    /// Principal curvatures `k_i`, sorted descending.
    pub fn curvatures(&self) -> &Field {
        &self.curvatures
    }

    /// Curvature radii `r_i = 1/k_i`, in the order of the curvatures.
    pub fn radii(&self) -> &Field {
        &self.radii
    }

    pub fn mean_radius(&self) -> &Field {
        &self.mean_radius
    }

    /// `ρ = √Σ(r_i − r)²`.
    pub fn rho(&self) -> &Field {
        &self.rho
    }

    pub fn mean_radius_gradient(&self) -> &Field {
        &self.d_mean_radius
    }

    pub fn rho_gradient(&self) -> &Field {
        &self.d_rho
    }

    pub fn directions(&self) -> &Field {
        &self.directions
    }

    /// `|∂ξ(e_i) + k_i ∂x(e_i)|`, maximized over `i`.
    pub fn weingarten_residual(&self) -> &Field {
        &self.weingarten
    }

    /// Eigenvalues `(r_i − r)/ρ` of the Laguerre shape operator at a point,
    /// sorted descending.
    pub fn shape_operator_spectrum(&self, flat: usize) -> Vec<f64> {
        let r = self.mean_radius.at(flat)[0];
        let rho = self.rho.at(flat)[0];
        let mut s: Vec<f64> = self.radii.at(flat).iter().map(|ri| (ri - r) / rho).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn umbilic_tol(&self) -> f64 {
        self.umbilic_tol
    }

    pub fn curvature_zero_tol(&self) -> f64 {
        self.curvature_zero_tol
    }
}

fn mat(m: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(m, m, v)
}

/// Principal curvatures, radii, `r`, `ρ` and their first derivatives.
pub fn shape_data(patch: &SurfacePatch) -> Result<ShapeData> {
    let grid = &patch.grid;
    let m = patch.params();
    let d = patch.x.comps();
    let diameter = patch.diameter().max(f64::MIN_POSITIVE);
    let umbilic_tol = 1e-8 * diameter;
    let curvature_zero_tol = 1e-10 / diameter;
    let region: Region = patch.region.clone();

    let new = |c| Field::new(grid, c, region.clone());
    let mut curvatures = new(m);
    let mut radii = new(m);
    let mut mean_radius = new(1);
    let mut rho = new(1);
    let mut d_mean_radius = new(m);
    let mut d_rho = new(m);
    let mut directions = new(m * m);
    let mut weingarten = new(1);

    for flat in region.indices(grid) {
        let fail = |reason: String| Error::degenerate(grid.multi(flat), reason);
        let first = mat(m, patch.first.at(flat));
        let second = mat(m, patch.second.at(flat));
        let chol = first
            .clone()
            .cholesky()
            .ok_or_else(|| fail("first fundamental form is not positive definite".into()))?;
        let l = chol.l();
        let l_inv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| fail("first fundamental form is singular".into()))?;
        let reduced = &l_inv * &second * l_inv.transpose();
        let reduced = (&reduced + reduced.transpose()) * 0.5;
        let eig = reduced.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let k: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

        if let Some(i) = k.iter().position(|ki| ki.abs() <= curvature_zero_tol) {
            return Err(fail(format!(
                "principal curvature k_{} = {:e} vanishes",
                i + 1,
                k[i]
            )));
        }
        let r_i: Vec<f64> = k.iter().map(|ki| 1.0 / ki).collect();
        let r = r_i.iter().sum::<f64>() / m as f64;
        let rho_v = r_i.iter().map(|ri| (ri - r).powi(2)).sum::<f64>().sqrt();
        if rho_v <= umbilic_tol {
            return Err(fail(format!("umbilic point: ρ = {rho_v:e}")));
        }
        let kmax = k.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if let Some(i) = (0..m - 1).find(|&i| k[i] - k[i + 1] <= CROSSING_TOL * kmax) {
            return Err(fail(format!(
                "principal curvatures k_{} and k_{} cross; re-grid to avoid the crossing",
                i + 1,
                i + 2
            )));
        }

        let l_inv_t = l_inv.transpose();
        let dirs: Vec<Vec<f64>> = order
            .iter()
            .map(|&i| {
                let q = eig.eigenvectors.column(i);
                let e = &l_inv_t * q;
                e.iter().copied().collect()
            })
            .collect();

        // radius matrix R = II⁻¹ I and its derivatives
        let second_inv = second
            .clone()
            .try_inverse()
            .ok_or_else(|| fail("second fundamental form is singular".into()))?;
        let radius_mat = &second_inv * &first;
        let mut dr = vec![0.0; m];
        let mut drho = vec![0.0; m];
        for g in 0..m {
            let di = mat(m, &patch.dfirst.at(flat)[g * m * m..(g + 1) * m * m]);
            let dii = mat(m, &patch.dsecond.at(flat)[g * m * m..(g + 1) * m * m]);
            let d_radius = &second_inv * (di - dii * &radius_mat);
            dr[g] = d_radius.trace() / m as f64;
            let d_tr_sq = 2.0 * (&radius_mat * &d_radius).trace();
            drho[g] = (0.5 * d_tr_sq - m as f64 * r * dr[g]) / rho_v;
        }

        // Weingarten: ∂ξ(e_i) = −k_i ∂x(e_i)
        let dx = patch.dx.at(flat);
        let dxi = patch.dxi.at(flat);
        let mut w = 0.0f64;
        for (i, e) in dirs.iter().enumerate() {
            let mut res = vec![0.0; d];
            let mut tan = vec![0.0; d];
            for (a, ea) in e.iter().enumerate() {
                for c in 0..d {
                    res[c] += ea * (dxi[a * d + c] + k[i] * dx[a * d + c]);
                    tan[c] += ea * dx[a * d + c];
                }
            }
            let norm: f64 = res.iter().map(|v| v * v).sum::<f64>().sqrt();
            let scale = k[i].abs() * tan.iter().map(|v| v * v).sum::<f64>().sqrt();
            w = w.max(norm / scale.max(f64::MIN_POSITIVE));
        }

        curvatures.at_mut(flat).copy_from_slice(&k);
        radii.at_mut(flat).copy_from_slice(&r_i);
        mean_radius.at_mut(flat)[0] = r;
        rho.at_mut(flat)[0] = rho_v;
        d_mean_radius.at_mut(flat).copy_from_slice(&dr);
        d_rho.at_mut(flat).copy_from_slice(&drho);
        for (i, e) in dirs.iter().enumerate() {
            directions.at_mut(flat)[i * m..(i + 1) * m].copy_from_slice(e);
        }
        weingarten.at_mut(flat)[0] = w;
    }

    Ok(ShapeData {
        curvatures,
        radii,
        mean_radius,
        rho,
        d_mean_radius,
        d_rho,
        directions,
        weingarten,
        umbilic_tol,
        curvature_zero_tol,
    })
}
