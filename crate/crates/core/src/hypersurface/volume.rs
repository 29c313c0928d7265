use serde::Serialize;

use crate::error::Result;
use crate::grid::{integrate, zip_map};

use super::patch::SurfacePatch;
use super::shape::ShapeData;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeReport {
    /// `∫ ρ^{n−1} / |r_1⋯r_{n−1}| dM`.
    pub volume: f64,
    /// `2∫ (H² − K)/|K| dM`, surfaces only.
    pub curvature_form: Option<f64>,
    /// Relative difference of the two quadratures.
    pub discrepancy: Option<f64>,
}

/// Laguerre volume of the patch by Simpson quadrature over the parameters.
pub fn laguerre_volume(patch: &SurfacePatch, shape: &ShapeData) -> Result<VolumeReport> {
    let grid = &patch.grid;
    let m = patch.params();
    let area = |first: &[f64]| {
        nalgebra::DMatrix::from_row_slice(m, m, first)
            .determinant()
            .max(0.0)
            .sqrt()
    };
    let density = zip_map(grid, &[&patch.first, &shape.radii, &shape.rho], 1, |v, out| {
        let prod: f64 = v[1].iter().product();
        out[0] = v[2][0].powi(m as i32) / prod.abs() * area(v[0]);
    });
    let volume = integrate(grid, &density)?;
    let (curvature_form, discrepancy) = if m == 2 {
        let alt = zip_map(grid, &[&patch.first, &shape.curvatures], 1, |v, out| {
            let h = 0.5 * (v[1][0] + v[1][1]);
            let k = v[1][0] * v[1][1];
            out[0] = 2.0 * (h * h - k) / k.abs() * area(v[0]);
        });
        let alt = integrate(grid, &alt)?;
        (Some(alt), Some(((alt - volume) / volume).abs()))
    } else {
        (None, None)
    };
    Ok(VolumeReport {
        volume,
        curvature_form,
        discrepancy,
    })
}
