//! Euler–Lagrange residual of the Laguerre volume and the surface
//! criterion `Δ_III r = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{zip_map, FdOrder, Field, Grid};
use crate::hypersurface::{Analysis, ShapeData, SurfacePatch};

/// Both forms of the Euler–Lagrange expression on the grid.
#[derive(Debug, Clone)]
pub struct ElResidual {
    /// `Σ (B_{ij,ij} − L_ij B_ij)`.
    pub divergence_form: Field,
    /// `Σ C_{i,i} − Σ L_ij B_ij / (n − 2)`.
    pub trace_form: Field,
    /// `|divergence_form − (n − 2)·trace_form|`.
    pub discrepancy: Field,
}

fn require_interior(grid: &Grid, f: &Field, what: &str, margin: usize) -> Result<()> {
    if f.region().is_empty() {
        return Err(Error::InsufficientInterior(format!(
            "{what} needs {margin} grid points of margin on every non-periodic axis; grid is {:?}",
            grid.counts()
        )));
    }
    Ok(())
}

pub fn el_residual(a: &Analysis, order: FdOrder) -> Result<ElResidual> {
    let grid = a.patch.grid();
    let n = a.patch.base_dim() as f64;
    let inv = &a.invariants;
    let divergence_form = zip_map(grid, &[inv.div_d(), inv.lb()], 1, |v, o| o[0] = v[0][0] - v[1][0]);
    let trace_form = zip_map(grid, &[inv.div_c(), inv.lb()], 1, |v, o| {
        o[0] = v[0][0] - v[1][0] / (n - 2.0)
    });
    let discrepancy = zip_map(grid, &[&divergence_form, &trace_form], 1, |v, o| {
        o[0] = (v[0][0] - (n - 2.0) * v[1][0]).abs()
    });
    require_interior(grid, &divergence_form, "the Euler–Lagrange residual", 2 * order.radius())?;
    Ok(ElResidual {
        divergence_form,
        trace_form,
        discrepancy,
    })
}

/// `Δ_III r` for a surface, from the discrete Laplace–Beltrami operator of
/// the third fundamental form.
pub fn third_form_laplacian_r(patch: &SurfacePatch, shape: &ShapeData, order: FdOrder) -> Result<Field> {
    if patch.base_dim() != 3 {
        return Err(Error::usage("Δ_III r is defined for surfaces (n = 3) only"));
    }
    let grid = patch.grid();
    laplacian_of(grid, patch.third_form(), shape.mean_radius_gradient(), order)
}

/// `Δ f` for the metric `h` (`[α][β]`) given the gradient of `f`.
pub(crate) fn laplacian_of(grid: &Grid, h: &Field, df: &Field, order: FdOrder) -> Result<Field> {
    let m = grid.dim();
    let flux = zip_map(grid, &[h, df], m + 1, |v, out| {
        let mat = nalgebra::DMatrix::from_row_slice(m, m, v[0]);
        let det = mat.determinant();
        let inv = mat.try_inverse().unwrap_or_else(|| nalgebra::DMatrix::from_element(m, m, f64::NAN));
        let s = det.sqrt();
        for a in 0..m {
            out[a] = s * (0..m).map(|b| inv[(a, b)] * v[1][b]).sum::<f64>();
        }
        out[m] = s;
    });
    let only_flux = Field::from_fn(grid, m, flux.region().clone(), |f, out| {
        out.copy_from_slice(&flux.at(f)[..m])
    });
    let div = only_flux.divergence(grid, order);
    let out = zip_map(grid, &[&div, &flux], 1, |v, o| o[0] = v[0][0] / v[1][m]);
    require_interior(grid, &out, "the Laplacian", order.radius())?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Minimal,
    NonMinimal,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub max_el_residual: f64,
    pub max_el_trace_form: f64,
    pub max_el_discrepancy: f64,
    pub threshold: f64,
    /// Surfaces only.
    pub max_laplacian_r: Option<f64>,
    pub laplacian_threshold: Option<f64>,
    /// Deviation between `Δ_III r` and `ρ³ Σ(−C_{i,i} + L·B)`, relative to
    /// `max|Δ_III r|` but never to less than the Laplacian threshold.
    pub laplacian_crosscheck: Option<f64>,
    /// Set when the two surface criteria disagree.
    pub inconsistent: bool,
    /// Largest residual of the expansion of `Δη` in the moving frame.
    pub eta_expansion: f64,
    #[serde(skip)]
    pub el_field: Option<Field>,
    #[serde(skip)]
    pub laplacian_r_field: Option<Field>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.retain(|x| x.is_finite());
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Default threshold on the Euler–Lagrange residual: `1e−3·median(ρ⁻²)`.
pub fn default_threshold(grid: &Grid, shape: &ShapeData) -> f64 {
    1e-3 * median(shape.rho().values(grid, 0).iter().map(|r| r.powi(-2)).collect())
}

pub fn minimality_report(a: &Analysis, threshold: Option<f64>, order: FdOrder) -> Result<MinimalityReport> {
    let grid = a.patch.grid();
    let el = el_residual(a, order)?;
    let threshold = threshold.unwrap_or_else(|| default_threshold(grid, &a.shape));
    let max_el = el.divergence_form.max_abs(grid);
    let verdict = if max_el <= threshold {
        Verdict::Minimal
    } else {
        Verdict::NonMinimal
    };
    let eta_expansion = ["eta_laplacian_wp", "eta_laplacian_y", "eta_laplacian_e"]
        .iter()
        .filter_map(|k| a.invariants.residual(k))
        .map(|f| f.max_abs(grid))
        .fold(0.0, f64::max);

    let mut report = MinimalityReport {
        verdict,
        max_el_residual: max_el,
        max_el_trace_form: el.trace_form.max_abs(grid),
        max_el_discrepancy: el.discrepancy.max_abs(grid),
        threshold,
        max_laplacian_r: None,
        laplacian_threshold: None,
        laplacian_crosscheck: None,
        inconsistent: false,
        eta_expansion,
        el_field: Some(el.divergence_form.clone()),
        laplacian_r_field: None,
    };
    if a.patch.base_dim() == 3 {
        let lap = third_form_laplacian_r(&a.patch, &a.shape, order)?;
        let inv = &a.invariants;
        let predicted = zip_map(grid, &[a.shape.rho(), inv.div_c(), inv.lb()], 1, |v, o| {
            o[0] = v[0][0].powi(3) * (-v[1][0] + v[2][0]);
        });
        let diff = zip_map(grid, &[&lap, &predicted], 1, |v, o| o[0] = v[0][0] - v[1][0]);
        let max_lap = lap.max_abs(grid);
        let lap_threshold = threshold * median(a.shape.rho().values(grid, 0).iter().map(|r| r.powi(3)).collect());
        report.laplacian_crosscheck = Some(diff.max_abs(grid) / max_lap.max(lap_threshold));
        report.inconsistent = (max_lap <= lap_threshold) != (verdict == Verdict::Minimal);
        report.max_laplacian_r = Some(max_lap);
        report.laplacian_threshold = Some(lap_threshold);
        report.laplacian_r_field = Some(lap);
    }
    Ok(report)
}
