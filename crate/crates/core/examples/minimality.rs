//! Laguerre minimality: the torus is not minimal, while the maximal
//! catenoid of ℝ³₁ carried into ℝ³ is.

use std::f64::consts::PI;

use laguerre::grid::{interpolate, Axis, FdOrder, Grid};
use laguerre::hypersurface::{build_patch, Analysis, InvariantOptions};
use laguerre::minimality::minimality_report;
use laguerre::surface::{Builtin, EmbeddedSurface, Orientation, Shape};
use laguerre::Result;

fn main() -> Result<()> {
    let torus = Builtin::new(Shape::Torus { major: 2.0, minor: 1.0 }, Orientation::Outward)?;
    let grid = Grid::new(vec![
        Axis::new("u", -PI / 3.0, PI / 3.0, 64, false)?,
        Axis::new("v", 0.0, 2.0 * PI, 64, true)?,
    ])?;
    let a = Analysis::new(build_patch(&torus, &grid)?, InvariantOptions::default())?;
    let report = minimality_report(&a, None, FdOrder::Fourth)?;
    let lap = report.laplacian_r_field.as_ref().expect("surfaces carry Δ_III r");
    println!("torus: {:?}", report.verdict);
    println!("  Δ_III r at u = 0: {:.7}", interpolate(&grid, lap, 0, &[0, 0], 0, 0.0)?);
    println!("  max EL residual {:.4}, cross-check {:.2e}", report.max_el_residual, report.laplacian_crosscheck.unwrap_or(f64::NAN));

    let catenoid = Builtin::new(Shape::MaximalCatenoid, Orientation::Future)?;
    let embedded = EmbeddedSurface::new(std::sync::Arc::new(catenoid))?;
    let grid = Grid::new(vec![
        Axis::new("u", 0.5, 2.0, 64, false)?,
        Axis::new("v", 0.0, 2.0 * PI, 64, true)?,
    ])?;
    let a = Analysis::new(build_patch(&embedded, &grid)?, InvariantOptions::default())?;
    let report = minimality_report(&a, None, FdOrder::Fourth)?;
    println!("embedded maximal catenoid: {:?}", report.verdict);
    println!("  max |Δ_III r| {:.2e}", report.max_laplacian_r.unwrap_or(f64::NAN));
    println!("  EL residual {:.2e}, trace form {:.2e}", report.max_el_residual, report.max_el_trace_form);
    Ok(())
}
