//! Laguerre volume of a torus patch against the closed form
//! `2πR² ln(2 + √3)`, on two grids.

use std::f64::consts::PI;

use laguerre::grid::{Axis, Grid};
use laguerre::hypersurface::{build_patch, laguerre_volume, shape_data};
use laguerre::surface::{Builtin, Orientation, Shape};
use laguerre::Result;

fn main() -> Result<()> {
    let (major, minor) = (2.0, 1.0);
    let torus = Builtin::new(Shape::Torus { major, minor }, Orientation::Outward)?;
    let exact = 2.0 * PI * major * major * (2.0 + 3f64.sqrt()).ln();
    for count in [32, 64, 128] {
        let grid = Grid::new(vec![
            Axis::new("u", -PI / 3.0, PI / 3.0, count, false)?,
            Axis::new("v", 0.0, 2.0 * PI, count, true)?,
        ])?;
        let patch = build_patch(&torus, &grid)?;
        let report = laguerre_volume(&patch, &shape_data(&patch)?)?;
        println!(
            "{count:4}×{count:<4} volume {:.9}  relative error {:.2e}  curvature-form path {:?}",
            report.volume,
            (report.volume - exact).abs() / exact,
            report.curvature_form
        );
    }
    println!("closed form {exact:.9}");
    Ok(())
}
