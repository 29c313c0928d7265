//! A hypersurface of ℝ⁴: three principal curvatures, the identities that
//! only appear from dimension four on, and the invariant ratio of radii.

use laguerre::grid::{Axis, Grid};
use laguerre::hypersurface::{build_patch, Analysis, InvariantOptions};
use laguerre::surface::{Builtin, Orientation, Shape};
use laguerre::Result;

fn main() -> Result<()> {
    let graph = Builtin::new(
        Shape::TranslationalGraph { quad: vec![1.0, 2.0, 4.0], cubic: vec![0.3, -0.2, 0.1] },
        Orientation::Up,
    )?;
    let axes = ["s1", "s2", "s3"]
        .iter()
        .map(|name| Axis::new(*name, -0.15, 0.15, 24, false))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(axes)?;
    let a = Analysis::new(build_patch(&graph, &grid)?, InvariantOptions::default())?;

    let centre = grid.flat(&[12, 12, 12]);
    let r = a.shape.radii().at(centre);
    println!("curvature radii at the centre: {r:.5?}");
    println!("(r1 − r2)/(r1 − r3) = {:.6}", (r[0] - r[1]) / (r[0] - r[2]));
    println!("shape operator spectrum {:.6?}", a.invariants.shape_spectrum().at(centre));

    for (name, value) in a.invariants.residual_summary(&grid) {
        println!("  {name:20} {value:.2e}");
    }
    Ok(())
}
