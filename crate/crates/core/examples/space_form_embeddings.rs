//! The Lorentzian and degenerate space forms: sphere coordinates, the
//! embeddings into Euclidean contact elements, and transfer of the
//! invariants of a surface.

use std::f64::consts::PI;
use std::sync::Arc;

use laguerre::grid::{Axis, Grid};
use laguerre::hypersurface::{build_patch, Analysis, InvariantOptions};
use laguerre::spaceforms::{
    embed_sigma, embed_sphere, embed_tau, radius_probe_check, spaceform_sphere_coord, transfer_check,
    ContactElementR30, ContactElementR31, SpaceFormSphere,
};
use laguerre::spheres::sphere_coord;
use laguerre::surface::{Builtin, ContactSurface, EmbeddedSurface, Orientation, Shape};
use laguerre::Result;

fn main() -> Result<()> {
    let h = SpaceFormSphere::Hyperboloid { center: vec![0.0; 3], radius: 1.0 };
    println!("H(0, 1) ↦ {:?}", spaceform_sphere_coord(&h)?.representative().as_slice());
    let image = embed_sphere(&h)?;
    println!("  as a Euclidean sphere {image:?}, same point: {}", sphere_coord(&image).proportional_to(&spaceform_sphere_coord(&h)?, 1e-7));

    let c = ContactElementR31::new(vec![0.0; 3], vec![0.0, 0.0, 1.0])?;
    println!("σ{:?} = {:?}", (&c.x, &c.xi), embed_sigma(&c)?);
    let c = ContactElementR30::new(vec![0.0; 4], vec![0.5, 0.0, 0.0, -0.5])?;
    println!("τ{:?} = {:?}", (&c.x, &c.xi), embed_tau(&c)?);

    let fixtures: [(Shape, Orientation, [f64; 2]); 2] = [
        (Shape::MaximalCatenoid, Orientation::Future, [0.5, 2.0]),
        (Shape::HarmonicGraph { scale: 0.5 }, Orientation::Canonical, [-0.5, 0.5]),
    ];
    for (shape, orientation, [lo, hi]) in fixtures {
        let base: Arc<dyn ContactSurface> = Arc::new(Builtin::new(shape.clone(), orientation)?);
        let v_axis = if matches!(shape, Shape::MaximalCatenoid) {
            Axis::new("v", 0.0, 2.0 * PI, 64, true)?
        } else {
            Axis::new("v", -0.5, 0.5, 64, false)?
        };
        let grid = Grid::new(vec![Axis::new("u", lo, hi, 64, false)?, v_axis])?;
        let a = Analysis::new(build_patch(base.as_ref(), &grid)?, InvariantOptions::default())?;
        let b = Analysis::new(build_patch(&EmbeddedSurface::new(base)?, &grid)?, InvariantOptions::default())?;
        println!("{shape:?}");
        for (name, value) in transfer_check(&a, &b)?.entries() {
            println!("  {name:12} {value:.2e}");
        }
        let probe = radius_probe_check(&a);
        println!("  ⟨Y, c⟩ − ρ {:.2e}, ⟨η, c⟩ − r {:.2e}", probe.rho, probe.mean_radius);
    }
    Ok(())
}
