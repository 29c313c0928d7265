//! Laguerre invariants do not change when the surface is moved by a random
//! group element and rebuilt from the image contact elements.

use std::f64::consts::PI;
use std::sync::Arc;

use laguerre::grid::{Axis, Grid};
use laguerre::group::{random_element, RandomElementOptions};
use laguerre::hypersurface::{build_patch, compare_invariants, Analysis, InvariantOptions};
use laguerre::surface::{Builtin, ContactSurface, Orientation, Shape, TransformedSurface};
use laguerre::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let torus: Arc<dyn ContactSurface> =
        Arc::new(Builtin::new(Shape::Torus { major: 2.0, minor: 1.0 }, Orientation::Outward)?);
    let grid = Grid::new(vec![
        Axis::new("u", -PI / 3.0, PI / 3.0, 32, false)?,
        Axis::new("v", 0.0, 2.0 * PI, 32, true)?,
    ])?;
    let reference = Analysis::new(build_patch(torus.as_ref(), &grid)?, InvariantOptions::default())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..5 {
        let t = random_element(&mut rng, 3, RandomElementOptions::default());
        let moved = TransformedSurface::new(torus.clone(), t)?;
        let image = Analysis::new(build_patch(&moved, &grid)?, InvariantOptions::default())?;
        let r = compare_invariants(&reference, &image)?;
        println!(
            "element {k}: metric {:.2e}  shape spectrum {:.2e}  B spectrum {:.2e}",
            r.metric, r.shape_spectrum, r.b_spectrum
        );
    }
    Ok(())
}
