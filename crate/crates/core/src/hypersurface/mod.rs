//! Laguerre invariants of sampled hypersurfaces.
//!
//! The pipeline runs patch → shape data → lift `(Y, η)` → frame and
//! tensors. Builtin surfaces provide analytic derivatives up to the lift;
//! everything after it is differentiated on the grid, and each identity is
//! reported on the interior where its stencils fit.

mod compare;
mod invariants;
mod lift;
mod patch;
mod shape;
mod volume;

pub use compare::{compare_invariants, ComparisonReport};
pub use invariants::{frame_and_tensors, InvariantField, InvariantOptions, LaguerreFrame};
pub use lift::{laguerre_lift, laguerre_metric, LaguerreLift};
pub use patch::{build_patch, patch_from_samples, SurfacePatch};
pub use shape::{shape_data, ShapeData};
pub use volume::{laguerre_volume, VolumeReport};

use crate::error::Result;

/// Every stage of the invariant pipeline for one patch.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub patch: SurfacePatch,
    pub shape: ShapeData,
    pub lift: LaguerreLift,
    pub frame: LaguerreFrame,
    pub invariants: InvariantField,
}

impl Analysis {
    pub fn new(patch: SurfacePatch, opts: InvariantOptions) -> Result<Self> {
        let shape = shape_data(&patch)?;
        let lift = laguerre_lift(&patch, &shape);
        let (frame, invariants) = frame_and_tensors(&patch, &shape, &lift, opts)?;
        Ok(Analysis {
            patch,
            shape,
            lift,
            frame,
            invariants,
        })
    }
}
