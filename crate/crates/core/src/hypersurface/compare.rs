use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Field;

use super::Analysis;

/// Largest pointwise deviations between the invariants of two patches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub metric: f64,
    pub shape_spectrum: f64,
    pub b_spectrum: f64,
    pub points: usize,
}

impl ComparisonReport {
    pub fn max_deviation(&self) -> f64 {
        self.metric.max(self.shape_spectrum).max(self.b_spectrum)
    }
}

fn deviation(a: &Analysis, fa: &Field, fb: &Field) -> (f64, usize) {
    let grid = a.patch.grid();
    let region = fa.region().intersect(fb.region());
    let idx = region.indices(grid);
    let worst = idx.iter().fold(0.0f64, |acc, &f| {
        fa.at(f)
            .iter()
            .zip(fb.at(f))
            .fold(acc, |acc, (x, y)| acc.max((x - y).abs()))
    });
    (worst, idx.len())
}

/// Compares `g`, the Laguerre shape operator spectrum and the spectrum of
/// `B` at matching grid points.
pub fn compare_invariants(a: &Analysis, b: &Analysis) -> Result<ComparisonReport> {
    let (ga, gb) = (a.patch.grid(), b.patch.grid());
    if !ga.same_shape(gb) || a.patch.base_dim() != b.patch.base_dim() {
        return Err(Error::usage("patches must share grid shape and dimension"));
    }
    let (metric, points) = deviation(a, a.invariants.metric(), b.invariants.metric());
    let (shape_spectrum, _) = deviation(a, a.invariants.shape_spectrum(), b.invariants.shape_spectrum());
    let (b_spectrum, _) = deviation(a, a.invariants.b_spectrum(), b.invariants.b_spectrum());
    Ok(ComparisonReport {
        metric,
        shape_spectrum,
        b_spectrum,
        points,
    })
}
