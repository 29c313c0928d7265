//! Rectangular parameter grids, multi-component fields on them, central
//! finite differences and quadrature.
//!
//! Fields remember the index box on which their values are meaningful.
//! Differentiating along a non-periodic axis shrinks that box by the
//! stencil radius; periodic axes wrap around and never shrink.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub periodic: bool,
}

impl Axis {
    /// A periodic axis samples `[lo, hi)`; a plain one samples `[lo, hi]`.
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, count: usize, periodic: bool) -> Result<Self> {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Input(format!("axis {name}: need finite lo < hi")));
        }
        if count < 2 {
            return Err(Error::Input(format!("axis {name}: need at least 2 samples")));
        }
        Ok(Axis {
            name,
            lo,
            hi,
            count,
            periodic,
        })
    }

    pub fn step(&self) -> f64 {
        if self.periodic {
            (self.hi - self.lo) / self.count as f64
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step()
    }

    /// Same interval with the step divided by `k`.
    pub fn refined(&self, k: usize) -> Axis {
        let count = if self.periodic {
            self.count * k
        } else {
            (self.count - 1) * k + 1
        };
        Axis {
            count,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    axes: Vec<Axis>,
    #[serde(skip)]
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Input("a grid needs at least one axis".into()));
        }
        let mut strides = vec![1; axes.len()];
        for i in (0..axes.len() - 1).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].count;
        }
        Ok(Grid { axes, strides })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (o, s) in out.iter_mut().zip(&self.strides) {
            *o = flat / s;
            flat %= s;
        }
        out
    }

    /// Parameter values at a flat index.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi(flat)
            .iter()
            .zip(&self.axes)
            .map(|(i, a)| a.coord(*i))
            .collect()
    }

    pub fn refined(&self, k: usize) -> Grid {
        Grid::new(self.axes.iter().map(|a| a.refined(k)).collect()).expect("refined grid is valid")
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.count == b.count && a.periodic == b.periodic)
    }

    fn neighbor(&self, flat: usize, multi_i: usize, axis: usize, offset: isize) -> usize {
        let a = &self.axes[axis];
        let target = if a.periodic {
            (multi_i as isize + offset).rem_euclid(a.count as isize) as usize
        } else {
            (multi_i as isize + offset) as usize
        };
        flat - multi_i * self.strides[axis] + target * self.strides[axis]
    }
}

/// Half-open index box `[lo, hi)` per axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl Region {
    pub fn full(grid: &Grid) -> Self {
        Region {
            lo: vec![0; grid.dim()],
            hi: grid.counts(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l >= h)
    }

    pub fn contains(&self, multi: &[usize]) -> bool {
        multi
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(i, (l, h))| i >= l && i < h)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        Region {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    /// Shrinks a non-periodic axis by `r` points at each end.
    pub fn shrink(&self, grid: &Grid, axis: usize, r: usize) -> Region {
        let mut out = self.clone();
        if !grid.axes[axis].periodic {
            out.lo[axis] += r;
            out.hi[axis] = out.hi[axis].saturating_sub(r);
        }
        out
    }

    pub fn shrink_all(&self, grid: &Grid, r: usize) -> Region {
        (0..grid.dim()).fold(self.clone(), |acc, a| acc.shrink(grid, a, r))
    }

    pub fn count(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    /// Flat indices inside the box, in row-major order.
    pub fn indices(&self, grid: &Grid) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count());
        if self.is_empty() {
            return out;
        }
        let mut multi = self.lo.clone();
        loop {
            out.push(grid.flat(&multi));
            let mut axis = multi.len();
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                multi[axis] += 1;
                if multi[axis] < self.hi[axis] {
                    break;
                }
                multi[axis] = self.lo[axis];
            }
        }
    }

    /// Points lost at each end of every axis, relative to the full grid.
    pub fn margins(&self, grid: &Grid) -> Vec<(usize, usize)> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(grid.axes())
            .map(|((l, h), a)| (*l, a.count - h))
            .collect()
    }
}

/// Accuracy order of the central difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FdOrder {
    Second,
    #[default]
    Fourth,
}

impl FdOrder {
    pub fn radius(self) -> usize {
        match self {
            FdOrder::Second => 1,
            FdOrder::Fourth => 2,
        }
    }

    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            2 => Ok(FdOrder::Second),
            4 => Ok(FdOrder::Fourth),
            other => Err(Error::Input(format!("finite-difference order must be 2 or 4, got {other}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            FdOrder::Second => 2,
            FdOrder::Fourth => 4,
        }
    }
}

/// `comps` values at every grid point, valid on `region`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    comps: usize,
    data: Vec<f64>,
    region: Region,
}

impl Field {
    pub fn new(grid: &Grid, comps: usize, region: Region) -> Self {
        Field {
            comps,
            data: vec![f64::NAN; grid.len() * comps],
            region,
        }
    }

    pub fn from_fn(
        grid: &Grid,
        comps: usize,
        region: Region,
        mut f: impl FnMut(usize, &mut [f64]),
    ) -> Self {
        let mut out = Field::new(grid, comps, region);
        for flat in out.region.indices(grid) {
            let slot = &mut out.data[flat * comps..(flat + 1) * comps];
            slot.fill(0.0);
            f(flat, slot);
        }
        out
    }

    pub fn try_from_fn(
        grid: &Grid,
        comps: usize,
        region: Region,
        mut f: impl FnMut(usize, &mut [f64]) -> Result<()>,
    ) -> Result<Self> {
        let mut out = Field::new(grid, comps, region);
        for flat in out.region.indices(grid) {
            let slot = &mut out.data[flat * comps..(flat + 1) * comps];
            slot.fill(0.0);
            f(flat, slot)?;
        }
        Ok(out)
    }

    pub fn comps(&self) -> usize {
        self.comps
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn at(&self, flat: usize) -> &[f64] {
        &self.data[flat * self.comps..(flat + 1) * self.comps]
    }

    pub fn at_mut(&mut self, flat: usize) -> &mut [f64] {
        &mut self.data[flat * self.comps..(flat + 1) * self.comps]
    }

    /// A single component as its own field.
    pub fn component(&self, grid: &Grid, c: usize) -> Field {
        Field::from_fn(grid, 1, self.region.clone(), |flat, out| {
            out[0] = self.at(flat)[c];
        })
    }

    pub fn restrict(&self, region: &Region) -> Field {
        Field {
            comps: self.comps,
            data: self.data.clone(),
            region: self.region.intersect(region),
        }
    }

    /// `∂/∂s_axis` of every component.
    pub fn partial(&self, grid: &Grid, axis: usize, order: FdOrder) -> Field {
        let r = order.radius();
        let region = self.region.shrink(grid, axis, r);
        let h = grid.axes[axis].step();
        let comps = self.comps;
        let mut out = Field::new(grid, comps, region);
        for flat in out.region.indices(grid) {
            let i = grid.multi(flat)[axis];
            let nb = |o: isize| grid.neighbor(flat, i, axis, o);
            match order {
                FdOrder::Second => {
                    let (p, m) = (nb(1), nb(-1));
                    for c in 0..comps {
                        out.data[flat * comps + c] =
                            (self.data[p * comps + c] - self.data[m * comps + c]) / (2.0 * h);
                    }
                }
                FdOrder::Fourth => {
                    let (m2, m1, p1, p2) = (nb(-2), nb(-1), nb(1), nb(2));
                    for c in 0..comps {
                        let v = |k: usize| self.data[k * comps + c];
                        out.data[flat * comps + c] =
                            (v(m2) - 8.0 * v(m1) + 8.0 * v(p1) - v(p2)) / (12.0 * h);
                    }
                }
            }
        }
        out
    }

    /// All first partials, laid out as `[axis][component]`.
    pub fn gradient(&self, grid: &Grid, order: FdOrder) -> Field {
        let parts: Vec<Field> = (0..grid.dim()).map(|a| self.partial(grid, a, order)).collect();
        let region = parts
            .iter()
            .fold(self.region.clone(), |acc, p| acc.intersect(&p.region));
        let comps = self.comps;
        Field::from_fn(grid, grid.dim() * comps, region, |flat, out| {
            for (a, p) in parts.iter().enumerate() {
                out[a * comps..(a + 1) * comps].copy_from_slice(p.at(flat));
            }
        })
    }

    /// `Σ_a ∂_a F^a` for a field laid out as `[axis][component]`.
    pub fn divergence(&self, grid: &Grid, order: FdOrder) -> Field {
        let m = grid.dim();
        assert_eq!(self.comps % m, 0, "divergence needs [axis][component] layout");
        let k = self.comps / m;
        let parts: Vec<Field> = (0..m).map(|a| self.partial(grid, a, order)).collect();
        let region = parts
            .iter()
            .fold(self.region.clone(), |acc, p| acc.intersect(&p.region));
        Field::from_fn(grid, k, region, |flat, out| {
            for (a, p) in parts.iter().enumerate() {
                let v = p.at(flat);
                for c in 0..k {
                    out[c] += v[a * k + c];
                }
            }
        })
    }

    /// Largest absolute value of any component inside the region.
    pub fn max_abs(&self, grid: &Grid) -> f64 {
        self.region
            .indices(grid)
            .iter()
            .flat_map(|&f| self.at(f).iter())
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// Largest absolute value and the grid index where it occurs.
    pub fn argmax_abs(&self, grid: &Grid) -> Option<(f64, Vec<usize>)> {
        let mut best: Option<(f64, usize)> = None;
        for flat in self.region.indices(grid) {
            let v = self.at(flat).iter().fold(0.0, |a: f64, x| a.max(x.abs()));
            if best.is_none_or(|(b, _)| v > b || v.is_nan()) {
                best = Some((v, flat));
            }
        }
        best.map(|(v, flat)| (v, grid.multi(flat)))
    }

    /// Values of one component over the region, in row-major order.
    pub fn values(&self, grid: &Grid, c: usize) -> Vec<f64> {
        self.region
            .indices(grid)
            .iter()
            .map(|&f| self.at(f)[c])
            .collect()
    }
}

/// Value of component `c` at parameter `coord` along `axis`, holding the
/// other indices of `multi` fixed. Uses the four nearest valid samples.
pub fn interpolate(grid: &Grid, field: &Field, c: usize, multi: &[usize], axis: usize, coord: f64) -> Result<f64> {
    let ax = &grid.axes[axis];
    let region = field.region();
    let (lo, hi) = (region.lo[axis], region.hi[axis]);
    if hi < lo + 4 {
        return Err(Error::InsufficientInterior(format!(
            "interpolation along {} needs four valid samples",
            ax.name
        )));
    }
    let pos = (coord - ax.lo) / ax.step();
    let start = (pos.floor() as isize - 1).clamp(lo as isize, hi as isize - 4) as usize;
    let mut idx = multi.to_vec();
    let mut total = 0.0;
    for j in start..start + 4 {
        let mut w = 1.0;
        for k in start..start + 4 {
            if k != j {
                w *= (pos - k as f64) / (j as f64 - k as f64);
            }
        }
        idx[axis] = j;
        total += w * field.at(grid.flat(&idx))[c];
    }
    Ok(total)
}

/// Pointwise map over several fields; the result lives on the intersection
/// of their regions.
pub fn zip_map(
    grid: &Grid,
    inputs: &[&Field],
    comps: usize,
    mut f: impl FnMut(&[&[f64]], &mut [f64]),
) -> Field {
    let region = inputs
        .iter()
        .skip(1)
        .fold(inputs[0].region.clone(), |acc, x| acc.intersect(&x.region));
    let mut args: Vec<&[f64]> = Vec::with_capacity(inputs.len());
    Field::from_fn(grid, comps, region, |flat, out| {
        args.clear();
        args.extend(inputs.iter().map(|x| x.at(flat)));
        f(&args, out);
    })
}

pub fn try_zip_map(
    grid: &Grid,
    inputs: &[&Field],
    comps: usize,
    mut f: impl FnMut(usize, &[&[f64]], &mut [f64]) -> Result<()>,
) -> Result<Field> {
    let region = inputs
        .iter()
        .skip(1)
        .fold(inputs[0].region.clone(), |acc, x| acc.intersect(&x.region));
    let mut args: Vec<&[f64]> = Vec::with_capacity(inputs.len());
    Field::try_from_fn(grid, comps, region, |flat, out| {
        args.clear();
        args.extend(inputs.iter().map(|x| x.at(flat)));
        f(flat, &args, out)
    })
}

/// Quadrature weights for `count` equally spaced samples with step `h`.
///
/// Composite Simpson, closing with a 3/8 panel when the interval count
/// is odd.
fn simpson_weights(count: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; count];
    let intervals = count - 1;
    match intervals {
        0 => return w,
        1 => {
            w[0] = 0.5 * h;
            w[1] = 0.5 * h;
            return w;
        }
        2 => {
            return vec![h / 3.0, 4.0 * h / 3.0, h / 3.0];
        }
        _ => {}
    }
    let simpson_intervals = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    for k in (0..simpson_intervals).step_by(2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if simpson_intervals < intervals {
        let s = simpson_intervals;
        let c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    w
}

/// Integral of component 0 of `f` over its region. Periodic axes must be
/// fully covered and use the rectangle rule.
pub fn integrate(grid: &Grid, f: &Field) -> Result<f64> {
    let region = f.region();
    if region.is_empty() {
        return Err(Error::InsufficientInterior("integration region is empty".into()));
    }
    let mut weights = Vec::with_capacity(grid.dim());
    for (a, axis) in grid.axes().iter().enumerate() {
        let n = region.hi[a] - region.lo[a];
        if axis.periodic {
            if n != axis.count {
                return Err(Error::InsufficientInterior(format!(
                    "periodic axis {} is not fully covered",
                    axis.name
                )));
            }
            weights.push(vec![axis.step(); n]);
        } else {
            weights.push(simpson_weights(n, axis.step()));
        }
    }
    let mut total = 0.0;
    for flat in region.indices(grid) {
        let multi = grid.multi(flat);
        let w: f64 = multi
            .iter()
            .enumerate()
            .map(|(a, i)| weights[a][i - region.lo[a]])
            .product();
        total += w * f.at(flat)[0];
    }
    Ok(total)
}
