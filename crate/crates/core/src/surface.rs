//! Parametrized hypersurfaces with normals, evaluated on Taylor jets.
//!
//! A [`ContactSurface`] maps grid parameters to a contact element `(x, ξ)`
//! together with its partial derivatives. Builtins differentiate closed
//! forms; [`TransformedSurface`] and [`EmbeddedSurface`] push jets of
//! another surface through a Laguerre transformation or a space-form
//! embedding.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::group::LaguerreTransform;
use crate::jet::{self, Jet};

/// The ambient geometry a hypersurface lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    /// Euclidean ℝⁿ.
    #[serde(rename = "r3")]
    Euclidean,
    /// Lorentzian ℝⁿ₁, last coordinate timelike.
    #[serde(rename = "r31")]
    Lorentzian,
    /// The degenerate hyperplane ℝⁿ₀ ⊂ ℝ^{n+1}₁ orthogonal to ν = (1,0,…,0,1).
    #[serde(rename = "r30")]
    Degenerate,
}

impl Space {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "r3" | "rn" | "euclidean" => Ok(Space::Euclidean),
            "r31" | "rn1" | "lorentzian" => Ok(Space::Lorentzian),
            "r30" | "rn0" | "degenerate" => Ok(Space::Degenerate),
            other => Err(Error::Input(format!(
                "unknown space {other:?}, expected r3, r31 or r30"
            ))),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Space::Euclidean => "r3",
            Space::Lorentzian => "r31",
            Space::Degenerate => "r30",
        }
    }

    /// Number of coordinates of a point for base dimension `n`.
    pub fn ambient_dim(self, n: usize) -> usize {
        match self {
            Space::Euclidean | Space::Lorentzian => n,
            Space::Degenerate => n + 1,
        }
    }

    /// Diagonal of the ambient bilinear form.
    pub fn signature(self, n: usize) -> Vec<f64> {
        let d = self.ambient_dim(n);
        let mut g = vec![1.0; d];
        if self != Space::Euclidean {
            g[d - 1] = -1.0;
        }
        g
    }

    /// The slots `2..n+3` of a Lie-sphere vector built from an ambient
    /// vector `v` and the constant `c` (0 for points, 1 for normals).
    pub fn tail<T: Clone>(self, v: &[T], c: T) -> Vec<T> {
        match self {
            Space::Euclidean => {
                let mut out = v.to_vec();
                out.push(c);
                out
            }
            Space::Lorentzian => {
                let mut out = Vec::with_capacity(v.len() + 1);
                out.push(c);
                out.extend_from_slice(v);
                out
            }
            Space::Degenerate => v.to_vec(),
        }
    }

    /// The vector `c` with `⟨Y, c⟩ = ρ` and `⟨η, c⟩ = r` in ℝ^{n+3}₂.
    pub fn radius_probe(self, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n + 3];
        match self {
            Space::Euclidean => c[n + 2] = -1.0,
            Space::Lorentzian => c[2] = 1.0,
            Space::Degenerate => {
                c[2] = 1.0;
                c[n + 2] = 1.0;
            }
        }
        c
    }
}

/// `⟨a, b⟩` for a diagonal signature.
pub fn form(sig: &[f64], a: &[f64], b: &[f64]) -> f64 {
    sig.iter().zip(a.iter().zip(b)).map(|(g, (x, y))| g * x * y).sum()
}

/// Point-sphere and tangent-plane vectors of a contact element of any
/// space form, in ℝ^{n+3}₂.
pub fn lie_vectors_in(space: Space, x: &[f64], xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len() - usize::from(space == Space::Degenerate);
    let sig = space.signature(n);
    let xx = form(&sig, x, x);
    let xxi = form(&sig, x, xi);
    let mut g1 = vec![0.5 * (1.0 + xx), 0.5 * (1.0 - xx)];
    g1.extend(space.tail(x, 0.0));
    let mut g2 = vec![xxi, -xxi];
    g2.extend(space.tail(xi, 1.0));
    (g1, g2)
}

fn lie_jets(space: Space, sig: &[f64], x: &[Jet], xi: &[Jet]) -> (Vec<Jet>, Vec<Jet>) {
    let xx = jet::dot(sig, x, x);
    let xxi = jet::dot(sig, x, xi);
    let zero = &xx * 0.0;
    let one = &zero + 1.0;
    let mut g1 = vec![(&xx + 1.0) * 0.5, (1.0 - &xx) * 0.5];
    g1.extend(space.tail(x, zero));
    let mut g2 = vec![xxi.clone(), -&xxi];
    g2.extend(space.tail(xi, one));
    (g1, g2)
}

fn row_times_jets(x: &[Jet], t: &DMatrix<f64>) -> Vec<Jet> {
    let d = x.len();
    (0..d)
        .map(|j| {
            let mut acc = &x[0] * t[(0, j)];
            for (i, xi) in x.iter().enumerate().skip(1) {
                let c = t[(i, j)];
                if c != 0.0 {
                    acc = acc + xi * c;
                }
            }
            acc
        })
        .collect()
}

/// Euclidean contact element of the Lie line spanned by `a` and the plane
/// member `b`, on jets.
fn contact_from_span_jets(a: &[Jet], b: &[Jet]) -> Result<(Vec<Jet>, Vec<Jet>)> {
    let d = a.len();
    let n = d - 3;
    let bl = &b[d - 1];
    let scale = b.iter().map(|v| v.value().abs()).fold(0.0, f64::max);
    if bl.value().abs() <= 1e-12 * scale {
        return Err(Error::InvalidElement(
            "image has no finite tangent plane".into(),
        ));
    }
    let inv = bl.recip();
    let xi: Vec<Jet> = b[2..n + 2].iter().map(|v| v * &inv).collect();
    let k = &a[d - 1] * &inv;
    let point: Vec<Jet> = a.iter().zip(b).map(|(p, q)| p - &k * q).collect();
    let pairing = &point[0] + &point[1];
    if pairing.value().abs() <= 1e-12 {
        return Err(Error::InvalidElement("image has no finite point".into()));
    }
    let pinv = pairing.recip();
    let x = point[2..n + 2].iter().map(|v| v * &pinv).collect();
    Ok((x, xi))
}

/// A contact element with derivatives, for one parameter point.
#[derive(Debug, Clone)]
pub struct ContactJet {
    pub x: Vec<Jet>,
    pub xi: Vec<Jet>,
}

pub trait ContactSurface: fmt::Debug + Send + Sync {
    fn space(&self) -> Space;

    /// Dimension n of the space form; the surface has n − 1 parameters.
    fn base_dim(&self) -> usize;

    /// Contact element at `params` with jets of at least order `order`.
    fn contact_jet(&self, params: &[f64], order: usize) -> Result<ContactJet>;

    fn metadata(&self) -> Value;
}

/// Which of the two unit normals a builtin uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Outward,
    Inward,
    Up,
    Down,
    Future,
    Past,
    /// The unique normal with `⟨ξ, ν⟩ = 1` in ℝⁿ₀.
    Canonical,
}

impl Orientation {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| Error::Input(format!("unknown normal orientation {s:?}")))
    }

    fn name(self) -> &'static str {
        match self {
            Orientation::Outward => "outward",
            Orientation::Inward => "inward",
            Orientation::Up => "up",
            Orientation::Down => "down",
            Orientation::Future => "future",
            Orientation::Past => "past",
            Orientation::Canonical => "canonical",
        }
    }
}

/// Closed-form surfaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Torus of revolution with tube radius `minor` around a circle of
    /// radius `major`; parameters (u, v).
    Torus { major: f64, minor: f64 },
    /// Round sphere; parameters (latitude, longitude).
    Sphere { radius: f64 },
    /// Circular cylinder; parameters (angle, height).
    Cylinder { radius: f64 },
    /// Graph `x_n = Σ a_i s_i²/2 + b_i s_i³/6` over ℝ^{n−1}.
    TranslationalGraph { quad: Vec<f64>, cubic: Vec<f64> },
    /// The maximal catenoid `(u cos v, u sin v, asinh u)` of ℝ³₁.
    MaximalCatenoid,
    /// The same catenoid as `(sinh s cos v, sinh s sin v, s)`.
    MaximalCatenoidArclength,
    /// Spacelike graph `x_n = Σ a_i s_i²/2 + b_i s_i³/6` in ℝⁿ₁.
    LorentzGraph { quad: Vec<f64>, cubic: Vec<f64> },
    /// `x = (h, s, h)` in ℝⁿ₀ with `h = Σ a_i s_i²/2 + b_i s_i³/6`.
    DegenerateGraph { quad: Vec<f64>, cubic: Vec<f64> },
    /// `x = (h, s, h)` in ℝ³₀ with the harmonic `h = c·eᵘ cos v`.
    HarmonicGraph { scale: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Builtin {
    shape: Shape,
    orientation: Orientation,
}

fn get_f64(params: &Map<String, Value>, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Input(format!("parameter {key} must be a finite number"))),
        None => default.ok_or_else(|| Error::Input(format!("missing parameter {key}"))),
    }
}

fn get_vec(params: &Map<String, Value>, key: &str, len: Option<usize>) -> Result<Vec<f64>> {
    let v = match params.get(key) {
        Some(Value::Array(items)) => items
            .iter()
            .map(|x| {
                x.as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Input(format!("parameter {key} must hold numbers")))
            })
            .collect::<Result<Vec<f64>>>()?,
        Some(_) => return Err(Error::Input(format!("parameter {key} must be an array"))),
        None => match len {
            Some(n) => vec![0.0; n],
            None => return Err(Error::Input(format!("missing parameter {key}"))),
        },
    };
    if let Some(n) = len {
        if v.len() != n {
            return Err(Error::Input(format!("parameter {key} needs {n} entries")));
        }
    }
    Ok(v)
}

fn graph_params(params: &Map<String, Value>) -> Result<(Vec<f64>, Vec<f64>)> {
    let quad = get_vec(params, "a", None)?;
    let cubic = get_vec(params, "b", Some(quad.len()))?;
    if quad.len() < 2 {
        return Err(Error::Input("graphs need at least two parameters".into()));
    }
    Ok((quad, cubic))
}

impl Builtin {
    pub fn new(shape: Shape, orientation: Orientation) -> Result<Self> {
        let allowed = Self::orientations(&shape);
        if !allowed.contains(&orientation) {
            return Err(Error::Input(format!(
                "normal {:?} is not available here, use one of {:?}",
                orientation.name(),
                allowed.iter().map(|o| o.name()).collect::<Vec<_>>()
            )));
        }
        match &shape {
            Shape::Torus { major, minor } if !(*minor > 0.0 && major > minor) => {
                return Err(Error::Input("torus needs 0 < a < R".into()))
            }
            Shape::Sphere { radius } | Shape::Cylinder { radius } if *radius <= 0.0 => {
                return Err(Error::Input("radius must be positive".into()))
            }
            _ => {}
        }
        Ok(Builtin { shape, orientation })
    }

    fn orientations(shape: &Shape) -> &'static [Orientation] {
        match shape {
            Shape::Torus { .. } | Shape::Sphere { .. } | Shape::Cylinder { .. } => {
                &[Orientation::Outward, Orientation::Inward]
            }
            Shape::TranslationalGraph { .. } => &[Orientation::Up, Orientation::Down],
            Shape::MaximalCatenoid
            | Shape::MaximalCatenoidArclength
            | Shape::LorentzGraph { .. } => &[Orientation::Future, Orientation::Past],
            Shape::DegenerateGraph { .. } | Shape::HarmonicGraph { .. } => &[Orientation::Canonical],
        }
    }

    /// Builds a builtin from its name, a parameter object and a normal.
    pub fn from_spec(name: &str, params: &Map<String, Value>, normal: Option<&str>) -> Result<Self> {
        let shape = match name {
            "torus" => Shape::Torus {
                major: get_f64(params, "R", None)?,
                minor: get_f64(params, "a", None)?,
            },
            "sphere" => Shape::Sphere {
                radius: get_f64(params, "radius", Some(1.0))?,
            },
            "cylinder" => Shape::Cylinder {
                radius: get_f64(params, "radius", Some(1.0))?,
            },
            "translational_graph" => {
                let (quad, cubic) = graph_params(params)?;
                Shape::TranslationalGraph { quad, cubic }
            }
            "maximal_catenoid_r31" => match params.get("parametrization").and_then(Value::as_str) {
                None | Some("radial") => Shape::MaximalCatenoid,
                Some("arclength") => Shape::MaximalCatenoidArclength,
                Some(other) => {
                    return Err(Error::Input(format!(
                        "unknown catenoid parametrization {other:?}"
                    )))
                }
            },
            "lorentz_graph_r31" => {
                let (quad, cubic) = graph_params(params)?;
                Shape::LorentzGraph { quad, cubic }
            }
            "graph_r30" => {
                let (quad, cubic) = graph_params(params)?;
                Shape::DegenerateGraph { quad, cubic }
            }
            "harmonic_graph_r30" => Shape::HarmonicGraph {
                scale: get_f64(params, "c", Some(1.0))?,
            },
            other => return Err(Error::Input(format!("unknown builtin {other:?}"))),
        };
        let orientation = match normal {
            Some(s) => Orientation::parse(s)?,
            None if Self::orientations(&shape) == [Orientation::Canonical] => Orientation::Canonical,
            None => {
                return Err(Error::Input(format!(
                    "builtin {name} needs an explicit \"normal\" orientation"
                )))
            }
        };
        Builtin::new(shape, orientation)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn name(&self) -> &'static str {
        match self.shape {
            Shape::Torus { .. } => "torus",
            Shape::Sphere { .. } => "sphere",
            Shape::Cylinder { .. } => "cylinder",
            Shape::TranslationalGraph { .. } => "translational_graph",
            Shape::MaximalCatenoid | Shape::MaximalCatenoidArclength => "maximal_catenoid_r31",
            Shape::LorentzGraph { .. } => "lorentz_graph_r31",
            Shape::DegenerateGraph { .. } => "graph_r30",
            Shape::HarmonicGraph { .. } => "harmonic_graph_r30",
        }
    }

    fn point(&self, s: &[Jet]) -> Vec<Jet> {
        match &self.shape {
            Shape::Torus { major, minor } => {
                let (u, v) = (&s[0], &s[1]);
                let ring = u.cos() * *minor + *major;
                vec![&ring * v.cos(), &ring * v.sin(), u.sin() * *minor]
            }
            Shape::Sphere { radius } => {
                let (u, v) = (&s[0], &s[1]);
                let cu = u.cos() * *radius;
                vec![&cu * v.cos(), &cu * v.sin(), u.sin() * *radius]
            }
            Shape::Cylinder { radius } => {
                let (u, v) = (&s[0], &s[1]);
                vec![u.cos() * *radius, u.sin() * *radius, v.clone()]
            }
            Shape::TranslationalGraph { quad, cubic } | Shape::LorentzGraph { quad, cubic } => {
                let mut out: Vec<Jet> = s.to_vec();
                out.push(graph_height(s, quad, cubic));
                out
            }
            Shape::MaximalCatenoid => {
                let (u, v) = (&s[0], &s[1]);
                vec![u * v.cos(), u * v.sin(), u.asinh()]
            }
            Shape::MaximalCatenoidArclength => {
                let (t, v) = (&s[0], &s[1]);
                let sh = t.sinh();
                vec![&sh * v.cos(), &sh * v.sin(), t.clone()]
            }
            Shape::DegenerateGraph { quad, cubic } => {
                let h = graph_height(s, quad, cubic);
                degenerate_point(&h, s)
            }
            Shape::HarmonicGraph { scale } => {
                let h = s[0].exp() * s[1].cos() * *scale;
                degenerate_point(&h, s)
            }
        }
    }

    /// Sign applied to the generalized cross product of `∂x`.
    fn cross_sign(&self) -> f64 {
        match (&self.shape, self.orientation) {
            (Shape::Torus { .. } | Shape::Sphere { .. }, Orientation::Outward) => -1.0,
            (Shape::Torus { .. } | Shape::Sphere { .. }, _) => 1.0,
            (Shape::Cylinder { .. }, Orientation::Outward) => 1.0,
            (Shape::Cylinder { .. }, _) => -1.0,
            (_, Orientation::Down) => -1.0,
            _ => 1.0,
        }
    }
}

fn graph_height(s: &[Jet], quad: &[f64], cubic: &[f64]) -> Jet {
    let mut h = &s[0] * 0.0;
    for (i, si) in s.iter().enumerate() {
        let sq = si * si;
        h = h + &sq * (0.5 * quad[i]) + &sq * si * (cubic[i] / 6.0);
    }
    h
}

fn degenerate_point(h: &Jet, s: &[Jet]) -> Vec<Jet> {
    let mut out = vec![h.clone()];
    out.extend_from_slice(s);
    out.push(h.clone());
    out
}

impl ContactSurface for Builtin {
    fn space(&self) -> Space {
        match self.shape {
            Shape::MaximalCatenoid | Shape::MaximalCatenoidArclength | Shape::LorentzGraph { .. } => {
                Space::Lorentzian
            }
            Shape::DegenerateGraph { .. } | Shape::HarmonicGraph { .. } => Space::Degenerate,
            _ => Space::Euclidean,
        }
    }

    fn base_dim(&self) -> usize {
        match &self.shape {
            Shape::TranslationalGraph { quad, .. }
            | Shape::LorentzGraph { quad, .. }
            | Shape::DegenerateGraph { quad, .. } => quad.len() + 1,
            _ => 3,
        }
    }

    fn contact_jet(&self, params: &[f64], order: usize) -> Result<ContactJet> {
        let m = self.base_dim() - 1;
        if params.len() != m {
            return Err(Error::usage(format!(
                "{} takes {m} parameters, got {}",
                self.name(),
                params.len()
            )));
        }
        let s: Vec<Jet> = (0..m)
            .map(|a| Jet::variable(m, order + 1, a, params[a]))
            .collect();
        let x = self.point(&s);
        let xi = match self.space() {
            Space::Degenerate => {
                // ξ = (1 + ξ₁, −∇h, ξ₁) with ξ₁ = −(1 + |∇h|²)/2
                let h = &x[0];
                let grad: Vec<Jet> = (0..m).map(|a| h.partial(a)).collect();
                let g2 = jet::dot(&vec![1.0; m], &grad, &grad);
                let xi1 = (g2 + 1.0) * -0.5;
                let mut xi = vec![&xi1 + 1.0];
                xi.extend(grad.iter().map(|g| -g));
                xi.push(xi1);
                xi
            }
            space => {
                let rows: Vec<Vec<Jet>> = (0..m)
                    .map(|a| x.iter().map(|c| c.partial(a)).collect())
                    .collect();
                let mut normal = jet::cross(&rows);
                let sig = space.signature(self.base_dim());
                for (c, g) in normal.iter_mut().zip(&sig) {
                    if *g < 0.0 {
                        *c = -&*c;
                    }
                }
                let q = jet::dot(&sig, &normal, &normal);
                let len = match space {
                    Space::Euclidean => q.sqrt(),
                    _ => {
                        if q.value() >= 0.0 {
                            return Err(Error::degenerate(
                                vec![],
                                format!("{} is not spacelike at {params:?}", self.name()),
                            ));
                        }
                        (-q).sqrt()
                    }
                };
                let mut sign = self.cross_sign();
                if space == Space::Lorentzian {
                    let future = normal[normal.len() - 1].value() > 0.0;
                    let want_future = self.orientation == Orientation::Future;
                    sign = if future == want_future { 1.0 } else { -1.0 };
                }
                let inv = len.recip() * sign;
                normal.iter().map(|c| c * &inv).collect()
            }
        };
        Ok(ContactJet { x, xi })
    }

    fn metadata(&self) -> Value {
        let params = match &self.shape {
            Shape::Torus { major, minor } => json!({"R": major, "a": minor}),
            Shape::Sphere { radius } | Shape::Cylinder { radius } => json!({"radius": radius}),
            Shape::TranslationalGraph { quad, cubic }
            | Shape::LorentzGraph { quad, cubic }
            | Shape::DegenerateGraph { quad, cubic } => json!({"a": quad, "b": cubic}),
            Shape::MaximalCatenoid => json!({"parametrization": "radial"}),
            Shape::MaximalCatenoidArclength => json!({"parametrization": "arclength"}),
            Shape::HarmonicGraph { scale } => json!({"c": scale}),
        };
        json!({
            "builtin": self.name(),
            "params": params,
            "normal": self.orientation.name(),
            "space": self.space().tag(),
        })
    }
}

/// A Euclidean surface moved by a Laguerre transformation.
#[derive(Debug, Clone)]
pub struct TransformedSurface {
    base: Arc<dyn ContactSurface>,
    transform: LaguerreTransform,
}

impl TransformedSurface {
    pub fn new(base: Arc<dyn ContactSurface>, transform: LaguerreTransform) -> Result<Self> {
        if base.space() != Space::Euclidean {
            return Err(Error::usage(
                "Laguerre transformations act on Euclidean surfaces; embed first",
            ));
        }
        if base.base_dim() != transform.base_dim() {
            return Err(Error::usage("surface and transform differ in dimension"));
        }
        Ok(TransformedSurface { base, transform })
    }
}

impl ContactSurface for TransformedSurface {
    fn space(&self) -> Space {
        Space::Euclidean
    }

    fn base_dim(&self) -> usize {
        self.base.base_dim()
    }

    fn contact_jet(&self, params: &[f64], order: usize) -> Result<ContactJet> {
        // the image point mixes in ξ, so it needs one more order of the base
        let cj = self.base.contact_jet(params, order + 1)?;
        let sig = vec![1.0; self.base_dim()];
        let (g1, g2) = lie_jets(Space::Euclidean, &sig, &cj.x, &cj.xi);
        let t = self.transform.matrix();
        let (x, xi) = contact_from_span_jets(&row_times_jets(&g1, t), &row_times_jets(&g2, t))?;
        Ok(ContactJet { x, xi })
    }

    fn metadata(&self) -> Value {
        json!({
            "transformed": self.base.metadata(),
            "matrix": crate::group::matrix_rows(self.transform.matrix()),
        })
    }
}

/// A space-form surface carried into ℝⁿ by the Laguerre embedding.
#[derive(Debug, Clone)]
pub struct EmbeddedSurface {
    base: Arc<dyn ContactSurface>,
}

impl EmbeddedSurface {
    pub fn new(base: Arc<dyn ContactSurface>) -> Result<Self> {
        if base.space() == Space::Euclidean {
            return Err(Error::usage("surface is already Euclidean"));
        }
        Ok(EmbeddedSurface { base })
    }

    pub fn base(&self) -> &Arc<dyn ContactSurface> {
        &self.base
    }
}

impl ContactSurface for EmbeddedSurface {
    fn space(&self) -> Space {
        Space::Euclidean
    }

    fn base_dim(&self) -> usize {
        self.base.base_dim()
    }

    fn contact_jet(&self, params: &[f64], order: usize) -> Result<ContactJet> {
        let cj = self.base.contact_jet(params, order + 1)?;
        let space = self.base.space();
        let sig = space.signature(self.base_dim());
        let xi1 = cj.xi[cj.xi.len() - 1].value();
        if xi1.abs() <= 1e-12 {
            return Err(Error::EmbeddingDomain(format!(
                "normal has vanishing last component at {params:?}"
            )));
        }
        let (g1, g2) = lie_jets(space, &sig, &cj.x, &cj.xi);
        let (x, xi) = contact_from_span_jets(&g1, &g2)?;
        Ok(ContactJet { x, xi })
    }

    fn metadata(&self) -> Value {
        json!({ "embedded": self.base.metadata() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group;
    use crate::spheres::ContactElement;

    fn torus() -> Builtin {
        Builtin::new(Shape::Torus { major: 2.0, minor: 1.0 }, Orientation::Outward).unwrap()
    }

    #[test]
    fn torus_contact_element() {
        let cj = torus().contact_jet(&[0.0, 0.0], 2).unwrap();
        let x: Vec<f64> = cj.x.iter().map(Jet::value).collect();
        let xi: Vec<f64> = cj.xi.iter().map(Jet::value).collect();
        assert_eq!(x, vec![3.0, 0.0, 0.0]);
        assert!((xi[0] - 1.0).abs() < 1e-15 && xi[1].abs() < 1e-15 && xi[2].abs() < 1e-15);
        // ∂_u ξ = ∂_u x / a for the tube circle
        for c in 0..3 {
            assert!((cj.xi[c].d1(0) - cj.x[c].d1(0)).abs() < 1e-14);
        }
        assert!(cj.xi[0].order() >= 2);
    }

    #[test]
    fn orientation_rules() {
        let inward = Builtin::new(Shape::Torus { major: 2.0, minor: 1.0 }, Orientation::Inward).unwrap();
        assert!(inward.contact_jet(&[0.0, 0.0], 1).unwrap().xi[0].value() < 0.0);
        let cyl = Builtin::new(Shape::Cylinder { radius: 1.0 }, Orientation::Outward).unwrap();
        assert!(cyl.contact_jet(&[0.0, 0.5], 1).unwrap().xi[0].value() > 0.99);
        assert!(Builtin::new(Shape::Cylinder { radius: 1.0 }, Orientation::Up).is_err());
        assert!(Builtin::from_spec("torus", &Map::new(), Some("outward")).is_err());
    }

    #[test]
    fn catenoid_normal_is_future_unit_timelike() {
        let cat = Builtin::new(Shape::MaximalCatenoid, Orientation::Future).unwrap();
        let (u, v) = (1.3, 0.4);
        let cj = cat.contact_jet(&[u, v], 1).unwrap();
        let xi: Vec<f64> = cj.xi.iter().map(Jet::value).collect();
        let expect = [v.cos() / u, v.sin() / u, (1.0 + u * u).sqrt() / u];
        for (a, b) in xi.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
        let sig = Space::Lorentzian.signature(3);
        assert!((form(&sig, &xi, &xi) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_graph_normal() {
        let g = Builtin::from_spec(
            "graph_r30",
            serde_json::from_str::<Value>(r#"{"a":[1,-1],"b":[0.3,0.2]}"#)
                .unwrap()
                .as_object()
                .unwrap(),
            None,
        )
        .unwrap();
        let cj = g.contact_jet(&[0.2, -0.1], 1).unwrap();
        let xi: Vec<f64> = cj.xi.iter().map(Jet::value).collect();
        let sig = Space::Degenerate.signature(3);
        let nu = [1.0, 0.0, 0.0, 1.0];
        assert!(form(&sig, &xi, &xi).abs() < 1e-14);
        assert!((form(&sig, &xi, &nu) - 1.0).abs() < 1e-14);
        for a in 0..2 {
            let xa: Vec<f64> = cj.x.iter().map(|c| c.d1(a)).collect();
            assert!(form(&sig, &xi, &xa).abs() < 1e-14);
        }
    }

    #[test]
    fn transformed_jets_match_pointwise_action() {
        let t = group::parabolic(3, 0.3)
            .then(&group::hyperbolic(3, -0.2))
            .unwrap();
        let moved = TransformedSurface::new(Arc::new(torus()), t.clone()).unwrap();
        let p = [0.4, 1.1];
        let cj = torus().contact_jet(&p, 0).unwrap();
        let c = ContactElement::new(
            cj.x.iter().map(Jet::value).collect(),
            cj.xi.iter().map(Jet::value).collect(),
        )
        .unwrap();
        let expect = group::act_on_contact(&t, &c).unwrap();
        let got = moved.contact_jet(&p, 2).unwrap();
        for (a, b) in got.x.iter().zip(&expect.x) {
            assert!((a.value() - b).abs() < 1e-13);
        }
        for (a, b) in got.xi.iter().zip(&expect.xi) {
            assert!((a.value() - b).abs() < 1e-13);
        }
        // the Legendre condition survives differentiation
        for a in 0..2 {
            let d: f64 = got.x.iter().zip(&got.xi).map(|(x, e)| x.d1(a) * e.value()).sum();
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn radius_probe_reads_rho_and_r() {
        let (g1, g2) = lie_vectors_in(Space::Euclidean, &[3.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
        let c = Space::Euclidean.radius_probe(3);
        assert_eq!(crate::lorentz::inner(&g2, &c), 1.0);
        assert_eq!(crate::lorentz::inner(&g1, &c), 0.0);
    }
}
