//! Oriented spheres and planes of ℝⁿ, their coordinates on the Lie quadric,
//! oriented contact, and the Lie correspondence between contact elements
//! and lines on the quadric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{CausalType, LorentzVector, MIN_BASE_DIM};

/// Tolerance on `|ξ| = 1` for planes and contact elements.
pub const UNIT_TOL: f64 = 1e-12;

/// An oriented sphere `S(p, r)` or oriented plane `P(ξ, λ)` of ℝⁿ.
///
/// A plane is the set `{x : x·ξ = λ}`. Radius zero gives a point sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawSphereElement")]
pub enum SphereElement {
    Sphere { center: Vec<f64>, radius: f64 },
    Plane { normal: Vec<f64>, offset: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawSphereElement {
    Sphere { center: Vec<f64>, radius: f64 },
    Plane { normal: Vec<f64>, offset: f64 },
}

impl TryFrom<RawSphereElement> for SphereElement {
    type Error = Error;
    fn try_from(raw: RawSphereElement) -> Result<Self> {
        match raw {
            RawSphereElement::Sphere { center, radius } => SphereElement::sphere(center, radius),
            RawSphereElement::Plane { normal, offset } => SphereElement::plane(normal, offset),
        }
    }
}

fn check_finite(label: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input(format!("{label} has non-finite entries")))
    }
}

fn check_dim(label: &str, len: usize) -> Result<()> {
    if len < MIN_BASE_DIM {
        return Err(Error::Input(format!(
            "{label} has dimension {len}, need at least {MIN_BASE_DIM}"
        )));
    }
    Ok(())
}

fn check_unit(label: &str, xi: &[f64]) -> Result<()> {
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Input(format!(
            "{label} must be a unit vector, |ξ| = {norm}"
        )));
    }
    Ok(())
}

impl SphereElement {
    pub fn sphere(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_dim("sphere center", center.len())?;
        check_finite("sphere center", &center)?;
        check_finite("sphere radius", &[radius])?;
        Ok(SphereElement::Sphere { center, radius })
    }

    pub fn plane(normal: Vec<f64>, offset: f64) -> Result<Self> {
        check_dim("plane normal", normal.len())?;
        check_finite("plane normal", &normal)?;
        check_finite("plane offset", &[offset])?;
        check_unit("plane normal", &normal)?;
        Ok(SphereElement::Plane { normal, offset })
    }

    pub fn base_dim(&self) -> usize {
        match self {
            SphereElement::Sphere { center, .. } => center.len(),
            SphereElement::Plane { normal, .. } => normal.len(),
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, SphereElement::Sphere { .. })
    }
}

/// A point of the projective quadric, stored as a normalized representative.
///
/// The representative is scaled so that its entry of largest magnitude
/// (first such index) equals +1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectivePoint {
    representative: LorentzVector,
}

impl ProjectivePoint {
    /// Validates that `v` is nonzero and lightlike (relative to `‖v‖²`).
    pub fn new(v: LorentzVector, tol: f64) -> Result<Self> {
        match v.causal_type(tol) {
            CausalType::Lightlike => Ok(Self::normalize(v)),
            CausalType::Zero => Err(Error::InvalidCoordinate("zero vector".into())),
            other => Err(Error::InvalidCoordinate(format!(
                "vector is {other:?}, ⟨γ,γ⟩ = {:e}",
                v.norm_sq()
            ))),
        }
    }

    /// Normalizes a vector already known to be lightlike.
    pub(crate) fn normalize(v: LorentzVector) -> Self {
        let entries = v.as_slice();
        let mut best = 0;
        for (i, e) in entries.iter().enumerate() {
            if e.abs() > entries[best].abs() {
                best = i;
            }
        }
        let s = 1.0 / entries[best];
        ProjectivePoint {
            representative: v.scale(s),
        }
    }

    pub fn representative(&self) -> &LorentzVector {
        &self.representative
    }

    pub fn base_dim(&self) -> usize {
        self.representative.base_dim()
    }

    /// Whether two points are proportional, via the sine of the angle
    /// between representatives.
    pub fn proportional_to(&self, other: &ProjectivePoint, tol: f64) -> bool {
        proportional(
            self.representative.as_slice(),
            other.representative.as_slice(),
            tol,
        )
    }
}

/// `|a|²|b|² − (a·b)² ≤ tol²|a|²|b|²` in the Euclidean sense.
pub(crate) fn proportional(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let scale = aa * bb;
    scale > 0.0 && (scale - ab * ab).abs() <= tol * tol * scale
}

/// Unnormalized coordinate vector of a sphere or plane.
pub fn sphere_vector(s: &SphereElement) -> LorentzVector {
    match s {
        SphereElement::Sphere { center, radius } => {
            let p2: f64 = center.iter().map(|x| x * x).sum();
            let r2 = radius * radius;
            let mut e = Vec::with_capacity(center.len() + 3);
            e.push(0.5 * (1.0 + p2 - r2));
            e.push(0.5 * (1.0 - p2 + r2));
            e.extend_from_slice(center);
            e.push(-radius);
            LorentzVector::from_vec_unchecked(e)
        }
        SphereElement::Plane { normal, offset } => {
            let mut e = Vec::with_capacity(normal.len() + 3);
            e.push(*offset);
            e.push(-offset);
            e.extend_from_slice(normal);
            e.push(1.0);
            LorentzVector::from_vec_unchecked(e)
        }
    }
}

pub fn sphere_coord(s: &SphereElement) -> ProjectivePoint {
    ProjectivePoint::normalize(sphere_vector(s))
}

/// Result of reading a quadric point back as a geometric object.
#[derive(Debug, Clone, PartialEq)]
pub enum Classified {
    Element(SphereElement),
    PointAtInfinity,
}

/// Inverts [`sphere_coord`]. `[℘]` is reported separately.
pub fn classify_coord(gamma: &ProjectivePoint, tol: f64) -> Result<Classified> {
    let v = gamma.representative();
    if v.causal_type(tol) != CausalType::Lightlike {
        return Err(Error::InvalidCoordinate(format!(
            "not lightlike, ⟨γ,γ⟩ = {:e}",
            v.norm_sq()
        )));
    }
    let n = v.base_dim();
    let e = v.as_slice();
    let wp = LorentzVector::wp(n);
    if proportional(e, wp.as_slice(), tol) {
        return Ok(Classified::PointAtInfinity);
    }
    let pairing = e[0] + e[1];
    if pairing.abs() > tol * v.euclid_norm() {
        let center: Vec<f64> = e[2..n + 2].iter().map(|x| x / pairing).collect();
        let radius = -e[n + 2] / pairing;
        return Ok(Classified::Element(SphereElement::Sphere { center, radius }));
    }
    let last = e[n + 2];
    let normal: Vec<f64> = e[2..n + 2].iter().map(|x| x / last).collect();
    let offset = e[0] / last;
    // re-normalize the rounding left over from the division
    let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(Classified::Element(SphereElement::Plane {
        normal: normal.iter().map(|x| x / norm).collect(),
        offset: offset / norm,
    }))
}

/// `⟨γ_a, γ_b⟩` after normalizing each coordinate to unit Euclidean length.
pub fn contact_defect(a: &SphereElement, b: &SphereElement) -> Result<f64> {
    if a.base_dim() != b.base_dim() {
        return Err(Error::usage("sphere elements live in different dimensions"));
    }
    let ga = sphere_vector(a);
    let gb = sphere_vector(b);
    Ok(ga.inner(&gb)? / (ga.euclid_norm() * gb.euclid_norm()))
}

pub fn oriented_contact(a: &SphereElement, b: &SphereElement, tol: f64) -> Result<bool> {
    Ok(contact_defect(a, b)?.abs() <= tol)
}

/// `F = |p* − p|² − (r* − r)²`, the squared length of a common tangent segment.
pub fn tangential_invariant(a: &SphereElement, b: &SphereElement) -> Result<f64> {
    match (a, b) {
        (
            SphereElement::Sphere { center: p, radius: r },
            SphereElement::Sphere { center: q, radius: s },
        ) => {
            if p.len() != q.len() {
                return Err(Error::usage("spheres live in different dimensions"));
            }
            let d2: f64 = p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum();
            Ok(d2 - (s - r) * (s - r))
        }
        _ => Err(Error::usage("the tangential invariant is defined for spheres only")),
    }
}

/// A point `x` with unit normal `ξ`, a point of the unit tangent bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactElement {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl ContactElement {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() {
            return Err(Error::Input("point and normal differ in dimension".into()));
        }
        check_dim("contact element", x.len())?;
        check_finite("contact point", &x)?;
        check_finite("contact normal", &xi)?;
        check_unit("contact normal", &xi)?;
        Ok(ContactElement { x, xi })
    }

    pub fn base_dim(&self) -> usize {
        self.x.len()
    }
}

/// The pencil of spheres in oriented contact with one contact element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieLine {
    gamma1: ProjectivePoint,
    gamma2: ProjectivePoint,
}

impl LieLine {
    /// Validates a point-sphere member `gamma1` and a plane member `gamma2`.
    pub fn new(gamma1: ProjectivePoint, gamma2: ProjectivePoint, tol: f64) -> Result<Self> {
        if gamma1.base_dim() != gamma2.base_dim() {
            return Err(Error::InvalidLine("members differ in dimension".into()));
        }
        let a = gamma1.representative();
        let b = gamma2.representative();
        let wp = LorentzVector::wp(a.base_dim());
        let scale = a.euclid_norm() * b.euclid_norm();
        if a.inner(b)?.abs() > tol * scale {
            return Err(Error::InvalidLine("members are not orthogonal".into()));
        }
        if b.inner(&wp)?.abs() > tol * b.euclid_norm() {
            return Err(Error::InvalidLine("second member is not a plane".into()));
        }
        if a.inner(&wp)?.abs() <= tol * a.euclid_norm() {
            return Err(Error::InvalidLine("first member is a plane".into()));
        }
        if gamma1.proportional_to(&gamma2, tol) {
            return Err(Error::InvalidLine("members are proportional".into()));
        }
        Ok(LieLine { gamma1, gamma2 })
    }

    pub fn gamma1(&self) -> &ProjectivePoint {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &ProjectivePoint {
        &self.gamma2
    }
}

/// Unnormalized pencil basis `(point sphere at x, tangent plane)` of a
/// contact element given as raw slices.
pub fn lie_vectors(x: &[f64], xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let x2: f64 = x.iter().map(|a| a * a).sum();
    let xxi: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
    let mut g1 = Vec::with_capacity(x.len() + 3);
    g1.push(0.5 * (1.0 + x2));
    g1.push(0.5 * (1.0 - x2));
    g1.extend_from_slice(x);
    g1.push(0.0);
    let mut g2 = Vec::with_capacity(x.len() + 3);
    g2.push(xxi);
    g2.push(-xxi);
    g2.extend_from_slice(xi);
    g2.push(1.0);
    (g1, g2)
}

pub fn lie_line(c: &ContactElement) -> LieLine {
    let (g1, g2) = lie_vectors(&c.x, &c.xi);
    LieLine {
        gamma1: ProjectivePoint::normalize(LorentzVector::from_vec_unchecked(g1)),
        gamma2: ProjectivePoint::normalize(LorentzVector::from_vec_unchecked(g2)),
    }
}

/// Recovers `(x, ξ)` from any two vectors spanning a Lie line, provided
/// the second has nonzero last entry and the pencil contains a point
/// sphere. Returns raw `(x, ξ)` without unit checks.
pub(crate) fn contact_from_span(a: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = a.len();
    let n = d - 3;
    let last = d - 1;
    let bl = b[last];
    let scale_b = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if bl.abs() <= 1e-14 * scale_b {
        return Err(Error::InvalidLine("no plane member with a finite normal".into()));
    }
    let xi: Vec<f64> = b[2..n + 2].iter().map(|v| v / bl).collect();
    let k = a[last] / bl;
    let point: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - k * q).collect();
    let pairing = point[0] + point[1];
    let scale_p = point.iter().map(|x| x * x).sum::<f64>().sqrt();
    if pairing.abs() <= 1e-14 * scale_p || scale_p == 0.0 {
        return Err(Error::InvalidLine("pencil has no finite point sphere".into()));
    }
    let x: Vec<f64> = point[2..n + 2].iter().map(|v| v / pairing).collect();
    Ok((x, xi))
}

pub fn contact_from_line(l: &LieLine) -> Result<ContactElement> {
    let a = l.gamma1.representative().as_slice();
    let b = l.gamma2.representative().as_slice();
    let (x, xi) = contact_from_span(a, b)?;
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidLine(format!("recovered normal has length {norm}")));
    }
    let xi = xi.iter().map(|v| v / norm).collect();
    Ok(ContactElement { x, xi })
}

/// Vector of the pencil member `γ₁ + t·γ₂` in the unnormalized basis.
pub fn pencil_member(c: &ContactElement, t: f64) -> LorentzVector {
    let (g1, g2) = lie_vectors(&c.x, &c.xi);
    LorentzVector::from_vec_unchecked(g1.iter().zip(&g2).map(|(a, b)| a + t * b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::DEFAULT_TOL;

    fn s(c: &[f64], r: f64) -> SphereElement {
        SphereElement::sphere(c.to_vec(), r).unwrap()
    }

    fn p(xi: &[f64], l: f64) -> SphereElement {
        SphereElement::plane(xi.to_vec(), l).unwrap()
    }

    fn pp(e: &[f64]) -> ProjectivePoint {
        ProjectivePoint::new(LorentzVector::new(e.to_vec()).unwrap(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn unit_sphere_coordinate() {
        let g = sphere_coord(&s(&[0.0, 0.0, 0.0], 1.0));
        assert!(g.proportional_to(&pp(&[0.0, 1.0, 0.0, 0.0, 0.0, -1.0]), 1e-15));
        assert_eq!(g.representative().as_slice(), &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn plane_and_point_sphere_coordinates() {
        let g = sphere_coord(&p(&[0.0, 0.0, 1.0], 0.0));
        assert_eq!(g.representative().as_slice(), &[0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let g = sphere_coord(&s(&[0.0, 0.0, 0.0], 0.0));
        assert!(g.proportional_to(&pp(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0]), 1e-15));
    }

    #[test]
    fn normalization_rule() {
        let g = ProjectivePoint::new(
            LorentzVector::new(vec![0.0, -2.0, 0.0, 0.0, 0.0, 2.0]).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(g.representative().as_slice(), &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn classify_examples() {
        let c = classify_coord(&pp(&[0.0, 1.0, 0.0, 0.0, 0.0, -1.0]), DEFAULT_TOL).unwrap();
        assert_eq!(c, Classified::Element(s(&[0.0, 0.0, 0.0], 1.0)));
        let c = classify_coord(&pp(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]), DEFAULT_TOL).unwrap();
        assert_eq!(c, Classified::PointAtInfinity);
        let c = classify_coord(&pp(&[0.0, 0.0, 0.0, 0.0, 1.0, 1.0]), DEFAULT_TOL).unwrap();
        assert_eq!(c, Classified::Element(p(&[0.0, 0.0, 1.0], 0.0)));
    }

    #[test]
    fn classify_rejects_timelike() {
        let bad = ProjectivePoint {
            representative: LorentzVector::basis(3, 0),
        };
        assert!(matches!(
            classify_coord(&bad, DEFAULT_TOL),
            Err(Error::InvalidCoordinate(_))
        ));
        assert!(ProjectivePoint::new(LorentzVector::basis(3, 0), DEFAULT_TOL).is_err());
    }

    #[test]
    fn contact_examples() {
        let unit = s(&[0.0, 0.0, 0.0], 1.0);
        assert!(oriented_contact(&unit, &p(&[0.0, 0.0, 1.0], 1.0), DEFAULT_TOL).unwrap());
        assert!(oriented_contact(&unit, &s(&[3.0, 0.0, 0.0], -2.0), DEFAULT_TOL).unwrap());
        assert!(!oriented_contact(&unit, &s(&[0.0, 0.0, 0.0], 2.0), DEFAULT_TOL).unwrap());
        let raw = sphere_vector(&unit)
            .inner(&sphere_vector(&s(&[0.0, 0.0, 0.0], 2.0)))
            .unwrap();
        assert_eq!(raw, 0.5);
    }

    #[test]
    fn tangential_examples() {
        let unit = s(&[0.0, 0.0, 0.0], 1.0);
        assert_eq!(tangential_invariant(&unit, &s(&[3.0, 0.0, 0.0], 1.0)).unwrap(), 9.0);
        assert_eq!(tangential_invariant(&unit, &unit).unwrap(), 0.0);
        assert_eq!(tangential_invariant(&unit, &s(&[3.0, 0.0, 0.0], -2.0)).unwrap(), 0.0);
        assert!(tangential_invariant(&unit, &p(&[1.0, 0.0, 0.0], 0.0)).is_err());
    }

    #[test]
    fn planes_must_be_unit() {
        assert!(SphereElement::plane(vec![0.0, 0.0, 2.0], 0.0).is_err());
        assert!(ContactElement::new(vec![0.0; 3], vec![0.0, 0.0, 1.1]).is_err());
    }

    #[test]
    fn lie_line_example() {
        let c = ContactElement::new(vec![0.0; 3], vec![0.0, 0.0, 1.0]).unwrap();
        let (g1, g2) = lie_vectors(&c.x, &c.xi);
        assert_eq!(g1, vec![0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(g2, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        assert_eq!(crate::lorentz::inner(&g1, &g2), 0.0);
        let back = contact_from_line(&lie_line(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn pencil_member_is_tangent_sphere() {
        let xi = [0.0, 0.6, 0.8];
        let c = ContactElement::new(vec![0.0; 3], xi.to_vec()).unwrap();
        let r = 1.7;
        let member = ProjectivePoint::normalize(pencil_member(&c, -r));
        let center: Vec<f64> = xi.iter().map(|v| -r * v).collect();
        assert!(member.proportional_to(&sphere_coord(&s(&center, r)), 1e-14));
    }

    #[test]
    fn plane_normal_from_middle_block() {
        let xi = [0.6, 0.0, -0.8];
        let c = ContactElement::new(vec![1.0, 2.0, 3.0], xi.to_vec()).unwrap();
        let back = contact_from_line(&lie_line(&c)).unwrap();
        for (a, b) in back.xi.iter().zip(&xi) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_line_rejected() {
        let a = pp(&[0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        assert!(LieLine::new(a.clone(), a, DEFAULT_TOL).is_err());
    }

    #[test]
    fn json_encoding() {
        let e: SphereElement =
            serde_json::from_str(r#"{"kind":"sphere","center":[3,0,0],"radius":-2}"#).unwrap();
        assert_eq!(e, s(&[3.0, 0.0, 0.0], -2.0));
        let e: std::result::Result<SphereElement, _> =
            serde_json::from_str(r#"{"kind":"plane","normal":[0,0,2],"offset":0}"#);
        assert!(e.is_err());
        let text = serde_json::to_string(&p(&[0.0, 1.0, 0.0], 2.0)).unwrap();
        assert_eq!(text, r#"{"kind":"plane","normal":[0.0,1.0,0.0],"offset":2.0}"#);
    }
}
