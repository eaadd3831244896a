//! Vectors for the vertices of a cloud: exact rays over Q(√2) or float rays,
//! orthogonal-representation checks and the cross-product construction.

mod qscalar;
mod ray;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cloud::{Cloud, VertexId};

pub use qscalar::QScalar;
pub use ray::{Ray, Scalar, DEFAULT_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("the zero vector is not a ray")]
    ZeroVector,
    #[error("non-finite coordinate")]
    NotFinite,
    #[error("rays need at least 3 components, got {0}")]
    Dimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot mix exact and float rays")]
    ModeMismatch,
    #[error("operation needs 3-dimensional rays")]
    NotThreeDimensional,
    #[error("operation needs float mode")]
    NeedsFloat,
    #[error("collinear rays have no cross product")]
    Collinear,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` has no ray")]
    MissingRay(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

pub fn dot(u: &Ray, v: &Ray) -> Result<Scalar, GeometryError> {
    match (u, v) {
        (Ray::Exact(a), Ray::Exact(b)) => Ok(Scalar::Exact(
            a.iter()
                .zip(b)
                .fold(QScalar::zero(), |acc, (x, y)| &acc + &(x * y)),
        )),
        (Ray::Float(a), Ray::Float(b)) => {
            if a.len() != b.len() {
                return Err(GeometryError::DimensionMismatch(a.len(), b.len()));
            }
            Ok(Scalar::Float(a.iter().zip(b).map(|(x, y)| x * y).sum()))
        }
        _ => Err(GeometryError::ModeMismatch),
    }
}

pub fn cross(u: &Ray, v: &Ray) -> Result<Ray, GeometryError> {
    match (u, v) {
        (Ray::Exact(a), Ray::Exact(b)) => {
            let c = [
                &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
                &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
                &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
            ];
            Ray::exact(c).map_err(|_| GeometryError::Collinear)
        }
        (Ray::Float(a), Ray::Float(b)) => {
            if a.len() != 3 || b.len() != 3 {
                return Err(GeometryError::NotThreeDimensional);
            }
            let c = vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            // Both inputs have max-norm 1, so a tiny cross product means collinear.
            if c.iter().all(|x| x.abs() <= DEFAULT_TOLERANCE) {
                return Err(GeometryError::Collinear);
            }
            Ray::float(c)
        }
        _ => Err(GeometryError::ModeMismatch),
    }
}

/// `|u·v|² / (|u|²|v|²)`; computed exactly for exact rays.
pub fn transition_probability(u: &Ray, v: &Ray) -> Result<f64, GeometryError> {
    let uv = dot(u, v)?;
    let uu = dot(u, u)?;
    let vv = dot(v, v)?;
    Ok(match (uv, uu, vv) {
        (Scalar::Exact(uv), Scalar::Exact(uu), Scalar::Exact(vv)) => {
            let num = &uv * &uv;
            let den = &uu * &vv;
            num.checked_div(&den)
                .ok_or(GeometryError::ZeroVector)?
                .to_f64()
        }
        (uv, uu, vv) => {
            let x = uv.to_f64();
            (x * x / (uu.to_f64() * vv.to_f64())).clamp(0.0, 1.0)
        }
    })
}

/// Angle between the two vectors as stored, in radians.
pub fn angle_between(u: &Ray, v: &Ray) -> Result<f64, GeometryError> {
    let uv = dot(u, v)?.to_f64();
    let uu = dot(u, u)?.to_f64();
    let vv = dot(v, v)?.to_f64();
    Ok((uv / (uu.sqrt() * vv.sqrt())).clamp(-1.0, 1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float { tolerance: f64 },
}

/// Vertex → ray, possibly partial.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    mode: Mode,
    rays: BTreeMap<VertexId, Ray>,
}

impl Representation {
    pub fn exact() -> Self {
        Representation {
            mode: Mode::Exact,
            rays: BTreeMap::new(),
        }
    }

    pub fn float(tolerance: f64) -> Result<Self, GeometryError> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(GeometryError::BadTolerance(tolerance));
        }
        Ok(Representation {
            mode: Mode::Float { tolerance },
            rays: BTreeMap::new(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tolerance(&self) -> f64 {
        match self.mode {
            Mode::Exact => 0.0,
            Mode::Float { tolerance } => tolerance,
        }
    }

    pub fn insert(&mut self, v: VertexId, ray: Ray) -> Result<(), GeometryError> {
        match (self.mode, &ray) {
            (Mode::Exact, Ray::Exact(_)) => {}
            (Mode::Float { .. }, Ray::Float(r)) => {
                if let Some(d) = self.dimension() {
                    if d != r.len() {
                        return Err(GeometryError::DimensionMismatch(d, r.len()));
                    }
                }
            }
            _ => return Err(GeometryError::ModeMismatch),
        }
        self.rays.insert(v, ray);
        Ok(())
    }

    /// Convenience for code-built exact representations.
    pub fn with(mut self, name: &str, ray: Ray) -> Self {
        let id = VertexId::new(name).expect("valid vertex name");
        self.insert(id, ray).expect("matching mode");
        self
    }

    pub fn get(&self, v: &str) -> Option<&Ray> {
        self.rays.get(v)
    }

    pub fn require(&self, v: &str) -> Result<&Ray, GeometryError> {
        self.get(v)
            .ok_or_else(|| GeometryError::MissingRay(v.to_string()))
    }

    pub fn remove(&mut self, v: &str) -> Option<Ray> {
        self.rays.remove(v)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Ray)> {
        self.rays.iter()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.rays.values().next().map(Ray::dimension)
    }

    /// Vertex whose ray equals `ray`, if any.
    pub fn find(&self, ray: &Ray) -> Option<&VertexId> {
        let tol = self.tolerance().max(DEFAULT_TOLERANCE);
        self.rays
            .iter()
            .find(|(_, r)| r.same_as(ray, tol))
            .map(|(v, _)| v)
    }

    pub fn to_float(&self, tolerance: f64) -> Result<Representation, GeometryError> {
        let mut out = Representation::float(tolerance)?;
        for (v, r) in &self.rays {
            out.rays.insert(v.clone(), r.to_float());
        }
        Ok(out)
    }

    pub(crate) fn rename(&self, map: impl Fn(&VertexId) -> VertexId) -> Representation {
        Representation {
            mode: self.mode,
            rays: self.rays.iter().map(|(v, r)| (map(v), r.clone())).collect(),
        }
    }

    fn orthogonal(&self, u: &Ray, v: &Ray) -> Result<(bool, Scalar), GeometryError> {
        let s = dot(u, v)?;
        let zero = match (&s, self.mode) {
            (Scalar::Exact(q), _) => q.is_zero(),
            (Scalar::Float(x), Mode::Float { tolerance }) => x.abs() <= tolerance,
            (Scalar::Float(x), Mode::Exact) => *x == 0.0,
        };
        Ok((zero, s))
    }

    fn collinear(&self, u: &Ray, v: &Ray) -> bool {
        u.same_as(v, self.tolerance())
    }
}

/// `vector` lines in the cloud format, one per assigned vertex.
impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, r) in &self.rays {
            writeln!(f, "vector {v} = {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// Adjacent vertices with non-orthogonal rays.
    NotOrthogonal,
    /// Nonadjacent vertices with orthogonal rays.
    Unfaithful,
    /// Distinct vertices on the same ray.
    Collinear,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::NotOrthogonal => "adjacent-not-orthogonal",
            ViolationKind::Unfaithful => "nonadjacent-orthogonal",
            ViolationKind::Collinear => "collinear",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub x: VertexId,
    pub y: VertexId,
    pub inner_product: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub checked: usize,
    /// Cloud vertices without a ray; nonempty means the check was partial.
    pub missing: Vec<VertexId>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_partial(&self) -> bool {
        !self.missing.is_empty()
    }

    pub fn has(&self, kind: ViolationKind, x: &str, y: &str) -> bool {
        self.violations.iter().any(|v| {
            v.kind == kind
                && ((v.x.as_str() == x && v.y.as_str() == y)
                    || (v.x.as_str() == y && v.y.as_str() == x))
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(
                f,
                "violation {} {} {} dot={}",
                v.kind, v.x, v.y, v.inner_product
            )?;
        }
        if self.is_partial() {
            let m: Vec<&str> = self.missing.iter().map(VertexId::as_str).collect();
            writeln!(f, "partial: no ray for {}", m.join(" "))?;
        }
        writeln!(
            f,
            "{} ({} vertices checked, {} violations)",
            if self.passes() { "pass" } else { "fail" },
            self.checked,
            self.violations.len()
        )
    }
}

/// Checks adjacency ⇔ orthogonality and distinct vertices ⇒ distinct rays,
/// over the vertices that have rays.
pub fn verify_representation(
    cloud: &Cloud,
    rep: &Representation,
) -> Result<VerificationReport, GeometryError> {
    for (v, _) in rep.iter() {
        if cloud.index_of(v.as_str()).is_none() {
            return Err(GeometryError::UnknownVertex(v.to_string()));
        }
    }
    let g = cloud.skeleton();
    let assigned: Vec<(usize, &Ray)> = (0..cloud.vertex_count())
        .filter_map(|i| rep.get(cloud.vertex(i).as_str()).map(|r| (i, r)))
        .collect();
    let missing = (0..cloud.vertex_count())
        .filter(|&i| rep.get(cloud.vertex(i).as_str()).is_none())
        .map(|i| cloud.vertex(i).clone())
        .collect();
    let mut violations = Vec::new();
    for (k, &(x, rx)) in assigned.iter().enumerate() {
        for &(y, ry) in &assigned[k + 1..] {
            let (orth, s) = rep.orthogonal(rx, ry)?;
            let adjacent = g.has_edge(x, y);
            let mut push = |kind| {
                violations.push(Violation {
                    kind,
                    x: cloud.vertex(x).clone(),
                    y: cloud.vertex(y).clone(),
                    inner_product: s.clone(),
                })
            };
            if adjacent && !orth {
                push(ViolationKind::NotOrthogonal);
            }
            if !adjacent && orth {
                push(ViolationKind::Unfaithful);
            }
            if rep.collinear(rx, ry) {
                push(ViolationKind::Collinear);
            }
        }
    }
    Ok(VerificationReport {
        checked: assigned.len(),
        missing,
        violations,
    })
}

/// Rays of the cross-product construction on terminals `a`, `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    /// `a × b`.
    pub c: Ray,
    /// `b × c`, in the plane of `a` and `b`.
    pub d: Ray,
    /// `a × c`, completing `{a, e, c}`.
    pub e: Ray,
    /// Orthogonal terminals: `d` collapses onto `a`.
    pub degenerate: bool,
}

pub fn standard_construction(
    rep: &Representation,
    a: &str,
    b: &str,
) -> Result<Construction, GeometryError> {
    let ra = rep.require(a)?;
    let rb = rep.require(b)?;
    standard_construction_rays(ra, rb, rep.tolerance())
}

pub fn standard_construction_rays(
    a: &Ray,
    b: &Ray,
    tol: f64,
) -> Result<Construction, GeometryError> {
    if a.dimension() != 3 || b.dimension() != 3 {
        return Err(GeometryError::NotThreeDimensional);
    }
    if a.same_as(b, tol) {
        return Err(GeometryError::Collinear);
    }
    let c = cross(a, b)?;
    let d = cross(b, &c)?;
    let e = cross(a, &c)?;
    let degenerate = dot(a, b)?.is_zero(tol);
    Ok(Construction {
        c,
        d,
        e,
        degenerate,
    })
}

/// Pairs `(x in A, y in B)` whose rays coincide, sorted by name.
pub fn collision_report(
    a: &Representation,
    b: &Representation,
) -> Result<Vec<(VertexId, VertexId)>, GeometryError> {
    let exact = |r: &Representation| matches!(r.mode(), Mode::Exact);
    if !a.is_empty() && !b.is_empty() && exact(a) != exact(b) {
        return Err(GeometryError::ModeMismatch);
    }
    let tol = a.tolerance().max(b.tolerance());
    let mut out = Vec::new();
    for (x, rx) in a.iter() {
        for (y, ry) in b.iter() {
            if rx.dimension() == ry.dimension() && rx.same_as(ry, tol) {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}

/// Rotates every ray by `angle` about `axis` (right-hand rule). Float mode,
/// three dimensions.
pub fn rotate(
    rep: &Representation,
    axis: &Ray,
    angle: f64,
) -> Result<Representation, GeometryError> {
    if matches!(rep.mode(), Mode::Exact) {
        return Err(GeometryError::NeedsFloat);
    }
    let k = axis.to_f64_vec();
    if k.len() != 3 {
        return Err(GeometryError::NotThreeDimensional);
    }
    let norm = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    let k = [k[0] / norm, k[1] / norm, k[2] / norm];
    let (s, c) = angle.sin_cos();
    let mut out = Representation::float(rep.tolerance())?;
    for (name, ray) in rep.iter() {
        let v = ray.to_f64_vec();
        if v.len() != 3 {
            return Err(GeometryError::NotThreeDimensional);
        }
        let kxv = [
            k[1] * v[2] - k[2] * v[1],
            k[2] * v[0] - k[0] * v[2],
            k[0] * v[1] - k[1] * v[0],
        ];
        let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let r: Vec<f64> = (0..3)
            .map(|i| v[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c))
            .collect();
        out.rays.insert(name.clone(), Ray::float(r)?);
    }
    Ok(out)
}
