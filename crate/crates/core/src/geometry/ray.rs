//! Rays: nonzero vectors up to a nonzero scalar, stored in canonical form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{GeometryError, QScalar};

/// Default absolute tolerance for float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Result of an inner product.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(QScalar),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// Exact zero, or within `tol` in float mode.
    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => x.abs() <= tol,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A ray in canonical form.
///
/// Exact rays live in Q(√2)³ and are scaled so that the integer coefficients
/// are coprime, the first nonzero component is positive and the coefficient
/// sum of absolute values is smallest among the two natural scalings (by 1 or
/// by √2); this makes equal rays structurally equal. Float rays are rescaled
/// to max-norm 1 with the first significant component positive; they may
/// have any dimension of at least 3.
#[allow(clippy::large_enum_variant)]
#[derive(Clone)]
pub enum Ray {
    Exact([QScalar; 3]),
    Float(Vec<f64>),
}

impl Ray {
    pub fn exact(c: [QScalar; 3]) -> Result<Ray, GeometryError> {
        canonical_exact(c)
            .map(Ray::Exact)
            .ok_or(GeometryError::ZeroVector)
    }

    /// Integer components `p + q√2` given as `(p, q)` pairs.
    pub fn exact_pq(c: [(i64, i64); 3]) -> Ray {
        Ray::exact(c.map(|(p, q)| QScalar::pq(p, q))).expect("nonzero literal")
    }

    /// Plain integer components.
    pub fn ints(c: [i64; 3]) -> Ray {
        Ray::exact(c.map(QScalar::int)).expect("nonzero literal")
    }

    pub fn float(c: Vec<f64>) -> Result<Ray, GeometryError> {
        if c.len() < 3 {
            return Err(GeometryError::Dimension(c.len()));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NotFinite);
        }
        let m = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m == 0.0 {
            return Err(GeometryError::ZeroVector);
        }
        let mut v: Vec<f64> = c.iter().map(|x| x / m).collect();
        if let Some(first) = v.iter().find(|x| x.abs() > DEFAULT_TOLERANCE) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(Ray::Float(v))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Ray::Exact(_))
    }

    pub fn dimension(&self) -> usize {
        match self {
            Ray::Exact(_) => 3,
            Ray::Float(v) => v.len(),
        }
    }

    pub fn exact_components(&self) -> Option<&[QScalar; 3]> {
        match self {
            Ray::Exact(c) => Some(c),
            Ray::Float(_) => None,
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Ray::Exact(c) => c.iter().map(QScalar::to_f64).collect(),
            Ray::Float(v) => v.clone(),
        }
    }

    pub fn to_float(&self) -> Ray {
        Ray::float(self.to_f64_vec()).expect("a ray is nonzero")
    }

    /// Same ray. Float rays compare with `tol` on the Gram determinant.
    pub fn same_as(&self, other: &Ray, tol: f64) -> bool {
        match (self, other) {
            (Ray::Exact(a), Ray::Exact(b)) => a == b,
            _ => {
                let (u, v) = (self.to_f64_vec(), other.to_f64_vec());
                u.len() == v.len() && gram(&u, &v) <= tol
            }
        }
    }
}

/// `|u|²|v|² − (u·v)²`, zero exactly for collinear vectors.
fn gram(u: &[f64], v: &[f64]) -> f64 {
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let uu: f64 = u.iter().map(|a| a * a).sum();
    let vv: f64 = v.iter().map(|a| a * a).sum();
    (uu * vv - uv * uv).max(0.0)
}

impl PartialEq for Ray {
    fn eq(&self, other: &Ray) -> bool {
        self.same_as(other, DEFAULT_TOLERANCE)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Ray::Exact(c) => c.iter().map(ToString::to_string).collect(),
            Ray::Float(v) => v.iter().map(|x| format!("{x:?}")).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray{self}")
    }
}

fn canonical_exact(c: [QScalar; 3]) -> Option<[QScalar; 3]> {
    let lead = c.iter().find(|x| !x.is_zero())?.clone();
    let inv = lead.inverse()?;
    let w: [QScalar; 3] = c.map(|x| &x * &inv);
    let w2: [QScalar; 3] = w.clone().map(|x| &x * &QScalar::sqrt2());
    let a = clear(w);
    let b = clear(w2);
    Some(if l1(&b) < l1(&a) { b } else { a })
}

/// Scales by a positive rational so all coefficients are coprime integers.
fn clear(w: [QScalar; 3]) -> [QScalar; 3] {
    let mut lcm = BigInt::one();
    for x in &w {
        for r in x.parts() {
            lcm = lcm.lcm(r.denom());
        }
    }
    let scaled = w.map(|x| x.scale_int(&lcm));
    let mut g = BigInt::zero();
    for x in &scaled {
        for r in x.parts() {
            g = g.gcd(r.numer());
        }
    }
    if g.is_zero() || g.is_one() {
        return scaled;
    }
    let inv = BigRational::new(BigInt::one(), g);
    scaled.map(|x| QScalar::new(&x.p * &inv, &x.q * &inv))
}

fn l1(w: &[QScalar; 3]) -> BigInt {
    w.iter()
        .flat_map(|x| x.parts())
        .map(|r| r.numer().abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(
            Ray::exact_pq([(0, 1), (1, 0), (1, 0)]).to_string(),
            "(1*r2, 1, 1)"
        );
        assert_eq!(
            Ray::exact_pq([(0, 2), (1, 0), (-1, 0)]).to_string(),
            "(2*r2, 1, -1)"
        );
        assert_eq!(Ray::ints([0, -1, 1]).to_string(), "(0, 1, -1)");
        assert_eq!(Ray::ints([0, 0, -7]).to_string(), "(0, 0, 1)");
        assert_eq!(
            Ray::exact_pq([(2, 0), (0, -1), (0, -1)]).to_string(),
            "(1*r2, -1, -1)"
        );
    }

    #[test]
    fn scaling_by_field_elements_is_invisible() {
        let u = [QScalar::pq(1, 1), QScalar::ratio(3, 7), QScalar::pq(0, -2)];
        let base = Ray::exact(u.clone()).unwrap();
        for k in [
            QScalar::pq(-3, 0),
            QScalar::pq(1, 1),
            QScalar::ratio(2, 9),
            QScalar::pq(0, 5),
        ] {
            let scaled = Ray::exact(u.clone().map(|x| &x * &k)).unwrap();
            assert_eq!(scaled.to_string(), base.to_string());
        }
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert_eq!(
            Ray::exact([QScalar::zero(), QScalar::zero(), QScalar::zero()]).err(),
            Some(GeometryError::ZeroVector)
        );
        assert!(Ray::float(vec![0.0, 0.0, 0.0]).is_err());
        assert!(Ray::float(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn float_rays_compare_up_to_scale() {
        let a = Ray::float(vec![1.0, -2.0, 0.5]).unwrap();
        let b = Ray::float(vec![-3.0, 6.0, -1.5]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Ray::float(vec![1.0, 2.0, 0.5]).unwrap());
    }
}
