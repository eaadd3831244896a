//! Exact arithmetic in Q(√2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `p + q·√2` with rational `p`, `q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    pub p: BigRational,
    pub q: BigRational,
}

impl QScalar {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QScalar { p, q }
    }

    pub fn int(n: i64) -> Self {
        QScalar::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        QScalar::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn sqrt2() -> Self {
        QScalar::new(BigRational::zero(), BigRational::one())
    }

    /// `p + q√2` from integers.
    pub fn pq(p: i64, q: i64) -> Self {
        QScalar::new(
            BigRational::from_integer(p.into()),
            BigRational::from_integer(q.into()),
        )
    }

    pub fn zero() -> Self {
        QScalar::default()
    }

    pub fn one() -> Self {
        QScalar::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// `p − q√2`.
    pub fn conjugate(&self) -> Self {
        QScalar::new(self.p.clone(), -self.q.clone())
    }

    /// `p² − 2q²`, the field norm; nonzero for nonzero elements.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(2.into()) * &self.q * &self.q
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QScalar::new(&self.p / &n, -&self.q / &n))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self * &inv)
    }

    /// Exact sign, -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sp == 0 || sq == 0 || sp == sq {
            return if sp != 0 { sp } else { sq };
        }
        // Opposite signs: compare p² with 2q².
        let two = BigRational::from_integer(2.into());
        match (&self.p * &self.p).cmp(&(two * &self.q * &self.q)) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN)
            + self.q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Numerators and denominators of `p` and `q`.
    pub(crate) fn parts(&self) -> [&BigRational; 2] {
        [&self.p, &self.q]
    }

    pub(crate) fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        QScalar::new(&self.p * &k, &self.q * &k)
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        QScalar::new(&self.p + &o.p, &self.q + &o.q)
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        QScalar::new(&self.p - &o.p, &self.q - &o.q)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        let two = BigRational::from_integer(2.into());
        QScalar::new(
            &self.p * &o.p + two * &self.q * &o.q,
            &self.p * &o.q + &self.q * &o.p,
        )
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, o: QScalar) -> QScalar {
        &self + &o
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, o: QScalar) -> QScalar {
        &self - &o
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, o: QScalar) -> QScalar {
        &self * &o
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::new(-self.p, -self.q)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::int(n)
    }
}

impl From<BigRational> for QScalar {
    fn from(r: BigRational) -> Self {
        QScalar::new(r, BigRational::zero())
    }
}

/// Same grammar as the cloud format: `R`, `R*r2`, `R+R*r2`, `R-R*r2`.
impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "{}*r2", self.q),
            (false, false) if self.q.is_negative() => write!(f, "{}-{}*r2", self.p, -&self.q),
            (false, false) => write!(f, "{}+{}*r2", self.p, self.q),
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let r = QScalar::sqrt2();
        assert_eq!(&r * &r, QScalar::int(2));
    }

    #[test]
    fn inverse_uses_conjugate() {
        let x = QScalar::pq(1, 1);
        let inv = x.inverse().unwrap();
        assert_eq!(inv, QScalar::pq(-1, 1));
        assert_eq!(&x * &inv, QScalar::one());
        assert!(QScalar::zero().inverse().is_none());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(QScalar::pq(3, -2).signum(), 1); // 3 > 2.83
        assert_eq!(QScalar::pq(2, -2).signum(), -1);
        assert_eq!(QScalar::pq(-1, 1).signum(), 1);
        assert_eq!(QScalar::zero().signum(), 0);
        assert!(QScalar::pq(1, 1) > QScalar::pq(2, 0));
    }

    #[test]
    fn display_matches_grammar() {
        assert_eq!(QScalar::pq(0, 2).to_string(), "2*r2");
        assert_eq!(QScalar::pq(1, -1).to_string(), "1-1*r2");
        assert_eq!(QScalar::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(QScalar::pq(3, 1).to_string(), "3+1*r2");
    }

    #[test]
    fn to_f64_is_close() {
        assert!((QScalar::pq(1, 1).to_f64() - 2.414_213_562_373_095).abs() < 1e-15);
    }
}
