//! Exact arithmetic over the rationals and quadratic extensions `Q(√d)`.
//!
//! Every value is kept in a canonical form (`d` square-free, fractions in
//! lowest terms, `d = 1` whenever the surd part vanishes), so equality is
//! structural. Ordering is only available for real radicands.

mod continued_fraction;
mod poly;
mod rational;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use continued_fraction::{upper_convergent, ContinuedFraction, Convergent, Convergents};
pub use poly::Poly;
pub use rational::{
    as_integer, format_rational, is_perfect_square, isqrt, parse_rational, q_frac, q_int,
    square_free_split, Q,
};

/// Largest accepted `|d|`; square-free reduction is by trial division.
pub const MAX_RADICAND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("radicand must be a non-zero integer of absolute value at most 10^12, got {0}")]
    BadRadicand(i64),
    #[error("cannot combine values from Q(√{0}) and Q(√{1})")]
    IncompatibleRadicands(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("values of Q(√{0}) are not ordered (negative radicand)")]
    Unordered(i64),
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("root requires an algebraic number of degree {0} > 2")]
    DegreeTooHigh(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element `a + b√d` of `Q(√d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExtScalar {
    a: Q,
    b: Q,
    d: i64,
}

impl QuadExtScalar {
    /// Builds `a + b√d`. `d` may carry square factors; they are moved into `b`.
    /// A perfect-square `d` folds the surd into the rational part.
    pub fn new(a: Q, b: Q, d: i64) -> Result<Self, ExactError> {
        if d == 0 || d.unsigned_abs() > MAX_RADICAND {
            return Err(ExactError::BadRadicand(d));
        }
        let (f, d0) = square_free_split(d);
        let b = b * q_int(f);
        if d0 == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self::canonical(a, b, d0))
    }

    pub fn rational(a: Q) -> Self {
        Self {
            a,
            b: Q::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(q_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Result<Self, ExactError> {
        Self::new(Q::zero(), Q::one(), d)
    }

    fn canonical(a: Q, b: Q, d: i64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Self { a, b, d }
        }
    }

    /// Rational part.
    pub fn a(&self) -> &Q {
        &self.a
    }

    /// Coefficient of `√d`.
    pub fn b(&self) -> &Q {
        &self.b
    }

    /// Square-free radicand; `1` for rational values.
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then_some(&self.a)
    }

    fn common_radicand(&self, other: &Self) -> Result<i64, ExactError> {
        if self.is_rational() {
            Ok(other.d)
        } else if other.is_rational() || self.d == other.d {
            Ok(self.d)
        } else {
            Err(ExactError::IncompatibleRadicands(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Ok(Self::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Ok(Self::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * q_int(d);
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::canonical(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn neg(&self) -> Self {
        Self::canonical(-&self.a, -&self.b, self.d)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.d)
    }

    /// Galois conjugate `a − b√d` (complex conjugation when `d < 0`).
    pub fn conjugate(&self) -> Self {
        Self::canonical(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - &self.b * &self.b * q_int(self.d)
    }

    /// Field trace `2a`.
    pub fn trace(&self) -> Q {
        &self.a * q_int(2)
    }

    /// Sign of the real number `a + b√d`; requires `d > 0` or a rational value.
    pub fn signum(&self) -> Result<Ordering, ExactError> {
        if self.is_rational() {
            return Ok(self.a.cmp(&Q::zero()));
        }
        if self.d < 0 {
            return Err(ExactError::Unordered(self.d));
        }
        let sa = self.a.cmp(&Q::zero());
        let sb = self.b.cmp(&Q::zero());
        if sa == Ordering::Equal || sa == sb {
            return Ok(sb);
        }
        // opposite signs: compare a² with d·b²
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * q_int(self.d);
        Ok(match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("d is not a square"),
        })
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ExactError> {
        self.checked_sub(other)?.signum()
    }

    /// Floating point approximation (real embedding `√d > 0`).
    pub fn to_f64(&self) -> Result<f64, ExactError> {
        if !self.is_rational() && self.d < 0 {
            return Err(ExactError::Unordered(self.d));
        }
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Ok(a + b * (self.d as f64).sqrt())
    }

    /// Exact `⌊x⌋` for real values.
    pub fn floor(&self) -> Result<BigInt, ExactError> {
        if self.is_rational() {
            return Ok(self.a.floor().to_integer());
        }
        let approx = self.to_f64()?.floor();
        let mut k = BigInt::from(approx as i64);
        loop {
            let kq = Self::rational(Q::from_integer(k.clone()));
            if self.try_cmp(&kq)? == Ordering::Less {
                k -= 1;
                continue;
            }
            let k1 = Self::rational(Q::from_integer(&k + 1));
            if self.try_cmp(&k1)? != Ordering::Less {
                k += 1;
                continue;
            }
            return Ok(k);
        }
    }

    /// Returns the rational value, or the integer minimal polynomial that
    /// certifies irrationality.
    pub fn rationality_certificate(&self) -> RationalityCertificate {
        if self.is_rational() {
            return RationalityCertificate::Rational(self.a.clone());
        }
        // t² − 2a t + (a² − d b²), scaled to primitive integer coefficients
        let c = [self.norm(), -self.trace(), Q::one()];
        let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c
            .iter()
            .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let coeffs: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
        let discriminant = &coeffs[1] * &coeffs[1] - BigInt::from(4) * &coeffs[0] * &coeffs[2];
        RationalityCertificate::Irrational(MinimalPolynomial {
            coeffs,
            discriminant,
        })
    }
}

/// `arith_eval(x, y, op)`.
pub fn arith_eval(
    x: &QuadExtScalar,
    y: &QuadExtScalar,
    op: ArithOp,
) -> Result<QuadExtScalar, ExactError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl fmt::Debug for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        if !self.a.is_zero() {
            write!(f, "{} ", format_rational(&self.a))?;
            f.write_str(if self.b.is_negative() { "- " } else { "+ " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        let b = self.b.abs();
        if b.is_one() {
            write!(f, "√{}", self.d)
        } else {
            write!(f, "{}·√{}", format_rational(&b), self.d)
        }
    }
}

impl From<Q> for QuadExtScalar {
    fn from(a: Q) -> Self {
        Self::rational(a)
    }
}

/// Wire form `{"a": "p/q", "b": "r/s", "d": n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub a: String,
    pub b: String,
    pub d: i64,
}

impl From<&QuadExtScalar> for ScalarJson {
    fn from(x: &QuadExtScalar) -> Self {
        Self {
            a: format_rational(&x.a),
            b: format_rational(&x.b),
            d: x.d,
        }
    }
}

impl TryFrom<&ScalarJson> for QuadExtScalar {
    type Error = ExactError;

    fn try_from(j: &ScalarJson) -> Result<Self, ExactError> {
        QuadExtScalar::new(parse_rational(&j.a)?, parse_rational(&j.b)?, j.d)
    }
}

impl Serialize for QuadExtScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadExtScalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = ScalarJson::deserialize(de)?;
        QuadExtScalar::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// Integer minimal polynomial of a quadratic irrational, coefficients in
/// ascending degree order, primitive with positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPolynomial {
    pub coeffs: Vec<BigInt>,
    /// `c1² − 4 c0 c2`; never a perfect square.
    pub discriminant: BigInt,
}

impl MinimalPolynomial {
    pub fn annihilates(&self, x: &QuadExtScalar) -> bool {
        let mut acc = QuadExtScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(&QuadExtScalar::rational(Q::from_integer(c.clone()))))
                .expect("same radicand");
        }
        acc.is_zero()
    }

    pub fn discriminant_is_square(&self) -> bool {
        is_perfect_square(&self.discriminant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalityCertificate {
    Rational(Q),
    Irrational(MinimalPolynomial),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExtScalar {
        QuadExtScalar::new(q_frac(a.0, a.1), q_frac(b.0, b.1), d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unit_norm_product() {
        let x = s((2, 1), (1, 1), 3);
        let y = s((2, 1), (-1, 1), 3);
        assert_eq!(
            arith_eval(&x, &y, ArithOp::Mul).unwrap(),
            QuadExtScalar::one()
        );
    }

    #[test]
    fn conjugate_sum() {
        let x = s((1, 2), (1, 2), 5);
        let y = s((1, 2), (-1, 2), 5);
        assert_eq!(
            arith_eval(&x, &y, ArithOp::Add).unwrap(),
            QuadExtScalar::one()
        );
    }

    #[test]
    fn golden_pair_product() {
        // (3+√5)/2 · (3−√5)/2 = (9 − 5)/4
        let x = s((3, 2), (1, 2), 5);
        let y = s((3, 2), (-1, 2), 5);
        assert_eq!(
            arith_eval(&x, &y, ArithOp::Mul).unwrap(),
            QuadExtScalar::from_int(1)
        );
    }

    #[test]
    fn incompatible_and_zero_division() {
        let x = s((0, 1), (1, 1), 2);
        let y = s((0, 1), (1, 1), 3);
        assert_eq!(
            x.checked_add(&y),
            Err(ExactError::IncompatibleRadicands(2, 3))
        );
        assert_eq!(
            x.checked_div(&QuadExtScalar::zero()),
            Err(ExactError::DivisionByZero)
        );
        // a rational operand mixes with anything
        assert!(x.checked_mul(&QuadExtScalar::from_int(7)).is_ok());
    }

    #[test]
    fn canonical_forms() {
        // √12 = 2√3
        let x = QuadExtScalar::sqrt(12).unwrap();
        assert_eq!(x, s((0, 1), (2, 1), 3));
        // √9 folds to 3
        assert_eq!(QuadExtScalar::sqrt(9).unwrap(), QuadExtScalar::from_int(3));
        // b = 0 forgets the radicand
        assert_eq!(s((4, 2), (0, 1), 7), QuadExtScalar::from_int(2));
        assert!(QuadExtScalar::new(Q::zero(), Q::one(), 0).is_err());
    }

    #[test]
    fn certificates() {
        assert_eq!(
            s((2, 1), (0, 1), 3).rationality_certificate(),
            RationalityCertificate::Rational(q_int(2))
        );
        let RationalityCertificate::Irrational(p) = s((3, 2), (1, 2), 5).rationality_certificate()
        else {
            panic!("expected irrational");
        };
        assert_eq!(p.coeffs, ints(&[1, -3, 1]));
        assert_eq!(p.discriminant, BigInt::from(5));
        let RationalityCertificate::Irrational(p) = s((2, 1), (1, 1), 3).rationality_certificate()
        else {
            panic!("expected irrational");
        };
        assert_eq!(p.coeffs, ints(&[1, -4, 1]));
        assert_eq!(p.discriminant, BigInt::from(12));
        assert!(!p.discriminant_is_square());
        assert!(p.annihilates(&s((2, 1), (1, 1), 3)));
        assert!(p.annihilates(&s((2, 1), (-1, 1), 3)));
    }

    #[test]
    fn ordering() {
        let r = s((2, 1), (1, 1), 3);
        assert_eq!(
            r.try_cmp(&QuadExtScalar::rational(q_frac(15, 4))),
            Ok(Ordering::Less)
        );
        assert_eq!(
            r.try_cmp(&QuadExtScalar::rational(q_frac(41, 11))),
            Ok(Ordering::Greater)
        );
        assert_eq!(r.floor().unwrap(), BigInt::from(3));
        assert_eq!(r.neg().floor().unwrap(), BigInt::from(-4));
        let i = QuadExtScalar::sqrt(-1).unwrap();
        assert_eq!(i.signum(), Err(ExactError::Unordered(-1)));
        // i² = −1 still works without ordering
        assert_eq!(i.checked_mul(&i).unwrap(), QuadExtScalar::from_int(-1));
    }

    #[test]
    fn json_shape() {
        let x = s((3, 2), (-1, 2), 5);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"a":"3/2","b":"-1/2","d":5}"#);
        let back: QuadExtScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }
}
