use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::NsError;
use crate::exactnum::{q_frac, QuadExtScalar, Q};

/// Endomorphism ring of an elliptic factor: `Z`, or the imaginary quadratic
/// order of discriminant `D` with generator `ω = (D + √D)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndRing {
    Integers,
    Cm { discriminant: i64 },
}

impl EndRing {
    pub fn cm(discriminant: i64) -> Result<Self, NsError> {
        if discriminant >= 0
            || discriminant.unsigned_abs() > crate::exactnum::MAX_RADICAND
            || !matches!(discriminant.rem_euclid(4), 0 | 1)
        {
            return Err(NsError::BadDiscriminant(discriminant));
        }
        Ok(Self::Cm { discriminant })
    }

    pub fn discriminant(&self) -> Option<i64> {
        match self {
            Self::Integers => None,
            Self::Cm { discriminant } => Some(*discriminant),
        }
    }

    /// Rank of the ring as a Z-module.
    pub fn rank(&self) -> usize {
        match self {
            Self::Integers => 1,
            Self::Cm { .. } => 2,
        }
    }

    /// `ω + ω̄ = D` and `ω·ω̄ = (D² − D)/4`.
    fn trace_norm(&self) -> (BigInt, BigInt) {
        match self {
            Self::Integers => (BigInt::zero(), BigInt::zero()),
            Self::Cm { discriminant } => {
                let d = BigInt::from(*discriminant);
                let n = (&d * &d - &d) / BigInt::from(4);
                (d, n)
            }
        }
    }

    /// Checks that `x` lies in this ring (`b = 0` for `Z`).
    pub fn contains(&self, x: &HomEntry) -> bool {
        matches!(self, Self::Cm { .. }) || x.b.is_zero()
    }

    pub fn mul(&self, x: &HomEntry, y: &HomEntry) -> HomEntry {
        // ω² = Dω − N
        let (t, n) = self.trace_norm();
        let bb = &x.b * &y.b;
        HomEntry {
            a: &x.a * &y.a - &bb * &n,
            b: &x.a * &y.b + &x.b * &y.a + &bb * &t,
        }
    }

    /// Rosati involution on the factor: complex conjugation.
    pub fn conj(&self, x: &HomEntry) -> HomEntry {
        let (t, _) = self.trace_norm();
        HomEntry {
            a: &x.a + &x.b * &t,
            b: -&x.b,
        }
    }

    /// Complex embedding `a + b(D + √D)/2`.
    pub fn embed(&self, x: &HomEntry) -> QuadExtScalar {
        match self {
            Self::Integers => QuadExtScalar::rational(Q::from_integer(x.a.clone())),
            Self::Cm { discriminant } => {
                let b = Q::from_integer(x.b.clone());
                let a = Q::from_integer(x.a.clone()) + &b * q_frac(*discriminant, 2);
                QuadExtScalar::new(a, b * q_frac(1, 2), *discriminant)
                    .expect("negative discriminant is a valid radicand")
            }
        }
    }

    /// `|x|²` under the complex embedding.
    pub fn abs_squared(&self, x: &HomEntry) -> Q {
        let p = self.mul(x, &self.conj(x));
        debug_assert!(p.b.is_zero());
        Q::from_integer(p.a)
    }
}

impl fmt::Display for EndRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => f.write_str("Z"),
            Self::Cm { discriminant } => write!(f, "O(D={discriminant})"),
        }
    }
}

/// Element `a + bω` of a Hom-lattice; `b = 0` over `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HomEntry {
    pub a: BigInt,
    pub b: BigInt,
}

impl HomEntry {
    pub fn new(a: i64, b: i64) -> Self {
        Self {
            a: BigInt::from(a),
            b: BigInt::from(b),
        }
    }

    pub fn int(a: i64) -> Self {
        Self::new(a, 0)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            a: &self.a * k,
            b: &self.b * k,
        }
    }
}

impl fmt::Display for HomEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}{:+}ω", self.a, self.b)
        }
    }
}
