use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Arbitrary precision rational number.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (whitespace around the parts is ignored).
pub fn parse_rational(s: &str) -> Result<Q, ExactError> {
    let bad = || ExactError::MalformedRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise, `q > 0`.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Returns `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Integer square root of a non-negative integer (floor).
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    &r * &r == *n
}

/// Splits `d` as `f² · d0` with `d0` square-free (sign carried by `d0`).
pub fn square_free_split(d: i64) -> (i64, i64) {
    assert!(d != 0);
    let sign = d.signum();
    let mut rest = d.unsigned_abs();
    let mut f: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            f *= p;
        }
        p += 1;
    }
    (f as i64, sign * rest as i64)
}
