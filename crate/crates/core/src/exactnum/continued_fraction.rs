use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{isqrt, ExactError, QuadExtScalar, Q};

/// Simple continued fraction `[a0; a1, a2, …]` of a rational or real
/// quadratic number: a finite head followed by a repeating block (empty for
/// rationals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Expands `x`. Quadratic irrationals are tracked as `(P + √D) / Q` with
    /// `Q | D − P²`, which makes the state sequence eventually periodic.
    pub fn expand(x: &QuadExtScalar) -> Result<Self, ExactError> {
        if let Some(r) = x.as_rational() {
            return Ok(Self {
                preperiod: rational_terms(r),
                period: Vec::new(),
            });
        }
        let mut state = SurdState::new(x)?;
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut terms = Vec::new();
        loop {
            let key = (state.p.clone(), state.q.clone());
            if let Some(&start) = seen.get(&key) {
                let period = terms.split_off(start);
                return Ok(Self {
                    preperiod: terms,
                    period,
                });
            }
            seen.insert(key, terms.len());
            terms.push(state.step());
        }
    }

    /// The `k`-th partial quotient.
    pub fn term(&self, k: usize) -> Option<&BigInt> {
        if k < self.preperiod.len() {
            return self.preperiod.get(k);
        }
        if self.period.is_empty() {
            return None;
        }
        let j = (k - self.preperiod.len()) % self.period.len();
        self.period.get(j)
    }
}

fn rational_terms(r: &Q) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    while !d.is_zero() {
        let (a, m) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = m;
    }
    out
}

#[derive(Debug, Clone)]
struct SurdState {
    p: BigInt,
    d: BigInt,
    q: BigInt,
    root_floor: BigInt,
}

impl SurdState {
    fn new(x: &QuadExtScalar) -> Result<Self, ExactError> {
        if x.d() < 0 {
            return Err(ExactError::Unordered(x.d()));
        }
        // x = (p + s√d) / r with integers
        let r = x.a().denom().lcm(x.b().denom());
        let p = x.a().numer() * (&r / x.a().denom());
        let s = x.b().numer() * (&r / x.b().denom());
        let radicand = &s * &s * BigInt::from(x.d());
        let (mut p, mut q) = if s.is_positive() { (p, r) } else { (-p, -r) };
        let mut d = radicand;
        if !((&d - &p * &p) % &q).is_zero() {
            let qa = q.abs();
            p *= &qa;
            d *= &q * &q;
            q *= &qa;
        }
        let root_floor = isqrt(&d);
        Ok(Self {
            p,
            d,
            q,
            root_floor,
        })
    }

    /// Emits `⌊(P + √D)/Q⌋` and advances to the complete quotient.
    fn step(&mut self) -> BigInt {
        let a = if self.q.is_positive() {
            (&self.p + &self.root_floor).div_floor(&self.q)
        } else {
            (&self.p + &self.root_floor + BigInt::one()).div_floor(&self.q)
        };
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }
}

/// A convergent `p / q` with `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> Q {
        Q::new(self.p.clone(), self.q.clone())
    }
}

/// Iterator over the convergents of a continued fraction.
#[derive(Debug, Clone)]
pub struct Convergents {
    cf: ContinuedFraction,
    k: usize,
    prev: (BigInt, BigInt),
    prev2: (BigInt, BigInt),
}

impl Convergents {
    pub fn new(cf: ContinuedFraction) -> Self {
        Self {
            cf,
            k: 0,
            prev: (BigInt::one(), BigInt::zero()),
            prev2: (BigInt::zero(), BigInt::one()),
        }
    }

    pub fn of(x: &QuadExtScalar) -> Result<Self, ExactError> {
        Ok(Self::new(ContinuedFraction::expand(x)?))
    }
}

impl Iterator for Convergents {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = self.cf.term(self.k)?.clone();
        self.k += 1;
        let h = &a * &self.prev.0 + &self.prev2.0;
        let k = &a * &self.prev.1 + &self.prev2.1;
        self.prev2 = std::mem::replace(&mut self.prev, (h.clone(), k.clone()));
        Some(Convergent { p: h, q: k })
    }
}

/// First convergent `p/q` of `x` with `x < p/q < upper`, if any exists.
pub fn upper_convergent(
    x: &QuadExtScalar,
    upper: &QuadExtScalar,
) -> Result<Option<Convergent>, ExactError> {
    if x.try_cmp(upper)? != Ordering::Less {
        return Ok(None);
    }
    for c in Convergents::of(x)? {
        let v = QuadExtScalar::rational(c.value());
        if x.try_cmp(&v)? == Ordering::Less && v.try_cmp(upper)? == Ordering::Less {
            return Ok(Some(c));
        }
        if x.is_rational() && v == *x {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q_frac, q_int};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_plus_root_three() {
        let s = QuadExtScalar::new(q_int(2), q_int(1), 3).unwrap();
        let cf = ContinuedFraction::expand(&s).unwrap();
        assert_eq!(cf.preperiod, ints(&[3]));
        assert_eq!(cf.period, ints(&[1, 2]));
        let conv: Vec<Q> = Convergents::new(cf).take(6).map(|c| c.value()).collect();
        assert_eq!(
            conv,
            vec![
                q_int(3),
                q_int(4),
                q_frac(11, 3),
                q_frac(15, 4),
                q_frac(41, 11),
                q_frac(56, 15)
            ]
        );
    }

    #[test]
    fn golden_ratio_and_negative() {
        let phi = QuadExtScalar::new(q_frac(1, 2), q_frac(1, 2), 5).unwrap();
        let cf = ContinuedFraction::expand(&phi).unwrap();
        assert_eq!(cf.preperiod, ints(&[]));
        assert_eq!(cf.period, ints(&[1]));
        // −√2 = [−2; 1, 1, 2, 2, …]
        let m = QuadExtScalar::new(q_int(0), q_int(-1), 2).unwrap();
        let cf = ContinuedFraction::expand(&m).unwrap();
        assert_eq!(cf.term(0), Some(&BigInt::from(-2)));
        assert_eq!(cf.term(1), Some(&BigInt::from(1)));
        assert_eq!(cf.term(2), Some(&BigInt::from(1)));
        assert_eq!(cf.term(3), Some(&BigInt::from(2)));
    }

    #[test]
    fn rationals_terminate() {
        let r = QuadExtScalar::rational(q_frac(-7, 3));
        let cf = ContinuedFraction::expand(&r).unwrap();
        assert_eq!(cf.preperiod, ints(&[-3, 1, 2]));
        assert!(cf.period.is_empty());
        let last = Convergents::new(cf).last().unwrap();
        assert_eq!(last.value(), q_frac(-7, 3));
    }

    #[test]
    fn upper_convergent_picks_first_admissible() {
        let s = QuadExtScalar::new(q_int(2), q_int(1), 3).unwrap();
        let c = upper_convergent(&s, &QuadExtScalar::from_int(4))
            .unwrap()
            .unwrap();
        assert_eq!(c.value(), q_frac(15, 4));
        let c = upper_convergent(&s, &QuadExtScalar::rational(q_frac(15, 4)))
            .unwrap()
            .unwrap();
        assert_eq!(c.value(), q_frac(56, 15));
    }
}
