use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{q_int, ExactError, QuadExtScalar, Q};

/// Univariate polynomial with rational coefficients, ascending degree order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `t − r`.
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Integer coefficients, if all coefficients are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_scalar(&self, t: &QuadExtScalar) -> Result<QuadExtScalar, ExactError> {
        let mut acc = QuadExtScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(t)?
                .checked_add(&QuadExtScalar::rational(c.clone()))?;
        }
        Ok(acc)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.coeff(0).is_zero() {
            roots.push(Q::zero());
            while p.coeff(0).is_zero() {
                p = Self::new(p.coeffs[1..].to_vec());
            }
        }
        if p.degree().unwrap_or(0) > 0 {
            let ints = p.primitive_integer();
            let c0 = ints[0].abs();
            let cn = ints.last().unwrap().abs();
            for num in divisors(&c0) {
                for den in divisors(&cn) {
                    for sign in [1, -1] {
                        let r = Q::new(BigInt::from(sign) * &num, den.clone());
                        if p.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&q_int(-1)));
        }
        seq
    }

    /// Number of distinct real roots strictly greater than `lower`
    /// (all real roots when `lower` is `None`).
    pub fn count_real_roots_above(&self, lower: Option<&Q>) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let sf = self.square_free_part();
        if let Some(x) = lower {
            if sf.eval(x).is_zero() {
                return sf
                    .div_rem(&Self::linear_root(x))
                    .0
                    .count_real_roots_above(lower);
            }
        }
        let seq = sf.sturm_sequence();
        let at_inf: Vec<Ordering> = seq.iter().map(|p| p.leading().cmp(&Q::zero())).collect();
        let at_lower: Vec<Ordering> = match lower {
            Some(x) => seq.iter().map(|p| p.eval(x).cmp(&Q::zero())).collect(),
            None => seq
                .iter()
                .map(|p| {
                    let s = p.leading().cmp(&Q::zero());
                    if p.degree().unwrap_or(0) % 2 == 1 {
                        s.reverse()
                    } else {
                        s
                    }
                })
                .collect(),
        };
        sign_changes(&at_lower) - sign_changes(&at_inf)
    }

    /// Largest real root as an exact scalar of degree at most two.
    ///
    /// Rational roots are split off first; a remaining quadratic factor is
    /// solved in closed form. Anything of higher degree is accepted only when
    /// Sturm counting proves it has no real root above the best candidate.
    pub fn largest_real_root(&self) -> Result<Option<QuadExtScalar>, ExactError> {
        if self.is_zero() {
            return Ok(None);
        }
        let sf = self.square_free_part();
        let rational = sf.rational_roots();
        let mut rest = sf.clone();
        for r in &rational {
            rest = rest.div_rem(&Self::linear_root(r)).0;
        }
        let mut best: Option<QuadExtScalar> = rational.last().cloned().map(QuadExtScalar::rational);
        match rest.degree().unwrap_or(0) {
            0 => {}
            1 => unreachable!("linear factors have rational roots"),
            2 => {
                let (c, b, a) = (rest.coeff(0), rest.coeff(1), rest.coeff(2));
                let disc = &b * &b - q_int(4) * &a * &c;
                if disc.is_positive() {
                    // (−b ± √disc) / 2a with disc = n/m  →  √(n m) / m
                    let num = disc.numer() * disc.denom();
                    let m = Q::from_integer(disc.denom().clone());
                    let two_a = q_int(2) * &a;
                    let radicand: i64 =
                        i64::try_from(num).map_err(|_| ExactError::DegreeTooHigh(2))?;
                    for sign in [1, -1] {
                        let root = QuadExtScalar::new(
                            -&b / &two_a,
                            q_int(sign) / (&two_a * &m),
                            radicand,
                        )?;
                        best = match best {
                            Some(cur) if cur.try_cmp(&root)? != Ordering::Less => Some(cur),
                            _ => Some(root),
                        };
                    }
                }
            }
            deg => {
                let lower = best.as_ref().and_then(|b| b.as_rational()).cloned();
                if rest.count_real_roots_above(lower.as_ref()) > 0 {
                    return Err(ExactError::DegreeTooHigh(deg));
                }
            }
        }
        Ok(best)
    }
}

fn sign_changes(signs: &[Ordering]) -> usize {
    let nonzero: Vec<_> = signs.iter().filter(|s| **s != Ordering::Equal).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let abs = c.abs();
            let coef = super::format_rational(&abs);
            match k {
                0 => f.write_str(&coef)?,
                _ => {
                    if !abs.is_one() {
                        f.write_str(&coef)?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q_frac;

    #[test]
    fn arithmetic_and_display() {
        let p = Poly::from_ints(&[1, -3, 1]);
        assert_eq!(p.to_string(), "t^2 - 3t + 1");
        let (q, r) = Poly::from_ints(&[-1, 0, 1]).div_rem(&Poly::from_ints(&[-1, 1]));
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(
            Poly::from_ints(&[0, 1]).pow(3),
            Poly::from_ints(&[0, 0, 0, 1])
        );
    }

    #[test]
    fn rational_roots_and_square_free() {
        // (2t − 1)(t + 3)² t
        let p = Poly::from_ints(&[-1, 2])
            .mul(&Poly::from_ints(&[3, 1]).pow(2))
            .mul(&Poly::from_ints(&[0, 1]));
        assert_eq!(p.rational_roots(), vec![q_int(-3), q_int(0), q_frac(1, 2)]);
        assert_eq!(p.square_free_part().degree(), Some(3));
    }

    #[test]
    fn largest_roots() {
        let p = Poly::from_ints(&[1, -3, 1]);
        let r = p.largest_real_root().unwrap().unwrap();
        assert_eq!(
            r,
            QuadExtScalar::new(q_frac(3, 2), q_frac(1, 2), 5).unwrap()
        );
        // 2t² − 8t + 2
        let p = Poly::from_ints(&[2, -8, 2]);
        let r = p.largest_real_root().unwrap().unwrap();
        assert_eq!(r, QuadExtScalar::new(q_int(2), q_int(1), 3).unwrap());
        // no real roots
        assert_eq!(
            Poly::from_ints(&[1, 0, 1]).largest_real_root().unwrap(),
            None
        );
        // (t − 5)(t² − 2): rational root dominates
        let p = Poly::from_ints(&[-5, 1]).mul(&Poly::from_ints(&[-2, 0, 1]));
        assert_eq!(
            p.largest_real_root().unwrap(),
            Some(QuadExtScalar::from_int(5))
        );
        // (t − 1)(t³ − 2): cube root of 2 exceeds 1
        let p = Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[-2, 0, 0, 1]));
        assert_eq!(p.largest_real_root(), Err(ExactError::DegreeTooHigh(3)));
        // (t − 2)(t³ − 2): 2 beats the cube root
        let p = Poly::from_ints(&[-2, 1]).mul(&Poly::from_ints(&[-2, 0, 0, 1]));
        assert_eq!(
            p.largest_real_root().unwrap(),
            Some(QuadExtScalar::from_int(2))
        );
    }

    #[test]
    fn sturm_counts() {
        // (t² − 2)(t² − 3)
        let p = Poly::from_ints(&[-2, 0, 1]).mul(&Poly::from_ints(&[-3, 0, 1]));
        assert_eq!(p.count_real_roots_above(None), 4);
        assert_eq!(p.count_real_roots_above(Some(&q_int(0))), 2);
        assert_eq!(p.count_real_roots_above(Some(&q_frac(3, 2))), 1);
        assert_eq!(p.count_real_roots_above(Some(&q_int(2))), 0);
    }
}
