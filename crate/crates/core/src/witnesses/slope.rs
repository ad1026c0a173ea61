//! Certificates that an irrational nef boundary obstructs finite generation.
//!
//! If `NS⁺` were generated by `Nᵢ ≡ aᵢL₁ − bᵢL₂ (+ other directions)`, every
//! effective class in the plane of `L₁, L₂` would have `a/b ≥ q = min aᵢ/bᵢ`.
//! Nefness forces `q > s`, and an ample `p₁L₁ − p₂L₂` with
//! `s < p₁/p₂ < q` exists because `s` is irrational: a contradiction.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::WitnessError;
use crate::cone_engine::boundary_slope;
use crate::exactnum::{
    upper_convergent, MinimalPolynomial, QuadExtScalar, RationalityCertificate, Q,
};
use crate::ns_lattice::{ample_test, NSClass, VarietyPresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeCertificate {
    pub s: QuadExtScalar,
    pub minpoly: MinimalPolynomial,
    /// `min aᵢ/bᵢ`, absent for an empty candidate list.
    pub q: Option<Q>,
    pub epsilon: QuadExtScalar,
    pub approx: (BigInt, BigInt),
    pub l1: NSClass,
    pub l2: NSClass,
    pub ample_class: NSClass,
}

impl SlopeCertificate {
    pub fn approx_value(&self) -> Q {
        Q::new(self.approx.0.clone(), self.approx.1.clone())
    }

    /// Re-checks every claim exactly against `x`.
    pub fn verify(&self, x: &VarietyPresentation) -> Result<bool, WitnessError> {
        if self.s.is_rational()
            || !self.minpoly.annihilates(&self.s)
            || self.minpoly.discriminant_is_square()
        {
            return Ok(false);
        }
        let r = QuadExtScalar::rational(self.approx_value());
        let upper = match &self.q {
            Some(q) => min_scalar(
                QuadExtScalar::rational(q.clone()),
                self.s.checked_add(&self.epsilon)?,
            )?,
            None => self.s.checked_add(&self.epsilon)?,
        };
        if self.s.try_cmp(&r)? != Ordering::Less || r.try_cmp(&upper)? != Ordering::Less {
            return Ok(false);
        }
        let expected = NSClass::combine(&[
            (self.approx.0.clone(), &self.l1),
            (-self.approx.1.clone(), &self.l2),
        ])?;
        if expected != self.ample_class || !ample_test(&self.ample_class, x)? {
            return Ok(false);
        }
        Ok(boundary_slope(&self.l1, &self.l2, x)? == self.s)
    }
}

fn min_scalar(a: QuadExtScalar, b: QuadExtScalar) -> Result<QuadExtScalar, WitnessError> {
    Ok(if a.try_cmp(&b)? == Ordering::Greater {
        b
    } else {
        a
    })
}

/// Builds the certificate for the candidates `(aᵢ, bᵢ)`.
///
/// The approximation is the first continued-fraction convergent of `s`
/// inside `(s, min(q, s + ε))`. Without an explicit `ε` the window is
/// `(s, (s + q)/2)`, or `(s, s + 1)` for an empty candidate list.
pub fn prop2_refute(
    l1: &NSClass,
    l2: &NSClass,
    x: &VarietyPresentation,
    candidates: &[(BigInt, BigInt)],
    epsilon: Option<Q>,
) -> Result<SlopeCertificate, WitnessError> {
    match x {
        VarietyPresentation::Abstract(a) if a.is_simple() => {}
        _ => return Err(WitnessError::NotSimpleAbstract),
    }
    let s = boundary_slope(l1, l2, x)?;
    let minpoly = match s.rationality_certificate() {
        RationalityCertificate::Irrational(p) => p,
        RationalityCertificate::Rational(r) => {
            return Err(WitnessError::RationalSlope(
                crate::exactnum::format_rational(&r),
            ))
        }
    };
    let mut q: Option<Q> = None;
    for (i, (a, b)) in candidates.iter().enumerate() {
        if a.is_negative() || !b.is_positive() {
            return Err(WitnessError::Candidate {
                index: i,
                reason: format!("need a ≥ 0 and b > 0, got ({a}, {b})"),
            });
        }
        let r = Q::new(a.clone(), b.clone());
        if q.as_ref().is_none_or(|cur| r < *cur) {
            q = Some(r);
        }
    }
    if let Some(qv) = &q {
        if QuadExtScalar::rational(qv.clone()).try_cmp(&s)? != Ordering::Greater {
            return Err(WitnessError::BelowSlope {
                q: crate::exactnum::format_rational(qv),
                s: s.to_string(),
            });
        }
    }
    let epsilon = match (&epsilon, &q) {
        (Some(e), _) if e.is_positive() => QuadExtScalar::rational(e.clone()),
        (Some(_), _) => return Err(WitnessError::BadParameter("ε must be positive".into())),
        (None, Some(qv)) => QuadExtScalar::rational(qv.clone())
            .checked_sub(&s)?
            .scale(&Q::new(1.into(), 2.into())),
        (None, None) => QuadExtScalar::one(),
    };
    let upper = match &q {
        Some(qv) => min_scalar(
            QuadExtScalar::rational(qv.clone()),
            s.checked_add(&epsilon)?,
        )?,
        None => s.checked_add(&epsilon)?,
    };
    let conv = upper_convergent(&s, &upper)?.ok_or(WitnessError::NoApproximation)?;
    let ample_class = NSClass::combine(&[(conv.p.clone(), l1), (-conv.q.clone(), l2)])?;
    if !ample_test(&ample_class, x)? {
        return Err(WitnessError::Inconsistent(format!(
            "{}·L₁ − {}·L₂ lies above the slope but is not ample",
            conv.p, conv.q
        )));
    }
    Ok(SlopeCertificate {
        s,
        minpoly,
        q,
        epsilon,
        approx: (conv.p, conv.q),
        l1: l1.clone(),
        l2: l2.clone(),
        ample_class,
    })
}

/// Searches small integral pairs `(L₁, L₂)` on a simple abstract
/// presentation for an irrational boundary slope, with `L₁` the ample
/// reference, and certifies it against an empty candidate list.
pub fn find_slope_witness(x: &VarietyPresentation) -> Result<SlopeCertificate, WitnessError> {
    let a = match x {
        VarietyPresentation::Abstract(a) if a.is_simple() => a,
        _ => return Err(WitnessError::NotSimpleAbstract),
    };
    let l1 = NSClass::Coords(a.ample().to_vec());
    if l1.lattice_coordinates(x).is_err() {
        return Err(WitnessError::BadParameter(
            "ample reference is not integral".into(),
        ));
    }
    let rho = a.rank();
    for v in small_vectors(rho, 2) {
        let l2 = NSClass::Coords(v.iter().map(|&c| Q::from_integer(c.into())).collect());
        let independent = {
            let c1 = l1.as_coords().unwrap();
            let c2 = l2.as_coords().unwrap();
            (0..rho).any(|i| (0..rho).any(|j| &c1[i] * &c2[j] != &c1[j] * &c2[i]))
        };
        if !independent {
            continue;
        }
        match prop2_refute(&l1, &l2, x, &[], None) {
            Ok(cert) => return Ok(cert),
            Err(WitnessError::RationalSlope(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(WitnessError::NoIrrationalSlope)
}

fn small_vectors(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = crate::cone_engine::box_points(n, b)
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect();
    out.sort_by_key(|v| (v.iter().map(|c| c.abs()).sum::<i64>(), v.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q_frac, q_int};
    use crate::ns_lattice::AbstractVariety;

    fn surface() -> VarietyPresentation {
        AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], true)
            .unwrap()
            .into()
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    #[test]
    fn examples() {
        let x = surface();
        let l1 = NSClass::coords_from_ints(&[1, 0]);
        let l2 = NSClass::coords_from_ints(&[0, 1]);
        let c = prop2_refute(&l1, &l2, &x, &pairs(&[(4, 1)]), None).unwrap();
        assert_eq!(c.q, Some(q_int(4)));
        assert_eq!(c.approx_value(), q_frac(15, 4));
        assert_eq!(c.ample_class, NSClass::coords_from_ints(&[15, -4]));
        assert!(c.verify(&x).unwrap());
        let c = prop2_refute(&l1, &l2, &x, &pairs(&[(15, 4), (4, 1)]), None).unwrap();
        assert_eq!(c.approx_value(), q_frac(56, 15));
        assert!(c.verify(&x).unwrap());
        assert!(matches!(
            prop2_refute(&l1, &l2, &x, &pairs(&[(1, 1)]), None),
            Err(WitnessError::BelowSlope { .. })
        ));
        // an explicit tight window pushes the approximation further out
        let c = prop2_refute(&l1, &l2, &x, &pairs(&[(4, 1)]), Some(q_frac(1, 100))).unwrap();
        assert_eq!(c.approx_value(), q_frac(56, 15));
    }

    #[test]
    fn rational_slope_is_rejected() {
        let x = surface();
        let l1 = NSClass::coords_from_ints(&[1, 0]);
        assert!(matches!(
            prop2_refute(&l1, &l1, &x, &[], None),
            Err(WitnessError::RationalSlope(_))
        ));
    }

    #[test]
    fn automatic_search() {
        let x = surface();
        let c = find_slope_witness(&x).unwrap();
        assert!(c.s.rationality_certificate() != RationalityCertificate::Rational(q_int(0)));
        assert!(c.verify(&x).unwrap());
    }
}
