use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ConeError;
use crate::exactnum::{Poly, QuadExtScalar, Q};
use crate::ns_lattice::{
    ample_reference, ample_test, hermitian, intersection_number, nef_test, NSClass,
    VarietyPresentation,
};

/// Denominator of the rational samples used to validate a slope.
pub const SAMPLE_DENOMINATOR: i64 = 10_000;

/// Polynomials in `t` whose non-negativity describes when `t·L₁ − L₂` is
/// nef. Products give one pencil `det(t·H₁ − H₂)` per isogeny block;
/// abstract presentations give `(t·L₁ − L₂)^i·A^{g−i}` for `i = 1, …, g`.
pub fn slope_constraints(
    l1: &NSClass,
    l2: &NSClass,
    x: &VarietyPresentation,
) -> Result<Vec<Poly>, ConeError> {
    l1.validate(x)?;
    l2.validate(x)?;
    match x {
        VarietyPresentation::Product(p) => {
            let (h1, h2) = (l1.as_matrix().unwrap(), l2.as_matrix().unwrap());
            (0..p.blocks().len())
                .map(|b| Ok(hermitian::pencil_poly(h1, h2, p, b)?))
                .collect()
        }
        VarietyPresentation::Abstract(_) => {
            let g = x.dim();
            let a = ample_reference(x);
            (1..=g)
                .map(|i| {
                    let mut coeffs = vec![Q::zero(); i + 1];
                    for (k, c) in coeffs.iter_mut().enumerate() {
                        let args: Vec<&NSClass> = std::iter::repeat(l1)
                            .take(k)
                            .chain(std::iter::repeat(l2).take(i - k))
                            .chain(std::iter::repeat(&a).take(g - i))
                            .collect();
                        let v = intersection_number(&args, x)?;
                        let sign = if (i - k) % 2 == 0 {
                            Q::one()
                        } else {
                            -Q::one()
                        };
                        *c = Q::from_integer(binomial(i, k)) * sign * v;
                    }
                    Ok(Poly::new(coeffs))
                })
                .collect()
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `inf { t : t·L₁ − L₂ nef }` for an ample `L₁`, as an exact scalar.
///
/// The value is the largest real root of the slope constraints. It is then
/// checked by running the nef test at the neighbouring rationals with
/// denominator [`SAMPLE_DENOMINATOR`] on either side.
pub fn boundary_slope(
    l1: &NSClass,
    l2: &NSClass,
    x: &VarietyPresentation,
) -> Result<QuadExtScalar, ConeError> {
    if !ample_test(l1, x)? {
        return Err(ConeError::NotAmple);
    }
    let mut s: Option<QuadExtScalar> = None;
    for f in slope_constraints(l1, l2, x)? {
        if let Some(r) = f.largest_real_root()? {
            s = match s {
                Some(cur) if cur.try_cmp(&r)? != Ordering::Less => Some(cur),
                _ => Some(r),
            };
        }
    }
    let s =
        s.ok_or_else(|| ConeError::Inconsistent("slope constraints have no real root".into()))?;
    let (below, above) = bracket(&s, SAMPLE_DENOMINATOR)?;
    if !nef_at(l1, l2, x, &above)? || nef_at(l1, l2, x, &below)? {
        return Err(ConeError::Inconsistent(format!(
            "nef samples around {s} disagree with the computed slope"
        )));
    }
    Ok(s)
}

/// Rationals `(⌈s·K⌉ − 1)/K < s < (⌊s·K⌋ + 1)/K`.
pub fn bracket(s: &QuadExtScalar, k: i64) -> Result<(Q, Q), ConeError> {
    let kq = Q::from_integer(k.into());
    let sk = s.scale(&kq);
    let fl = sk.floor()?;
    let exact = sk.as_rational().is_some_and(|r| r.is_integer());
    let ceil = if exact { fl.clone() } else { &fl + 1 };
    let below = Q::new(ceil - 1, k.into());
    let above = Q::new(fl + 1, k.into());
    Ok((below, above))
}

/// Nef test of `t·L₁ − L₂`, scaled to an integral class.
pub fn nef_at(
    l1: &NSClass,
    l2: &NSClass,
    x: &VarietyPresentation,
    t: &Q,
) -> Result<bool, ConeError> {
    let c = NSClass::combine(&[(t.numer().clone(), l1), (-t.denom().clone(), l2)])?;
    Ok(nef_test(&c, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q_frac, q_int};
    use crate::ns_lattice::{AbstractVariety, EndRing, Factor, HermitianClass, ProductVariety};

    fn surface() -> VarietyPresentation {
        AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], true)
            .unwrap()
            .into()
    }

    #[test]
    fn abstract_surface_slope() {
        let x = surface();
        let l1 = NSClass::coords_from_ints(&[1, 0]);
        let l2 = NSClass::coords_from_ints(&[0, 1]);
        let s = boundary_slope(&l1, &l2, &x).unwrap();
        assert_eq!(s, QuadExtScalar::new(q_int(2), q_int(1), 3).unwrap());
        assert!(nef_at(&l1, &l2, &x, &q_frac(15, 4)).unwrap());
        assert!(!nef_at(&l1, &l2, &x, &q_frac(7, 2)).unwrap());
        assert_eq!(
            boundary_slope(&l1, &l1, &x).unwrap(),
            QuadExtScalar::from_int(1)
        );
        let bad = NSClass::coords_from_ints(&[1, -1]);
        assert!(matches!(
            boundary_slope(&bad, &l1, &x),
            Err(ConeError::NotAmple)
        ));
    }

    #[test]
    fn product_slope() {
        let x: VarietyPresentation =
            ProductVariety::new(vec![Factor::new("E", EndRing::Integers, 2)])
                .unwrap()
                .into();
        let l1 = NSClass::Matrix(HermitianClass::identity(2));
        let l2 = NSClass::Matrix(HermitianClass::from_ints(&[&[2, 1], &[1, 1]]).unwrap());
        let s = boundary_slope(&l1, &l2, &x).unwrap();
        assert_eq!(
            s,
            QuadExtScalar::new(q_frac(3, 2), q_frac(1, 2), 5).unwrap()
        );
    }

    #[test]
    fn brackets() {
        let (lo, hi) = bracket(&QuadExtScalar::from_int(1), 10).unwrap();
        assert_eq!((lo, hi), (q_frac(9, 10), q_frac(11, 10)));
        let s = QuadExtScalar::new(q_int(2), q_int(1), 3).unwrap();
        let (lo, hi) = bracket(&s, 100).unwrap();
        assert_eq!((lo, hi), (q_frac(373, 100), q_frac(374, 100)));
    }
}
