use num_traits::{One, Signed, Zero};

use super::hermitian::{self, class_charpoly, class_det};
use super::{HermitianClass, NSClass, NsError, VarietyPresentation};
use crate::exactnum::{format_rational, Poly, Q};

/// Ample reference: the product polarization (identity matrix) or the
/// stored ample coordinates.
pub fn ample_reference(x: &VarietyPresentation) -> NSClass {
    match x {
        VarietyPresentation::Product(p) => NSClass::Matrix(HermitianClass::identity(p.dim())),
        VarietyPresentation::Abstract(a) => NSClass::Coords(a.ample().to_vec()),
    }
}

/// Intersection number of `g` classes on a `g`-dimensional presentation.
///
/// Product presentations use `g!` times the mixed discriminant of the
/// complex embeddings, expanded by polarization:
/// `Σ_{S ⊆ [g]} (−1)^{g−|S|} det(Σ_{i∈S} Hᵢ)`. With the identity as
/// reference, `A^g = g!`. The result must be a rational integer.
pub fn intersection_number(classes: &[&NSClass], x: &VarietyPresentation) -> Result<Q, NsError> {
    let g = x.dim();
    if classes.len() != g {
        return Err(NsError::WrongArity {
            expected: g,
            got: classes.len(),
        });
    }
    for c in classes {
        c.validate(x)?;
    }
    match x {
        VarietyPresentation::Abstract(a) => {
            let args: Vec<&[Q]> = classes
                .iter()
                .map(|c| c.as_coords().expect("validated"))
                .collect();
            Ok(a.evaluate(&args))
        }
        VarietyPresentation::Product(p) => {
            let mats: Vec<&HermitianClass> = classes
                .iter()
                .map(|c| c.as_matrix().expect("validated"))
                .collect();
            let mut total = Q::zero();
            for mask in 1usize..(1 << g) {
                let mut sum = HermitianClass::zero(g);
                for (i, m) in mats.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        sum = sum.add(m);
                    }
                }
                let d = class_det(&sum, p)?;
                if (g - mask.count_ones() as usize) % 2 == 0 {
                    total += d;
                } else {
                    total -= d;
                }
            }
            if !total.is_integer() {
                return Err(NsError::NonIntegral(format_rational(&total)));
            }
            Ok(total)
        }
    }
}

/// `L^i · A^{g−i}` for `i = 0, …, g`.
pub fn mixed_with_reference(l: &NSClass, x: &VarietyPresentation) -> Result<Vec<Q>, NsError> {
    let a = ample_reference(x);
    let g = x.dim();
    (0..=g)
        .map(|i| {
            let args: Vec<&NSClass> = std::iter::repeat(l)
                .take(i)
                .chain(std::iter::repeat(&a).take(g - i))
                .collect();
            intersection_number(&args, x)
        })
        .collect()
}

/// Characteristic polynomial of the complex embedding of a product class.
pub fn analytic_charpoly(h: &NSClass, x: &VarietyPresentation) -> Result<Poly, NsError> {
    let (VarietyPresentation::Product(p), NSClass::Matrix(m)) = (x, h) else {
        return Err(NsError::Unsupported(
            "analytic characteristic polynomial needs a product presentation",
        ));
    };
    m.validate(p)?;
    let poly = class_charpoly(m, p)?;
    if poly.integer_coeffs().is_none() {
        return Err(NsError::NonIntegral(poly.to_string()));
    }
    Ok(poly)
}

/// `L^i·A^{g−i} ≥ 0` for `1 ≤ i ≤ g`.
pub fn nef_test(l: &NSClass, x: &VarietyPresentation) -> Result<bool, NsError> {
    Ok(mixed_with_reference(l, x)?
        .iter()
        .skip(1)
        .all(|v| !v.is_negative()))
}

/// `L^i·A^{g−i} > 0` for `0 ≤ i ≤ g`. On product presentations this is
/// cross-checked against positive definiteness of the embedding.
pub fn ample_test(l: &NSClass, x: &VarietyPresentation) -> Result<bool, NsError> {
    let by_intersections = mixed_with_reference(l, x)?.iter().all(Signed::is_positive);
    if let (VarietyPresentation::Product(p), NSClass::Matrix(m)) = (x, l) {
        let by_minors = hermitian::is_positive_definite(m, p)?;
        if by_minors != by_intersections {
            return Err(NsError::Inconsistent(format!(
                "ampleness of {m}: intersections say {by_intersections}, minors say {by_minors}"
            )));
        }
    }
    Ok(by_intersections)
}

/// Top self-intersection `L^g`.
pub fn self_intersection(l: &NSClass, x: &VarietyPresentation) -> Result<Q, NsError> {
    let args = vec![l; x.dim()];
    intersection_number(&args, x)
}

/// `k!·(g−k)!` as a rational.
pub fn factorial_weight(g: usize, k: usize) -> Q {
    let f = |n: usize| (1..=n).fold(Q::one(), |acc, i| acc * Q::from_integer(i.into()));
    f(k) * f(g - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q_int;
    use crate::ns_lattice::{AbstractVariety, EndRing, Factor, HomEntry, ProductVariety};

    fn exe(end: EndRing) -> VarietyPresentation {
        ProductVariety::new(vec![Factor::new("E", end, 2)])
            .unwrap()
            .into()
    }

    fn m(rows: &[&[i64]]) -> NSClass {
        NSClass::Matrix(HermitianClass::from_ints(rows).unwrap())
    }

    #[test]
    fn basic_intersections() {
        let x = exe(EndRing::Integers);
        let a = ample_reference(&x);
        assert_eq!(intersection_number(&[&a, &a], &x).unwrap(), q_int(2));
        let f1 = m(&[&[1, 0], &[0, 0]]);
        let f2 = m(&[&[0, 0], &[0, 1]]);
        assert_eq!(intersection_number(&[&f1, &f2], &x).unwrap(), q_int(1));
        assert_eq!(intersection_number(&[&f1, &f1], &x).unwrap(), q_int(0));
        assert!(matches!(
            intersection_number(&[&f1], &x),
            Err(NsError::WrongArity {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn cm_isotropic_class() {
        let x = exe(EndRing::cm(-4).unwrap());
        let l = NSClass::Matrix(
            HermitianClass::from_rows(vec![
                vec![HomEntry::int(1), HomEntry::new(2, 1)],
                vec![HomEntry::new(-2, -1), HomEntry::int(1)],
            ])
            .unwrap(),
        );
        assert_eq!(self_intersection(&l, &x).unwrap(), q_int(0));
    }

    #[test]
    fn charpoly_examples() {
        let x = exe(EndRing::Integers);
        assert_eq!(
            analytic_charpoly(&ample_reference(&x), &x).unwrap(),
            Poly::from_ints(&[1, -2, 1])
        );
        assert_eq!(
            analytic_charpoly(&m(&[&[1, 0], &[0, 0]]), &x).unwrap(),
            Poly::from_ints(&[0, -1, 1])
        );
        let s: VarietyPresentation = AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], true)
            .unwrap()
            .into();
        assert!(matches!(
            analytic_charpoly(&NSClass::coords_from_ints(&[1, 0]), &s),
            Err(NsError::Unsupported(_))
        ));
    }

    #[test]
    fn nef_and_ample_examples() {
        let x = exe(EndRing::Integers);
        assert!(nef_test(&m(&[&[1, 0], &[0, 0]]), &x).unwrap());
        assert!(!nef_test(&m(&[&[1, 2], &[2, 1]]), &x).unwrap());
        assert_eq!(
            self_intersection(&m(&[&[1, 2], &[2, 1]]), &x).unwrap(),
            q_int(-6)
        );
        for k in 1..=6 {
            assert!(nef_test(&m(&[&[1, k], &[k, k * k]]), &x).unwrap());
        }
        assert!(ample_test(&ample_reference(&x), &x).unwrap());
        assert!(!ample_test(&m(&[&[1, 0], &[0, 0]]), &x).unwrap());
        assert!(ample_test(&m(&[&[2, 1], &[1, 1]]), &x).unwrap());
    }

    #[test]
    fn abstract_surface_nef() {
        let s: VarietyPresentation = AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], true)
            .unwrap()
            .into();
        let c = |a: i64, b: i64| NSClass::coords_from_ints(&[a, -b]);
        // 15L₁ − 4L₂: square 2, degree 14
        assert_eq!(self_intersection(&c(15, 4), &s).unwrap(), q_int(2));
        assert!(ample_test(&c(15, 4), &s).unwrap());
        // 7L₁ − 2L₂ lies below 2 + √3
        assert!(!nef_test(&c(7, 2), &s).unwrap());
    }
}
