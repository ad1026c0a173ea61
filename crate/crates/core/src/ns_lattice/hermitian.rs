//! Complex embeddings of Hermitian classes and exact linear algebra over
//! `Q(√D)`. Everything is computed block by block: classes never couple
//! non-isogenous factors, and each block lives in a single quadratic field.

use num_traits::{Signed, Zero};

use super::{HermitianClass, NsError, ProductVariety};
use crate::exactnum::{q_int, ExactError, Poly, QuadExtScalar, Q};

pub type ScalarMatrix = Vec<Vec<QuadExtScalar>>;

/// The complex embedding of block `block` of `h`.
pub fn embed_block(h: &HermitianClass, x: &ProductVariety, block: usize) -> ScalarMatrix {
    let b = x.blocks()[block];
    let ring = &x.factors()[b.factor].end;
    b.range()
        .map(|i| b.range().map(|j| ring.embed(h.get(i, j))).collect())
        .collect()
}

/// Determinant by Gaussian elimination over the field.
pub fn det(m: &ScalarMatrix) -> Result<QuadExtScalar, ExactError> {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = QuadExtScalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(QuadExtScalar::zero());
        };
        if p != col {
            a.swap(p, col);
            acc = acc.neg();
        }
        let pivot = a[col][col].clone();
        acc = acc.checked_mul(&pivot)?;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].checked_div(&pivot)?;
            for c in col..n {
                let v = factor.checked_mul(&a[col][c])?;
                a[r][c] = a[r][c].checked_sub(&v)?;
            }
        }
    }
    Ok(acc)
}

fn real_part(x: QuadExtScalar, what: &str) -> Result<Q, NsError> {
    x.as_rational()
        .cloned()
        .ok_or_else(|| NsError::NonIntegral(format!("{what} has imaginary part: {x}")))
}

/// `det` of the complex embedding of `h`, a rational number.
pub fn class_det(h: &HermitianClass, x: &ProductVariety) -> Result<Q, NsError> {
    let mut acc = q_int(1);
    for k in 0..x.blocks().len() {
        let d = det(&embed_block(h, x, k))?;
        acc *= real_part(d, "determinant")?;
    }
    Ok(acc)
}

/// Characteristic polynomial `det(t·I − M)` via Faddeev–LeVerrier,
/// coefficients in ascending order.
pub fn charpoly(m: &ScalarMatrix) -> Result<Vec<QuadExtScalar>, ExactError> {
    let n = m.len();
    let mut coeffs = vec![QuadExtScalar::zero(); n + 1];
    coeffs[n] = QuadExtScalar::one();
    let mut mk: ScalarMatrix = vec![vec![QuadExtScalar::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = matmul(m, &mk)?;
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].checked_add(&coeffs[n - k + 1])?;
        }
        let am = matmul(m, &next)?;
        let mut tr = QuadExtScalar::zero();
        for (i, row) in am.iter().enumerate() {
            tr = tr.checked_add(&row[i])?;
        }
        coeffs[n - k] = tr.scale(&Q::new((-1).into(), (k as i64).into()));
        mk = next;
    }
    Ok(coeffs)
}

fn matmul(a: &ScalarMatrix, b: &ScalarMatrix) -> Result<ScalarMatrix, ExactError> {
    let n = a.len();
    let mut out = vec![vec![QuadExtScalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let v = a[i][k].checked_mul(&b[k][j])?;
                out[i][j] = out[i][j].checked_add(&v)?;
            }
        }
    }
    Ok(out)
}

/// Characteristic polynomial of the complex embedding of `h`, the product of
/// the block polynomials. Coefficients are rational.
pub fn class_charpoly(h: &HermitianClass, x: &ProductVariety) -> Result<Poly, NsError> {
    let mut acc = Poly::constant(q_int(1));
    for k in 0..x.blocks().len() {
        let coeffs = charpoly(&embed_block(h, x, k))?
            .into_iter()
            .map(|c| real_part(c, "characteristic polynomial coefficient"))
            .collect::<Result<Vec<_>, _>>()?;
        acc = acc.mul(&Poly::new(coeffs));
    }
    Ok(acc)
}

fn minors_of_block(m: &ScalarMatrix, leading_only: bool) -> Result<Vec<Q>, NsError> {
    let n = m.len();
    let subsets: Vec<Vec<usize>> = if leading_only {
        (1..=n).map(|k| (0..k).collect()).collect()
    } else {
        (1..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    };
    subsets
        .into_iter()
        .map(|s| {
            let sub: ScalarMatrix = s
                .iter()
                .map(|&i| s.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            real_part(det(&sub)?, "principal minor")
        })
        .collect()
}

/// Positive semidefiniteness of the complex embedding: every principal
/// minor is non-negative.
pub fn is_positive_semidefinite(h: &HermitianClass, x: &ProductVariety) -> Result<bool, NsError> {
    for k in 0..x.blocks().len() {
        if minors_of_block(&embed_block(h, x, k), false)?
            .iter()
            .any(Signed::is_negative)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positive definiteness by Sylvester's criterion on leading minors.
pub fn is_positive_definite(h: &HermitianClass, x: &ProductVariety) -> Result<bool, NsError> {
    for k in 0..x.blocks().len() {
        if minors_of_block(&embed_block(h, x, k), true)?
            .iter()
            .any(|m| !m.is_positive())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det(t·H₁ − H₂)` on one block, by interpolation at `t = 0, …, n`.
pub fn pencil_poly(
    h1: &HermitianClass,
    h2: &HermitianClass,
    x: &ProductVariety,
    block: usize,
) -> Result<Poly, NsError> {
    let m1 = embed_block(h1, x, block);
    let m2 = embed_block(h2, x, block);
    let n = m1.len();
    let mut points = Vec::with_capacity(n + 1);
    for t in 0..=n as i64 {
        let tq = QuadExtScalar::from_int(t);
        let mut m = m1.clone();
        for (row, row2) in m.iter_mut().zip(&m2) {
            for (e, e2) in row.iter_mut().zip(row2) {
                *e = tq.checked_mul(e)?.checked_sub(e2)?;
            }
        }
        points.push((q_int(t), real_part(det(&m)?, "pencil determinant")?));
    }
    Ok(interpolate(&points))
}

/// Lagrange interpolation through the given points.
pub fn interpolate(points: &[(Q, Q)]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let denom = xi - xj;
                term = term
                    .mul(&Poly::linear_root(xj))
                    .scale(&(Q::from_integer(1.into()) / denom));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::{EndRing, Factor, HomEntry};

    fn exe(end: EndRing) -> ProductVariety {
        ProductVariety::new(vec![Factor::new("E", end, 2)]).unwrap()
    }

    #[test]
    fn determinants() {
        let x = exe(EndRing::Integers);
        let h = HermitianClass::from_ints(&[&[1, 2], &[2, 1]]).unwrap();
        assert_eq!(class_det(&h, &x).unwrap(), q_int(-3));
        let y = exe(EndRing::cm(-4).unwrap());
        // off-diagonal i = 2 + ω
        let h = HermitianClass::from_rows(vec![
            vec![HomEntry::int(1), HomEntry::new(2, 1)],
            vec![HomEntry::new(-2, -1), HomEntry::int(1)],
        ])
        .unwrap();
        h.validate(&y).unwrap();
        assert_eq!(class_det(&h, &y).unwrap(), q_int(0));
    }

    #[test]
    fn charpolys() {
        let x = exe(EndRing::Integers);
        let h = HermitianClass::from_ints(&[&[1, 3], &[3, 9]]).unwrap();
        assert_eq!(
            class_charpoly(&h, &x).unwrap(),
            Poly::from_ints(&[0, -10, 1])
        );
        let h = HermitianClass::diagonal(&[1, 0]);
        assert_eq!(
            class_charpoly(&h, &x).unwrap(),
            Poly::from_ints(&[0, -1, 1])
        );
    }

    #[test]
    fn definiteness() {
        let x = exe(EndRing::Integers);
        let h = HermitianClass::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        assert!(is_positive_definite(&h, &x).unwrap());
        let h = HermitianClass::diagonal(&[1, 0]);
        assert!(!is_positive_definite(&h, &x).unwrap());
        assert!(is_positive_semidefinite(&h, &x).unwrap());
        // leading minors of [[0,0],[0,-1]] are 0, 0 but the matrix is not PSD
        let h = HermitianClass::diagonal(&[0, -1]);
        assert!(!is_positive_semidefinite(&h, &x).unwrap());
    }

    #[test]
    fn pencil_interpolation() {
        let x = exe(EndRing::Integers);
        let id = HermitianClass::identity(2);
        let h = HermitianClass::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        assert_eq!(
            pencil_poly(&id, &h, &x, 0).unwrap(),
            Poly::from_ints(&[1, -3, 1])
        );
    }
}
