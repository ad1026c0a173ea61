use std::fmt;

use super::linalg::{self, IVec};
use super::{ConeError, MAX_CONE_RANK};

/// Integer bilinear form `⟨y, x⟩ = yᵀ·G·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    gram: Vec<IVec>,
}

impl Pairing {
    pub fn new(gram: Vec<IVec>) -> Result<Self, ConeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(ConeError::Shape(format!("gram matrix must be {n}×{n}")));
        }
        if linalg::det(&gram) == 0.into() {
            return Err(ConeError::DegeneratePairing);
        }
        Ok(Self { gram })
    }

    pub fn standard(n: usize) -> Self {
        let gram = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[IVec] {
        &self.gram
    }

    /// The linear form `y ↦ ⟨y, x⟩` as a coefficient vector.
    pub fn form_of(&self, x: &[i64]) -> Result<IVec, ConeError> {
        linalg::mat_vec(&self.gram, x)
    }
}

/// A finitely generated cone in `Z^ρ`, stored by primitive generators in
/// lexicographic order without duplicates. Lineality directions appear as
/// pairs `±v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCone {
    rank: usize,
    rays: Vec<IVec>,
}

impl RationalCone {
    pub fn new(rank: usize, rays: Vec<IVec>) -> Result<Self, ConeError> {
        let mut out = Vec::with_capacity(rays.len());
        for r in rays {
            if r.len() != rank {
                return Err(ConeError::Shape(format!(
                    "ray {r:?} has length {}, rank is {rank}",
                    r.len()
                )));
            }
            if linalg::is_zero_vec(&r) {
                return Err(ConeError::ZeroRay);
            }
            out.push(linalg::primitive(&r));
        }
        out.sort();
        out.dedup();
        Ok(Self { rank, rays: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        linalg::rank(&self.rays, self.rank)
    }

    /// Facet description `{y : uᵢ·y ≥ 0}` under the standard pairing.
    pub fn inequalities(&self) -> Result<Vec<IVec>, ConeError> {
        Ok(dual_cone(self, &Pairing::standard(self.rank))?.rays)
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool, ConeError> {
        if x.len() != self.rank {
            return Err(ConeError::Shape(format!("point {x:?} has wrong length")));
        }
        Ok(self.inequalities()?.iter().all(|u| linalg::dot(u, x) >= 0))
    }

    /// True when the cone contains no line.
    pub fn is_pointed(&self) -> Result<bool, ConeError> {
        let ineq = self.inequalities()?;
        Ok(linalg::rank(&ineq, self.rank) == self.rank)
    }

    /// Same cone, generated by extremal rays (plus `±` lineality vectors).
    pub fn canonical(&self) -> Result<Self, ConeError> {
        let p = Pairing::standard(self.rank);
        dual_cone(&dual_cone(self, &p)?, &p)
    }

    pub fn equivalent(&self, other: &Self) -> Result<bool, ConeError> {
        if self.rank != other.rank {
            return Ok(false);
        }
        for r in &other.rays {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        for r in &self.rays {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A linear form strictly positive on the cone minus the origin.
    pub fn grading(&self) -> Result<IVec, ConeError> {
        let ineq = self.inequalities()?;
        if linalg::rank(&ineq, self.rank) != self.rank {
            return Err(ConeError::NotPointed);
        }
        let mut w = vec![0i64; self.rank];
        for u in &ineq {
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = wi.checked_add(*ui).ok_or(ConeError::Overflow)?;
            }
        }
        Ok(w)
    }
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|r| format!("{r:?}")).collect();
        write!(f, "cone⟨{}⟩", parts.join(", "))
    }
}

/// `{y : ⟨y, x⟩ ≥ 0 for every generator x of C}`, by its extremal rays and,
/// when `C` is not full-dimensional, `±` a basis of the lineality space.
///
/// Rays of a pointed section are found as one-dimensional intersections of
/// `ρ − 1` independent hyperplanes (tight constraints together with the
/// orthogonal complement of the lineality space), keeping those that
/// satisfy every constraint.
pub fn dual_cone(c: &RationalCone, pairing: &Pairing) -> Result<RationalCone, ConeError> {
    let n = c.rank;
    if n > MAX_CONE_RANK {
        return Err(ConeError::RankTooLarge(n));
    }
    if pairing.rank() != n {
        return Err(ConeError::Shape(format!(
            "pairing has rank {}, cone has rank {n}",
            pairing.rank()
        )));
    }
    let forms: Vec<IVec> = c
        .rays
        .iter()
        .map(|x| pairing.form_of(x))
        .collect::<Result<_, _>>()?;
    let lineality = linalg::nullspace(&forms, n)?;
    let r = n - lineality.len();
    let mut rays: Vec<IVec> = Vec::new();
    for l in &lineality {
        rays.push(l.clone());
        rays.push(linalg::scale(l, -1));
    }
    if r > 0 {
        for subset in subsets(forms.len(), r - 1) {
            let mut eqs: Vec<IVec> = lineality.clone();
            eqs.extend(subset.iter().map(|&i| forms[i].clone()));
            if linalg::rank(&eqs, n) != n - 1 {
                continue;
            }
            let v = linalg::cross(&eqs, n)?;
            for cand in [v.clone(), linalg::scale(&v, -1)] {
                if forms.iter().all(|u| linalg::dot(u, &cand) >= 0) {
                    rays.push(cand);
                }
            }
        }
    }
    RationalCone::new(n, rays)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(rays: &[&[i64]]) -> RationalCone {
        RationalCone::new(rays[0].len(), rays.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn duals_in_rank_two() {
        let p = Pairing::standard(2);
        let orthant = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(dual_cone(&orthant, &p).unwrap(), orthant);
        let c = cone(&[&[2, -1], &[0, 1]]);
        assert_eq!(dual_cone(&c, &p).unwrap(), cone(&[&[1, 0], &[1, 2]]));
        let c = cone(&[&[1, 0], &[1, 3]]);
        assert_eq!(dual_cone(&dual_cone(&c, &p).unwrap(), &p).unwrap(), c);
    }

    #[test]
    fn lower_dimensional_and_rank_three() {
        let p = Pairing::standard(2);
        let ray = cone(&[&[1, 1]]);
        let d = dual_cone(&ray, &p).unwrap();
        assert_eq!(d, cone(&[&[1, -1], &[-1, 1], &[1, 0]]).canonical().unwrap());
        assert!(d.contains(&[0, 1]).unwrap());
        assert!(!d.contains(&[-1, 0]).unwrap());
        assert!(!d.is_pointed().unwrap());

        let p3 = Pairing::standard(3);
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(
            dual_cone(&c, &p3).unwrap(),
            cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
        );
        let sq = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(dual_cone(&dual_cone(&sq, &p3).unwrap(), &p3).unwrap(), sq);
    }

    #[test]
    fn pairings_and_errors() {
        assert!(matches!(
            Pairing::new(vec![vec![1, 2], vec![2, 4]]),
            Err(ConeError::DegeneratePairing)
        ));
        let hyp = Pairing::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let c = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(dual_cone(&c, &hyp).unwrap(), c);
        let big = RationalCone::new(4, vec![vec![1, 0, 0, 0]]).unwrap();
        assert!(matches!(
            dual_cone(&big, &Pairing::standard(4)),
            Err(ConeError::RankTooLarge(4))
        ));
        assert!(matches!(
            RationalCone::new(2, vec![vec![0, 0]]),
            Err(ConeError::ZeroRay)
        ));
    }

    #[test]
    fn whole_space_dual_is_origin_and_back() {
        let p = Pairing::standard(2);
        let empty = RationalCone::new(2, vec![]).unwrap();
        let whole = dual_cone(&empty, &p).unwrap();
        assert_eq!(whole.dimension(), 2);
        assert!(whole.contains(&[-3, 5]).unwrap());
        assert!(dual_cone(&whole, &p).unwrap().rays().is_empty());
    }
}
