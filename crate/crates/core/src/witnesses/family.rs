//! The divergent family on `X × X` for `X` of Picard rank one.
//!
//! With `M` the ample generator of `NS(X)`, set `L₁ = pr₁*M`, `L₂ = pr₂*M`,
//! `L₃ = μ*M` and `B_m = (1−m)L₁ + (m²−m)L₂ + m·L₃`. Every `B_m` is nef and
//! restricts to `M` on the first factor, while `(ι₂*B_m − ι₃*B_m)^n` has
//! magnitude `(2m+1)^n·M^n`, so no finite set of generators can bound it.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::WitnessError;
use crate::exactnum::{Poly, Q};
use crate::ns_lattice::{
    analytic_charpoly, factorial_weight, intersection_number, mixed_with_reference, nef_test,
    pullback, standard_hom_on, AbstractVariety, EndRing, HermitianClass, HomEntry, LatticeHom,
    NSClass, ProductVariety, StandardMap, VarietyPresentation,
};

/// Where the family lives: an elliptic curve with its full matrix model, or
/// an abstract `n`-dimensional `X` with `NS = Z·M` and `M^n = degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyBase {
    Elliptic(ProductVariety),
    RankOne { dim: usize, degree: BigInt },
}

impl FamilyBase {
    pub fn from_presentation(x: &VarietyPresentation) -> Result<Self, WitnessError> {
        match x {
            VarietyPresentation::Product(p) => {
                if p.factors().len() != 1 || p.dim() != 1 {
                    return Err(WitnessError::RankNotOne(p.ns_rank()));
                }
                Ok(Self::Elliptic(p.clone()))
            }
            VarietyPresentation::Abstract(a) => {
                if a.rank() != 1 {
                    return Err(WitnessError::RankNotOne(a.rank()));
                }
                Ok(Self::RankOne {
                    dim: a.dim(),
                    degree: generator_degree(a),
                })
            }
        }
    }

    /// Dimension `n` of `X`.
    pub fn dim(&self) -> usize {
        match self {
            Self::Elliptic(_) => 1,
            Self::RankOne { dim, .. } => *dim,
        }
    }

    /// `M^n`.
    pub fn degree(&self) -> BigInt {
        match self {
            Self::Elliptic(_) => BigInt::one(),
            Self::RankOne { degree, .. } => degree.clone(),
        }
    }

    /// Presentation carrying the matrix model of `X × X`. For an abstract
    /// base this is the model `E × E`, whose symmetric endomorphisms are the
    /// same integer matrices.
    fn model(&self) -> ProductVariety {
        match self {
            Self::Elliptic(p) => p.clone(),
            Self::RankOne { .. } => ProductVariety::elliptic("X", EndRing::Integers),
        }
    }

    fn model_square(&self) -> ProductVariety {
        self.model()
            .doubled()
            .expect("doubling a curve stays in range")
    }

    /// `N·A^{2n−k}·N^k` on `X × X`, `k = 0, …, 2n`, with `A = L₁ + L₂`.
    pub fn intersections(&self, h: &HermitianClass) -> Result<Vec<Q>, WitnessError> {
        let sq: VarietyPresentation = self.model_square().into();
        let class = NSClass::Matrix(h.clone());
        match self {
            Self::Elliptic(_) => Ok(mixed_with_reference(&class, &sq)?),
            Self::RankOne { dim, degree } => {
                let n = *dim;
                let p = self.charpoly(h)?;
                let nf = factorial_weight(n, 0);
                let scale = {
                    let r = Q::from_integer(degree.clone()) / nf;
                    &r * &r
                };
                Ok((0..=2 * n)
                    .map(|k| {
                        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                        &scale * factorial_weight(2 * n, k) * sign * p.coeff(2 * n - k)
                    })
                    .collect())
            }
        }
    }

    /// Analytic characteristic polynomial of the endomorphism of `X × X`.
    pub fn charpoly(&self, h: &HermitianClass) -> Result<Poly, WitnessError> {
        let sq: VarietyPresentation = self.model_square().into();
        let base = analytic_charpoly(&NSClass::Matrix(h.clone()), &sq)?;
        Ok(base.pow(self.dim() as u32 / self.model().dim() as u32))
    }

    pub fn is_nef(&self, h: &HermitianClass) -> Result<bool, WitnessError> {
        match self {
            Self::Elliptic(_) => Ok(nef_test(
                &NSClass::Matrix(h.clone()),
                &self.model_square().into(),
            )?),
            Self::RankOne { .. } => Ok(self
                .intersections(h)?
                .iter()
                .skip(1)
                .all(|v| !v.is_negative())),
        }
    }

    /// `(ι₁*N, ι₂*N, ι₃*N)` as multiples of `M`.
    pub fn restrictions(&self, h: &HermitianClass) -> Result<[BigInt; 3], WitnessError> {
        h.validate(&self.model_square())?;
        let x = self.model();
        let mut out: [BigInt; 3] = Default::default();
        for (slot, map) in
            out.iter_mut()
                .zip([StandardMap::Iota1, StandardMap::Iota2, StandardMap::Iota3])
        {
            let r = pullback(&standard_hom_on(map, &x)?, h)?;
            *slot = r.get(0, 0).a.clone();
        }
        Ok(out)
    }

    /// `(ι₂*N − ι₃*N)^n`.
    pub fn divergence(&self, h: &HermitianClass) -> Result<BigInt, WitnessError> {
        let [_, two, three] = self.restrictions(h)?;
        let k = two - three;
        match self {
            Self::Elliptic(x) => {
                let xp: VarietyPresentation = x.clone().into();
                let c = NSClass::Matrix(HermitianClass::from_rows(vec![vec![HomEntry {
                    a: k,
                    b: BigInt::zero(),
                }]])?);
                let v = intersection_number(&[&c], &xp)?;
                Ok(v.to_integer())
            }
            Self::RankOne { dim, degree } => Ok(num_traits::pow(k, *dim) * degree),
        }
    }
}

fn generator_degree(a: &AbstractVariety) -> BigInt {
    let t = a.tensor()[0].clone();
    // M is the generator with M^n > 0
    if a.dim() % 2 == 1 && t.is_negative() {
        -t
    } else {
        t
    }
}

/// One member of the family with every property checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmRecord {
    pub m: u64,
    pub n: usize,
    pub class: NSClass,
    pub charpoly: Poly,
    pub charpoly_matches: bool,
    pub beta_relation_checked: bool,
    pub alpha_correspondence_checked: bool,
    pub restriction_is_generator: bool,
    pub nef: bool,
    pub intersections: Vec<Q>,
    pub divergence_value: BigInt,
}

impl BmRecord {
    pub fn verified(&self) -> bool {
        self.charpoly_matches
            && self.beta_relation_checked
            && self.alpha_correspondence_checked
            && self.restriction_is_generator
            && self.nef
    }

    pub fn matrix(&self) -> &HermitianClass {
        self.class.as_matrix().expect("family classes are matrices")
    }
}

/// `t^n·(t − (m²+1))^n`.
pub fn expected_charpoly(m: u64, n: usize) -> Poly {
    let c = Q::from_integer(BigInt::from(m) * m + 1);
    Poly::from_ints(&[0, 1])
        .mul(&Poly::linear_root(&c))
        .pow(n as u32)
}

/// The classes `L₁, L₂, L₃` on `X × X`.
pub fn generators(base: &FamilyBase) -> Result<[HermitianClass; 3], WitnessError> {
    let x = base.model();
    let m = HermitianClass::identity(1);
    Ok([
        pullback(&standard_hom_on(StandardMap::Pr1, &x)?, &m)?,
        pullback(&standard_hom_on(StandardMap::Pr2, &x)?, &m)?,
        pullback(&standard_hom_on(StandardMap::Mu, &x)?, &m)?,
    ])
}

/// `B_m` with its checked invariants.
pub fn bm_family(x: &VarietyPresentation, m: u64) -> Result<BmRecord, WitnessError> {
    if m == 0 {
        return Err(WitnessError::BadParameter("m must be at least 1".into()));
    }
    let base = FamilyBase::from_presentation(x)?;
    bm_record(&base, m)
}

pub fn bm_record(base: &FamilyBase, m: u64) -> Result<BmRecord, WitnessError> {
    let [l1, l2, l3] = generators(base)?;
    let mb = BigInt::from(m);
    let class = l1
        .scale(&(BigInt::one() - &mb))
        .add(&l2.scale(&(&mb * &mb - &mb)))
        .add(&l3.scale(&mb));
    let sq = base.model_square();

    let beta = LatticeHom::from_class(&sq, &class)?;
    let factor = (&mb * &mb + BigInt::one())
        .to_i64()
        .ok_or(WitnessError::BadParameter("m too large".into()))?;
    let beta_relation_checked = beta.compose(&beta)? == beta.scale(factor);

    let mut alpha_correspondence_checked = true;
    for (l, a) in [&l1, &l2, &l3].into_iter().zip([
        StandardMap::Alpha1,
        StandardMap::Alpha2,
        StandardMap::Alpha3,
    ]) {
        alpha_correspondence_checked &=
            LatticeHom::from_class(&sq, l)? == standard_hom_on(a, &base.model())?;
    }

    let n = base.dim();
    let charpoly = base.charpoly(&class)?;
    let charpoly_matches = charpoly == expected_charpoly(m, n);
    let intersections = base.intersections(&class)?;
    let nef = base.is_nef(&class)?;
    let restriction_is_generator = base.restrictions(&class)?[0].is_one();
    let divergence_value = base.divergence(&class)?;
    Ok(BmRecord {
        m,
        n,
        class: NSClass::Matrix(class),
        charpoly,
        charpoly_matches,
        beta_relation_checked,
        alpha_correspondence_checked,
        restriction_is_generator,
        nef,
        intersections,
        divergence_value,
    })
}

/// Result of refuting a candidate bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRefutation {
    pub c: BigInt,
    pub m: u64,
    pub record: BmRecord,
}

/// Upper limit on the family index searched by [`refute_bound`].
pub const MAX_FAMILY_INDEX: u64 = 1 << 20;

/// Given candidate generators of the effective semigroup of `X × X`,
/// computes `c = max |(ι₂*Nᵢ − ι₃*Nᵢ)^n|` and the least `m` with
/// `|(ι₂*B_m − ι₃*B_m)^n| > c`.
///
/// Candidates must be nef and restrict to `0` or `M` on the first factor;
/// those restricting to `0` must satisfy `ι₂*N = ι₃*N`.
pub fn refute_bound(
    x: &VarietyPresentation,
    candidates: &[NSClass],
) -> Result<BoundRefutation, WitnessError> {
    let base = FamilyBase::from_presentation(x)?;
    let mut c = BigInt::zero();
    for (i, cand) in candidates.iter().enumerate() {
        let h = cand.as_matrix().ok_or_else(|| WitnessError::Candidate {
            index: i,
            reason: "expected a matrix class on X × X".into(),
        })?;
        if !base.is_nef(h)? {
            return Err(WitnessError::Candidate {
                index: i,
                reason: "not nef".into(),
            });
        }
        let [one, two, three] = base.restrictions(h)?;
        if !(one.is_zero() || one.is_one()) {
            return Err(WitnessError::Candidate {
                index: i,
                reason: format!("ι₁ pullback is {one}·M, expected 0 or M"),
            });
        }
        if one.is_zero() && two != three {
            return Err(WitnessError::Inconsistent(format!(
                "nef candidate {i} restricts to 0 on the first factor but ι₂* = {two} ≠ ι₃* = {three}"
            )));
        }
        let d = base.divergence(h)?.abs();
        if d > c {
            c = d;
        }
    }
    for m in 1..=MAX_FAMILY_INDEX {
        let record = bm_record(&base, m)?;
        if record.divergence_value.abs() > c {
            return Ok(BoundRefutation { c, m, record });
        }
    }
    Err(WitnessError::BadParameter(format!(
        "bound {c} too large to refute"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::Factor;

    fn elliptic() -> VarietyPresentation {
        ProductVariety::elliptic("E", EndRing::Integers).into()
    }

    fn mat(rows: &[&[i64]]) -> HermitianClass {
        HermitianClass::from_ints(rows).unwrap()
    }

    #[test]
    fn small_members() {
        let x = elliptic();
        let r1 = bm_family(&x, 1).unwrap();
        assert_eq!(r1.matrix(), &mat(&[&[1, 1], &[1, 1]]));
        assert!(r1.verified());
        let r2 = bm_family(&x, 2).unwrap();
        assert_eq!(r2.matrix(), &mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(r2.charpoly, Poly::from_ints(&[0, -5, 1]));
        let r3 = bm_family(&x, 3).unwrap();
        assert_eq!(r3.divergence_value, BigInt::from(-7));
        assert!(r3.verified());
    }

    #[test]
    fn cm_base_and_higher_dimension() {
        let x: VarietyPresentation = ProductVariety::elliptic("E", EndRing::cm(-3).unwrap()).into();
        assert!(bm_family(&x, 4).unwrap().verified());
        let y: VarietyPresentation = AbstractVariety::rank_one(2, 2).unwrap().into();
        let r = bm_family(&y, 2).unwrap();
        assert!(r.verified());
        assert_eq!(r.charpoly, expected_charpoly(2, 2));
        assert_eq!(r.divergence_value, BigInt::from(50));
        // A = L₁ + L₂ gives A⁴ = C(4,2)·(M²)² = 24
        assert_eq!(r.intersections[0], Q::from_integer(24.into()));
    }

    #[test]
    fn refutations() {
        let x = elliptic();
        let b1 = bm_family(&x, 1).unwrap().class;
        let r = refute_bound(&x, &[b1]).unwrap();
        assert_eq!((r.c.clone(), r.m), (BigInt::from(3), 2));
        let r = refute_bound(&x, &[]).unwrap();
        assert_eq!((r.c.clone(), r.m), (BigInt::zero(), 1));
        let b4 = bm_family(&x, 4).unwrap().class;
        let r = refute_bound(&x, &[b4]).unwrap();
        assert_eq!((r.c, r.m), (BigInt::from(9), 5));
        let not_nef = NSClass::Matrix(mat(&[&[1, 2], &[2, 1]]));
        assert!(matches!(
            refute_bound(&x, &[not_nef]),
            Err(WitnessError::Candidate { index: 0, .. })
        ));
        let two_m = NSClass::Matrix(mat(&[&[2, 0], &[0, 1]]));
        assert!(matches!(
            refute_bound(&x, &[two_m]),
            Err(WitnessError::Candidate { .. })
        ));
        let second = NSClass::Matrix(mat(&[&[0, 0], &[0, 1]]));
        assert_eq!(refute_bound(&x, &[second]).unwrap().c, BigInt::zero());
    }

    #[test]
    fn needs_rank_one() {
        let x: VarietyPresentation =
            ProductVariety::new(vec![Factor::new("E", EndRing::Integers, 2)])
                .unwrap()
                .into();
        assert!(matches!(bm_family(&x, 1), Err(WitnessError::RankNotOne(3))));
    }
}
