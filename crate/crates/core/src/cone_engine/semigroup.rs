use std::collections::HashSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::cone::{dual_cone, Pairing, RationalCone};
use super::linalg::{self, IVec};
use super::{ConeError, MAX_CONE_RANK};

/// Generators of a sub-semigroup of `Z^ρ`, minimal and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemigroupBasis {
    rank: usize,
    elements: Vec<IVec>,
}

impl SemigroupBasis {
    /// Sorts, drops zeros and duplicates, and removes every element that is
    /// a non-negative integer combination of the others. The generated
    /// semigroup must be pointed.
    pub fn new(rank: usize, elements: Vec<IVec>) -> Result<Self, ConeError> {
        let mut els: Vec<IVec> = Vec::new();
        for e in elements {
            if e.len() != rank {
                return Err(ConeError::Shape(format!("element {e:?} has wrong length")));
            }
            if !linalg::is_zero_vec(&e) {
                els.push(e);
            }
        }
        els.sort();
        els.dedup();
        let mut kept: Vec<IVec> = Vec::new();
        if !els.is_empty() {
            // greedy by degree: an element is redundant exactly when the
            // elements of smaller degree generate it
            let cone = RationalCone::new(rank, els.clone())?;
            let (grading, ineq) = (cone.grading()?, cone.inequalities()?);
            els.sort_by_key(|e| (linalg::dot(&grading, e), e.clone()));
            for e in els {
                if !Generator::new(&kept, &grading, &ineq).generates(&e)? {
                    kept.push(e);
                }
            }
            kept.sort();
        }
        Ok(Self {
            rank,
            elements: kept,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[IVec] {
        &self.elements
    }

    pub fn cone(&self) -> Result<RationalCone, ConeError> {
        RationalCone::new(self.rank, self.elements.clone())
    }

    /// Membership in the generated semigroup.
    pub fn generates(&self, x: &[i64]) -> Result<bool, ConeError> {
        self.membership()?.test(x)
    }

    /// A reusable membership oracle, for testing many points.
    pub fn membership(&self) -> Result<Membership, ConeError> {
        let (grading, ineq) = if self.elements.is_empty() {
            (vec![0; self.rank], Vec::new())
        } else {
            let c = self.cone()?;
            (c.grading()?, c.inequalities()?)
        };
        Ok(Membership {
            gens: self.elements.clone(),
            grading,
            ineq,
        })
    }

    /// No element is a combination of the others.
    pub fn is_minimal(&self) -> Result<bool, ConeError> {
        let m = self.membership()?;
        for e in &self.elements {
            let others: Vec<IVec> = self.elements.iter().filter(|x| *x != e).cloned().collect();
            if Generator::new(&others, &m.grading, &m.ineq).generates(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Membership in a fixed semigroup; see [`SemigroupBasis::membership`].
#[derive(Debug, Clone)]
pub struct Membership {
    gens: Vec<IVec>,
    grading: IVec,
    ineq: Vec<IVec>,
}

impl Membership {
    pub fn test(&self, x: &[i64]) -> Result<bool, ConeError> {
        if self.gens.is_empty() {
            return Ok(linalg::is_zero_vec(x));
        }
        Generator::new(&self.gens, &self.grading, &self.ineq).generates(x)
    }
}

/// Nodes a single membership search may visit.
pub const SEARCH_BUDGET: usize = 2_000_000;

/// Membership in a semigroup with a positive grading, by depth-first search
/// over `x − g` with the grading as the termination measure. Branches that
/// leave the cone `ineq ≥ 0` are cut.
struct Generator<'a> {
    gens: &'a [IVec],
    grading: &'a [i64],
    ineq: &'a [IVec],
}

impl<'a> Generator<'a> {
    fn new(gens: &'a [IVec], grading: &'a [i64], ineq: &'a [IVec]) -> Self {
        Self {
            gens,
            grading,
            ineq,
        }
    }

    fn inside(&self, y: &[i64]) -> bool {
        self.ineq.iter().all(|u| linalg::dot(u, y) >= 0)
    }

    fn generates(&self, x: &[i64]) -> Result<bool, ConeError> {
        let mut seen: HashSet<IVec> = HashSet::new();
        let mut stack = vec![x.to_vec()];
        while let Some(y) = stack.pop() {
            if linalg::is_zero_vec(&y) {
                return Ok(true);
            }
            if linalg::dot(self.grading, &y) <= 0 || !self.inside(&y) || !seen.insert(y.clone()) {
                continue;
            }
            if seen.len() > SEARCH_BUDGET {
                return Err(ConeError::SearchTooLarge("semigroup membership".into()));
            }
            for g in self.gens {
                stack.push(linalg::sub(&y, g));
            }
        }
        Ok(false)
    }
}

/// Integer points of `[−b, b]^ρ`. Callers bound the size with [`check_box`].
pub fn box_points(rank: usize, b: i64) -> impl Iterator<Item = IVec> {
    let side = (2 * b + 1) as usize;
    let total = side.pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0; rank];
        for x in v.iter_mut() {
            *x = (idx % side) as i64 - b;
            idx /= side;
        }
        v
    })
}

/// Enumeration box for a Hilbert basis: every basis element lies in the
/// closed zonotope spanned by the extremal rays, so its coordinates are
/// bounded by the sum over rays of their largest coordinate.
pub fn hilbert_box(c: &RationalCone) -> i64 {
    c.rays().iter().map(|r| linalg::abs_max(r)).sum()
}

/// The minimal generating set of `C ∩ Z^ρ` for a pointed cone.
///
/// Lattice points of the enumeration box are visited by increasing degree
/// under a positive grading; a point is kept when no earlier basis element
/// can be subtracted from it while staying inside `C`.
pub fn hilbert_basis(c: &RationalCone) -> Result<SemigroupBasis, ConeError> {
    if c.rank() > MAX_CONE_RANK {
        return Err(ConeError::RankTooLarge(c.rank()));
    }
    if c.rays().is_empty() {
        return Ok(SemigroupBasis {
            rank: c.rank(),
            elements: Vec::new(),
        });
    }
    let c = c.canonical()?;
    let w = c.grading()?;
    let ineq = c.inequalities()?;
    let inside = |x: &[i64]| ineq.iter().all(|u| linalg::dot(u, x) >= 0);
    let b = hilbert_box(&c);
    check_box(c.rank(), b)?;
    let mut pts: Vec<(i128, IVec)> = box_points(c.rank(), b)
        .filter(|x| !linalg::is_zero_vec(x) && inside(x))
        .map(|x| (linalg::dot(&w, &x), x))
        .collect();
    pts.sort();
    let mut basis: Vec<IVec> = Vec::new();
    for (_, x) in pts {
        let reducible = basis.iter().any(|h| inside(&linalg::sub(&x, h)));
        if !reducible {
            basis.push(x);
        }
    }
    basis.sort();
    Ok(SemigroupBasis {
        rank: c.rank(),
        elements: basis,
    })
}

/// Most odometer steps [`transfer_generators`] may take.
pub const MAX_TRANSFER_COSETS: u128 = 1_000_000;

/// Most lattice points any box enumeration may visit.
pub const MAX_BOX_POINTS: u128 = 20_000_000;

pub fn check_box(rank: usize, b: i64) -> Result<(), ConeError> {
    let side = 2 * u128::try_from(b).map_err(|_| ConeError::Overflow)? + 1;
    let total = u32::try_from(rank)
        .ok()
        .and_then(|r| side.checked_pow(r))
        .unwrap_or(u128::MAX);
    if total > MAX_BOX_POINTS {
        return Err(ConeError::SearchTooLarge(format!(
            "box [-{b}, {b}]^{rank} has {total} points"
        )));
    }
    Ok(())
}

/// Checks that `basis` generates every lattice point of `C` in `[−b, b]^ρ`
/// and that it is minimal.
pub fn verify_hilbert_basis(
    c: &RationalCone,
    basis: &SemigroupBasis,
    b: i64,
) -> Result<bool, ConeError> {
    check_box(c.rank(), b)?;
    if !basis.is_minimal()? {
        return Ok(false);
    }
    for e in basis.elements() {
        if !c.contains(e)? {
            return Ok(false);
        }
    }
    let ineq = c.inequalities()?;
    let member = basis.membership()?;
    for x in box_points(c.rank(), b) {
        if ineq.iter().all(|u| linalg::dot(u, &x) >= 0) && !member.test(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A sublattice of `Z^ρ` given by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    rank: usize,
    basis: Vec<IVec>,
}

impl Sublattice {
    pub fn new(rank: usize, basis: Vec<IVec>) -> Result<Self, ConeError> {
        if basis.iter().any(|b| b.len() != rank) {
            return Err(ConeError::Shape(
                "sublattice basis vector of wrong length".into(),
            ));
        }
        if linalg::rank(&basis, rank) != basis.len() {
            return Err(ConeError::Shape(
                "sublattice basis is linearly dependent".into(),
            ));
        }
        Ok(Self { rank, basis })
    }

    pub fn full(rank: usize) -> Self {
        Self {
            rank,
            basis: Pairing::standard(rank).gram().to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    /// `[Z^ρ : Λ]`, or `None` when `Λ` has smaller rank.
    pub fn index(&self) -> Option<u64> {
        if self.basis.len() != self.rank {
            return None;
        }
        linalg::det(&self.basis).abs().to_u64()
    }

    /// Integer coordinates of `x` in the basis, if `x ∈ Λ`.
    pub fn coordinates(&self, x: &[i64]) -> Option<IVec> {
        let c = linalg::solve_in_span(&self.basis, x)?;
        c.iter()
            .map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten())
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coordinates(x).is_some()
    }

    /// `Λ ⊗ Q ∩ Z^ρ = Λ`.
    pub fn is_primitive(&self) -> bool {
        // the gcd of maximal minors is 1 exactly when the lattice is saturated
        let k = self.basis.len();
        let mut g = num_bigint::BigInt::zero();
        for cols in column_subsets(self.rank, k) {
            let minor: Vec<IVec> = self
                .basis
                .iter()
                .map(|b| cols.iter().map(|&c| b[c]).collect())
                .collect();
            g = num_integer::Integer::gcd(&g, &linalg::det(&minor));
        }
        g == 1.into()
    }

    pub fn embed(&self, coords: &[i64]) -> IVec {
        let mut x = vec![0; self.rank];
        for (c, b) in coords.iter().zip(&self.basis) {
            x = linalg::add(&x, &linalg::scale(b, *c));
        }
        x
    }
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in column_subsets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

/// Generators of `⟨S⟩ ∩ Λ` for a saturated semigroup `⟨S⟩ = cone(S) ∩ Z^ρ`.
///
/// In `Λ`-coordinates the intersection is the lattice-point semigroup of the
/// cone cut out by the pulled-back facet inequalities, so it is the Hilbert
/// basis of that cone mapped back into `Z^ρ`.
pub fn semigroup_restrict(
    s: &SemigroupBasis,
    lattice: &Sublattice,
) -> Result<SemigroupBasis, ConeError> {
    if s.rank() != lattice.rank() {
        return Err(ConeError::Shape(
            "semigroup and sublattice ranks differ".into(),
        ));
    }
    let c = s.cone()?;
    let saturation = hilbert_basis(&c)?;
    if &saturation != s {
        return Err(ConeError::NotSaturated);
    }
    let k = lattice.basis().len();
    let pulled: Vec<IVec> = c
        .inequalities()?
        .iter()
        .map(|u| {
            lattice
                .basis()
                .iter()
                .map(|b| linalg::narrow(linalg::dot(u, b)))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let pulled = RationalCone::new(
        k,
        pulled
            .into_iter()
            .filter(|v| !linalg::is_zero_vec(v))
            .collect(),
    )?;
    let section = dual_cone(&pulled, &Pairing::standard(k))?;
    let hb = hilbert_basis(&section)?;
    SemigroupBasis::new(
        s.rank(),
        hb.elements().iter().map(|c| lattice.embed(c)).collect(),
    )
}

/// Generators of `⟨S⟩ ∩ Λ` for a finite-index `Λ`: for each generator `Nᵢ`
/// the least multiple `nᵢ·Nᵢ ∈ Λ`, together with every `Σ mᵢ·Nᵢ ∈ Λ` with
/// `0 ≤ mᵢ < nᵢ`, minimalized.
pub fn transfer_generators(
    s: &SemigroupBasis,
    lattice: &Sublattice,
) -> Result<Transfer, ConeError> {
    if s.rank() != lattice.rank() {
        return Err(ConeError::Shape(
            "semigroup and sublattice ranks differ".into(),
        ));
    }
    let index = lattice.index().ok_or(ConeError::InfiniteIndex)?;
    let modulus = i64::try_from(index).map_err(|_| ConeError::Overflow)?;
    let mut multiples = Vec::with_capacity(s.elements().len());
    // x ∈ Λ iff the coordinates of x in the basis of Λ, scaled by the
    // index, are all divisible by the index
    let mut residues: Vec<IVec> = Vec::with_capacity(s.elements().len());
    let mut cosets: u128 = 1;
    for e in s.elements() {
        let c = linalg::solve_in_span(lattice.basis(), e).expect("full-rank lattice spans");
        let n = c.iter().fold(num_bigint::BigInt::from(1), |acc, q| {
            num_integer::Integer::lcm(&acc, q.denom())
        });
        let n = n.to_i64().ok_or(ConeError::Overflow)?;
        cosets = cosets.saturating_mul(n as u128);
        multiples.push(n);
        let r = c
            .iter()
            .map(|q| {
                let scaled = q * num_bigint::BigInt::from(modulus);
                let v = scaled.to_integer() % num_bigint::BigInt::from(modulus);
                v.to_i64()
                    .map(|v| v.rem_euclid(modulus))
                    .ok_or(ConeError::Overflow)
            })
            .collect::<Result<IVec, _>>()?;
        residues.push(r);
    }
    if cosets > MAX_TRANSFER_COSETS {
        return Err(ConeError::SearchTooLarge(format!(
            "{cosets} coset representatives"
        )));
    }
    let mut gens: HashSet<IVec> = s
        .elements()
        .iter()
        .zip(&multiples)
        .map(|(e, &n)| linalg::scale(e, n))
        .collect();
    let mut m = vec![0i64; multiples.len()];
    let mut x = vec![0i64; s.rank()];
    let mut res = vec![0i64; s.rank()];
    loop {
        if res.iter().all(|r| *r == 0) && !linalg::is_zero_vec(&x) {
            gens.insert(x.clone());
        }
        // odometer over 0 ≤ mᵢ < nᵢ, keeping x = Σ mᵢ·Nᵢ and its residue
        let mut i = 0;
        while i < m.len() {
            let e = &s.elements()[i];
            m[i] += 1;
            let step = if m[i] < multiples[i] {
                1
            } else {
                1 - multiples[i]
            };
            for (xj, ej) in x.iter_mut().zip(e) {
                *xj = ej
                    .checked_mul(step)
                    .and_then(|d| xj.checked_add(d))
                    .ok_or(ConeError::Overflow)?;
            }
            for (rj, ej) in res.iter_mut().zip(&residues[i]) {
                let d = (*ej as i128 * step as i128).rem_euclid(modulus as i128);
                *rj = ((*rj as i128 + d) % modulus as i128) as i64;
            }
            if m[i] < multiples[i] {
                break;
            }
            m[i] = 0;
            i += 1;
        }
        if i == m.len() {
            break;
        }
    }
    Ok(Transfer {
        index,
        multiples,
        basis: SemigroupBasis::new(s.rank(), gens.into_iter().collect())?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub index: u64,
    pub multiples: Vec<i64>,
    pub basis: SemigroupBasis,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(rays: &[&[i64]]) -> RationalCone {
        RationalCone::new(rays[0].len(), rays.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn sg(els: &[&[i64]]) -> SemigroupBasis {
        SemigroupBasis::new(els[0].len(), els.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn hilbert_bases_in_rank_two() {
        assert_eq!(
            hilbert_basis(&cone(&[&[1, 0], &[0, 1]])).unwrap(),
            sg(&[&[1, 0], &[0, 1]])
        );
        assert_eq!(
            hilbert_basis(&cone(&[&[1, 0], &[1, 2]])).unwrap(),
            sg(&[&[1, 0], &[1, 1], &[1, 2]])
        );
        let c = cone(&[&[1, 0], &[1, 3]]);
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb, sg(&[&[1, 0], &[1, 1], &[1, 2], &[1, 3]]));
        assert!(verify_hilbert_basis(&c, &hb, 10).unwrap());
        // a cone whose basis has an interior element of larger degree
        let c = cone(&[&[1, 0], &[2, 5]]);
        let hb = hilbert_basis(&c).unwrap();
        assert!(hb.elements().contains(&vec![1, 2]));
        assert!(verify_hilbert_basis(&c, &hb, 10).unwrap());
    }

    #[test]
    fn hilbert_basis_rank_three_and_errors() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb, sg(&[&[0, 1, 0], &[1, 0, 0], &[1, 1, 1], &[1, 1, 2]]));
        assert!(verify_hilbert_basis(&c, &hb, 4).unwrap());
        let line = cone(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert!(matches!(hilbert_basis(&line), Err(ConeError::NotPointed)));
    }

    #[test]
    fn minimalization() {
        let s = sg(&[&[1, 0], &[0, 1], &[1, 1], &[2, 3]]);
        assert_eq!(s.elements(), &[vec![0, 1], vec![1, 0]]);
        assert!(s.generates(&[4, 7]).unwrap());
        assert!(!s.generates(&[-1, 2]).unwrap());
    }

    #[test]
    fn restriction_examples() {
        let orthant = sg(&[&[1, 0], &[0, 1]]);
        let even_b = Sublattice::new(2, vec![vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(
            semigroup_restrict(&orthant, &even_b).unwrap(),
            sg(&[&[1, 0], &[0, 2]])
        );
        assert_eq!(
            semigroup_restrict(&orthant, &Sublattice::full(2)).unwrap(),
            orthant
        );
        let s = sg(&[&[1, 0], &[1, 1], &[1, 2]]);
        assert_eq!(
            semigroup_restrict(&s, &even_b).unwrap(),
            sg(&[&[1, 0], &[1, 2]])
        );
        let thin = sg(&[&[1, 0], &[1, 2]]);
        assert!(matches!(
            semigroup_restrict(&thin, &even_b),
            Err(ConeError::NotSaturated)
        ));
        // a rank-one section of a rank-three cone
        let o3 = sg(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let diag = Sublattice::new(3, vec![vec![1, 1, 0]]).unwrap();
        assert!(diag.is_primitive());
        assert_eq!(semigroup_restrict(&o3, &diag).unwrap(), sg(&[&[1, 1, 0]]));
    }

    #[test]
    fn transfer_examples() {
        let orthant = sg(&[&[1, 0], &[0, 1]]);
        let even = Sublattice::new(2, vec![vec![1, 1], vec![0, 2]]).unwrap();
        let t = transfer_generators(&orthant, &even).unwrap();
        assert_eq!(t.index, 2);
        assert_eq!(t.multiples, vec![2, 2]);
        assert_eq!(t.basis, sg(&[&[2, 0], &[0, 2], &[1, 1]]));
        let t = transfer_generators(&orthant, &Sublattice::full(2)).unwrap();
        assert_eq!(t.basis, orthant);
        let thirds = Sublattice::new(2, vec![vec![1, 0], vec![0, 3]]).unwrap();
        let t = transfer_generators(&orthant, &thirds).unwrap();
        assert_eq!(t.basis, sg(&[&[1, 0], &[0, 3]]));
        let line = Sublattice::new(2, vec![vec![1, 0]]).unwrap();
        assert!(matches!(
            transfer_generators(&orthant, &line),
            Err(ConeError::InfiniteIndex)
        ));
    }

    #[test]
    fn sublattice_queries() {
        let l = Sublattice::new(2, vec![vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(l.index(), Some(2));
        assert!(l.contains(&[3, 5]));
        assert!(!l.contains(&[1, 2]));
        assert!(!l.is_primitive());
        assert!(Sublattice::full(3).is_primitive());
    }

    #[test]
    fn box_enumeration() {
        let pts: Vec<_> = box_points(2, 1).collect();
        assert_eq!(pts.len(), 9);
        assert!(pts.contains(&vec![-1, 1]));
    }
}
