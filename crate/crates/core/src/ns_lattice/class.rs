use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{HomEntry, NsError, ProductVariety, VarietyPresentation};
use crate::exactnum::{format_rational, Q};

/// Square matrix with entries in the Hom-lattices of a product presentation.
///
/// As a numerical class it is the Rosati-symmetric endomorphism attached to
/// the line bundle with respect to the product polarization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermitianClass {
    n: usize,
    entries: Vec<HomEntry>,
}

impl HermitianClass {
    pub fn from_rows(rows: Vec<Vec<HomEntry>>) -> Result<Self, NsError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(NsError::ClassShape("matrix must be square".into()));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer symmetric matrix.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, NsError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| HomEntry::int(x)).collect())
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![HomEntry::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = HomEntry::int(1);
        }
        m
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = Self::zero(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = HomEntry::int(v);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &HomEntry {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HomEntry) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<HomEntry>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x.add(y))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| x.scale(k)).collect(),
        }
    }

    /// Checks the invariants of an NS class on `x`: matching size, entries
    /// in the right rings, zero across non-isogenous factors, Hermitian.
    pub fn validate(&self, x: &ProductVariety) -> Result<(), NsError> {
        if self.n != x.dim() {
            return Err(NsError::ClassShape(format!(
                "class is {0}×{0}, variety has dimension {1}",
                self.n,
                x.dim()
            )));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.get(i, j);
                let (fi, fj) = (x.factor_of(i), x.factor_of(j));
                if fi != fj {
                    if !e.is_zero() {
                        return Err(NsError::CrossFactorEntry(i, j));
                    }
                    continue;
                }
                let ring = &x.factors()[fi].end;
                if !ring.contains(e) {
                    return Err(NsError::EntryNotInRing(i, j));
                }
                if *self.get(j, i) != ring.conj(e) {
                    return Err(NsError::NotHermitian(i, j));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HermitianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// A numerical line-bundle class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NSClass {
    Matrix(HermitianClass),
    Coords(Vec<Q>),
}

impl NSClass {
    pub fn coords_from_ints(v: &[i64]) -> Self {
        Self::Coords(v.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn as_matrix(&self) -> Option<&HermitianClass> {
        match self {
            Self::Matrix(m) => Some(m),
            Self::Coords(_) => None,
        }
    }

    pub fn as_coords(&self) -> Option<&[Q]> {
        match self {
            Self::Coords(c) => Some(c),
            Self::Matrix(_) => None,
        }
    }

    pub fn validate(&self, x: &VarietyPresentation) -> Result<(), NsError> {
        match (self, x) {
            (Self::Matrix(m), VarietyPresentation::Product(p)) => m.validate(p),
            (Self::Coords(c), VarietyPresentation::Abstract(a)) => {
                if c.len() != a.rank() {
                    return Err(NsError::ClassShape(format!(
                        "class has {} coordinates, rank is {}",
                        c.len(),
                        a.rank()
                    )));
                }
                Ok(())
            }
            _ => Err(NsError::ClassKindMismatch),
        }
    }

    /// `Σ kᵢ·Cᵢ` with integer coefficients. Classes must share their kind.
    pub fn combine(terms: &[(BigInt, &NSClass)]) -> Result<Self, NsError> {
        let (_, first) = terms.first().ok_or(NsError::ClassKindMismatch)?;
        match first {
            Self::Matrix(m0) => {
                let mut acc = HermitianClass::zero(m0.size());
                for (k, c) in terms {
                    let m = c.as_matrix().ok_or(NsError::ClassKindMismatch)?;
                    if m.size() != m0.size() {
                        return Err(NsError::ClassShape("mismatched class sizes".into()));
                    }
                    acc = acc.add(&m.scale(k));
                }
                Ok(Self::Matrix(acc))
            }
            Self::Coords(c0) => {
                let mut acc = vec![Q::zero(); c0.len()];
                for (k, c) in terms {
                    let v = c.as_coords().ok_or(NsError::ClassKindMismatch)?;
                    if v.len() != c0.len() {
                        return Err(NsError::ClassShape("mismatched class ranks".into()));
                    }
                    let kq = Q::from_integer(k.clone());
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a += &kq * b;
                    }
                }
                Ok(Self::Coords(acc))
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        match self {
            Self::Matrix(m) => Self::Matrix(m.scale(k)),
            Self::Coords(c) => {
                let kq = Q::from_integer(k.clone());
                Self::Coords(c.iter().map(|x| x * &kq).collect())
            }
        }
    }

    /// Coordinates in the canonical Z-basis of NS: per factor block the
    /// diagonal entries, then for each pair `k < l` the `a` (and for CM the
    /// `b`) part of entry `(k, l)`. Abstract classes return their coordinates
    /// when they are integral.
    pub fn lattice_coordinates(&self, x: &VarietyPresentation) -> Result<Vec<BigInt>, NsError> {
        self.validate(x)?;
        match (self, x) {
            (Self::Matrix(m), VarietyPresentation::Product(p)) => {
                let mut out = Vec::with_capacity(p.ns_rank());
                for block in p.blocks() {
                    let cm = p.factors()[block.factor].end.rank() == 2;
                    for i in block.range() {
                        out.push(m.get(i, i).a.clone());
                    }
                    for k in block.range() {
                        for l in (k + 1)..block.start + block.len {
                            let e = m.get(k, l);
                            out.push(e.a.clone());
                            if cm {
                                out.push(e.b.clone());
                            }
                        }
                    }
                }
                Ok(out)
            }
            (Self::Coords(c), _) => c
                .iter()
                .map(|q| {
                    q.is_integer()
                        .then(|| q.to_integer())
                        .ok_or_else(|| NsError::NonIntegral(format_rational(q)))
                })
                .collect(),
            _ => Err(NsError::ClassKindMismatch),
        }
    }
}

/// Z-basis of NS matching [`NSClass::lattice_coordinates`].
pub fn ns_basis(x: &VarietyPresentation) -> Vec<NSClass> {
    match x {
        VarietyPresentation::Abstract(a) => (0..a.rank())
            .map(|i| {
                NSClass::Coords(
                    (0..a.rank())
                        .map(|j| if i == j { Q::one() } else { Q::zero() })
                        .collect(),
                )
            })
            .collect(),
        VarietyPresentation::Product(p) => {
            let g = p.dim();
            let mut out = Vec::new();
            for block in p.blocks() {
                let ring = p.factors()[block.factor].end;
                for i in block.range() {
                    let mut m = HermitianClass::zero(g);
                    m.set(i, i, HomEntry::int(1));
                    out.push(NSClass::Matrix(m));
                }
                for k in block.range() {
                    for l in (k + 1)..block.start + block.len {
                        let mut gens = vec![HomEntry::int(1)];
                        if ring.rank() == 2 {
                            gens.push(HomEntry::new(0, 1));
                        }
                        for e in gens {
                            let mut m = HermitianClass::zero(g);
                            m.set(l, k, ring.conj(&e));
                            m.set(k, l, e);
                            out.push(NSClass::Matrix(m));
                        }
                    }
                }
            }
            out
        }
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Matrix(m) => write!(f, "{m}"),
            Self::Coords(c) => {
                let parts: Vec<String> = c.iter().map(format_rational).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::{EndRing, Factor};

    fn exe(end: EndRing) -> ProductVariety {
        ProductVariety::new(vec![Factor::new("E", end, 2)]).unwrap()
    }

    #[test]
    fn hermitian_validation() {
        let x = exe(EndRing::Integers);
        assert!(HermitianClass::from_ints(&[&[1, 2], &[2, 4]])
            .unwrap()
            .validate(&x)
            .is_ok());
        assert_eq!(
            HermitianClass::from_ints(&[&[1, 2], &[3, 4]])
                .unwrap()
                .validate(&x),
            Err(NsError::NotHermitian(0, 1))
        );
        let cm = HermitianClass::from_rows(vec![
            vec![HomEntry::int(1), HomEntry::new(0, 1)],
            vec![HomEntry::new(0, 1), HomEntry::int(1)],
        ])
        .unwrap();
        assert_eq!(cm.validate(&x), Err(NsError::EntryNotInRing(0, 1)));
        let y = exe(EndRing::cm(-4).unwrap());
        // ω̄ = −4 − ω
        let good = HermitianClass::from_rows(vec![
            vec![HomEntry::int(1), HomEntry::new(0, 1)],
            vec![HomEntry::new(-4, -1), HomEntry::int(1)],
        ])
        .unwrap();
        assert!(good.validate(&y).is_ok());
        assert_eq!(cm.validate(&y), Err(NsError::NotHermitian(0, 1)));
    }

    #[test]
    fn cross_blocks_forced_zero() {
        let x = ProductVariety::new(vec![
            Factor::new("E1", EndRing::Integers, 1),
            Factor::new("E2", EndRing::Integers, 1),
        ])
        .unwrap();
        assert_eq!(
            HermitianClass::from_ints(&[&[1, 1], &[1, 1]])
                .unwrap()
                .validate(&x),
            Err(NsError::CrossFactorEntry(0, 1))
        );
    }

    #[test]
    fn basis_matches_rank_and_coordinates() {
        for end in [EndRing::Integers, EndRing::cm(-3).unwrap()] {
            let x = VarietyPresentation::Product(exe(end));
            let basis = ns_basis(&x);
            assert_eq!(basis.len(), x.ns_rank());
            for (i, b) in basis.iter().enumerate() {
                let c = b.lattice_coordinates(&x).unwrap();
                for (j, v) in c.iter().enumerate() {
                    assert_eq!(*v, BigInt::from((i == j) as i64));
                }
            }
        }
    }
}
