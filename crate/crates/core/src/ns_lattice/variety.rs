use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{EndRing, NsError};
use crate::exactnum::Q;

/// Largest total dimension accepted for product presentations. Intersection
/// numbers expand over all `2^g` argument subsets.
pub const MAX_DIMENSION: usize = 12;

/// One elliptic factor `E^mult`. Distinct ids are pairwise non-isogenous.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub id: String,
    pub end: EndRing,
    pub mult: usize,
}

impl Factor {
    pub fn new(id: impl Into<String>, end: EndRing, mult: usize) -> Self {
        Self {
            id: id.into(),
            end,
            mult,
        }
    }
}

/// Contiguous coordinate range of one factor inside `Cᵍ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub factor: usize,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// `E₁^{n₁} × … × E_r^{n_r}` with the product polarization as reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductVariety {
    factors: Vec<Factor>,
}

impl ProductVariety {
    pub fn new(factors: Vec<Factor>) -> Result<Self, NsError> {
        if factors.is_empty() {
            return Err(NsError::EmptyProduct);
        }
        let mut ids = HashSet::new();
        for f in &factors {
            if f.mult == 0 {
                return Err(NsError::ZeroMultiplicity(f.id.clone()));
            }
            if let Some(d) = f.end.discriminant() {
                EndRing::cm(d)?;
            }
            if !ids.insert(f.id.as_str()) {
                return Err(NsError::DuplicateFactor(f.id.clone()));
            }
        }
        let dim = factors
            .iter()
            .try_fold(0usize, |acc, f| acc.checked_add(f.mult))
            .unwrap_or(usize::MAX);
        if dim > MAX_DIMENSION {
            return Err(NsError::DimensionTooLarge(dim));
        }
        Ok(Self { factors })
    }

    /// A single elliptic curve.
    pub fn elliptic(id: impl Into<String>, end: EndRing) -> Self {
        Self::new(vec![Factor::new(id, end, 1)]).expect("valid single factor")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.mult).sum()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut start = 0;
        self.factors
            .iter()
            .enumerate()
            .map(|(factor, f)| {
                let b = Block {
                    factor,
                    start,
                    len: f.mult,
                };
                start += f.mult;
                b
            })
            .collect()
    }

    /// Index of the factor owning coordinate `i`.
    pub fn factor_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (k, f) in self.factors.iter().enumerate() {
            acc += f.mult;
            if i < acc {
                return k;
            }
        }
        panic!("coordinate {i} out of range")
    }

    pub fn ring_of(&self, i: usize) -> &EndRing {
        &self.factors[self.factor_of(i)].end
    }

    /// `X × X`, laid out factor by factor: each block holds the first copy's
    /// coordinates followed by the second copy's.
    pub fn doubled(&self) -> Result<Self, NsError> {
        Self::new(
            self.factors
                .iter()
                .map(|f| Factor::new(f.id.clone(), f.end, 2 * f.mult))
                .collect(),
        )
    }

    /// Inverse of [`doubled`](Self::doubled), when every multiplicity is even.
    pub fn halved(&self) -> Option<Self> {
        self.factors
            .iter()
            .all(|f| f.mult % 2 == 0)
            .then(|| {
                Self::new(
                    self.factors
                        .iter()
                        .map(|f| Factor::new(f.id.clone(), f.end, f.mult / 2))
                        .collect(),
                )
                .ok()
            })
            .flatten()
    }

    /// Rank of the lattice of Hermitian matrices: `n(n+1)/2` per `Z` block,
    /// `n²` per CM block.
    pub fn ns_rank(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f.end {
                EndRing::Integers => f.mult * (f.mult + 1) / 2,
                EndRing::Cm { .. } => f.mult * f.mult,
            })
            .sum()
    }
}

/// NS-level data of a variety without a product model: a rank-ρ lattice
/// with a symmetric `g`-linear intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractVariety {
    rank: usize,
    dim: usize,
    /// Row-major values on basis tuples, `rank^dim` entries.
    tensor: Vec<BigInt>,
    ample: Vec<Q>,
    simple: bool,
}

impl AbstractVariety {
    pub fn new(
        rank: usize,
        dim: usize,
        tensor: Vec<BigInt>,
        ample: Vec<Q>,
        simple: bool,
    ) -> Result<Self, NsError> {
        if rank == 0 || dim == 0 {
            return Err(NsError::TensorShape(format!(
                "rank and dimension must be positive (rank {rank}, dim {dim})"
            )));
        }
        if dim > MAX_DIMENSION {
            return Err(NsError::DimensionTooLarge(dim));
        }
        let expected = u32::try_from(dim)
            .ok()
            .and_then(|d| rank.checked_pow(d))
            .ok_or_else(|| NsError::TensorShape("tensor too large".into()))?;
        if tensor.len() != expected {
            return Err(NsError::TensorShape(format!(
                "expected {expected} entries, got {}",
                tensor.len()
            )));
        }
        if ample.len() != rank {
            return Err(NsError::ClassShape(format!(
                "ample reference has {} coordinates, rank is {rank}",
                ample.len()
            )));
        }
        let v = Self {
            rank,
            dim,
            tensor,
            ample,
            simple,
        };
        for flat in 0..v.tensor.len() {
            let mut idx = v.unflatten(flat);
            idx.sort_unstable();
            if v.tensor[flat] != v.tensor[v.flatten(&idx)] {
                return Err(NsError::NonSymmetricTensor(v.unflatten(flat)));
            }
        }
        let top = v.evaluate(&vec![&v.ample[..]; dim]);
        if !top.is_positive() {
            return Err(NsError::AmpleNotPositive);
        }
        Ok(v)
    }

    /// Abelian surface with the given Gram matrix.
    pub fn surface(gram: [[i64; 2]; 2], ample: [i64; 2], simple: bool) -> Result<Self, NsError> {
        let tensor = gram.iter().flatten().map(|&x| BigInt::from(x)).collect();
        let ample = ample.iter().map(|&x| Q::from_integer(x.into())).collect();
        Self::new(2, 2, tensor, ample, simple)
    }

    /// Picard number one: `NS = Z·M` with `M^dim = degree`.
    pub fn rank_one(dim: usize, degree: i64) -> Result<Self, NsError> {
        Self::new(
            1,
            dim,
            vec![BigInt::from(degree)],
            vec![Q::from_integer(1.into())],
            true,
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self) -> &[BigInt] {
        &self.tensor
    }

    pub fn ample(&self) -> &[Q] {
        &self.ample
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn tensor_at(&self, idx: &[usize]) -> &BigInt {
        &self.tensor[self.flatten(idx)]
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.rank + i)
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.rank;
            flat /= self.rank;
        }
        idx
    }

    /// Multilinear evaluation on `dim` coordinate vectors.
    pub fn evaluate(&self, args: &[&[Q]]) -> Q {
        let mut total = Q::zero();
        for (flat, t) in self.tensor.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let idx = self.unflatten(flat);
            let mut term = Q::from_integer(t.clone());
            for (arg, &i) in args.iter().zip(&idx) {
                term *= &arg[i];
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarietyPresentation {
    Product(ProductVariety),
    Abstract(AbstractVariety),
}

impl VarietyPresentation {
    pub fn dim(&self) -> usize {
        match self {
            Self::Product(p) => p.dim(),
            Self::Abstract(a) => a.dim(),
        }
    }

    pub fn ns_rank(&self) -> usize {
        match self {
            Self::Product(p) => p.ns_rank(),
            Self::Abstract(a) => a.rank(),
        }
    }

    pub fn as_product(&self) -> Option<&ProductVariety> {
        match self {
            Self::Product(p) => Some(p),
            Self::Abstract(_) => None,
        }
    }

    pub fn as_abstract(&self) -> Option<&AbstractVariety> {
        match self {
            Self::Abstract(a) => Some(a),
            Self::Product(_) => None,
        }
    }
}

impl From<ProductVariety> for VarietyPresentation {
    fn from(p: ProductVariety) -> Self {
        Self::Product(p)
    }
}

impl From<AbstractVariety> for VarietyPresentation {
    fn from(a: AbstractVariety) -> Self {
        Self::Abstract(a)
    }
}
