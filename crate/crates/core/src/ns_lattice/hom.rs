use std::fmt;
use std::str::FromStr;

use super::{HermitianClass, HomEntry, NsError, ProductVariety};

/// Homomorphism between product presentations as a block matrix: entry
/// `(i, j)` maps source coordinate `j` to target coordinate `i`. Entries
/// between coordinates of different factors are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeHom {
    source: ProductVariety,
    target: ProductVariety,
    entries: Vec<HomEntry>,
}

impl LatticeHom {
    pub fn new(
        source: ProductVariety,
        target: ProductVariety,
        rows: Vec<Vec<HomEntry>>,
    ) -> Result<Self, NsError> {
        let (m, n) = (target.dim(), source.dim());
        if rows.len() != m || rows.iter().any(|r| r.len() != n) {
            return Err(NsError::ArityMismatch(format!(
                "expected a {m}×{n} block matrix"
            )));
        }
        let entries: Vec<HomEntry> = rows.into_iter().flatten().collect();
        for i in 0..m {
            for j in 0..n {
                let e = &entries[i * n + j];
                let (ft, fs) = (target.factor_of(i), source.factor_of(j));
                let (a, b) = (&target.factors()[ft], &source.factors()[fs]);
                if a.id != b.id {
                    if !e.is_zero() {
                        return Err(NsError::CrossFactorEntry(i, j));
                    }
                } else if !a.end.contains(e) {
                    return Err(NsError::EntryNotInRing(i, j));
                }
            }
        }
        Ok(Self {
            source,
            target,
            entries,
        })
    }

    pub fn identity(x: &ProductVariety) -> Self {
        let g = x.dim();
        let rows = (0..g)
            .map(|i| (0..g).map(|j| HomEntry::int((i == j) as i64)).collect())
            .collect();
        Self::new(x.clone(), x.clone(), rows).expect("identity is well formed")
    }

    pub fn source(&self) -> &ProductVariety {
        &self.source
    }

    pub fn target(&self) -> &ProductVariety {
        &self.target
    }

    pub fn get(&self, i: usize, j: usize) -> &HomEntry {
        &self.entries[i * self.source.dim() + j]
    }

    pub fn rows(&self) -> Vec<Vec<HomEntry>> {
        self.entries
            .chunks(self.source.dim())
            .map(|r| r.to_vec())
            .collect()
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &LatticeHom) -> Result<LatticeHom, NsError> {
        if inner.target != self.source {
            return Err(NsError::ArityMismatch(
                "inner target differs from outer source".into(),
            ));
        }
        let (m, k, n) = (self.target.dim(), self.source.dim(), inner.source.dim());
        let mut rows = vec![vec![HomEntry::zero(); n]; m];
        for (i, row) in rows.iter_mut().enumerate() {
            let ring = self.target.ring_of(i);
            for (j, out) in row.iter_mut().enumerate() {
                for l in 0..k {
                    let (x, y) = (self.get(i, l), inner.get(l, j));
                    if !x.is_zero() && !y.is_zero() {
                        *out = out.add(&ring.mul(x, y));
                    }
                }
            }
        }
        LatticeHom::new(inner.source.clone(), self.target.clone(), rows)
    }

    /// Conjugate transpose `f′`, the Rosati dual for product polarizations.
    pub fn dual(&self) -> LatticeHom {
        let (m, n) = (self.target.dim(), self.source.dim());
        let rows = (0..n)
            .map(|j| {
                let ring = self.source.ring_of(j);
                (0..m).map(|i| ring.conj(self.get(i, j))).collect()
            })
            .collect();
        LatticeHom::new(self.target.clone(), self.source.clone(), rows)
            .expect("dual of a valid map is valid")
    }

    /// Rosati-symmetric endomorphism (`f′ = f`).
    pub fn is_symmetric(&self) -> bool {
        self.source == self.target && self.dual() == *self
    }

    pub fn add(&self, other: &LatticeHom) -> Result<LatticeHom, NsError> {
        if self.source != other.source || self.target != other.target {
            return Err(NsError::ArityMismatch(
                "cannot add maps of different shape".into(),
            ));
        }
        let rows = self
            .rows()
            .into_iter()
            .zip(other.rows())
            .map(|(a, b)| a.iter().zip(&b).map(|(x, y)| x.add(y)).collect())
            .collect();
        LatticeHom::new(self.source.clone(), self.target.clone(), rows)
    }

    pub fn scale(&self, k: i64) -> LatticeHom {
        let k = k.into();
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x.scale(&k)).collect())
            .collect();
        LatticeHom::new(self.source.clone(), self.target.clone(), rows)
            .expect("scaling preserves shape")
    }

    /// The endomorphism read as a Hermitian class (valid when symmetric).
    pub fn as_class(&self) -> Result<HermitianClass, NsError> {
        if !self.is_symmetric() {
            return Err(NsError::NotHermitian(0, 0));
        }
        HermitianClass::from_rows(self.rows())
    }

    /// The Hermitian class read as an endomorphism of `x`.
    pub fn from_class(x: &ProductVariety, h: &HermitianClass) -> Result<LatticeHom, NsError> {
        h.validate(x)?;
        LatticeHom::new(x.clone(), x.clone(), h.rows())
    }
}

/// `f*H = f′·H·f`, a Hermitian class on the source of `f`.
pub fn pullback(f: &LatticeHom, h: &HermitianClass) -> Result<HermitianClass, NsError> {
    h.validate(f.target())?;
    let hf = LatticeHom::from_class(f.target(), h)?.compose(f)?;
    f.dual().compose(&hf)?.as_class()
}

/// The maps relating `X` and `X × X` used throughout the product argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardMap {
    /// `x ↦ (x, 0)`
    Iota1,
    /// `x ↦ (0, x)`
    Iota2,
    /// `x ↦ (x, x)`
    Iota3,
    Pr1,
    Pr2,
    /// Addition `(x, y) ↦ x + y`.
    Mu,
    /// `(x, y) ↦ (x, 0)`
    Alpha1,
    /// `(x, y) ↦ (0, y)`
    Alpha2,
    /// `(x, y) ↦ (x + y, x + y)`
    Alpha3,
}

impl StandardMap {
    pub const ALL: [StandardMap; 9] = [
        Self::Iota1,
        Self::Iota2,
        Self::Iota3,
        Self::Pr1,
        Self::Pr2,
        Self::Mu,
        Self::Alpha1,
        Self::Alpha2,
        Self::Alpha3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Iota1 => "iota1",
            Self::Iota2 => "iota2",
            Self::Iota3 => "iota3",
            Self::Pr1 => "pr1",
            Self::Pr2 => "pr2",
            Self::Mu => "mu",
            Self::Alpha1 => "alpha1",
            Self::Alpha2 => "alpha2",
            Self::Alpha3 => "alpha3",
        }
    }

    /// 2×2 pattern on the (first copy, second copy) coordinates. Embeddings
    /// use the first column, projections and `mu` the first row.
    fn pattern(&self) -> [[i64; 2]; 2] {
        match self {
            Self::Iota1 => [[1, 0], [0, 0]],
            Self::Iota2 => [[0, 0], [1, 0]],
            Self::Iota3 => [[1, 0], [1, 0]],
            Self::Pr1 => [[1, 0], [0, 0]],
            Self::Pr2 => [[0, 1], [0, 0]],
            Self::Mu => [[1, 1], [0, 0]],
            Self::Alpha1 => [[1, 0], [0, 0]],
            Self::Alpha2 => [[0, 0], [0, 1]],
            Self::Alpha3 => [[1, 1], [1, 1]],
        }
    }
}

impl FromStr for StandardMap {
    type Err = NsError;

    fn from_str(s: &str) -> Result<Self, NsError> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| NsError::ArityMismatch(format!("unknown map {s:?}")))
    }
}

impl fmt::Display for StandardMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Builds `name` between `source` and `target`, checking that one of them is
/// the self-product of the other (both are `X × X` for the `alpha` maps).
pub fn standard_hom(
    name: StandardMap,
    source: &ProductVariety,
    target: &ProductVariety,
) -> Result<LatticeHom, NsError> {
    use StandardMap::*;
    let base = match name {
        Iota1 | Iota2 | Iota3 => {
            let doubled = source.doubled()?;
            if &doubled != target {
                return Err(NsError::ArityMismatch(format!("{name} needs X → X×X")));
            }
            source.clone()
        }
        Pr1 | Pr2 | Mu => {
            let doubled = target.doubled()?;
            if &doubled != source {
                return Err(NsError::ArityMismatch(format!("{name} needs X×X → X")));
            }
            target.clone()
        }
        Alpha1 | Alpha2 | Alpha3 => {
            let base = source
                .halved()
                .filter(|_| source == target)
                .ok_or_else(|| NsError::ArityMismatch(format!("{name} needs X×X → X×X")))?;
            base
        }
    };
    let p = name.pattern();
    let (src_copies, tgt_copies) = match name {
        Iota1 | Iota2 | Iota3 => (1, 2),
        Pr1 | Pr2 | Mu => (2, 1),
        _ => (2, 2),
    };
    let mut rows = vec![vec![HomEntry::zero(); source.dim()]; target.dim()];
    let (sb, tb, bb) = (source.blocks(), target.blocks(), base.blocks());
    for k in 0..bb.len() {
        let n = bb[k].len;
        for copy_t in 0..tgt_copies {
            for copy_s in 0..src_copies {
                let v = p[copy_t][copy_s];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    rows[tb[k].start + copy_t * n + j][sb[k].start + copy_s * n + j] =
                        HomEntry::int(v);
                }
            }
        }
    }
    LatticeHom::new(source.clone(), target.clone(), rows)
}

/// [`standard_hom`] with source and target derived from the base `X`.
pub fn standard_hom_on(name: StandardMap, x: &ProductVariety) -> Result<LatticeHom, NsError> {
    use StandardMap::*;
    let xx = x.doubled()?;
    match name {
        Iota1 | Iota2 | Iota3 => standard_hom(name, x, &xx),
        Pr1 | Pr2 | Mu => standard_hom(name, &xx, x),
        Alpha1 | Alpha2 | Alpha3 => standard_hom(name, &xx, &xx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::{EndRing, Factor};

    fn e() -> ProductVariety {
        ProductVariety::elliptic("E", EndRing::Integers)
    }

    fn ints(h: &LatticeHom) -> Vec<Vec<i64>> {
        h.rows()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(&x.a).unwrap()).collect())
            .collect()
    }

    #[test]
    fn block_matrices() {
        let x = e();
        assert_eq!(
            ints(&standard_hom_on(StandardMap::Iota3, &x).unwrap()),
            vec![vec![1], vec![1]]
        );
        assert_eq!(
            ints(&standard_hom_on(StandardMap::Mu, &x).unwrap()),
            vec![vec![1, 1]]
        );
        assert_eq!(
            ints(&standard_hom_on(StandardMap::Alpha3, &x).unwrap()),
            vec![vec![1, 1], vec![1, 1]]
        );
    }

    #[test]
    fn alpha_relations() {
        let x = e();
        let a1 = standard_hom_on(StandardMap::Alpha1, &x).unwrap();
        let a2 = standard_hom_on(StandardMap::Alpha2, &x).unwrap();
        let a3 = standard_hom_on(StandardMap::Alpha3, &x).unwrap();
        assert_eq!(a1.compose(&a1).unwrap(), a1);
        assert_eq!(a2.compose(&a2).unwrap(), a2);
        assert_eq!(a3.compose(&a3).unwrap(), a3.scale(2));
        assert!(a1.is_symmetric() && a2.is_symmetric() && a3.is_symmetric());
    }

    #[test]
    fn arity_errors() {
        let x = e();
        let xx = x.doubled().unwrap();
        assert!(standard_hom(StandardMap::Iota1, &xx, &x).is_err());
        assert!(standard_hom(StandardMap::Mu, &x, &xx).is_err());
        assert!(standard_hom(StandardMap::Alpha1, &x, &x).is_err());
        assert!("nope".parse::<StandardMap>().is_err());
        assert_eq!("iota2".parse::<StandardMap>().unwrap(), StandardMap::Iota2);
    }

    #[test]
    fn pullbacks() {
        let x = e();
        let mu = standard_hom_on(StandardMap::Mu, &x).unwrap();
        let m = HermitianClass::from_ints(&[&[1]]).unwrap();
        assert_eq!(
            pullback(&mu, &m).unwrap(),
            HermitianClass::from_ints(&[&[1, 1], &[1, 1]]).unwrap()
        );
        let h = HermitianClass::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        let i1 = standard_hom_on(StandardMap::Iota1, &x).unwrap();
        let i3 = standard_hom_on(StandardMap::Iota3, &x).unwrap();
        assert_eq!(pullback(&i1, &h).unwrap(), m);
        assert_eq!(
            pullback(&i3, &h).unwrap(),
            HermitianClass::from_ints(&[&[9]]).unwrap()
        );
        assert!(pullback(&i3, &m).is_err());
    }

    #[test]
    fn multi_factor_layout() {
        let x = ProductVariety::new(vec![
            Factor::new("A", EndRing::Integers, 1),
            Factor::new("B", EndRing::cm(-3).unwrap(), 1),
        ])
        .unwrap();
        let i2 = standard_hom_on(StandardMap::Iota2, &x).unwrap();
        // X×X = A² × B², second copies at positions 1 and 3
        assert_eq!(
            ints(&i2),
            vec![vec![0, 0], vec![1, 0], vec![0, 0], vec![0, 1]]
        );
    }
}
