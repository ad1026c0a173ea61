use std::fmt;

use num_traits::Signed;

use super::ConeError;
use crate::exactnum::Q;
use crate::ns_lattice::{HermitianClass, HomEntry, NSClass, VarietyPresentation};

/// Which non-finite-generation witness applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// A simple factor of Picard rank at least two: irrational boundary slope.
    IrrationalSlope,
    /// A factor occurring with multiplicity at least two: the divergent family.
    PowerFamily,
}

impl WitnessKind {
    /// Wire name used in JSON reports.
    pub fn wire_name(self) -> &'static str {
        match self {
            Self::IrrationalSlope => "prop2",
            Self::PowerFamily => "prop3",
        }
    }

    pub fn from_wire(s: &str) -> Option<Self> {
        match s {
            "prop2" => Some(Self::IrrationalSlope),
            "prop3" => Some(Self::PowerFamily),
            _ => None,
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.wire_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// Generators `pr_i*N_i` of the effective semigroup.
    Basis(Vec<NSClass>),
    Witness {
        kind: WitnessKind,
        factor: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralityVerdict {
    pub polyhedral: bool,
    pub evidence: Evidence,
}

/// Identifier reported for abstract presentations, which carry no factor ids.
pub const ABSTRACT_FACTOR_ID: &str = "X";

/// Decides whether the effective semigroup is finitely generated, from the
/// declared decomposition: it is exactly when every factor has Picard rank
/// one and occurs once.
pub fn decide_polyhedral(x: &VarietyPresentation) -> Result<PolyhedralityVerdict, ConeError> {
    match x {
        VarietyPresentation::Product(p) => {
            if let Some(f) = p.factors().iter().find(|f| f.mult >= 2) {
                return Ok(PolyhedralityVerdict {
                    polyhedral: false,
                    evidence: Evidence::Witness {
                        kind: WitnessKind::PowerFamily,
                        factor: f.id.clone(),
                    },
                });
            }
            // elliptic factors with multiplicity one all have NS ≅ Z
            let g = p.dim();
            let basis = (0..g)
                .map(|i| {
                    let mut m = HermitianClass::zero(g);
                    m.set(i, i, HomEntry::int(1));
                    NSClass::Matrix(m)
                })
                .collect();
            Ok(PolyhedralityVerdict {
                polyhedral: true,
                evidence: Evidence::Basis(basis),
            })
        }
        VarietyPresentation::Abstract(a) => {
            if !a.is_simple() {
                return Err(ConeError::Unsupported(
                    "non-simple abstract presentation: supply the isogeny decomposition as a product",
                ));
            }
            if a.rank() >= 2 {
                return Ok(PolyhedralityVerdict {
                    polyhedral: false,
                    evidence: Evidence::Witness {
                        kind: WitnessKind::IrrationalSlope,
                        factor: ABSTRACT_FACTOR_ID.into(),
                    },
                });
            }
            let sign = if a.ample()[0].is_positive() { 1 } else { -1 };
            Ok(PolyhedralityVerdict {
                polyhedral: true,
                evidence: Evidence::Basis(vec![NSClass::Coords(vec![Q::from_integer(
                    sign.into(),
                )])]),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns_lattice::{AbstractVariety, EndRing, Factor, ProductVariety};

    fn product(factors: Vec<Factor>) -> VarietyPresentation {
        ProductVariety::new(factors).unwrap().into()
    }

    #[test]
    fn verdicts() {
        let e1e2 = product(vec![
            Factor::new("E1", EndRing::Integers, 1),
            Factor::new("E2", EndRing::Integers, 1),
        ]);
        let v = decide_polyhedral(&e1e2).unwrap();
        assert!(v.polyhedral);
        assert_eq!(
            v.evidence,
            Evidence::Basis(vec![
                NSClass::Matrix(HermitianClass::diagonal(&[1, 0])),
                NSClass::Matrix(HermitianClass::diagonal(&[0, 1])),
            ])
        );
        let exe = product(vec![Factor::new("E", EndRing::cm(-4).unwrap(), 2)]);
        let v = decide_polyhedral(&exe).unwrap();
        assert!(!v.polyhedral);
        assert_eq!(
            v.evidence,
            Evidence::Witness {
                kind: WitnessKind::PowerFamily,
                factor: "E".into()
            }
        );
        let s: VarietyPresentation = AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], true)
            .unwrap()
            .into();
        assert!(matches!(
            decide_polyhedral(&s).unwrap().evidence,
            Evidence::Witness {
                kind: WitnessKind::IrrationalSlope,
                ..
            }
        ));
        let ns: VarietyPresentation = AbstractVariety::surface([[2, 4], [4, 2]], [1, 0], false)
            .unwrap()
            .into();
        assert!(decide_polyhedral(&ns).is_err());
        let r1: VarietyPresentation = AbstractVariety::rank_one(3, 6).unwrap().into();
        assert!(decide_polyhedral(&r1).unwrap().polyhedral);
    }
}
