//! Machine-checkable certificates that the effective semigroup is not
//! finitely generated: the divergent family on `X × X` and the irrational
//! boundary slope on a simple variety of Picard rank at least two.

mod family;
mod slope;

pub use family::{
    bm_family, bm_record, expected_charpoly, generators, refute_bound, BmRecord, BoundRefutation,
    FamilyBase, MAX_FAMILY_INDEX,
};
pub use slope::{find_slope_witness, prop2_refute, SlopeCertificate};

use crate::cone_engine::{ConeError, Evidence, PolyhedralityVerdict, WitnessKind};
use crate::exactnum::ExactError;
use crate::ns_lattice::{NsError, VarietyPresentation};

/// Alias kept for callers that think in terms of the slope argument.
pub type Prop2Certificate = SlopeCertificate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("the family needs a base of Picard rank one (got rank {0})")]
    RankNotOne(usize),
    #[error("candidate {index}: {reason}")]
    Candidate { index: usize, reason: String },
    #[error("boundary slope is rational ({0}); no slope witness exists for this pair")]
    RationalSlope(String),
    #[error("q = {q} does not exceed the slope {s}: the candidates are not all nef")]
    BelowSlope { q: String, s: String },
    #[error("no convergent inside the approximation window")]
    NoApproximation,
    #[error("slope witnesses need a simple abstract presentation")]
    NotSimpleAbstract,
    #[error("no irrational boundary slope among small integral directions")]
    NoIrrationalSlope,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Ns(#[from] NsError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A finished certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessReport {
    Family(BmRecord),
    Slope(SlopeCertificate),
}

impl WitnessReport {
    pub fn kind(&self) -> WitnessKind {
        match self {
            Self::Family(_) => WitnessKind::PowerFamily,
            Self::Slope(_) => WitnessKind::IrrationalSlope,
        }
    }
}

/// Produces the witness named by a negative verdict. For the family, the
/// base is the repeated factor taken once and the member is `B_{m}` for the
/// given `m`.
pub fn witness_for(
    x: &VarietyPresentation,
    verdict: &PolyhedralityVerdict,
    m: u64,
) -> Result<Option<WitnessReport>, WitnessError> {
    let Evidence::Witness { kind, factor } = &verdict.evidence else {
        return Ok(None);
    };
    match kind {
        WitnessKind::PowerFamily => {
            let p = x.as_product().ok_or_else(|| {
                WitnessError::Inconsistent("family witness on abstract input".into())
            })?;
            let f = p
                .factors()
                .iter()
                .find(|f| &f.id == factor)
                .ok_or_else(|| WitnessError::Inconsistent(format!("unknown factor {factor}")))?;
            let base = crate::ns_lattice::ProductVariety::elliptic(f.id.clone(), f.end);
            Ok(Some(WitnessReport::Family(bm_family(&base.into(), m)?)))
        }
        WitnessKind::IrrationalSlope => Ok(Some(WitnessReport::Slope(find_slope_witness(x)?))),
    }
}
