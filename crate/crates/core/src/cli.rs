//! The `nefcone` command-line front end.
//!
//! Exit status: 0 on success, 1 for I/O or input errors (unreadable files,
//! malformed or invalid documents, bad arguments), 2 for errors raised by a
//! computation on valid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::cone_engine::{
    self, boundary_slope, decide_polyhedral, dual_cone, hilbert_basis, slope_constraints,
    transfer_generators, verify_hilbert_basis, ConeError, Evidence, Pairing, DEFAULT_VERIFY_BOX,
};
use crate::exactnum::{format_rational, parse_rational, ExactError, RationalityCertificate};
use crate::json::{self as wire, JsonError};
use crate::ns_lattice::{
    ample_test, analytic_charpoly, hermitian, intersection_number, mixed_with_reference, nef_test,
    NSClass, NsError, VarietyPresentation,
};
use crate::witnesses::{self, bm_family, prop2_refute, refute_bound, witness_for, WitnessError};

/// Environment variable overriding the verification box half-width.
pub const MAX_BOX_ENV: &str = "NEFCONE_MAX_BOX";

#[derive(Debug, Parser)]
#[command(
    name = "nefcone",
    version,
    about = "Exact nef cones and effective semigroups of abelian varieties"
)]
pub struct Cli {
    /// Emit a single JSON document instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether a class is nef.
    Nef {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        class: PathBuf,
    },
    /// Test whether a class is ample.
    Ample {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        class: PathBuf,
    },
    /// Intersection number of `dim` classes (repeat --class).
    Intersect {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long = "class", required = true)]
        classes: Vec<PathBuf>,
    },
    /// Analytic characteristic polynomial of a class.
    Charpoly {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        class: PathBuf,
    },
    /// Rank of the Néron–Severi lattice.
    Rank {
        #[arg(long)]
        variety: PathBuf,
    },
    /// Decide finite generation of the effective semigroup.
    Decide {
        #[arg(long)]
        variety: PathBuf,
        /// Also build and verify the witness (family member `m` when applicable).
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 2)]
        m: u64,
    },
    /// Hilbert basis of a pointed cone.
    Hilbert {
        #[arg(long)]
        cone: PathBuf,
    },
    /// Dual cone under a pairing (standard by default).
    Dual {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        pairing: Option<PathBuf>,
    },
    /// Boundary slope inf { t : t·L1 − L2 nef }.
    Slope {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        l1: PathBuf,
        #[arg(long)]
        l2: PathBuf,
    },
    /// Member B_m of the divergent family on X × X.
    Bm {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        m: u64,
    },
    /// Refute a candidate generating set of NS⁺(X × X).
    RefuteBm {
        #[arg(long)]
        variety: PathBuf,
        /// JSON array of classes on X × X.
        #[arg(long)]
        candidates: PathBuf,
    },
    /// Certify an irrational slope against candidate generators (a, b).
    RefuteSlope {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        l1: PathBuf,
        #[arg(long)]
        l2: PathBuf,
        /// JSON array of [a, b] pairs.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Transfer semigroup generators to a finite-index sublattice.
    Transfer {
        #[arg(long)]
        semigroup: PathBuf,
        #[arg(long)]
        sublattice: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: String, source: JsonError },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("environment: {0}")]
    Environment(String),
    #[error(transparent)]
    Ns(#[from] NsError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Input { .. } | Self::Argument(_) | Self::Environment(_) => 1,
            _ => 2,
        }
    }
}

/// A rendered report: the JSON document and its text form.
pub struct Report {
    pub json: Value,
    pub text: String,
}

struct Checklist(String);

impl Checklist {
    fn new(title: impl std::fmt::Display) -> Self {
        Self(format!("{title}\n"))
    }
    fn line(&mut self, k: &str, v: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "{k}: {v}");
        self
    }
    fn check(&mut self, ok: bool, what: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "  [{}] {what}", if ok { "x" } else { " " });
        self
    }
    fn header(&mut self, h: &str) -> &mut Self {
        let _ = writeln!(self.0, "{h}");
        self
    }
    fn done(&mut self) -> String {
        std::mem::take(&mut self.0)
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        source: e.into(),
    })
}

fn load<T>(path: &Path, f: impl FnOnce(&Value) -> Result<T, JsonError>) -> Result<T, CliError> {
    let v = read_json(path)?;
    f(&v).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn load_variety(path: &Path) -> Result<VarietyPresentation, CliError> {
    load(path, wire::parse_variety)
}

fn load_class(path: &Path, x: &VarietyPresentation) -> Result<NSClass, CliError> {
    load(path, |v| {
        let c = wire::parse_class(v)?;
        c.validate(x)?;
        Ok(c)
    })
}

/// Verification box half-width from `NEFCONE_MAX_BOX`, default 10.
pub fn verify_box() -> Result<i64, CliError> {
    match std::env::var(MAX_BOX_ENV) {
        Ok(s) => s
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|b| *b >= 0)
            .ok_or_else(|| {
                CliError::Environment(format!("{MAX_BOX_ENV}={s:?} is not a non-negative integer"))
            }),
        Err(_) => Ok(DEFAULT_VERIFY_BOX),
    }
}

fn rationals(v: &[crate::exactnum::Q]) -> Value {
    Value::Array(
        v.iter()
            .map(|q| Value::String(format_rational(q)))
            .collect(),
    )
}

fn joined(v: &[crate::exactnum::Q]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

/// Runs one command and returns its report.
pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Nef { variety, class } | Command::Ample { variety, class } => {
            let x = load_variety(variety)?;
            let c = load_class(class, &x)?;
            let values = mixed_with_reference(&c, &x)?;
            let ample = matches!(cmd, Command::Ample { .. });
            let (key, answer) = if ample {
                ("ample", ample_test(&c, &x)?)
            } else {
                ("nef", nef_test(&c, &x)?)
            };
            let mut t = Checklist::new(answer);
            t.line("class", &c)
                .line("L^i·A^(g-i), i = 0..g", joined(&values))
                .header("checks:");
            if ample {
                t.check(
                    values.iter().all(Signed::is_positive),
                    "all L^i·A^(g-i) > 0",
                );
                if let (VarietyPresentation::Product(p), NSClass::Matrix(m)) = (&x, &c) {
                    t.check(
                        hermitian::is_positive_definite(m, p)? == answer,
                        "agrees with positive definiteness of the complex embedding",
                    );
                }
            } else {
                t.check(
                    values.iter().skip(1).all(|v| !v.is_negative()) == answer,
                    "L^i·A^(g-i) ≥ 0 for 1 ≤ i ≤ g decides the answer",
                );
                if let (VarietyPresentation::Product(p), NSClass::Matrix(m)) = (&x, &c) {
                    t.check(
                        hermitian::is_positive_semidefinite(m, p)? == answer,
                        "agrees with positive semidefiniteness of the complex embedding",
                    );
                }
            }
            Ok(Report {
                json: json!({ key: answer, "intersections": rationals(&values) }),
                text: t.done(),
            })
        }
        Command::Intersect { variety, classes } => {
            let x = load_variety(variety)?;
            let cs = classes
                .iter()
                .map(|p| load_class(p, &x))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&NSClass> = cs.iter().collect();
            let v = intersection_number(&refs, &x)?;
            let mut t = Checklist::new(format_rational(&v));
            t.header("checks:").check(
                x.as_abstract().is_some() || v.is_integer(),
                "integral on a product presentation",
            );
            Ok(Report {
                json: json!({"intersection": format_rational(&v)}),
                text: t.done(),
            })
        }
        Command::Charpoly { variety, class } => {
            let x = load_variety(variety)?;
            let c = load_class(class, &x)?;
            let p = analytic_charpoly(&c, &x)?;
            let g = x.dim();
            let values = mixed_with_reference(&c, &x)?;
            let link = (0..=g).all(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                values[k]
                    == crate::exactnum::Q::from_integer(sign.into())
                        * crate::ns_lattice::factorial_weight(g, k)
                        * p.coeff(g - k)
            });
            let mut t = Checklist::new(&p);
            t.header("checks:")
                .check(p.integer_coeffs().is_some(), "integer coefficients")
                .check(
                    link,
                    "L^k·A^(g-k) = (-1)^k k!(g-k)! [t^(g-k)] P(t) for all k",
                );
            Ok(Report {
                json: json!({"charpoly": wire::poly_value(&p)}),
                text: t.done(),
            })
        }
        Command::Rank { variety } => {
            let x = load_variety(variety)?;
            let r = x.ns_rank();
            Ok(Report {
                json: json!({"rank": r, "dim": x.dim()}),
                text: format!("{r}\ndim: {}\n", x.dim()),
            })
        }
        Command::Decide {
            variety,
            witness,
            m,
        } => {
            let x = load_variety(variety)?;
            let v = decide_polyhedral(&x)?;
            let mut doc = wire::verdict_value(&v);
            let mut t = Checklist::new(if v.polyhedral {
                "finitely generated"
            } else {
                "not finitely generated"
            });
            match &v.evidence {
                Evidence::Basis(b) => {
                    t.header("basis:");
                    for c in b {
                        t.line("  generator", c);
                    }
                }
                Evidence::Witness { kind, factor } => {
                    t.line("witness", kind).line("factor", factor);
                }
            }
            if *witness {
                if let Some(r) = witness_for(&x, &v, *m)? {
                    let ok = match &r {
                        witnesses::WitnessReport::Family(b) => b.verified(),
                        witnesses::WitnessReport::Slope(c) => c.verify(&x)?,
                    };
                    t.header("checks:")
                        .check(ok, format!("{} witness verifies", r.kind()));
                    doc["report"] = wire::report_value(&r);
                }
            }
            Ok(Report {
                json: doc,
                text: t.done(),
            })
        }
        Command::Hilbert { cone } => {
            let c = load(cone, wire::parse_cone)?;
            let hb = hilbert_basis(&c)?;
            let b = verify_box()?;
            let ok = verify_hilbert_basis(&c, &hb, b)?;
            let mut t = Checklist::new(format!("{} generators", hb.elements().len()));
            for e in hb.elements() {
                t.line("  element", format!("{e:?}"));
            }
            t.line("enumeration box", cone_engine::hilbert_box(&c.canonical()?))
                .header("checks:")
                .check(
                    ok,
                    format!("minimal and generating on [-{b}, {b}]^{}", c.rank()),
                );
            if !ok {
                return Err(CliError::Domain("Hilbert basis failed verification".into()));
            }
            let mut doc = wire::semigroup_value(&hb, None);
            doc["verified_box"] = json!(b);
            Ok(Report {
                json: doc,
                text: t.done(),
            })
        }
        Command::Dual { cone, pairing } => {
            let c = load(cone, wire::parse_cone)?;
            let p = match pairing {
                Some(path) => load(path, wire::parse_pairing)?,
                None => Pairing::standard(c.rank()),
            };
            let d = dual_cone(&c, &p)?;
            let back = dual_cone(&d, &p)?;
            let mut t = Checklist::new(&d);
            t.header("checks:").check(
                back.equivalent(&c)?,
                "dual of the dual is the original cone",
            );
            Ok(Report {
                json: wire::cone_value(&d),
                text: t.done(),
            })
        }
        Command::Slope { variety, l1, l2 } => {
            let x = load_variety(variety)?;
            let (a, b) = (load_class(l1, &x)?, load_class(l2, &x)?);
            let s = boundary_slope(&a, &b, &x)?;
            let constraints = slope_constraints(&a, &b, &x)?;
            let (below, above) = cone_engine::bracket(&s, cone_engine::SAMPLE_DENOMINATOR)?;
            let mut doc = json!({
                "s": wire::scalar_value(&s),
                "constraints": constraints.iter().map(wire::poly_value).collect::<Vec<_>>(),
                "samples": [format_rational(&below), format_rational(&above)],
            });
            let mut t = Checklist::new(&s);
            match s.rationality_certificate() {
                RationalityCertificate::Rational(_) => {
                    t.line("rational", "yes");
                }
                RationalityCertificate::Irrational(mp) => {
                    doc["minpoly"] = Value::Array(mp.coeffs.iter().map(wire::int_value).collect());
                    let poly = crate::exactnum::Poly::new(
                        mp.coeffs
                            .iter()
                            .map(|c| crate::exactnum::Q::from_integer(c.clone()))
                            .collect(),
                    );
                    t.line("minimal polynomial", poly)
                        .line("discriminant", &mp.discriminant);
                }
            }
            t.header("checks:")
                .check(true, "L1 ample")
                .check(true, format!("{} nef", format_rational(&above)))
                .check(true, format!("{} not nef", format_rational(&below)));
            Ok(Report {
                json: doc,
                text: t.done(),
            })
        }
        Command::Bm { variety, m } => {
            let x = load_variety(variety)?;
            let r = bm_family(&x, *m)?;
            if !r.verified() {
                return Err(CliError::Domain(format!("B_{m} failed verification")));
            }
            Ok(Report {
                json: wire::bm_value(&r),
                text: bm_text(&r),
            })
        }
        Command::RefuteBm {
            variety,
            candidates,
        } => {
            let x = load_variety(variety)?;
            let cands = load(candidates, wire::parse_classes)?;
            let r = refute_bound(&x, &cands)?;
            let mut t = Checklist::new(format!("bound c = {} refuted by m = {}", r.c, r.m));
            t.line("divergence of B_m", &r.record.divergence_value)
                .header("checks:")
                .check(
                    true,
                    "every candidate is nef and restricts to 0 or M on the first factor",
                )
                .check(r.record.verified(), format!("B_{} verifies", r.m))
                .check(
                    r.record.divergence_value.magnitude() > r.c.magnitude(),
                    "|divergence| > c",
                );
            Ok(Report {
                json: json!({"c": wire::int_value(&r.c), "m": r.m, "record": wire::bm_value(&r.record)}),
                text: t.done(),
            })
        }
        Command::RefuteSlope {
            variety,
            l1,
            l2,
            candidates,
            epsilon,
        } => {
            let x = load_variety(variety)?;
            let (a, b) = (load_class(l1, &x)?, load_class(l2, &x)?);
            let pairs = load(candidates, wire::parse_pairs)?;
            let eps = epsilon
                .as_deref()
                .map(parse_rational)
                .transpose()
                .map_err(|e| CliError::Argument(e.to_string()))?;
            let c = prop2_refute(&a, &b, &x, &pairs, eps)?;
            let ok = c.verify(&x)?;
            let mut t = Checklist::new(format!(
                "{}·L1 − {}·L2 is ample but not generated",
                c.approx.0, c.approx.1
            ));
            t.line("s", &c.s)
                .line(
                    "q",
                    c.q.as_ref()
                        .map(format_rational)
                        .unwrap_or_else(|| "none".into()),
                )
                .line("approximation", format_rational(&c.approx_value()))
                .header("checks:")
                .check(ok, "s irrational, s < p1/p2 < min(q, s + ε), class ample");
            if !ok {
                return Err(CliError::Domain(
                    "slope certificate failed verification".into(),
                ));
            }
            Ok(Report {
                json: wire::slope_value(&c),
                text: t.done(),
            })
        }
        Command::Transfer {
            semigroup,
            sublattice,
        } => {
            let s = load(semigroup, wire::parse_semigroup)?;
            let l = load(sublattice, wire::parse_sublattice)?;
            let tr = transfer_generators(&s, &l)?;
            let b = verify_box()?;
            let ok = transfer_verifies(&s, &l, &tr.basis, b)?;
            let mut t = Checklist::new(format!("index {}", tr.index));
            t.line("multiples", format!("{:?}", tr.multiples));
            for e in tr.basis.elements() {
                t.line("  generator", format!("{e:?}"));
            }
            t.header("checks:")
                .check(ok, format!("generates ⟨S⟩ ∩ Λ on [-{b}, {b}]^{}", s.rank()));
            if !ok {
                return Err(CliError::Domain(
                    "transferred generators failed verification".into(),
                ));
            }
            Ok(Report {
                json: wire::semigroup_value(&tr.basis, Some(tr.index)),
                text: t.done(),
            })
        }
    }
}

/// Output lies in `Λ` and generates `⟨S⟩ ∩ Λ` on the box.
pub fn transfer_verifies(
    s: &cone_engine::SemigroupBasis,
    l: &cone_engine::Sublattice,
    out: &cone_engine::SemigroupBasis,
    b: i64,
) -> Result<bool, ConeError> {
    if !out.elements().iter().all(|e| l.contains(e)) {
        return Ok(false);
    }
    for x in cone_engine::box_points(s.rank(), b) {
        if l.contains(&x) && s.generates(&x)? && !out.generates(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn bm_text(r: &witnesses::BmRecord) -> String {
    let mut t = Checklist::new(format!("B_{} on X × X (n = {})", r.m, r.n));
    t.line("class", &r.class)
        .line("charpoly", &r.charpoly)
        .line("divergence (ι2*B − ι3*B)^n", &r.divergence_value)
        .header("checks:")
        .check(true, "class = (1−m)L1 + (m²−m)L2 + m·L3")
        .check(r.beta_relation_checked, "β² = (m²+1)·β")
        .check(
            r.alpha_correspondence_checked,
            "L1, L2, L3 correspond to α1, α2, α3",
        )
        .check(r.charpoly_matches, "charpoly = t^n (t − (m²+1))^n")
        .check(r.restriction_is_generator, "ι1*B = M")
        .check(r.nef, "nef");
    t.done()
}

/// Parses `argv`, runs the command and writes the report. Returns the exit
/// status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|report| {
        let body = if cli.json {
            let mut s = serde_json::to_string_pretty(&report.json).expect("values serialize");
            s.push('\n');
            s
        } else {
            report.text
        };
        match &cli.out {
            Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
            None => stdout
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
