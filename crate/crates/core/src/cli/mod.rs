//! Command-line front end. Every command prints one JSON document with sorted
//! keys; integers are written as decimal strings so nothing is truncated.

pub mod spec;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::crystal::{CrystalRing, ValidationError};
use crate::exactalg::FracIdeal;
use crate::graded::{self, GradedError, GradedLattice};
use crate::lattice::{FullLattice, LatticeError};
use crate::oracle::{self, EnumBudget, OracleError};
use crate::orders::{self, OrderHandle, OrdersError};

pub use spec::{parse_spec, ParseError, SpecFile};

/// Name that resolves to `⊕ R u_g` when the spec does not define it.
pub const STANDARD: &str = "std";

/// Subspaces tried by `--oracle` before giving up with exit code 3.
pub const CANDIDATE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Parser)]
#[command(name = "crystal-orders", version, about = "Exact orders and ideals in crystalline graded rings")]
pub struct Cli {
    /// Ring spec file.
    #[arg(long, global = true, value_name = "FILE")]
    pub ring: Option<PathBuf>,
    /// Lattice (or graded lattice) used when a command is given no name.
    #[arg(long, global = true, value_name = "NAME")]
    pub lattice: Option<String>,
    /// Cross-check results by brute-force enumeration.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Index bound for `--oracle` enumeration.
    #[arg(long, global = true, default_value_t = 4, value_name = "K")]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the group, action and cocycle identities.
    Validate,
    /// Left and right orders of a lattice.
    Orders { name: Option<String> },
    /// `M^{-1}`, computed three ways.
    Inverse { name: Option<String> },
    /// A maximal order containing the given order.
    Maximize { name: Option<String> },
    /// Prime factorization of a two-sided Ideal of its (maximal) left order.
    Factor { name: Option<String> },
    /// Proper product of maximal integral Ideals equal to a left Ideal.
    FactorLeft { name: Option<String> },
    /// The gr-maximal order containing a graded order.
    GrMaximize { name: Option<String> },
    /// gr-prime factorization over the standard graded order.
    GrFactor { name: Option<String> },
    /// Transport a two-sided Ideal of one maximal order to another.
    Phi { order1: String, order2: String, ideal: String },
    /// Summary of the standard order.
    Report,
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Orders { .. } => "orders",
            Command::Inverse { .. } => "inverse",
            Command::Maximize { .. } => "maximize",
            Command::Factor { .. } => "factor",
            Command::FactorLeft { .. } => "factor-left",
            Command::GrMaximize { .. } => "gr-maximize",
            Command::GrFactor { .. } => "gr-factor",
            Command::Phi { .. } => "phi",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("no --ring file given")]
    MissingRing,
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid ring: {0}")]
    Validation(#[from] ValidationError),
    #[error("no lattice named '{0}'")]
    UnknownName(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Orders(#[from] OrdersError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Oracle(OracleError::BudgetExceeded(_)) => 3,
            _ => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::MissingRing => "missing_ring",
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::UnknownName(_) => "unknown_name",
            CliError::Lattice(_) => "lattice",
            CliError::Orders(OrdersError::NotOrder) => "not_order",
            CliError::Orders(OrdersError::NotMaximal) => "not_maximal",
            CliError::Orders(OrdersError::NotTwoSided) => "not_two_sided",
            CliError::Orders(OrdersError::NotLeftIdeal) => "not_left_ideal",
            CliError::Orders(_) => "orders",
            CliError::Graded(GradedError::NotGraded) => "not_graded",
            CliError::Graded(GradedError::NotGrOrder) => "not_gr_order",
            CliError::Graded(GradedError::NotGrMaximal) => "not_gr_maximal",
            CliError::Graded(GradedError::Ambiguous(_)) => "ambiguous",
            CliError::Graded(_) => "graded",
            CliError::Oracle(OracleError::BudgetExceeded(_)) => "budget",
            CliError::Oracle(_) => "oracle",
        }
    }

    fn document(&self) -> Value {
        let mut e = Map::new();
        e.insert("code".into(), json!(self.code()));
        e.insert("message".into(), json!(self.to_string()));
        match self {
            CliError::Parse(p) => {
                e.insert("line".into(), json!(p.line.to_string()));
                e.insert("column".into(), json!(p.col.to_string()));
                e.insert("expected".into(), json!(p.expected));
            }
            CliError::Validation(v) => {
                e.insert("identity".into(), json!(v.identity()));
            }
            CliError::Graded(GradedError::Ambiguous(all)) => {
                e.insert("candidates".into(), Value::Array(all.iter().map(graded_json).collect()));
            }
            _ => {}
        }
        json!({ "error": Value::Object(e) })
    }
}

/// Exit status and the document to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Value,
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Outcome {
    let text = match &cli.ring {
        None => Err(CliError::MissingRing),
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
    };
    match text {
        Ok(t) => run_on_text(&t, cli),
        Err(e) => failure(&e),
    }
}

pub fn run_on_text(text: &str, cli: &Cli) -> Outcome {
    match execute(text, cli) {
        Ok(result) => Outcome {
            exit_code: 0,
            document: json!({ "command": cli.command.label(), "result": result }),
        },
        Err(e) => failure(&e),
    }
}

fn failure(e: &CliError) -> Outcome {
    Outcome { exit_code: e.exit_code(), document: e.document() }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn lattice_json(l: &FullLattice) -> Value {
    json!({
        "den": s(l.den()),
        "z_hnf": l.int_basis().iter().map(|r| r.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "r_hnf": l.r_hnf().iter().map(|r| r.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn graded_json(g: &GradedLattice) -> Value {
    Value::Array(g.components().iter().map(|i| s(i.gen())).collect())
}

fn ring_json(ring: &CrystalRing) -> Value {
    let base = ring.base();
    json!({
        "kind": if base.is_quadratic() { "quadratic" } else { "integers" },
        "d": if base.is_quadratic() { s(base.d()) } else { Value::Null },
        "group_order": s(ring.order()),
        "centrally_crystalline": ring.centrally_crystalline(),
    })
}

struct Context<'a> {
    spec: SpecFile,
    ring: Arc<CrystalRing>,
    cli: &'a Cli,
}

impl Context<'_> {
    fn name(&self, given: &Option<String>) -> String {
        given.clone().or_else(|| self.cli.lattice.clone()).unwrap_or_else(|| STANDARD.to_string())
    }

    fn lattice(&self, name: &str) -> Result<FullLattice, CliError> {
        match self.spec.lattice(name) {
            Some(gens) => Ok(FullLattice::from_generators(&self.ring, &gens)?),
            None if name == STANDARD => Ok(FullLattice::standard(&self.ring)),
            None => Err(CliError::UnknownName(name.to_string())),
        }
    }

    fn graded(&self, name: &str) -> Result<GradedLattice, CliError> {
        let r = self.ring.base();
        match self.spec.graded(name) {
            Some(comps) => Ok(GradedLattice::new(
                comps.iter().map(|k| FracIdeal::new(r, k).expect("parser rejects zero")).collect(),
            )),
            None if name == STANDARD => Ok(GradedLattice::standard(&self.ring)),
            None => Err(CliError::UnknownName(name.to_string())),
        }
    }

    fn budget(&self) -> Result<EnumBudget, CliError> {
        Ok(EnumBudget::new(self.cli.budget, CANDIDATE_LIMIT)?)
    }

    fn maximal_left_order(&self, m: &FullLattice) -> Result<OrderHandle, CliError> {
        Ok(OrderHandle::maximal(m.left_order())?)
    }
}

fn execute(text: &str, cli: &Cli) -> Result<Value, CliError> {
    let spec = parse_spec(text)?;
    let report = spec.candidate().validate()?;
    let ring = spec.build()?;
    let cx = Context { spec, ring, cli };
    let out = match &cli.command {
        Command::Validate => json!({
            "ring": ring_json(&cx.ring),
            "valid": true,
            "identities_checked": s(report.identities_checked),
        }),
        Command::Orders { name } => {
            let m = cx.lattice(&cx.name(name))?;
            let (l, r) = (m.left_order(), m.right_order());
            json!({
                "lattice": lattice_json(&m),
                "left_order": lattice_json(&l),
                "right_order": lattice_json(&r),
                "left_is_maximal": orders::is_maximal(&l)?,
                "right_is_maximal": orders::is_maximal(&r)?,
            })
        }
        Command::Inverse { name } => {
            let m = cx.lattice(&cx.name(name))?;
            let inv = m.inverse_lattice();
            let agree = inv == m.inverse_definitional() && inv == m.inverse_right_form();
            json!({
                "lattice": lattice_json(&m),
                "inverse": lattice_json(&inv),
                "forms_agree": agree,
            })
        }
        Command::Maximize { name } => {
            let m = cx.lattice(&cx.name(name))?;
            let h = orders::maximize(&m)?;
            let cert = h.certificate().expect("maximize certifies");
            let mut out = json!({
                "input": lattice_json(&m),
                "maximal_order": lattice_json(h.lattice()),
                "index": s(m.int_index_in(h.lattice())?),
                "discriminant": s(&cert.discriminant),
                "primes": cert.primes.iter().map(s).collect::<Vec<_>>(),
            });
            if cli.oracle {
                let certified = oracle::certify_maximal(h.lattice(), &cx.budget()?)?;
                out["oracle"] = json!({ "budget": s(cli.budget), "certified": certified });
            }
            out
        }
        Command::Factor { name } => {
            let m = cx.lattice(&cx.name(name))?;
            let order = cx.maximal_left_order(&m)?;
            let f = orders::factor_two_sided(&order, &m)?;
            let mut out = json!({
                "order": lattice_json(order.lattice()),
                "factors": f.factors.iter().map(|(p, e)| json!({
                    "below": s(p.below),
                    "exponent": s(e),
                    "ideal": lattice_json(&p.ideal),
                })).collect::<Vec<_>>(),
                "reassembles": f.reassemble(order.lattice())? == m,
            });
            if cli.oracle {
                let mut agree = true;
                for p in f.factors.iter().map(|(p, _)| p.below).collect::<std::collections::BTreeSet<_>>() {
                    let all = oracle::enumerate_two_sided_ideals_mod_p(order.lattice(), p, &cx.budget()?)?;
                    let mut found = oracle::maximal_above(order.lattice(), &all, p);
                    found.sort();
                    let mut claimed: Vec<_> =
                        orders::primes_above(&order, p)?.into_iter().map(|x| x.ideal).collect();
                    claimed.sort();
                    agree &= found == claimed;
                }
                out["oracle"] = json!({ "primes_confirmed": agree });
            }
            out
        }
        Command::FactorLeft { name } => {
            let m = cx.lattice(&cx.name(name))?;
            let order = cx.maximal_left_order(&m)?;
            let fs = orders::factor_left_ideal(&order, &m)?;
            json!({
                "order": lattice_json(order.lattice()),
                "factors": fs.iter().map(lattice_json).collect::<Vec<_>>(),
                "proper": orders::proper_product_check(&fs),
                "reassembles": orders::reassemble(order.lattice(), fs.iter().map(|f| (f, 1)))? == m,
            })
        }
        Command::GrMaximize { name } => {
            let g = cx.graded(&cx.name(name))?;
            let out = graded::gr_maximize(&cx.ring, &g)?;
            json!({
                "input": graded_json(&g),
                "gr_maximal_order": graded_json(&out),
                "already_maximal": out == g,
            })
        }
        Command::GrFactor { name } => {
            let g = cx.graded(&cx.name(name))?;
            let order = GradedLattice::standard(&cx.ring);
            let f = graded::gr_factor(&cx.ring, &order, &g)?;
            json!({
                "order": graded_json(&order),
                "factors": f.factors.iter().map(|(p, e)| json!({
                    "exponent": s(e),
                    "ideal": graded_json(p),
                })).collect::<Vec<_>>(),
                "reassembles": f.product == g,
            })
        }
        Command::Phi { order1, order2, ideal } => {
            let a = OrderHandle::maximal(cx.lattice(order1)?)?;
            let b = OrderHandle::maximal(cx.lattice(order2)?)?;
            let x = cx.lattice(ideal)?;
            let image = orders::phi_map(&a, &b, &x)?;
            json!({
                "connecting_ideal": lattice_json(&orders::connect_orders(&a, &b)?),
                "image": lattice_json(&image),
                "two_sided": image.is_two_sided_ideal_of(b.lattice())?,
            })
        }
        Command::Report => {
            let std = FullLattice::standard(&cx.ring);
            let h = orders::maximize(&std)?;
            let gstd = GradedLattice::standard(&cx.ring);
            let mut out = json!({
                "ring": ring_json(&cx.ring),
                "standard_order": lattice_json(&std),
                "standard_discriminant": s(orders::discriminant(&std)?),
                "standard_is_maximal": h.lattice() == &std,
                "maximal_order": lattice_json(h.lattice()),
                "maximal_index": s(std.int_index_in(h.lattice())?),
                "standard_is_gr_maximal": graded::gr_is_maximal(&cx.ring, &gstd)?,
                "lattices": cx.spec.lattices.iter().map(|l| l.name.clone()).collect::<Vec<_>>(),
                "graded": cx.spec.graded.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            });
            if cli.oracle {
                out["oracle"] = json!({
                    "budget": s(cli.budget),
                    "certified": oracle::certify_maximal(h.lattice(), &cx.budget()?)?,
                });
            }
            out
        }
    };
    Ok(out)
}
