//! Command-line driver.
//!
//! Every command prints one JSON document on stdout, or a plain-text
//! rendering with `--pretty`. Exit codes: 0 success, 1 a check suite
//! failed, 2 bad usage or invalid input.

pub mod checks;
pub mod json;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coact::{coact, CoactionKind, Kind};
use crate::coinv::{coinvariant_basis, degrees, generators_up_to, hilbert_prefix, partition_count};
use crate::error::{Error, Result};
use crate::hopf::{iota_embed, sl_equal, GLElem, Slot};
use crate::qmatrix::{quantum_det, quantum_minor, sigma, tau, AlgElem, MAX_N};
use crate::scalar::Notation;

use checks::{run_suite, CheckOptions, Suite};
use json::{elem_to_json, graded_to_json, tensor_to_json, CoinvJson};
use parse::parse_expr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qcoinv", version, about = "Exact computations in O_q(GL_N) and O_q(SL_N)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Matrix size N.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Render coefficients with q as the symbol instead of s = q^(1/N).
    #[arg(long)]
    q_power: bool,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CoactionArg {
    Alpha,
    Beta,
    Lambda,
    Rho,
    AlphaBar,
    BetaBar,
}

impl From<CoactionArg> for Kind {
    fn from(c: CoactionArg) -> Kind {
        match c {
            CoactionArg::Alpha => Kind::Alpha,
            CoactionArg::Beta => Kind::Beta,
            CoactionArg::Lambda => Kind::Lambda,
            CoactionArg::Rho => Kind::Rho,
            CoactionArg::AlphaBar => Kind::AlphaBar,
            CoactionArg::BetaBar => Kind::BetaBar,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GroupArg {
    Gl,
    Sl,
}

impl From<GroupArg> for Slot {
    fn from(g: GroupArg) -> Slot {
        match g {
            GroupArg::Gl => Slot::Gl,
            GroupArg::Sl => Slot::Sl,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct CoactionArgs {
    #[arg(long, value_enum, default_value = "alpha")]
    coaction: CoactionArg,
    #[arg(long, value_enum, default_value = "sl")]
    group: GroupArg,
}

impl CoactionArgs {
    fn kind(&self) -> CoactionKind {
        CoactionKind::new(self.coaction.into(), self.group.into())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression.
    Normalform {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
    },
    /// The quantum determinant.
    Det {
        #[command(flatten)]
        common: Common,
    },
    /// Quantum minor on one-based rows and columns, e.g. `--rows 1,2 --cols 2,3`.
    Minor {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
    },
    /// Sum of the principal minors of size i.
    Sigma {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
    },
    /// Weighted sum of the principal minors of size i.
    Tau {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
    },
    /// Image of an expression under a coaction.
    Coact {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coaction: CoactionArgs,
        #[arg(long)]
        expr: String,
    },
    /// Basis of the coinvariants of one degree.
    Coinv {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coaction: CoactionArgs,
        #[arg(long)]
        degree: usize,
    },
    /// Dimensions of the coinvariants in degrees 0..=max-degree.
    Hilbert {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coaction: CoactionArgs,
        #[arg(long)]
        max_degree: usize,
    },
    /// Minimal generators of the coinvariants up to a degree.
    Generators {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        coaction: CoactionArgs,
        #[arg(long)]
        max_degree: usize,
    },
    /// Run a property-check suite, or `all`.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree bound for the graded suites.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Number of random samples for the randomized cases.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Image in O_q(SL_N) (x) k[z, z^-1], keyed by z-degree.
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
    },
    /// Whether two expressions agree in O_q(SL_N).
    SlEq {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
}

struct Out {
    json: serde_json::Value,
    pretty: String,
    code: i32,
}

impl Out {
    fn ok(json: serde_json::Value, pretty: String) -> Out {
        Out { json, pretty, code: EXIT_OK }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("domain values serialize")
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("--n must be in 1..={}", MAX_N)));
    }
    Ok(())
}

fn notation(c: &Common) -> Notation {
    if c.q_power {
        Notation::Q
    } else {
        Notation::S
    }
}

fn elem_out(a: &GLElem, c: &Common) -> Out {
    Out::ok(to_value(&elem_to_json(a)), a.to_expr_in(notation(c)))
}

fn alg_out(a: AlgElem, c: &Common) -> Out {
    elem_out(&GLElem::from_alg(a), c)
}

fn execute(cmd: Command) -> Result<Out> {
    match cmd {
        Command::Normalform { common, expr } => {
            check_n(common.n)?;
            Ok(elem_out(&parse_expr(&expr, common.n)?, &common))
        }
        Command::Det { common } => {
            check_n(common.n)?;
            Ok(alg_out(quantum_det(common.n), &common))
        }
        Command::Minor { common, rows, cols } => {
            check_n(common.n)?;
            Ok(alg_out(quantum_minor(common.n, &rows, &cols)?, &common))
        }
        Command::Sigma { common, i } => {
            check_n(common.n)?;
            Ok(alg_out(sigma(common.n, i)?, &common))
        }
        Command::Tau { common, i } => {
            check_n(common.n)?;
            Ok(alg_out(tau(common.n, i)?, &common))
        }
        Command::Coact { common, coaction, expr } => {
            check_n(common.n)?;
            let a = parse_expr(&expr, common.n)?;
            let t = coact(coaction.kind(), &a);
            Ok(Out::ok(to_value(&tensor_to_json(&t)), t.to_expr_in(notation(&common))))
        }
        Command::Coinv { common, coaction, degree } => {
            check_n(common.n)?;
            let b = coinvariant_basis(coaction.kind(), common.n, degree);
            let basis: Vec<GLElem> = b.basis.iter().cloned().map(GLElem::from_alg).collect();
            let j = CoinvJson { degree, dim: basis.len(), basis: basis.iter().map(elem_to_json).collect() };
            let mut pretty = format!("{} degree {}: dimension {}\n", coaction.kind(), degree, basis.len());
            for v in &basis {
                pretty.push_str(&format!("  {}\n", v.to_expr_in(notation(&common))));
            }
            Ok(Out::ok(to_value(&j), pretty))
        }
        Command::Hilbert { common, coaction, max_degree } => {
            check_n(common.n)?;
            let dims = hilbert_prefix(coaction.kind(), common.n, max_degree);
            let parts: Vec<usize> = (0..=max_degree).map(|d| partition_count(d, common.n)).collect();
            let pretty = format!(
                "{} dimensions: {:?}\npartitions into at most {} parts: {:?}",
                coaction.kind(),
                dims,
                common.n,
                parts
            );
            Ok(Out::ok(json!(dims), pretty))
        }
        Command::Generators { common, coaction, max_degree } => {
            check_n(common.n)?;
            let gens = generators_up_to(coaction.kind(), common.n, max_degree);
            let degs = degrees(&gens);
            let elems: Vec<GLElem> = gens.into_iter().map(GLElem::from_alg).collect();
            let mut pretty = format!("{} generators up to degree {}\n", coaction.kind(), max_degree);
            for (d, g) in degs.iter().zip(&elems) {
                pretty.push_str(&format!("  [{}] {}\n", d, g.to_expr_in(notation(&common))));
            }
            Ok(Out::ok(
                json!({"n": common.n, "coaction": coaction.kind().to_string(), "degrees": degs,
                       "generators": elems.iter().map(|g| to_value(&elem_to_json(g))).collect::<Vec<_>>()}),
                pretty,
            ))
        }
        Command::Check { common, suite, seed, max_degree, samples } => {
            check_n(common.n)?;
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::from_name(&suite).ok_or_else(|| Error::Invalid(format!("unknown suite {:?}", suite)))?]
            };
            let opts = CheckOptions { n: common.n, seed, max_degree, samples };
            let reports = suites.into_iter().map(|s| run_suite(s, &opts)).collect::<Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let mut pretty = String::new();
            for r in &reports {
                for c in &r.cases {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    let detail = c.detail.as_deref().map(|d| format!("  ({})", d)).unwrap_or_default();
                    pretty.push_str(&format!("{} {}/{}{}\n", mark, r.suite, c.name, detail));
                }
            }
            let json =
                if reports.len() == 1 { to_value(&reports[0]) } else { json!({"passed": passed, "suites": reports}) };
            Ok(Out { json, pretty, code: if passed { EXIT_OK } else { EXIT_FAILED } })
        }
        Command::Embed { common, expr } => {
            check_n(common.n)?;
            let parts = iota_embed(&parse_expr(&expr, common.n)?);
            let mut pretty = String::new();
            for (d, a) in &parts {
                pretty.push_str(&format!("z^{}: {}\n", d, a.to_expr_in(notation(&common))));
            }
            Ok(Out::ok(to_value(&graded_to_json(common.n, &parts)), pretty))
        }
        Command::SlEq { common, lhs, rhs } => {
            check_n(common.n)?;
            let eq = sl_equal(&parse_expr(&lhs, common.n)?, &parse_expr(&rhs, common.n)?)?;
            Ok(Out::ok(json!({"equal": eq}), eq.to_string()))
        }
    }
}

/// Runs the command line `args` (program name first), writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{}", text);
            } else {
                let _ = write!(out, "{}", text);
            }
            return code;
        }
    };
    let pretty = match &cli.command {
        Command::Normalform { common, .. }
        | Command::Det { common }
        | Command::Minor { common, .. }
        | Command::Sigma { common, .. }
        | Command::Tau { common, .. }
        | Command::Coact { common, .. }
        | Command::Coinv { common, .. }
        | Command::Hilbert { common, .. }
        | Command::Generators { common, .. }
        | Command::Check { common, .. }
        | Command::Embed { common, .. }
        | Command::SlEq { common, .. } => common.pretty,
    };
    match execute(cli.command) {
        Ok(o) => {
            let text = if pretty { o.pretty.trim_end().to_string() } else { o.json.to_string() };
            let _ = writeln!(out, "{}", text);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            EXIT_USAGE
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qcoinv").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sigma_one() {
        let (code, out, _) = call(&["sigma", "--n", "2", "--i", "1"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.trim(),
            r#"{"n":2,"det_power":0,"terms":[{"coeff":[[0,"1"]],"word":[[1,1]]},{"coeff":[[0,"1"]],"word":[[2,2]]}]}"#
        );
    }

    #[test]
    fn sl_eq_det() {
        let (code, out, _) = call(&["sl-eq", "--n", "2", "--lhs", "detq", "--rhs", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"equal":true}"#);
        let (_, out, _) = call(&["sl-eq", "--n", "2", "--lhs", "x[1,1]", "--rhs", "1"]);
        assert_eq!(out.trim(), r#"{"equal":false}"#);
    }

    #[test]
    fn check_relations_exits_zero() {
        let (code, out, _) =
            call(&["check", "--suite", "relations", "--n", "2", "--samples", "50", "--max-degree", "2"]);
        assert_eq!(code, 0, "{}", out);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["sigma", "--n", "2"]).0, 2);
        let (code, out, err) = call(&["normalform", "--n", "2", "--expr", "x[3,1]"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("out of range"), "{}", err);
        assert_eq!(call(&["check", "--suite", "nope"]).0, 2);
        assert_eq!(call(&["det", "--n", "0"]).0, 2);
    }

    #[test]
    fn pretty_and_notation() {
        let (_, s, _) = call(&["det", "--n", "2", "--pretty"]);
        let (_, q, _) = call(&["det", "--n", "2", "--pretty", "--q-power"]);
        assert_ne!(s, q);
        assert!(q.contains('q') && !q.contains('s'), "{}", q);
        let back = parse_expr(s.trim(), 2).unwrap();
        assert_eq!(back, GLElem::det(2));
        assert_eq!(parse_expr(q.trim(), 2).unwrap(), GLElem::det(2));
    }

    #[test]
    fn hilbert_and_coinv() {
        let (code, out, _) = call(&["hilbert", "--n", "2", "--coaction", "beta", "--max-degree", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!([1, 1, 2, 2]));
        let (_, out, _) = call(&["coinv", "--n", "2", "--degree", "1"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["dim"], 1);
    }

    #[test]
    fn coact_and_embed() {
        let (code, out, _) = call(&["coact", "--n", "2", "--coaction", "lambda", "--group", "gl", "--expr", "x[1,2]"]);
        assert_eq!(code, 0);
        let t: json::TensorJson = serde_json::from_str(&out).unwrap();
        assert_eq!(t.terms.len(), 2);
        let (_, out, _) = call(&["embed", "--n", "2", "--expr", "x[1,1] + detq^-1"]);
        let g: json::GradedJson = serde_json::from_str(&out).unwrap();
        assert_eq!(g.components.keys().cloned().collect::<Vec<_>>(), vec!["-2".to_string(), "1".to_string()]);
    }
}
