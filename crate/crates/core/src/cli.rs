//! Command-line front end. [`run`] parses arguments, performs one analysis and renders a JSON
//! report `{command, version, config, result, diagnostics}`; the `nccurv` binary only prints
//! what it returns.
//!
//! Exit codes: `0` success, `2` input error, `3` computation failure (including a relaxed
//! search that does not match).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::calculus::{directional_derivative, hessian, mixed_hessian};
use crate::curvature::{
    c_pm, direct_sum, positivity_membership, relaxed_signature, subspace_decomposition, SearchConfig,
};
use crate::error::NcError;
use crate::freealg::{NcPoly, ParseOptions};
use crate::mateval::{file_matrices, MatrixPoint, PointFile};
use crate::middlematrix::{
    classify_convexity, degree_bound_report, extract_middle, hessian_middle, scalar_middle,
    sds_certificate, SdsOutcome,
};
use crate::variety::{
    chsy_codim, minimal_annihilator, variety_signature, word_independence, SignatureMode,
    VarietyConfig,
};
use crate::{ORDERING_TAG, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nccurv", version, about = "Curvature signatures of non-commutative polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Number of variables.
    #[arg(short = 'g', default_value_t = 1)]
    g: usize,
    /// Polynomial expression, or @file to read it from a file.
    #[arg(short = 'p', long = "poly", allow_hyphen_values = true)]
    poly: Option<String>,
    /// Point file (JSON); repeat for commands taking several points.
    #[arg(long)]
    point: Vec<PathBuf>,
    /// Relative zero threshold for eigenvalues and ranks.
    #[arg(long, default_value_t = crate::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample budget for sampling commands.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Worker threads for sampling commands.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Indented JSON on stdout and a summary table on stderr.
    #[arg(long)]
    pretty: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Scalar,
    Ceiling,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print a polynomial in canonical form.
    Parse(Common),
    /// Directional derivative of a given order.
    Diff {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Hessian and mixed Hessian.
    Hessian(Common),
    /// Middle matrix of the Hessian (or of an h-quadratic given with --quadratic).
    MiddleMatrix {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        quadratic: bool,
    },
    /// Inertia of the scalar middle matrix and the degree bound.
    Signature(Common),
    /// Sum and difference of squares certificate for the Hessian.
    Sds(Common),
    /// Convex, concave or indefinite.
    Convexity(Common),
    /// Signature of the clamped second fundamental form at a point.
    Curvature(Common),
    /// Relaxed Hessian signature search at a point.
    Relaxed {
        #[command(flatten)]
        common: Common,
        /// Search δ < 0, λ < 0 and match the positive count.
        #[arg(long)]
        negative: bool,
    },
    /// Subspace decomposition used to compare the relaxed and clamped forms.
    Decompose(Common),
    /// Direct sum of the given points, each repeated --copies times.
    DirectSum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Linear independence of w(X)v over words of length at most --max-len.
    Independence {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: usize,
    },
    /// Minimal-degree polynomial annihilating all given points.
    Annihilator {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_degree: usize,
    },
    /// Codimension of border-vector ranges.
    Chsy {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 's')]
        s: usize,
    },
    /// Signature of the curvature of the variety.
    VarietySignature {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "scalar")]
        mode: ModeArg,
    },
    /// Position of X relative to the positivity domain of p.
    Membership {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Computation(String),
}

impl From<NcError> for Failure {
    fn from(e: NcError) -> Self {
        match e {
            NcError::Numerical(_) | NcError::Contract(_) => Failure::Computation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Result of a command: the JSON result, diagnostics, and whether it counts as a failure.
struct Outcome {
    result: Value,
    diagnostics: Vec<String>,
    failed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            diagnostics: Vec::new(),
            failed: false,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse(_) => "parse",
        Command::Diff { .. } => "diff",
        Command::Hessian(_) => "hessian",
        Command::MiddleMatrix { .. } => "middle-matrix",
        Command::Signature(_) => "signature",
        Command::Sds(_) => "sds",
        Command::Convexity(_) => "convexity",
        Command::Curvature(_) => "curvature",
        Command::Relaxed { .. } => "relaxed",
        Command::Decompose(_) => "decompose",
        Command::DirectSum { .. } => "direct-sum",
        Command::Independence { .. } => "independence",
        Command::Annihilator { .. } => "annihilator",
        Command::Chsy { .. } => "chsy",
        Command::VarietySignature { .. } => "variety-signature",
        Command::Membership { .. } => "membership",
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Parse(c)
        | Command::Hessian(c)
        | Command::Signature(c)
        | Command::Sds(c)
        | Command::Convexity(c)
        | Command::Curvature(c)
        | Command::Decompose(c) => c,
        Command::Diff { common, .. }
        | Command::MiddleMatrix { common, .. }
        | Command::Relaxed { common, .. }
        | Command::DirectSum { common, .. }
        | Command::Independence { common, .. }
        | Command::Annihilator { common, .. }
        | Command::Chsy { common, .. }
        | Command::VarietySignature { common, .. }
        | Command::Membership { common, .. } => common,
    }
}

fn config_json(cmd: &Command) -> Value {
    let c = common(cmd);
    let mut cfg = json!({
        "g": c.g,
        "tol": c.tol,
        "seed": c.seed,
        "samples": c.samples,
        "workers": c.workers,
        "ordering": ORDERING_TAG,
    });
    if let Command::VarietySignature { mode, .. } = cmd {
        cfg["mode"] = json!(mode_name(*mode));
    }
    if let Command::Relaxed { negative, .. } = cmd {
        let grid = SearchConfig::default();
        cfg["delta_grid"] = json!(grid.deltas);
        cfg["lambda_grid"] = json!(grid.lambdas);
        cfg["negative"] = json!(negative);
    }
    cfg
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Scalar => "scalar-middle",
        ModeArg::Ceiling => "ceiling-at-point",
        ModeArg::Sampled => "sampled",
    }
}

fn read_text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn poly_with(c: &Common, opts: ParseOptions) -> Result<NcPoly, Failure> {
    let text = c
        .poly
        .as_deref()
        .ok_or_else(|| Failure::Input("missing polynomial (-p)".into()))?;
    Ok(NcPoly::parse_with(&read_text(text)?, c.g, opts)?)
}

fn poly(c: &Common) -> Result<NcPoly, Failure> {
    poly_with(c, ParseOptions::X_ONLY)
}

fn read_point_file(path: &Path) -> Result<PointFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn points(c: &Common) -> Result<Vec<MatrixPoint>, Failure> {
    if c.point.is_empty() {
        return Err(Failure::Input("missing --point".into()));
    }
    c.point
        .iter()
        .map(|p| Ok(MatrixPoint::from_file(&read_point_file(p)?)?))
        .collect()
}

fn single_point(c: &Common) -> Result<MatrixPoint, Failure> {
    let mut pts = points(c)?;
    if pts.len() != 1 {
        return Err(Failure::Input("expected exactly one --point".into()));
    }
    Ok(pts.remove(0))
}

fn check_g(p: &NcPoly, pt: &MatrixPoint) -> Result<(), Failure> {
    if p.g() != pt.g() {
        return Err(NcError::MismatchedG(p.g(), pt.g()).into());
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Value {
    json!((0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect::<Vec<f64>>())
        .collect::<Vec<_>>())
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    let c = common(cmd);
    if !(c.tol >= 0.0) {
        return Err(Failure::Input(format!("--tol must be nonnegative, got {}", c.tol)));
    }
    match cmd {
        Command::Parse(c) => {
            let p = poly(c)?;
            Ok(Outcome::ok(json!({
                "poly": p.to_string(),
                "terms": p.num_terms(),
                "profile": to_value(&p.degree_profile()),
            })))
        }
        Command::Diff { common: c, order } => {
            let p = poly(c)?;
            let d = directional_derivative(&p, *order)?;
            Ok(Outcome::ok(json!({"order": order, "derivative": d.to_string()})))
        }
        Command::Hessian(c) => {
            let p = poly(c)?;
            Ok(Outcome::ok(json!({
                "hessian": hessian(&p).to_string(),
                "mixed_hessian": mixed_hessian(&p).to_string(),
            })))
        }
        Command::MiddleMatrix { common: c, quadratic } => {
            let z = if *quadratic {
                extract_middle(&poly_with(c, ParseOptions::WITH_H)?)?
            } else {
                hessian_middle(&poly(c)?)?
            };
            let s = scalar_middle(&z, c.tol)?;
            Ok(Outcome::ok(json!({
                "middle": to_value(&z.to_json()),
                "scalar": matrix_rows(s.matrix.as_matrix()),
                "inertia": to_value(&s.inertia),
                "constant": z.is_constant(),
            })))
        }
        Command::Signature(c) => {
            let p = poly(c)?;
            let b = degree_bound_report(&p, c.tol)?;
            Ok(Outcome::ok(json!({
                "d": b.d,
                "mu_minus": b.mu_minus,
                "mu_plus": b.mu_plus,
                "bound_minus": b.bound_minus,
                "bound_plus": b.bound_plus,
                "bound_holds": b.holds,
            })))
        }
        Command::Sds(c) => {
            let p = poly(c)?;
            Ok(match sds_certificate(&p, c.tol)? {
                SdsOutcome::Certificate(cert) => Outcome::ok(json!({
                    "supported": true,
                    "sigma_minus": cert.minus_terms.len(),
                    "sigma_plus": cert.plus_terms.len(),
                    "plus_terms": cert.plus_terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "minus_terms": cert.minus_terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "residual": cert.residual,
                })),
                SdsOutcome::Unsupported { sigma_minus, sigma_plus } => Outcome {
                    result: json!({
                        "supported": false,
                        "sigma_minus": sigma_minus,
                        "sigma_plus": sigma_plus,
                    }),
                    diagnostics: vec![
                        "middle matrix is not constant; only the minimal counts are reported".into(),
                    ],
                    failed: false,
                },
            })
        }
        Command::Convexity(c) => Ok(Outcome::ok(to_value(&classify_convexity(&poly(c)?, c.tol)?))),
        Command::Curvature(c) => {
            let p = poly(c)?;
            let pt = single_point(c)?;
            check_g(&p, &pt)?;
            Ok(Outcome::ok(to_value(&c_pm(&p, &pt, c.tol)?)))
        }
        Command::Relaxed { common: c, negative } => {
            let p = poly(c)?;
            let pt = single_point(c)?;
            check_g(&p, &pt)?;
            let cfg = SearchConfig {
                negative: *negative,
                tol: c.tol,
                ..SearchConfig::default()
            };
            let r = relaxed_signature(&p, &pt, &cfg)?;
            Ok(Outcome {
                failed: !r.matched,
                diagnostics: r.diagnostics.clone(),
                result: to_value(&r),
            })
        }
        Command::Decompose(c) => {
            let p = poly(c)?;
            let pt = single_point(c)?;
            check_g(&p, &pt)?;
            Ok(Outcome::ok(to_value(&subspace_decomposition(&p, &pt, c.tol)?.report())))
        }
        Command::DirectSum { common: c, copies } => {
            if *copies == 0 {
                return Err(Failure::Input("--copies must be at least 1".into()));
            }
            let pts = points(c)?;
            let all: Vec<MatrixPoint> = pts.iter().flat_map(|p| std::iter::repeat_n(p.clone(), *copies)).collect();
            let sum = direct_sum(&all)?;
            let mut result = json!({"point": to_value(&sum.to_file())});
            if c.poly.is_some() {
                let p = poly(c)?;
                check_g(&p, &sum)?;
                result["curvature"] = to_value(&c_pm(&p, &sum, c.tol)?);
            }
            Ok(Outcome::ok(result))
        }
        Command::Independence { common: c, max_len } => {
            let pt = single_point(c)?;
            Ok(Outcome::ok(to_value(&word_independence(&pt, *max_len, c.tol))))
        }
        Command::Annihilator { common: c, max_degree } => {
            let pts = points(c)?;
            Ok(Outcome::ok(match minimal_annihilator(&pts, *max_degree, c.tol)? {
                Some(a) => json!({
                    "found": true,
                    "degree": a.degree,
                    "poly": a.poly.to_string(),
                    "residual": a.residual,
                }),
                None => json!({"found": false}),
            }))
        }
        Command::Chsy { common: c, n, r, s } => {
            let pt = match c.point.len() {
                0 => None,
                _ => Some(single_point(c)?),
            };
            Ok(Outcome::ok(to_value(&chsy_codim(c.g, *n, *r, *s, pt.as_ref(), c.tol)?)))
        }
        Command::VarietySignature { common: c, mode } => {
            let p = poly(c)?;
            let point = match c.point.len() {
                0 => None,
                _ => Some(single_point(c)?),
            };
            let cfg = VarietyConfig {
                mode: match mode {
                    ModeArg::Scalar => SignatureMode::ScalarMiddle,
                    ModeArg::Ceiling => SignatureMode::CeilingAtPoint,
                    ModeArg::Sampled => SignatureMode::Sampled,
                },
                seed: c.seed,
                samples: c.samples,
                dims: Vec::new(),
                workers: c.workers,
                tol: c.tol,
                point,
            };
            let r = variety_signature(&p, &cfg)?;
            Ok(Outcome {
                diagnostics: r.diagnostics.clone(),
                result: to_value(&r),
                failed: false,
            })
        }
        Command::Membership { common: c, steps } => {
            let p = poly(c)?;
            let path = c
                .point
                .first()
                .ok_or_else(|| Failure::Input("missing --point".into()))?;
            let x = file_matrices(&read_point_file(path)?)?;
            if x.len() != p.g() {
                return Err(NcError::MismatchedG(p.g(), x.len()).into());
            }
            Ok(Outcome::ok(to_value(&positivity_membership(&p, &x, *steps, c.tol)?)))
        }
    }
}

fn summary_table(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
        for (k, val) in map {
            let shown = match val {
                Value::Array(_) | Value::Object(_) => "…".to_string(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<width$}  {shown}\n"));
        }
    }
    out
}

fn render(report: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string(report)
    }
    .expect("json");
    s.push('\n');
    s
}

/// Runs one command line (including the program name) and returns the rendered output.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let cmd = &cli.command;
    let pretty = common(cmd).pretty;
    let (code, result, diagnostics) = match execute(cmd) {
        Ok(o) => (if o.failed { EXIT_FAILURE } else { EXIT_OK }, o.result, o.diagnostics),
        Err(Failure::Input(m)) => (EXIT_INPUT, Value::Null, vec![m]),
        Err(Failure::Computation(m)) => (EXIT_FAILURE, Value::Null, vec![m]),
    };
    let report = json!({
        "command": command_name(cmd),
        "version": VERSION,
        "config": config_json(cmd),
        "result": result,
        "diagnostics": diagnostics,
    });
    CliOutput {
        code,
        stdout: render(&report, pretty),
        stderr: if pretty { summary_table(&report["result"]) } else { String::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, Value) {
        let out = run(std::iter::once("nccurv").chain(args.iter().copied()));
        let v = if out.stdout.is_empty() {
            Value::Null
        } else {
            serde_json::from_str(&out.stdout).unwrap()
        };
        (out.code, v)
    }

    #[test]
    fn signature_of_cube() {
        let (code, v) = go(&["signature", "-g", "1", "-p", "x1^3"]);
        assert_eq!(code, 0);
        let r = &v["result"];
        assert_eq!(r["d"], 3);
        assert_eq!(r["mu_minus"], 1);
        assert_eq!(r["mu_plus"], 1);
        assert_eq!(r["bound_holds"], true);
        assert_eq!(v["command"], "signature");
        assert_eq!(v["config"]["ordering"], ORDERING_TAG);
    }

    #[test]
    fn input_errors_exit_two() {
        let (code, v) = go(&["parse", "-p", "x1 +"]);
        assert_eq!(code, 2);
        assert!(v["diagnostics"][0].as_str().unwrap().contains("position"));
        let (code, _) = go(&["parse", "--bogus"]);
        assert_eq!(code, 2);
        let (code, _) = go(&["curvature", "-p", "x^3"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn parse_and_diff() {
        let (_, v) = go(&["parse", "-g", "3", "-p", "3*x1*x2^3 + x2 + x3*x1*x2"]);
        assert_eq!(v["result"]["poly"], "x2 + x3*x1*x2 + 3*x1*x2^3");
        let (_, v) = go(&["diff", "-p", "x^4", "--order", "4"]);
        assert_eq!(v["result"]["derivative"], "24*h1^4");
        let (code, _) = go(&["diff", "-p", "x^4", "--order", "0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn sds_unsupported_for_cube() {
        let (code, v) = go(&["sds", "-p", "x^3"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["supported"], false);
        assert_eq!(v["result"]["sigma_minus"], 1);
    }
}
