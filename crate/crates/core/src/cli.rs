//! The `zxw` command line.
//!
//! Exit codes: 0 success, 1 diagrams differ (or a check failed), 2 parse
//! or usage error, 3 validation error, 4 signature mismatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diagram::{Diagram, Dim};
use crate::error::DiagramError;
use crate::gallery::gallery;
use crate::interpret::eval;
use crate::io::{from_json, to_dot, to_json};
use crate::normal_form::normalize;
use crate::rewrite::{check_corrupted_fuse_z, check_rule_soundness, prove_equal, simplify, RuleId, UNMECHANIZED};
use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Ok = 0,
    Unequal = 1,
    Parse = 2,
    Validation = 3,
    Signature = 4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "zxw", version, about = "Build, evaluate, rewrite and compare mixed-dimensional ZXW diagrams")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Args)]
struct Options {
    /// Absolute tolerance for numerical comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per rule for verify-rules.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Comma-separated wire dimensions for verify-rules.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    /// Write the main result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also write a Graphviz rendering of the resulting diagram.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a diagram to its tensor.
    Eval { path: PathBuf },
    /// Decide whether two diagrams denote the same map.
    Equal { left: PathBuf, right: PathBuf },
    /// Print the normal form of a diagram.
    Normalize { path: PathBuf },
    /// Rewrite a diagram to a fixpoint and print the trace.
    Simplify { path: PathBuf },
    /// Check every mechanized rule numerically on random instances.
    VerifyRules {
        /// Also run the corrupted fusion rule, which is expected to fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Write a gallery diagram and compare it with its oracle.
    Gallery {
        /// qft, cnot, symmetrizer or triangle.
        name: String,
        /// Qubit count (qft, symmetrizer) or qudit dimension (cnot, triangle).
        #[arg(long, visible_alias = "d", visible_alias = "n", default_value_t = 2)]
        param: usize,
    },
}

struct Failure {
    code: ExitCode,
    message: String,
}

impl Failure {
    fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let code = match e {
            DiagramError::ArityMismatch { .. } | DiagramError::SignatureMismatch { .. } => ExitCode::Signature,
            _ => ExitCode::Validation,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

/// Runs the command line `args` (including the program name), writing to
/// `out` and `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    ExitCode::Ok as i32
                }
                _ => {
                    let _ = write!(err, "{text}");
                    ExitCode::Parse as i32
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code as i32,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code as i32
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let o = &cli.opts;
    match &cli.command {
        Command::Eval { path } => cmd_eval(path, o, out),
        Command::Equal { left, right } => cmd_equal(left, right, o, out),
        Command::Normalize { path } => cmd_normalize(path, o, out),
        Command::Simplify { path } => cmd_simplify(path, o, out, err),
        Command::VerifyRules { negative_control } => cmd_verify_rules(o, *negative_control, out),
        Command::Gallery { name, param } => cmd_gallery(name, *param, o, out, err),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(ExitCode::Parse, format!("{}: {e}", path.display()))
}

/// Reads and validates a document.
fn load(path: &Path) -> Result<Diagram, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let d = from_json(&text).map_err(|e| Failure::new(ExitCode::Parse, format!("{}: {e}", path.display())))?;
    if let Err(vs) = d.validate() {
        let lines: Vec<String> = vs.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::new(
            ExitCode::Validation,
            format!("{}: invalid diagram\n{}", path.display(), lines.join("\n")),
        ));
    }
    Ok(d)
}

/// Writes `text` to `--output` if given, else to `out`.
fn emit(o: &Options, out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &o.output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(ExitCode::Parse, e.to_string())),
    }
}

fn write_dot(o: &Options, d: &Diagram) -> Result<(), Failure> {
    match &o.dot {
        Some(p) => fs::write(p, to_dot(d)).map_err(|e| io_failure(p, e)),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct TensorDoc<'a> {
    out_dims: &'a [usize],
    in_dims: &'a [usize],
    data: Vec<[f64; 2]>,
}

/// Dimensions header plus one row-major entry per line, 17 significant
/// digits.
pub fn format_tensor(t: &Tensor, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = TensorDoc {
                out_dims: t.out_dims(),
                in_dims: t.in_dims(),
                data: t.data().iter().map(|c| [c.re, c.im]).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("tensors serialize") + "\n"
        }
        Format::Text => {
            let mut s = format!("out_dims: {:?}\nin_dims: {:?}\n", t.out_dims(), t.in_dims());
            for c in t.data() {
                s.push_str(&format!("{:.16e} {:.16e}\n", c.re, c.im));
            }
            s
        }
    }
}

fn cmd_eval(path: &Path, o: &Options, out: &mut dyn Write) -> Outcome {
    let d = load(path)?;
    write_dot(o, &d)?;
    let t = eval(&d)?;
    emit(o, out, &format_tensor(&t, o.format))?;
    Ok(ExitCode::Ok)
}

fn cmd_equal(left: &Path, right: &Path, o: &Options, out: &mut dyn Write) -> Outcome {
    let (a, b) = (load(left)?, load(right)?);
    let verdict = prove_equal(&a, &b, o.tol)?;
    emit(o, out, &format!("{verdict}\n"))?;
    Ok(if verdict.equal { ExitCode::Ok } else { ExitCode::Unequal })
}

fn cmd_normalize(path: &Path, o: &Options, out: &mut dyn Write) -> Outcome {
    let d = load(path)?;
    write_dot(o, &d)?;
    let nf = normalize(&d)?;
    let text = match o.format {
        Format::Text => format!("{nf}\n"),
        Format::Json => {
            let dims: Vec<usize> = nf.out_dims().iter().map(|d| d.get()).collect();
            let coeffs: Vec<[f64; 2]> = nf.coeffs().iter().map(|c| [c.re, c.im]).collect();
            serde_json::json!({ "dims": dims, "coeffs": coeffs }).to_string() + "\n"
        }
    };
    emit(o, out, &text)?;
    Ok(ExitCode::Ok)
}

/// The document goes to `--output` (trace on standard output) or, without
/// it, to standard output (trace on standard error).
fn cmd_simplify(path: &Path, o: &Options, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let d = load(path)?;
    let (s, trace) = simplify(&d)?;
    write_dot(o, &s)?;
    emit(o, out, &(to_json(&s) + "\n"))?;
    let listing = format!("{} rewrites\n{trace}", trace.len());
    let sink: &mut dyn Write = if o.output.is_some() { out } else { err };
    sink.write_all(listing.as_bytes())
        .map_err(|e| Failure::new(ExitCode::Parse, e.to_string()))?;
    Ok(ExitCode::Ok)
}

fn cmd_verify_rules(o: &Options, negative_control: bool, out: &mut dyn Write) -> Outcome {
    let dims = o
        .dims
        .iter()
        .map(|&d| Dim::new(d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new(ExitCode::Parse, format!("--dims: {e}")))?;
    if dims.is_empty() || o.samples == 0 {
        return Err(Failure::new(ExitCode::Parse, "--dims and --samples must be nonempty"));
    }
    let mut text = format!("{:<28} {:>7} {:>7} {:>7}  {:>12}  result\n", "rule", "samples", "passed", "failed", "max dev");
    let mut all_ok = true;
    for rule in RuleId::ALL {
        let r = check_rule_soundness(rule, &dims, o.samples, o.seed);
        all_ok &= r.all_passed();
        text += &format!(
            "{:<28} {:>7} {:>7} {:>7}  {:>12.3e}  {}\n",
            r.rule,
            r.samples,
            r.passed,
            r.failed,
            r.max_deviation,
            if r.all_passed() { "pass" } else { "FAIL" }
        );
    }
    if negative_control {
        let r = check_corrupted_fuse_z(&dims, o.samples, o.seed);
        all_ok &= r.failed > 0;
        text += &format!(
            "{:<28} {:>7} {:>7} {:>7}  {:>12.3e}  {}\n",
            r.rule,
            r.samples,
            r.passed,
            r.failed,
            r.max_deviation,
            if r.failed > 0 { "rejected (expected)" } else { "NOT REJECTED" }
        );
    }
    for name in UNMECHANIZED {
        text += &format!("{name:<28} {:>7} {:>7} {:>7}  {:>12}  not mechanized\n", "-", "-", "-", "-");
    }
    emit(o, out, &text)?;
    Ok(if all_ok { ExitCode::Ok } else { ExitCode::Unequal })
}

/// The document goes to `--output` (comparison on standard output) or, without
/// it, to standard output (comparison on standard error).
fn cmd_gallery(name: &str, param: usize, o: &Options, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let entry = gallery(name, param).map_err(|e| Failure::new(ExitCode::Parse, e.to_string()))?;
    write_dot(o, &entry.diagram)?;
    emit(o, out, &(to_json(&entry.diagram) + "\n"))?;
    let check = entry.check(o.tol);
    let sink: &mut dyn Write = if o.output.is_some() { out } else { err };
    writeln!(sink, "{}: {check}", entry.name).map_err(|e| Failure::new(ExitCode::Parse, e.to_string()))?;
    Ok(if check.passed { ExitCode::Ok } else { ExitCode::Unequal })
}
