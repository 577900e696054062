//! Command-line front end.
//!
//! Exit codes: 0 success or passed check, 1 failed check or no witness,
//! 2 usage, parse or input error.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::blocks::{
    classify_unitary_params, family_solution, general_solution, param_constraint_residuals, Family, FamilyParams,
    GeneralParams,
};
use crate::braid::{BraidRep, BraidWord, StateVector};
use crate::equivalence::{find_equivalence, ConjugationSearch, ConjugatorShape};
use crate::error::GybeError;
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::registry::{self, parse_complex};
use crate::search::{solve_pattern, Parameterization, SearchConfig, ZeroPattern};
use crate::yang_baxter::{check_gybe, GybeSignature, RMatrix};

#[derive(Parser, Debug)]
#[command(name = "gybe", version, about = "Generalized Yang-Baxter equation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the gYBE residual of a solution or matrix.
    Verify {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Build a member of one of the three families.
    Family {
        #[arg(long)]
        family: u8,
        /// Angle in radians, in [0, pi].
        #[arg(long, conflicts_with_all = ["alpha", "beta"])]
        theta: Option<f64>,
        #[arg(long, requires = "beta", allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, requires = "alpha", allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify (omega, gamma, delta) into category A, B, C or none.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a gauge sequence mapping one solution onto another.
    Equiv {
        #[command(flatten)]
        input: MatrixInput,
        /// Registry id of the target.
        #[arg(long)]
        target: String,
        /// Comma-separated conjugator shapes (diagonal, antidiagonal, general).
        #[arg(long, default_value = "diagonal,antidiagonal,general")]
        shapes: String,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a braid word in the representation of a solution.
    Braid {
        #[command(flatten)]
        input: MatrixInput,
        /// Braid word such as "n=3: 1,2,-1".
        #[arg(long)]
        word: String,
        /// Second word; prints the largest entry difference of the two images.
        #[arg(long, conflicts_with = "state")]
        compare: Option<String>,
        /// State vector (column matrix JSON) to apply the word to.
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Search for unitary solutions with a given zero pattern.
    Search {
        /// Pattern file (0/1 grid or JSON), `-` for stdin, or `rowell`.
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value = "2,3,1")]
        signature: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
        /// Optimize phases of fixed-modulus entries instead of free entries.
        #[arg(long)]
        unit_modulus: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the named solutions.
    Registry {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Registry id, e.g. rowell or family1:theta=1.5707963267948966.
    #[arg(long, conflicts_with = "matrix")]
    solution: Option<String>,
    /// Matrix JSON file, or `-` for stdin.
    #[arg(long)]
    matrix: Option<String>,
    /// Signature d,m,l for --matrix input.
    #[arg(long)]
    signature: Option<String>,
}

/// A command that could not run; reported on stderr with exit code 2.
enum Failure {
    Usage(String),
}

impl From<GybeError> for Failure {
    fn from(e: GybeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_source(&mut self, path: &str) -> std::result::Result<String, Failure> {
        let mut text = String::new();
        if path == "-" {
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?;
        }
        Ok(text)
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> std::result::Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(self.out, "{text}").map_err(|e| Failure::Usage(e.to_string()))
    }

    fn line(&mut self, text: &str) -> std::result::Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| Failure::Usage(e.to_string()))
    }
}

/// `(2,3,1)` for 8x8 and the ordinary `(2,2,1)` YBE for 4x4; other sizes need
/// an explicit signature.
fn default_signature(size: usize) -> Option<GybeSignature> {
    match size {
        4 => Some(GybeSignature::ybe(2)),
        8 => GybeSignature::new(2, 3, 1).ok(),
        _ => None,
    }
}

fn load_r(io: &mut Io<'_>, input: &MatrixInput) -> std::result::Result<RMatrix, Failure> {
    let explicit = input
        .signature
        .as_deref()
        .map(str::parse::<GybeSignature>)
        .transpose()?;
    match (&input.solution, &input.matrix) {
        (Some(id), None) => {
            let r = registry::resolve(id)?;
            match explicit {
                Some(sig) if sig != r.signature => Err(Failure::Usage(format!(
                    "solution {id} has signature {}, not {sig}",
                    r.signature
                ))),
                _ => Ok(r),
            }
        }
        (None, Some(path)) => {
            let text = io.read_source(path)?;
            // Accept a bare matrix or a full RMatrix object.
            if let Ok(r) = serde_json::from_str::<RMatrix>(&text) {
                let r = RMatrix::new(explicit.unwrap_or(r.signature), r.matrix, r.label)?;
                return Ok(r);
            }
            let m: ComplexMatrix =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("matrix JSON: {e}")))?;
            let sig = explicit.or_else(|| default_signature(m.rows())).ok_or_else(|| {
                Failure::Usage(format!(
                    "--signature is required for a {}x{} matrix",
                    m.rows(),
                    m.cols()
                ))
            })?;
            Ok(RMatrix::new(sig, m, path.clone())?)
        }
        _ => Err(Failure::Usage("give exactly one of --solution or --matrix".into())),
    }
}

fn tolerance(v: f64) -> std::result::Result<Tolerance, Failure> {
    Ok(Tolerance::new(v)?)
}

fn parse_shapes(text: &str) -> std::result::Result<Vec<ConjugatorShape>, Failure> {
    let shapes = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<crate::Result<Vec<_>>>()?;
    if shapes.is_empty() {
        return Err(Failure::Usage("no conjugator shapes given".into()));
    }
    Ok(shapes)
}

fn execute(cmd: Command, io: &mut Io<'_>) -> CmdResult {
    match cmd {
        Command::Verify { input, tol, json } => {
            let r = load_r(io, &input)?;
            let report = check_gybe(&r, tolerance(tol)?)?;
            if json {
                io.emit_json(&report)?;
            } else {
                io.line(&format!(
                    "{} {}: {} (residual {:e}, tol {:e})",
                    r.label,
                    r.signature,
                    if report.passed { "passed" } else { "FAILED" },
                    report.residual,
                    tol
                ))?;
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Family {
            family,
            theta,
            alpha,
            beta,
            json,
        } => {
            let family = Family::from_index(family)?;
            let r = match (theta, alpha, beta) {
                (Some(t), None, None) => family_solution(&FamilyParams::new(family, t)?)?,
                (None, Some(a), Some(b)) => {
                    general_solution(&GeneralParams::new(family, parse_complex(&a)?, parse_complex(&b)?)?)?
                }
                _ => return Err(Failure::Usage("give --theta or both --alpha and --beta".into())),
            };
            if json {
                io.emit_json(&r.matrix)?;
            } else {
                io.line(&r.label)?;
                io.line(&r.matrix.to_string())?;
            }
            Ok(0)
        }
        Command::Classify {
            omega,
            gamma,
            delta,
            json,
        } => {
            let (o, g, d) = (parse_complex(&omega)?, parse_complex(&gamma)?, parse_complex(&delta)?);
            let category = classify_unitary_params(o, g, d);
            if json {
                #[derive(Serialize)]
                struct Out {
                    category: String,
                    residuals: [f64; 10],
                }
                io.emit_json(&Out {
                    category: category.to_string(),
                    residuals: param_constraint_residuals(o, g, d),
                })?;
            } else {
                io.line(&category.to_string())?;
            }
            Ok(0)
        }
        Command::Equiv {
            input,
            target,
            shapes,
            seed,
            json,
        } => {
            let source = load_r(io, &input)?;
            let target = registry::resolve(&target)?;
            let shapes = parse_shapes(&shapes)?;
            let cfg = ConjugationSearch {
                seed,
                ..Default::default()
            };
            match find_equivalence(&source, &target, &shapes, &cfg)? {
                Some(w) => {
                    if json {
                        io.emit_json(&w)?;
                    } else {
                        io.line(&format!("equivalent (residual {:e})", w.residual))?;
                        for op in &w.ops {
                            io.line(&format!("  {}", serde_json::to_string(op).unwrap_or_default()))?;
                        }
                    }
                    Ok(0)
                }
                None => {
                    if json {
                        io.emit_json(&"none")?;
                    } else {
                        io.line("none")?;
                    }
                    Ok(1)
                }
            }
        }
        Command::Braid {
            input,
            word,
            compare,
            state,
            tol,
            json,
        } => {
            let r = load_r(io, &input)?;
            let word: BraidWord = word.parse()?;
            let tol = tolerance(tol)?;
            let rep = BraidRep::build(&r, word.strands(), tol)?;
            let image = rep.evaluate_word(&word)?;
            if let Some(other) = compare {
                let other: BraidWord = other.parse()?;
                let diff = image.max_abs_diff(&rep.evaluate_word(&other)?);
                let equal = tol.accepts(diff);
                if json {
                    #[derive(Serialize)]
                    struct Out {
                        equal: bool,
                        max_abs_diff: f64,
                    }
                    io.emit_json(&Out {
                        equal,
                        max_abs_diff: diff,
                    })?;
                } else {
                    io.line(&format!(
                        "{}: max entry difference {diff:e}",
                        if equal { "equal" } else { "different" }
                    ))?;
                }
                return Ok(if equal { 0 } else { 1 });
            }
            if let Some(path) = state {
                let text = io.read_source(&path)?;
                let s: StateVector =
                    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("state JSON: {e}")))?;
                let out = rep.apply_to_state(&word, &s)?;
                if json {
                    io.emit_json(&out)?;
                } else {
                    io.line(&out.to_matrix().to_string())?;
                }
                return Ok(0);
            }
            if json {
                io.emit_json(&image)?;
            } else {
                io.line(&image.to_string())?;
            }
            Ok(0)
        }
        Command::Search {
            pattern,
            signature,
            restarts,
            seed,
            tol,
            max_iterations,
            unit_modulus,
            json,
        } => {
            let pattern = if pattern == "rowell" {
                ZeroPattern::rowell()
            } else {
                ZeroPattern::parse(&io.read_source(&pattern)?)?
            };
            let sig: GybeSignature = signature.parse()?;
            let cfg = SearchConfig {
                tolerance: tolerance(tol)?,
                restarts,
                seed,
                max_iterations,
                parameterization: if unit_modulus {
                    Parameterization::UnitModulus
                } else {
                    Parameterization::FreeComplex
                },
                initial: None,
            };
            let result = solve_pattern(&pattern, sig, &cfg)?;
            if json {
                io.emit_json(&result)?;
            } else {
                io.line(&format!(
                    "{} certified candidates in {} classes over {} restarts (best objective {:e})",
                    result.candidates,
                    result.class_count(),
                    restarts,
                    result.best_objective
                ))?;
                for s in &result.solutions {
                    io.line(&format!("restart {}: residual {:e}", s.restart, s.residual))?;
                }
            }
            Ok(if result.solutions.is_empty() { 1 } else { 0 })
        }
        Command::Registry { json } => {
            let entries = registry::list();
            if json {
                io.emit_json(&entries)?;
            } else {
                for e in entries {
                    io.line(&format!("{:<8} {}  {}", e.id, e.signature, e.description))?;
                }
                io.line("family<k>:theta=<rad>  family<k>:alpha=<re>,<im>:beta=<re>,<im>")?;
            }
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(err, "{}", first.trim());
            return 2;
        }
    };
    let mut io = Io { stdin, out };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            2
        }
    }
}
