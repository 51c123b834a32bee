//! Command-line front end.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::control::{optimal_controller, simulate_closed_loop, Disturbance, SimOptions};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::spectral::{self, EIG_TOL};
use crate::statespace::{
    load_system, quadruple_tank, random_gaussian_system, random_relaxation_system, random_symmetric_system, system_matrix, StateSpace,
    TankParams,
};
use crate::symmetrizability::{
    achievable_signatures, certify, necessary_test, symmetrize, NecessaryVerdict, PATTERN_CAP,
};
use crate::symmetry::{check_external_symmetry, check_internal_symmetry, SignatureMatrix, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_STRUCTURE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "symmetrize", version, about = "Symmetry and symmetrizability of square LTI systems")]
pub struct Cli {
    /// Relative tolerance for symmetry checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report symmetry, the rank test and achievable signatures.
    Analyze(Input),
    /// Compute a certificate and the transformed symmetric system.
    Symmetrize {
        #[command(flatten)]
        input: Input,
        /// Required system signature i(Sigma).
        #[arg(long, allow_hyphen_values = true)]
        signature: Option<i64>,
        /// Require a positive definite certificate.
        #[arg(long)]
        complete: bool,
    },
    /// List achievable system signatures.
    Signatures {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = PATTERN_CAP)]
        cap: usize,
    },
    /// Closed-form output-feedback controller for relaxation systems.
    Controller {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Also simulate a unit pulse disturbance and write the CSV trajectory here.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
    },
    /// Generate a quadruple-tank system.
    Tank {
        /// Time constants T1..T4.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 10.0, 5.0, 5.0])]
        time_consts: Vec<f64>,
        /// Valve splits; drawn from the seed when omitted.
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<f64>>,
        /// Full parameter set as JSON (overrides the other flags).
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a random minimal system.
    Random {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::Generic)]
        kind: Kind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// I.i.d. Gaussian entries (generically not symmetrizable).
    Generic,
    /// Completely symmetric system matrix.
    Symmetric,
    /// Relaxation system: completely symmetric with `A < 0`, `D >= 0`.
    Relaxation,
}

#[derive(Debug, Args)]
pub struct Input {
    /// System JSON file with keys n, m, A, B, C, D.
    pub input: PathBuf,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Defective { .. } | Error::WrongStructure(_) => EXIT_STRUCTURE,
        Error::Parse(_)
        | Error::Dimension(_)
        | Error::Value(_)
        | Error::Io(_)
        | Error::NotMinimal(_)
        | Error::PreconditionFailed(_)
        | Error::PatternLimitExceeded { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn read_system(path: &Path) -> Result<StateSpace> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_system(&text)
}

fn fmt_set(s: &BTreeSet<i64>) -> String {
    let items: Vec<String> = s.iter().map(i64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn fmt_signs(s: &SignatureMatrix) -> String {
    let items: Vec<String> = s.diag().iter().map(|v| if *v > 0 { "+1" } else { "-1" }.to_string()).collect();
    format!("[{}]", items.join(" "))
}

fn fmt_matrix(name: &str, m: &Mat) -> String {
    let mut out = format!("{name} =\n");
    for r in m.row_iter() {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:>12.6}")).collect();
        out.push_str(&format!("  {}\n", cells.join(" ")));
    }
    out
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("library JSON is valid")
}

fn analyze(ss: &StateSpace, tol: f64, format: Format) -> Result<String> {
    let p = system_matrix(ss);
    let external = match check_external_symmetry(ss, tol) {
        Ok(s) => Some(s),
        Err(Error::NotSymmetric(_)) => None,
        Err(e) => return Err(e),
    };
    let internal = match check_internal_symmetry(&p, tol) {
        Ok(s) => Some(s),
        Err(Error::NotSymmetric(_)) => None,
        Err(e) => return Err(e),
    };
    let es = spectral::eig_structure(&p, EIG_TOL)?;
    let rep = necessary_test(&p)?;
    let real_distinct = es.is_distinct_real();
    let signatures = if real_distinct && p.dim() <= PATTERN_CAP && rep.verdict == NecessaryVerdict::MayBeSymmetrizable {
        Some(achievable_signatures(&p, PATTERN_CAP)?)
    } else {
        None
    };
    let symmetrizable = if external.is_some() {
        true
    } else if rep.verdict == NecessaryVerdict::NotSymmetrizable {
        false
    } else if let Some(s) = &signatures {
        !s.is_empty()
    } else {
        match certify(&p, None, false) {
            Ok(_) => true,
            Err(Error::NotSymmetrizable) => false,
            Err(e) => return Err(e),
        }
    };
    let mut summary = vec![
        if external.is_some() { "symmetric" } else { "not symmetric" }.to_string(),
        if symmetrizable { "symmetrizable" } else { "not symmetrizable" }.to_string(),
    ];
    if let Some(s) = &signatures {
        summary.push(format!("signatures {}", fmt_set(s)));
    }
    let summary = summary.join("; ");

    Ok(match format {
        Format::Json => {
            let doc = json!({
                "n": ss.n(),
                "m": ss.m(),
                "externally_symmetric": external.is_some(),
                "sigma_e": external.as_ref().map(|s| s.diag().to_vec()),
                "internally_symmetric": internal.is_some(),
                "sigma": internal.as_ref().map(|s| s.full().diag().to_vec()),
                "distinct_real_eigenvalues": real_distinct,
                "eigenvalue_groups": es.groups.len(),
                "necessary_test": rep,
                "kernel_dim": rep.kernel_dim,
                "symmetrizable": symmetrizable,
                "signatures": signatures,
                "summary": summary,
            });
            serde_json::to_string_pretty(&doc).expect("report serializes")
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("system: n = {}, m = {}\n", ss.n(), ss.m()));
            match &external {
                Some(s) => out.push_str(&format!("external symmetry: symmetric, Sigma_e = {}\n", fmt_signs(s))),
                None => out.push_str("external symmetry: not symmetric\n"),
            }
            match &internal {
                Some(s) => out.push_str(&format!("internal symmetry: symmetric, Sigma = {}\n", fmt_signs(&s.full()))),
                None => out.push_str("internal symmetry: not symmetric\n"),
            }
            out.push_str(&format!(
                "eigenvalues: {} groups{}\n",
                es.groups.len(),
                if real_distinct { ", all real and distinct" } else { "" }
            ));
            let verdict = match rep.verdict {
                NecessaryVerdict::MayBeSymmetrizable => "may be symmetrizable",
                NecessaryVerdict::NotSymmetrizable => "not symmetrizable",
            };
            out.push_str(&format!(
                "rank test: {verdict} (rank {} of {} columns)\n",
                rep.rank, rep.columns
            ));
            out.push_str(&format!("kernel dimension: {}\n", rep.kernel_dim));
            if let Some(s) = &signatures {
                out.push_str(&format!("signatures: {}\n", fmt_set(s)));
            }
            out.push_str(&format!("{summary}\n"));
            out
        }
    })
}

fn execute(cli: &Cli) -> Result<String> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Error::Value(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Analyze(input) => analyze(&read_system(&input.input)?, cli.tol, cli.format),
        Command::Symmetrize {
            input,
            signature,
            complete,
        } => {
            let ss = read_system(&input.input)?;
            let (out, cert) = match symmetrize(&ss, *signature, *complete) {
                Ok(r) => r,
                Err(Error::NotSymmetrizable) => {
                    return Ok(match cli.format {
                        Format::Json => json!({ "symmetrizable": false }).to_string(),
                        Format::Text => "not symmetrizable\n".to_string(),
                    })
                }
                Err(e) => return Err(e),
            };
            Ok(match cli.format {
                Format::Json => {
                    let doc = json!({
                        "certificate": parse_json(&cert.to_json()),
                        "system": parse_json(&out.to_json()),
                    });
                    serde_json::to_string_pretty(&doc).expect("output serializes")
                }
                Format::Text => {
                    let mut s = String::new();
                    s.push_str(&format!("signature: {}\n", cert.signature));
                    s.push_str(&format!("Sigma_i = {}\n", fmt_signs(&cert.sigma_i)));
                    s.push_str(&format!("Sigma_e = {}\n", fmt_signs(&cert.sigma_e)));
                    s.push_str(&fmt_matrix("K", &cert.k));
                    s.push_str(&fmt_matrix("T", &cert.t));
                    s.push_str(&format!("max residual: {:.3e}\n", cert.residuals.max()));
                    s.push_str(&out.to_json());
                    s.push('\n');
                    s
                }
            })
        }
        Command::Signatures { input, cap } => {
            let ss = read_system(&input.input)?;
            let set = achievable_signatures(&system_matrix(&ss), *cap)?;
            Ok(match cli.format {
                Format::Json => json!({ "signatures": set }).to_string(),
                Format::Text => format!("{}\n", fmt_set(&set)),
            })
        }
        Command::Controller {
            input,
            alpha,
            trajectory,
            horizon,
        } => {
            let ss = read_system(&input.input)?;
            let res = optimal_controller(&ss, *alpha)?;
            if let Some(path) = trajectory {
                let w = Disturbance::Pulse {
                    amplitude: DVector::from_element(ss.n(), 1.0),
                    width: 1.0,
                };
                let opts = SimOptions {
                    horizon: *horizon,
                    alpha: *alpha,
                    weight: Some(res.r.clone()),
                    ..SimOptions::default()
                };
                let sim = simulate_closed_loop(&ss, &res.gain, &w, &opts)?;
                std::fs::write(path, sim.to_csv())?;
            }
            Ok(match cli.format {
                Format::Json => res.to_json(),
                Format::Text => {
                    let mut s = format!("alpha: {}\n", res.alpha);
                    s.push_str(&fmt_matrix("gain", &res.gain));
                    s.push_str(&fmt_matrix("R", &res.r));
                    s.push_str(&fmt_matrix("S", &res.s));
                    s
                }
            })
        }
        Command::Tank {
            time_consts,
            gamma,
            params,
            seed,
        } => {
            let p = match params {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str::<TankParams>(&text)?
                }
                None => {
                    if time_consts.len() != 4 {
                        return Err(Error::Value("--time-consts needs four values".into()));
                    }
                    if gamma.as_ref().is_some_and(|g| g.len() != 2) {
                        return Err(Error::Value("--gamma needs two values".into()));
                    }
                    let g = match gamma {
                        Some(g) => [g[0], g[1]],
                        None => {
                            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                            [rng.random_range(0.1..0.9), rng.random_range(0.1..0.9)]
                        }
                    };
                    TankParams {
                        area: [1.0; 4],
                        time_const: [time_consts[0], time_consts[1], time_consts[2], time_consts[3]],
                        pump_gain: [1.0, 1.0],
                        sensor_gain: 1.0,
                        valve_split: g,
                    }
                }
            };
            Ok(format!("{}\n", quadruple_tank(&p)?.to_json()))
        }
        Command::Random { n, m, seed, kind } => {
            if *n == 0 || *m == 0 {
                return Err(Error::Dimension("n and m must be at least 1".into()));
            }
            let ss = match kind {
                Kind::Generic => random_gaussian_system(*n, *m, *seed)?,
                Kind::Symmetric => random_symmetric_system(*n, *m, &SignatureMatrix::identity(n + m), *seed)?,
                Kind::Relaxation => random_relaxation_system(*n, *m, *seed)?,
            };
            Ok(format!("{}\n", ss.to_json()))
        }
    }
}

/// Parses `args` and runs the command, returning the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
