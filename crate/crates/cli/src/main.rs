//! Batch front end for the classification library.
//!
//! Exit codes: 0 success, 2 usage error, 3 inadmissible parameters,
//! 4 internal invariant violation.

mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inoue::affine_group::{
    build_generators_type1, build_generators_type2, build_generators_type3, verify_relations,
    AffineError, Cx,
};
use inoue::centralizer::{positive_centralizer_generator, CentralizerError};
use inoue::conjugacy::{similarity_classes_mode, ClassMode, ConjugacyError};
use inoue::cubic::{classify_type1_with_bound, CubicError};
use inoue::exact_arith::{int, QuadElem};
use inoue::intmat::IMat;
use inoue::moduli_core::{admissible_alpha, classify, Kind, ModuliError};
use serde_json::Value;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_INADMISSIBLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Environment variable overriding the default ideal-class norm bound.
const NORM_BOUND_ENV: &str = "INOUE_NORM_BOUND";

#[derive(Parser)]
#[command(
    name = "inoue",
    version,
    about = "Exact classification of the three families of Inoue surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct LatticeArgs {
    /// Trace values (comma-separated for a batch).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    theta: Vec<i64>,
    /// Level values r ≥ 1 (comma-separated for a batch).
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<i64>,
    /// List every orbit's class labels in the text output.
    #[arg(long)]
    list_orbits: bool,
    /// Worker threads for batched (theta, r) pairs; output order is fixed.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the cubic-field family for P(X) = X³ − θ₂X² + θ₁X − 1.
    Type1 {
        #[arg(long, allow_hyphen_values = true)]
        theta2: i64,
        #[arg(long, allow_hyphen_values = true)]
        theta1: i64,
        /// Norm bound for the ideal enumeration (default: derived from the
        /// discriminant, or the INOUE_NORM_BOUND environment variable).
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify the dilation-type lattice family (det N = +1).
    Type2(LatticeArgs),
    /// Classify the reflection-type lattice family (det N = −1).
    Type3(LatticeArgs),
    /// List GL(2,Z)-similarity classes for a trace and determinant.
    Classes {
        #[arg(long, allow_hyphen_values = true)]
        theta: i64,
        #[arg(long, allow_hyphen_values = true)]
        det: i64,
        /// Report proper (SL) classes without the improper merge.
        #[arg(long)]
        sl_only: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Positive-centraliser generator of a hyperbolic 2×2 matrix.
    Centralizer {
        /// Row-major entries n11,n12,n21,n22.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Vec<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a generator set and verify its commutation relations.
    Verify {
        /// Family: 1 (cubic), 2 (dilation) or 3 (reflection).
        #[arg(long)]
        kind: u8,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        /// Compatibility vector p1,p2 (lattice kinds; default 0,0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Option<Vec<i64>>,
        #[arg(long, allow_hyphen_values = true)]
        theta2: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        theta1: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// A diagnosed failure: exit code plus a one-line message.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
    fn inadmissible(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INADMISSIBLE,
            message: message.to_string(),
        }
    }
    fn internal(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.to_string(),
        }
    }
}

impl From<ModuliError> for Failure {
    fn from(e: ModuliError) -> Self {
        match e {
            ModuliError::Inadmissible { .. } | ModuliError::Conjugacy(_) => {
                Failure::inadmissible(e)
            }
            ModuliError::Centralizer(ref c) => Failure {
                code: centralizer_code(c),
                message: e.to_string(),
            },
            // Spectrum/compatibility violations inside the pipeline mean an
            // internal inconsistency, not bad user input.
            _ => Failure::internal(e),
        }
    }
}

fn centralizer_code(e: &CentralizerError) -> u8 {
    match e {
        CentralizerError::RationalSpectrum(_)
        | CentralizerError::NotUnimodular(_)
        | CentralizerError::NotExpanding(..) => EXIT_INADMISSIBLE,
    }
}

impl From<CentralizerError> for Failure {
    fn from(e: CentralizerError) -> Self {
        Failure {
            code: centralizer_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<ConjugacyError> for Failure {
    fn from(e: ConjugacyError) -> Self {
        Failure::inadmissible(e)
    }
}

impl From<CubicError> for Failure {
    fn from(e: CubicError) -> Self {
        Failure::inadmissible(e)
    }
}

impl From<AffineError> for Failure {
    fn from(e: AffineError) -> Self {
        match e {
            AffineError::Moduli(m) => m.into(),
            AffineError::Cubic(c) => c.into(),
            AffineError::DataMismatch(_) => Failure::usage(e.to_string()),
            AffineError::NonIntegralExponent | AffineError::NormalFormMismatch => {
                Failure::internal(e)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Type1 {
            theta2,
            theta1,
            bound,
            format,
        } => {
            let bound = match bound {
                Some(b) => Some(b),
                None => env_norm_bound()?,
            };
            let rpt = classify_type1_with_bound(theta2, theta1, bound)?;
            Ok(match format {
                Format::Text => render::type1_report_text(&rpt),
                Format::Machine => machine(render::type1_report_json(&rpt)),
            })
        }
        Command::Type2(args) => lattice_batch("type2", Kind::Plus, args),
        Command::Type3(args) => lattice_batch("type3", Kind::Minus, args),
        Command::Classes {
            theta,
            det,
            sl_only,
            format,
        } => {
            let mode = if sl_only {
                ClassMode::SlOnly
            } else {
                ClassMode::Gl
            };
            let classes = similarity_classes_mode(theta, det, mode)?;
            Ok(match format {
                Format::Text => render::classes_report_text(theta, det, &classes),
                Format::Machine => machine(render::classes_report_json(theta, det, &classes)),
            })
        }
        Command::Centralizer { matrix, format } => {
            if matrix.len() != 4 {
                return Err(Failure::usage(
                    "--matrix expects exactly four entries n11,n12,n21,n22",
                ));
            }
            let n = IMat::from_i64(2, 2, &matrix);
            let g = positive_centralizer_generator(&n)?;
            Ok(match format {
                Format::Text => render::centralizer_report_text(&n, &g),
                Format::Machine => machine(render::centralizer_report_json(&n, &g)),
            })
        }
        Command::Verify {
            kind,
            theta,
            r,
            p,
            theta2,
            theta1,
            format,
        } => run_verify(kind, theta, r, p, theta2, theta1, format),
    }
}

fn env_norm_bound() -> Result<Option<u64>, Failure> {
    match std::env::var(NORM_BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{NORM_BOUND_ENV} must be a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn machine(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable report");
    s.push('\n');
    s
}

fn lattice_batch(verb: &'static str, kind: Kind, args: LatticeArgs) -> Result<String, Failure> {
    if args.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    for &r in &args.r {
        if r < 1 {
            return Err(Failure::usage(format!("--r must be ≥ 1, got {r}")));
        }
    }
    let pairs: Vec<(i64, i64)> = args
        .theta
        .iter()
        .flat_map(|&t| args.r.iter().map(move |&r| (t, r)))
        .collect();

    // Fan the independent (θ, r) runs out over the worker count; results
    // are stored by input index, so the output order never depends on
    // scheduling.
    let jobs = args.jobs.min(pairs.len().max(1));
    let mut results: Vec<Option<Result<inoue::moduli_core::ClassReport, ModuliError>>> =
        (0..pairs.len()).map(|_| None).collect();
    if jobs <= 1 {
        for (i, &(t, r)) in pairs.iter().enumerate() {
            results[i] = Some(classify(t, r, kind));
        }
    } else {
        let slots: Vec<std::sync::Mutex<Option<_>>> =
            (0..pairs.len()).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for w in 0..jobs {
                let pairs = &pairs;
                let slots = &slots;
                scope.spawn(move || {
                    for i in (w..pairs.len()).step_by(jobs) {
                        let (t, r) = pairs[i];
                        *slots[i].lock().unwrap() = Some(classify(t, r, kind));
                    }
                });
            }
        });
        for (i, slot) in slots.into_iter().enumerate() {
            results[i] = slot.into_inner().unwrap();
        }
    }

    let mut texts = Vec::new();
    let mut docs = Vec::new();
    for res in results.into_iter() {
        let rpt = res.expect("every pair was scheduled")?;
        match args.format {
            Format::Text => texts.push(render::class_report_text(&rpt, args.list_orbits)),
            Format::Machine => docs.push(render::class_report_json(verb, &rpt)),
        }
    }
    Ok(match args.format {
        Format::Text => texts.join("\n"),
        Format::Machine => machine(render::wrap_reports(docs)),
    })
}

fn run_verify(
    kind: u8,
    theta: Option<i64>,
    r: Option<i64>,
    p: Option<Vec<i64>>,
    theta2: Option<i64>,
    theta1: Option<i64>,
    format: Format,
) -> Result<String, Failure> {
    let report = match kind {
        1 => {
            let (t2, t1) = match (theta2, theta1) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Failure::usage(
                        "verify --kind 1 requires --theta2 and --theta1",
                    ))
                }
            };
            let gs = build_generators_type1(t2, t1)?;
            verify_relations(&gs)?
        }
        2 | 3 => {
            let (t, level) = match (theta, r) {
                (Some(t), Some(level)) => (t, level),
                _ => {
                    return Err(Failure::usage(
                        "verify --kind 2|3 requires --theta and --r",
                    ))
                }
            };
            if level < 1 {
                return Err(Failure::usage(format!("--r must be ≥ 1, got {level}")));
            }
            let p_vec = p.unwrap_or_else(|| vec![0, 0]);
            if p_vec.len() != 2 {
                return Err(Failure::usage("--p expects exactly two entries p1,p2"));
            }
            let p_big = [int(p_vec[0]), int(p_vec[1])];
            let mkind = if kind == 2 { Kind::Plus } else { Kind::Minus };
            let n = {
                let classes = similarity_classes_mode(t, mkind.det_i64(), ClassMode::Gl)?;
                classes
                    .first()
                    .ok_or_else(|| {
                        Failure::inadmissible(format!("no similarity class for theta {t}"))
                    })?
                    .representative
                    .clone()
            };
            let gs = if kind == 2 {
                let alpha = admissible_alpha(t, Kind::Plus)?;
                let zero = QuadElem::zero(alpha.alpha.radicand());
                let t_param = Cx::from_real(zero);
                build_generators_type2(&n, level, &p_big, &t_param)?
            } else {
                build_generators_type3(&n, level, &p_big)?
            };
            verify_relations(&gs)?
        }
        other => {
            return Err(Failure::usage(format!(
                "--kind must be 1, 2 or 3, got {other}"
            )))
        }
    };
    let rendered = match format {
        Format::Text => render::verify_report_text(kind, &report),
        Format::Machine => machine(render::verify_report_json(kind, &report)),
    };
    if report.all_ok {
        Ok(rendered)
    } else {
        // The constructed generator sets must satisfy their own defining
        // relations; a failure here is an internal invariant violation.
        print!("{rendered}");
        Err(Failure::internal("relation verification failed"))
    }
}
