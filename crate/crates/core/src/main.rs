use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use richelot3::census::{run_census, CensusConfig, SampleKind};
use richelot3::curve::{curve_to_json, parse_curve, CurveModel, HoweSystem};
use richelot3::decompose::{self, DecomposeError};
use richelot3::poly::UniPoly;
use richelot3::zeta::{self, CountError};
use richelot3::Field;

#[derive(Parser)]
#[command(name = "richelot3", version, about = "Split genus-3 Jacobians through involutions, with exact point-count certificates")]
struct Cli {
    /// Worker threads for the parallel scans (0 keeps the default pool).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Indent the JSON output for reading instead of piping.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a curve file and echo the normalized model.
    Validate { file: PathBuf },
    /// Count the rational points over the degree-n extension.
    Count {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Fit the L-polynomial of the curve from exhaustive point counts.
    Lpoly { file: PathBuf },
    /// List the involutions that can split the Jacobian.
    Involutions { file: PathBuf },
    /// Construct the quotient curves under every kept involution.
    Quotients {
        file: PathBuf,
        /// Build conjugate-fixed-point quotients over the quadratic extension.
        #[arg(long)]
        extend: bool,
    },
    /// Run the full decomposition pipeline and certify every identity.
    Decompose {
        file: PathBuf,
        /// Build conjugate-fixed-point quotients over the quadratic extension.
        #[arg(long)]
        extend: bool,
    },
    /// Howe-curve constructions.
    Howe {
        #[command(subcommand)]
        cmd: HoweCmd,
    },
    /// Sample random curves and tally how their Jacobians split.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Build conjugate-fixed-point quotients over the quadratic extension.
        #[arg(long)]
        extend: bool,
    },
}

#[derive(Subcommand)]
enum HoweCmd {
    /// Assemble the double cover of two quartic branch polynomials.
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Coefficients of the first branch polynomial, constant first.
        #[arg(long)]
        f1: String,
        /// Coefficients of the second branch polynomial, constant first.
        #[arg(long)]
        f2: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Octic,
    Quartic,
}

impl From<ModelArg> for SampleKind {
    fn from(m: ModelArg) -> SampleKind {
        match m {
            ModelArg::Octic => SampleKind::Octic,
            ModelArg::Quartic => SampleKind::Quartic,
        }
    }
}

enum Failure {
    Input(String),
    Certificate(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Certificate(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Certificate(m) | Failure::Budget(m) => m,
        }
    }
}

fn classify_count(e: CountError) -> Failure {
    match e {
        CountError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        CountError::UnsupportedGenus(_) => Failure::Input(e.to_string()),
        other => Failure::Certificate(other.to_string()),
    }
}

fn classify(e: DecomposeError) -> Failure {
    if e.is_budget() {
        return Failure::Budget(e.to_string());
    }
    match e {
        DecomposeError::Count(c) => classify_count(c),
        other => Failure::Input(other.to_string()),
    }
}

fn load_model(path: &Path) -> Result<CurveModel, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_curve(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_poly(text: &str, f: &Field) -> Result<UniPoly, Failure> {
    let ints = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("bad coefficient list {text:?}: {e}")))?;
    Ok(UniPoly::from_i64(&ints, f))
}

fn small_field(p: u64, k: usize) -> Result<Field, Failure> {
    Field::new(p, k).map_err(|e| Failure::Input(e.to_string()))
}

fn run(cmd: Cmd) -> Result<(Value, u8), Failure> {
    match cmd {
        Cmd::Validate { file } => {
            let model = load_model(&file)?;
            let v = json!({
                "schema_version": 1,
                "model": model.kind(),
                "genus": model.genus(),
                "curve": curve_to_json(&model),
            });
            Ok((v, 0))
        }
        Cmd::Count { file, n } => {
            let model = load_model(&file)?;
            let count = zeta::count_points(&model, n).map_err(classify_count)?;
            let v = json!({
                "schema_version": 1,
                "curve": curve_to_json(&model),
                "n": n,
                "count": count,
            });
            Ok((v, 0))
        }
        Cmd::Lpoly { file } => {
            let model = load_model(&file)?;
            let l = zeta::l_polynomial(&model).map_err(classify_count)?;
            let v = json!({
                "schema_version": 1,
                "curve": curve_to_json(&model),
                "l_polynomial": decompose::l_json(&l),
            });
            Ok((v, 0))
        }
        Cmd::Involutions { file } => {
            let model = load_model(&file)?;
            let v = decompose::involution_survey(&model).map_err(classify)?;
            Ok((v, 0))
        }
        Cmd::Quotients { file, extend } => {
            let model = load_model(&file)?;
            let v = decompose::quotient_survey(&model, extend).map_err(classify)?;
            Ok((v, 0))
        }
        Cmd::Decompose { file, extend } => {
            let model = load_model(&file)?;
            let report = decompose::analyze(&model, extend).map_err(classify)?;
            let code = if report["certificate_status"] == "failed" { 2 } else { 0 };
            Ok((report, code))
        }
        Cmd::Howe { cmd: HoweCmd::Build { p, k, f1, f2 } } => {
            let f = small_field(p, k)?;
            let f1 = parse_poly(&f1, &f)?;
            let f2 = parse_poly(&f2, &f)?;
            let sys = HoweSystem::new(f, f1, f2).map_err(|e| Failure::Input(e.to_string()))?;
            let model = CurveModel::Howe(sys);
            let v = decompose::quotient_survey(&model, false).map_err(classify)?;
            Ok((v, 0))
        }
        Cmd::Census { p, k, model, samples, seed, extend } => {
            let cfg = CensusConfig {
                field: small_field(p, k)?,
                model: SampleKind::from(model),
                samples,
                seed,
                extend,
            };
            let v = run_census(&cfg).map_err(classify)?;
            let code = if v["certificate_failures"].as_u64().unwrap_or(0) > 0 { 2 } else { 0 };
            Ok((v, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.cmd) {
        Ok((value, code)) => {
            let rendered = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", rendered.expect("reports are valid JSON")) {
                Ok(()) => ExitCode::from(code),
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(code),
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
