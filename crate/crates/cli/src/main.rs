use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use sectpos_cli::{exit, exit_code, parse_operator, CliError, OperatorFile, ReportFile};
use sectpos_core::curvature::{constant_curvature, diagonal, product_spheres, random_symmetric, CurvatureOperator};
use sectpos_core::oracle::{optimize, Mode, OracleOptions, DEFAULT_RESTARTS};
use sectpos_core::pipeline::{analyze_with, AnalyzeOptions};
use sectpos_core::ratpoly::parse_rational;
use sectpos_core::strongpos::{witness_with_tolerance, DEFAULT_TOLERANCE};
use sectpos_core::Exec;

/// Sectional positivity of 4-dimensional curvature operators.
#[derive(Parser, Debug)]
#[command(name = "sectpos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, env = "SECTPOS_SEED", default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide sectional positivity exactly.
    Analyze {
        /// Operator file, or `-` for stdin.
        input: String,
        /// Attach the numeric oracle.
        #[arg(long)]
        oracle: bool,
        /// Attach the strong-positivity witness.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Also analyze R + EPS * D for a seeded random D (heuristic).
        #[arg(long, value_name = "EPS")]
        perturb: Option<String>,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a fixture operator file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Run only the numeric oracle.
    Oracle {
        input: String,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run only the strong-positivity witness.
    Witness {
        input: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// c times the identity.
    Constant { c: String },
    /// Diagonal operator in the basis order e12,e13,e14,e23,e24,e34.
    Diagonal {
        #[arg(num_args = 6, allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Product of two unit 2-spheres.
    ProductSpheres,
    /// Symmetric integer matrix with entries in [-bound, bound].
    Random {
        #[arg(long, env = "SECTPOS_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        bound: i64,
    },
}

fn read_input(input: &str) -> Result<Vec<u8>, CliError> {
    let io = |source| CliError::Io { path: input.to_string(), source };
    if input == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        std::fs::read(input).map_err(io)
    }
}

fn load(input: &str) -> Result<(Vec<u8>, CurvatureOperator), CliError> {
    let bytes = read_input(input)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Usage(format!("input is not UTF-8: {e}")))?;
    let r = parse_operator(&text)?;
    Ok((bytes, r))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exec(common: &Common) -> Exec {
    if common.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Analyze { input, oracle, witness, tolerance, perturb, restarts, common } => {
            let (bytes, r) = load(&input)?;
            let perturb = perturb.as_deref().map(parse_rational).transpose()?;
            let opts = AnalyzeOptions {
                exec: exec(&common),
                oracle,
                witness,
                oracle_options: OracleOptions { restarts, seed: common.seed, ..OracleOptions::default() },
                tolerance,
                perturb,
                seed: common.seed,
            };
            let report = analyze_with(&r, &opts)?;
            let file = ReportFile::new("analyze", &bytes, common.seed).with_analysis(&report);
            emit(&file.to_json(), common.output.as_ref())?;
            Ok(exit_code(report.verdict))
        }
        Command::Gen { kind, output } => {
            let r = match kind {
                GenKind::Constant { c } => constant_curvature(parse_rational(&c)?),
                GenKind::Diagonal { entries } => {
                    let d: Vec<_> = entries.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
                    let d: [_; 6] = d.try_into().map_err(|_| CliError::Usage("diagonal needs 6 entries".into()))?;
                    diagonal(d)
                }
                GenKind::ProductSpheres => product_spheres(),
                GenKind::Random { seed, bound } => {
                    if bound < 0 {
                        return Err(CliError::Usage("bound must be nonnegative".into()));
                    }
                    random_symmetric(seed, bound)
                }
            };
            emit(&OperatorFile::from_operator(&r).to_json(), output.as_ref())?;
            Ok(exit::CERTIFIED_NONNEGATIVE)
        }
        Command::Oracle { input, restarts, common } => {
            let (bytes, r) = load(&input)?;
            let opts = OracleOptions { restarts: restarts.max(1), seed: common.seed, exec: exec(&common), ..OracleOptions::default() };
            let t = Instant::now();
            let o = optimize(&r.to_f64(), Mode::Harvest, &opts);
            let mut file = ReportFile::new("oracle", &bytes, common.seed);
            file.oracle = Some((&o).into());
            file.timings.insert("oracle".into(), t.elapsed().as_secs_f64());
            emit(&file.to_json(), common.output.as_ref())?;
            Ok(exit::CERTIFIED_NONNEGATIVE)
        }
        Command::Witness { input, tolerance, common } => {
            let (bytes, r) = load(&input)?;
            let t = Instant::now();
            let w = witness_with_tolerance(&r, tolerance);
            let mut file = ReportFile::new("witness", &bytes, common.seed);
            file.witness = Some((&w).into());
            file.timings.insert("witness".into(), t.elapsed().as_secs_f64());
            emit(&file.to_json(), common.output.as_ref())?;
            Ok(exit::CERTIFIED_NONNEGATIVE)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR)
        }
    }
}
