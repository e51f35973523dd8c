use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use admlab::convergence::flat_norm_upper;
use admlab::experiments::{
    builtin, emit_mass_curve, geometry_form, run_scenario, write_curve_csv, write_outputs, ExperimentError, Outputs,
    RunOptions, Scenario, BUILTINS,
};
use admlab::families::{FamilySpec, GeneratedManifold};
use admlab::geometry::{adm_mass_chart, adm_mass_limit, validate_rotsym};

const EXIT_PARSE: u8 = 2;
const EXIT_PROBE: u8 = 3;

#[derive(Parser)]
#[command(name = "admlab", version, about = "ADM and Hawking masses of rotationally symmetric manifolds")]
struct Cli {
    /// Fan member-wise work across threads.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Limit,
    Chart,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check a manifold against the rotationally symmetric class and its own metadata.
    Validate { spec: PathBuf },
    /// ADM mass as a Hawking-mass limit, a coordinate flux, or both.
    Mass {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "limit")]
        method: Method,
        /// Sphere radius for the flux integral.
        #[arg(long, default_value_t = 1e4)]
        radius: f64,
    },
    /// Hawking masses at geometric abscissae, as CSV on stdout.
    Curve {
        spec: PathBuf,
        /// Abscissa range `a:b`.
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long)]
        count: usize,
    },
    /// Run a scenario file or a built-in scenario by name.
    Sequence {
        scenario: String,
        /// Overrides the scenario's CSV output path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides the scenario's JSON output path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Flat-norm upper bound between two graphs over an annulus.
    Flatnorm {
        spec_a: PathBuf,
        spec_b: PathBuf,
        #[arg(long, value_parser = parse_range)]
        window: (f64, f64),
    },
    /// Names of the built-in scenarios.
    ListBuiltins,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(b > a) {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Parse(String),
    Probe(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Parse { .. } | ExperimentError::Invalid(_) => Failure::Parse(e.to_string()),
            ExperimentError::ProbeFailed { .. } | ExperimentError::Io { .. } => Failure::Probe(e.to_string()),
        }
    }
}

fn probe<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Probe(e.to_string())
}

fn load_spec(path: &Path, options: &RunOptions) -> Result<GeneratedManifold, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let spec: FamilySpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    spec.check().map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let gm = spec.build().map_err(probe)?;
    Ok(gm.with_tolerances(options.tolerances))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let mut options = RunOptions::from_env()?;
    options.parallel = cli.parallel;
    match cli.command {
        Command::Validate { spec } => {
            let gm = load_spec(&spec, &options)?;
            let report = validate_rotsym(&gm.profile().map_err(probe)?);
            let consistency = gm.consistency().map_err(probe)?;
            print_json(&json!({ "report": report, "consistency": consistency }));
            Ok(consistency.all())
        }
        Command::Mass { spec, method, radius } => {
            let gm = load_spec(&spec, &options)?;
            let limit = match method {
                Method::Limit | Method::Both => Some(adm_mass_limit(&gm.geometry).map_err(probe)?),
                Method::Chart => None,
            };
            let chart = match method {
                Method::Chart | Method::Both => {
                    let g = gm.graph().map_err(probe)?;
                    Some(adm_mass_chart(&g, &[radius]).map_err(probe)?[0].1)
                }
                Method::Limit => None,
            };
            print_json(&json!({
                "form": geometry_form(&gm.geometry),
                "limit": limit,
                "chart": chart.map(|v| json!({ "radius": radius, "value": v })),
                "expected": gm.expected_adm,
            }));
            Ok(true)
        }
        Command::Curve { spec, range, count } => {
            let gm = load_spec(&spec, &options)?;
            let (_, rows) = emit_mass_curve(&gm, range, count).map_err(probe)?;
            write_curve_csv(&rows, false, std::io::stdout().lock()).map_err(probe)?;
            Ok(true)
        }
        Command::Sequence { scenario, csv, json } => {
            let path = Path::new(&scenario);
            let parsed = if path.exists() {
                Scenario::load(path)?
            } else if BUILTINS.iter().any(|(n, _)| *n == scenario) {
                builtin(&scenario)?
            } else {
                return Err(Failure::Parse(format!("{scenario}: no such file or built-in scenario")));
            };
            let result = run_scenario(&parsed, options)?;
            let outputs = Outputs { csv: csv.or(parsed.output.csv.clone()), json: json.or(parsed.output.json.clone()) };
            write_outputs(&result, &outputs)?;
            for p in &result.probes {
                println!("{:<24} {}", p.op, if p.passed { "ok" } else { "FAILED" });
            }
            eprintln!("{}: {:.2} s", result.scenario, result.wall_time.as_secs_f64());
            if outputs.json.is_none() {
                print_json(&serde_json::to_value(&result).expect("run results serialize"));
            }
            Ok(result.passed)
        }
        Command::Flatnorm { spec_a, spec_b, window } => {
            let (a, b) = (load_spec(&spec_a, &options)?, load_spec(&spec_b, &options)?);
            let est = flat_norm_upper(&a.graph().map_err(probe)?, &b.graph().map_err(probe)?, window.0, window.1)
                .map_err(probe)?;
            print_json(&serde_json::to_value(est).expect("estimates serialize"));
            Ok(true)
        }
        Command::ListBuiltins => {
            for (name, _) in BUILTINS {
                let s = builtin(name)?;
                println!("{name:<20} {}", s.description.unwrap_or_default());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_PROBE),
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Probe(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PROBE)
        }
    }
}
