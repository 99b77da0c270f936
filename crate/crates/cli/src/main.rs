//! Command-line front end: spectral tables, Monte Carlo reports, PL^p
//! sweeps and the verification suite.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eigenrand::mc::ChunkPlan;
use eigenrand::randmat::{mc_opnorm_moment, Ensemble};
use eigenrand::report::{csv, to_json, write_output, SCHEMA_VERSION};
use eigenrand::series::{power_law_coefficients, universality_ratio, RandomSeriesSpec, SeriesGrid};
use eigenrand::spectral::{spectral_csv, spectral_table, Family};
use eigenrand::verify::{run_suite, standard_ensembles, VerifyConfig};
use eigenrand::Error;

#[derive(Parser, Debug)]
#[command(name = "eigenrand", version, about = "Numerical experiments on randomized eigenfunction series")]
struct Cli {
    /// Worker threads (falls back to EIGENRAND_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Output {
    /// Explicit format, else by extension, else `default`.
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => default,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radial profile of the oscillator spectral function.
    SpectralTable {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Comma-separated levels.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Radii run over `[0, factor·√(2n+1)]`.
        #[arg(long, default_value_t = 1.5)]
        factor: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Moments of operator norms.
    RandmatMoments {
        #[arg(long)]
        ensemble: String,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo moments of a random series against its PL^p norm.
    SeriesMc {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long = "N")]
        n: usize,
        /// Ensemble, or `standard` for the four reference ensembles.
        #[arg(long, default_value = "standard")]
        ensemble: String,
        /// Decay of the level norms `(1+n)^{-decay}`.
        #[arg(long, default_value_t = 1.0)]
        decay: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Sobolev versus PL^p classification sweep.
    PlpSweep {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance criteria.
    Verify {
        /// `all` or a comma list of criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: u64,
        /// Reduced sample sizes.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        output: Output,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Grid(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("EIGENRAND_THREADS") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| Failure::Usage(format!("EIGENRAND_THREADS={s:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

/// JSON envelope shared by every report.
fn envelope(config: Value, result: Value) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "config": config, "result": result })
}

/// CSV reports carry the resolved configuration on a leading `#` line.
fn with_config_line(config: &Value, body: String) -> String {
    format!("# {config}\n{body}")
}

fn emit(output: &Output, default: Format, config: Value, result: Value, csv_body: impl FnOnce() -> String) -> Result<(), Failure> {
    let text = match output.format(default) {
        Format::Json => to_json(&envelope(config, result))?,
        Format::Csv => with_config_line(&config, csv_body()),
    };
    write_output(output.out.as_deref(), &text)?;
    Ok(())
}

fn value(v: serde_json::Result<Value>) -> Result<Value, Failure> {
    v.map_err(|e| Failure::Numerical(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = threads(cli.threads)? {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Numerical(format!("thread pool: {e}")))?;
    }
    let plan = ChunkPlan::default();
    match cli.command {
        Command::SpectralTable { d, n, points, factor, output } => {
            if d == 0 || points < 2 || !(factor > 0.0) {
                return Err(Failure::Usage("need d >= 1, points >= 2, factor > 0".into()));
            }
            let rows = spectral_table(d, &n, points, factor);
            let config = json!({ "subcommand": "spectral-table", "d": d, "n": n, "points": points, "factor": factor });
            emit(&output, Format::Csv, config, value(serde_json::to_value(&rows))?, || spectral_csv(&rows))?;
            Ok(true)
        }
        Command::RandmatMoments { ensemble, d, p, samples, seed, output } => {
            let ens = Ensemble::parse(&ensemble)?;
            let mut rows = Vec::new();
            for &dim in &d {
                rows.push((dim, mc_opnorm_moment(&ens, dim, p, samples, seed, plan)?));
            }
            let config = json!({ "subcommand": "randmat-moments", "ensemble": ens.label(), "d": d, "p": p,
                                 "samples": samples, "seed": seed, "chunk_size": plan.chunk_size });
            let result: Vec<Value> = rows.iter().map(|(dim, e)| json!({ "d": dim, "estimate": e })).collect();
            emit(&output, Format::Json, config, Value::Array(result), || {
                let body: Vec<Vec<String>> = rows
                    .iter()
                    .map(|(dim, e)| vec![dim.to_string(), format!("{:e}", e.mean), format!("{:e}", e.stderr), e.count.to_string()])
                    .collect();
                csv(&["d", "mean", "stderr", "count"], &body)
            })?;
            Ok(true)
        }
        Command::SeriesMc { family, d, p, n, ensemble, decay, samples, seed, output } => {
            let fam = Family::parse(&family, d)?;
            let ensembles: Vec<Ensemble> =
                if ensemble == "standard" { standard_ensembles().to_vec() } else { vec![Ensemble::parse(&ensemble)?] };
            let grid = Arc::new(SeriesGrid::new(fam, n)?);
            let coeffs = power_law_coefficients(fam, n, decay, seed)?;
            let spec = RandomSeriesSpec::new(fam, coeffs, ensembles[0], grid)?;
            let rows = universality_ratio(&spec, &p, &ensembles, samples, seed, plan)?;
            let norms = spec.level_norms();
            let mut converged = true;
            for &pp in &p {
                converged &= eigenrand::plp::plp_norm_quadrature(fam, &norms, pp)?.converged;
            }
            let config = json!({ "subcommand": "series-mc", "family": fam.label(), "d": fam.d(), "p": p, "N": n,
                                 "ensembles": ensembles.iter().map(|e| e.label()).collect::<Vec<_>>(), "decay": decay,
                                 "samples": samples, "seed": seed, "chunk_size": plan.chunk_size });
            let result = json!({ "rows": rows, "quadrature_converged": converged });
            emit(&output, Format::Json, config, result, || {
                let body: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![r.ensemble.clone(), r.p.to_string(), r.q.to_string(), format!("{:e}", r.estimate.mean),
                             format!("{:e}", r.estimate.stderr), format!("{:e}", r.plp), format!("{:e}", r.ratio)]
                    })
                    .collect();
                csv(&["ensemble", "p", "q", "estimate", "stderr", "plp", "ratio"], &body)
            })?;
            Ok(converged)
        }
        Command::PlpSweep { family, d, p, output } => {
            let fam = Family::parse(&family, d)?;
            let mut rows = Vec::new();
            for &pp in &p {
                rows.extend(eigenrand::plp::embedding_sweep(fam, pp)?);
            }
            let pass = rows.iter().all(|r| r.pass);
            let config = json!({ "subcommand": "plp-sweep", "family": fam.label(), "d": fam.d(), "p": p });
            emit(&output, Format::Csv, config, value(serde_json::to_value(&rows))?, || eigenrand::plp::sweep_csv(&rows))?;
            Ok(pass)
        }
        Command::Verify { suite, seed, quick, output } => {
            let report = run_suite(&suite, &VerifyConfig { seed, quick })?;
            // the thread count is deliberately absent: results do not depend on it
            let config = json!({ "subcommand": "verify", "suite": suite, "seed": seed, "quick": quick,
                                 "chunk_size": plan.chunk_size });
            for g in report.criteria.iter().chain(&report.supplementary) {
                eprintln!("{:>8} {:<4} {}", g.id, if g.pass { "ok" } else { "FAIL" }, g.title);
            }
            let pass = report.pass;
            emit(&output, Format::Json, config, value(serde_json::to_value(&report))?, || {
                let body: Vec<Vec<String>> = report
                    .criteria
                    .iter()
                    .chain(&report.supplementary)
                    .flat_map(|g| {
                        g.checks.iter().map(move |c| {
                            vec![g.id.clone(), c.name.replace(',', ";"), format!("{:e}", c.value), format!("{:e}", c.band_lo),
                                 format!("{:e}", c.band_hi), c.pass.to_string()]
                        })
                    })
                    .collect();
                csv(&["group", "check", "value", "band_lo", "band_hi", "pass"], &body)
            })?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}\n");
            eprintln!("{}", Cli::command().render_long_help());
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
