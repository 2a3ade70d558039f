use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torus_rdg::components::explore_component;
use torus_rdg::geometry::{TorusConfig, Vertex};
use torus_rdg::harness::{
    borel_check, progeny_identity_check, run_experiment, verify_coupling, verify_theory, CheckTable, CouplingGrid,
    ExperimentPlan, TheoryArgs, WeightConfig,
};
use torus_rdg::model::{c_of_lambda, sample_graph, ModelConfig};
use torus_rdg::rng::stream;
use torus_rdg::{Error, Result};

#[derive(Parser)]
#[command(name = "rdg", version, about = "Random distance graphs on the discrete torus")]
struct Cli {
    /// Root seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated sweep described by a TOML config.
    Simulate {
        config: PathBuf,
    },
    /// Print the limiting constants for a parameter choice.
    Theory {
        #[command(flatten)]
        intensity: Intensity,
        /// Weight law, e.g. `constant:1`, `discrete:1=0.5,2=0.5`, `exponential:1`.
        #[arg(long, default_value = "constant:1")]
        weights: WeightConfig,
    },
    /// Compare simulated branching processes with their exact laws.
    Branching {
        #[arg(long, default_value_t = 0.5)]
        lambda_prime: f64,
        #[arg(long, default_value_t = 100_000)]
        runs: usize,
        #[arg(long, default_value_t = 10)]
        k_max: u64,
        /// Also run the two-sample progeny test for this weight law.
        #[arg(long)]
        weights: Option<WeightConfig>,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
    },
    /// Coupling checks: binomial-Poisson distance and the finite-size intensity.
    Verify,
    /// Sample one graph and write its edge list and weights.
    ExportGraph {
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        intensity: Intensity,
        #[arg(long, default_value = "constant:1")]
        weights: WeightConfig,
        /// Also write the exploration trace from this vertex, given as `u1,u2`.
        #[arg(long)]
        trace: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Intensity {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
}

impl Intensity {
    fn c(&self) -> f64 {
        self.c.unwrap_or_else(|| c_of_lambda(self.lambda.unwrap_or(0.0)))
    }
}

fn writer(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn flatten(prefix: &str, v: &serde_json::Value, rows: &mut Vec<[String; 2]>) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Null => rows.push([prefix.to_string(), String::new()]),
        Value::String(s) => rows.push([prefix.to_string(), s.clone()]),
        other => rows.push([prefix.to_string(), other.to_string()]),
    }
}

fn write_table(table: &CheckTable, format: Format, out: Option<&Path>) -> Result<()> {
    let mut w = writer(out)?;
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => serde_json::to_writer_pretty(&mut w, table)?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Simulate { config } => {
            let mut plan = ExperimentPlan::load(&config)?;
            if let Some(s) = cli.seed {
                plan.seed = s;
            }
            let result = run_experiment(&plan)?;
            for p in &result.points {
                for warning in &p.warnings {
                    eprintln!("warning: N={} c={}: {warning}", p.point.n, p.point.c);
                }
            }
            let mut w = writer(out.or(plan.output.as_deref()))?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => result.write_csv(&mut w)?,
                Format::Json => result.write_json(&mut w)?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Theory { intensity, weights } => {
            let report = verify_theory(&TheoryArgs {
                lambda: intensity.lambda,
                c: intensity.c,
                weights,
            })?;
            let mut w = writer(out)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_writer_pretty(&mut w, &report)?,
                Format::Csv => {
                    let mut csv = csv::Writer::from_writer(&mut w);
                    csv.write_record(["key", "value"])?;
                    let mut rows = Vec::new();
                    flatten("", &serde_json::to_value(&report)?, &mut rows);
                    for row in rows {
                        csv.write_record(row)?;
                    }
                    csv.flush()?;
                }
            }
            writeln!(w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Branching {
            lambda_prime,
            runs,
            k_max,
            weights,
            lambda,
            alpha,
        } => {
            let seed = cli.seed.unwrap_or(0);
            let mut table = borel_check(lambda_prime, runs, k_max, seed, 4.0)?;
            if let Some(wc) = weights {
                let ks = progeny_identity_check(lambda, &wc.to_spec()?, runs, 1_000_000, seed ^ 1, alpha)?;
                table.rows.push(torus_rdg::harness::CheckRow {
                    check: "progeny_ks".into(),
                    case: format!("lambda={lambda} weights={wc}"),
                    value: ks.statistic,
                    bound: Some(ks.critical),
                    passed: ks.passed,
                });
            }
            write_table(&table, cli.format.unwrap_or(Format::Csv), out)?;
            Ok(table.passed())
        }
        Command::Verify => {
            let table = verify_coupling(&CouplingGrid::default())?;
            write_table(&table, cli.format.unwrap_or(Format::Csv), out)?;
            Ok(table.passed())
        }
        Command::ExportGraph {
            n,
            intensity,
            weights,
            trace,
        } => {
            let torus = TorusConfig::new(n)?;
            let seed = cli.seed.unwrap_or(0);
            let m = ModelConfig::new(torus, intensity.c(), weights.to_spec()?, seed)?;
            let g = sample_graph(&m)?;
            let prefix = cli.out.clone().unwrap_or_else(|| PathBuf::from("graph"));
            let with_ext = |ext: &str| {
                let mut p = prefix.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            g.write_edge_list(BufWriter::new(File::create(with_ext(".edges"))?))?;
            g.write_weights(BufWriter::new(File::create(with_ext(".weights"))?))?;
            if let Some(start) = trace {
                let (a, b) = start
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Error::Config(format!("trace start '{start}' is not u1,u2")))?;
                let v = Vertex::new(a, b, &torus);
                let mut rng = stream(seed, u64::MAX);
                let t = explore_component(&g, v, &mut rng);
                t.write_jsonl(BufWriter::new(File::create(with_ext(".trace.jsonl"))?))?;
            }
            eprintln!("{} vertices, {} edges", g.n_vertices(), g.edge_count());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
