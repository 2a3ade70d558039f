//! Experiment orchestration: sweep configuration, replicated sampling and
//! measurement, theory targets, and the coupling and branching checks.
//!
//! Replicate `r` of sweep point `p` uses the seed `derive_seed(root, p, r)`;
//! replicates run in parallel and are reduced in replicate order, so output
//! files depend only on the plan and the root seed.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branching::{borel_tail, binomial_poisson_tv, simulate_poisson_gw, MultiTypeProcess, Progeny};
use crate::components::largest_component;
use crate::error::{Error, Result};
use crate::geometry::TorusConfig;
use crate::model::{c_of_lambda, lambda_n, lambda_of_c, sample_graph, ModelConfig, WeightSpec};
use crate::rng::{derive_seed, StreamFactory, GENERATOR};
use crate::stats::{ks_two_sample, KsOutcome, Summary};
use crate::theory::{theory_report, Regime, TheoryReport};

/// Serializable description of a weight law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightConfig {
    Constant { value: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
    Exponential { rate: f64 },
    TruncatedExponential { rate: f64, upper: f64 },
    Uniform { low: f64, high: f64 },
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig::Constant { value: 1.0 }
    }
}

impl WeightConfig {
    pub fn to_spec(&self) -> Result<WeightSpec> {
        match self {
            WeightConfig::Constant { value } => WeightSpec::constant(*value),
            WeightConfig::Discrete { values, probs } => {
                if values.len() != probs.len() {
                    return Err(Error::Config("discrete weights need as many probs as values".into()));
                }
                let pairs: Vec<_> = values.iter().cloned().zip(probs.iter().cloned()).collect();
                WeightSpec::discrete(&pairs)
            }
            WeightConfig::Exponential { rate } => WeightSpec::exponential(*rate),
            WeightConfig::TruncatedExponential { rate, upper } => WeightSpec::truncated_exponential(*rate, *upper),
            WeightConfig::Uniform { low, high } => WeightSpec::uniform(*low, *high),
        }
    }
}

impl fmt::Display for WeightConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightConfig::Constant { value } => write!(f, "constant:{value}"),
            WeightConfig::Discrete { values, probs } => {
                let atoms: Vec<String> = values.iter().zip(probs).map(|(v, p)| format!("{v}={p}")).collect();
                write!(f, "discrete:{}", atoms.join(","))
            }
            WeightConfig::Exponential { rate } => write!(f, "exponential:{rate}"),
            WeightConfig::TruncatedExponential { rate, upper } => write!(f, "truncexp:{rate},{upper}"),
            WeightConfig::Uniform { low, high } => write!(f, "uniform:{low},{high}"),
        }
    }
}

/// Parses the compact forms produced by `Display`, e.g. `discrete:1=0.5,2=0.5`.
impl FromStr for WeightConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number '{x}' in weight spec '{s}'")))
        };
        let list = || -> Result<Vec<f64>> { args.split(',').map(num).collect() };
        let config = match kind {
            "constant" => WeightConfig::Constant {
                value: if args.is_empty() { 1.0 } else { num(args)? },
            },
            "discrete" => {
                let mut values = Vec::new();
                let mut probs = Vec::new();
                for atom in args.split(',') {
                    let (v, p) = atom
                        .split_once('=')
                        .ok_or_else(|| Error::Config(format!("discrete atom '{atom}' is not value=prob")))?;
                    values.push(num(v)?);
                    probs.push(num(p)?);
                }
                WeightConfig::Discrete { values, probs }
            }
            "exponential" => WeightConfig::Exponential { rate: num(args)? },
            "truncexp" | "truncated_exponential" => match list()?.as_slice() {
                [rate, upper] => WeightConfig::TruncatedExponential { rate: *rate, upper: *upper },
                _ => return Err(Error::Config(format!("truncexp needs rate,upper in '{s}'"))),
            },
            "uniform" => match list()?.as_slice() {
                [low, high] => WeightConfig::Uniform { low: *low, high: *high },
                _ => return Err(Error::Config(format!("uniform needs low,high in '{s}'"))),
            },
            _ => return Err(Error::Config(format!("unknown weight kind '{kind}'"))),
        };
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// `C / N^2`, the giant-component fraction.
    #[serde(rename = "C_over_N2")]
    COverN2,
    /// `C / log(N^2)`, the subcritical scale.
    #[serde(rename = "C_over_logN2")]
    COverLogN2,
}

impl Estimator {
    pub fn apply(self, largest: usize, n: u32) -> f64 {
        let vertices = (n as f64) * (n as f64);
        match self {
            Estimator::COverN2 => largest as f64 / vertices,
            Estimator::COverLogN2 => largest as f64 / vertices.ln(),
        }
    }

    /// Limit of the estimator predicted by theory, if the regime has one.
    pub fn target(self, report: &TheoryReport) -> Option<f64> {
        match (self, report.regime) {
            (_, Regime::Critical) => None,
            (Estimator::COverN2, _) => report.beta_hat,
            (Estimator::COverLogN2, Regime::Subcritical) => report.sub_const_weighted,
            (Estimator::COverLogN2, Regime::Supercritical) => None,
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::COverN2 => "C_over_N2",
            Estimator::COverLogN2 => "C_over_logN2",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        }
    }
}

/// On-disk experiment configuration (TOML).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    #[serde(rename = "N")]
    n: OneOrMany<u32>,
    c: Option<OneOrMany<f64>>,
    lambda: Option<OneOrMany<f64>>,
    #[serde(default)]
    weights: WeightConfig,
    replicates: usize,
    #[serde(default)]
    seed: u64,
    estimator: Estimator,
    output: Option<PathBuf>,
}

/// One `(N, c, W)` combination of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(rename = "N")]
    pub n: u32,
    pub c: f64,
    pub weights: WeightConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub sweep: Vec<SweepPoint>,
    pub replicates: usize,
    pub estimator: Estimator,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentPlan {
    /// Parse a TOML plan. `N` and `c` (or `lambda`, exclusive with `c`) may be
    /// scalars or lists; the sweep is their product in `N`-major order.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: PlanFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cs = match (file.c, file.lambda) {
            (Some(c), None) => c.into_vec(),
            (None, Some(l)) => l.into_vec().into_iter().map(c_of_lambda).collect(),
            (Some(_), Some(_)) => return Err(Error::Config("give either c or lambda, not both".into())),
            (None, None) => return Err(Error::Config("one of c or lambda is required".into())),
        };
        let mut sweep = Vec::new();
        for n in file.n.into_vec() {
            for &c in &cs {
                sweep.push(SweepPoint {
                    n,
                    c,
                    weights: file.weights.clone(),
                });
            }
        }
        let plan = Self {
            sweep,
            replicates: file.replicates,
            estimator: file.estimator,
            seed: file.seed,
            output: file.output,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        for p in &self.sweep {
            ModelConfig::new(TorusConfig::new(p.n)?, p.c, p.weights.to_spec()?, 0)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    pub largest: usize,
    pub components: usize,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub point: SweepPoint,
    pub lambda: f64,
    pub estimator: Estimator,
    pub replicates: Vec<ReplicateRecord>,
    pub summary: Summary,
    pub target: Option<f64>,
    /// `(mean - target) / se`; infinite when `se = 0` and the mean misses the target.
    pub z_score: Option<f64>,
    pub warnings: Vec<String>,
}

impl PointResult {
    /// Fraction of replicates whose estimate is farther than `tol` from the target.
    pub fn fraction_outside(&self, tol: f64) -> Option<f64> {
        let target = self.target?;
        let outside = self.replicates.iter().filter(|r| (r.estimate - target).abs() > tol).count();
        Some(outside as f64 / self.replicates.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub generator: String,
    pub root_seed: u64,
    pub points: Vec<PointResult>,
}

fn point_warnings(p: &SweepPoint, w: &WeightSpec) -> Vec<String> {
    let mut warnings = Vec::new();
    let n = p.n as f64;
    match w.support_bound() {
        Some(b) if p.c * b * b / n >= 1.0 => warnings.push(format!(
            "edge probabilities are capped at 1 for nearby pairs (c B^2 / N = {:.3} >= 1); the limit theory assumes they are not",
            p.c * b * b / n
        )),
        None => warnings.push("unbounded weights: the proposal bound is the realized maximum weight".into()),
        _ => {}
    }
    warnings
}

/// Sample and measure every replicate of every sweep point.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let mut points = Vec::with_capacity(plan.sweep.len());
    for (pi, p) in plan.sweep.iter().enumerate() {
        let spec = p.weights.to_spec()?;
        let torus = TorusConfig::new(p.n)?;
        let mut warnings = point_warnings(p, &spec);
        let records: Vec<ReplicateRecord> = (0..plan.replicates)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(plan.seed, pi as u64, r as u64);
                let m = ModelConfig::new(torus, p.c, spec.clone(), seed)?;
                let summary = largest_component(&sample_graph(&m)?);
                Ok(ReplicateRecord {
                    replicate: r,
                    seed,
                    largest: summary.largest,
                    components: summary.count,
                    estimate: plan.estimator.apply(summary.largest, p.n),
                })
            })
            .collect::<Result<_>>()?;
        let estimates: Vec<f64> = records.iter().map(|r| r.estimate).collect();
        let summary = Summary::of(&estimates);
        let lambda = lambda_of_c(p.c);
        let target = if p.c > 0.0 {
            match theory_report(lambda, &spec) {
                Ok(report) => plan.estimator.target(&report),
                Err(e) => {
                    warnings.push(format!("no theory target: {e}"));
                    None
                }
            }
        } else {
            None
        };
        let z_score = target.map(|t| {
            let gap = summary.mean - t;
            if summary.se > 0.0 {
                gap / summary.se
            } else if gap == 0.0 {
                0.0
            } else {
                gap.signum() * f64::INFINITY
            }
        });
        points.push(PointResult {
            point: p.clone(),
            lambda,
            estimator: plan.estimator,
            replicates: records,
            summary,
            target,
            z_score,
            warnings,
        });
    }
    Ok(ExperimentResult {
        generator: GENERATOR.to_string(),
        root_seed: plan.seed,
        points,
    })
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    row: &'a str,
    point: usize,
    #[serde(rename = "N")]
    n: u32,
    c: f64,
    lambda: f64,
    weights: String,
    estimator: String,
    replicate: Option<usize>,
    seed: Option<u64>,
    largest: Option<usize>,
    components: Option<usize>,
    estimate: Option<f64>,
    mean: Option<f64>,
    std: Option<f64>,
    se: Option<f64>,
    target: Option<f64>,
    z: Option<f64>,
}

impl ExperimentResult {
    /// One row per replicate followed by a summary row, per sweep point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for (pi, p) in self.points.iter().enumerate() {
            let base = |row| CsvRow {
                row,
                point: pi,
                n: p.point.n,
                c: p.point.c,
                lambda: p.lambda,
                weights: p.point.weights.to_string(),
                estimator: p.estimator.to_string(),
                replicate: None,
                seed: None,
                largest: None,
                components: None,
                estimate: None,
                mean: None,
                std: None,
                se: None,
                target: None,
                z: None,
            };
            for r in &p.replicates {
                w.serialize(CsvRow {
                    replicate: Some(r.replicate),
                    seed: Some(r.seed),
                    largest: Some(r.largest),
                    components: Some(r.components),
                    estimate: Some(r.estimate),
                    ..base("replicate")
                })?;
            }
            w.serialize(CsvRow {
                mean: Some(p.summary.mean),
                std: Some(p.summary.std),
                se: Some(p.summary.se),
                target: p.target,
                z: p.z_score,
                ..base("summary")
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// Arguments of [`verify_theory`]: `lambda` or `c`, and a weight law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryArgs {
    pub lambda: Option<f64>,
    pub c: Option<f64>,
    pub weights: WeightConfig,
}

pub fn verify_theory(args: &TheoryArgs) -> Result<TheoryReport> {
    let lambda = match (args.lambda, args.c) {
        (Some(l), None) => l,
        (None, Some(c)) => lambda_of_c(c),
        _ => return Err(Error::Config("give exactly one of lambda or c".into())),
    };
    theory_report(lambda, &args.weights.to_spec()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingGrid {
    /// `(n, lambda)` pairs for the total-variation bound.
    pub tv: Vec<(u64, f64)>,
    /// Increasing side lengths for the `lambda_N` expansion.
    pub lambda_n_sides: Vec<u32>,
    pub c: f64,
}

impl Default for CouplingGrid {
    fn default() -> Self {
        let mut tv = Vec::new();
        for n in [10, 100, 1000] {
            for lambda in [0.5, 1.0, 2.0] {
                tv.push((n, lambda));
            }
        }
        Self {
            tv,
            lambda_n_sides: vec![250, 500, 1000, 2000],
            c: 1.0,
        }
    }
}

impl CouplingGrid {
    pub fn empty() -> Self {
        Self {
            tv: Vec::new(),
            lambda_n_sides: Vec::new(),
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub case: String,
    pub value: f64,
    /// Bound the value is compared against; for the expansion sweep, the previous value.
    pub bound: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckTable {
    pub rows: Vec<CheckRow>,
}

impl CheckTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Binomial-Poisson total variation against `lambda^2 / n`, and
/// `N |lambda_N - lambda + 2c/N|` strictly decreasing along the side sweep.
pub fn verify_coupling(grid: &CouplingGrid) -> Result<CheckTable> {
    let mut rows = Vec::new();
    for &(n, lambda) in &grid.tv {
        let tv = binomial_poisson_tv(n, lambda)?;
        let bound = lambda * lambda / n as f64;
        rows.push(CheckRow {
            check: "binomial_poisson_tv".into(),
            case: format!("n={n} lambda={lambda}"),
            value: tv,
            bound: Some(bound),
            passed: tv <= bound,
        });
    }
    let lambda = lambda_of_c(grid.c);
    let mut prev: Option<f64> = None;
    for &n in &grid.lambda_n_sides {
        let ln = lambda_n(grid.c, &TorusConfig::new(n)?)?;
        let scaled = n as f64 * (ln - lambda + 2.0 * grid.c / n as f64).abs();
        rows.push(CheckRow {
            check: "lambda_n_expansion".into(),
            case: format!("N={n} c={}", grid.c),
            value: scaled,
            bound: prev,
            passed: prev.is_none_or(|p| scaled < p),
        });
        prev = Some(scaled);
    }
    Ok(CheckTable { rows })
}

/// Monte Carlo `P{T >= k}` of Poisson GW trees against the Borel tail, for `k = 1..=k_max`.
pub fn borel_check(lambda_prime: f64, runs: usize, k_max: u64, seed: u64, sigmas: f64) -> Result<CheckTable> {
    let streams = StreamFactory::new(seed);
    const CHUNK: usize = 10_000;
    let counts: Vec<Vec<u64>> = (0..runs.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut rng = streams.stream(chunk as u64);
            let mut hist = vec![0u64; k_max as usize + 1];
            for _ in chunk * CHUNK..((chunk + 1) * CHUNK).min(runs) {
                let t = match simulate_poisson_gw(lambda_prime, k_max, &mut rng) {
                    Progeny::Finite(t) => t,
                    Progeny::Exceeded => k_max,
                };
                hist[t.min(k_max) as usize] += 1;
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; k_max as usize + 1];
    for h in counts {
        for (a, b) in hist.iter_mut().zip(h) {
            *a += b;
        }
    }
    let mut rows = Vec::new();
    let mut at_least = runs as u64;
    for k in 1..=k_max {
        let oracle = borel_tail(lambda_prime, k)?;
        let z = crate::stats::proportion_z(at_least as usize, runs, oracle);
        rows.push(CheckRow {
            check: "borel_tail".into(),
            case: format!("lambda'={lambda_prime} k={k} empirical={:.6}", at_least as f64 / runs as f64),
            value: z,
            bound: Some(sigmas),
            passed: z <= sigmas,
        });
        at_least -= hist[k as usize];
    }
    Ok(CheckTable { rows })
}

/// Two-sample KS test between the progeny of the multi-type process from a
/// size-biased root and of the compound Poisson process.
pub fn progeny_identity_check(
    lambda: f64,
    w: &WeightSpec,
    samples: usize,
    cap: u64,
    seed: u64,
    alpha: f64,
) -> Result<KsOutcome> {
    let process = MultiTypeProcess::new(lambda, w)?;
    let streams = StreamFactory::new(seed);
    let draw = |stream_base: u64, b2: bool| -> Vec<u64> {
        const CHUNK: usize = 5_000;
        (0..samples.div_ceil(CHUNK))
            .into_par_iter()
            .flat_map_iter(|chunk| {
                let mut rng = streams.stream(stream_base + chunk as u64);
                let len = ((chunk + 1) * CHUNK).min(samples) - chunk * CHUNK;
                (0..len)
                    .map(|_| {
                        if b2 {
                            process.simulate_b2(cap, &mut rng).rank()
                        } else {
                            process.simulate_b1_size_biased_root(cap, &mut rng).rank()
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let b1 = draw(0, false);
    let b2 = draw(1 << 32, true);
    Ok(ks_two_sample(&b1, &b2, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLAN: &str = r#"
N = [6, 8]
lambda = 2.0
replicates = 3
seed = 11
estimator = "C_over_N2"

[weights]
kind = "discrete"
values = [1.0, 2.0]
probs = [0.5, 0.5]
"#;

    #[test]
    fn parse_plan() {
        let plan = ExperimentPlan::from_toml(PLAN).unwrap();
        assert_eq!(plan.sweep.len(), 2);
        assert_eq!(plan.sweep[1].n, 8);
        assert!((lambda_of_c(plan.sweep[0].c) - 2.0).abs() < 1e-15);
        assert_eq!(plan.estimator, Estimator::COverN2);
    }

    #[test]
    fn plan_errors() {
        let both = PLAN.replace("lambda = 2.0", "lambda = 2.0\nc = 1.0");
        assert!(matches!(ExperimentPlan::from_toml(&both), Err(Error::Config(_))));
        let zero = PLAN.replace("replicates = 3", "replicates = 0");
        assert!(matches!(ExperimentPlan::from_toml(&zero), Err(Error::Config(_))));
        let tiny = PLAN.replace("N = [6, 8]", "N = 1");
        assert!(ExperimentPlan::from_toml(&tiny).is_err());
    }

    #[test]
    fn weight_strings_round_trip() {
        for s in ["constant:1", "discrete:1=0.5,2=0.5", "exponential:1.5", "truncexp:1,3", "uniform:0.5,2"] {
            let w: WeightConfig = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<WeightConfig>().unwrap(), w);
            w.to_spec().unwrap();
        }
        assert!("pareto:2".parse::<WeightConfig>().is_err());
    }

    #[test]
    fn zero_intensity_estimator_is_exact() {
        let plan = ExperimentPlan {
            sweep: vec![SweepPoint {
                n: 7,
                c: 0.0,
                weights: WeightConfig::default(),
            }],
            replicates: 4,
            estimator: Estimator::COverN2,
            seed: 0,
            output: None,
        };
        let res = run_experiment(&plan).unwrap();
        for r in &res.points[0].replicates {
            assert_eq!(r.estimate, 1.0 / 49.0);
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let plan = ExperimentPlan::from_toml(PLAN).unwrap();
        let mut a = Vec::new();
        run_experiment(&plan).unwrap().write_csv(&mut a).unwrap();
        let mut b = Vec::new();
        run_experiment(&plan).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 4);
        assert!(text.starts_with("row,point,N,c,lambda,weights,estimator,replicate,seed"));
    }

    #[test]
    fn estimators_stay_in_range() {
        let plan = ExperimentPlan::from_toml(PLAN).unwrap();
        for p in run_experiment(&plan).unwrap().points {
            for r in &p.replicates {
                assert!(r.estimate > 0.0 && r.estimate <= 1.0);
            }
            assert!(p.warnings.is_empty());
        }
        let capped = SweepPoint {
            n: 4,
            c: 8.0,
            weights: WeightConfig::default(),
        };
        let w = capped.weights.to_spec().unwrap();
        assert!(point_warnings(&capped, &w).iter().any(|w| w.contains("capped")));
    }

    #[test]
    fn theory_front_end() {
        let report = verify_theory(&TheoryArgs {
            lambda: Some(2.0),
            c: None,
            weights: WeightConfig::default(),
        })
        .unwrap();
        assert_eq!(report.regime, Regime::Supercritical);
        assert!((report.beta.unwrap() - 0.796812).abs() < 1e-6);

        let report = verify_theory(&TheoryArgs {
            lambda: Some(0.5),
            c: None,
            weights: WeightConfig::default(),
        })
        .unwrap();
        assert!((report.sub_const.unwrap() - 5.1774).abs() < 1e-4);
        assert!((report.sub_const_weighted.unwrap() - report.sub_const.unwrap()).abs() < 1e-10);

        let report = verify_theory(&TheoryArgs {
            lambda: Some(0.4),
            c: None,
            weights: "discrete:1=0.5,2=0.5".parse().unwrap(),
        })
        .unwrap();
        assert_eq!(report.crit, 1.0);
        assert_eq!(report.regime, Regime::Critical);
        assert!(report.beta_hat.is_none());

        assert!(verify_theory(&TheoryArgs {
            lambda: Some(1.0),
            c: Some(1.0),
            weights: WeightConfig::default(),
        })
        .is_err());
    }

    #[test]
    fn coupling_default_and_empty() {
        let table = verify_coupling(&CouplingGrid::default()).unwrap();
        assert_eq!(table.rows.len(), 9 + 4);
        assert!(table.passed());
        let empty = verify_coupling(&CouplingGrid::empty()).unwrap();
        assert!(empty.rows.is_empty() && empty.passed());
    }
}
