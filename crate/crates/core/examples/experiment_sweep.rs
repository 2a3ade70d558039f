//! A replicated sweep over N, written as CSV to stdout.

use std::io::stdout;

use torus_rdg::harness::{run_experiment, ExperimentPlan};

const PLAN: &str = r#"
N = [50, 100, 200]
lambda = 2.0
replicates = 8
seed = 42
estimator = "C_over_N2"

[weights]
kind = "discrete"
values = [1.0, 2.0]
probs = [0.5, 0.5]
"#;

fn main() -> torus_rdg::Result<()> {
    let plan = ExperimentPlan::from_toml(PLAN)?;
    let result = run_experiment(&plan)?;
    result.write_csv(stdout().lock())?;
    for p in &result.points {
        eprintln!(
            "N={:>4} mean {:.4} +- {:.4} target {:.4} outside 0.05: {:.2}",
            p.point.n,
            p.summary.mean,
            p.summary.se,
            p.target.unwrap_or(f64::NAN),
            p.fraction_outside(0.05).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
