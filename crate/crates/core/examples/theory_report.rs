//! Limiting constants across the three regimes.

use torus_rdg::model::WeightSpec;
use torus_rdg::theory::{critical_parameter, theory_report};

fn main() -> torus_rdg::Result<()> {
    let laws = [
        ("constant", WeightSpec::constant(1.0)?),
        ("{1,2}", WeightSpec::discrete(&[(1.0, 0.5), (2.0, 0.5)])?),
        ("Exp(1)", WeightSpec::exponential(1.0)?),
    ];
    println!("{:<9} {:>6} {:>7} {:>13} {:>10} {:>12}", "weights", "lambda", "crit", "regime", "beta_hat", "C/log(N^2)");
    for (name, w) in &laws {
        for lambda in [0.3, 0.45, 1.0, 2.0] {
            let r = theory_report(lambda, w)?;
            let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.5}"));
            println!(
                "{name:<9} {lambda:>6} {:>7.3} {:>13} {:>10} {:>12}",
                r.crit,
                format!("{:?}", r.regime),
                show(r.beta_hat),
                show(r.sub_const_weighted)
            );
        }
    }
    let w = WeightSpec::discrete(&[(1.0, 0.5), (2.0, 0.5)])?;
    println!("critical point for {{1,2}}: lambda = {}", 1.0 / critical_parameter(1.0, &w)?);
    Ok(())
}
