//! Borel laws, and the two branching processes whose total progeny coincide.

use torus_rdg::branching::{borel_asymptotic, borel_pmf, borel_tail, size_biased, MultiTypeProcess};
use torus_rdg::harness::{borel_check, progeny_identity_check};
use torus_rdg::model::WeightSpec;
use torus_rdg::rng::stream;

fn main() -> torus_rdg::Result<()> {
    let lp = 0.5;
    for k in [1u64, 5, 20, 50] {
        println!(
            "k={k:>2} pmf {:.3e} tail {:.3e} asymptotic {:.3e}",
            borel_pmf(lp, k)?,
            borel_tail(lp, k)?,
            borel_asymptotic(lp, k)
        );
    }
    let table = borel_check(lp, 100_000, 8, 1, 4.0)?;
    println!("Monte Carlo tail within 4 sigma for k <= 8: {}", table.passed());

    let w = WeightSpec::exponential(1.0)?;
    let sb = size_biased(&w)?;
    let mut rng = stream(2, 0);
    let sampler = sb.sampler()?;
    let draws: Vec<f64> = (0..100_000).map(|_| sampler.draw(&mut rng)).collect();
    println!("size-biased Exp(1): mean {:.4} (exact {:.4})", draws.iter().sum::<f64>() / draws.len() as f64, sb.mean());

    let lambda = 0.3;
    let process = MultiTypeProcess::new(lambda, &w)?;
    println!("mean offspring {:.4}", process.mean_offspring(&w));
    let ks = progeny_identity_check(lambda, &w, 50_000, 1_000_000, 3, 0.01)?;
    println!("progeny KS: D = {:.4}, critical {:.4}, passed {}", ks.statistic, ks.critical, ks.passed);
    Ok(())
}
