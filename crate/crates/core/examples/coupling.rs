//! Binomial-Poisson distance and the finite-N intensity expansion.

use torus_rdg::branching::binomial_poisson_tv;
use torus_rdg::geometry::TorusConfig;
use torus_rdg::harness::{verify_coupling, CouplingGrid};
use torus_rdg::model::{lambda_n, lambda_of_c};

fn main() -> torus_rdg::Result<()> {
    for n in [10u64, 100, 1000] {
        println!("TV(Bin({n}, 1/{n}), Po(1)) = {:.3e}", binomial_poisson_tv(n, 1.0)?);
    }
    let c = 1.0;
    for n in [50u32, 100, 400] {
        let ln = lambda_n(c, &TorusConfig::new(n)?)?;
        println!("N={n:>4} lambda_N {ln:.6} vs lambda - 2c/N {:.6}", lambda_of_c(c) - 2.0 * c / n as f64);
    }
    let table = verify_coupling(&CouplingGrid::default())?;
    for row in &table.rows {
        println!("{:<20} {:<22} {:.4e} {}", row.check, row.case, row.value, if row.passed { "ok" } else { "FAIL" });
    }
    Ok(())
}
