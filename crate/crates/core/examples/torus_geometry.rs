//! Distances, rings and the rescaled kernel on a small torus.

use torus_rdg::geometry::{continuous_rho, kernel, ring_vertices, torus_distance, TorusConfig, Vertex};

fn main() -> torus_rdg::Result<()> {
    for n in [5u32, 6] {
        let t = TorusConfig::new(n)?;
        let sizes: Vec<u64> = (1..=t.max_dist()).map(|r| t.ring_size(r)).collect::<Result<_, _>>()?;
        println!("N={n} max_dist={} ring sizes {:?} (sum {})", t.max_dist(), sizes, sizes.iter().sum::<u64>());
    }

    let t = TorusConfig::new(10)?;
    let u = Vertex::new(1, 1, &t);
    let v = Vertex::new(9, 4, &t);
    println!("d({u:?}, {v:?}) = {}", torus_distance(u, v, &t));
    println!("ring 2 around {u:?}: {:?}", ring_vertices(u, 2, &t)?);

    let (p, q) = (u.rescaled(&t), v.rescaled(&t));
    println!("rho = {:.3}, N * rho = {:.3}", continuous_rho(p, q), 10.0 * continuous_rho(p, q));
    println!("kappa(p, 1, q, 2) = {:.4}", kernel(p, 1.0, q, 2.0)?);
    Ok(())
}
