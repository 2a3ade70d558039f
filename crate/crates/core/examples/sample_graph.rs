//! Sample one graph, compare its degrees with the model, and export it.

use std::fs::File;
use std::io::BufWriter;

use torus_rdg::geometry::TorusConfig;
use torus_rdg::model::{c_of_lambda, mean_degree, sample_graph, ModelConfig, WeightSpec};

fn main() -> torus_rdg::Result<()> {
    let n = 200;
    let lambda = 1.5;
    let torus = TorusConfig::new(n)?;
    let m = ModelConfig::new(torus, c_of_lambda(lambda), WeightSpec::constant(1.0)?, 7)?;
    let g = sample_graph(&m)?;

    let degrees: Vec<usize> = (0..g.n_vertices()).map(|i| g.degree(i)).collect();
    let observed = degrees.iter().sum::<usize>() as f64 / degrees.len() as f64;
    println!("N={n} edges={} mean degree {observed:.4} (model {:.4}, limit {lambda})", g.edge_count(), mean_degree(m.c, &torus)?);

    let mut hist = vec![0usize; 8];
    for d in degrees {
        hist[d.min(7)] += 1;
    }
    for (k, h) in hist.iter().enumerate() {
        println!("  deg {k}{}: {:.4}", if k == 7 { "+" } else { "" }, *h as f64 / g.n_vertices() as f64);
    }

    let dir = std::env::temp_dir();
    g.write_edge_list(BufWriter::new(File::create(dir.join("rdg_example.edges"))?))?;
    g.write_weights(BufWriter::new(File::create(dir.join("rdg_example.weights"))?))?;
    println!("wrote {}", dir.join("rdg_example.{edges,weights}").display());

    // heterogeneous weights
    let w = WeightSpec::discrete(&[(1.0, 0.5), (2.0, 0.5)])?;
    let m = ModelConfig::new(torus, c_of_lambda(lambda), w, 7)?;
    let g = sample_graph(&m)?;
    let heavy: Vec<usize> = (0..g.n_vertices()).filter(|&i| g.weight(i) == 2.0).map(|i| g.degree(i)).collect();
    let light: Vec<usize> = (0..g.n_vertices()).filter(|&i| g.weight(i) == 1.0).map(|i| g.degree(i)).collect();
    let avg = |xs: &[usize]| xs.iter().sum::<usize>() as f64 / xs.len() as f64;
    println!("weights 1/2: mean degree light {:.3} heavy {:.3}", avg(&light), avg(&heavy));
    Ok(())
}
