//! Explore a component step by step and print its trace as JSON lines.

use std::io::stdout;

use torus_rdg::components::{component_decomposition, explore_component, largest_component};
use torus_rdg::model::{c_of_lambda, sample_graph, ModelConfig};
use torus_rdg::rng::stream;

fn main() -> torus_rdg::Result<()> {
    let m = ModelConfig::homogeneous(30, c_of_lambda(0.8), 3)?;
    let g = sample_graph(&m)?;
    let mut rng = stream(3, 1_000);

    let hub = (0..g.n_vertices()).max_by_key(|&i| g.degree(i)).unwrap_or(0);
    let start = g.vertex(hub);
    let trace = explore_component(&g, start, &mut rng);
    println!("component of {start:?}: {} vertices", trace.stopping_time());
    trace.write_jsonl(stdout().lock())?;

    let traces = component_decomposition(&g, &mut rng);
    let total: usize = traces.iter().map(|t| t.stopping_time()).sum();
    let summary = largest_component(&g);
    println!(
        "{} components covering {total} vertices; largest {} (union-find agrees: {})",
        traces.len(),
        traces.iter().map(|t| t.stopping_time()).max().unwrap_or(0),
        summary.largest
    );
    Ok(())
}
