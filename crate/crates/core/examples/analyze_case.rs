//! Topological statistics of a MATPOWER case.
//!
//! ```text
//! cargo run --example analyze_case -- data/pglib_opf_case118_ieee.m
//! ```

use std::path::{Path, PathBuf};

use grid_ergm::pipeline::load_reference;
use grid_ergm::stats::{alternating_k_triangles, k_triangle_count, GridReport};

pub fn default_case() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case300_ieee.m")
}

pub fn run(case: &Path) -> anyhow::Result<GridReport> {
    let reference = load_reference(case, true)?;
    let g = &reference.graph;
    let r = GridReport::from_graph(g);
    println!("{}: n = {}, m = {}", reference.name, r.n, r.m);
    println!("  <k> = {:.3}  <k_P> = {:.3}  <k_L> = {:.3}  <k_I> = {:.3}", r.mean_degree, r.mean_degree_p, r.mean_degree_l, r.mean_degree_i);
    println!("  shares P/L/I = {:.1}% / {:.1}% / {:.1}%", 100.0 * r.share_p, 100.0 * r.share_l, 100.0 * r.share_i);
    println!("  triangles = {}  2-triangles = {}  3-triangles = {}", r.triangles, r.two_triangles, k_triangle_count(g, 3)?);
    println!("  alternating k-triangles (zeta = 2) = {:.3}", alternating_k_triangles(g, 2.0)?);
    println!("  lambda2 = {:.4}  C = {:.4}  APL = {:.3}  diameter = {}", r.algebraic_connectivity, r.clustering, r.average_path_length, r.diameter);
    Ok(r)
}

fn main() -> anyhow::Result<()> {
    let case = std::env::args().nth(1).map_or_else(default_case, PathBuf::from);
    run(&case)?;
    Ok(())
}
