//! Estimate, then generate a thinned ensemble of connected synthetic grids
//! and compare its statistics with the reference.
//!
//! ```text
//! cargo run --release --example sample_ensemble -- [estimate steps] [samples]
//! ```

use std::path::Path;

use grid_ergm::estimator::{default_initial_parameters, estimate, EEConfig};
use grid_ergm::pipeline::load_reference;
use grid_ergm::sampler::{sample_chains, SamplerConfig};
use grid_ergm::stats::{GridReport, ReportSummary};

pub fn run(ee_steps: u64, samples: usize) -> anyhow::Result<ReportSummary> {
    let case = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case118_ieee.m");
    let g0 = load_reference(&case, true)?.graph;
    let cfg = EEConfig { steps: ee_steps, seed: 7, ..EEConfig::default() };
    let beta = estimate(&g0, &cfg, &default_initial_parameters(&g0))?.estimate;

    let scfg = SamplerConfig { steps: 100_000_000, max_samples: samples, seed: 7, ..SamplerConfig::default() };
    let ensemble = sample_chains(&g0, &beta, &scfg, 4)?;
    let summary = ensemble.summary()?;
    let r = GridReport::from_graph(&g0);
    let rows = [
        ("m", r.m, summary.mean.m, summary.std.m),
        ("<k_P>", r.mean_degree_p, summary.mean.mean_degree_p, summary.std.mean_degree_p),
        ("<k_L>", r.mean_degree_l, summary.mean.mean_degree_l, summary.std.mean_degree_l),
        ("<k_I>", r.mean_degree_i, summary.mean.mean_degree_i, summary.std.mean_degree_i),
        ("APL", r.average_path_length, summary.mean.average_path_length, summary.std.average_path_length),
        ("lambda2", r.algebraic_connectivity, summary.mean.algebraic_connectivity, summary.std.algebraic_connectivity),
        ("C", r.clustering, summary.mean.clustering, summary.std.clustering),
    ];
    println!("{} connected samples", ensemble.len());
    println!("{:<8} {:>9} {:>9} {:>9}", "", "actual", "avg", "std");
    for (name, actual, avg, std) in rows {
        println!("{name:<8} {actual:>9.3} {avg:>9.3} {std:>9.3}");
    }
    Ok(summary)
}

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let steps = args.next().map_or(Ok(2_000_000), |s| s.parse())?;
    let samples = args.next().map_or(Ok(1100), |s| s.parse())?;
    run(steps, samples)?;
    Ok(())
}
