//! Equilibrium-expectation estimation of the full eight-term model, with the
//! parameter trajectory written as CSV.
//!
//! ```text
//! cargo run --release --example estimate_parameters -- [steps] [trace.csv]
//! ```

use std::fs::File;
use std::path::Path;

use grid_ergm::estimator::{default_initial_parameters, estimate, ChainTrace, EEConfig};
use grid_ergm::io::write_trace;
use grid_ergm::model::PARAMETER_NAMES;
use grid_ergm::pipeline::load_reference;

pub fn run(steps: u64, trace_path: Option<&Path>) -> anyhow::Result<ChainTrace> {
    let case = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case118_ieee.m");
    let g0 = load_reference(&case, true)?.graph;
    let beta0 = default_initial_parameters(&g0);
    let cfg = EEConfig { steps, seed: 42, ..EEConfig::default() };
    let trace = estimate(&g0, &cfg, &beta0)?;

    let c = trace.counters;
    println!("{} steps, {:.2}% accepted, {:.2}% rejected for disconnection", c.proposals, 100.0 * c.acceptance_rate(), 100.0 * c.connectivity_rejection_rate());
    println!("{:<8} {:>9} {:>9}", "", "start", "estimate");
    for (k, name) in PARAMETER_NAMES.iter().enumerate() {
        println!("{name:<8} {:>9.4} {:>9.4}", beta0[k], trace.estimate[k]);
    }
    println!("observables at the end of the chain vs targets:");
    println!("  {:?}", trace.final_observables.0);
    println!("  {:?}", trace.targets.0);
    if let Some(path) = trace_path {
        write_trace(File::create(path)?, &trace.records)?;
        println!("trace written to {}", path.display());
    }
    Ok(trace)
}

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let steps = args.next().map_or(Ok(2_000_000), |s| s.parse())?;
    let trace_path = args.next();
    run(steps, trace_path.as_deref().map(Path::new))?;
    Ok(())
}
