//! The edges-only model solved exactly, then estimated again on connected
//! graphs. Enforcing connectivity pushes every edge parameter down.
//!
//! ```text
//! cargo run --release --example closed_form_ablation -- [steps]
//! ```

use std::path::Path;

use grid_ergm::estimator::{estimate, EEConfig};
use grid_ergm::free_energy::{closed_form_parameters, exact_mean, free_energy, sample_simple_model, TypeCensus};
use grid_ergm::model::{ModelKind, ParameterVector};
use grid_ergm::pipeline::load_reference;
use grid_ergm::stats::observables;
use grid_ergm::EdgeTypePair;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run(steps: u64) -> anyhow::Result<([f64; 6], [f64; 6])> {
    let case = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case300_ieee.m");
    let g0 = load_reference(&case, true)?.graph;
    let census = TypeCensus::of(&g0);
    let targets = observables(&g0).edge_counts();
    let closed = closed_form_parameters(&targets, &census)?;
    println!("census P/L/I = {}/{}/{}, free energy F = {:.3}", census.generators, census.loads, census.interconnections, free_energy(&closed, &census));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = 200;
    let connected = (0..draws).filter(|_| sample_simple_model(&closed, &census, &mut rng).is_connected()).count();
    println!("unconstrained draws that happen to be connected: {connected}/{draws}");

    let cfg = EEConfig { steps, model: ModelKind::Edges, seed: 2, ..EEConfig::default() };
    let trace = estimate(&g0, &cfg, &ParameterVector::from_edge_parameters(closed))?;
    let ee = trace.estimate.edge_parameters();
    let mean = exact_mean(&closed, &census);
    println!("pair  target  exact mean  closed form      EE   change");
    for pair in EdgeTypePair::ALL {
        let k = pair.index();
        let change = 100.0 * (ee[k] - closed[k]) / closed[k].abs();
        println!("{:<4} {:>7} {:>11.3} {:>12.3} {:>7.3} {:>7.1}%", pair.name(), targets[k], mean[k], closed[k], ee[k], change);
    }
    Ok((closed, ee))
}

fn main() -> anyhow::Result<()> {
    let steps = std::env::args().nth(1).map_or(Ok(20_000_000), |s| s.parse())?;
    run(steps)?;
    Ok(())
}
