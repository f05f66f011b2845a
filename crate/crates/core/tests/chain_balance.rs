//! Small-state-space checks of the connected-graph chain against the exact
//! stationary law `π(G) ∝ exp(β · x(G))` on connected graphs.

use std::collections::HashMap;

use grid_ergm::chain::{ConnectedChain, StepOutcome};
use grid_ergm::model::{hamiltonian, ModelKind, ParameterVector};
use grid_ergm::stats::observables;
use grid_ergm::{BusType, LabeledGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_from_mask(types: &[BusType], mask: u64) -> LabeledGraph {
    let n = types.len();
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    LabeledGraph::from_edges(types.to_vec(), edges).unwrap()
}

fn mask_of(g: &LabeledGraph) -> u64 {
    let mut mask = 0;
    let mut bit = 0;
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            if g.has_edge(i, j) {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

struct Run {
    visits: HashMap<u64, u64>,
    flows: HashMap<(u64, u64), u64>,
    steps: u64,
}

fn run(types: &[BusType], beta: &ParameterVector, model: ModelKind, steps: u64, seed: u64) -> Run {
    let full = (1u64 << (types.len() * (types.len() - 1) / 2)) - 1;
    let mut chain = ConnectedChain::new(graph_from_mask(types, full), model).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visits = HashMap::new();
    let mut flows = HashMap::new();
    let mut state = mask_of(chain.graph());
    for _ in 0..steps {
        if let StepOutcome::Accepted { .. } = chain.step(beta, &mut rng) {
            let next = mask_of(chain.graph());
            *flows.entry((state, next)).or_default() += 1;
            state = next;
        }
        *visits.entry(state).or_default() += 1;
    }
    Run { visits, flows, steps }
}

fn exact_law(types: &[BusType], beta: &ParameterVector) -> HashMap<u64, f64> {
    let pairs = types.len() * (types.len() - 1) / 2;
    let weights: Vec<(u64, f64)> = (0..(1u64 << pairs))
        .map(|m| graph_from_mask(types, m))
        .filter(LabeledGraph::is_connected)
        .map(|g| (mask_of(&g), hamiltonian(&observables(&g), beta).unwrap().exp()))
        .collect();
    let z: f64 = weights.iter().map(|w| w.1).sum();
    weights.into_iter().map(|(m, w)| (m, w / z)).collect()
}

fn total_variation(r: &Run, law: &HashMap<u64, f64>) -> f64 {
    let outside: u64 = r.visits.iter().filter(|(m, _)| !law.contains_key(m)).map(|(_, c)| c).sum();
    assert_eq!(outside, 0, "chain visited a disconnected graph");
    0.5 * law
        .iter()
        .map(|(m, p)| (r.visits.get(m).copied().unwrap_or(0) as f64 / r.steps as f64 - p).abs())
        .sum::<f64>()
}

#[test]
fn typed_edges_model_matches_exact_law() {
    let types = [BusType::Generator, BusType::Load, BusType::Load, BusType::Interconnection];
    let beta = ParameterVector([-0.8, 0.4, -0.2, 0.6, -1.1, 0.0, 0.0, 0.0]);
    let law = exact_law(&types, &beta);
    assert_eq!(law.len(), 38);
    let r = run(&types, &beta, ModelKind::Edges, 2_000_000, 21);
    let tv = total_variation(&r, &law);
    assert!(tv < 0.02, "total variation {tv}");
}

#[test]
fn triangle_terms_match_exact_law_on_five_nodes() {
    let types = [BusType::Generator, BusType::Load, BusType::Load, BusType::Interconnection, BusType::Load];
    let beta = ParameterVector([-0.3, -0.5, 0.2, -0.4, -0.1, 0.3, 0.5, -0.4]);
    let law = exact_law(&types, &beta);
    assert_eq!(law.len(), 728);
    let r = run(&types, &beta, ModelKind::Full, 6_000_000, 22);
    let tv = total_variation(&r, &law);
    assert!(tv < 0.03, "total variation {tv}");
}

#[test]
fn transition_flows_are_balanced() {
    // stationarity with a symmetric proposal gives equal flow both ways
    // across every edge of the state graph
    let types = [BusType::Load, BusType::Generator, BusType::Load, BusType::Load];
    let beta = ParameterVector([0.7, -0.9, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0]);
    let r = run(&types, &beta, ModelKind::Edges, 3_000_000, 23);
    let mut compared = 0;
    for (&(a, b), &forward) in &r.flows {
        if a < b {
            let backward = r.flows.get(&(b, a)).copied().unwrap_or(0);
            let total = (forward + backward) as f64;
            if total > 2_000.0 {
                // binomial(total, 1/2) has sd sqrt(total)/2; allow 4 sd
                assert!((forward as f64 - backward as f64).abs() < 4.0 * total.sqrt(), "{a:b} <-> {b:b}: {forward} vs {backward}");
                compared += 1;
            }
        }
    }
    assert!(compared > 50);
}
