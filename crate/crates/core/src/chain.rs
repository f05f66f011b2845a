//! Connectivity-preserving Metropolis-Hastings kernel.
//!
//! One step draws a uniform unordered node pair. If the pair is an edge, its
//! removal is proposed and rejected outright when it would disconnect the
//! graph; otherwise the edge is added. A surviving proposal is accepted with
//! probability `min(1, exp(β · Δx))`. The same kernel drives equilibrium-
//! expectation estimation (with β moving) and ensemble sampling (β fixed).

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgePresence, LabeledGraph, ReachabilityProbe};
use crate::model::{log_acceptance_ratio, toggle_delta_for, ModelKind, ObservableVector, ParameterVector};
use crate::stats::observables;

/// Bookkeeping over the lifetime of a chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChainCounters {
    pub proposals: u64,
    pub accepted: u64,
    pub removal_proposals: u64,
    pub connectivity_rejections: u64,
}

impl ChainCounters {
    pub fn acceptance_rate(&self) -> f64 {
        ratio(self.accepted, self.proposals)
    }

    pub fn connectivity_rejection_rate(&self) -> f64 {
        ratio(self.connectivity_rejections, self.proposals)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted { pair: (usize, usize), change: EdgePresence },
    /// Proposal passed the connectivity guard but lost the Metropolis draw.
    Rejected,
    /// Removal would have disconnected the graph.
    Disconnecting,
}

/// Chain state: the current graph, its tracked observables, and scratch
/// space for bridge queries.
///
/// Only the terms active under the chain's [`ModelKind`] are kept current;
/// the triangle entries of an edges-only chain keep their initial values.
#[derive(Clone, Debug)]
pub struct ConnectedChain {
    graph: LabeledGraph,
    observables: ObservableVector,
    model: ModelKind,
    probe: ReachabilityProbe,
    counters: ChainCounters,
}

impl ConnectedChain {
    pub fn new(start: LabeledGraph, model: ModelKind) -> Result<Self> {
        if start.n() < 2 {
            return Err(Error::Domain("a chain needs at least two nodes".into()));
        }
        if !start.is_connected() {
            return Err(Error::Disconnected);
        }
        let observables = observables(&start);
        let probe = ReachabilityProbe::new(start.n());
        Ok(Self { graph: start, observables, model, probe, counters: ChainCounters::default() })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    pub fn observables(&self) -> &ObservableVector {
        &self.observables
    }

    pub fn counters(&self) -> ChainCounters {
        self.counters
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn step<R: Rng + ?Sized>(&mut self, beta: &ParameterVector, rng: &mut R) -> StepOutcome {
        let (i, j) = propose_pair(self.graph.n(), rng);
        self.counters.proposals += 1;

        if self.graph.has_edge(i, j) {
            self.counters.removal_proposals += 1;
            if !self.probe.bridge_free(&self.graph, i, j) {
                self.counters.connectivity_rejections += 1;
                return StepOutcome::Disconnecting;
            }
        }

        let delta = toggle_delta_for(&self.graph, i, j, self.model).expect("proposed pair is valid");
        let log_ratio = log_acceptance_ratio(&delta, beta);
        if log_ratio < 0.0 && rng.gen::<f64>() >= log_ratio.exp() {
            return StepOutcome::Rejected;
        }

        let change = self.graph.toggle_edge(i, j).expect("proposed pair is valid");
        self.observables.apply(&delta);
        self.counters.accepted += 1;
        StepOutcome::Accepted { pair: (i, j), change }
    }
}

/// Uniform unordered pair of distinct nodes, drawn as an ordered pair.
#[inline]
pub fn propose_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::path;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_disconnected_start() {
        let g = LabeledGraph::uniform(3, crate::graph::BusType::Load);
        assert!(matches!(ConnectedChain::new(g, ModelKind::Full), Err(Error::Disconnected)));
    }

    #[test]
    fn pair_proposals_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [[0u32; 4]; 4];
        for _ in 0..60_000 {
            let (i, j) = propose_pair(4, &mut rng);
            assert!(i < j);
            counts[i][j] += 1;
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!((counts[i][j] as f64 - 10_000.0).abs() < 400.0, "{:?}", counts);
            }
        }
    }

    #[test]
    fn tracked_observables_follow_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let beta = ParameterVector([-0.5, 0.1, -0.2, -0.3, 0.0, 0.2, 0.4, -0.3]);
        let mut chain = ConnectedChain::new(path(7), ModelKind::Full).unwrap();
        for _ in 0..5_000 {
            chain.step(&beta, &mut rng);
            assert!(chain.graph().is_connected());
        }
        assert_eq!(chain.observables(), &observables(chain.graph()));
        let c = chain.counters();
        assert_eq!(c.proposals, 5_000);
        assert!(c.accepted <= c.proposals);
        assert!(c.connectivity_rejections <= c.removal_proposals);
    }

    #[test]
    fn tree_edges_are_never_removed() {
        // every edge of a path is a bridge, so strongly negative β can only add
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let beta = ParameterVector([-50.0; 8]);
        let mut chain = ConnectedChain::new(path(5), ModelKind::Edges).unwrap();
        for _ in 0..2_000 {
            chain.step(&beta, &mut rng);
        }
        assert_eq!(chain.graph(), &path(5));
        assert!(chain.counters().connectivity_rejections > 0);
    }
}
