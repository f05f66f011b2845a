//! Fixed-parameter ensemble generation.
//!
//! The connectivity-preserving kernel runs with constant β. After every
//! accepted move the current state is compared with the last retained one,
//! and kept once the two differ in at least `ceil(multiplier · n)` edges.
//! The distance is maintained incrementally, so a check costs O(1).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainCounters, ConnectedChain, StepOutcome};
use crate::error::{Error, Result};
use crate::graph::{EdgePresence, LabeledGraph};
use crate::model::{ModelKind, ParameterVector};
use crate::stats::{GridReport, ReportSummary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Chain steps per chain.
    pub steps: u64,
    /// Retention threshold in units of `n` on the edge symmetric-difference
    /// scale; 1.0 is an adjacency Hamming distance of `2n`.
    pub thinning_multiplier: f64,
    pub max_samples: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { steps: 20_000_000, thinning_multiplier: 1.0, max_samples: 1100, seed: 0 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("sampling needs at least one step".into()));
        }
        if !(self.thinning_multiplier >= 0.0 && self.thinning_multiplier.is_finite()) {
            return Err(Error::Config(format!("thinning multiplier must be >= 0, got {}", self.thinning_multiplier)));
        }
        if self.max_samples == 0 {
            return Err(Error::Config("max_samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn threshold(&self, n: usize) -> usize {
        (self.thinning_multiplier * n as f64).ceil() as usize
    }
}

/// Where a sample came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SampleOrigin {
    pub chain: usize,
    pub step: u64,
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    pub samples: Vec<LabeledGraph>,
    pub origins: Vec<SampleOrigin>,
    pub reports: Vec<GridReport>,
    /// One entry per chain.
    pub counters: Vec<ChainCounters>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn summary(&self) -> Result<ReportSummary> {
        ensemble_report(&self.reports)
    }
}

/// Column-wise mean and unbiased standard deviation of member reports.
pub fn ensemble_report(reports: &[GridReport]) -> Result<ReportSummary> {
    ReportSummary::from_reports(reports)
}

/// Single chain seeded with `cfg.seed`.
pub fn sample_chain(g0: &LabeledGraph, beta: &ParameterVector, cfg: &SamplerConfig) -> Result<Ensemble> {
    sample_chains(g0, beta, cfg, 1)
}

/// `chains` independent chains in parallel, each on its own stream of the
/// seed. Every chain keeps at most `ceil(max_samples / chains)` samples; the
/// merge is ordered by chain then step and truncated to `max_samples`.
pub fn sample_chains(g0: &LabeledGraph, beta: &ParameterVector, cfg: &SamplerConfig, chains: usize) -> Result<Ensemble> {
    cfg.validate()?;
    if chains == 0 {
        return Err(Error::Config("at least one chain is required".into()));
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("parameters"));
    }
    if !g0.is_connected() {
        return Err(Error::Disconnected);
    }
    let per_chain = cfg.max_samples.div_ceil(chains);
    let runs: Vec<(Vec<(LabeledGraph, SampleOrigin)>, ChainCounters)> = (0..chains)
        .into_par_iter()
        .map(|k| run_chain(g0, beta, cfg, k, per_chain))
        .collect::<Result<_>>()?;

    let mut samples = Vec::new();
    let mut origins = Vec::new();
    let mut counters = Vec::with_capacity(chains);
    for (kept, c) in runs {
        counters.push(c);
        for (g, o) in kept {
            samples.push(g);
            origins.push(o);
        }
    }
    samples.truncate(cfg.max_samples);
    origins.truncate(cfg.max_samples);
    let reports = samples.par_iter().map(GridReport::from_graph).collect();
    Ok(Ensemble { samples, origins, reports, counters })
}

fn run_chain(
    g0: &LabeledGraph,
    beta: &ParameterVector,
    cfg: &SamplerConfig,
    chain_id: usize,
    limit: usize,
) -> Result<(Vec<(LabeledGraph, SampleOrigin)>, ChainCounters)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chain_id as u64);
    let mut chain = ConnectedChain::new(g0.clone(), ModelKind::for_parameters(beta))?;
    let threshold = cfg.threshold(g0.n());
    let mut retained = g0.clone();
    let mut distance = 0usize;
    let mut kept = Vec::new();

    for t in 1..=cfg.steps {
        if let StepOutcome::Accepted { pair: (i, j), change } = chain.step(beta, &mut rng) {
            let was_present = change == EdgePresence::Removed;
            if was_present != retained.has_edge(i, j) {
                distance -= 1;
            } else {
                distance += 1;
            }
            if distance >= threshold {
                retained = chain.graph().clone();
                distance = 0;
                kept.push((retained.clone(), SampleOrigin { chain: chain_id, step: t }));
                if kept.len() >= limit {
                    break;
                }
            }
        }
    }
    Ok((kept, chain.counters()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{complete, path};
    use crate::graph::BusType;
    use crate::model::TERMS;

    fn cfg(steps: u64, multiplier: f64, max_samples: usize) -> SamplerConfig {
        SamplerConfig { steps, thinning_multiplier: multiplier, max_samples, seed: 4 }
    }

    #[test]
    fn strongly_negative_beta_keeps_trees_sparse() {
        let g = path(12);
        let e = sample_chain(&g, &ParameterVector([-8.0; TERMS]), &cfg(200_000, 0.25, 50)).unwrap();
        assert!(!e.is_empty());
        for s in &e.samples {
            assert!(s.is_connected());
            assert!(s.m() >= 11 && s.m() <= 14, "m = {}", s.m());
        }
    }

    #[test]
    fn consecutive_samples_respect_threshold() {
        let g = path(10);
        let c = cfg(100_000, 1.0, 40);
        let e = sample_chain(&g, &ParameterVector([-1.0; TERMS]), &c).unwrap();
        assert_eq!(e.len(), 40);
        let mut prev = &g;
        for s in &e.samples {
            assert!(prev.edge_symmetric_difference(s).unwrap() >= c.threshold(10));
            assert_eq!(s.types(), g.types());
            prev = s;
        }
    }

    #[test]
    fn zero_threshold_keeps_every_accepted_state() {
        let g = complete(4);
        let e = sample_chain(&g, &ParameterVector::zero(), &cfg(1_000, 0.0, 10_000)).unwrap();
        assert_eq!(e.len() as u64, e.counters[0].accepted);
    }

    #[test]
    fn max_samples_caps_the_ensemble() {
        let g = complete(5);
        let e = sample_chain(&g, &ParameterVector::zero(), &cfg(100_000, 0.0, 1)).unwrap();
        assert_eq!(e.len(), 1);
        let summary = e.summary().unwrap();
        assert_eq!(summary.std.m, 0.0);
        assert_eq!(summary.mean, e.reports[0]);
    }

    #[test]
    fn parallel_chains_are_deterministic_and_ordered() {
        let g = path(9);
        let c = cfg(20_000, 0.5, 30);
        let a = sample_chains(&g, &ParameterVector([-1.0; TERMS]), &c, 3).unwrap();
        let b = sample_chains(&g, &ParameterVector([-1.0; TERMS]), &c, 3).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.origins, b.origins);
        assert!(a.origins.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(a.counters.len(), 3);
        let single = sample_chain(&g, &ParameterVector([-1.0; TERMS]), &SamplerConfig { max_samples: 10, ..c.clone() })
            .unwrap();
        assert_eq!(single.samples[..], a.samples[..10]);
    }

    #[test]
    fn invalid_inputs() {
        let g = path(4);
        assert!(sample_chain(&g, &ParameterVector::zero(), &cfg(0, 1.0, 1)).is_err());
        assert!(sample_chain(&g, &ParameterVector::zero(), &cfg(10, -1.0, 1)).is_err());
        assert!(sample_chain(&g, &ParameterVector::zero(), &cfg(10, 1.0, 0)).is_err());
        let split = LabeledGraph::uniform(4, BusType::Load);
        assert!(matches!(sample_chain(&split, &ParameterVector::zero(), &cfg(10, 1.0, 1)), Err(Error::Disconnected)));
    }

    #[test]
    fn ensemble_report_examples() {
        assert!(matches!(ensemble_report(&[]), Err(Error::EmptyInput(_))));
        let mut a = GridReport::from_graph(&path(3));
        let mut b = a;
        a.m = 10.0;
        b.m = 14.0;
        let s = ensemble_report(&[a, b]).unwrap();
        assert_eq!(s.mean.m, 12.0);
        assert!((s.std.m - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.std.n, 0.0);
    }
}
