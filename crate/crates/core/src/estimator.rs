//! Equilibrium-expectation estimation on the space of connected graphs.
//!
//! A single chain starts at the observed grid `G₀` and runs the
//! connectivity-preserving kernel while the parameters drift: every `θ`
//! steps each coordinate moves by `α · max(|β_i|, c)` towards closing the gap
//! between the observed statistic and the chain's current one. The estimate
//! is the average of the recorded parameters after burn-in.
//!
//! The chain is assumed to start in equilibrium, which is what taking `G₀`
//! itself as the initial state amounts to. This is not checked.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainCounters, ConnectedChain};
use crate::error::{Error, Result};
use crate::free_energy::{closed_form_parameters, max_edges, TypeCensus};
use crate::graph::{EdgeTypePair, LabeledGraph};
use crate::model::{ModelKind, ObservableVector, ParameterVector, T1, T2, TERMS};
use crate::stats::observables;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EEConfig {
    /// Total chain steps `T`.
    pub steps: u64,
    /// Learning rate `α`.
    pub alpha: f64,
    /// Floor `c` on the step size multiplier.
    pub c: f64,
    /// Update period `θ`.
    pub theta: u64,
    /// Fraction of `T` discarded before averaging.
    pub burn_in_fraction: f64,
    /// Zero the smaller triangle coefficient whenever both share a sign.
    pub enforce_triangle_sign: bool,
    pub seed: u64,
    pub model: ModelKind,
}

impl Default for EEConfig {
    fn default() -> Self {
        Self {
            steps: 20_000_000,
            alpha: 0.001,
            c: 0.001,
            theta: 100,
            burn_in_fraction: 0.75,
            enforce_triangle_sign: false,
            seed: 0,
            model: ModelKind::Full,
        }
    }
}

impl EEConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::EmptyInput("estimation needs at least one step"));
        }
        if self.theta == 0 {
            return Err(Error::Config("theta must be at least 1".into()));
        }
        if self.steps < self.theta {
            return Err(Error::Config(format!("T = {} is shorter than theta = {}", self.steps, self.theta)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("c must be positive, got {}", self.c)));
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return Err(Error::Config(format!("burn-in fraction must lie in [0, 1), got {}", self.burn_in_fraction)));
        }
        Ok(())
    }
}

/// Parameters right after the update at `step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    pub beta: ParameterVector,
}

#[derive(Clone, Debug)]
pub struct ChainTrace {
    pub records: Vec<TraceRecord>,
    pub counters: ChainCounters,
    /// Average of the records past burn-in.
    pub estimate: ParameterVector,
    pub targets: ObservableVector,
    pub final_observables: ObservableVector,
    pub final_graph: LabeledGraph,
}

/// One parameter update.
///
/// `β_i += α · max(|β_i|, c) · sign(x0_i − xt_i)` with `sign(0) = 0`. With
/// `enforce_triangle_sign`, a result where both triangle coefficients share a
/// strict sign has the smaller-magnitude one set to zero.
pub fn update_parameters(
    beta: &ParameterVector,
    x0: &ObservableVector,
    xt: &ObservableVector,
    cfg: &EEConfig,
) -> ParameterVector {
    let mut next = *beta;
    for k in 0..TERMS {
        let gap = x0[k] - xt[k];
        if gap == 0.0 {
            continue;
        }
        next[k] += cfg.alpha * beta[k].abs().max(cfg.c) * gap.signum();
    }
    if cfg.enforce_triangle_sign && !next.satisfies_triangle_sign() {
        if next[T1].abs() < next[T2].abs() {
            next[T1] = 0.0;
        } else {
            next[T2] = 0.0;
        }
    }
    next
}

/// Runs the estimator from `g0`, which supplies both the initial state and
/// the target statistics.
pub fn estimate(g0: &LabeledGraph, cfg: &EEConfig, beta0: &ParameterVector) -> Result<ChainTrace> {
    cfg.validate()?;
    if !beta0.is_finite() {
        return Err(Error::NonFinite("initial parameters"));
    }
    if !cfg.model.has_triangles() && (beta0[T1] != 0.0 || beta0[T2] != 0.0) {
        return Err(Error::Config("edges-only model with non-zero triangle parameters".into()));
    }
    let mut chain = ConnectedChain::new(g0.clone(), cfg.model)?;
    let targets = *chain.observables();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut beta = *beta0;
    let mut records = Vec::with_capacity((cfg.steps / cfg.theta) as usize);

    for t in 1..=cfg.steps {
        chain.step(&beta, &mut rng);
        if t % cfg.theta == 0 {
            beta = update_parameters(&beta, &targets, chain.observables(), cfg);
            records.push(TraceRecord { step: t, beta });
        }
    }

    let estimate = burn_in_average(&records, cfg.steps, cfg.burn_in_fraction);
    Ok(ChainTrace {
        records,
        counters: chain.counters(),
        estimate,
        targets,
        final_observables: *chain.observables(),
        final_graph: chain.into_graph(),
    })
}

/// Mean of records with `step > fraction · total`. When the window holds no
/// record the last one stands in.
pub fn burn_in_average(records: &[TraceRecord], total: u64, fraction: f64) -> ParameterVector {
    let cutoff = fraction * total as f64;
    let kept: Vec<&TraceRecord> = records.iter().filter(|r| r.step as f64 > cutoff).collect();
    let window: Vec<&TraceRecord> = if kept.is_empty() { records.last().into_iter().collect() } else { kept };
    if window.is_empty() {
        return ParameterVector::zero();
    }
    let mut sum = [0.0; TERMS];
    for r in &window {
        for (s, b) in sum.iter_mut().zip(r.beta.0.iter()) {
            *s += b;
        }
    }
    ParameterVector(sum.map(|s| s / window.len() as f64))
}

/// Closed-form edge parameters of `g0` with zero triangle coefficients.
///
/// Blocks whose count sits at 0 or at the maximum have no finite solution;
/// their target is pulled half an edge inside the boundary.
pub fn default_initial_parameters(g0: &LabeledGraph) -> ParameterVector {
    let census = TypeCensus::of(g0);
    let x = observables(g0).edge_counts();
    let clamped: [f64; 6] = std::array::from_fn(|k| {
        let max = max_edges(&census, EdgeTypePair::ALL[k]) as f64;
        if max == 0.0 {
            0.0
        } else {
            x[k].clamp(0.5, max - 0.5)
        }
    });
    let edges = closed_form_parameters(&clamped, &census).expect("targets lie strictly inside every block");
    ParameterVector::from_edge_parameters(edges)
}
