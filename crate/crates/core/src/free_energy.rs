//! Exact solution of the edges-only model.
//!
//! With a Hamiltonian that is linear in the six edge-type counts, every
//! candidate node pair is an independent Bernoulli variable with success
//! probability `σ(β_ab)` for its type pair. The partition function factors
//! as `Z = Π (1 + e^β_i)^M_i`, the free energy is `F = Σ M_i ln(1 + e^β_i)`,
//! and the moment condition `∂F/∂β_i = x̄_i` inverts to a logit.
//!
//! This model ignores connectivity; it is the unconstrained baseline that
//! the constrained estimator is compared against.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{BusType, EdgeTypePair, LabeledGraph};

/// Node counts per bus type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeCensus {
    pub generators: u64,
    pub loads: u64,
    pub interconnections: u64,
}

impl TypeCensus {
    pub fn new(generators: u64, loads: u64, interconnections: u64) -> Self {
        Self { generators, loads, interconnections }
    }

    pub fn of(g: &LabeledGraph) -> Self {
        let mut c = Self::default();
        for &t in g.types() {
            *c.count_mut(t) += 1;
        }
        c
    }

    pub fn count(&self, t: BusType) -> u64 {
        match t {
            BusType::Generator => self.generators,
            BusType::Load => self.loads,
            BusType::Interconnection => self.interconnections,
        }
    }

    fn count_mut(&mut self, t: BusType) -> &mut u64 {
        match t {
            BusType::Generator => &mut self.generators,
            BusType::Load => &mut self.loads,
            BusType::Interconnection => &mut self.interconnections,
        }
    }

    pub fn n(&self) -> u64 {
        self.generators + self.loads + self.interconnections
    }

    /// Node types laid out as all generators, then loads, then
    /// interconnections.
    pub fn types(&self) -> Vec<BusType> {
        BusType::ALL
            .iter()
            .flat_map(|&t| std::iter::repeat(t).take(self.count(t) as usize))
            .collect()
    }
}

/// Number of node pairs whose endpoint types are `pair`.
///
/// Same-type blocks count unordered pairs, `|a|(|a|−1)/2`.
pub fn max_edges(census: &TypeCensus, pair: EdgeTypePair) -> u64 {
    let (a, b) = pair.endpoints();
    let (na, nb) = (census.count(a), census.count(b));
    if a == b {
        na * na.saturating_sub(1) / 2
    } else {
        na * nb
    }
}

/// Maximum edge counts for all six blocks, in canonical order.
pub fn max_edges_all(census: &TypeCensus) -> [u64; 6] {
    EdgeTypePair::ALL.map(|p| max_edges(census, p))
}

/// Parameters whose exact mean reproduces `targets`:
/// `β_i = ln(x̄_i / (M_i − x̄_i))`.
///
/// Blocks with no candidate pairs get `β = 0`; they carry no edges under any
/// parameter. A target at 0 or at `M_i` has no finite solution.
pub fn closed_form_parameters(targets: &[f64; 6], census: &TypeCensus) -> Result<[f64; 6]> {
    let mut beta = [0.0; 6];
    for pair in EdgeTypePair::ALL {
        let k = pair.index();
        let max = max_edges(census, pair);
        let x = targets[k];
        if !x.is_finite() {
            return Err(Error::NonFinite("targets"));
        }
        if max == 0 && x == 0.0 {
            continue;
        }
        if x <= 0.0 || x >= max as f64 {
            return Err(Error::Boundary { pair, target: x, max });
        }
        beta[k] = (x / (max as f64 - x)).ln();
    }
    Ok(beta)
}

/// Expected edge count per block, `M_i σ(β_i)`.
pub fn exact_mean(beta: &[f64; 6], census: &TypeCensus) -> [f64; 6] {
    std::array::from_fn(|k| max_edges(census, EdgeTypePair::ALL[k]) as f64 * logistic(beta[k]))
}

/// Variance of each block's edge count, `M_i σ(β_i)(1 − σ(β_i))`.
pub fn exact_variance(beta: &[f64; 6], census: &TypeCensus) -> [f64; 6] {
    std::array::from_fn(|k| {
        let p = logistic(beta[k]);
        max_edges(census, EdgeTypePair::ALL[k]) as f64 * p * (1.0 - p)
    })
}

/// `F = ln Z = Σ M_i ln(1 + e^β_i)`.
pub fn free_energy(beta: &[f64; 6], census: &TypeCensus) -> f64 {
    (0..6).map(|k| max_edges(census, EdgeTypePair::ALL[k]) as f64 * softplus(beta[k])).sum()
}

pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Independent-edge draw on `census.types()`. The result may be
/// disconnected.
pub fn sample_simple_model<R: Rng + ?Sized>(beta: &[f64; 6], census: &TypeCensus, rng: &mut R) -> LabeledGraph {
    sample_simple_model_on(census.types(), beta, rng)
}

/// Independent-edge draw keeping a given node labeling.
///
/// Each block is scanned with geometric skips between successes, so a draw
/// costs time proportional to the number of edges produced rather than the
/// number of candidate pairs.
pub fn sample_simple_model_on<R: Rng + ?Sized>(types: Vec<BusType>, beta: &[f64; 6], rng: &mut R) -> LabeledGraph {
    let mut members: [Vec<usize>; 3] = Default::default();
    for (i, t) in types.iter().enumerate() {
        members[t.index()].push(i);
    }
    let mut edges = Vec::new();
    for pair in EdgeTypePair::ALL {
        let p = logistic(beta[pair.index()]);
        if p <= 0.0 {
            continue;
        }
        let (a, b) = pair.endpoints();
        let (ma, mb) = (&members[a.index()], &members[b.index()]);
        let total = if a == b { ma.len() * ma.len().saturating_sub(1) / 2 } else { ma.len() * mb.len() } as u64;
        let log_q = (-p).ln_1p();
        let mut pos = 0u64;
        loop {
            pos = pos.saturating_add(geometric_skip(log_q, rng));
            if pos >= total {
                break;
            }
            edges.push(if a == b { unrank_pair(ma, pos) } else { (ma[(pos / mb.len() as u64) as usize], mb[(pos % mb.len() as u64) as usize]) });
            pos += 1;
        }
    }
    LabeledGraph::from_edges(types, edges).expect("blocks enumerate distinct pairs")
}

/// Failures before the first success, by inversion: `⌊ln U / ln(1 − p)⌋`
/// with `log_q = ln(1 − p)`.
fn geometric_skip<R: Rng + ?Sized>(log_q: f64, rng: &mut R) -> u64 {
    if log_q == f64::NEG_INFINITY {
        return 0;
    }
    let u: f64 = 1.0 - rng.gen::<f64>();
    let k = (u.ln() / log_q).floor();
    if k >= u64::MAX as f64 {
        u64::MAX
    } else {
        k as u64
    }
}

/// Maps `rank` in `0..C(s, 2)` to the pair `(u, v)`, `u < v`, of a sorted
/// member list, row by row.
fn unrank_pair(members: &[usize], rank: u64) -> (usize, usize) {
    let s = members.len() as u64;
    // row r holds pairs (r, r+1..s); rows before r hold r*s - r(r+1)/2 pairs
    let before = |r: u64| r * s - r * (r + 1) / 2;
    let (mut lo, mut hi) = (0u64, s - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if before(mid) <= rank {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = if before(hi) <= rank { hi } else { lo };
    let c = r + 1 + (rank - before(r));
    (members[r as usize], members[c as usize])
}
