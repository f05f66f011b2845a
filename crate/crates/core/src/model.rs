//! The computable surface of the ERG density: the eight-term Hamiltonian,
//! observable changes under a single edge toggle, and Metropolis-Hastings
//! acceptance arithmetic.
//!
//! The partition function never appears. Everything the chains need is the
//! difference `H(G') - H(G) = β · Δx` for graphs one edge apart.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeTypePair, LabeledGraph};

/// Number of terms in the Hamiltonian.
pub const TERMS: usize = 8;
/// Index of the triangle count in observable and parameter vectors.
pub const T1: usize = 6;
/// Index of the 2-triangle count.
pub const T2: usize = 7;

/// Column names shared by trace files and parameter files.
pub const PARAMETER_NAMES: [&str; TERMS] =
    ["beta_pp", "beta_pl", "beta_pi", "beta_ll", "beta_li", "beta_ii", "beta_t1", "beta_t2"];

pub const OBSERVABLE_NAMES: [&str; TERMS] = ["e_pp", "e_pl", "e_pi", "e_ll", "e_li", "e_ii", "t1", "t2"];

macro_rules! term_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
        pub struct $name(pub [f64; TERMS]);

        impl $name {
            pub const fn zero() -> Self {
                Self([0.0; TERMS])
            }

            pub fn as_array(&self) -> &[f64; TERMS] {
                &self.0
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $name {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }

        impl From<[f64; TERMS]> for $name {
            fn from(v: [f64; TERMS]) -> Self {
                Self(v)
            }
        }
    };
}

term_vector! {
    /// `(e_PP, e_PL, e_PI, e_LL, e_LI, e_II, t1, t2)`; counts held as reals.
    ObservableVector
}

term_vector! {
    /// Coefficients paired index-wise with [`ObservableVector`].
    ParameterVector
}

term_vector! {
    /// Change of the observables caused by toggling one node pair.
    ObservableDelta
}

impl ObservableVector {
    /// Six edge-type counts.
    pub fn edge_counts(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        out.copy_from_slice(&self.0[..6]);
        out
    }

    pub fn apply(&mut self, delta: &ObservableDelta) {
        for (x, d) in self.0.iter_mut().zip(delta.0.iter()) {
            *x += d;
        }
    }
}

impl ParameterVector {
    /// Parameter vector with the six edge coefficients set and both triangle
    /// coefficients zero.
    pub fn from_edge_parameters(edges: [f64; 6]) -> Self {
        let mut v = [0.0; TERMS];
        v[..6].copy_from_slice(&edges);
        Self(v)
    }

    pub fn edge_parameters(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        out.copy_from_slice(&self.0[..6]);
        out
    }

    /// `β_1t · β_2t ≤ 0`.
    pub fn satisfies_triangle_sign(&self) -> bool {
        self.0[T1] * self.0[T2] <= 0.0
    }
}

impl ObservableDelta {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

/// Which Hamiltonian terms are in play.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Six edge-type counts plus triangles and 2-triangles.
    #[default]
    Full,
    /// Six edge-type counts only; admits a closed-form free energy.
    Edges,
}

impl ModelKind {
    #[inline]
    pub fn is_active(self, term: usize) -> bool {
        match self {
            ModelKind::Full => term < TERMS,
            ModelKind::Edges => term < 6,
        }
    }

    #[inline]
    pub fn has_triangles(self) -> bool {
        self == ModelKind::Full
    }

    /// The cheapest model that still sees every non-zero coefficient.
    pub fn for_parameters(beta: &ParameterVector) -> Self {
        if beta[T1] == 0.0 && beta[T2] == 0.0 {
            ModelKind::Edges
        } else {
            ModelKind::Full
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Full => "full",
            ModelKind::Edges => "edges",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(ModelKind::Full),
            "edges" => Ok(ModelKind::Edges),
            other => Err(Error::Config(format!("unknown model '{other}' (expected full or edges)"))),
        }
    }
}

/// `H_β(x) = Σ β_i x_i`.
pub fn hamiltonian(x: &ObservableVector, beta: &ParameterVector) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("observables"));
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("parameters"));
    }
    Ok(dot(&x.0, &beta.0))
}

/// Observable change caused by toggling `(i, j)` in `g`, all eight terms.
pub fn toggle_delta(g: &LabeledGraph, i: usize, j: usize) -> Result<ObservableDelta> {
    toggle_delta_for(g, i, j, ModelKind::Full)
}

/// As [`toggle_delta`], restricted to the terms of `model`. Inactive
/// entries are left at zero, which skips the neighborhood scans when only
/// edge counts matter.
///
/// For an addition (`s = +1`) with `L = |N_i ∩ N_j|`, the triangle count
/// grows by `L` and the 2-triangle count by `C(L, 2)` for the new base edge
/// plus, for every common neighbor `w`, the current multiplicities of the
/// side edges `(i, w)` and `(j, w)`. A removal mirrors this with the side
/// multiplicities measured in the graph without `(i, j)`.
pub fn toggle_delta_for(g: &LabeledGraph, i: usize, j: usize, model: ModelKind) -> Result<ObservableDelta> {
    g.check_pair(i, j)?;
    let present = g.has_edge(i, j);
    let s = if present { -1.0 } else { 1.0 };

    let mut d = ObservableDelta::zero();
    d[EdgeTypePair::new(g.bus_type(i), g.bus_type(j)).index()] = s;

    if model.has_triangles() {
        // each side edge (i,w) currently counts j as a common neighbor iff (i,j) is present
        let correction = usize::from(present);
        let mut l = 0usize;
        let mut side = 0usize;
        g.for_each_common_neighbor(i, j, |w| {
            l += 1;
            side += g.common_neighbors(i, w) - correction;
            side += g.common_neighbors(j, w) - correction;
        });
        d[T1] = s * l as f64;
        d[T2] = s * (choose2(l) + side) as f64;
    }
    Ok(d)
}

/// `β · Δx`, the log of the unclamped Metropolis-Hastings ratio.
#[inline]
pub fn log_acceptance_ratio(delta: &ObservableDelta, beta: &ParameterVector) -> f64 {
    dot(&delta.0, &beta.0)
}

/// `min(1, exp(log_ratio))`.
#[inline]
pub fn acceptance_probability(log_ratio: f64) -> f64 {
    if log_ratio >= 0.0 {
        1.0
    } else {
        log_ratio.exp()
    }
}

#[inline]
fn dot(a: &[f64; TERMS], b: &[f64; TERMS]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

#[inline]
fn choose2(l: usize) -> usize {
    l * l.saturating_sub(1) / 2
}
