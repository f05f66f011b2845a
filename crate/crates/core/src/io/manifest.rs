//! JSON graph manifests, parameter files and plain edge lists.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BusType, LabeledGraph};
use crate::model::{ModelKind, ParameterVector};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: Option<String>,
    pub seed: Option<u64>,
    pub beta: Option<ParameterVector>,
}

/// Serialized topology: node types, original bus ids and 0-based edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphManifest {
    pub n: usize,
    pub bus_ids: Vec<u64>,
    pub types: Vec<BusType>,
    pub edges: Vec<(usize, usize)>,
    pub provenance: Provenance,
}

impl GraphManifest {
    /// Bus ids default to `0..n` when `bus_ids` is `None`.
    pub fn from_graph(g: &LabeledGraph, bus_ids: Option<&[u64]>, provenance: Provenance) -> Result<Self> {
        let bus_ids = match bus_ids {
            Some(ids) if ids.len() != g.n() => return Err(Error::DimensionMismatch(ids.len(), g.n())),
            Some(ids) => ids.to_vec(),
            None => (0..g.n() as u64).collect(),
        };
        Ok(Self { n: g.n(), bus_ids, types: g.types().to_vec(), edges: g.edges().collect(), provenance })
    }

    pub fn validate(&self) -> Result<()> {
        if self.types.len() != self.n {
            return Err(Error::Manifest(format!("{} types for {} nodes", self.types.len(), self.n)));
        }
        if self.bus_ids.len() != self.n {
            return Err(Error::Manifest(format!("{} bus ids for {} nodes", self.bus_ids.len(), self.n)));
        }
        let mut ids = HashSet::with_capacity(self.n);
        if let Some(dup) = self.bus_ids.iter().find(|&&id| !ids.insert(id)) {
            return Err(Error::Manifest(format!("duplicate bus id {dup}")));
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            if a == b || a >= self.n || b >= self.n {
                return Err(Error::Manifest(format!("invalid edge ({a}, {b})")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Manifest(format!("duplicate edge ({a}, {b})")));
            }
        }
        if let Some(beta) = &self.provenance.beta {
            if !beta.is_finite() {
                return Err(Error::NonFinite("manifest parameters"));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> Result<LabeledGraph> {
        self.validate()?;
        LabeledGraph::from_edges(self.types.clone(), self.edges.iter().copied())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Named parameter file written by estimation and the closed form and read
/// by the sampler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterFile {
    pub model: ModelKind,
    pub beta_pp: f64,
    pub beta_pl: f64,
    pub beta_pi: f64,
    pub beta_ll: f64,
    pub beta_li: f64,
    pub beta_ii: f64,
    pub beta_t1: f64,
    pub beta_t2: f64,
}

impl ParameterFile {
    pub fn new(model: ModelKind, beta: &ParameterVector) -> Self {
        let b = beta.0;
        Self {
            model,
            beta_pp: b[0],
            beta_pl: b[1],
            beta_pi: b[2],
            beta_ll: b[3],
            beta_li: b[4],
            beta_ii: b[5],
            beta_t1: b[6],
            beta_t2: b[7],
        }
    }

    pub fn parameters(&self) -> ParameterVector {
        ParameterVector([
            self.beta_pp,
            self.beta_pl,
            self.beta_pi,
            self.beta_ll,
            self.beta_li,
            self.beta_ii,
            self.beta_t1,
            self.beta_t2,
        ])
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let p: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if !p.parameters().is_finite() {
            return Err(Error::NonFinite("parameter file"));
        }
        Ok(p)
    }
}

/// `i j` per line, 0-based, in lexicographic order.
pub fn write_edge_list(g: &LabeledGraph) -> String {
    let mut s = String::with_capacity(g.m() * 8);
    for (i, j) in g.edges() {
        writeln!(s, "{i} {j}").expect("writing to a String");
    }
    s
}

/// Parses an edge list onto the given node types. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_edge_list(text: &str, types: Vec<BusType>) -> Result<LabeledGraph> {
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |s: Option<&str>| -> Result<usize> {
            s.and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse { line: k + 1, msg: format!("expected two node ids, got '{line}'") })
        };
        let mut parts = line.split_whitespace();
        let (i, j) = (parse(parts.next())?, parse(parts.next())?);
        if parts.next().is_some() {
            return Err(Error::Parse { line: k + 1, msg: format!("trailing data in '{line}'") });
        }
        edges.push((i, j));
    }
    LabeledGraph::from_edges(types, edges)
}
