//! Bus-typed simple undirected graphs.
//!
//! Nodes are dense indices `0..n`; original bus numbers live only in the
//! MATPOWER mapping kept by [`crate::io`]. Neighbor lists are kept sorted so
//! common-neighbor counts are a linear merge, which is the inner loop of
//! every chain step.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a bus in the transmission network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BusType {
    #[serde(rename = "P")]
    Generator,
    #[serde(rename = "L")]
    Load,
    #[serde(rename = "I")]
    Interconnection,
}

impl BusType {
    pub const ALL: [BusType; 3] = [BusType::Generator, BusType::Load, BusType::Interconnection];

    pub fn index(self) -> usize {
        match self {
            BusType::Generator => 0,
            BusType::Load => 1,
            BusType::Interconnection => 2,
        }
    }

    pub fn code(self) -> char {
        match self {
            BusType::Generator => 'P',
            BusType::Load => 'L',
            BusType::Interconnection => 'I',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'P' => Some(BusType::Generator),
            'L' => Some(BusType::Load),
            'I' => Some(BusType::Interconnection),
            _ => None,
        }
    }
}

impl fmt::Display for BusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Unordered pair of bus types, i.e. one block of the edge-set partition.
///
/// The canonical order `PP, PL, PI, LL, LI, II` is the order of the first six
/// entries of every observable and parameter vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeTypePair {
    PP,
    PL,
    PI,
    LL,
    LI,
    II,
}

impl EdgeTypePair {
    pub const ALL: [EdgeTypePair; 6] = [
        EdgeTypePair::PP,
        EdgeTypePair::PL,
        EdgeTypePair::PI,
        EdgeTypePair::LL,
        EdgeTypePair::LI,
        EdgeTypePair::II,
    ];

    pub fn new(a: BusType, b: BusType) -> Self {
        use BusType::*;
        match (a, b) {
            (Generator, Generator) => EdgeTypePair::PP,
            (Generator, Load) | (Load, Generator) => EdgeTypePair::PL,
            (Generator, Interconnection) | (Interconnection, Generator) => EdgeTypePair::PI,
            (Load, Load) => EdgeTypePair::LL,
            (Load, Interconnection) | (Interconnection, Load) => EdgeTypePair::LI,
            (Interconnection, Interconnection) => EdgeTypePair::II,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn endpoints(self) -> (BusType, BusType) {
        use BusType::*;
        match self {
            EdgeTypePair::PP => (Generator, Generator),
            EdgeTypePair::PL => (Generator, Load),
            EdgeTypePair::PI => (Generator, Interconnection),
            EdgeTypePair::LL => (Load, Load),
            EdgeTypePair::LI => (Load, Interconnection),
            EdgeTypePair::II => (Interconnection, Interconnection),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeTypePair::PP => "PP",
            EdgeTypePair::PL => "PL",
            EdgeTypePair::PI => "PI",
            EdgeTypePair::LL => "LL",
            EdgeTypePair::LI => "LI",
            EdgeTypePair::II => "II",
        }
    }
}

impl fmt::Display for EdgeTypePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of [`LabeledGraph::toggle_edge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgePresence {
    Added,
    Removed,
}

/// Simple undirected graph whose nodes carry a [`BusType`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    types: Vec<BusType>,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl LabeledGraph {
    /// Edgeless graph with one node per entry of `types`.
    pub fn new(types: Vec<BusType>) -> Self {
        let adj = vec![Vec::new(); types.len()];
        Self { types, adj, m: 0 }
    }

    /// Edgeless graph on `n` nodes that all share one type.
    pub fn uniform(n: usize, t: BusType) -> Self {
        Self::new(vec![t; n])
    }

    /// Builds a graph from an edge list. Self-loops, out-of-range ids and
    /// repeated pairs are rejected.
    pub fn from_edges<I>(types: Vec<BusType>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(types);
        for (i, j) in edges {
            g.check_pair(i, j)?;
            if g.has_edge(i, j) {
                return Err(Error::Domain(format!("duplicate edge ({i}, {j})")));
            }
            g.insert(i, j);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.types.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn bus_type(&self, i: usize) -> BusType {
        self.types[i]
    }

    pub fn types(&self) -> &[BusType] {
        &self.types
    }

    /// Sorted neighbor list of `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        // search the shorter list
        let (a, b) = if self.adj[i].len() <= self.adj[j].len() { (i, j) } else { (j, i) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// Adds `(i, j)` if absent, removes it otherwise.
    pub fn toggle_edge(&mut self, i: usize, j: usize) -> Result<EdgePresence> {
        self.check_pair(i, j)?;
        if self.has_edge(i, j) {
            self.erase(i, j);
            Ok(EdgePresence::Removed)
        } else {
            self.insert(i, j);
            Ok(EdgePresence::Added)
        }
    }

    /// True iff a traversal from node 0 reaches every node. The empty graph
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }

    /// Whether `j` stays reachable from `i` once the edge `(i, j)` is
    /// dropped. The graph is not modified.
    pub fn removal_keeps_connected(&self, i: usize, j: usize) -> Result<bool> {
        self.check_pair(i, j)?;
        if !self.has_edge(i, j) {
            return Err(Error::MissingEdge(i, j));
        }
        Ok(ReachabilityProbe::new(self.n()).bridge_free(self, i, j))
    }

    /// `|N(i) ∩ N(j)|`; `(i, j)` need not be an edge.
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        let mut count = 0;
        self.for_each_common_neighbor(i, j, |_| count += 1);
        count
    }

    /// Calls `f` on every common neighbor of `i` and `j`, in increasing order.
    #[inline]
    pub fn for_each_common_neighbor<F: FnMut(usize)>(&self, i: usize, j: usize, mut f: F) {
        let (a, b) = (&self.adj[i], &self.adj[j]);
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    f(a[x]);
                    x += 1;
                    y += 1;
                }
            }
        }
    }

    /// `|E_self △ E_other|`. The adjacency-matrix Hamming distance is twice
    /// this value.
    pub fn edge_symmetric_difference(&self, other: &LabeledGraph) -> Result<usize> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        let mut diff = 0;
        for i in 0..self.n() {
            let a = upper(&self.adj[i], i);
            let b = upper(&other.adj[i], i);
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    std::cmp::Ordering::Less => {
                        diff += 1;
                        x += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        diff += 1;
                        y += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        x += 1;
                        y += 1;
                    }
                }
            }
            diff += (a.len() - x) + (b.len() - y);
        }
        Ok(diff)
    }

    pub(crate) fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j || i >= self.n() || j >= self.n() {
            return Err(Error::InvalidNode(i, j));
        }
        Ok(())
    }

    fn insert(&mut self, i: usize, j: usize) {
        for (u, v) in [(i, j), (j, i)] {
            let list = &mut self.adj[u];
            if let Err(pos) = list.binary_search(&v) {
                list.insert(pos, v);
            }
        }
        self.m += 1;
    }

    fn erase(&mut self, i: usize, j: usize) {
        for (u, v) in [(i, j), (j, i)] {
            let list = &mut self.adj[u];
            if let Ok(pos) = list.binary_search(&v) {
                list.remove(pos);
            }
        }
        self.m -= 1;
    }
}

fn upper(list: &[usize], i: usize) -> &[usize] {
    let start = list.partition_point(|&v| v <= i);
    &list[start..]
}

/// Reusable scratch space for repeated "is this edge a bridge?" queries.
///
/// Runs two breadth-first searches, one from each endpoint, expanding
/// whichever frontier is smaller. The query stops as soon as the searches
/// meet or one side runs out, so removing a pendant edge costs O(1) and a
/// chord in a local cycle costs a handful of steps.
#[derive(Clone, Debug)]
pub struct ReachabilityProbe {
    mark: Vec<u32>,
    epoch: u32,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl ReachabilityProbe {
    pub fn new(n: usize) -> Self {
        Self { mark: vec![0; n], epoch: 0, side_a: Vec::new(), side_b: Vec::new() }
    }

    /// True iff `j` is reachable from `i` without using the edge `(i, j)`.
    /// The edge is assumed present.
    pub fn bridge_free(&mut self, g: &LabeledGraph, i: usize, j: usize) -> bool {
        if self.mark.len() != g.n() {
            self.mark = vec![0; g.n()];
            self.epoch = 0;
        }
        if self.epoch >= u32::MAX - 2 {
            self.mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 2;
        let (ma, mb) = (self.epoch - 1, self.epoch);

        self.side_a.clear();
        self.side_b.clear();
        self.side_a.push(i);
        self.side_b.push(j);
        self.mark[i] = ma;
        self.mark[j] = mb;
        let (mut ha, mut hb) = (0, 0);

        loop {
            let open_a = self.side_a.len() - ha;
            let open_b = self.side_b.len() - hb;
            if open_a == 0 || open_b == 0 {
                return false;
            }
            let expand_a = open_a <= open_b;
            let (queue, head, own, other) = if expand_a {
                (&mut self.side_a, &mut ha, ma, mb)
            } else {
                (&mut self.side_b, &mut hb, mb, ma)
            };
            let u = queue[*head];
            *head += 1;
            for &v in g.neighbors(u) {
                if (u == i && v == j) || (u == j && v == i) {
                    continue;
                }
                let mv = self.mark[v];
                if mv == other {
                    return true;
                }
                if mv != own {
                    self.mark[v] = own;
                    queue.push(v);
                }
            }
        }
    }
}
