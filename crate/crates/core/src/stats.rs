//! Topological statistics of bus-typed graphs.
//!
//! `t1` is the number of distinct triangles. The general k-triangle count is
//! `t_k = Σ_{(i,j) ∈ E} C(L_ij, k)` with `L_ij` the number of common
//! neighbors of the edge's endpoints, so `Σ_E L_ij = 3 t1`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BusType, EdgeTypePair, LabeledGraph};
use crate::model::ObservableVector;

/// Largest graph whose Laplacian spectrum is computed densely.
pub const DENSE_EIGEN_LIMIT: usize = 3000;

/// Edge counts per [`EdgeTypePair`], in canonical order.
pub fn edge_type_counts(g: &LabeledGraph) -> [u64; 6] {
    let mut counts = [0u64; 6];
    for (i, j) in g.edges() {
        counts[EdgeTypePair::new(g.bus_type(i), g.bus_type(j)).index()] += 1;
    }
    counts
}

/// `L_ij` for every edge, in the order of [`LabeledGraph::edges`].
pub fn edge_multiplicities(g: &LabeledGraph) -> Vec<usize> {
    g.edges().map(|(i, j)| g.common_neighbors(i, j)).collect()
}

/// Number of distinct triangles.
pub fn triangle_count(g: &LabeledGraph) -> u64 {
    let total: usize = edge_multiplicities(g).iter().sum();
    (total / 3) as u64
}

/// `t_k` for `k ≥ 2`.
pub fn k_triangle_count(g: &LabeledGraph, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain(format!("k-triangle order must be at least 2, got {k}")));
    }
    Ok(edge_multiplicities(g).into_iter().map(|l| binomial(l as u64, k as u64)).sum())
}

/// Alternating k-triangle statistic
/// `u_ζ = 3 t1 − t2/ζ + t3/ζ² − …`.
///
/// Summed per edge through the identity
/// `Σ_k (−1)^{k+1} C(L, k) / ζ^{k−1} = ζ (1 − (1 − 1/ζ)^L)`,
/// which avoids forming large binomials.
pub fn alternating_k_triangles(g: &LabeledGraph, zeta: f64) -> Result<f64> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(Error::Domain(format!("decay parameter must be positive, got {zeta}")));
    }
    let ratio = 1.0 - 1.0 / zeta;
    Ok(edge_multiplicities(g)
        .into_iter()
        .filter(|&l| l > 0)
        .map(|l| zeta * (1.0 - ratio.powi(l as i32)))
        .sum())
}

/// Local clustering coefficient of every node; zero when the degree is
/// below two.
pub fn local_clustering(g: &LabeledGraph) -> Vec<f64> {
    let mut twice_triangles = vec![0usize; g.n()];
    for (i, j) in g.edges() {
        let l = g.common_neighbors(i, j);
        twice_triangles[i] += l;
        twice_triangles[j] += l;
    }
    (0..g.n())
        .map(|i| {
            let k = g.degree(i);
            if k < 2 {
                0.0
            } else {
                // twice_triangles counts each triangle at i twice
                twice_triangles[i] as f64 / (k * (k - 1)) as f64
            }
        })
        .collect()
}

/// Mean local clustering coefficient.
pub fn clustering_coefficient(g: &LabeledGraph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    local_clustering(g).iter().sum::<f64>() / g.n() as f64
}

/// Shortest-path summary of a connected graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathStatistics {
    pub average_path_length: f64,
    pub diameter: usize,
}

/// All-sources BFS, parallel over sources.
pub fn path_statistics(g: &LabeledGraph) -> Result<PathStatistics> {
    let n = g.n();
    if n <= 1 {
        return Ok(PathStatistics { average_path_length: 0.0, diameter: 0 });
    }
    let per_source: Vec<Option<(u64, usize)>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![usize::MAX; n], Vec::with_capacity(n)),
            |(dist, queue), s| {
                dist.fill(usize::MAX);
                queue.clear();
                dist[s] = 0;
                queue.push(s);
                let mut head = 0;
                let (mut sum, mut far) = (0u64, 0usize);
                while head < queue.len() {
                    let u = queue[head];
                    head += 1;
                    let du = dist[u];
                    sum += du as u64;
                    far = far.max(du);
                    for &v in g.neighbors(u) {
                        if dist[v] == usize::MAX {
                            dist[v] = du + 1;
                            queue.push(v);
                        }
                    }
                }
                (queue.len() == n).then_some((sum, far))
            },
        )
        .collect();

    let mut total = 0u64;
    let mut diameter = 0usize;
    for r in per_source {
        let (sum, far) = r.ok_or(Error::Disconnected)?;
        total += sum;
        diameter = diameter.max(far);
    }
    Ok(PathStatistics { average_path_length: total as f64 / (n * (n - 1)) as f64, diameter })
}

/// Mean shortest-path length over ordered pairs of distinct nodes.
pub fn average_path_length(g: &LabeledGraph) -> Result<f64> {
    path_statistics(g).map(|p| p.average_path_length)
}

pub fn diameter(g: &LabeledGraph) -> Result<usize> {
    path_statistics(g).map(|p| p.diameter)
}

/// Second-smallest eigenvalue of the Laplacian `L = D − A`.
///
/// Dense symmetric eigendecomposition up to [`DENSE_EIGEN_LIMIT`] nodes,
/// block inverse iteration above. Disconnected graphs return 0.
pub fn algebraic_connectivity(g: &LabeledGraph) -> f64 {
    if g.n() < 2 || !g.is_connected() {
        return 0.0;
    }
    if g.n() <= DENSE_EIGEN_LIMIT {
        algebraic_connectivity_dense(g)
    } else {
        algebraic_connectivity_iterative(g)
    }
}

pub(crate) fn laplacian(g: &LabeledGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = g.degree(i) as f64;
        for &j in g.neighbors(i) {
            l[(i, j)] = -1.0;
        }
    }
    l
}

pub(crate) fn algebraic_connectivity_dense(g: &LabeledGraph) -> f64 {
    let eig = SymmetricEigen::new(laplacian(g));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values[1].max(0.0)
}

/// Inverse subspace iteration on the complement of the constant vector,
/// with conjugate-gradient solves and a Rayleigh-Ritz step per sweep.
/// Requires a connected graph so that `L` is positive definite there.
pub(crate) fn algebraic_connectivity_iterative(g: &LabeledGraph) -> f64 {
    const BLOCK: usize = 4;
    const MAX_SWEEPS: usize = 500;
    let n = g.n();
    let block = BLOCK.min(n - 1);

    let apply = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            let mut acc = g.degree(i) as f64 * x[i];
            for &j in g.neighbors(i) {
                acc -= x[j];
            }
            y[i] = acc;
        }
    };

    // deterministic, well-mixed starting block
    let mut basis: Vec<Vec<f64>> = (0..block)
        .map(|b| (0..n).map(|i| ((i * (b + 3) + 1) as f64 * 0.618_033_988_749_895).sin()).collect())
        .collect();
    orthonormalize(&mut basis);

    let mut estimate = f64::INFINITY;
    let mut scratch = vec![0.0; n];
    for _ in 0..MAX_SWEEPS {
        for v in basis.iter_mut() {
            let rhs = v.clone();
            conjugate_gradient(&apply, &rhs, v, 1e-12, 10 * n);
        }
        orthonormalize(&mut basis);

        let images: Vec<Vec<f64>> = basis
            .iter()
            .map(|v| {
                apply(v, &mut scratch);
                scratch.clone()
            })
            .collect();
        let projected = DMatrix::from_fn(block, block, |a, b| dotv(&basis[a], &images[b]));
        let eig = SymmetricEigen::new(projected);
        let (k, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty block");

        let ritz: Vec<f64> = (0..n).map(|i| (0..block).map(|b| eig.eigenvectors[(b, k)] * basis[b][i]).sum()).collect();
        let image: Vec<f64> = (0..n).map(|i| (0..block).map(|b| eig.eigenvectors[(b, k)] * images[b][i]).sum()).collect();
        let residual = image.iter().zip(&ritz).map(|(a, r)| (a - theta * r).powi(2)).sum::<f64>().sqrt();

        // rotate the block onto its Ritz vectors
        let rotated: Vec<Vec<f64>> = (0..block)
            .map(|c| (0..n).map(|i| (0..block).map(|b| eig.eigenvectors[(b, c)] * basis[b][i]).sum()).collect())
            .collect();
        basis = rotated;

        let converged = residual < 1e-9 || (estimate - theta).abs() < 1e-13;
        estimate = theta;
        if converged {
            break;
        }
    }
    estimate.max(0.0)
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt (twice) against the constant vector and each other.
fn orthonormalize(vectors: &mut [Vec<f64>]) {
    for k in 0..vectors.len() {
        for _ in 0..2 {
            let mean = vectors[k].iter().sum::<f64>() / vectors[k].len() as f64;
            vectors[k].iter_mut().for_each(|x| *x -= mean);
            for p in 0..k {
                let c = dotv(&vectors[k], &vectors[p]);
                let (head, tail) = vectors.split_at_mut(k);
                tail[0].iter_mut().zip(&head[p]).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dotv(&vectors[k], &vectors[k]).sqrt();
        vectors[k].iter_mut().for_each(|x| *x /= norm);
    }
}

fn conjugate_gradient<F>(apply: &F, rhs: &[f64], x: &mut [f64], tol: f64, max_iter: usize)
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = rhs.len();
    x.fill(0.0);
    let mut r = rhs.to_vec();
    let mean = r.iter().sum::<f64>() / n as f64;
    r.iter_mut().for_each(|v| *v -= mean);
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let target = tol * dotv(&r, &r).sqrt();
    let mut rr = dotv(&r, &r);
    for _ in 0..max_iter {
        if rr.sqrt() <= target {
            break;
        }
        apply(&p, &mut ap);
        let alpha = rr / dotv(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        let next = dotv(&r, &r);
        let beta = next / rr;
        rr = next;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
}

/// Mean degree of the nodes of each type, `(⟨k_P⟩, ⟨k_L⟩, ⟨k_I⟩)`. A type
/// with no nodes reports 0.
pub fn degree_by_type(g: &LabeledGraph) -> [f64; 3] {
    let mut degree_sum = [0usize; 3];
    let mut count = [0usize; 3];
    for i in 0..g.n() {
        let t = g.bus_type(i).index();
        degree_sum[t] += g.degree(i);
        count[t] += 1;
    }
    std::array::from_fn(|t| if count[t] == 0 { 0.0 } else { degree_sum[t] as f64 / count[t] as f64 })
}

/// Fraction of nodes of each type.
pub fn type_shares(g: &LabeledGraph) -> [f64; 3] {
    let mut count = [0usize; 3];
    for &t in g.types() {
        count[t.index()] += 1;
    }
    if g.n() == 0 {
        return [0.0; 3];
    }
    count.map(|c| c as f64 / g.n() as f64)
}

/// The Hamiltonian's eight statistics.
pub fn observables(g: &LabeledGraph) -> ObservableVector {
    let mut x = ObservableVector::zero();
    for (k, c) in edge_type_counts(g).into_iter().enumerate() {
        x[k] = c as f64;
    }
    let mut sum = 0usize;
    let mut two = 0u64;
    for l in edge_multiplicities(g) {
        sum += l;
        two += binomial(l as u64, 2);
    }
    x[crate::model::T1] = (sum / 3) as f64;
    x[crate::model::T2] = two as f64;
    x
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// One row of topological statistics for a graph, or a column-wise mean or
/// standard deviation over an ensemble. Counts are stored as reals so the
/// same record carries aggregates.
///
/// `average_path_length` and `diameter` are infinite for disconnected
/// graphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub n: f64,
    pub m: f64,
    pub mean_degree: f64,
    pub mean_degree_p: f64,
    pub mean_degree_l: f64,
    pub mean_degree_i: f64,
    pub share_p: f64,
    pub share_l: f64,
    pub share_i: f64,
    pub triangles: f64,
    pub two_triangles: f64,
    pub algebraic_connectivity: f64,
    pub clustering: f64,
    pub average_path_length: f64,
    pub diameter: f64,
}

impl GridReport {
    pub const COLUMNS: usize = 15;

    pub fn from_graph(g: &LabeledGraph) -> Self {
        let n = g.n();
        let m = g.m();
        let by_type = degree_by_type(g);
        let shares = type_shares(g);
        let x = observables(g);
        let paths = path_statistics(g).ok();
        GridReport {
            n: n as f64,
            m: m as f64,
            mean_degree: if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 },
            mean_degree_p: by_type[BusType::Generator.index()],
            mean_degree_l: by_type[BusType::Load.index()],
            mean_degree_i: by_type[BusType::Interconnection.index()],
            share_p: shares[0],
            share_l: shares[1],
            share_i: shares[2],
            triangles: x[crate::model::T1],
            two_triangles: x[crate::model::T2],
            algebraic_connectivity: algebraic_connectivity(g),
            clustering: clustering_coefficient(g),
            average_path_length: paths.map_or(f64::INFINITY, |p| p.average_path_length),
            diameter: paths.map_or(f64::INFINITY, |p| p.diameter as f64),
        }
    }

    pub fn to_array(&self) -> [f64; Self::COLUMNS] {
        [
            self.n,
            self.m,
            self.mean_degree,
            self.mean_degree_p,
            self.mean_degree_l,
            self.mean_degree_i,
            self.share_p,
            self.share_l,
            self.share_i,
            self.triangles,
            self.two_triangles,
            self.algebraic_connectivity,
            self.clustering,
            self.average_path_length,
            self.diameter,
        ]
    }

    pub fn from_array(a: [f64; Self::COLUMNS]) -> Self {
        GridReport {
            n: a[0],
            m: a[1],
            mean_degree: a[2],
            mean_degree_p: a[3],
            mean_degree_l: a[4],
            mean_degree_i: a[5],
            share_p: a[6],
            share_l: a[7],
            share_i: a[8],
            triangles: a[9],
            two_triangles: a[10],
            algebraic_connectivity: a[11],
            clustering: a[12],
            average_path_length: a[13],
            diameter: a[14],
        }
    }
}

/// Column-wise mean and unbiased standard deviation over several reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub count: usize,
    pub mean: GridReport,
    pub std: GridReport,
}

impl ReportSummary {
    /// A single report has standard deviation zero by convention.
    pub fn from_reports(reports: &[GridReport]) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::EmptyInput("ensemble has no members"));
        }
        let count = reports.len();
        let rows: Vec<[f64; GridReport::COLUMNS]> = reports.iter().map(GridReport::to_array).collect();
        let mean: [f64; GridReport::COLUMNS] =
            std::array::from_fn(|c| rows.iter().map(|r| r[c]).sum::<f64>() / count as f64);
        let std: [f64; GridReport::COLUMNS] = std::array::from_fn(|c| {
            if count < 2 {
                return 0.0;
            }
            let ss: f64 = rows.iter().map(|r| (r[c] - mean[c]).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        });
        Ok(ReportSummary { count, mean: GridReport::from_array(mean), std: GridReport::from_array(std) })
    }
}
