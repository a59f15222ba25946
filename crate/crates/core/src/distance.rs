//! Pairwise granule distances.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use ordered_float::OrderedFloat;
use rayon::prelude::*;

use crate::error::{GltError, Result};
use crate::graph::Graph;
use crate::numfmt::fmt_sig;

pub const DEFAULT_DECAY: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceMetric {
    ShortestPath,
    WeightedShortestPath,
    Jaccard,
    SimRank,
    Euclidean,
    Custom(String),
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShortestPath => f.write_str("shortest-path"),
            Self::WeightedShortestPath => f.write_str("weighted-shortest-path"),
            Self::Jaccard => f.write_str("jaccard"),
            Self::SimRank => f.write_str("simrank"),
            Self::Euclidean => f.write_str("euclidean"),
            Self::Custom(name) => f.write_str(name),
        }
    }
}

/// Dense symmetric matrix with zero diagonal; entries may be `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
    metric: DistanceMetric,
}

impl DistanceMatrix {
    /// Validates a row-major `n x n` matrix.
    pub fn from_row_major(n: usize, data: Vec<f64>, metric: DistanceMetric) -> Result<Self> {
        if data.len() != n * n {
            return Err(GltError::InvalidParameter(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let d = data[i * n + j];
                if d.is_nan() {
                    return Err(GltError::NanDistance(i, j));
                }
                let bad = if i == j {
                    d != 0.0
                } else {
                    d < 0.0 || d != data[j * n + i]
                };
                if bad {
                    return Err(GltError::InvalidParameter(format!(
                        "entry ({i}, {j}) = {d} breaks symmetry, zero diagonal or nonnegativity"
                    )));
                }
            }
        }
        Ok(Self { n, data, metric })
    }

    /// Builds from `f(i, j)` evaluated for `i < j`.
    pub fn from_fn<F>(n: usize, metric: DistanceMetric, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64,
    {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self::from_row_major(n, data, metric)
    }

    pub(crate) fn from_rows_unchecked(n: usize, data: Vec<f64>, metric: DistanceMetric) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data, metric }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn metric(&self) -> &DistanceMetric {
        &self.metric
    }

    /// Largest finite entry, 0 for matrices with no off-diagonal finite pair.
    pub fn max_finite(&self) -> f64 {
        self.data
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(GltError::InvalidParameter(format!(
                "scale must be positive, got {c}"
            )));
        }
        let data = self.data.iter().map(|d| d * c).collect();
        Ok(Self {
            n: self.n,
            data,
            metric: self.metric.clone(),
        })
    }

    /// Header row of labels, then one row per granule; `inf` for infinity.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut out = String::from("label");
        for l in labels {
            out.push('\t');
            out.push_str(l);
        }
        out.push('\n');
        for i in 0..self.n {
            out.push_str(&labels[i]);
            for &d in self.row(i) {
                out.push('\t');
                out.push_str(&fmt_sig(d, 12));
            }
            out.push('\n');
        }
        out
    }
}

/// Copies the upper triangle onto the lower one so floating-point results
/// do not depend on which endpoint was the source.
fn mirror_upper(n: usize, data: &mut [f64]) {
    for i in 0..n {
        for j in i + 1..n {
            data[j * n + i] = data[i * n + j];
        }
    }
}

fn bfs_row(g: &Graph, s: usize, row: &mut [f64]) {
    row.iter_mut().for_each(|d| *d = f64::INFINITY);
    row[s] = 0.0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let next = row[v] + 1.0;
        for &w in g.neighbors(v) {
            if row[w].is_infinite() {
                row[w] = next;
                queue.push_back(w);
            }
        }
    }
}

fn dijkstra_row(g: &Graph, s: usize, row: &mut [f64]) {
    row.iter_mut().for_each(|d| *d = f64::INFINITY);
    row[s] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((OrderedFloat(0.0), s))]);
    while let Some(Reverse((OrderedFloat(d), v))) = heap.pop() {
        if d > row[v] {
            continue;
        }
        for (&w, &len) in g.neighbors(v).iter().zip(g.neighbor_weights(v)) {
            let cand = d + len;
            if cand < row[w] {
                row[w] = cand;
                heap.push(Reverse((OrderedFloat(cand), w)));
            }
        }
    }
}

/// All-pairs geodesic lengths: BFS hop counts, or Dijkstra over edge
/// weights when `use_weights` is set. Unreachable pairs are `inf`.
pub fn shortest_path_matrix(g: &Graph, use_weights: bool) -> DistanceMatrix {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    if n > 0 {
        data.par_chunks_mut(n).enumerate().for_each(|(s, row)| {
            if use_weights {
                dijkstra_row(g, s, row)
            } else {
                bfs_row(g, s, row)
            }
        });
    }
    let metric = if use_weights {
        mirror_upper(n, &mut data);
        DistanceMetric::WeightedShortestPath
    } else {
        DistanceMetric::ShortestPath
    };
    DistanceMatrix::from_rows_unchecked(n, data, metric)
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `1 - |N(u) ∩ N(v)| / |N(u) ∪ N(v)|` over open neighborhoods. Two
/// vertices without neighbors are at distance 1.
pub fn jaccard_distance_matrix(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    if n > 0 {
        data.par_chunks_mut(n).enumerate().for_each(|(u, row)| {
            let nu = g.neighbors(u);
            for (v, d) in row.iter_mut().enumerate().skip(u + 1) {
                let nv = g.neighbors(v);
                let inter = sorted_intersection(nu, nv);
                let union = nu.len() + nv.len() - inter;
                *d = if union == 0 {
                    1.0
                } else {
                    1.0 - inter as f64 / union as f64
                };
            }
        });
    }
    mirror_upper(n, &mut data);
    DistanceMatrix::from_rows_unchecked(n, data, DistanceMetric::Jaccard)
}

/// One SimRank sweep: `s'(a,b) = C / (|N(a)||N(b)|) * sum s(i,j)` over
/// neighbor pairs, diagonal pinned to 1. Returns the new matrix.
pub(crate) fn simrank_step(g: &Graph, decay: f64, s: &[f64]) -> Vec<f64> {
    let n = g.n();
    // partial[i][b] = mean over j in N(b) of s(i, j)
    let mut partial = vec![0.0; n * n];
    partial.par_chunks_mut(n).enumerate().for_each(|(i, prow)| {
        let srow = &s[i * n..(i + 1) * n];
        for (b, p) in prow.iter_mut().enumerate() {
            let nb = g.neighbors(b);
            if !nb.is_empty() {
                *p = nb.iter().map(|&j| srow[j]).sum::<f64>() / nb.len() as f64;
            }
        }
    });
    let mut next = vec![0.0; n * n];
    next.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        let na = g.neighbors(a);
        row[a] = 1.0;
        if na.is_empty() {
            return;
        }
        let scale = decay / na.len() as f64;
        for b in a + 1..n {
            if g.degree(b) == 0 {
                continue;
            }
            row[b] = scale * na.iter().map(|&i| partial[i * n + b]).sum::<f64>();
        }
    });
    mirror_upper(n, &mut next);
    next
}

/// Iterates SimRank to a fixed point; returns the similarity matrix.
pub fn simrank_similarity(g: &Graph, decay: f64, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if !(decay > 0.0 && decay < 1.0) {
        return Err(GltError::InvalidParameter(format!(
            "decay must lie in (0, 1), got {decay}"
        )));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(GltError::InvalidParameter(
            "tol must be positive and max_iter at least 1".into(),
        ));
    }
    let n = g.n();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        s[i * n + i] = 1.0;
    }
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let next = simrank_step(g, decay, &s);
        residual = next
            .iter()
            .zip(&s)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        s = next;
        if residual < tol {
            return Ok(s);
        }
    }
    Err(GltError::NonConvergence {
        backend: "simrank",
        iterations: max_iter,
        residual,
    })
}

/// SimRank similarity turned into a distance, `1 - s`.
pub fn simrank_distance_matrix(
    g: &Graph,
    decay: f64,
    tol: f64,
    max_iter: usize,
) -> Result<DistanceMatrix> {
    let n = g.n();
    let mut data = simrank_similarity(g, decay, tol, max_iter)?;
    data.iter_mut().for_each(|s| *s = 1.0 - *s);
    for i in 0..n {
        data[i * n + i] = 0.0;
    }
    Ok(DistanceMatrix::from_rows_unchecked(
        n,
        data,
        DistanceMetric::SimRank,
    ))
}
