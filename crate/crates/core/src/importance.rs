//! Per-vertex importance scores.
//!
//! Every measure here ignores edge weights and works on the bare structure.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{GltError, Result};
use crate::graph::Graph;
use crate::numfmt::fmt_sig;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_DAMPING: f64 = 0.85;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImportanceCriterion {
    Degree,
    Eigenvector,
    Betweenness,
    PageRank,
    Density,
    /// Scores supplied by the caller.
    Custom(String),
}

impl fmt::Display for ImportanceCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Degree => f.write_str("degree"),
            Self::Eigenvector => f.write_str("eigenvector"),
            Self::Betweenness => f.write_str("betweenness"),
            Self::PageRank => f.write_str("pagerank"),
            Self::Density => f.write_str("density"),
            Self::Custom(name) => f.write_str(name),
        }
    }
}

/// One finite score per granule.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceTable {
    scores: Vec<f64>,
    criterion: ImportanceCriterion,
}

impl ImportanceTable {
    pub fn new(scores: Vec<f64>, criterion: ImportanceCriterion) -> Result<Self> {
        if let Some(i) = scores.iter().position(|s| s.is_nan()) {
            return Err(GltError::NanImportance { granule: i });
        }
        if let Some(i) = scores.iter().position(|s| s.is_infinite()) {
            return Err(GltError::InvalidParameter(format!(
                "importance of granule {i} is infinite"
            )));
        }
        Ok(Self { scores, criterion })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score(&self, v: usize) -> f64 {
        self.scores[v]
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn criterion(&self) -> &ImportanceCriterion {
        &self.criterion
    }

    /// `label<TAB>score` lines sorted by label, 12 significant digits.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut rows: Vec<(&str, f64)> = labels
            .iter()
            .map(String::as_str)
            .zip(self.scores.iter().copied())
            .collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        rows.iter()
            .map(|(l, s)| format!("{l}\t{}\n", fmt_sig(*s, 12)))
            .collect()
    }
}

fn check_iter_params(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol > 0.0) {
        return Err(GltError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(GltError::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    Ok(())
}

pub fn degree_importance(g: &Graph) -> ImportanceTable {
    let scores = (0..g.n()).map(|v| g.degree(v) as f64).collect();
    ImportanceTable {
        scores,
        criterion: ImportanceCriterion::Degree,
    }
}

/// Principal adjacency eigenvector by power iteration, max-normalized per
/// connected component. Vertices without edges score 0.
///
/// The update is `x <- (A x + x) / max`, which shares the principal
/// eigenvector with `A` but cannot oscillate on bipartite components.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<ImportanceTable> {
    check_iter_params(tol, max_iter)?;
    let n = g.n();
    let comp = g.connected_components();
    let n_comp = comp.iter().copied().max().map_or(0, |c| c + 1);

    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut comp_max = vec![0.0f64; n_comp];
    let mut residual = f64::INFINITY;
    let mut converged = n == 0;

    for _ in 0..max_iter {
        if converged {
            break;
        }
        comp_max.iter_mut().for_each(|m| *m = 0.0);
        for v in 0..n {
            let y = x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
            next[v] = y;
            comp_max[comp[v]] = comp_max[comp[v]].max(y);
        }
        residual = 0.0;
        for v in 0..n {
            next[v] /= comp_max[comp[v]];
            residual = residual.max((next[v] - x[v]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        converged = residual < tol;
    }
    if !converged {
        return Err(GltError::NonConvergence {
            backend: "eigenvector centrality",
            iterations: max_iter,
            residual,
        });
    }
    for v in 0..n {
        if g.degree(v) == 0 {
            x[v] = 0.0;
        }
    }
    Ok(ImportanceTable {
        scores: x,
        criterion: ImportanceCriterion::Eigenvector,
    })
}

/// Brandes' betweenness on unweighted shortest paths, normalized by the
/// number of vertex pairs excluding the vertex itself, `(n-1)(n-2)/2`.
/// Graphs with fewer than three vertices score all zeros.
pub fn betweenness_centrality(g: &Graph) -> ImportanceTable {
    let n = g.n();
    let mut raw = vec![0.0f64; n];
    if n < 3 {
        return ImportanceTable {
            scores: raw,
            criterion: ImportanceCriterion::Betweenness,
        };
    }

    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut dependency = vec![0.0f64; n];

    for s in 0..n {
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        dependency.iter_mut().for_each(|x| *x = 0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        // predecessors of w are the neighbors one level closer to s
        while let Some(w) = stack.pop() {
            for &v in g.neighbors(w) {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    dependency[v] += sigma[v] / sigma[w] * (1.0 + dependency[w]);
                }
            }
            if w != s {
                raw[w] += dependency[w];
            }
        }
    }

    // each unordered pair was counted from both endpoints
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    let scores = raw.into_iter().map(|r| r * scale).collect();
    ImportanceTable {
        scores,
        criterion: ImportanceCriterion::Betweenness,
    }
}

/// PageRank on the undirected graph; isolated vertices are dangling and
/// their mass is spread uniformly. Scores sum to one.
pub fn pagerank_importance(
    g: &Graph,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ImportanceTable> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(GltError::InvalidParameter(format!(
            "damping must lie in (0, 1), got {damping}"
        )));
    }
    check_iter_params(tol, max_iter)?;
    let n = g.n();
    if n == 0 {
        return Ok(ImportanceTable {
            scores: Vec::new(),
            criterion: ImportanceCriterion::PageRank,
        });
    }
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for _ in 0..max_iter {
        let mut dangling = 0.0;
        for v in 0..n {
            match g.degree(v) {
                0 => {
                    dangling += rank[v];
                    share[v] = 0.0;
                }
                d => share[v] = rank[v] / d as f64,
            }
        }
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        residual = 0.0;
        for v in 0..n {
            let incoming: f64 = g.neighbors(v).iter().map(|&u| share[u]).sum();
            next[v] = base + damping * incoming;
            residual = residual.max((next[v] - rank[v]).abs());
        }
        std::mem::swap(&mut rank, &mut next);
        if residual < tol {
            return Ok(ImportanceTable {
                scores: rank,
                criterion: ImportanceCriterion::PageRank,
            });
        }
    }
    Err(GltError::NonConvergence {
        backend: "pagerank",
        iterations: max_iter,
        residual,
    })
}
