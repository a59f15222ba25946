//! Undirected simple graphs with string labels.
//!
//! Vertices carry dense ids `0..n` in first-appearance order; the original
//! labels are kept for all external output.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{GltError, Result};

/// How tokens on an edge-list line are separated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Commas and/or runs of whitespace.
    #[default]
    Auto,
    Whitespace,
    Comma,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub delimiter: Delimiter,
    /// Reject lines without a third (weight) column.
    pub require_weights: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    edge_count: usize,
    weighted: bool,
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    seen: HashSet<(usize, usize)>,
    edges: Vec<(usize, usize, f64)>,
    weighted: bool,
}

impl Builder {
    fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    fn add_vertex_label(&mut self, label: &str) {
        self.intern(label);
    }

    /// Returns false when the edge was a duplicate and has been dropped.
    fn add_edge(&mut self, u: usize, v: usize, w: f64) -> bool {
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return false;
        }
        self.edges.push((u, v, w));
        true
    }

    fn finish(self) -> Graph {
        let n = self.labels.len();
        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in &self.edges {
            lists[u].push((v, w));
            lists[v].push((u, w));
        }
        let mut adjacency = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for mut list in lists {
            list.sort_by_key(|&(v, _)| v);
            adjacency.push(list.iter().map(|&(v, _)| v).collect());
            weights.push(list.iter().map(|&(_, w)| w).collect());
        }
        Graph {
            labels: self.labels,
            index: self.index,
            adjacency,
            weights,
            edge_count: self.edges.len(),
            weighted: self.weighted,
        }
    }
}

fn tokenize(line: &str, delimiter: Delimiter) -> Vec<&str> {
    match delimiter {
        Delimiter::Whitespace => line.split_whitespace().collect(),
        Delimiter::Comma => line.split(',').map(str::trim).collect(),
        Delimiter::Auto => line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect(),
    }
}

impl Graph {
    /// Parses an edge list: one `u v` or `u v w` per line, `#` comments and
    /// blank lines skipped. Duplicate edges keep the first weight.
    pub fn parse_edge_list(text: &str, options: &ParseOptions) -> Result<Graph> {
        let mut b = Builder::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens = tokenize(line, options.delimiter);
            if tokens.len() < 2 || tokens.len() > 3 || tokens.iter().any(|t| t.is_empty()) {
                return Err(GltError::Parse {
                    line: line_no,
                    message: format!("expected `u v` or `u v w`, found {line:?}"),
                });
            }
            let weight = match tokens.get(2) {
                Some(tok) => {
                    let w: f64 = tok.parse().map_err(|_| GltError::Parse {
                        line: line_no,
                        message: format!("malformed weight {tok:?}"),
                    })?;
                    if w.is_nan() || w.is_infinite() {
                        return Err(GltError::Parse {
                            line: line_no,
                            message: format!("weight must be finite, found {tok:?}"),
                        });
                    }
                    if w < 0.0 {
                        return Err(GltError::NegativeWeight {
                            line: line_no,
                            weight: w,
                        });
                    }
                    b.weighted = true;
                    w
                }
                None if options.require_weights => {
                    return Err(GltError::Parse {
                        line: line_no,
                        message: "missing weight column".into(),
                    });
                }
                None => 1.0,
            };
            if tokens[0] == tokens[1] {
                return Err(GltError::SelfLoop {
                    line: line_no,
                    label: tokens[0].to_owned(),
                });
            }
            let u = b.intern(tokens[0]);
            let v = b.intern(tokens[1]);
            b.add_edge(u, v, weight);
        }
        Ok(b.finish())
    }

    /// Builds an unweighted graph on `n` vertices labelled `"0".."n-1"`.
    /// Self-loops are rejected; duplicates collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Self::from_weighted_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0)), false)
    }

    pub fn from_weighted_edges<I>(n: usize, edges: I, weighted: bool) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut b = Builder::default();
        for v in 0..n {
            b.add_vertex_label(&v.to_string());
        }
        for (line, (u, v, w)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(GltError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GltError::SelfLoop {
                    line: line + 1,
                    label: u.to_string(),
                });
            }
            if w.is_nan() || w < 0.0 {
                return Err(GltError::NegativeWeight {
                    line: line + 1,
                    weight: w,
                });
            }
            b.add_edge(u, v, w);
        }
        b.weighted = weighted;
        Ok(b.finish())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// True when the source carried an explicit weight column.
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edge weights aligned with [`Graph::neighbors`].
    pub fn neighbor_weights(&self, v: usize) -> &[f64] {
        &self.weights[v]
    }

    /// Unchecked degree; panics when `v >= n`.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degree_of(&self, v: usize) -> Result<usize> {
        if v >= self.n() {
            return Err(GltError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(self.degree(v))
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(u, adj)| {
            adj.iter()
                .zip(&self.weights[u])
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    /// Component label per vertex; labels are numbered in order of the
    /// smallest vertex id they contain.
    pub fn connected_components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Canonical edge list: endpoints in label order within each line,
    /// lines sorted, LF endings. Weights are written only for weighted graphs.
    /// Isolated vertices have no representation and are dropped.
    pub fn to_edge_list(&self) -> String {
        let mut lines: Vec<String> = self
            .edges()
            .map(|(u, v, w)| {
                let (a, b) = if self.labels[u] <= self.labels[v] {
                    (&self.labels[u], &self.labels[v])
                } else {
                    (&self.labels[v], &self.labels[u])
                };
                let mut line = format!("{a} {b}");
                if self.weighted {
                    write!(line, " {w}").unwrap();
                }
                line
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
