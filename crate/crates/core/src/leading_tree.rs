//! Leading forest construction.
//!
//! Granules are totally ordered by rank: importance first, then granule id
//! according to the [`TiePolicy`]. Each granule's parent is the nearest
//! granule of strictly higher rank at finite distance; equally near
//! candidates resolve to the higher-ranked one. Granules with no such
//! candidate become roots.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::distance::{DistanceMatrix, DistanceMetric};
use crate::error::{GltError, Result};
use crate::importance::{ImportanceCriterion, ImportanceTable};

/// Which granule ranks higher when importance scores are exactly equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    #[default]
    PreferHigherId,
    PreferLowerId,
}

impl TiePolicy {
    /// Ordering of `a` relative to `b` among equal scores.
    fn id_order(self, a: usize, b: usize) -> Ordering {
        match self {
            TiePolicy::PreferHigherId => a.cmp(&b),
            TiePolicy::PreferLowerId => b.cmp(&a),
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::PreferHigherId => f.write_str("prefer-higher-id"),
            TiePolicy::PreferLowerId => f.write_str("prefer-lower-id"),
        }
    }
}

/// Compares granule ranks; `Greater` means `a` outranks `b`.
pub fn rank_cmp(scores: &[f64], tie: TiePolicy, a: usize, b: usize) -> Ordering {
    scores[a]
        .partial_cmp(&scores[b])
        .expect("importance scores are never NaN")
        .then_with(|| tie.id_order(a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingForest {
    parent: Vec<Option<usize>>,
    delta: Vec<f64>,
    depth: Vec<usize>,
    roots: Vec<usize>,
    importance: Vec<f64>,
    tie_policy: TiePolicy,
    importance_criterion: ImportanceCriterion,
    distance_metric: DistanceMetric,
}

fn check_inputs(imp: &ImportanceTable, dist: &DistanceMatrix) -> Result<()> {
    if imp.len() != dist.n() {
        return Err(GltError::SizeMismatch {
            importance: imp.len(),
            distance: dist.n(),
        });
    }
    if let Some(g) = imp.scores().iter().position(|s| s.is_nan()) {
        return Err(GltError::NanImportance { granule: g });
    }
    Ok(())
}

/// Builds the leading forest of `imp` over `dist`.
pub fn build_leading_tree(
    imp: &ImportanceTable,
    dist: &DistanceMatrix,
    tie: TiePolicy,
) -> Result<LeadingForest> {
    check_inputs(imp, dist)?;
    let n = imp.len();
    if n == 0 {
        return Err(GltError::InvalidParameter(
            "cannot build a forest over zero granules".into(),
        ));
    }
    let scores = imp.scores();

    // descending rank
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| rank_cmp(scores, tie, b, a));
    let mut position = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }

    // Scanning the higher-ranked prefix in rank order means the first
    // strictly-nearer hit wins, so distance ties go to the higher rank.
    let parent: Vec<Option<usize>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let row = dist.row(v);
            let mut best: Option<(usize, f64)> = None;
            for &u in &order[..position[v]] {
                let d = row[u];
                if d.is_finite() && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((u, d));
                }
            }
            best.map(|(u, _)| u)
        })
        .collect();

    let root_delta = dist.max_finite();
    let delta = (0..n)
        .map(|v| parent[v].map_or(root_delta, |p| dist.get(v, p)))
        .collect();

    let mut depth = vec![0; n];
    for &v in &order {
        if let Some(p) = parent[v] {
            depth[v] = depth[p] + 1;
        }
    }
    let roots = (0..n).filter(|&v| parent[v].is_none()).collect();

    Ok(LeadingForest {
        parent,
        delta,
        depth,
        roots,
        importance: scores.to_vec(),
        tie_policy: tie,
        importance_criterion: imp.criterion().clone(),
        distance_metric: dist.metric().clone(),
    })
}

/// Parent of `v` by a literal scan over every granule. Shares no code with
/// [`build_leading_tree`] and exists to cross-check it.
pub fn brute_force_parent_oracle(
    imp: &ImportanceTable,
    dist: &DistanceMatrix,
    tie: TiePolicy,
    v: usize,
) -> Result<Option<usize>> {
    check_inputs(imp, dist)?;
    let n = imp.len();
    if v >= n {
        return Err(GltError::VertexOutOfRange { vertex: v, n });
    }
    let s = imp.scores();
    let higher = |a: usize, b: usize| -> bool {
        if s[a] != s[b] {
            return s[a] > s[b];
        }
        match tie {
            TiePolicy::PreferHigherId => a > b,
            TiePolicy::PreferLowerId => a < b,
        }
    };
    let mut best: Option<usize> = None;
    for u in 0..n {
        if u == v || !higher(u, v) || dist.get(v, u) == f64::INFINITY {
            continue;
        }
        best = match best {
            None => Some(u),
            Some(b) => {
                let (du, db) = (dist.get(v, u), dist.get(v, b));
                if du < db || (du == db && higher(u, b)) {
                    Some(u)
                } else {
                    Some(b)
                }
            }
        };
    }
    Ok(best)
}

/// Depth of every granule; roots sit in layer 0.
pub fn layers(forest: &LeadingForest) -> Vec<usize> {
    forest.depth.clone()
}

impl LeadingForest {
    /// Assembles a forest from explicit parent links, checking that they
    /// are in range and acyclic. Tags are set to custom placeholders.
    pub fn from_parents(
        parent: Vec<Option<usize>>,
        delta: Vec<f64>,
        importance: Vec<f64>,
        tie_policy: TiePolicy,
    ) -> Result<Self> {
        let n = parent.len();
        if delta.len() != n || importance.len() != n {
            return Err(GltError::InvalidForest(
                "parent, delta and importance lengths differ".into(),
            ));
        }
        let mut depth = vec![usize::MAX; n];
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        for start in 0..n {
            let mut v = start;
            while depth[v] == usize::MAX {
                if on_path[v] {
                    return Err(GltError::InvalidForest(format!(
                        "cycle through granule {v}"
                    )));
                }
                on_path[v] = true;
                path.push(v);
                match parent[v] {
                    None => break,
                    Some(p) if p >= n => {
                        return Err(GltError::InvalidForest(format!(
                            "parent {p} of {v} out of range"
                        )));
                    }
                    Some(p) => v = p,
                }
            }
            let mut d = if depth[v] == usize::MAX {
                path.pop();
                depth[v] = 0;
                0
            } else {
                depth[v]
            };
            while let Some(u) = path.pop() {
                d += 1;
                depth[u] = d;
            }
        }
        let roots = (0..n).filter(|&v| parent[v].is_none()).collect();
        Ok(Self {
            parent,
            delta,
            depth,
            roots,
            importance,
            tie_policy,
            importance_criterion: ImportanceCriterion::Custom("custom".into()),
            distance_metric: DistanceMetric::Custom("custom".into()),
        })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn delta(&self, v: usize) -> f64 {
        self.delta[v]
    }

    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Root ids in ascending order.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn importance(&self) -> &[f64] {
        &self.importance
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn importance_criterion(&self) -> &ImportanceCriterion {
        &self.importance_criterion
    }

    pub fn distance_metric(&self) -> &DistanceMetric {
        &self.distance_metric
    }

    /// Child ids of every granule, ascending.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        children
    }

    /// Granules ordered so every parent precedes its children.
    pub fn top_down_order(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.n());
        order.extend_from_slice(&self.roots);
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&children[order[i]]);
            i += 1;
        }
        order
    }

    /// Structural checks: links in range, acyclic, depth and root list
    /// consistent with the links.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let fail = |msg: String| Err(GltError::InvalidForest(msg));
        if self.delta.len() != n || self.depth.len() != n || self.importance.len() != n {
            return fail("field lengths differ".into());
        }
        for v in 0..n {
            let mut steps = 0;
            let mut u = v;
            while let Some(p) = self.parent[u] {
                if p >= n {
                    return fail(format!("parent {p} of {u} out of range"));
                }
                u = p;
                steps += 1;
                if steps >= n {
                    return fail(format!("granule {v} does not reach a root"));
                }
            }
            if self.depth[v] != steps {
                return fail(format!(
                    "granule {v} has depth {} but is {steps} steps from its root",
                    self.depth[v]
                ));
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&v| self.parent[v].is_none()).collect();
        if roots != self.roots {
            return fail("root list does not match parent links".into());
        }
        Ok(())
    }

    /// Checks the leading-forest contract against the inputs it was built
    /// from: parents outrank children at finite distance equal to delta, and
    /// roots have no finite-distance granule of higher rank.
    pub fn validate_against(&self, imp: &ImportanceTable, dist: &DistanceMatrix) -> Result<()> {
        self.validate()?;
        check_inputs(imp, dist)?;
        if imp.len() != self.n() {
            return Err(GltError::SizeMismatch {
                importance: imp.len(),
                distance: self.n(),
            });
        }
        let s = imp.scores();
        let tie = self.tie_policy;
        for v in 0..self.n() {
            match self.parent[v] {
                Some(p) => {
                    if rank_cmp(s, tie, p, v) != Ordering::Greater {
                        return Err(GltError::InvalidForest(format!(
                            "parent {p} does not outrank {v}"
                        )));
                    }
                    let d = dist.get(v, p);
                    if !d.is_finite() || d != self.delta[v] {
                        return Err(GltError::InvalidForest(format!(
                            "delta of {v} is not d({v}, {p})"
                        )));
                    }
                }
                None => {
                    let dominated = (0..self.n()).any(|u| {
                        u != v
                            && dist.get(v, u).is_finite()
                            && rank_cmp(s, tie, u, v) == Ordering::Greater
                    });
                    if dominated {
                        return Err(GltError::InvalidForest(format!(
                            "root {v} has a finite higher-ranked granule"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
