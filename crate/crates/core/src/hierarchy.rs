//! Cutting a leading forest into communities at several granularities.
//!
//! A cut picks `k` centers: every root, plus the non-root granules with the
//! largest γ = importance × delta. Each granule joins the first center on
//! its path towards the root. Because centers for a larger `k` extend those
//! for a smaller one, partitions at increasing `k` refine each other.

use std::cmp::Ordering;

use crate::error::{GltError, Result};
use crate::importance::ImportanceTable;
use crate::leading_tree::LeadingForest;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    centers: Vec<usize>,
}

impl Partition {
    /// Community id of every granule.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Center granule of each community, indexed by community id.
    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// True when every community of `self` lies inside one community of
    /// `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.assignment.len() != coarser.assignment.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.k()];
        for (v, &c) in self.assignment.iter().enumerate() {
            let target = coarser.assignment[v];
            if image[c] == usize::MAX {
                image[c] = target;
            } else if image[c] != target {
                return false;
            }
        }
        true
    }

    /// `label<TAB>community_id`, sorted by label.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut rows: Vec<(&str, usize)> = labels
            .iter()
            .map(String::as_str)
            .zip(self.assignment.iter().copied())
            .collect();
        rows.sort();
        rows.iter().map(|(l, c)| format!("{l}\t{c}\n")).collect()
    }
}

fn check_granule(forest: &LeadingForest, v: usize) -> Result<()> {
    if v >= forest.n() {
        return Err(GltError::VertexOutOfRange {
            vertex: v,
            n: forest.n(),
        });
    }
    Ok(())
}

/// `v` and every granule whose parent path passes through it, ascending.
pub fn subtree_members(forest: &LeadingForest, v: usize) -> Result<Vec<usize>> {
    check_granule(forest, v)?;
    let children = forest.children();
    let mut members = vec![v];
    let mut i = 0;
    while i < members.len() {
        members.extend_from_slice(&children[members[i]]);
        i += 1;
    }
    members.sort_unstable();
    Ok(members)
}

/// Granules in descending γ = score × delta; ties by score descending,
/// then id ascending.
pub fn gamma_rank(forest: &LeadingForest, imp: &ImportanceTable) -> Result<Vec<usize>> {
    if imp.len() != forest.n() {
        return Err(GltError::SizeMismatch {
            importance: imp.len(),
            distance: forest.n(),
        });
    }
    let s = imp.scores();
    let gamma: Vec<f64> = (0..forest.n()).map(|v| s[v] * forest.delta(v)).collect();
    let mut order: Vec<usize> = (0..forest.n()).collect();
    order.sort_by(|&a, &b| {
        gamma[b]
            .partial_cmp(&gamma[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| s[b].partial_cmp(&s[a]).unwrap_or(Ordering::Equal))
            .then_with(|| a.cmp(&b))
    });
    Ok(order)
}

/// Cuts the forest into `k` communities.
pub fn cut_to_partition(
    forest: &LeadingForest,
    k: usize,
    imp: &ImportanceTable,
) -> Result<Partition> {
    let order = gamma_rank(forest, imp)?;
    cut_with_order(forest, k, &order)
}

fn cut_with_order(forest: &LeadingForest, k: usize, order: &[usize]) -> Result<Partition> {
    let n = forest.n();
    let roots = forest.roots().len();
    if k < roots {
        return Err(GltError::TooFewCenters { k, roots });
    }
    if k > n {
        return Err(GltError::InvalidParameter(format!(
            "k = {k} exceeds {n} granules"
        )));
    }

    let mut is_center = vec![false; n];
    for &r in forest.roots() {
        is_center[r] = true;
    }
    let mut extra = k - roots;
    for &v in order {
        if extra == 0 {
            break;
        }
        if !is_center[v] {
            is_center[v] = true;
            extra -= 1;
        }
    }

    // community ids follow γ order of the centers
    let mut community = vec![usize::MAX; n];
    let mut centers = Vec::with_capacity(k);
    for &v in order {
        if is_center[v] {
            community[v] = centers.len();
            centers.push(v);
        }
    }
    for v in forest.top_down_order() {
        if !is_center[v] {
            let p = forest
                .parent(v)
                .expect("non-center granules are never roots");
            community[v] = community[p];
        }
    }
    Ok(Partition {
        assignment: community,
        centers,
    })
}

/// One partition per `k`; `ks` must be strictly ascending.
pub fn nested_levels(
    forest: &LeadingForest,
    imp: &ImportanceTable,
    ks: &[usize],
) -> Result<Vec<Partition>> {
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GltError::InvalidParameter(format!(
            "cut sizes must be strictly ascending, got {ks:?}"
        )));
    }
    let order = gamma_rank(forest, imp)?;
    ks.iter()
        .map(|&k| cut_with_order(forest, k, &order))
        .collect()
}
