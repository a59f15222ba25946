//! Generalized leading trees (GLT).
//!
//! A leading tree links every granule to the nearest granule of strictly
//! higher importance. Given any importance table and any pairwise distance
//! matrix the construction yields a forest whose subtrees are communities at
//! nested granularities. This crate provides graph importance measures
//! (degree, eigenvector, betweenness, PageRank), graph distances (shortest
//! path, Jaccard, SimRank), the density/Euclidean pair used by density-peaks
//! clustering, the forest builder itself, and the γ-ranked cut into
//! partitions.
//!
//! ```
//! use glt_core::{distance, graph::Graph, hierarchy, importance, leading_tree};
//!
//! let g = Graph::parse_edge_list("a b\nb c\nc d\n", &Default::default()).unwrap();
//! let imp = importance::degree_importance(&g);
//! let dist = distance::shortest_path_matrix(&g, false);
//! let forest = leading_tree::build_leading_tree(&imp, &dist, Default::default()).unwrap();
//! assert_eq!(forest.roots().len(), 1);
//! let part = hierarchy::cut_to_partition(&forest, 2, &imp).unwrap();
//! assert_eq!(part.k(), 2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod datasets;
pub mod distance;
pub mod error;
pub mod euclid;
pub mod export;
pub mod graph;
pub mod hierarchy;
pub mod importance;
pub mod leading_tree;
mod numfmt;

pub use distance::{DistanceMatrix, DistanceMetric};
pub use error::{GltError, Result};
pub use euclid::PointSet;
pub use graph::Graph;
pub use hierarchy::Partition;
pub use importance::{ImportanceCriterion, ImportanceTable};
pub use leading_tree::{LeadingForest, TiePolicy};
