//! Command-line pipeline: read a graph or point set, score granules, build
//! the leading forest, optionally cut it, and render the result.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::{Parser, ValueEnum};
use glt_core::graph::{Delimiter, ParseOptions};
use glt_core::{
    distance, euclid, export, hierarchy, importance, leading_tree, DistanceMatrix, GltError, Graph,
    ImportanceTable, PointSet, TiePolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Edgelist,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Degree,
    Eigenvector,
    Betweenness,
    Pagerank,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    ShortestPath,
    Jaccard,
    Simrank,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Newick,
    Tsv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Newick => "nwk",
            Format::Tsv => "tsv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tie {
    PreferHigherId,
    PreferLowerId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sep {
    Auto,
    Whitespace,
    Comma,
}

/// Build a generalized leading tree over a graph or point set and cut it
/// into nested communities.
#[derive(Debug, Clone, Parser)]
#[command(name = "glt", version)]
pub struct RunConfig {
    /// Edge list (`u v [w]` per line) or CSV of points.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = InputKind::Edgelist)]
    pub kind: InputKind,

    #[arg(long, value_enum, default_value_t = Criterion::Degree)]
    pub importance: Criterion,

    #[arg(long, value_enum, default_value_t = Metric::ShortestPath)]
    pub distance: Metric,

    /// Community counts to cut the forest into, e.g. `--cut 2,4`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub cut: Vec<usize>,

    /// Output format [default: json for forests, tsv for cuts]
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write to this path instead of stdout; the format's extension is
    /// appended when missing.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// PageRank damping factor.
    #[arg(long, default_value = "0.85")]
    pub damping: f64,

    /// SimRank decay factor.
    #[arg(long, default_value = "0.8")]
    pub decay: f64,

    /// Convergence tolerance for iterative measures.
    #[arg(long, default_value = "1e-10")]
    pub tol: f64,

    #[arg(long, default_value = "10000")]
    pub max_iter: usize,

    /// Cutoff radius for point density (required with `--importance density`).
    #[arg(long)]
    pub dc: Option<f64>,

    /// Use edge weights for shortest paths.
    #[arg(long)]
    pub weighted: bool,

    #[arg(long, value_enum, default_value_t = Sep::Auto)]
    pub delimiter: Sep,

    /// How equal importance scores are ordered.
    #[arg(long, value_enum, default_value_t = Tie::PreferHigherId)]
    pub tie: Tie,
}

/// A failed run, carrying its process exit status.
#[derive(Debug)]
pub enum RunError {
    /// Unreadable or malformed input (exit 1).
    Input(anyhow::Error),
    /// Criterion, metric, format or cut options that cannot go together (exit 2).
    Config(String),
    /// An iterative backend ran out of iterations (exit 3).
    NonConvergence(GltError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 1,
            RunError::Config(_) => 2,
            RunError::NonConvergence(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(e) => write!(f, "{e:#}"),
            RunError::Config(msg) => f.write_str(msg),
            RunError::NonConvergence(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<GltError> for RunError {
    fn from(e: GltError) -> Self {
        match e {
            GltError::NonConvergence { .. } => RunError::NonConvergence(e),
            GltError::TooFewCenters { .. } | GltError::InvalidParameter(_) => {
                RunError::Config(e.to_string())
            }
            other => RunError::Input(other.into()),
        }
    }
}

/// Rendered output and the file extension matching its format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub extension: &'static str,
}

impl Output {
    /// `path` with the format extension appended unless already present.
    pub fn target_path(&self, path: &Path) -> PathBuf {
        if path.extension().is_some_and(|e| e == self.extension) {
            path.to_path_buf()
        } else {
            let mut s = path.as_os_str().to_owned();
            s.push(".");
            s.push(self.extension);
            PathBuf::from(s)
        }
    }
}

fn check_compatible(cfg: &RunConfig) -> Result<(), RunError> {
    let point_criterion = cfg.importance == Criterion::Density;
    let point_metric = cfg.distance == Metric::Euclidean;
    let points = cfg.kind == InputKind::Points;
    if point_criterion != points || point_metric != points {
        return Err(RunError::Config(format!(
            "importance {:?} and distance {:?} cannot be used with {:?} input; \
             density and euclidean need points, the graph measures need an edge list",
            cfg.importance, cfg.distance, cfg.kind
        )));
    }
    if point_criterion && cfg.dc.is_none() {
        return Err(RunError::Config(
            "--importance density requires --dc".into(),
        ));
    }
    if !cfg.cut.is_empty() {
        match cfg.format {
            Some(Format::Dot) | Some(Format::Newick) => {
                return Err(RunError::Config("cuts render as tsv or json only".into()));
            }
            Some(Format::Tsv) | None if cfg.cut.len() > 1 => {
                return Err(RunError::Config(
                    "several cuts render as json only; pass --format json".into(),
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

fn graph_importance(g: &Graph, cfg: &RunConfig) -> Result<ImportanceTable, RunError> {
    Ok(match cfg.importance {
        Criterion::Degree => importance::degree_importance(g),
        Criterion::Eigenvector => importance::eigenvector_centrality(g, cfg.tol, cfg.max_iter)?,
        Criterion::Betweenness => importance::betweenness_centrality(g),
        Criterion::Pagerank => {
            importance::pagerank_importance(g, cfg.damping, cfg.tol, cfg.max_iter)?
        }
        Criterion::Density => unreachable!("rejected by the compatibility check"),
    })
}

fn graph_distance(g: &Graph, cfg: &RunConfig) -> Result<DistanceMatrix, RunError> {
    Ok(match cfg.distance {
        Metric::ShortestPath => distance::shortest_path_matrix(g, cfg.weighted),
        Metric::Jaccard => distance::jaccard_distance_matrix(g),
        Metric::Simrank => distance::simrank_distance_matrix(g, cfg.decay, cfg.tol, cfg.max_iter)?,
        Metric::Euclidean => unreachable!("rejected by the compatibility check"),
    })
}

/// Runs one pipeline from an input already read into memory.
pub fn run_on_text(cfg: &RunConfig, text: &str) -> Result<Output, RunError> {
    check_compatible(cfg)?;

    let (labels, imp, dist) = match cfg.kind {
        InputKind::Edgelist => {
            let delimiter = match cfg.delimiter {
                Sep::Auto => Delimiter::Auto,
                Sep::Whitespace => Delimiter::Whitespace,
                Sep::Comma => Delimiter::Comma,
            };
            let opts = ParseOptions {
                delimiter,
                require_weights: false,
            };
            let g = Graph::parse_edge_list(text, &opts)?;
            if g.n() == 0 {
                return Err(RunError::Input(anyhow!("input contains no edges")));
            }
            let imp = graph_importance(&g, cfg)?;
            let dist = graph_distance(&g, cfg)?;
            (g.labels().to_vec(), imp, dist)
        }
        InputKind::Points => {
            let pts = PointSet::from_csv(text)?;
            let imp = euclid::density_importance(&pts, cfg.dc.expect("checked above"))?;
            (pts.labels(), imp, euclid::euclidean_distance_matrix(&pts))
        }
    };

    let tie = match cfg.tie {
        Tie::PreferHigherId => TiePolicy::PreferHigherId,
        Tie::PreferLowerId => TiePolicy::PreferLowerId,
    };
    let forest = leading_tree::build_leading_tree(&imp, &dist, tie)?;
    forest
        .validate_against(&imp, &dist)
        .map_err(|e| RunError::Input(anyhow!("internal error: {e}")))?;

    if cfg.cut.is_empty() {
        let format = cfg.format.unwrap_or(Format::Json);
        let text = match format {
            Format::Json => export::forest_to_json(&forest, &labels),
            Format::Dot => export::forest_to_dot(&forest, &labels),
            Format::Newick => export::forest_to_newick(&forest, &labels),
            Format::Tsv => imp.to_tsv(&labels),
        };
        return Ok(Output {
            text,
            extension: format.extension(),
        });
    }

    let mut ks = cfg.cut.clone();
    ks.sort_unstable();
    ks.dedup();
    let levels = hierarchy::nested_levels(&forest, &imp, &ks)?;
    let format = cfg.format.unwrap_or(Format::Tsv);
    let text = match format {
        Format::Tsv => levels[0].to_tsv(&labels),
        _ => export::levels_to_json(&levels, &labels),
    };
    Ok(Output {
        text,
        extension: format.extension(),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Output, RunError> {
    let text = std::fs::read_to_string(&cfg.input)
        .map_err(|e| RunError::Input(anyhow!("cannot read {}: {e}", cfg.input.display())))?;
    run_on_text(cfg, &text)
}
