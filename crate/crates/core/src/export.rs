//! Text renderings of forests and partitions. All output is keyed by the
//! original granule labels and sorted by label, so it is byte-stable.

use std::fmt::Write as _;

use serde::Serialize;

use crate::hierarchy::Partition;
use crate::leading_tree::LeadingForest;
use crate::numfmt::fmt_sig;

#[derive(Serialize)]
struct NodeRecord<'a> {
    label: &'a str,
    parent_label: Option<&'a str>,
    importance: f64,
    delta: f64,
    depth: usize,
}

#[derive(Serialize)]
struct ForestRecord<'a> {
    nodes: Vec<NodeRecord<'a>>,
    tie_policy: String,
    importance_criterion: String,
    distance_metric: String,
}

fn by_label(labels: &[String]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..labels.len()).collect();
    ids.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    ids
}

pub fn forest_to_json(forest: &LeadingForest, labels: &[String]) -> String {
    let nodes = by_label(labels)
        .into_iter()
        .map(|v| NodeRecord {
            label: &labels[v],
            parent_label: forest.parent(v).map(|p| labels[p].as_str()),
            importance: forest.importance()[v],
            delta: forest.delta(v),
            depth: forest.depth(v),
        })
        .collect();
    let record = ForestRecord {
        nodes,
        tie_policy: forest.tie_policy().to_string(),
        importance_criterion: forest.importance_criterion().to_string(),
        distance_metric: forest.distance_metric().to_string(),
    };
    let mut out = serde_json::to_string_pretty(&record).expect("forest records always serialize");
    out.push('\n');
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Directed edges from child to parent, labelled with delta.
pub fn forest_to_dot(forest: &LeadingForest, labels: &[String]) -> String {
    let order = by_label(labels);
    let mut out = String::from("digraph leading_forest {\n");
    for &v in &order {
        writeln!(out, "  {};", dot_quote(&labels[v])).unwrap();
    }
    for &v in &order {
        if let Some(p) = forest.parent(v) {
            writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                dot_quote(&labels[v]),
                dot_quote(&labels[p]),
                fmt_sig(forest.delta(v), 12)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn newick_label(s: &str) -> String {
    let plain = !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || "()[]':;,".contains(c));
    if plain {
        s.to_owned()
    } else {
        format!("'{}'", s.replace('\'', "''"))
    }
}

enum Step {
    Open(usize),
    Close(usize),
    Comma,
}

/// One Newick tree per line, one line per root in label order. Children
/// are sorted by label and branch lengths are deltas; roots carry none.
pub fn forest_to_newick(forest: &LeadingForest, labels: &[String]) -> String {
    let mut children = forest.children();
    for list in &mut children {
        list.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    }
    let mut roots = forest.roots().to_vec();
    roots.sort_by(|&a, &b| labels[a].cmp(&labels[b]));

    let mut out = String::new();
    let mut stack = Vec::new();
    for root in roots {
        stack.push(Step::Open(root));
        while let Some(step) = stack.pop() {
            match step {
                Step::Comma => out.push(','),
                Step::Open(v) if !children[v].is_empty() => {
                    out.push('(');
                    stack.push(Step::Close(v));
                    for (i, &c) in children[v].iter().enumerate().rev() {
                        stack.push(Step::Open(c));
                        if i > 0 {
                            stack.push(Step::Comma);
                        }
                    }
                }
                Step::Open(v) | Step::Close(v) => {
                    if matches!(step, Step::Close(_)) {
                        out.push(')');
                    }
                    out.push_str(&newick_label(&labels[v]));
                    if forest.parent(v).is_some() {
                        write!(out, ":{}", fmt_sig(forest.delta(v), 12)).unwrap();
                    }
                }
            }
        }
        out.push_str(";\n");
    }
    out
}

#[derive(Serialize)]
struct LevelRecord<'a> {
    centers: Vec<&'a str>,
    assignment: serde_json::Map<String, serde_json::Value>,
}

/// Multi-level partitions as a JSON object keyed by `k`, in the order given.
pub fn levels_to_json(levels: &[Partition], labels: &[String]) -> String {
    let order = by_label(labels);
    let mut root = serde_json::Map::new();
    for p in levels {
        let mut assignment = serde_json::Map::new();
        for &v in &order {
            assignment.insert(labels[v].clone(), p.community_of(v).into());
        }
        let record = LevelRecord {
            centers: p.centers().iter().map(|&c| labels[c].as_str()).collect(),
            assignment,
        };
        root.insert(
            p.k().to_string(),
            serde_json::to_value(record).expect("level records always serialize"),
        );
    }
    let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(root))
        .expect("json values serialize");
    out.push('\n');
    out
}
