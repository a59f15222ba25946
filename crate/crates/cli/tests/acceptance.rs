//! Acceptance criteria, one PASS/FAIL line each. Runs under `cargo test`
//! with its own harness so the report is always printed.

#![allow(clippy::needless_range_loop)]

use std::collections::VecDeque;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use glt_core::distance::shortest_path_matrix;
use glt_core::euclid::{density_importance, euclidean_distance_matrix};
use glt_core::hierarchy::{cut_to_partition, nested_levels};
use glt_core::importance::{
    betweenness_centrality, degree_importance, eigenvector_centrality, pagerank_importance,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use glt_core::leading_tree::{brute_force_parent_oracle, build_leading_tree};
use glt_core::{
    DistanceMatrix, DistanceMetric, Graph, ImportanceCriterion, ImportanceTable, PointSet,
    TiePolicy,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn karate_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/karate.edges")
}

fn glt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glt"))
}

fn table(scores: Vec<f64>) -> ImportanceTable {
    ImportanceTable::new(scores, ImportanceCriterion::Custom("random".into())).unwrap()
}

/// Scores with frequent duplicates or continuous values, distances with
/// frequent ties and infinite blocks.
fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (Vec<f64>, DistanceMatrix) {
    let n = rng.gen_range(1..=max_n);
    let quantized = rng.gen_bool(0.5);
    let scores = (0..n)
        .map(|_| {
            if quantized {
                rng.gen_range(0..5) as f64
            } else {
                rng.gen_range(0..1_000_000) as f64 / 1000.0
            }
        })
        .collect();
    let blocks = rng.gen_range(1..=3);
    let block: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = if block[i] == block[j] {
                rng.gen_range(1..16) as f64
            } else {
                f64::INFINITY
            };
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    (
        scores,
        DistanceMatrix::from_row_major(n, data, DistanceMetric::Custom("random".into())).unwrap(),
    )
}

fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..rng.gen_range(0..=n * (n - 1) / 2) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Per-pair path counting with no dependency accumulation.
fn betweenness_by_path_counting(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let bfs = |s: usize| {
        let mut d = vec![usize::MAX; n];
        let mut sigma = vec![0u128; n];
        d[s] = 0;
        sigma[s] = 1;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in g.neighbors(v) {
                if d[w] == usize::MAX {
                    d[w] = d[v] + 1;
                    q.push_back(w);
                }
                if d[w] == d[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        (d, sigma)
    };
    let all: Vec<_> = (0..n).map(bfs).collect();
    let mut out = vec![0.0; n];
    if n < 3 {
        return out;
    }
    for s in 0..n {
        for t in s + 1..n {
            let (ds, ss) = &all[s];
            for v in (0..n).filter(|&v| v != s && v != t) {
                let (dv, sv) = &all[v];
                if ds[v] + dv[t] == ds[t] {
                    out[v] += (ss[v] * sv[t]) as f64 / ss[t] as f64;
                }
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    out.into_iter().map(|x| x / norm).collect()
}

fn criterion_1_oracle_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let (mut dup, mut inf) = (0, 0);
    for trial in 0..1000 {
        let (scores, dist) = random_instance(&mut rng, 64);
        let n = scores.len();
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        dup += sorted.windows(2).any(|w| w[0] == w[1]) as usize;
        inf += (0..n * n).any(|k| dist.get(k / n, k % n).is_infinite()) as usize;
        let tie = if trial % 2 == 0 {
            TiePolicy::PreferHigherId
        } else {
            TiePolicy::PreferLowerId
        };
        let imp = table(scores);
        let forest = build_leading_tree(&imp, &dist, tie).unwrap();
        for v in 0..n {
            let expected = brute_force_parent_oracle(&imp, &dist, tie, v).unwrap();
            if forest.parent(v) != expected {
                return Err(format!(
                    "trial {trial}, granule {v}: builder {:?}, oracle {expected:?}",
                    forest.parent(v)
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    if dup == 0 || inf == 0 {
        return Err("generator produced no duplicated scores or no infinite distances".into());
    }
    Ok(format!("1000/1000 instances agree ({dup} with tied scores, {inf} with infinite distances) in {elapsed:.2?}"))
}

fn criterion_2_density_peaks_correspondence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..100 {
        let m = rng.gen_range(2..=50);
        let rows: Vec<[f64; 2]> = (0..m)
            .map(|_| [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
            .collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        let l2 = |i: usize, j: usize| {
            ((rows[i][0] - rows[j][0]).powi(2) + (rows[i][1] - rows[j][1]).powi(2)).sqrt()
        };
        let mut pair_d: Vec<f64> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| l2(i, j))
            .collect();
        pair_d.sort_by(f64::total_cmp);
        let dc = pair_d[(pair_d.len() - 1) / 5].max(1e-9);

        let imp = density_importance(&pts, dc).unwrap();
        let forest = build_leading_tree(
            &imp,
            &euclidean_distance_matrix(&pts),
            TiePolicy::PreferHigherId,
        )
        .unwrap();

        // classical rule coded directly on coordinates
        let rho: Vec<usize> = (0..m)
            .map(|i| (0..m).filter(|&j| j != i && l2(i, j) < dc).count())
            .collect();
        let denser = |j: usize, i: usize| rho[j] > rho[i] || (rho[j] == rho[i] && j > i);
        for i in 0..m {
            let mut best: Option<usize> = None;
            for j in (0..m).filter(|&j| denser(j, i)) {
                best = match best {
                    Some(b) if l2(i, b) < l2(i, j) || (l2(i, b) == l2(i, j) && denser(b, j)) => {
                        Some(b)
                    }
                    _ => Some(j),
                };
            }
            if forest.parent(i) != best {
                return Err(format!(
                    "trial {trial}, point {i}: generic {:?}, classical {best:?}",
                    forest.parent(i)
                ));
            }
        }
    }
    Ok("100/100 random 2-D point sets match the nearest-higher-density rule".into())
}

fn criterion_3_centrality_fixtures() -> Result<String, String> {
    let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let ev =
        eigenvector_centrality(&p3, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let want = [r, 1.0, r];
    if ev
        .scores()
        .iter()
        .zip(want)
        .any(|(a, b)| (a - b).abs() > 1e-6)
    {
        return Err(format!(
            "eigenvector on P3 = {:?}, want {want:?}",
            ev.scores()
        ));
    }
    let s4 = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let bc = betweenness_centrality(&s4);
    if bc.score(0) != 1.0 {
        return Err(format!("betweenness of S4 center = {}", bc.score(0)));
    }
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let pr =
        pagerank_importance(&c5, 0.85, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    if pr.scores().iter().any(|s| (s - 0.2).abs() > 1e-9) {
        return Err(format!("pagerank on C5 = {:?}", pr.scores()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..200 {
        let n = rng.gen_range(1..=8);
        let g = random_connected_graph(&mut rng, n);
        let got = betweenness_centrality(&g);
        let want = betweenness_by_path_counting(&g);
        for v in 0..n {
            if (got.score(v) - want[v]).abs() > 1e-9 {
                return Err(format!(
                    "trial {trial}, vertex {v}: Brandes {}, path counting {}",
                    got.score(v),
                    want[v]
                ));
            }
        }
    }
    Ok("P3 eigenvector, S4 betweenness, C5 PageRank fixtures hold; 200/200 betweenness oracle trials agree".into())
}

fn criterion_4_invariance() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let transforms: [fn(f64) -> f64; 3] = [
        |x| x * x * x + 3.0 * x - 11.0,
        |x| x.exp2(),
        |x| 10.0 * x + 0.5,
    ];
    for trial in 0..500 {
        let (raw, dist) = random_instance(&mut rng, 32);
        // integer-valued scores keep every transform exact and strictly increasing
        let scores: Vec<f64> = raw.iter().map(|s| s.floor().min(60.0)).collect();
        let base = build_leading_tree(&table(scores.clone()), &dist, TiePolicy::default()).unwrap();

        let f = transforms[trial % transforms.len()];
        let relabeled = build_leading_tree(
            &table(scores.iter().map(|&s| f(s)).collect()),
            &dist,
            TiePolicy::default(),
        )
        .unwrap();
        if relabeled.parents() != base.parents()
            || relabeled.roots() != base.roots()
            || relabeled.deltas() != base.deltas()
            || (0..base.n()).any(|v| relabeled.depth(v) != base.depth(v))
        {
            return Err(format!(
                "trial {trial}: monotone relabel changed the forest"
            ));
        }

        let c = rng.gen_range(1..64) as f64 / 8.0;
        let scaled = build_leading_tree(
            &table(scores),
            &dist.scaled(c).unwrap(),
            TiePolicy::default(),
        )
        .unwrap();
        if scaled.parents() != base.parents() || scaled.roots() != base.roots() {
            return Err(format!(
                "trial {trial}: scaling distances by {c} changed parents or roots"
            ));
        }
        if (0..base.n()).any(|v| scaled.delta(v) != c * base.delta(v)) {
            return Err(format!("trial {trial}: deltas did not scale by {c}"));
        }
    }
    Ok("500/500 instances: zero relabel or scale violations".into())
}

fn criterion_5_refinement() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = 0usize;
    for trial in 0..200 {
        let (scores, dist) = random_instance(&mut rng, 40);
        let imp = table(scores);
        let forest = build_leading_tree(&imp, &dist, TiePolicy::default()).unwrap();
        let ks: Vec<usize> = (forest.roots().len()..=forest.n()).collect();
        let levels = nested_levels(&forest, &imp, &ks).map_err(|e| e.to_string())?;
        for i in 0..levels.len() {
            for j in i + 1..levels.len() {
                pairs += 1;
                if !levels[j].refines(&levels[i]) {
                    return Err(format!(
                        "trial {trial}: k={} does not refine k={}",
                        ks[j], ks[i]
                    ));
                }
            }
        }
    }
    Ok(format!(
        "200 forests, {pairs} ascending k pairs, zero violations"
    ))
}

fn criterion_6_karate_club() -> Result<String, String> {
    let start = Instant::now();
    let out = glt()
        .arg("--input")
        .arg(karate_path())
        .args([
            "--importance",
            "degree",
            "--distance",
            "shortest-path",
            "--format",
            "json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let cut = glt()
        .arg("--input")
        .arg(karate_path())
        .args([
            "--importance",
            "degree",
            "--distance",
            "shortest-path",
            "--cut",
            "2",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() || !cut.status.success() {
        return Err(format!(
            "cli failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }

    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let roots: Vec<&str> = v["nodes"]
        .as_array()
        .ok_or("no nodes")?
        .iter()
        .filter(|n| n["parent_label"].is_null())
        .map(|n| n["label"].as_str().unwrap())
        .collect();
    if roots != ["34"] {
        return Err(format!("roots {roots:?}, want [\"34\"]"));
    }

    let tsv = String::from_utf8(cut.stdout).map_err(|e| e.to_string())?;
    let community = |label: &str| {
        tsv.lines()
            .find_map(|l| l.strip_prefix(&format!("{label}\t")))
            .map(str::to_owned)
    };
    let (c1, c33, c34) = (community("1"), community("33"), community("34"));
    let distinct: std::collections::BTreeSet<_> =
        tsv.lines().filter_map(|l| l.split('\t').nth(1)).collect();
    if distinct.len() != 2 || c33.is_none() || c33 != c34 || c1 == c34 {
        return Err(format!(
            "k=2 cut: 1 -> {c1:?}, 33 -> {c33:?}, 34 -> {c34:?}"
        ));
    }

    // same answer from the library, no process startup
    let g = glt_core::datasets::karate_club();
    let imp = degree_importance(&g);
    let forest =
        build_leading_tree(&imp, &shortest_path_matrix(&g, false), TiePolicy::default()).unwrap();
    let part = cut_to_partition(&forest, 2, &imp).unwrap();
    let id = |l: &str| g.id_of(l).unwrap();
    if part.community_of(id("33")) != part.community_of(id("34"))
        || part.community_of(id("1")) == part.community_of(id("34"))
    {
        return Err("library cut disagrees".into());
    }

    if elapsed >= Duration::from_secs(1) {
        return Err(format!("two end-to-end runs took {elapsed:?}"));
    }
    Ok(format!("single tree rooted at 34; k=2 puts 33 with 34 and 1 apart; {elapsed:.2?} for both CLI runs"))
}

fn criterion_7_scale() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 2000;
    let mut edges = std::collections::BTreeSet::new();
    while edges.len() < n * 10 / 2 {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let text: String = edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect();

    let start = Instant::now();
    let g = Graph::parse_edge_list(&text, &Default::default()).map_err(|e| e.to_string())?;
    let imp = degree_importance(&g);
    let dist = shortest_path_matrix(&g, false);
    let forest =
        build_leading_tree(&imp, &dist, TiePolicy::default()).map_err(|e| e.to_string())?;
    let part =
        cut_to_partition(&forest, forest.roots().len() + 9, &imp).map_err(|e| e.to_string())?;
    let glt_time = start.elapsed();
    forest
        .validate_against(&imp, &dist)
        .map_err(|e| e.to_string())?;

    let start = Instant::now();
    let bc = betweenness_centrality(&g);
    let bc_time = start.elapsed();

    if g.n() != n || bc.len() != n || part.k() < 10 {
        return Err("unexpected sizes".into());
    }
    if glt_time >= Duration::from_secs(30) || bc_time >= Duration::from_secs(120) {
        return Err(format!(
            "degree + shortest-path GLT {glt_time:?}, betweenness {bc_time:?}"
        ));
    }
    Ok(format!(
        "n=2000, m={}: degree + shortest-path GLT {glt_time:.2?}, betweenness {bc_time:.2?}",
        g.edge_count()
    ))
}

fn criterion_8_determinism() -> Result<String, String> {
    let run = || {
        glt()
            .arg("--input")
            .arg(karate_path())
            .args([
                "--importance",
                "degree",
                "--distance",
                "shortest-path",
                "--format",
                "json",
            ])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if a.is_empty() || a != b {
        return Err("two runs differ".into());
    }
    Ok(format!(
        "two CLI runs produced identical {} bytes of JSON",
        a.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("1 oracle equivalence", criterion_1_oracle_equivalence),
        (
            "2 density-peaks correspondence",
            criterion_2_density_peaks_correspondence,
        ),
        ("3 centrality fixtures", criterion_3_centrality_fixtures),
        ("4 invariance suite", criterion_4_invariance),
        ("5 refinement", criterion_5_refinement),
        ("6 karate club desk run", criterion_6_karate_club),
        ("7 scale check", criterion_7_scale),
        ("8 determinism", criterion_8_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
