//! Acceptance gate: one test per criterion, each printing a single
//! PASS line (run with --nocapture to see them). Oracles are exhaustive
//! enumerations computed in-place; no expected value is taken on faith
//! from the implementation under test.

use partix::bagen::{ba_generate, ccdf_slope, BaParams};
use partix::flow::node_capacitated_maxflow;
use partix::graph::{block_weight_bound, cut_value, Graph, Partition, Weight};
use partix::mapping::{comm_cost, top_down_map, HierarchySpec, ProcessMapping};
use partix::multilevel::{self, PartitionConfig};
use partix::sclap;
use partix::separator::{
    build_flow_problem, derive_separator, flow_refine, fm_separator_refine,
    multilevel_separator,
};
use partix::spac::{build_spac, edge_partition};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::process::Command;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: spanning tree plus `extra` random edges.
fn random_connected(n: usize, extra: usize, max_w: Weight, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, rng.random_range(1..=max_w)));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v), rng.random_range(1..=max_w)));
        }
    }
    Graph::from_edges(n, &edges, None).unwrap()
}

fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
    Graph::from_edges(n, &edges, None).unwrap()
}

fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), 1));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), 1));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges, None).unwrap()
}

fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1));
        }
    }
    Graph::from_edges(n, &edges, None).unwrap()
}

/// Criterion 1: zero balance violations over 1,000 randomized runs.
#[test]
fn acceptance_01_balance_soundness() {
    let ks = [2usize, 3, 4, 8];
    let epss = [0.0f64, 0.03, 0.5];
    let mut r = rng(0xACC1);
    let mut violations = 0usize;
    for run in 0..1000u64 {
        let k = ks[r.random_range(0..ks.len())];
        let eps = epss[r.random_range(0..epss.len())];
        let n = r.random_range(12..=96);
        let max_w = if eps >= 0.5 { 3 } else { 1 };
        let g = random_connected(n, n / 2, max_w, &mut r);
        let cfg = PartitionConfig::new(k, eps).with_seed(run);
        match multilevel::partition(&g, &cfg) {
            Ok(p) => {
                if !p.is_balanced(&g) {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    assert_eq!(violations, 0, "{violations} balance violations in 1000 runs");
    println!("acceptance 1 balance-soundness: PASS");
}

/// Exhaustive minimum balanced bisection cut (unit infeasibles skipped).
fn brute_force_bisection(g: &Graph, eps: f64) -> Weight {
    let n = g.n();
    let bound = block_weight_bound(g.total_node_weight(), 2, eps);
    let mut best = Weight::MAX;
    for mask in 0u32..(1 << n) {
        let assignment: Vec<u32> = (0..n).map(|v| (mask >> v) & 1).collect();
        let mut w = [0 as Weight; 2];
        for v in 0..n {
            w[assignment[v] as usize] += g.node_weight(v);
        }
        if w[0] > bound || w[1] > bound {
            continue;
        }
        let p = Partition::from_assignment(g, 2, eps, assignment);
        best = best.min(cut_value(g, &p));
    }
    best
}

/// Criterion 2: best-of-5 matches the exhaustive bisection cut on >= 90%
/// of 100 random connected graphs, with 100% validity.
#[test]
fn acceptance_02_brute_force_parity() {
    let mut r = rng(0xACC2);
    let mut matches = 0usize;
    for i in 0..100u64 {
        let n = r.random_range(4..=10);
        let g = random_connected(n, r.random_range(0..=n), 1, &mut r);
        let oracle = brute_force_bisection(&g, 0.5);
        let mut best = Weight::MAX;
        for s in 0..5u64 {
            let cfg = PartitionConfig::new(2, 0.5).with_seed(i * 5 + s);
            let p = multilevel::partition(&g, &cfg).unwrap();
            assert!(p.is_balanced(&g), "instance {i}: unbalanced output");
            best = best.min(cut_value(&g, &p));
        }
        assert!(best >= oracle, "instance {i}: cut {best} below oracle {oracle}");
        if best == oracle {
            matches += 1;
        }
    }
    assert!(matches >= 90, "only {matches}/100 matched the brute-force cut");
    println!("acceptance 2 brute-force-parity: PASS ({matches}/100 optimal)");
}

/// Criterion 3: combine never loses to the better parent.
#[test]
fn acceptance_03_combine_dominance() {
    let mut r = rng(0xACC3);
    for i in 0..200u64 {
        let n = r.random_range(8..=64);
        let g = random_connected(n, n, 1, &mut r);
        let k = r.random_range(2..=4);
        let cfg = PartitionConfig::new(k, 0.3).with_seed(i);
        let p1 = multilevel::partition(&g, &cfg).unwrap();
        let p2 = multilevel::partition(&g, &cfg.clone().with_seed(i + 7919)).unwrap();
        let best_parent = cut_value(&g, &p1).min(cut_value(&g, &p2));
        let child = multilevel::combine(&g, &p1, &p2, &cfg).unwrap();
        assert!(
            cut_value(&g, &child) <= best_parent,
            "instance {i}: child cut {} above best parent {best_parent}",
            cut_value(&g, &child)
        );
    }
    println!("acceptance 3 combine-dominance: PASS");
}

/// Minimum-weight node subset of the region separating the left border
/// from the right border, by exhaustive enumeration.
fn brute_force_region_cut(g: &Graph, network: &partix::flow::FlowNetwork) -> Weight {
    let region = &network.region;
    let a = region.len();
    let mut region_pos = vec![usize::MAX; g.n()];
    for (i, &v) in region.iter().enumerate() {
        region_pos[v] = i;
    }
    let left: Vec<usize> = network.left_border.clone();
    let right: Vec<usize> = network.right_border.clone();
    let mut best = Weight::MAX;
    for mask in 0u32..(1 << a) {
        let weight: Weight = (0..a)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| g.node_weight(region[i]))
            .sum();
        if weight >= best {
            continue;
        }
        // Reachability from surviving left-border nodes.
        let mut seen = vec![false; a];
        let mut stack: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| mask >> i & 1 == 0)
            .collect();
        for &i in &stack {
            seen[i] = true;
        }
        let mut separated = true;
        while let Some(i) = stack.pop() {
            if right.contains(&i) {
                separated = false;
                break;
            }
            for (u, _) in g.neighbors(region[i]) {
                let j = region_pos[u];
                if j != usize::MAX && mask >> j & 1 == 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if separated {
            best = weight;
        }
    }
    best
}

/// Criterion 4: max-flow equals the exhaustive minimum separating subset
/// weight on 100 small regions, exactly.
#[test]
fn acceptance_04_flow_optimality() {
    let mut r = rng(0xACC4);
    let mut checked = 0usize;
    let mut attempts = 0usize;
    while checked < 100 {
        attempts += 1;
        assert!(attempts < 5000, "could not collect 100 small flow regions");
        let n = r.random_range(6..=12);
        let g = random_connected(n, r.random_range(0..=n / 2), 2, &mut r);
        let eps = [0.1, 0.3, 1.0][r.random_range(0..3)];
        let cfg = PartitionConfig::new(2, eps).with_seed(attempts as u64);
        let Ok(p) = multilevel::partition(&g, &cfg) else {
            continue;
        };
        let sep = derive_separator(&g, &p);
        let Some(network) = build_flow_problem(&g, &sep, eps) else {
            continue;
        };
        if network.region.len() > 12 {
            continue;
        }
        let (flow, _) = node_capacitated_maxflow(&network);
        let oracle = brute_force_region_cut(&g, &network);
        assert_eq!(flow, oracle, "attempt {attempts}: flow {flow} vs oracle {oracle}");
        checked += 1;
    }
    println!("acceptance 4 flow-optimality: PASS");
}

/// Exhaustive minimum balanced two-sided separator weight; None if no
/// two-sided separator exists.
fn brute_force_separator(g: &Graph, eps: f64) -> Option<Weight> {
    let n = g.n();
    let bound = block_weight_bound(g.total_node_weight(), 2, eps);
    let mut best: Option<Weight> = None;
    for mask in 0u32..(1 << n) {
        let sep_weight: Weight = (0..n)
            .filter(|v| mask >> v & 1 == 1)
            .map(|v| g.node_weight(v))
            .sum();
        if best.is_some_and(|b| sep_weight >= b) {
            continue;
        }
        // Components of g minus the candidate separator.
        let mut comp = vec![usize::MAX; n];
        let mut comp_weights: Vec<Weight> = Vec::new();
        for start in 0..n {
            if mask >> start & 1 == 1 || comp[start] != usize::MAX {
                continue;
            }
            let id = comp_weights.len();
            let mut w = 0;
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                w += g.node_weight(u);
                for (v, _) in g.neighbors(u) {
                    if mask >> v & 1 == 0 && comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            comp_weights.push(w);
        }
        if comp_weights.len() < 2 {
            continue;
        }
        // Pack components into two sides: subset-sum over component
        // weights, both sides non-empty and within the bound.
        let total: Weight = comp_weights.iter().sum();
        let mut feasible = false;
        for sel in 1u32..(1 << comp_weights.len()) - 1 {
            let w1: Weight = comp_weights
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .map(|(_, &w)| w)
                .sum();
            if w1 <= bound && total - w1 <= bound {
                feasible = true;
                break;
            }
        }
        if feasible {
            best = Some(sep_weight);
        }
    }
    best
}

/// Criterion 5: separator pipeline reaches the brute-force optimum on
/// P5 and the 4x4 grid; on K4 no two-sided separator exists, so assert
/// validity and weight >= 2.
#[test]
fn acceptance_05_separator_end_to_end() {
    let cases = [(path(5), 0.3), (grid(4, 4), 0.3)];
    for (i, (g, eps)) in cases.iter().enumerate() {
        let oracle = brute_force_separator(g, *eps).expect("two-sided separator exists");
        let sep = multilevel_separator(g, *eps, &PartitionConfig::new(2, *eps)).unwrap();
        assert!(sep.is_valid(g), "case {i}: invalid separator");
        assert!(sep.is_balanced(g, *eps), "case {i}: unbalanced separator");
        assert_eq!(
            sep.separator_weight(),
            oracle,
            "case {i}: weight {} vs brute force {oracle}",
            sep.separator_weight()
        );
    }
    let g = complete(4);
    assert_eq!(brute_force_separator(&g, 1.0), None);
    let sep = multilevel_separator(&g, 1.0, &PartitionConfig::new(2, 1.0)).unwrap();
    assert!(sep.is_valid(&g));
    assert!(sep.separator_weight() >= 2, "K4 separator weight {}", sep.separator_weight());
    println!("acceptance 5 separator-end-to-end: PASS");
}

/// Criterion 6: split graph structure plus zero cut dominant edges.
#[test]
fn acceptance_06_spac_structure() {
    let mut r = rng(0xACC6);
    for i in 0..50u64 {
        let n = r.random_range(4..=64);
        let g = random_connected(n, n / 2, 1, &mut r);
        let (gp, mapping) = build_spac(&g);
        assert_eq!(gp.n(), 2 * g.m(), "instance {i}: split node count");
        let mut dominant_count = vec![0usize; gp.n()];
        for &(a, b) in &mapping.dominant {
            dominant_count[a] += 1;
            dominant_count[b] += 1;
        }
        assert!(
            dominant_count.iter().all(|&c| c == 1),
            "instance {i}: split node without exactly one dominant edge"
        );
        let k = r.random_range(2..=4).min(g.m());
        let cfg = PartitionConfig::new(k, 0.5).with_seed(i);
        let ep = edge_partition(&g, &cfg).unwrap();
        assert_eq!(
            ep.cut_dominant_edges, 0,
            "instance {i}: {} dominant edges cut (n={n}, k={k})",
            ep.cut_dominant_edges
        );
    }
    println!("acceptance 6 spac-structure: PASS");
}

/// Criterion 7: generator laws at n=10^4 for d in {1,4,8}.
#[test]
fn acceptance_07_ba_generator_laws() {
    let n = 10_000u64;
    for d in [1u64, 4, 8] {
        let params = BaParams::new(n, d, 0, 0xBA).unwrap();
        let edges = ba_generate(&params, 0, params.num_edges()).unwrap();
        assert_eq!(edges[0], (0, 0), "d={d}: first edge");
        for (i, &(u, _)) in edges.iter().enumerate() {
            assert_eq!(u, i as u64 / d, "d={d}: source of edge {i}");
        }
        // 7-chunk output must concatenate to the 1-chunk output.
        let m = params.num_edges();
        let mut chunked = Vec::new();
        for c in 0..7 {
            chunked.extend(ba_generate(&params, m * c / 7, m * (c + 1) / 7).unwrap());
        }
        assert_eq!(edges, chunked, "d={d}: chunked generation differs");
        // Degree tail: CCDF slope averaged over 5 seeds within 0.5 of -2.
        let mut slope_sum = 0.0;
        for seed in 0..5u64 {
            let params = BaParams::new(n, d, 0, seed).unwrap();
            let mut degree = vec![0u64; n as usize];
            for (u, v) in ba_generate(&params, 0, params.num_edges()).unwrap() {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
            slope_sum += ccdf_slope(&degree, 16, 256);
        }
        let slope = slope_sum / 5.0;
        assert!(
            (slope + 2.0).abs() <= 0.5,
            "d={d}: mean CCDF slope {slope} outside -2 +/- 0.5"
        );
    }
    println!("acceptance 7 ba-generator-laws: PASS");
}

/// Criterion 8: K4 mapping cost is exactly the enumerated value, and
/// top-down mapping beats a random bijection on >= 95% of clustered
/// instances.
#[test]
fn acceptance_08_mapping() {
    // Enumerated oracle: every bijection of K4 onto spec (2,2) costs 10.
    let g = complete(4);
    let spec = HierarchySpec::new(vec![2, 2]).unwrap();
    let mut perm = [0u32, 1, 2, 3];
    let oracle = {
        let mut costs = Vec::new();
        permutations(&mut perm, 0, &mut |p| {
            let m = ProcessMapping { sigma: p.to_vec() };
            costs.push(comm_cost(&g, &m, &spec));
        });
        assert!(costs.iter().all(|&c| c == costs[0]));
        costs[0]
    };
    assert_eq!(oracle, 10);
    let m = top_down_map(&g, &spec, &PartitionConfig::new(1, 0.0)).unwrap();
    assert_eq!(comm_cost(&g, &m, &spec), 10);

    let mut r = rng(0xACC8);
    let mut wins = 0usize;
    for i in 0..100u64 {
        let n = if i % 2 == 0 { 8 } else { 16 };
        let spec = if n == 8 {
            HierarchySpec::new(vec![2, 2, 2]).unwrap()
        } else {
            HierarchySpec::new(vec![2, 2, 2, 2]).unwrap()
        };
        // Two dense clusters with heavy internal traffic, light bridges.
        let half = n / 2;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let same = (u < half) == (v < half);
                if same {
                    edges.push((u, v, r.random_range(8..=16)));
                } else if r.random_range(0..4) == 0 {
                    edges.push((u, v, 1));
                }
            }
        }
        let g = Graph::from_edges(n, &edges, None).unwrap();
        let m = top_down_map(&g, &spec, &PartitionConfig::new(1, 0.0).with_seed(i)).unwrap();
        let mut sigma: Vec<u32> = (0..n as u32).collect();
        sigma.shuffle(&mut r);
        let random_cost = comm_cost(&g, &ProcessMapping { sigma }, &spec);
        if comm_cost(&g, &m, &spec) < random_cost {
            wins += 1;
        }
    }
    assert!(wins >= 95, "top-down beat random on only {wins}/100 instances");
    println!("acceptance 8 mapping: PASS ({wins}/100 wins)");
}

fn permutations(items: &mut [u32], k: usize, f: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Random balanced partition: shuffled round-robin assignment.
fn random_balanced_partition(g: &Graph, k: usize, eps: f64, r: &mut ChaCha8Rng) -> Partition {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(r);
    let mut assignment = vec![0u32; g.n()];
    for (i, &v) in order.iter().enumerate() {
        assignment[v] = (i % k) as u32;
    }
    Partition::from_assignment(g, k, eps, assignment)
}

/// Criterion 9: refinement operators never worsen their objective.
#[test]
fn acceptance_09_monotonicity() {
    let mut r = rng(0xACC9);
    for i in 0..500u64 {
        let n = r.random_range(6..=48);
        let g = random_connected(n, n / 2, 1, &mut r);
        let k = r.random_range(2..=4);
        let eps = [0.1, 0.3, 0.5][r.random_range(0..3)];
        let p = random_balanced_partition(&g, k, eps, &mut r);
        if !p.is_balanced(&g) {
            continue;
        }
        let before = cut_value(&g, &p);
        let after = sclap::refine(&g, &p, 3, i).unwrap();
        assert!(cut_value(&g, &after) <= before, "sclap refine worsened at {i}");
        let cfg = PartitionConfig::new(k, eps).with_seed(i);
        let after = multilevel::fm_refine(&g, &p, &cfg);
        assert!(cut_value(&g, &after) <= before, "fm refine worsened at {i}");
    }
    for i in 0..500u64 {
        let n = r.random_range(6..=48);
        let g = random_connected(n, n / 2, 1, &mut r);
        let eps = [0.3, 0.5, 1.0][r.random_range(0..3)];
        let cfg = PartitionConfig::new(2, eps).with_seed(i);
        let Ok(p) = multilevel::partition(&g, &cfg) else {
            continue;
        };
        let sep = derive_separator(&g, &p);
        let before = sep.separator_weight();
        let subset = if i % 2 == 0 {
            None
        } else {
            Some((sep.separator_size() / 2).max(1))
        };
        let after = fm_separator_refine(&g, &sep, eps, subset, i);
        assert!(after.is_valid(&g), "separator FM broke validity at {i}");
        assert!(
            after.separator_weight() <= before,
            "separator FM worsened at {i}"
        );
        let after = flow_refine(&g, &sep, eps);
        assert!(after.is_valid(&g), "flow refine broke validity at {i}");
        assert!(
            after.separator_weight() <= before,
            "flow refine worsened at {i}"
        );
    }
    println!("acceptance 9 monotonicity: PASS");
}

/// Criterion 10: every subcommand is byte-deterministic under reruns.
#[test]
fn acceptance_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_partix");
    let dir = tempfile::tempdir().unwrap();
    let graph8 = dir.path().join("g8.graph");
    let mut r = rng(0xACCA);
    let g = random_connected(8, 6, 1, &mut r);
    std::fs::write(&graph8, partix::io::write_metis(&g)).unwrap();
    let graph64 = dir.path().join("g64.graph");
    let g = random_connected(64, 40, 2, &mut r);
    std::fs::write(&graph64, partix::io::write_metis(&g)).unwrap();

    let run = |args: &[&str], out: &std::path::Path| -> (Vec<u8>, Vec<u8>) {
        let _ = std::fs::remove_file(out);
        let output = Command::new(bin).args(args).output().unwrap();
        assert!(
            output.status.success(),
            "partix {args:?} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        (output.stdout, std::fs::read(out).unwrap())
    };

    let out = dir.path().join("out");
    let g64 = graph64.to_str().unwrap();
    let g8 = graph8.to_str().unwrap();
    let o = out.to_str().unwrap();
    let part_out = dir.path().join("part");
    let po = part_out.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["partition", g64, "--k", "4", "--eps", "0.1", "--seed", "7", "--output", o],
        vec!["separator", g64, "--eps", "0.3", "--seed", "7", "--output", o],
        vec!["edgepartition", g64, "--k", "3", "--eps", "0.3", "--seed", "7", "--output", o],
        vec!["map", g8, "--hierarchy", "2:2:2", "--seed", "7", "--output", o],
        vec![
            "generate", "--n", "500", "--d", "4", "--seed", "7", "--range", "100:900",
            "--output", o,
        ],
    ];
    for args in &cases {
        let first = run(args, &out);
        let second = run(args, &out);
        assert_eq!(first, second, "non-deterministic rerun: partix {args:?}");
    }
    // evaluate: produce a partition file once, then evaluate it twice.
    run(
        &["partition", g64, "--k", "4", "--eps", "0.1", "--seed", "7", "--output", po],
        &part_out,
    );
    let eval = ["evaluate", g64, "--partition", po, "--k", "4", "--eps", "0.1"];
    let first = Command::new(bin).args(eval).output().unwrap();
    let second = Command::new(bin).args(eval).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "evaluate rerun differs");
    println!("acceptance 10 cli-determinism: PASS");
}
