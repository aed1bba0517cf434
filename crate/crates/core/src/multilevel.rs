//! Multilevel k-way partitioner: label-propagation coarsening, portfolio
//! initial partitioning, label-propagation plus FM refinement during
//! uncoarsening, and the multilevel combine operator.

use crate::error::{Error, Result};
use crate::graph::{
    block_weight_bound, contract, cut_value, project_partition, Clustering, Graph, Hierarchy,
    Partition, Weight,
};
use crate::sclap::{self, NodeOrder};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BinaryHeap;

#[derive(Clone, Debug)]
pub struct PartitionConfig {
    pub k: usize,
    pub eps: f64,
    /// Coarsening stops once the node count drops to this. Default 20·k.
    pub coarsen_stop: Option<usize>,
    /// Cluster size bound during coarsening is L_max / this factor.
    pub cluster_bound_factor: Weight,
    /// Label propagation rounds per invocation.
    pub rounds: usize,
    /// Repetitions of each initial-partitioning portfolio member.
    pub init_attempts: usize,
    pub seed: u64,
    pub node_order: NodeOrder,
}

impl PartitionConfig {
    pub fn new(k: usize, eps: f64) -> PartitionConfig {
        PartitionConfig {
            k,
            eps,
            coarsen_stop: None,
            cluster_bound_factor: 2,
            rounds: 3,
            init_attempts: 10,
            seed: 0,
            node_order: NodeOrder::Random,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> PartitionConfig {
        self.seed = seed;
        self
    }

    fn stop(&self) -> usize {
        self.coarsen_stop.unwrap_or(20 * self.k).max(self.k)
    }

    fn bound(&self, total_weight: Weight) -> Weight {
        block_weight_bound(total_weight, self.k, self.eps)
    }

    /// Derive an independent stream seed; all randomness flows from
    /// `seed` through this split.
    fn subseed(&self, stream: u64) -> u64 {
        splitmix(self.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Recursively cluster and contract until the graph is small enough or
/// stops shrinking by at least 5%.
pub fn coarsen(g: Graph, cfg: &PartitionConfig) -> Hierarchy {
    let total = g.total_node_weight();
    let bound = (cfg.bound(total) / cfg.cluster_bound_factor).max(1);
    let mut h = Hierarchy {
        levels: vec![g],
        maps: Vec::new(),
    };
    let mut round = 0u64;
    loop {
        let cur = h.levels.last().unwrap();
        if cur.n() <= cfg.stop() {
            break;
        }
        let bound = bound.max(cur.max_node_weight());
        let clustering = sclap::cluster(
            cur,
            bound,
            cfg.rounds,
            cfg.subseed(0x10 + round),
            cfg.node_order,
        )
        .expect("bound covers max node weight");
        let (coarse, map) = contract(cur, &clustering);
        if coarse.n() == cur.n() {
            break;
        }
        let stagnant = (coarse.n() as f64) > 0.95 * cur.n() as f64;
        h.maps.push(map);
        h.levels.push(coarse);
        if stagnant {
            break;
        }
        round += 1;
    }
    h
}

#[derive(Clone, Copy)]
enum InitStrategy {
    Random,
    Bfs,
    Greedy,
}

/// Portfolio initial partitioning on a (small) coarse graph: repeated
/// random balanced assignment, BFS region growing and greedy growing by
/// max connection; the balanced candidate of minimum cut wins.
pub fn initial_partition(g: &Graph, cfg: &PartitionConfig) -> Result<Partition> {
    let k = cfg.k;
    if k == 1 {
        return Ok(Partition::from_assignment(g, 1, cfg.eps, vec![0; g.n()]));
    }
    let bound = cfg.bound(g.total_node_weight());
    if g.max_node_weight() > bound {
        return Err(Error::Infeasible(format!(
            "node weight {} exceeds block bound {bound}",
            g.max_node_weight()
        )));
    }
    let mut best: Option<(Weight, Partition)> = None;
    let mut attempt = 0u64;
    for strategy in [InitStrategy::Random, InitStrategy::Bfs, InitStrategy::Greedy] {
        for _ in 0..cfg.init_attempts {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.subseed(0x20 + attempt));
            attempt += 1;
            let mut p = grow_partition(g, cfg, strategy, &mut rng);
            repair_balance(g, &mut p, bound);
            if !p.is_balanced(g) {
                continue;
            }
            let cut = cut_value(g, &p);
            if best.as_ref().is_none_or(|(c, _)| cut < *c) {
                best = Some((cut, p));
            }
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::Infeasible("no balanced initial partition found".into()))
}

fn grow_partition(
    g: &Graph,
    cfg: &PartitionConfig,
    strategy: InitStrategy,
    rng: &mut ChaCha8Rng,
) -> Partition {
    let n = g.n();
    let k = cfg.k;
    let bound = cfg.bound(g.total_node_weight());
    let mut assignment = vec![u32::MAX; n];
    let mut block_weight = vec![0 as Weight; k];

    match strategy {
        InitStrategy::Random => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for v in order {
                let vw = g.node_weight(v);
                let start = rng.random_range(0..k);
                let fit = (0..k)
                    .map(|i| (start + i) % k)
                    .find(|&b| block_weight[b] + vw <= bound);
                let b = fit.unwrap_or_else(|| lightest_block(&block_weight));
                assignment[v] = b as u32;
                block_weight[b] += vw;
            }
        }
        InitStrategy::Bfs | InitStrategy::Greedy => {
            let target = (g.total_node_weight() + k as Weight - 1) / k as Weight;
            let mut unassigned: Vec<usize> = (0..n).collect();
            #[allow(clippy::needless_range_loop)]
            for b in 0..k {
                if unassigned.is_empty() {
                    break;
                }
                let seed_idx = rng.random_range(0..unassigned.len());
                let seed_node = unassigned[seed_idx];
                let mut frontier = vec![seed_node];
                while block_weight[b] < target {
                    let pick = match strategy {
                        InitStrategy::Bfs => frontier.first().copied(),
                        InitStrategy::Greedy => frontier
                            .iter()
                            .copied()
                            .max_by_key(|&v| {
                                g.neighbors(v)
                                    .filter(|&(u, _)| assignment[u] == b as u32)
                                    .map(|(_, w)| w)
                                    .sum::<Weight>()
                            }),
                        InitStrategy::Random => unreachable!(),
                    };
                    let Some(v) = pick else { break };
                    frontier.retain(|&x| x != v);
                    if assignment[v] != u32::MAX {
                        continue;
                    }
                    let vw = g.node_weight(v);
                    if block_weight[b] + vw > bound {
                        continue;
                    }
                    assignment[v] = b as u32;
                    block_weight[b] += vw;
                    for (u, _) in g.neighbors(v) {
                        if assignment[u] == u32::MAX && !frontier.contains(&u) {
                            frontier.push(u);
                        }
                    }
                }
                unassigned.retain(|&v| assignment[v] == u32::MAX);
            }
            // Leftovers (disconnected or bound-blocked) go to fitting blocks.
            for v in unassigned {
                let vw = g.node_weight(v);
                let b = (0..k)
                    .find(|&b| block_weight[b] + vw <= bound)
                    .unwrap_or_else(|| lightest_block(&block_weight));
                assignment[v] = b as u32;
                block_weight[b] += vw;
            }
        }
    }
    Partition {
        k,
        eps: cfg.eps,
        assignment,
        block_weight,
    }
}

fn lightest_block(block_weight: &[Weight]) -> usize {
    block_weight
        .iter()
        .enumerate()
        .min_by_key(|&(_, w)| *w)
        .map(|(b, _)| b)
        .unwrap()
}

/// Move minimum-connection nodes out of overweight blocks until the
/// balance constraint holds (or no move helps).
fn repair_balance(g: &Graph, p: &mut Partition, bound: Weight) {
    let max_iters = 4 * g.n() + 16;
    for _ in 0..max_iters {
        let Some(over) = p
            .block_weight
            .iter()
            .enumerate()
            .filter(|&(_, w)| *w > bound)
            .max_by_key(|&(_, w)| *w)
            .map(|(b, _)| b)
        else {
            return;
        };
        // Prefer the node with the weakest tie to its block whose weight
        // fits somewhere else.
        let mut candidate: Option<(Weight, usize, usize)> = None;
        for v in 0..g.n() {
            if p.assignment[v] != over as u32 {
                continue;
            }
            let vw = g.node_weight(v);
            let own_conn: Weight = g
                .neighbors(v)
                .filter(|&(u, _)| p.assignment[u] == over as u32)
                .map(|(_, w)| w)
                .sum();
            let target = (0..p.k)
                .filter(|&b| b != over && p.block_weight[b] + vw <= bound)
                .max_by_key(|&b| {
                    g.neighbors(v)
                        .filter(|&(u, _)| p.assignment[u] == b as u32)
                        .map(|(_, w)| w)
                        .sum::<Weight>()
                });
            if let Some(t) = target {
                if candidate.is_none() || own_conn < candidate.unwrap().0 {
                    candidate = Some((own_conn, v, t));
                }
            }
        }
        let Some((_, v, t)) = candidate else { return };
        let vw = g.node_weight(v);
        p.block_weight[over] -= vw;
        p.block_weight[t] += vw;
        p.assignment[v] = t as u32;
    }
}

/// Boundary FM for the k-way edge cut: gain-ordered single-node moves,
/// each node moved at most once per pass, with rollback to the best
/// prefix. Passes repeat until one fails to improve (at most 10).
pub fn fm_refine(g: &Graph, p: &Partition, cfg: &PartitionConfig) -> Partition {
    let mut p = p.clone();
    if p.k == 1 {
        return p;
    }
    let bound = cfg.bound(g.total_node_weight());
    for _ in 0..10 {
        if !fm_pass(g, &mut p, bound) {
            break;
        }
    }
    p
}

/// Best feasible move of `v`: (gain, target). Targets are adjacent blocks
/// whose post-move weight stays within the bound.
fn best_move(g: &Graph, p: &Partition, bound: Weight, v: usize) -> Option<(Weight, u32)> {
    let own = p.assignment[v];
    let vw = g.node_weight(v);
    let mut conn: Vec<Weight> = vec![0; p.k];
    let mut adjacent: Vec<u32> = Vec::new();
    for (u, w) in g.neighbors(v) {
        let b = p.assignment[u];
        if conn[b as usize] == 0 && b != own {
            adjacent.push(b);
        }
        conn[b as usize] += w;
    }
    adjacent
        .into_iter()
        .filter(|&b| p.block_weight[b as usize] + vw <= bound)
        .map(|b| (conn[b as usize] - conn[own as usize], b))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
}

fn fm_pass(g: &Graph, p: &mut Partition, bound: Weight) -> bool {
    let start_cut = cut_value(g, p);
    let mut moved = vec![false; g.n()];
    let mut heap: BinaryHeap<(Weight, usize, u32)> = BinaryHeap::new();
    for v in 0..g.n() {
        if let Some((gain, b)) = best_move(g, p, bound, v) {
            heap.push((gain, v, b));
        }
    }

    let mut cut = start_cut;
    let mut best_cut = start_cut;
    let mut best_len = 0usize;
    let mut trail: Vec<(usize, u32, u32)> = Vec::new();

    while let Some((gain, v, target)) = heap.pop() {
        if moved[v] {
            continue;
        }
        // Stale entries are re-keyed lazily.
        match best_move(g, p, bound, v) {
            Some((cur_gain, cur_target)) => {
                if cur_gain != gain || cur_target != target {
                    heap.push((cur_gain, v, cur_target));
                    continue;
                }
            }
            None => continue,
        }
        let own = p.assignment[v];
        let vw = g.node_weight(v);
        p.assignment[v] = target;
        p.block_weight[own as usize] -= vw;
        p.block_weight[target as usize] += vw;
        moved[v] = true;
        cut -= gain;
        trail.push((v, own, target));
        if cut < best_cut {
            best_cut = cut;
            best_len = trail.len();
        }
        for (u, _) in g.neighbors(v) {
            if !moved[u] {
                if let Some((ugain, ub)) = best_move(g, p, bound, u) {
                    heap.push((ugain, u, ub));
                }
            }
        }
    }

    // Roll back past the best prefix.
    for &(v, from, to) in trail[best_len..].iter().rev() {
        let vw = g.node_weight(v);
        p.assignment[v] = from;
        p.block_weight[to as usize] -= vw;
        p.block_weight[from as usize] += vw;
    }
    debug_assert_eq!(cut_value(g, p), best_cut);
    best_cut < start_cut
}

/// Full multilevel pipeline: coarsen, portfolio-partition the coarsest
/// graph, then project and refine level by level.
pub fn partition(g: &Graph, cfg: &PartitionConfig) -> Result<Partition> {
    if cfg.k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if cfg.k == 1 {
        return Ok(Partition::from_assignment(g, 1, cfg.eps, vec![0; g.n()]));
    }
    let bound = cfg.bound(g.total_node_weight());
    if g.max_node_weight() > bound {
        return Err(Error::Infeasible(format!(
            "node weight {} exceeds block bound {bound}",
            g.max_node_weight()
        )));
    }
    let h = coarsen(g.clone(), cfg);
    // Lumpy coarse node weights can defeat the initial partitioner under
    // a tight bound even when the instance is feasible; fall back to
    // finer (lighter-grained) levels before giving up.
    let mut start = h.levels.len() - 1;
    let mut p = loop {
        match initial_partition(&h.levels[start], cfg) {
            Ok(p) => break p,
            Err(_) if start > 0 => start -= 1,
            Err(e) => return Err(e),
        }
    };
    p = refine_level(&h.levels[start], p, cfg, 0);
    for level in (0..start).rev() {
        let fine = &h.levels[level];
        p = project_partition(fine, &p, &h.maps[level]);
        p = refine_level(fine, p, cfg, level as u64 + 1);
    }
    debug_assert!(p.is_balanced(g));
    Ok(p)
}

fn refine_level(g: &Graph, p: Partition, cfg: &PartitionConfig, level: u64) -> Partition {
    let p = sclap::refine(g, &p, cfg.rounds, cfg.subseed(0x40 + level))
        .expect("projected partition stays balanced");
    fm_refine(g, &p, cfg)
}

/// Multilevel recombination of two partitions. Edges cut in either
/// parent are blocked: clusters are the connected components of the
/// subgraph of edges uncut in both, so after one contraction no
/// contractable edge remains and both parents project losslessly. The
/// better parent seeds refinement; the result is never worse than
/// either parent.
pub fn combine(g: &Graph, p1: &Partition, p2: &Partition, cfg: &PartitionConfig) -> Result<Partition> {
    for (name, p) in [("first", p1), ("second", p2)] {
        if p.k != cfg.k || p.assignment.len() != g.n() {
            return Err(Error::InvalidInput(format!(
                "{name} parent does not match graph/config"
            )));
        }
        if !p.is_balanced(g) {
            return Err(Error::InvalidInput(format!("{name} parent is unbalanced")));
        }
    }
    // Overlay components via union-find on unblocked edges.
    let mut parent: Vec<u32> = (0..g.n() as u32).collect();
    fn find(parent: &mut [u32], v: u32) -> u32 {
        let mut root = v;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = v;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for (u, v, _) in g.edges() {
        if p1.assignment[u] == p1.assignment[v] && p2.assignment[u] == p2.assignment[v] {
            let (ru, rv) = (find(&mut parent, u as u32), find(&mut parent, v as u32));
            if ru != rv {
                parent[ru as usize] = rv;
            }
        }
    }
    let roots: Vec<u32> = (0..g.n() as u32).map(|v| find(&mut parent, v)).collect();
    let clustering = Clustering::from_assignment(g, roots);
    let (coarse, map) = contract(g, &clustering);

    // Both parents are constant on every cluster, so they project
    // losslessly onto the coarse graph.
    let project = |p: &Partition| {
        let mut assignment = vec![0u32; coarse.n()];
        for v in 0..g.n() {
            assignment[map[v] as usize] = p.assignment[v];
        }
        Partition {
            k: p.k,
            eps: cfg.eps,
            assignment,
            block_weight: p.block_weight.clone(),
        }
    };
    let c1 = project(p1);
    let c2 = project(p2);
    let seedp = if cut_value(&coarse, &c1) <= cut_value(&coarse, &c2) {
        c1
    } else {
        c2
    };
    let refined = refine_level(&coarse, seedp, cfg, 0x80);
    let fine = project_partition(g, &refined, &map);
    let out = refine_level(g, fine, cfg, 0x81);
    debug_assert!(out.is_balanced(g));
    Ok(out)
}
