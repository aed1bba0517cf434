//! Size-constrained label propagation. One algorithm, two uses: as the
//! clusterer driving coarsening and as a fast local search on partitions.

use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph, Partition, Weight};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Node visit order within a round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NodeOrder {
    #[default]
    Random,
    AscendingDegree,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// Zero-gain moves into a heavier cluster are taken, to shrink the
    /// cluster count quickly.
    Coarsening,
    /// Ties favor staying, so every move strictly reduces the cut.
    Refinement,
}

/// Cluster the graph under the hard cluster-weight bound `bound`.
///
/// Starts from singletons. Each round visits every node once in a seeded
/// random (or ascending-degree) order and moves it to the eligible
/// cluster with the strongest connection; ties are broken uniformly at
/// random. Labels update within the round. Stops early once a round
/// makes no move.
pub fn cluster(
    g: &Graph,
    bound: Weight,
    rounds: usize,
    seed: u64,
    order: NodeOrder,
) -> Result<Clustering> {
    if bound < g.max_node_weight() {
        return Err(Error::InvalidInput(format!(
            "cluster size bound {bound} below max node weight {}",
            g.max_node_weight()
        )));
    }
    let mut c = Clustering::singletons(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    propagate(
        g,
        &mut c.assignment,
        &mut c.cluster_weight,
        bound,
        rounds,
        &mut rng,
        order,
        Mode::Coarsening,
    );
    Ok(c)
}

/// Local search on a balanced partition: label propagation over the k
/// block labels with the balance constraint as the size bound. The cut
/// never increases.
pub fn refine(g: &Graph, p: &Partition, rounds: usize, seed: u64) -> Result<Partition> {
    if !p.is_balanced(g) {
        return Err(Error::InvalidInput(
            "refinement requires a balanced input partition".into(),
        ));
    }
    let mut p = p.clone();
    let bound = p.bound(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    propagate(
        g,
        &mut p.assignment,
        &mut p.block_weight,
        bound,
        rounds,
        &mut rng,
        NodeOrder::Random,
        Mode::Refinement,
    );
    Ok(p)
}

#[allow(clippy::too_many_arguments)]
fn propagate(
    g: &Graph,
    labels: &mut [u32],
    label_weight: &mut [Weight],
    bound: Weight,
    rounds: usize,
    rng: &mut ChaCha8Rng,
    order: NodeOrder,
    mode: Mode,
) {
    let n = g.n();
    let mut visit: Vec<usize> = (0..n).collect();
    if order == NodeOrder::AscendingDegree {
        visit.sort_by_key(|&v| g.degree(v));
    }
    // Scratch connection weights indexed by label, reset via `touched`.
    let mut conn: Vec<Weight> = vec![0; label_weight.len()];
    let mut touched: Vec<u32> = Vec::new();
    let mut candidates: Vec<u32> = Vec::new();

    for _ in 0..rounds {
        match order {
            NodeOrder::Random => visit.shuffle(rng),
            NodeOrder::AscendingDegree => {}
        }
        let mut moves = 0usize;
        for &v in &visit {
            let own = labels[v];
            for (u, w) in g.neighbors(v) {
                let l = labels[u];
                if conn[l as usize] == 0 {
                    touched.push(l);
                }
                conn[l as usize] += w;
            }
            let vw = g.node_weight(v);
            let own_conn = conn[own as usize];
            let mut best = own_conn;
            candidates.clear();
            for &l in &touched {
                if l == own {
                    continue;
                }
                if label_weight[l as usize] + vw > bound {
                    continue;
                }
                let c = conn[l as usize];
                if c > best {
                    best = c;
                    candidates.clear();
                    candidates.push(l);
                } else if c == best && c > own_conn {
                    candidates.push(l);
                } else if c == best && c == own_conn && mode == Mode::Coarsening {
                    // Zero-gain move, taken only towards a heavier cluster.
                    if label_weight[l as usize] > label_weight[own as usize] - vw {
                        candidates.push(l);
                    }
                }
            }
            for &l in &touched {
                conn[l as usize] = 0;
            }
            touched.clear();
            if candidates.is_empty() {
                continue;
            }
            let target = if candidates.len() == 1 {
                candidates[0]
            } else {
                candidates[rng.random_range(0..candidates.len())]
            };
            labels[v] = target;
            label_weight[own as usize] -= vw;
            label_weight[target as usize] += vw;
            moves += 1;
            debug_assert!(label_weight[target as usize] <= bound);
        }
        if moves == 0 {
            break;
        }
    }
}
