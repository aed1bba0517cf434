//! Weighted undirected graph in compressed sparse form, plus the
//! partitioning primitives built directly on it: cluster contraction,
//! partition projection and cut evaluation.

use crate::error::{Error, Result};

/// Node and edge weights. Wide enough to hold the total weight of any
/// graph we handle; totals are validated at construction.
pub type Weight = i64;

/// Undirected graph with positive integer node and edge weights.
///
/// Each undirected edge is stored as two directed arcs. The structure is
/// immutable after construction and safe to share across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    node_weight: Vec<Weight>,
    edge_weight: Vec<Weight>,
}

impl Graph {
    /// Build a graph from an undirected edge list. Self-loops are dropped
    /// and parallel edges are merged by summing their weights. Adjacency
    /// lists come out sorted by target.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize, Weight)],
        node_weights: Option<Vec<Weight>>,
    ) -> Result<Graph> {
        let node_weight = match node_weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "expected {n} node weights, got {}",
                        w.len()
                    )));
                }
                w
            }
            None => vec![1; n],
        };
        if let Some(w) = node_weight.iter().find(|&&w| w < 1) {
            return Err(Error::InvalidInput(format!("node weight {w} < 1")));
        }

        let mut arcs: Vec<(usize, usize, Weight)> = Vec::with_capacity(edges.len() * 2);
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if w < 1 {
                return Err(Error::InvalidInput(format!("edge weight {w} < 1")));
            }
            if u == v {
                continue;
            }
            arcs.push((u, v, w));
            arcs.push((v, u, w));
        }
        arcs.sort_unstable();

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(arcs.len());
        let mut edge_weight = Vec::with_capacity(arcs.len());
        let mut iter = arcs.into_iter().peekable();
        for u in 0..n {
            while let Some(&(au, v, _)) = iter.peek() {
                if au != u {
                    break;
                }
                let mut w = 0;
                while let Some(&(au2, v2, w2)) = iter.peek() {
                    if au2 != u || v2 != v {
                        break;
                    }
                    w += w2;
                    iter.next();
                }
                targets.push(v as u32);
                edge_weight.push(w);
            }
            offsets[u + 1] = targets.len();
        }

        Ok(Graph {
            offsets,
            targets,
            node_weight,
            edge_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.node_weight.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn node_weight(&self, v: usize) -> Weight {
        self.node_weight[v]
    }

    /// Neighbors of `v` with the weight of the connecting edge.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, Weight)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.edge_weight[r])
            .map(|(&t, &w)| (t as usize, w))
    }

    pub fn total_node_weight(&self) -> Weight {
        self.node_weight.iter().sum()
    }

    /// Sum of ω over undirected edges.
    pub fn total_edge_weight(&self) -> Weight {
        self.edge_weight.iter().sum::<Weight>() / 2
    }

    /// Undirected edges in canonical order: sorted (u, v) with u < v.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn max_node_weight(&self) -> Weight {
        self.node_weight.iter().copied().max().unwrap_or(0)
    }
}

/// Upper block weight bound L_max = (1+ε)·⌈c(V)/k⌉.
pub fn block_weight_bound(total_weight: Weight, k: usize, eps: f64) -> Weight {
    let ideal = (total_weight + k as Weight - 1) / k as Weight;
    ((1.0 + eps) * ideal as f64).floor() as Weight
}

/// Node-to-cluster assignment with per-cluster weight tracking.
#[derive(Clone, Debug)]
pub struct Clustering {
    pub assignment: Vec<u32>,
    pub cluster_weight: Vec<Weight>,
}

impl Clustering {
    /// Every node in its own cluster.
    pub fn singletons(g: &Graph) -> Clustering {
        Clustering {
            assignment: (0..g.n() as u32).collect(),
            cluster_weight: (0..g.n()).map(|v| g.node_weight(v)).collect(),
        }
    }

    /// Build from an arbitrary assignment, computing cluster weights.
    pub fn from_assignment(g: &Graph, assignment: Vec<u32>) -> Clustering {
        let num = assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut cluster_weight = vec![0; num];
        for (v, &c) in assignment.iter().enumerate() {
            cluster_weight[c as usize] += g.node_weight(v);
        }
        Clustering {
            assignment,
            cluster_weight,
        }
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_weight.iter().filter(|&&w| w > 0).count()
    }

    /// Renumber non-empty clusters to 0..count-1.
    pub fn compact(&mut self) {
        let mut remap = vec![u32::MAX; self.cluster_weight.len()];
        let mut next = 0u32;
        for &c in &self.assignment {
            if remap[c as usize] == u32::MAX {
                remap[c as usize] = next;
                next += 1;
            }
        }
        let mut weights = vec![0; next as usize];
        for a in &mut self.assignment {
            *a = remap[*a as usize];
        }
        for (c, &w) in self.cluster_weight.iter().enumerate() {
            if remap[c] != u32::MAX {
                weights[remap[c] as usize] = w;
            }
        }
        self.cluster_weight = weights;
    }
}

/// Node-to-block assignment for fixed k with imbalance ε.
#[derive(Clone, Debug)]
pub struct Partition {
    pub k: usize,
    pub eps: f64,
    pub assignment: Vec<u32>,
    pub block_weight: Vec<Weight>,
}

impl Partition {
    pub fn from_assignment(g: &Graph, k: usize, eps: f64, assignment: Vec<u32>) -> Partition {
        let mut block_weight = vec![0; k];
        for (v, &b) in assignment.iter().enumerate() {
            block_weight[b as usize] += g.node_weight(v);
        }
        Partition {
            k,
            eps,
            assignment,
            block_weight,
        }
    }

    pub fn bound(&self, g: &Graph) -> Weight {
        block_weight_bound(g.total_node_weight(), self.k, self.eps)
    }

    pub fn is_balanced(&self, g: &Graph) -> bool {
        let bound = self.bound(g);
        self.block_weight.iter().all(|&w| w <= bound)
    }

    pub fn max_block_weight(&self) -> Weight {
        self.block_weight.iter().copied().max().unwrap_or(0)
    }
}

/// Total weight of edges whose endpoints lie in different blocks.
pub fn cut_value(g: &Graph, p: &Partition) -> Weight {
    let mut cut = 0;
    for u in 0..g.n() {
        for (v, w) in g.neighbors(u) {
            if u < v && p.assignment[u] != p.assignment[v] {
                cut += w;
            }
        }
    }
    cut
}

/// Contract each cluster into a supervertex. Inter-cluster edge weights
/// are summed, intra-cluster edges vanish. Returns the coarse graph and
/// the fine-node to coarse-node map.
pub fn contract(g: &Graph, clustering: &Clustering) -> (Graph, Vec<u32>) {
    let mut c = clustering.clone();
    c.compact();
    let coarse_n = c.cluster_weight.len();
    let coarse_map = c.assignment;

    let mut node_weight = vec![0; coarse_n];
    for v in 0..g.n() {
        node_weight[coarse_map[v] as usize] += g.node_weight(v);
    }

    let mut edges = Vec::new();
    for u in 0..g.n() {
        let cu = coarse_map[u];
        for (v, w) in g.neighbors(u) {
            let cv = coarse_map[v];
            if u < v && cu != cv {
                edges.push((cu as usize, cv as usize, w));
            }
        }
    }
    let coarse = Graph::from_edges(coarse_n, &edges, Some(node_weight))
        .expect("contraction of a valid graph yields a valid graph");
    (coarse, coarse_map)
}

/// Pull a coarse partition down through a contraction map. Cut and block
/// weights are preserved exactly.
pub fn project_partition(fine: &Graph, coarse_p: &Partition, coarse_map: &[u32]) -> Partition {
    let assignment = (0..fine.n())
        .map(|v| coarse_p.assignment[coarse_map[v] as usize])
        .collect();
    Partition {
        k: coarse_p.k,
        eps: coarse_p.eps,
        assignment,
        block_weight: coarse_p.block_weight.clone(),
    }
}

/// Coarsening hierarchy: graphs from finest to coarsest plus the
/// per-level contraction maps.
#[derive(Debug)]
pub struct Hierarchy {
    pub levels: Vec<Graph>,
    pub maps: Vec<Vec<u32>>,
}

impl Hierarchy {
    pub fn coarsest(&self) -> &Graph {
        self.levels.last().unwrap()
    }
}
