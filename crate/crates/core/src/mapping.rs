//! Top-down process mapping: recursively partition a communication
//! graph along the machine hierarchy and evaluate the hop-level
//! communication cost.

use crate::error::{Error, Result};
use crate::graph::{Graph, Weight};
use crate::multilevel::{self, PartitionConfig};

/// Machine hierarchy a₁..a_k: cores per processor, processors per node,
/// and so on. The product is the PE count; PE ids are mixed radix with
/// a₁ least significant.
#[derive(Clone, Debug)]
pub struct HierarchySpec {
    pub factors: Vec<usize>,
}

impl HierarchySpec {
    pub fn new(factors: Vec<usize>) -> Result<HierarchySpec> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidInput(
                "hierarchy factors must be positive".into(),
            ));
        }
        Ok(HierarchySpec { factors })
    }

    /// Parse the CLI form `a1:a2:...:ak`.
    pub fn parse(text: &str) -> Result<HierarchySpec> {
        let factors = text
            .split(':')
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad hierarchy factor `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        HierarchySpec::new(factors)
    }

    pub fn num_pes(&self) -> usize {
        self.factors.iter().product()
    }

    /// Hop level between two PEs: the highest mixed-radix digit at which
    /// they differ (1-based), 0 if equal.
    pub fn distance(&self, p: usize, q: usize) -> usize {
        let (mut p, mut q) = (p, q);
        let mut level = 0;
        for (i, &a) in self.factors.iter().enumerate() {
            if p % a != q % a {
                level = i + 1;
            }
            p /= a;
            q /= a;
        }
        level
    }
}

/// Bijection from task ids to PE ids.
#[derive(Clone, Debug)]
pub struct ProcessMapping {
    pub sigma: Vec<u32>,
}

/// Map a communication graph onto the hierarchy: perfectly balanced
/// partition into a_k blocks, recurse per block, and hand out
/// consecutive PE ids in index order at the a₁ leaves.
pub fn top_down_map(comm: &Graph, spec: &HierarchySpec, cfg: &PartitionConfig) -> Result<ProcessMapping> {
    if comm.n() != spec.num_pes() {
        return Err(Error::InvalidInput(format!(
            "graph has {} tasks but hierarchy has {} PEs",
            comm.n(),
            spec.num_pes()
        )));
    }
    let mut sigma = vec![u32::MAX; comm.n()];
    let nodes: Vec<usize> = (0..comm.n()).collect();
    map_recursive(comm, &nodes, &spec.factors, 0, &mut sigma, cfg)?;
    debug_assert!(is_bijection(&sigma));
    Ok(ProcessMapping { sigma })
}

fn is_bijection(sigma: &[u32]) -> bool {
    let mut seen = vec![false; sigma.len()];
    sigma.iter().all(|&p| {
        let p = p as usize;
        p < seen.len() && !std::mem::replace(&mut seen[p], true)
    })
}

fn map_recursive(
    comm: &Graph,
    nodes: &[usize],
    factors: &[usize],
    base: usize,
    sigma: &mut [u32],
    cfg: &PartitionConfig,
) -> Result<()> {
    if factors.len() == 1 {
        for (i, &v) in nodes.iter().enumerate() {
            sigma[v] = (base + i) as u32;
        }
        return Ok(());
    }
    let blocks = *factors.last().unwrap();
    let stride = nodes.len() / blocks;
    if blocks == 1 {
        return map_recursive(comm, nodes, &factors[..factors.len() - 1], base, sigma, cfg);
    }
    // Induced subgraph with unit task weights; block sizes must come out
    // exactly even, so partition at ε=0 and repair to exact counts.
    let sub = induced_unit_subgraph(comm, nodes);
    let mut cfg_sub = cfg.clone();
    cfg_sub.k = blocks;
    cfg_sub.eps = 0.0;
    let mut p = multilevel::partition(&sub, &cfg_sub)?;
    repair_exact(&sub, &mut p.assignment, blocks, stride);
    for b in 0..blocks {
        let members: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| p.assignment[i] == b as u32)
            .map(|(_, &v)| v)
            .collect();
        debug_assert_eq!(members.len(), stride);
        map_recursive(
            comm,
            &members,
            &factors[..factors.len() - 1],
            base + b * stride,
            sigma,
            cfg,
        )?;
    }
    Ok(())
}

fn induced_unit_subgraph(comm: &Graph, nodes: &[usize]) -> Graph {
    let mut index = vec![usize::MAX; comm.n()];
    for (i, &v) in nodes.iter().enumerate() {
        index[v] = i;
    }
    let mut edges = Vec::new();
    for (i, &v) in nodes.iter().enumerate() {
        for (u, w) in comm.neighbors(v) {
            if index[u] != usize::MAX && index[u] > i {
                edges.push((i, index[u], w));
            }
        }
    }
    Graph::from_edges(nodes.len(), &edges, None).unwrap()
}

/// Move minimum-connection nodes from oversized to undersized blocks
/// until every block holds exactly `stride` nodes.
fn repair_exact(g: &Graph, assignment: &mut [u32], blocks: usize, stride: usize) {
    let mut counts = vec![0usize; blocks];
    for &b in assignment.iter() {
        counts[b as usize] += 1;
    }
    loop {
        let Some(over) = (0..blocks).find(|&b| counts[b] > stride) else {
            return;
        };
        let under = (0..blocks)
            .find(|&b| counts[b] < stride)
            .expect("total count matches");
        let v = (0..g.n())
            .filter(|&v| assignment[v] == over as u32)
            .min_by_key(|&v| {
                g.neighbors(v)
                    .filter(|&(u, _)| assignment[u] == over as u32)
                    .map(|(_, w)| w)
                    .sum::<Weight>()
            })
            .unwrap();
        assignment[v] = under as u32;
        counts[over] -= 1;
        counts[under] += 1;
    }
}

/// Σ ω(u,v) · D(σ(u), σ(v)) over the communication edges.
pub fn comm_cost(comm: &Graph, mapping: &ProcessMapping, spec: &HierarchySpec) -> Weight {
    let mut cost = 0;
    for (u, v, w) in comm.edges() {
        cost += w * spec.distance(mapping.sigma[u] as usize, mapping.sigma[v] as usize) as Weight;
    }
    cost
}
