//! Node-capacitated s-t max-flow via the standard node-splitting
//! reduction, yielding a minimum-weight vertex cut.

use crate::graph::Weight;

/// Flow problem on a region A of the graph: internal edges carry the
/// "unbounded" sentinel capacity, node weights act as node capacities,
/// s feeds the left border and the right border drains into t.
#[derive(Debug)]
pub struct FlowNetwork {
    /// Region nodes, by original graph id.
    pub region: Vec<usize>,
    /// Per-region-node capacity (= node weight).
    pub node_cap: Vec<Weight>,
    /// Undirected region-internal edges as (region index, region index).
    pub arcs: Vec<(usize, usize)>,
    /// Region indices of ∂₁A (fed by s).
    pub left_border: Vec<usize>,
    /// Region indices of ∂₂A (drain to t).
    pub right_border: Vec<usize>,
    /// Sentinel capacity exceeding the total node weight.
    pub infinity: Weight,
}

struct Edge {
    to: usize,
    cap: Weight,
}

struct Dinic {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Dinic {
        Dinic {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: Weight) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let edge = &self.edges[e];
                if edge.cap > 0 && self.level[edge.to] < 0 {
                    self.level[edge.to] = self.level[v] + 1;
                    queue.push_back(edge.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: Weight) -> Weight {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let (to, cap) = (self.edges[e].to, self.edges[e].cap);
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.edges[e].cap -= d;
                    self.edges[e ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> Weight {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, Weight::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Nodes reachable from s in the residual network.
    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                let edge = &self.edges[e];
                if edge.cap > 0 && !seen[edge.to] {
                    seen[edge.to] = true;
                    stack.push(edge.to);
                }
            }
        }
        seen
    }
}

fn build_dinic(network: &FlowNetwork) -> (Dinic, usize, usize) {
    let r = network.region.len();
    // Layout: node i -> in = 2i, out = 2i+1; then s, t.
    let s = 2 * r;
    let t = 2 * r + 1;
    let mut dinic = Dinic::new(2 * r + 2);
    for (i, &cap) in network.node_cap.iter().enumerate() {
        dinic.add_edge(2 * i, 2 * i + 1, cap);
    }
    for &(a, b) in &network.arcs {
        dinic.add_edge(2 * a + 1, 2 * b, network.infinity);
        dinic.add_edge(2 * b + 1, 2 * a, network.infinity);
    }
    for &a in &network.left_border {
        dinic.add_edge(s, 2 * a, network.infinity);
    }
    for &b in &network.right_border {
        dinic.add_edge(2 * b + 1, t, network.infinity);
    }
    (dinic, s, t)
}

/// Solve the node-capacitated max-flow. Each region node is split into
/// in/out copies joined by an arc of its weight; the vertex cut is the
/// set of region nodes whose split arc crosses the minimum s-t cut
/// closest to s. Returns the flow value and the cut as original graph
/// node ids.
pub fn node_capacitated_maxflow(network: &FlowNetwork) -> (Weight, Vec<usize>) {
    let (mut dinic, s, t) = build_dinic(network);
    let flow = dinic.max_flow(s, t);
    let seen = dinic.residual_reachable(s);
    let r = network.region.len();
    let cut: Vec<usize> = (0..r)
        .filter(|&i| seen[2 * i] && !seen[2 * i + 1])
        .map(|i| network.region[i])
        .collect();
    debug_assert_eq!(
        flow,
        (0..r)
            .filter(|&i| seen[2 * i] && !seen[2 * i + 1])
            .map(|i| network.node_cap[i])
            .sum::<Weight>()
    );
    (flow, cut)
}

/// All minimum vertex cuts along the closure chain from the s-side to
/// the t-side of the residual graph, ordered s-side first. Every entry
/// has total weight equal to the max-flow value; the caller picks the
/// one with the best balance. Built from the Picard–Queyranne view of
/// minimum cuts as closed sets of residual strongly-connected
/// components.
pub fn min_vertex_cuts(network: &FlowNetwork) -> (Weight, Vec<Vec<usize>>) {
    let (mut dinic, s, t) = build_dinic(network);
    let flow = dinic.max_flow(s, t);
    let n = dinic.adj.len();

    // Residual successor lists.
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, adj) in dinic.adj.iter().enumerate() {
        for &e in adj {
            let edge = &dinic.edges[e];
            if edge.cap > 0 {
                succ[v].push(edge.to);
            }
        }
    }

    // Kosaraju SCC.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Iterative post-order DFS.
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < succ[v].len() {
                let next = succ[v][*i];
                *i += 1;
                if !seen[next] {
                    seen[next] = true;
                    stack.push((next, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, out) in succ.iter().enumerate() {
        for &u in out {
            pred[u].push(v);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut num_comps = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = num_comps;
        while let Some(v) = stack.pop() {
            for &u in &pred[v] {
                if comp[u] == usize::MAX {
                    comp[u] = num_comps;
                    stack.push(u);
                }
            }
        }
        num_comps += 1;
    }

    // A closed set R (closed under residual successors, containing s's
    // component, excluding t's) induces a min cut. Start from reach(s)
    // and grow component by component in reverse topological order;
    // components that reach t can never close and are skipped.
    let reach_s = dinic.residual_reachable(s);
    let mut reaches_t = vec![false; num_comps];
    reaches_t[comp[t]] = true;
    let mut comp_succ: Vec<Vec<usize>> = vec![Vec::new(); num_comps];
    for v in 0..n {
        for &u in &succ[v] {
            if comp[v] != comp[u] {
                comp_succ[comp[v]].push(comp[u]);
            }
        }
    }
    let mut in_r = vec![false; num_comps];
    for v in 0..n {
        if reach_s[v] {
            in_r[comp[v]] = true;
        }
    }
    let r = network.region.len();
    let cut_of = |in_r: &[bool]| -> Vec<usize> {
        (0..r)
            .filter(|&i| in_r[comp[2 * i]] && !in_r[comp[2 * i + 1]])
            .map(|i| network.region[i])
            .collect()
    };
    let mut cuts = vec![cut_of(&in_r)];
    // Components are numbered in topological order by Kosaraju, so scan
    // them backwards and add whichever closes against the current set.
    let mut changed = true;
    while changed {
        changed = false;
        for c in (0..num_comps).rev() {
            if in_r[c] || reaches_t[c] {
                continue;
            }
            if comp_succ[c].iter().any(|&d| !in_r[d] || reaches_t[d]) {
                if comp_succ[c].iter().any(|&d| reaches_t[d]) {
                    reaches_t[c] = true;
                    changed = true;
                }
                continue;
            }
            in_r[c] = true;
            changed = true;
            let cut = cut_of(&in_r);
            if cut != *cuts.last().unwrap() {
                cuts.push(cut);
            }
        }
    }
    (flow, cuts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path5_network() -> FlowNetwork {
        FlowNetwork {
            region: vec![0, 1, 2, 3, 4],
            node_cap: vec![1; 5],
            arcs: vec![(0, 1), (1, 2), (2, 3), (3, 4)],
            left_border: vec![0],
            right_border: vec![4],
            infinity: 6,
        }
    }

    #[test]
    fn path_flow_is_one() {
        let (flow, cut) = node_capacitated_maxflow(&path5_network());
        assert_eq!(flow, 1);
        assert_eq!(cut.len(), 1);
        assert!((0..5).contains(&cut[0]));
    }

    #[test]
    fn empty_left_border_is_zero_flow() {
        let mut network = path5_network();
        network.left_border.clear();
        let (flow, cut) = node_capacitated_maxflow(&network);
        assert_eq!(flow, 0);
        assert!(cut.is_empty());
    }

    #[test]
    fn two_disjoint_paths_need_two_cut_nodes() {
        // s -> {0,3} ... {2,5} -> t along two disjoint 3-node paths.
        let network = FlowNetwork {
            region: vec![0, 1, 2, 3, 4, 5],
            node_cap: vec![1; 6],
            arcs: vec![(0, 1), (1, 2), (3, 4), (4, 5)],
            left_border: vec![0, 3],
            right_border: vec![2, 5],
            infinity: 7,
        };
        let (flow, cut) = node_capacitated_maxflow(&network);
        assert_eq!(flow, 2);
        assert_eq!(cut.len(), 2);
    }

    #[test]
    fn weighted_bottleneck() {
        // Middle node of weight 3 on one path vs two unit parallel nodes.
        let network = FlowNetwork {
            region: vec![10, 11, 12],
            node_cap: vec![3, 1, 1],
            arcs: vec![],
            left_border: vec![0, 1, 2],
            right_border: vec![0, 1, 2],
            infinity: 6,
        };
        let (flow, cut) = node_capacitated_maxflow(&network);
        assert_eq!(flow, 5);
        assert_eq!(cut.len(), 3);
    }
}
