//! Small fixture graphs shared by unit tests.

use crate::graph::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn triangle() -> Graph {
    Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)], None).unwrap()
}

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
pub fn two_triangle_bridge() -> Graph {
    Graph::from_edges(
        6,
        &[
            (0, 1, 1),
            (1, 2, 1),
            (0, 2, 1),
            (3, 4, 1),
            (4, 5, 1),
            (3, 5, 1),
            (2, 3, 1),
        ],
        None,
    )
    .unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
    Graph::from_edges(n, &edges, None).unwrap()
}

pub fn grid(rows: usize, cols: usize) -> Graph {
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

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1));
        }
    }
    Graph::from_edges(n, &edges, None).unwrap()
}

/// Random connected unit-weight graph: a random spanning tree plus
/// `extra` random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v, 1));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v), 1));
        }
    }
    Graph::from_edges(n, &edges, None).unwrap()
}
