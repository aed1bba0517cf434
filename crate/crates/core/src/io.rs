//! Text formats: METIS graph files and the one-value-per-line solution
//! files (partition, separator, edge partition, mapping).

use crate::error::{Error, Result};
use crate::graph::{Graph, Weight};
use std::path::Path;

/// Parse a METIS graph file. Header is `n m [fmt]` with fmt ∈ {1, 10, 11};
/// the 10-bit enables node weights, the 1-bit edge weights. Adjacency is
/// 1-indexed. Lines starting with `%` are comments. Parallel arcs are
/// merged by weight summation and self-loops dropped; asymmetric
/// adjacency is rejected.
pub fn parse_metis(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(Error::parse(header_line, "header must be `n m [fmt]`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(header_line, "bad node count"))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(header_line, "bad edge count"))?;
    let fmt = if fields.len() == 3 { fields[2] } else { "0" };
    let (has_node_weights, has_edge_weights) = match fmt {
        "0" | "00" => (false, false),
        "1" | "01" => (false, true),
        "10" => (true, false),
        "11" => (true, true),
        _ => return Err(Error::parse(header_line, format!("unknown fmt `{fmt}`"))),
    };

    let mut node_weights = vec![1; n];
    // Directed arcs as written; symmetry is validated below.
    let mut arcs: Vec<(usize, usize, Weight)> = Vec::new();
    let mut node = 0usize;
    for (line_no, line) in lines {
        if node >= n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, "more adjacency lines than nodes"));
        }
        let mut tokens = line.split_whitespace();
        if has_node_weights {
            let w: Weight = tokens
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing node weight"))?
                .parse()
                .map_err(|_| Error::parse(line_no, "bad node weight"))?;
            if w < 1 {
                return Err(Error::parse(line_no, "node weight must be >= 1"));
            }
            node_weights[node] = w;
        }
        while let Some(tok) = tokens.next() {
            let target: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad neighbor `{tok}`")))?;
            if target < 1 || target > n {
                return Err(Error::parse(line_no, format!("neighbor {target} out of range")));
            }
            let w: Weight = if has_edge_weights {
                tokens
                    .next()
                    .ok_or_else(|| Error::parse(line_no, "missing edge weight"))?
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad edge weight"))?
            } else {
                1
            };
            if w < 1 {
                return Err(Error::parse(line_no, "edge weight must be >= 1"));
            }
            arcs.push((node, target - 1, w));
        }
        node += 1;
    }
    if node < n {
        return Err(Error::parse(0, format!("expected {n} adjacency lines, got {node}")));
    }

    // Merge parallel arcs and drop self-loops before the symmetry check.
    let mut merged: Vec<(usize, usize, Weight)> = Vec::with_capacity(arcs.len());
    arcs.sort_unstable();
    for (u, v, w) in arcs {
        if u == v {
            continue;
        }
        match merged.last_mut() {
            Some(last) if last.0 == u && last.1 == v => last.2 += w,
            _ => merged.push((u, v, w)),
        }
    }
    for &(u, v, w) in &merged {
        let back = merged
            .binary_search_by(|probe| (probe.0, probe.1).cmp(&(v, u)))
            .is_ok_and(|i| merged[i].2 == w);
        if !back {
            return Err(Error::InvalidInput(format!(
                "asymmetric adjacency: arc {}->{} (weight {w}) has no matching back-arc",
                u + 1,
                v + 1
            )));
        }
    }
    let undirected: Vec<(usize, usize, Weight)> = merged
        .iter()
        .filter(|&&(u, v, _)| u < v)
        .copied()
        .collect();
    if undirected.len() != m {
        return Err(Error::InvalidInput(format!(
            "header claims {m} edges, adjacency holds {}",
            undirected.len()
        )));
    }
    Graph::from_edges(n, &undirected, Some(node_weights))
}

pub fn load_metis(path: impl AsRef<Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_metis(&text)
}

/// Serialize a graph as METIS text. The fmt code is the smallest one that
/// can represent the weights, so unit-weight graphs round-trip through
/// the plain `n m` header.
pub fn write_metis(g: &Graph) -> String {
    let has_node_weights = (0..g.n()).any(|v| g.node_weight(v) != 1);
    let has_edge_weights = g.edges().any(|(_, _, w)| w != 1);
    let mut out = String::new();
    match (has_node_weights, has_edge_weights) {
        (false, false) => out.push_str(&format!("{} {}\n", g.n(), g.m())),
        (false, true) => out.push_str(&format!("{} {} 1\n", g.n(), g.m())),
        (true, false) => out.push_str(&format!("{} {} 10\n", g.n(), g.m())),
        (true, true) => out.push_str(&format!("{} {} 11\n", g.n(), g.m())),
    }
    for u in 0..g.n() {
        let mut fields: Vec<String> = Vec::new();
        if has_node_weights {
            fields.push(g.node_weight(u).to_string());
        }
        for (v, w) in g.neighbors(u) {
            fields.push((v + 1).to_string());
            if has_edge_weights {
                fields.push(w.to_string());
            }
        }
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// One id per line, line i = value of item i. Shared by partition,
/// separator, edge-partition and mapping files.
pub fn write_values(values: &[u32]) -> String {
    let mut out = String::with_capacity(values.len() * 2);
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// Parse a one-value-per-line solution file, checking each value < limit.
pub fn parse_values(text: &str, limit: u32, what: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: u32 = line
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("bad {what} id `{line}`")))?;
        if v >= limit {
            return Err(Error::parse(
                i + 1,
                format!("{what} id {v} out of range (limit {limit})"),
            ));
        }
        out.push(v);
    }
    Ok(out)
}
