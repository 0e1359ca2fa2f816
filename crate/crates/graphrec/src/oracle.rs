//! Brute-force ground truth for small matrices, plus instance generators.
//!
//! A connected block with `m` rows is graphic iff some labeled tree on
//! `m + 1` vertices, with tree edges labeled by the rows, turns every column
//! support into a path. All `(m + 1)^(m - 1)` trees are enumerated through
//! their Prüfer sequences.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::binmatrix::{connected_blocks, SparseBinaryMatrix};
use crate::spqr::{representation_matrix, GraphEdge, GraphTreePair, Origin};

/// Largest block, in rows, that the oracle will enumerate.
pub const ORACLE_MAX_ROWS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle scale exceeded: block with {rows} rows (limit {limit})")]
    ScaleExceeded { rows: usize, limit: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub graphic: bool,
    pub trees_examined: u64,
    pub witness: Option<GraphTreePair>,
}

/// Decodes a Prüfer sequence over `n` vertices into `n - 1` edges.
fn prufer_edges(seq: &[usize], n: usize, out: &mut Vec<(usize, usize)>) {
    out.clear();
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        out.push((leaf, s));
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let mut last = (0..n).filter(|&v| degree[v] == 1);
    let (u, v) = (last.next().expect("two leaves remain"), last.next().expect("two leaves remain"));
    out.push((u, v));
}

/// For a tree on vertices `0..=m` rooted at `m`, the parent of every other
/// vertex. Row `i` labels the edge from `i` to its parent.
fn parents(m: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); m + 1];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; m + 1];
    parent[m] = m;
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    parent
}

/// Endpoints of the path formed by `rows`, or `None` when they do not form one.
fn path_ends(parent: &[usize], rows: &[usize], degree: &mut [u8]) -> Option<(usize, usize)> {
    degree.iter_mut().for_each(|d| *d = 0);
    let mut touched = 0;
    for &r in rows {
        for v in [r, parent[r]] {
            if degree[v] == 0 {
                touched += 1;
            }
            degree[v] += 1;
            if degree[v] > 2 {
                return None;
            }
        }
    }
    if touched != rows.len() + 1 {
        return None;
    }
    let mut ends = (0..degree.len()).filter(|&v| degree[v] == 1);
    Some((ends.next()?, ends.next()?))
}

struct BlockResult {
    trees: u64,
    witness: Option<(Vec<usize>, Vec<(usize, usize)>)>,
}

/// Rows `0..m` over columns given by their row supports.
fn enumerate_block(m: usize, cols: &[Vec<usize>]) -> BlockResult {
    let n = m + 1;
    let mut degree = vec![0u8; n];
    let try_tree = |edges: &[(usize, usize)], degree: &mut [u8]| {
        let parent = parents(m, edges);
        let mut ends = Vec::with_capacity(cols.len());
        for c in cols {
            ends.push(path_ends(&parent, c, degree)?);
        }
        Some((parent, ends))
    };
    if n <= 2 {
        let edges: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { Vec::new() };
        return BlockResult { trees: 1, witness: try_tree(&edges, &mut degree) };
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut edges = Vec::with_capacity(n - 1);
    let mut trees = 0u64;
    loop {
        prufer_edges(&seq, n, &mut edges);
        trees += 1;
        if let Some(w) = try_tree(&edges, &mut degree) {
            return BlockResult { trees, witness: Some(w) };
        }
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return BlockResult { trees, witness: None };
        }
    }
}

/// Decides graphicness by tree enumeration on every connected block.
pub fn oracle_is_graphic(m: &SparseBinaryMatrix) -> Result<OracleVerdict, OracleError> {
    let dec = connected_blocks(m);
    if let Some(b) = dec.blocks.iter().find(|b| b.row_indices.len() > ORACLE_MAX_ROWS) {
        return Err(OracleError::ScaleExceeded { rows: b.row_indices.len(), limit: ORACLE_MAX_ROWS });
    }
    let columns = m.columns();
    let mut trees_examined = 0;
    let mut g = GraphTreePair { num_vertices: 1, edges: Vec::new() };
    for b in &dec.blocks {
        let local: std::collections::HashMap<usize, usize> = b.row_indices.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cols: Vec<Vec<usize>> = b.col_indices.iter().map(|&c| columns[c].iter().map(|r| local[r]).collect()).collect();
        let res = enumerate_block(b.row_indices.len(), &cols);
        trees_examined += res.trees;
        let Some((parent, ends)) = res.witness else {
            return Ok(OracleVerdict { graphic: false, trees_examined, witness: None });
        };
        let k = b.row_indices.len();
        let base = g.num_vertices;
        let map = |v: usize| if v == k { 0 } else { base + v };
        for (i, &r) in b.row_indices.iter().enumerate() {
            g.edges.push(GraphEdge { u: map(i), v: map(parent[i]), origin: Origin::Row(r), in_tree: true });
        }
        for (j, &c) in b.col_indices.iter().enumerate() {
            let (u, v) = ends[j];
            g.edges.push(GraphEdge { u: map(u), v: map(v), origin: Origin::Col(c), in_tree: false });
        }
        g.num_vertices += k;
    }
    for &r in &dec.zero_rows {
        g.edges.push(GraphEdge { u: 0, v: g.num_vertices, origin: Origin::Row(r), in_tree: true });
        g.num_vertices += 1;
    }
    for &c in &dec.zero_cols {
        g.edges.push(GraphEdge { u: 0, v: 0, origin: Origin::Col(c), in_tree: false });
    }
    Ok(OracleVerdict { graphic: true, trees_examined, witness: Some(g) })
}

/// True iff `cert` is a valid graph-tree pair whose representation matrix
/// has exactly the rows `0..m`, the columns `0..n` and the nonzeros of `m`.
pub fn verify_realization(m: &SparseBinaryMatrix, cert: &GraphTreePair) -> bool {
    let mut rows: Vec<usize> = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    for e in &cert.edges {
        match e.origin {
            Origin::Row(r) => rows.push(r),
            Origin::Col(c) => cols.push(c),
            Origin::Virtual => return false,
        }
    }
    rows.sort_unstable();
    cols.sort_unstable();
    if rows != (0..m.num_rows()).collect::<Vec<_>>() || cols != (0..m.num_cols()).collect::<Vec<_>>() {
        return false;
    }
    match representation_matrix(cert) {
        Ok(rep) => rep.same_entries(m),
        Err(_) => false,
    }
}

/// A connected graph on `num_vertices` vertices with `num_edges` edges and a
/// uniformly random labeled spanning tree, together with its representation
/// matrix. Tree edges and non-tree edges are numbered in random order.
/// With `simple`, no two edges share both endpoints.
pub fn random_graphic_instance(
    seed: u64,
    num_vertices: usize,
    num_edges: usize,
    simple: bool,
) -> Result<(GraphTreePair, SparseBinaryMatrix), OracleError> {
    if num_vertices == 0 {
        return Err(OracleError::Infeasible("at least one vertex is required".into()));
    }
    if num_edges + 1 < num_vertices {
        return Err(OracleError::Infeasible(format!("{num_edges} edges cannot connect {num_vertices} vertices")));
    }
    let max_simple = num_vertices * (num_vertices - 1) / 2;
    if num_vertices == 1 && num_edges > 0 {
        return Err(OracleError::Infeasible("a single vertex admits no loop-free edges".into()));
    }
    if simple && num_edges > max_simple {
        return Err(OracleError::Infeasible(format!("a simple graph on {num_vertices} vertices has at most {max_simple} edges")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = num_vertices;
    let mut tree = Vec::new();
    if n == 2 {
        tree.push((0, 1));
    } else if n > 2 {
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        prufer_edges(&seq, n, &mut tree);
    }
    let mut used: HashSet<(usize, usize)> = tree.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut extra = Vec::new();
    while tree.len() + extra.len() < num_edges {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        if simple && !used.insert((a.min(b), a.max(b))) {
            continue;
        }
        extra.push((a, b));
    }
    let mut row_ids: Vec<usize> = (0..tree.len()).collect();
    let mut col_ids: Vec<usize> = (0..extra.len()).collect();
    row_ids.shuffle(&mut rng);
    col_ids.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(num_edges);
    for (i, &(u, v)) in tree.iter().enumerate() {
        edges.push(GraphEdge { u, v, origin: Origin::Row(row_ids[i]), in_tree: true });
    }
    for (j, &(u, v)) in extra.iter().enumerate() {
        edges.push(GraphEdge { u, v, origin: Origin::Col(col_ids[j]), in_tree: false });
    }
    let g = GraphTreePair { num_vertices: n, edges };
    let m = representation_matrix(&g).expect("spanning tree by construction");
    Ok((g, m))
}

/// A matrix with between one and `max_rows` rows and between one and
/// `max_cols` columns, each entry set with a probability drawn from a fixed
/// spread of densities.
pub fn random_matrix(seed: u64, max_rows: usize, max_cols: usize) -> SparseBinaryMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_rows.max(1));
    let n = rng.gen_range(1..=max_cols.max(1));
    let p = [0.15, 0.3, 0.45, 0.6, 0.8][rng.gen_range(0..5)];
    let rows = (0..m).map(|_| (0..n).filter(|_| rng.gen_bool(p)).collect()).collect();
    SparseBinaryMatrix::from_rows(n, rows).expect("indices in range")
}

fn transpose_of(g: &GraphTreePair) -> SparseBinaryMatrix {
    representation_matrix(g).expect("spanning tree by construction").transpose()
}

/// Transpose of the representation matrix of K3,3 with parts `{a,b,c}`,
/// `{x,y,z}` and spanning tree `{ax, bx, cx, ay, az}`. Rows are
/// `by, bz, cy, cz`; columns are `ax, bx, cx, ay, az`.
pub fn derive_k33_dual() -> SparseBinaryMatrix {
    let (a, b, c, x, y, z) = (0, 1, 2, 3, 4, 5);
    let tree = [(a, x), (b, x), (c, x), (a, y), (a, z)];
    let cotree = [(b, y), (b, z), (c, y), (c, z)];
    let mut edges = Vec::new();
    for (i, &(u, v)) in tree.iter().enumerate() {
        edges.push(GraphEdge { u, v, origin: Origin::Row(i), in_tree: true });
    }
    for (j, &(u, v)) in cotree.iter().enumerate() {
        edges.push(GraphEdge { u, v, origin: Origin::Col(j), in_tree: false });
    }
    let t = transpose_of(&GraphTreePair { num_vertices: 6, edges });
    let rows = ["by", "bz", "cy", "cz"].map(String::from).to_vec();
    let cols = ["ax", "bx", "cx", "ay", "az"].map(String::from).to_vec();
    t.with_labels(rows, cols).expect("label counts match")
}

/// Transpose of the representation matrix of K5 with the star tree at
/// vertex 0. Rows are the six edges `{i,j}` with `1 <= i < j <= 4`; columns
/// are the spokes `0i`.
pub fn derive_k5_dual() -> SparseBinaryMatrix {
    let mut edges = Vec::new();
    for i in 1..5 {
        edges.push(GraphEdge { u: 0, v: i, origin: Origin::Row(i - 1), in_tree: true });
    }
    let mut rows = Vec::new();
    for i in 1..5 {
        for j in i + 1..5 {
            edges.push(GraphEdge { u: i, v: j, origin: Origin::Col(rows.len()), in_tree: false });
            rows.push(format!("e{i}{j}"));
        }
    }
    let t = transpose_of(&GraphTreePair { num_vertices: 5, edges });
    let cols = (1..5).map(|i| format!("e0{i}")).collect();
    t.with_labels(rows, cols).expect("label counts match")
}
