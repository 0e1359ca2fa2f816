use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Origin, SpqrForest};
use crate::binmatrix::SparseBinaryMatrix;
use crate::unionfind::DisjointSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub origin: Origin,
    pub in_tree: bool,
}

/// A graph together with a spanning tree: tree edges stand for rows and
/// non-tree edges for columns.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphTreePair {
    pub num_vertices: usize,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealizeError {
    #[error("edge {0} has an endpoint outside the vertex range")]
    BadEndpoint(usize),
    #[error("edge {0}: tree edges must come from rows and non-tree edges from columns")]
    OriginMismatch(usize),
    #[error("tree edges do not form a spanning tree")]
    NotSpanning,
    #[error("duplicate origin {0}")]
    DuplicateOrigin(Origin),
    #[error("inconsistent SPQR tree: {0}")]
    Inconsistent(String),
}

impl GraphTreePair {
    pub fn tree_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| e.in_tree)
    }

    pub fn non_tree_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| !e.in_tree)
    }

    /// Checks endpoints, origins and that the tree edges form a spanning tree.
    pub fn check(&self) -> Result<(), RealizeError> {
        let mut seen = std::collections::HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.num_vertices || e.v >= self.num_vertices {
                return Err(RealizeError::BadEndpoint(i));
            }
            match (e.origin, e.in_tree) {
                (Origin::Row(_), true) | (Origin::Col(_), false) => {}
                _ => return Err(RealizeError::OriginMismatch(i)),
            }
            if !seen.insert(e.origin) {
                return Err(RealizeError::DuplicateOrigin(e.origin));
            }
        }
        let mut ds = DisjointSets::new();
        for _ in 0..self.num_vertices {
            ds.make_set();
        }
        let mut count = 0;
        for e in self.tree_edges() {
            if ds.find(e.u) == ds.find(e.v) {
                return Err(RealizeError::NotSpanning);
            }
            ds.union(e.u, e.v);
            count += 1;
        }
        if self.num_vertices > 0 && count != self.num_vertices - 1 {
            return Err(RealizeError::NotSpanning);
        }
        Ok(())
    }

    /// For every non-tree edge (by position in `edges`), the positions of the
    /// tree edges on its fundamental path.
    pub fn fundamental_paths(&self) -> Result<Vec<(usize, Vec<usize>)>, RealizeError> {
        self.check()?;
        let n = self.num_vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            if e.in_tree {
                adj[e.u].push((e.v, i));
                adj[e.v].push((e.u, i));
            }
        }
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(y, i) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = (x, i);
                        depth[y] = depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            if e.in_tree {
                continue;
            }
            let (mut a, mut b) = (e.u, e.v);
            let mut path = Vec::new();
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (p, i) = parent[a];
                path.push(i);
                a = p;
            }
            path.sort_unstable();
            out.push((j, path));
        }
        Ok(out)
    }

    /// Identifies vertex 0 of every part into one vertex.
    pub fn glue(parts: &[GraphTreePair]) -> GraphTreePair {
        let mut out = GraphTreePair { num_vertices: 1, edges: Vec::new() };
        for p in parts {
            let base = out.num_vertices - 1;
            let map = |v: usize| if v == 0 { 0 } else { base + v };
            for e in &p.edges {
                out.edges.push(GraphEdge { u: map(e.u), v: map(e.v), ..*e });
            }
            out.num_vertices += p.num_vertices.saturating_sub(1);
        }
        out
    }
}

/// The representation matrix of `(G, T)`: rows are tree edges sorted by
/// origin, columns are non-tree edges sorted by origin, and an entry is one
/// iff the row edge lies on the column edge's fundamental path.
pub fn representation_matrix(g: &GraphTreePair) -> Result<SparseBinaryMatrix, RealizeError> {
    let paths = g.fundamental_paths()?;
    let mut rows: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e.origin {
            Origin::Row(r) if e.in_tree => Some((r, i)),
            _ => None,
        })
        .collect();
    rows.sort_unstable();
    let mut cols: Vec<(usize, usize)> = paths
        .iter()
        .enumerate()
        .map(|(k, &(j, _))| match g.edges[j].origin {
            Origin::Col(c) => (c, k),
            _ => unreachable!("checked by fundamental_paths"),
        })
        .collect();
    cols.sort_unstable();
    let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(p, &(_, i))| (i, p)).collect();
    let mut out = vec![Vec::new(); rows.len()];
    for (cpos, &(_, k)) in cols.iter().enumerate() {
        for i in &paths[k].1 {
            out[row_pos[i]].push(cpos);
        }
    }
    let m = SparseBinaryMatrix::from_rows(cols.len(), out).expect("valid by construction");
    let row_labels = rows.iter().map(|&(r, _)| Origin::Row(r).to_string()).collect();
    let col_labels = cols.iter().map(|&(c, _)| Origin::Col(c).to_string()).collect();
    Ok(m.with_labels(row_labels, col_labels).expect("origins are unique"))
}

impl SpqrForest {
    /// One graph represented by the SPQR tree containing `node`.
    ///
    /// Virtual pairs are contracted by identifying endpoints first with first
    /// and second with second; every choice yields the same representation
    /// matrix.
    pub fn realize(&mut self, node: usize) -> Result<GraphTreePair, RealizeError> {
        let nodes = self.tree_nodes(node);
        let mut vid: HashMap<usize, usize> = HashMap::new();
        let mut ds = DisjointSets::new();
        let mut local = |v: usize, ds: &mut DisjointSets| *vid.entry(v).or_insert_with(|| ds.make_set());
        let mut regular = Vec::new();
        for &n in &nodes {
            for e in self.node_edges(n) {
                let rec = self.edge(e).clone();
                let [a, b] = self.ends(e);
                let (a, b) = (local(a, &mut ds), local(b, &mut ds));
                match rec.partner {
                    Some(f) => {
                        if self.edge(f).partner != Some(e) {
                            return Err(RealizeError::Inconsistent(format!("partner of {f} is not {e}")));
                        }
                        if e < f {
                            let [c, d] = self.ends(f);
                            let (c, d) = (local(c, &mut ds), local(d, &mut ds));
                            ds.union(a, c);
                            ds.union(b, d);
                        }
                    }
                    None => {
                        if rec.origin == Origin::Virtual {
                            return Err(RealizeError::Inconsistent(format!("virtual edge {e} without partner")));
                        }
                        regular.push((a, b, rec.origin, rec.in_tree));
                    }
                }
            }
        }
        let mut compact: HashMap<usize, usize> = HashMap::new();
        let mut edges = Vec::with_capacity(regular.len());
        for (a, b, origin, in_tree) in regular {
            let mut id = |x: usize| {
                let r = ds.find(x);
                let next = compact.len();
                *compact.entry(r).or_insert(next)
            };
            let (u, v) = (id(a), id(b));
            edges.push(GraphEdge { u, v, origin, in_tree });
        }
        let g = GraphTreePair { num_vertices: compact.len(), edges };
        g.check()?;
        Ok(g)
    }

    /// A realization of the whole represented matrix: one graph per tree glued
    /// at a common vertex, zero rows as pendant edges and zero columns as loops.
    pub fn certificate(&mut self) -> Result<GraphTreePair, RealizeError> {
        let mut parts = Vec::new();
        for t in self.trees() {
            parts.push(self.realize(t[0])?);
        }
        let mut g = GraphTreePair::glue(&parts);
        for r in self.zero_rows().to_vec() {
            g.edges.push(GraphEdge { u: 0, v: g.num_vertices, origin: Origin::Row(r), in_tree: true });
            g.num_vertices += 1;
        }
        for c in self.zero_cols() {
            g.edges.push(GraphEdge { u: 0, v: 0, origin: Origin::Col(c), in_tree: false });
        }
        Ok(g)
    }
}
