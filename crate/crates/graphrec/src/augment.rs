//! Adding rows to an SPQR forest, and the matrix-level drivers built on it.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::binmatrix::{RowVector, SparseBinaryMatrix};
use crate::reduce::{reduce_tree, repair_minimality, reverse_reductions};
use crate::splittable::{bipartite_split, extend_series, find_tree_splittable_vertices};
use crate::spqr::{ForestStats, GraphTreePair, NodeKind, Origin, SpqrForest};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("column {col} out of range for {num_cols} columns")]
    UnknownColumn { col: usize, num_cols: usize },
}

/// The two new vertices created by splitting, and the node holding them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProcessOutcome {
    pub v1: usize,
    pub v2: usize,
    pub node: usize,
}

/// Splits one vertex of `node` so that the marked edges become exactly the
/// edges on a path between the two new vertices. `None` when no suitable
/// vertex exists.
pub fn split_skeleton(forest: &mut SpqrForest, node: usize) -> Option<ProcessOutcome> {
    let sk = forest.skeleton(node);
    let a = find_tree_splittable_vertices(&sk);
    let done = |forest: &mut SpqrForest, (v1, v2): (usize, usize), n: usize| {
        let node = forest.node_root(n);
        Some(ProcessOutcome { v1, v2, node })
    };
    match sk.kind {
        NodeKind::Q => {
            forest.set_kind(node, NodeKind::S);
            let split = extend_series(forest, node);
            done(forest, split, node)
        }
        NodeKind::S => {
            if a.len() == sk.num_vertices() {
                let split = extend_series(forest, node);
                done(forest, split, node)
            } else if a.len() == 1 {
                let split = bipartite_split(forest, &sk, a[0], None);
                done(forest, split, node)
            } else {
                None
            }
        }
        NodeKind::P => {
            let v = *a.first()?;
            let split = bipartite_split(forest, &sk, v, None);
            done(forest, split, node)
        }
        NodeKind::R => match a.len() {
            0 => None,
            1 => {
                let split = bipartite_split(forest, &sk, a[0], None);
                done(forest, split, node)
            }
            2 => {
                let (a1, a2) = (a[0], a[1]);
                let i = (0..sk.num_edges()).find(|&i| {
                    let [x, y] = sk.ends[i];
                    (x == a1 && y == a2) || (x == a2 && y == a1)
                })?;
                let e = sk.edge_ids[i];
                let t = forest.edge(e).in_tree;
                let tree = forest.tree_of(node);
                let omega = forest.new_node(NodeKind::S, tree);
                let (p, q) = (forest.new_vertex(), forest.new_vertex());
                forest.move_edge(e, omega);
                forest.set_ends(e, p, q);
                let f = forest.add_edge(node, Origin::Virtual, sk.vertex_ids[a1], sk.vertex_ids[a2], t);
                let g = forest.add_edge(omega, Origin::Virtual, p, q, !t);
                forest.pair(f, g);
                let split = extend_series(forest, omega);
                done(forest, split, omega)
            }
            k => unreachable!("{k} splittable vertices on every virtual edge of an R skeleton"),
        },
    }
}

/// Splits every node of the reduced tree and merges them into a single R
/// node, visiting nodes in breadth-first order from the lowest leaf.
pub fn merge_tree(forest: &mut SpqrForest, nodes: &[usize]) -> Option<ProcessOutcome> {
    let set: HashMap<usize, ()> = nodes.iter().map(|&n| (n, ())).collect();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &n in nodes {
        let nb: Vec<usize> = forest.neighbors(n).into_iter().filter(|m| set.contains_key(m)).collect();
        adj.insert(n, nb);
    }
    let start = nodes.iter().copied().filter(|n| adj[n].len() == 1).min()?;
    let mut order = vec![start];
    let mut seen: HashMap<usize, ()> = HashMap::from([(start, ())]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for &m in &adj[&n] {
            if seen.insert(m, ()).is_none() {
                order.push(m);
                queue.push_back(m);
            }
        }
    }

    let first = split_skeleton(forest, order[0])?;
    let (mut x1, mut x2) = (first.v1, first.v2);
    let mut merged = first.node;
    for &mu in &order[1..] {
        let split = split_skeleton(forest, mu)?;
        let mu = split.node;
        let mut link = None;
        for e in forest.virtual_edges(mu) {
            let f = forest.edge(e).partner.expect("virtual edge is linked");
            if forest.node_of(f) == forest.node_root(merged) {
                link = Some((e, f));
                break;
            }
        }
        let (e, f) = link.expect("reduced tree is connected");
        let [e0, e1] = forest.ends(e);
        let [f0, f1] = forest.ends(f);
        let (y1, y2) = (forest.vertex_root(split.v1), forest.vertex_root(split.v2));
        let (ex, eo) = if e0 == y1 || e0 == y2 { (e0, e1) } else { (e1, e0) };
        let (fx, fo) = if f0 == x1 || f0 == x2 { (f0, f1) } else { (f1, f0) };
        let x_other = if fx == x1 { x2 } else { x1 };
        let y_other = if ex == y1 { y2 } else { y1 };
        merged = forest.contract_pair(f, &[(fx, ex), (fo, eo), (x_other, y_other)]);
        x1 = forest.vertex_root(x1);
        x2 = forest.vertex_root(x2);
    }
    forest.set_kind(merged, NodeKind::R);
    Some(ProcessOutcome { v1: x1, v2: x2, node: merged })
}

/// Reduces, splits and restores the tree holding `y`. On success the forest
/// represents the old matrix with two new vertices whose tree path consists
/// of exactly the edges in `y`. On failure the forest is left dirty and must
/// be rolled back.
pub fn process_tree(forest: &mut SpqrForest, y: &[usize]) -> Option<ProcessOutcome> {
    let (reduced, journal) = reduce_tree(forest, y);
    let out = if reduced.nodes.len() == 1 {
        split_skeleton(forest, reduced.nodes[0])?
    } else {
        merge_tree(forest, &reduced.nodes)?
    };
    let kept = reverse_reductions(forest, &journal);
    forest.clear_marks(out.node);
    repair_minimality(forest, &kept);
    Some(ProcessOutcome { v1: forest.vertex_root(out.v1), v2: forest.vertex_root(out.v2), node: forest.node_root(out.node) })
}

impl SpqrForest {
    /// Tries to append a row with the given column support. Returns whether
    /// the extended matrix is still graphic; a rejected row leaves the forest
    /// unchanged.
    pub fn add_row(&mut self, row: &RowVector) -> Result<bool, AugmentError> {
        let num_cols = self.num_cols();
        if let Some(&col) = row.support.iter().find(|&&c| c >= num_cols) {
            return Err(AugmentError::UnknownColumn { col, num_cols });
        }
        if row.support.is_empty() {
            self.push_zero_row();
            return Ok(true);
        }
        self.begin();
        if self.try_add_row(&row.support) {
            self.commit();
            Ok(true)
        } else {
            self.rollback();
            Ok(false)
        }
    }

    fn try_add_row(&mut self, support: &[usize]) -> bool {
        let r = self.num_rows();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut fresh = Vec::new();
        for &c in support {
            match self.col_edge(c) {
                Some(e) => {
                    let n = self.node_of(e);
                    let t = self.tree_of(n);
                    match groups.iter_mut().find(|(l, _)| *l == t) {
                        Some((_, g)) => g.push(e),
                        None => groups.push((t, vec![e])),
                    }
                }
                None => fresh.push(c),
            }
        }

        let b = match groups.len() {
            0 => {
                let tree = self.new_tree();
                let kind = if fresh.len() == 1 { NodeKind::Q } else { NodeKind::P };
                let n = self.new_node(kind, tree);
                let (p, q) = (self.new_vertex(), self.new_vertex());
                let b = self.add_edge(n, Origin::Row(r), p, q, true);
                for &c in &fresh {
                    let e = self.add_edge(n, Origin::Col(c), p, q, false);
                    self.set_col_edge(c, e);
                }
                b
            }
            1 => {
                let Some(out) = process_tree(self, &groups[0].1) else { return false };
                if fresh.is_empty() {
                    self.add_edge(out.node, Origin::Row(r), out.v1, out.v2, true)
                } else {
                    let tree = self.tree_of(out.node);
                    let pi = self.new_node(NodeKind::P, tree);
                    let (p, q) = (self.new_vertex(), self.new_vertex());
                    let b = self.add_edge(pi, Origin::Row(r), p, q, true);
                    for &c in &fresh {
                        let e = self.add_edge(pi, Origin::Col(c), p, q, false);
                        self.set_col_edge(c, e);
                    }
                    let h = self.add_edge(pi, Origin::Virtual, p, q, false);
                    let h2 = self.add_edge(out.node, Origin::Virtual, out.v1, out.v2, true);
                    self.pair(h, h2);
                    b
                }
            }
            _ => {
                let tree = self.new_tree();
                let pi = self.new_node(NodeKind::P, tree);
                let (p, q) = (self.new_vertex(), self.new_vertex());
                let b = self.add_edge(pi, Origin::Row(r), p, q, true);
                for &c in &fresh {
                    let e = self.add_edge(pi, Origin::Col(c), p, q, false);
                    self.set_col_edge(c, e);
                }
                for (_, y) in &groups {
                    let Some(out) = process_tree(self, y) else { return false };
                    let h = self.add_edge(pi, Origin::Virtual, p, q, false);
                    let h2 = self.add_edge(out.node, Origin::Virtual, out.v1, out.v2, true);
                    self.pair(h, h2);
                    let t = self.tree_of(out.node);
                    let pt = self.tree_of(pi);
                    self.union_trees(pt, t);
                }
                b
            }
        };
        self.set_row_edge(r, b);
        true
    }

    /// A forest over `num_cols` columns and no rows.
    pub fn with_columns(num_cols: usize) -> Self {
        let mut f = SpqrForest::new();
        f.declare_columns(num_cols);
        f
    }
}

/// Work spent on one row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowTrace {
    pub row: usize,
    pub accepted: bool,
    pub ops: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphicReport {
    pub graphic: bool,
    pub first_rejected: Option<usize>,
    pub trace: Vec<RowTrace>,
    pub stats: ForestStats,
    pub certificate: Option<GraphTreePair>,
    #[serde(skip)]
    pub forest: SpqrForest,
}

/// Decides whether `m` is graphic, stopping at the first rejected row.
pub fn is_graphic(m: &SparseBinaryMatrix) -> GraphicReport {
    let mut forest = SpqrForest::with_columns(m.num_cols());
    let mut trace = Vec::with_capacity(m.num_rows());
    let mut first_rejected = None;
    for (r, cols) in m.rows().iter().enumerate() {
        let before = forest.ops();
        let ok = forest.add_row(&RowVector::new(cols.clone())).expect("columns are in range");
        trace.push(RowTrace { row: r, accepted: ok, ops: forest.ops() - before });
        if !ok {
            first_rejected = Some(r);
            break;
        }
    }
    let graphic = first_rejected.is_none();
    let certificate = if graphic { Some(forest.certificate().expect("forest realizes its matrix")) } else { None };
    let stats = forest.stats();
    GraphicReport { graphic, first_rejected, trace, stats, certificate, forest }
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalReport {
    pub kept: Vec<usize>,
    pub skipped: Vec<usize>,
    pub trace: Vec<RowTrace>,
    pub stats: ForestStats,
    /// Realization of the kept rows, labelled with original row indices.
    pub certificate: GraphTreePair,
    #[serde(skip)]
    pub forest: SpqrForest,
}

/// Greedily keeps every row that leaves the kept submatrix graphic.
pub fn maximal_graphic_rows(m: &SparseBinaryMatrix) -> MaximalReport {
    let mut forest = SpqrForest::with_columns(m.num_cols());
    let (mut kept, mut skipped, mut trace) = (Vec::new(), Vec::new(), Vec::new());
    for (r, cols) in m.rows().iter().enumerate() {
        let before = forest.ops();
        let ok = forest.add_row(&RowVector::new(cols.clone())).expect("columns are in range");
        trace.push(RowTrace { row: r, accepted: ok, ops: forest.ops() - before });
        if ok {
            kept.push(r);
        } else {
            skipped.push(r);
        }
    }
    let mut certificate = forest.certificate().expect("forest realizes its matrix");
    for e in &mut certificate.edges {
        if let Origin::Row(i) = e.origin {
            e.origin = Origin::Row(kept[i]);
        }
    }
    let stats = forest.stats();
    MaximalReport { kept, skipped, trace, stats, certificate, forest }
}
