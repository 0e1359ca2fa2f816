//! SPQR forests over skeleton multigraphs.
//!
//! Edges live in one arena and carry raw node and vertex labels that are
//! resolved through disjoint-set structures, so merging two skeletons or
//! identifying two vertices never rewrites edge records. Each node keeps its
//! edges in a circular doubly linked list. All writes can be recorded in an
//! undo log, which is how a rejected row leaves the forest untouched.

mod dump;
mod realize;
mod validate;

pub use dump::{to_dot, to_json, EdgeDump, ForestDump, NodeDump};
pub use realize::{representation_matrix, GraphEdge, GraphTreePair, RealizeError};
pub use validate::{check_minimal, check_size_bounds, validate, ForestStats, Violation};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::unionfind::DisjointSets;

pub(crate) const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    S,
    P,
    Q,
    R,
}

/// What an edge stands for: a matrix row (tree edge), a matrix column
/// (non-tree edge), or one half of a virtual pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    Row(usize),
    Col(usize),
    Virtual,
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Row(i) => write!(f, "r{}", i + 1),
            Origin::Col(j) => write!(f, "c{}", j + 1),
            Origin::Virtual => f.write_str("virtual"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub origin: Origin,
    pub(crate) node: usize,
    pub(crate) ends: [usize; 2],
    pub in_tree: bool,
    pub partner: Option<usize>,
    pub marked: bool,
    pub(crate) live: bool,
    prev: usize,
    next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct NodeRecord {
    kind: NodeKind,
    head: usize,
    len: usize,
    tree: usize,
    live: bool,
}

#[derive(Clone, Debug)]
enum Undo {
    Edge(usize, EdgeRecord),
    Node(usize, NodeRecord),
    RowEdge(usize, Option<usize>),
    ColEdge(usize, Option<usize>),
}

#[derive(Clone, Debug)]
struct Checkpoint {
    edges: usize,
    nodes: usize,
    rows: usize,
    cols: usize,
    zero_rows: usize,
    num_cols: usize,
    log: Vec<Undo>,
}

/// A forest of SPQR trees, one per connected block of the represented matrix.
#[derive(Clone, Debug, Default)]
pub struct SpqrForest {
    edges: Vec<EdgeRecord>,
    nodes: Vec<NodeRecord>,
    node_sets: DisjointSets,
    vertex_sets: DisjointSets,
    tree_sets: DisjointSets,
    row_edge: Vec<Option<usize>>,
    col_edge: Vec<Option<usize>>,
    zero_rows: Vec<usize>,
    num_cols: usize,
    list_ops: u64,
    checkpoint: Option<Checkpoint>,
}

/// A snapshot of one skeleton with vertices relabelled `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub node: usize,
    pub kind: NodeKind,
    pub edge_ids: Vec<usize>,
    pub vertex_ids: Vec<usize>,
    pub ends: Vec<[usize; 2]>,
    pub tree: Vec<bool>,
    pub virt: Vec<bool>,
    pub marked: Vec<bool>,
}

impl Skeleton {
    /// A free-standing skeleton with no virtual edges, for tests and generators.
    pub fn from_parts(kind: NodeKind, num_vertices: usize, ends: Vec<[usize; 2]>, tree: Vec<bool>, marked: Vec<bool>) -> Self {
        let m = ends.len();
        assert_eq!(tree.len(), m);
        assert_eq!(marked.len(), m);
        Self {
            node: NIL,
            kind,
            edge_ids: (0..m).collect(),
            vertex_ids: (0..num_vertices).collect(),
            ends,
            tree,
            virt: vec![false; m],
            marked,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    /// Local indices of marked edges.
    pub fn y_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&i| self.marked[i]).collect()
    }

    pub fn local_edge(&self, e: usize) -> Option<usize> {
        self.edge_ids.iter().position(|&x| x == e)
    }

    pub fn local_vertex(&self, v: usize) -> Option<usize> {
        self.vertex_ids.iter().position(|&x| x == v)
    }
}

impl SpqrForest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total disjoint-set and linked-list operations performed so far.
    pub fn ops(&self) -> u64 {
        self.node_sets.ops() + self.vertex_sets.ops() + self.tree_sets.ops() + self.list_ops
    }

    pub fn num_rows(&self) -> usize {
        self.row_edge.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn declare_columns(&mut self, n: usize) {
        if n > self.num_cols {
            self.num_cols = n;
            self.col_edge.resize(n, None);
        }
    }

    pub fn row_edge(&self, r: usize) -> Option<usize> {
        self.row_edge.get(r).copied().flatten()
    }

    pub fn col_edge(&self, c: usize) -> Option<usize> {
        self.col_edge.get(c).copied().flatten()
    }

    pub fn zero_rows(&self) -> &[usize] {
        &self.zero_rows
    }

    pub fn zero_cols(&self) -> Vec<usize> {
        (0..self.num_cols).filter(|&c| self.col_edge[c].is_none()).collect()
    }

    // ---- transactions ----

    pub fn begin(&mut self) {
        assert!(self.checkpoint.is_none(), "nested transaction");
        self.checkpoint = Some(Checkpoint {
            edges: self.edges.len(),
            nodes: self.nodes.len(),
            rows: self.row_edge.len(),
            cols: self.col_edge.len(),
            zero_rows: self.zero_rows.len(),
            num_cols: self.num_cols,
            log: Vec::new(),
        });
        self.node_sets.begin();
        self.vertex_sets.begin();
        self.tree_sets.begin();
    }

    pub fn commit(&mut self) {
        self.checkpoint = None;
        self.node_sets.commit();
        self.vertex_sets.commit();
        self.tree_sets.commit();
    }

    /// Restores the exact state at the last `begin`. Operation counters keep
    /// the work that was done.
    pub fn rollback(&mut self) {
        let Some(cp) = self.checkpoint.take() else { return };
        for u in cp.log.into_iter().rev() {
            match u {
                Undo::Edge(i, r) => {
                    if i < cp.edges {
                        self.edges[i] = r;
                    }
                }
                Undo::Node(i, r) => {
                    if i < cp.nodes {
                        self.nodes[i] = r;
                    }
                }
                Undo::RowEdge(i, r) => {
                    if i < cp.rows {
                        self.row_edge[i] = r;
                    }
                }
                Undo::ColEdge(i, r) => {
                    if i < cp.cols {
                        self.col_edge[i] = r;
                    }
                }
            }
        }
        self.edges.truncate(cp.edges);
        self.nodes.truncate(cp.nodes);
        self.row_edge.truncate(cp.rows);
        self.col_edge.truncate(cp.cols);
        self.zero_rows.truncate(cp.zero_rows);
        self.num_cols = cp.num_cols;
        self.node_sets.rollback();
        self.vertex_sets.rollback();
        self.tree_sets.rollback();
    }

    fn log(&mut self, u: Undo) {
        if let Some(cp) = self.checkpoint.as_mut() {
            cp.log.push(u);
        }
    }

    fn edit_edge(&mut self, e: usize) -> &mut EdgeRecord {
        if self.checkpoint.is_some() {
            let old = self.edges[e].clone();
            self.log(Undo::Edge(e, old));
        }
        &mut self.edges[e]
    }

    fn edit_node(&mut self, n: usize) -> &mut NodeRecord {
        if self.checkpoint.is_some() {
            let old = self.nodes[n].clone();
            self.log(Undo::Node(n, old));
        }
        &mut self.nodes[n]
    }

    pub(crate) fn set_row_edge(&mut self, r: usize, e: usize) {
        if r >= self.row_edge.len() {
            self.row_edge.resize(r + 1, None);
        }
        let old = self.row_edge[r];
        self.log(Undo::RowEdge(r, old));
        self.row_edge[r] = Some(e);
    }

    pub(crate) fn push_zero_row(&mut self) -> usize {
        let r = self.row_edge.len();
        self.row_edge.push(None);
        self.zero_rows.push(r);
        r
    }

    pub(crate) fn set_col_edge(&mut self, c: usize, e: usize) {
        self.declare_columns(c + 1);
        let old = self.col_edge[c];
        self.log(Undo::ColEdge(c, old));
        self.col_edge[c] = Some(e);
    }

    // ---- records ----

    pub fn edge(&self, e: usize) -> &EdgeRecord {
        &self.edges[e]
    }

    pub fn num_edge_records(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn set_marked(&mut self, e: usize, m: bool) {
        if self.edges[e].marked != m {
            self.edit_edge(e).marked = m;
        }
    }

    pub(crate) fn set_partner(&mut self, e: usize, p: Option<usize>) {
        self.edit_edge(e).partner = p;
    }

    pub(crate) fn pair(&mut self, e: usize, f: usize) {
        self.set_partner(e, Some(f));
        self.set_partner(f, Some(e));
    }

    pub(crate) fn unpair(&mut self, e: usize) {
        if let Some(f) = self.edges[e].partner {
            self.set_partner(e, None);
            self.set_partner(f, None);
        }
    }

    pub fn node_of(&mut self, e: usize) -> usize {
        let n = self.edges[e].node;
        self.node_sets.find(n)
    }

    pub fn node_root(&mut self, n: usize) -> usize {
        self.node_sets.find(n)
    }

    pub fn vertex_root(&mut self, v: usize) -> usize {
        self.vertex_sets.find(v)
    }

    pub fn ends(&mut self, e: usize) -> [usize; 2] {
        let [a, b] = self.edges[e].ends;
        [self.vertex_sets.find(a), self.vertex_sets.find(b)]
    }

    pub fn kind(&mut self, n: usize) -> NodeKind {
        let r = self.node_root(n);
        self.nodes[r].kind
    }

    pub(crate) fn set_kind(&mut self, n: usize, k: NodeKind) {
        let r = self.node_root(n);
        self.edit_node(r).kind = k;
    }

    pub fn node_len(&mut self, n: usize) -> usize {
        let r = self.node_root(n);
        self.nodes[r].len
    }

    pub fn tree_of(&mut self, n: usize) -> usize {
        let r = self.node_root(n);
        let t = self.nodes[r].tree;
        self.tree_sets.find(t)
    }

    pub(crate) fn union_trees(&mut self, a: usize, b: usize) -> usize {
        self.tree_sets.union(a, b)
    }

    pub(crate) fn new_tree(&mut self) -> usize {
        self.tree_sets.make_set()
    }

    pub(crate) fn new_node(&mut self, kind: NodeKind, tree: usize) -> usize {
        let id = self.node_sets.make_set();
        debug_assert_eq!(id, self.nodes.len());
        self.nodes.push(NodeRecord { kind, head: NIL, len: 0, tree, live: true });
        id
    }

    pub(crate) fn new_vertex(&mut self) -> usize {
        self.vertex_sets.make_set()
    }

    pub(crate) fn identify(&mut self, u: usize, v: usize) -> usize {
        self.vertex_sets.union(u, v)
    }

    /// Creates an edge and appends it to `node`'s list.
    pub(crate) fn add_edge(&mut self, node: usize, origin: Origin, u: usize, v: usize, in_tree: bool) -> usize {
        let id = self.edges.len();
        self.edges.push(EdgeRecord {
            origin,
            node,
            ends: [u, v],
            in_tree,
            partner: None,
            marked: false,
            live: true,
            prev: id,
            next: id,
        });
        let root = self.node_root(node);
        self.link(root, id);
        id
    }

    fn link(&mut self, root: usize, e: usize) {
        self.list_ops += 1;
        let head = self.nodes[root].head;
        if head == NIL {
            let r = self.edit_edge(e);
            r.prev = e;
            r.next = e;
            let len = self.nodes[root].len;
            let n = self.edit_node(root);
            n.head = e;
            n.len = len + 1;
        } else {
            let tail = self.edges[head].prev;
            self.edit_edge(tail).next = e;
            self.edit_edge(head).prev = e;
            let r = self.edit_edge(e);
            r.prev = tail;
            r.next = head;
            self.edit_node(root).len += 1;
        }
        self.edit_edge(e).node = root;
    }

    fn unlink(&mut self, e: usize) {
        self.list_ops += 1;
        let root = self.node_of(e);
        let (prev, next) = (self.edges[e].prev, self.edges[e].next);
        if next == e {
            self.edit_node(root).head = NIL;
        } else {
            self.edit_edge(prev).next = next;
            self.edit_edge(next).prev = prev;
            if self.nodes[root].head == e {
                self.edit_node(root).head = next;
            }
        }
        self.edit_node(root).len -= 1;
        let r = self.edit_edge(e);
        r.prev = e;
        r.next = e;
    }

    /// Moves `e` into `node`, keeping its vertex labels.
    pub(crate) fn move_edge(&mut self, e: usize, node: usize) {
        self.unlink(e);
        let root = self.node_root(node);
        self.link(root, e);
    }

    pub(crate) fn remove_edge(&mut self, e: usize) {
        self.unlink(e);
        self.edit_edge(e).live = false;
    }

    pub(crate) fn set_ends(&mut self, e: usize, u: usize, v: usize) {
        self.edit_edge(e).ends = [u, v];
    }

    /// Replaces the endpoint of `e` that resolves to `old` by `new`.
    pub(crate) fn replace_end(&mut self, e: usize, old: usize, new: usize) {
        let [a, b] = self.ends(e);
        let i = if a == old {
            0
        } else {
            assert_eq!(b, old, "edge {e} is not incident to vertex {old}");
            1
        };
        self.edit_edge(e).ends[i] = new;
    }

    /// Edge ids of `n` in list order.
    pub fn node_edges(&mut self, n: usize) -> Vec<usize> {
        let root = self.node_root(n);
        let head = self.nodes[root].head;
        let mut out = Vec::with_capacity(self.nodes[root].len);
        if head == NIL {
            return out;
        }
        let mut e = head;
        loop {
            out.push(e);
            self.list_ops += 1;
            e = self.edges[e].next;
            if e == head {
                break;
            }
        }
        out
    }

    /// Virtual edges of `n` whose partner is currently linked.
    pub fn virtual_edges(&mut self, n: usize) -> Vec<usize> {
        self.node_edges(n).into_iter().filter(|&e| self.edges[e].partner.is_some()).collect()
    }

    /// Nodes adjacent to `n` via linked virtual pairs.
    pub fn neighbors(&mut self, n: usize) -> Vec<usize> {
        let vs = self.virtual_edges(n);
        vs.into_iter()
            .map(|e| {
                let f = self.edges[e].partner.expect("virtual");
                self.node_of(f)
            })
            .collect()
    }

    /// All nodes reachable from `start` through linked virtual pairs, in BFS order.
    pub fn tree_nodes(&mut self, start: usize) -> Vec<usize> {
        let start = self.node_root(start);
        let mut seen = HashMap::new();
        seen.insert(start, ());
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for m in self.neighbors(n) {
                if seen.insert(m, ()).is_none() {
                    order.push(m);
                    queue.push_back(m);
                }
            }
        }
        order
    }

    /// Live node roots in increasing id order.
    pub fn live_nodes(&mut self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].live && self.node_sets.find(n) == n).collect()
    }

    /// Live node roots grouped by tree, each group in BFS order from its smallest node.
    pub fn trees(&mut self) -> Vec<Vec<usize>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for n in self.live_nodes() {
            if seen.contains(&n) {
                continue;
            }
            let t = self.tree_nodes(n);
            seen.extend(t.iter().copied());
            out.push(t);
        }
        out
    }

    /// Local snapshot of node `n`.
    pub fn skeleton(&mut self, n: usize) -> Skeleton {
        let root = self.node_root(n);
        let edge_ids = self.node_edges(root);
        let mut vmap: HashMap<usize, usize> = HashMap::new();
        let mut vertex_ids = Vec::new();
        let mut ends = Vec::with_capacity(edge_ids.len());
        for &e in &edge_ids {
            let [a, b] = self.ends(e);
            let mut local = [0; 2];
            for (k, v) in [a, b].into_iter().enumerate() {
                local[k] = *vmap.entry(v).or_insert_with(|| {
                    vertex_ids.push(v);
                    vertex_ids.len() - 1
                });
            }
            ends.push(local);
        }
        let tree = edge_ids.iter().map(|&e| self.edges[e].in_tree).collect();
        let virt = edge_ids.iter().map(|&e| self.edges[e].partner.is_some()).collect();
        let marked = edge_ids.iter().map(|&e| self.edges[e].marked).collect();
        Skeleton { node: root, kind: self.nodes[root].kind, edge_ids, vertex_ids, ends, tree, virt, marked }
    }

    /// Merges node `other` into `keep`; returns the surviving root.
    pub(crate) fn merge_nodes(&mut self, keep: usize, other: usize) -> usize {
        let a = self.node_root(keep);
        let b = self.node_root(other);
        assert_ne!(a, b, "merging a node with itself");
        let (ka, kb) = (self.nodes[a].clone(), self.nodes[b].clone());
        let head = match (ka.head, kb.head) {
            (NIL, h) | (h, NIL) => h,
            (ha, hb) => {
                self.list_ops += 1;
                let ta = self.edges[ha].prev;
                let tb = self.edges[hb].prev;
                self.edit_edge(ta).next = hb;
                self.edit_edge(hb).prev = ta;
                self.edit_edge(tb).next = ha;
                self.edit_edge(ha).prev = tb;
                ha
            }
        };
        let root = self.node_sets.union(a, b);
        let dead = if root == a { b } else { a };
        self.edit_node(dead).live = false;
        let n = self.edit_node(root);
        n.kind = ka.kind;
        n.head = head;
        n.len = ka.len + kb.len;
        n.tree = ka.tree;
        n.live = true;
        root
    }

    /// Contracts the virtual pair `(e, partner(e))` after identifying the given
    /// vertex pairs, and returns the merged node.
    pub(crate) fn contract_pair(&mut self, e: usize, identify: &[(usize, usize)]) -> usize {
        let f = self.edges[e].partner.expect("contract_pair needs a virtual edge");
        let mu = self.node_of(e);
        let nu = self.node_of(f);
        for &(u, v) in identify {
            self.identify(u, v);
        }
        self.unpair(e);
        self.remove_edge(e);
        self.remove_edge(f);
        self.merge_nodes(mu, nu)
    }

    /// Merges the two nodes joined by virtual edge `e`, identifying endpoints
    /// in stored order.
    pub fn merge_adjacent(&mut self, e: usize) -> usize {
        let f = self.edges[e].partner.expect("merge_adjacent needs a virtual edge");
        let [a, b] = self.ends(e);
        let [c, d] = self.ends(f);
        self.contract_pair(e, &[(a, c), (b, d)])
    }

    /// Reassigns the endpoints of `edges` (in order) to form a cycle over `verts`.
    pub(crate) fn set_cycle(&mut self, edges: &[usize], verts: &[usize]) {
        let k = edges.len();
        assert_eq!(verts.len(), k);
        for i in 0..k {
            self.set_ends(edges[i], verts[i], verts[(i + 1) % k]);
        }
    }

    /// Unmarks every edge in the tree containing node `n`.
    pub fn clear_marks(&mut self, n: usize) {
        for m in self.tree_nodes(n) {
            for e in self.node_edges(m) {
                self.set_marked(e, false);
            }
        }
    }

    /// Distinct vertex roots of node `n`.
    pub fn node_vertices(&mut self, n: usize) -> Vec<usize> {
        self.skeleton(n).vertex_ids
    }
}
