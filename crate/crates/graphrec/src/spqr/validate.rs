use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NodeKind, Origin, SpqrForest};
use crate::splittable::{is_connected, is_simple, is_triconnected};
use crate::unionfind::DisjointSets;

/// The first broken invariant found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub node: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "node {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for Violation {}

fn fail<T>(node: Option<usize>, message: impl Into<String>) -> Result<T, Violation> {
    Err(Violation { node, message: message.into() })
}

/// Checks edge pairing, node shapes, spanning trees, tree structure and the
/// row/column edge tables.
pub fn validate(forest: &mut SpqrForest) -> Result<(), Violation> {
    let trees = forest.trees();
    let mut label_seen: HashMap<usize, usize> = HashMap::new();
    for (ti, nodes) in trees.iter().enumerate() {
        let label = forest.tree_of(nodes[0]);
        if let Some(&other) = label_seen.get(&label) {
            return fail(Some(nodes[0]), format!("trees {other} and {ti} share a tree label"));
        }
        label_seen.insert(label, ti);
        let mut pairs = 0;
        for &n in nodes {
            if forest.tree_of(n) != label {
                return fail(Some(n), "node carries a different tree label than its neighbours");
            }
            check_node(forest, n, nodes.len())?;
            pairs += forest.virtual_edges(n).len();
        }
        if pairs != 2 * (nodes.len() - 1) {
            return fail(Some(nodes[0]), "virtual pairs do not form a tree");
        }
    }
    for r in 0..forest.num_rows() {
        if let Some(e) = forest.row_edge(r) {
            let rec = forest.edge(e);
            if !rec.live || rec.origin != Origin::Row(r) || !rec.in_tree || rec.partner.is_some() {
                return fail(None, format!("row {r} maps to a bad edge record {e}"));
            }
        }
    }
    for c in 0..forest.num_cols() {
        if let Some(e) = forest.col_edge(c) {
            let rec = forest.edge(e);
            if !rec.live || rec.origin != Origin::Col(c) || rec.in_tree || rec.partner.is_some() {
                return fail(None, format!("column {c} maps to a bad edge record {e}"));
            }
        }
    }
    Ok(())
}

fn check_node(forest: &mut SpqrForest, n: usize, tree_size: usize) -> Result<(), Violation> {
    let sk = forest.skeleton(n);
    let node = Some(n);
    for (i, &e) in sk.edge_ids.iter().enumerate() {
        let rec = forest.edge(e).clone();
        if !rec.live {
            return fail(node, format!("dead edge {e} in edge list"));
        }
        if rec.marked {
            return fail(node, format!("edge {e} left marked"));
        }
        if sk.ends[i][0] == sk.ends[i][1] {
            return fail(node, format!("edge {e} is a loop"));
        }
        match rec.partner {
            Some(f) => {
                if f == e {
                    return fail(node, format!("edge {e} is its own partner"));
                }
                let frec = forest.edge(f).clone();
                if !frec.live || frec.partner != Some(e) {
                    return fail(node, format!("partner of {e} is not an involution"));
                }
                if rec.origin != Origin::Virtual {
                    return fail(node, format!("edge {e} has a partner but is not virtual"));
                }
                if rec.in_tree == frec.in_tree {
                    let what = if rec.in_tree { "both" } else { "neither" };
                    return fail(node, format!("virtual pair ({e}, {f}): {what} halves tree-flagged"));
                }
                if forest.node_of(f) == n {
                    return fail(node, format!("virtual pair ({e}, {f}) inside one node"));
                }
            }
            None => {
                if rec.origin == Origin::Virtual {
                    return fail(node, format!("virtual edge {e} has no partner"));
                }
                let expect = match rec.origin {
                    Origin::Row(r) => forest.row_edge(r),
                    Origin::Col(c) => forest.col_edge(c),
                    Origin::Virtual => None,
                };
                if expect != Some(e) {
                    return fail(node, format!("edge {e} ({}) is not registered", rec.origin));
                }
                if matches!(rec.origin, Origin::Row(_)) != rec.in_tree {
                    return fail(node, format!("edge {e} ({}) has the wrong tree flag", rec.origin));
                }
            }
        }
    }
    let (nv, ne) = (sk.num_vertices(), sk.num_edges());
    let mut degree = vec![0; nv];
    for &[a, b] in &sk.ends {
        degree[a] += 1;
        degree[b] += 1;
    }
    match sk.kind {
        NodeKind::S => {
            if ne < 3 {
                return fail(node, "S cycle length < 3");
            }
            if nv != ne || degree.iter().any(|&d| d != 2) || !is_connected(nv, &sk.ends) {
                return fail(node, "S skeleton is not a cycle");
            }
        }
        NodeKind::P => {
            if nv != 2 {
                return fail(node, "P skeleton does not have exactly two vertices");
            }
            if ne < 3 {
                return fail(node, "P skeleton has fewer than three edges");
            }
        }
        NodeKind::Q => {
            if nv > 2 || ne > 2 || ne == 0 {
                return fail(node, "Q skeleton exceeds two vertices or two edges");
            }
            if tree_size != 1 {
                return fail(node, "Q node is not alone in its tree");
            }
        }
        NodeKind::R => {
            if ne < 4 {
                return fail(node, "R skeleton has fewer than four edges");
            }
            if !is_simple(&sk.ends) {
                return fail(node, "R skeleton is not simple");
            }
            if !is_triconnected(nv, &sk.ends) {
                return fail(node, "R skeleton is not 3-connected");
            }
        }
    }
    let mut ds = DisjointSets::new();
    for _ in 0..nv {
        ds.make_set();
    }
    let mut count = 0;
    for (i, &[a, b]) in sk.ends.iter().enumerate() {
        if sk.tree[i] {
            if ds.find(a) == ds.find(b) {
                return fail(node, "tree edges contain a cycle");
            }
            ds.union(a, b);
            count += 1;
        }
    }
    if count + 1 != nv {
        return fail(node, format!("{count} tree edges on {nv} vertices do not span"));
    }
    Ok(())
}

/// No two adjacent S nodes and no two adjacent P nodes.
pub fn check_minimal(forest: &mut SpqrForest) -> bool {
    for n in forest.live_nodes() {
        let k = forest.kind(n);
        if !matches!(k, NodeKind::S | NodeKind::P) {
            continue;
        }
        for m in forest.neighbors(n) {
            if forest.kind(m) == k {
                return false;
            }
        }
    }
    true
}

/// Node counts and skeleton sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestStats {
    pub trees: usize,
    pub s_nodes: usize,
    pub p_nodes: usize,
    pub q_nodes: usize,
    pub r_nodes: usize,
    pub skeleton_edges: usize,
    pub skeleton_vertices: usize,
    pub matrix_edges: usize,
}

impl ForestStats {
    pub fn nodes(&self) -> usize {
        self.s_nodes + self.p_nodes + self.q_nodes + self.r_nodes
    }
}

impl SpqrForest {
    pub fn stats(&mut self) -> ForestStats {
        let mut st = ForestStats::default();
        for t in self.trees() {
            let ts = tree_stats(self, &t);
            st.trees += 1;
            st.s_nodes += ts.s_nodes;
            st.p_nodes += ts.p_nodes;
            st.q_nodes += ts.q_nodes;
            st.r_nodes += ts.r_nodes;
            st.skeleton_edges += ts.skeleton_edges;
            st.skeleton_vertices += ts.skeleton_vertices;
            st.matrix_edges += ts.matrix_edges;
        }
        st
    }
}

fn tree_stats(forest: &mut SpqrForest, nodes: &[usize]) -> ForestStats {
    let mut st = ForestStats { trees: 1, ..Default::default() };
    for &n in nodes {
        let sk = forest.skeleton(n);
        match sk.kind {
            NodeKind::S => st.s_nodes += 1,
            NodeKind::P => st.p_nodes += 1,
            NodeKind::Q => st.q_nodes += 1,
            NodeKind::R => st.r_nodes += 1,
        }
        st.skeleton_edges += sk.num_edges();
        st.skeleton_vertices += sk.num_vertices();
        st.matrix_edges += sk.virt.iter().filter(|&&v| !v).count();
    }
    st
}

/// Size bounds for every tree representing at least three matrix edges:
/// skeleton edges and skeleton vertices each at most `3|E| - 6`, nodes at
/// most `|E| - 2`.
pub fn check_size_bounds(forest: &mut SpqrForest) -> Result<(), Violation> {
    for t in forest.trees() {
        let st = tree_stats(forest, &t);
        let e = st.matrix_edges;
        if e < 3 {
            continue;
        }
        if st.skeleton_edges > 3 * e - 6 {
            return fail(Some(t[0]), format!("{} skeleton edges exceed 3|E| - 6 = {}", st.skeleton_edges, 3 * e - 6));
        }
        if st.skeleton_vertices > 3 * e - 6 {
            return fail(Some(t[0]), format!("{} skeleton vertices exceed 3|E| - 6 = {}", st.skeleton_vertices, 3 * e - 6));
        }
        if st.nodes() > e - 2 {
            return fail(Some(t[0]), format!("{} nodes exceed |E| - 2 = {}", st.nodes(), e - 2));
        }
    }
    Ok(())
}
