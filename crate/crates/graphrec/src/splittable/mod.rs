//! Splittable vertices of a skeleton and the two vertex-splitting primitives.
//!
//! A vertex `v` is splittable for a marked edge set `Y` when the auxiliary
//! graph `H` is bipartite. `H` has one vertex per connected component of the
//! skeleton with `Y` and `v` removed, and one edge per `Y`-edge not incident
//! to `v`.

pub mod lca;

pub use lca::{path_intersection, Lca};

use serde::{Deserialize, Serialize};

use crate::spqr::{NodeKind, Skeleton, SpqrForest};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryGraph {
    pub vertex: usize,
    /// Vertex sets of the components, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    /// Component of each vertex, `usize::MAX` for the removed vertex.
    pub comp_of: Vec<usize>,
    /// One entry per marked edge not incident to the removed vertex.
    pub edges: Vec<(usize, usize)>,
    pub loops: Vec<bool>,
}

/// Two-colouring of the auxiliary graph; `in_i[h]` tells whether component
/// `h` is on side I.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub in_i: Vec<bool>,
}

impl Bipartition {
    pub fn side_i(&self) -> Vec<usize> {
        (0..self.in_i.len()).filter(|&h| self.in_i[h]).collect()
    }

    pub fn side_j(&self) -> Vec<usize> {
        (0..self.in_i.len()).filter(|&h| !self.in_i[h]).collect()
    }
}

/// Builds `H` for vertex `v`; the marked edges of `sk` play the role of `Y`.
pub fn auxiliary_graph(sk: &Skeleton, v: usize) -> AuxiliaryGraph {
    let n = sk.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for (i, &[a, b]) in sk.ends.iter().enumerate() {
        if !sk.marked[i] && a != v && b != v {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut comp_of = vec![NONE; n];
    let mut components = Vec::new();
    for s in 0..n {
        if s == v || comp_of[s] != NONE {
            continue;
        }
        let id = components.len();
        comp_of[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if comp_of[y] == NONE {
                    comp_of[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut edges = Vec::new();
    let mut loops = vec![false; components.len()];
    for (i, &[a, b]) in sk.ends.iter().enumerate() {
        if sk.marked[i] && a != v && b != v {
            let (ha, hb) = (comp_of[a], comp_of[b]);
            if ha == hb {
                loops[ha] = true;
            }
            edges.push((ha, hb));
        }
    }
    AuxiliaryGraph { vertex: v, components, comp_of, edges, loops }
}

impl AuxiliaryGraph {
    pub fn is_bipartite(&self) -> bool {
        self.bipartition(None).is_some()
    }

    /// Two-colours `H`. Within each connected piece of `H`, side I holds the
    /// anchor component if it lies there and the lowest component otherwise.
    pub fn bipartition(&self, anchor: Option<usize>) -> Option<Bipartition> {
        if self.loops.iter().any(|&l| l) {
            return None;
        }
        let k = self.components.len();
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color = vec![NONE; k];
        let mut in_i = vec![false; k];
        for s in 0..k {
            if color[s] != NONE {
                continue;
            }
            color[s] = 0;
            let mut piece = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if color[y] == NONE {
                        color[y] = 1 - color[x];
                        piece.push(y);
                        stack.push(y);
                    } else if color[y] == color[x] {
                        return None;
                    }
                }
            }
            let lead = anchor.filter(|a| piece.contains(a)).unwrap_or(s);
            for h in piece {
                in_i[h] = color[h] == color[lead];
            }
        }
        Some(Bipartition { in_i })
    }
}

/// Articulation vertices of the multigraph on `n` vertices with the given edges.
pub fn articulation_points(n: usize, ends: &[[usize; 2]]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for (i, &[a, b]) in ends.iter().enumerate() {
        if a != b {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
    }
    let mut disc = vec![NONE; n];
    let mut low = vec![0; n];
    let mut art = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != NONE {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, NONE, 0)];
        while let Some(&mut (x, pe, ref mut it)) = stack.last_mut() {
            if *it < adj[x].len() {
                let (y, ei) = adj[x][*it];
                *it += 1;
                if ei == pe {
                    continue;
                }
                if disc[y] == NONE {
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    if x == root {
                        root_children += 1;
                    }
                    stack.push((y, ei, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if p != root && low[x] >= disc[p] {
                        art[p] = true;
                    }
                }
            }
        }
        art[root] = root_children > 1;
    }
    art
}

fn components(n: usize, ends: &[[usize; 2]], skip: Option<usize>) -> usize {
    let mut ds = crate::unionfind::DisjointSets::new();
    for _ in 0..n {
        ds.make_set();
    }
    for &[a, b] in ends {
        if Some(a) != skip && Some(b) != skip {
            ds.union(a, b);
        }
    }
    (0..n).filter(|&v| Some(v) != skip && ds.find(v) == v).count()
}

pub fn is_connected(n: usize, ends: &[[usize; 2]]) -> bool {
    components(n, ends, None) <= 1
}

/// Connected, loopless, at least two vertices and no articulation vertex.
pub fn is_biconnected(n: usize, ends: &[[usize; 2]]) -> bool {
    n >= 2 && ends.iter().all(|&[a, b]| a != b) && is_connected(n, ends) && !articulation_points(n, ends).iter().any(|&x| x)
}

/// Three-connectivity of a simple graph: at least four vertices and no
/// separating pair.
pub fn is_triconnected(n: usize, ends: &[[usize; 2]]) -> bool {
    if n < 4 || !is_biconnected(n, ends) {
        return false;
    }
    (0..n).all(|v| {
        let rest: Vec<[usize; 2]> = ends.iter().copied().filter(|&[a, b]| a != v && b != v).collect();
        let relabel = |x: usize| if x > v { x - 1 } else { x };
        let rest: Vec<[usize; 2]> = rest.into_iter().map(|[a, b]| [relabel(a), relabel(b)]).collect();
        is_biconnected(n - 1, &rest)
    })
}

pub fn is_simple(ends: &[[usize; 2]]) -> bool {
    let mut seen = std::collections::HashSet::new();
    ends.iter().all(|&[a, b]| a != b && seen.insert((a.min(b), a.max(b))))
}

/// The vertices examined by the fast search, for inspection in tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitSearch {
    pub splittable: Vec<usize>,
    pub star_centers: Vec<usize>,
    pub path_ends: Option<(usize, usize)>,
    pub candidates: Vec<usize>,
}

/// All splittable vertices of a skeleton, as local indices in increasing order.
///
/// Cycles, bonds, trivial nodes and an empty `Y` admit every vertex. For
/// rigid nodes only `Y`-star centers and articulation vertices of the graph
/// without `Y` that lie on every fundamental path of `Y` can qualify, and
/// only those are checked.
pub fn find_splittable_vertices(sk: &Skeleton) -> Vec<usize> {
    search(sk).splittable
}

pub fn search(sk: &Skeleton) -> SplitSearch {
    let n = sk.num_vertices();
    let y = sk.y_edges();
    if y.is_empty() || sk.kind != NodeKind::R {
        return SplitSearch { splittable: (0..n).collect(), ..Default::default() };
    }
    let mut star: Vec<usize> = sk.ends[y[0]].to_vec();
    star.dedup();
    for &i in &y[1..] {
        star.retain(|v| sk.ends[i].contains(v));
    }
    star.sort_unstable();
    if star.len() == 2 {
        return SplitSearch { splittable: star.clone(), star_centers: star, ..Default::default() };
    }
    let tree: Vec<(usize, usize)> = (0..sk.num_edges()).filter(|&i| sk.tree[i]).map(|i| (sk.ends[i][0], sk.ends[i][1])).collect();
    let lca = Lca::new(n, &tree);
    let paths: Vec<(usize, usize)> = y.iter().map(|&i| (sk.ends[i][0], sk.ends[i][1])).collect();
    let q = path_intersection(&lca, &paths);
    let mut out = SplitSearch { splittable: star.clone(), star_centers: star.clone(), path_ends: q, candidates: Vec::new() };
    let Some((p, r)) = q else {
        return out;
    };
    let rest: Vec<[usize; 2]> = (0..sk.num_edges()).filter(|&i| !sk.marked[i]).map(|i| sk.ends[i]).collect();
    let art = articulation_points(n, &rest);
    for v in 0..n {
        if art[v] && !star.contains(&v) && lca.on_path(p, r, v) {
            out.candidates.push(v);
            if auxiliary_graph(sk, v).is_bipartite() {
                out.splittable.push(v);
            }
        }
    }
    out.splittable.sort_unstable();
    out
}

/// Reference search: builds `H` for every vertex. Valid for any multigraph.
pub fn splittable_vertices_exact(sk: &Skeleton) -> Vec<usize> {
    (0..sk.num_vertices()).filter(|&v| auxiliary_graph(sk, v).is_bipartite()).collect()
}

/// Splittable vertices incident to every virtual edge of the skeleton.
pub fn find_tree_splittable_vertices(sk: &Skeleton) -> Vec<usize> {
    let mut x = find_splittable_vertices(sk);
    for i in 0..sk.num_edges() {
        if sk.virt[i] {
            x.retain(|v| sk.ends[i].contains(v));
        }
    }
    x
}

/// Splits local vertex `v` of `sk` into two fresh vertices. An edge moves to
/// the first one exactly when it is marked or its other end lies in a side-I
/// component, but not both. Returns the new global vertex labels.
pub fn bipartite_split(forest: &mut SpqrForest, sk: &Skeleton, v: usize, anchor: Option<usize>) -> (usize, usize) {
    let aux = auxiliary_graph(sk, v);
    let anchor = anchor.map(|a| aux.comp_of[a]).filter(|&h| h != NONE);
    let bip = aux.bipartition(anchor).expect("bipartite_split on a non-splittable vertex");
    let old = sk.vertex_ids[v];
    let v1 = forest.new_vertex();
    let v2 = forest.new_vertex();
    for (i, &[a, b]) in sk.ends.iter().enumerate() {
        if a != v && b != v {
            continue;
        }
        let u = if a == v { b } else { a };
        debug_assert_ne!(u, v, "loop in skeleton");
        let to = if sk.marked[i] != bip.in_i[aux.comp_of[u]] { v1 } else { v2 };
        forest.replace_end(sk.edge_ids[i], old, to);
    }
    (forest.vertex_root(v1), forest.vertex_root(v2))
}

/// Splits a vertex of a cycle or two-edge bond into two vertices of degree one.
pub fn extend_series(forest: &mut SpqrForest, node: usize) -> (usize, usize) {
    let kind = forest.kind(node);
    assert!(matches!(kind, NodeKind::S | NodeKind::Q), "extend_series on a {kind:?} node");
    let edges = forest.node_edges(node);
    let e0 = edges[0];
    let v = forest.ends(e0)[0];
    let w = forest.new_vertex();
    forest.replace_end(e0, v, w);
    (forest.vertex_root(v), forest.vertex_root(w))
}
