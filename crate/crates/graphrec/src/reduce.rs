//! Shrinking an SPQR tree to the part that a new row actually touches.
//!
//! Every reduction detaches a piece of the tree behind a virtual pair whose
//! link is cut: a whole leaf, or a fresh S or P node that takes over a group
//! of edges replaced by one new edge. The journal remembers each cut pair, so
//! undoing the reductions after a split only relinks pairs.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::splittable::find_splittable_vertices;
use crate::spqr::{NodeKind, Origin, Skeleton, SpqrForest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafKind {
    Empty,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JournalEntry {
    LeafDrop {
        node: usize,
        kept_edge: usize,
        leaf_edge: usize,
        kind: LeafKind,
    },
    SeriesLocal {
        node: usize,
        replaced: Vec<usize>,
        new_edge: usize,
        marked: bool,
        detached_node: usize,
        detached_edge: usize,
    },
    ParallelLocal {
        node: usize,
        replaced: Vec<usize>,
        new_edge: usize,
        marked: bool,
        detached_node: usize,
        detached_edge: usize,
    },
    KindChange {
        node: usize,
        from: NodeKind,
        to: NodeKind,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJournal {
    pub entries: Vec<JournalEntry>,
}

impl ReductionJournal {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Surviving nodes and the marked edges inside them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedTree {
    pub nodes: Vec<usize>,
    pub marked: Vec<usize>,
}

/// Whether a leaf can be replaced by a single marked edge in its neighbour:
/// its virtual edge `e` is a tree edge and the marked edges are exactly the
/// non-tree edges whose fundamental path uses `e`.
pub fn full_propagation_test(sk: &Skeleton, e: usize) -> bool {
    if !sk.tree[e] {
        return false;
    }
    let marks = (0..sk.num_edges()).filter(|&i| sk.marked[i]).count();
    if marks == 0 {
        return false;
    }
    match sk.kind {
        NodeKind::S => true,
        NodeKind::P => marks + 1 == sk.num_edges(),
        NodeKind::R => {
            let x = find_splittable_vertices(sk);
            sk.ends[e].iter().all(|v| x.contains(v))
        }
        NodeKind::Q => false,
    }
}

fn collapse(
    forest: &mut SpqrForest,
    node: usize,
    set: &[usize],
    kind: NodeKind,
    in_tree: bool,
    marked: bool,
    journal: &mut ReductionJournal,
) -> usize {
    let tree = forest.tree_of(node);
    let old_vertices = forest.node_vertices(node);
    let [p, q] = forest.ends(set[0]);
    let nu = forest.new_node(kind, tree);
    for &e in set {
        forest.set_marked(e, false);
        forest.move_edge(e, nu);
    }
    let detached = forest.add_edge(nu, Origin::Virtual, p, q, !in_tree);
    let z = forest.add_edge(node, Origin::Virtual, p, q, in_tree);
    forest.set_marked(z, marked);
    match kind {
        NodeKind::P => {
            let (a, b) = (forest.new_vertex(), forest.new_vertex());
            for e in forest.node_edges(nu) {
                forest.set_ends(e, a, b);
            }
            journal.entries.push(JournalEntry::ParallelLocal {
                node,
                replaced: set.to_vec(),
                new_edge: z,
                marked,
                detached_node: nu,
                detached_edge: detached,
            });
        }
        NodeKind::S => {
            let ring = forest.node_edges(nu);
            let fresh: Vec<usize> = (0..ring.len()).map(|_| forest.new_vertex()).collect();
            forest.set_cycle(&ring, &fresh);
            let rest = forest.node_edges(node);
            forest.set_cycle(&rest, &old_vertices[..rest.len()]);
            journal.entries.push(JournalEntry::SeriesLocal {
                node,
                replaced: set.to_vec(),
                new_edge: z,
                marked,
                detached_node: nu,
                detached_edge: detached,
            });
        }
        _ => unreachable!("collapse into {kind:?}"),
    }
    z
}

/// Collapses several marked edges of a P node into one, then several
/// unmarked regular edges into one; a P node left without virtual edges
/// becomes a Q node.
pub fn reduce_parallel(forest: &mut SpqrForest, node: usize, journal: &mut ReductionJournal) {
    assert_eq!(forest.kind(node), NodeKind::P, "reduce_parallel on a non-P node");
    let edges = forest.node_edges(node);
    let ys: Vec<usize> = edges.iter().copied().filter(|&e| forest.edge(e).partner.is_none() && forest.edge(e).marked).collect();
    if ys.len() > 1 {
        collapse(forest, node, &ys, NodeKind::P, false, true, journal);
    }
    let edges = forest.node_edges(node);
    let zs: Vec<usize> = edges.iter().copied().filter(|&e| forest.edge(e).partner.is_none() && !forest.edge(e).marked).collect();
    if zs.len() > 1 {
        let t = zs.iter().any(|&e| forest.edge(e).in_tree);
        collapse(forest, node, &zs, NodeKind::P, t, false, journal);
    }
    if forest.virtual_edges(node).is_empty() {
        forest.set_kind(node, NodeKind::Q);
        journal.entries.push(JournalEntry::KindChange { node, from: NodeKind::P, to: NodeKind::Q });
    }
}

/// Collapses the regular edges of an S node into one edge, unless the node
/// has no virtual edges or at most one regular edge.
pub fn reduce_series(forest: &mut SpqrForest, node: usize, journal: &mut ReductionJournal) {
    assert_eq!(forest.kind(node), NodeKind::S, "reduce_series on a non-S node");
    let edges = forest.node_edges(node);
    let zs: Vec<usize> = edges.iter().copied().filter(|&e| forest.edge(e).partner.is_none()).collect();
    if zs.len() == edges.len() || zs.len() <= 1 {
        return;
    }
    let t = zs.iter().all(|&e| forest.edge(e).in_tree);
    let m = zs.iter().any(|&e| forest.edge(e).marked);
    collapse(forest, node, &zs, NodeKind::S, t, m, journal);
}

/// Marks `y` and reduces the tree that contains it.
///
/// Leaves without marked edges are dropped first, then leaves whose marked
/// edges can be replaced by their partner edge, both in first-in first-out
/// order. Survivors of kind S and P are then reduced locally.
pub fn reduce_tree(forest: &mut SpqrForest, y: &[usize]) -> (ReducedTree, ReductionJournal) {
    assert!(!y.is_empty(), "reduce_tree needs a nonempty edge set");
    for &e in y {
        let rec = forest.edge(e);
        assert!(rec.partner.is_none() && !rec.in_tree, "marked edge {e} must be a regular non-tree edge");
        forest.set_marked(e, true);
    }
    let start = forest.node_of(y[0]);
    let nodes = forest.tree_nodes(start);
    let mut deg: HashMap<usize, usize> = HashMap::new();
    let mut marks: HashMap<usize, usize> = HashMap::new();
    let mut alive: HashMap<usize, bool> = HashMap::new();
    for &n in &nodes {
        let d = forest.virtual_edges(n).len();
        deg.insert(n, d);
        marks.insert(n, 0);
        alive.insert(n, true);
    }
    for &e in y {
        let n = forest.node_of(e);
        *marks.get_mut(&n).expect("edge inside tree") += 1;
    }
    let mut journal = ReductionJournal::default();
    let mut remaining = nodes.len();

    let drop_leaf = |forest: &mut SpqrForest,
                         n: usize,
                         kind: LeafKind,
                         deg: &mut HashMap<usize, usize>,
                         alive: &mut HashMap<usize, bool>,
                         journal: &mut ReductionJournal|
     -> usize {
        let g = forest.virtual_edges(n)[0];
        let f = forest.edge(g).partner.expect("leaf edge is linked");
        let nb = forest.node_of(f);
        forest.unpair(g);
        journal.entries.push(JournalEntry::LeafDrop { node: n, kept_edge: f, leaf_edge: g, kind });
        alive.insert(n, false);
        *deg.get_mut(&nb).expect("neighbour inside tree") -= 1;
        nb
    };

    let mut queue: VecDeque<usize> = nodes.iter().copied().filter(|n| deg[n] == 1).collect();
    while let Some(n) = queue.pop_front() {
        if remaining == 1 {
            break;
        }
        if !alive[&n] || deg[&n] != 1 || marks[&n] > 0 {
            continue;
        }
        let nb = drop_leaf(forest, n, LeafKind::Empty, &mut deg, &mut alive, &mut journal);
        remaining -= 1;
        if deg[&nb] == 1 {
            queue.push_back(nb);
        }
    }

    let mut queue: VecDeque<usize> = nodes.iter().copied().filter(|n| alive[n] && deg[n] == 1).collect();
    while let Some(n) = queue.pop_front() {
        if remaining == 1 {
            break;
        }
        if !alive[&n] || deg[&n] != 1 {
            continue;
        }
        let sk = forest.skeleton(n);
        let g = forest.virtual_edges(n)[0];
        let local = sk.local_edge(g).expect("virtual edge in skeleton");
        if !full_propagation_test(&sk, local) {
            continue;
        }
        let f = forest.edge(g).partner.expect("leaf edge is linked");
        for e in sk.edge_ids.iter().copied() {
            forest.set_marked(e, false);
        }
        forest.set_marked(f, true);
        let nb = drop_leaf(forest, n, LeafKind::Full, &mut deg, &mut alive, &mut journal);
        *marks.get_mut(&nb).expect("neighbour inside tree") += 1;
        remaining -= 1;
        if deg[&nb] == 1 {
            queue.push_back(nb);
        }
    }

    let survivors: Vec<usize> = nodes.iter().copied().filter(|n| alive[n]).collect();
    for &n in &survivors {
        match forest.kind(n) {
            NodeKind::S => reduce_series(forest, n, &mut journal),
            NodeKind::P => reduce_parallel(forest, n, &mut journal),
            _ => {}
        }
    }
    let mut marked = Vec::new();
    for &n in &survivors {
        for e in forest.node_edges(n) {
            if forest.edge(e).marked {
                marked.push(e);
            }
        }
    }
    (ReducedTree { nodes: survivors, marked }, journal)
}

/// Relinks every pair cut by the journal, newest first, and undoes kind
/// changes that are still in effect. Returns the relinked edges on the
/// surviving side.
pub fn reverse_reductions(forest: &mut SpqrForest, journal: &ReductionJournal) -> Vec<usize> {
    let mut kept = Vec::new();
    for entry in journal.entries.iter().rev() {
        match *entry {
            JournalEntry::LeafDrop { kept_edge, leaf_edge, .. } => {
                forest.set_marked(kept_edge, false);
                forest.pair(kept_edge, leaf_edge);
                kept.push(kept_edge);
            }
            JournalEntry::SeriesLocal { new_edge, detached_edge, .. } | JournalEntry::ParallelLocal { new_edge, detached_edge, .. } => {
                forest.set_marked(new_edge, false);
                forest.pair(new_edge, detached_edge);
                kept.push(new_edge);
            }
            JournalEntry::KindChange { node, from, to } => {
                if forest.kind(node) == to {
                    forest.set_kind(node, from);
                }
            }
        }
    }
    kept
}

/// Merges S-S and P-P neighbours across the given relinked edges until none
/// remain.
pub fn repair_minimality(forest: &mut SpqrForest, kept: &[usize]) {
    loop {
        let mut changed = false;
        for &k in kept {
            let rec = forest.edge(k);
            if !rec.live {
                continue;
            }
            let Some(p) = rec.partner else { continue };
            let (a, b) = (forest.node_of(k), forest.node_of(p));
            let (ka, kb) = (forest.kind(a), forest.kind(b));
            if ka == kb && matches!(ka, NodeKind::S | NodeKind::P) {
                forest.merge_adjacent(k);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}
