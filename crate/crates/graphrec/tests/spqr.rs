mod common;

use common::*;
use graphrec::augment::is_graphic;
use graphrec::binmatrix::SparseBinaryMatrix;
use graphrec::oracle::verify_realization;
use graphrec::spqr::{representation_matrix, to_dot, to_json, ForestDump, GraphEdge, GraphTreePair, NodeKind, Origin};

fn realize(m: &SparseBinaryMatrix) -> GraphTreePair {
    let mut rep = is_graphic(m);
    assert!(rep.graphic);
    check_forest(&mut rep.forest).unwrap();
    let g = rep.forest.certificate().unwrap();
    g.check().unwrap();
    assert!(verify_realization(m, &g));
    g
}

#[test]
fn single_entry_is_a_q_node() {
    let m = SparseBinaryMatrix::from_rows(1, vec![vec![0]]).unwrap();
    let mut rep = is_graphic(&m);
    assert_eq!(rep.forest.stats().q_nodes, 1);
    let g = realize(&m);
    assert_eq!((g.num_vertices, g.edges.len()), (2, 2));
}

#[test]
fn one_row_of_ones_is_a_bond() {
    let m = SparseBinaryMatrix::from_rows(4, vec![vec![0, 1, 2, 3]]).unwrap();
    let mut rep = is_graphic(&m);
    let st = rep.forest.stats();
    assert_eq!((st.p_nodes, st.nodes()), (1, 1));
    let g = realize(&m);
    assert_eq!(g.num_vertices, 2);
    assert!(g.edges.iter().all(|e| e.u != e.v));
}

#[test]
fn nine_column_realization_size() {
    let g = realize(&nine_column());
    assert_eq!(g.num_vertices, 7);
    assert_eq!(g.edges.len(), 15);
    assert_eq!(g.tree_edges().count(), 6);
}

#[test]
fn five_by_five_realization_size() {
    let g = realize(&five_by_five());
    assert_eq!((g.num_vertices, g.edges.len()), (6, 10));
}

#[test]
fn k5_with_a_star_tree() {
    let star: Vec<(usize, usize)> = (1..5).map(|v| (0, v)).collect();
    let chords: Vec<(usize, usize)> = (1..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let mut edges: Vec<GraphEdge> =
        star.iter().enumerate().map(|(i, &(u, v))| GraphEdge { u, v, origin: Origin::Row(i), in_tree: true }).collect();
    edges.extend(chords.iter().enumerate().map(|(j, &(u, v))| GraphEdge { u, v, origin: Origin::Col(j), in_tree: false }));
    let k5 = GraphTreePair { num_vertices: 5, edges };
    let m = representation_matrix(&k5).unwrap();
    assert_eq!((m.num_rows(), m.num_cols(), m.nnz()), (4, 6, 12));
    let mut rep = is_graphic(&m);
    assert!(rep.graphic);
    let st = rep.forest.stats();
    assert_eq!((st.r_nodes, st.nodes()), (1, 1));
    assert!(verify_realization(&m, rep.certificate.as_ref().unwrap()));
}

#[test]
fn rows_without_columns_form_a_path() {
    let m = SparseBinaryMatrix::zeros(4, 0);
    let g = realize(&m);
    assert_eq!(g.num_vertices, 5);
    assert_eq!(g.tree_edges().count(), 4);
    assert_eq!(g.non_tree_edges().count(), 0);
}

#[test]
fn dumps_describe_every_node() {
    let mut rep = is_graphic(&nine_column());
    let json = to_json(&mut rep.forest);
    let dump: ForestDump = serde_json::from_str(&json).unwrap();
    let st = rep.forest.stats();
    assert_eq!(dump.nodes.len(), st.nodes());
    assert_eq!(dump.nodes.iter().filter(|n| n.kind == NodeKind::R).count(), 1);
    let dot = to_dot(&mut rep.forest);
    assert!(dot.starts_with("graph spqr {"));
    assert_eq!(dot.matches("subgraph").count(), st.nodes());
}
