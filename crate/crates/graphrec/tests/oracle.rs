mod common;

use common::*;
use graphrec::augment::is_graphic;
use graphrec::binmatrix::{connected_blocks, SparseBinaryMatrix};
use graphrec::oracle::{
    derive_k33_dual, derive_k5_dual, oracle_is_graphic, random_graphic_instance, random_matrix, verify_realization,
    OracleError, ORACLE_MAX_ROWS,
};
use graphrec::spqr::{GraphEdge, GraphTreePair, Origin};
use graphrec::splittable::is_biconnected;

fn pair(n: usize, rows: &[(usize, usize)], cols: &[(usize, usize)]) -> GraphTreePair {
    let mut edges: Vec<GraphEdge> =
        rows.iter().enumerate().map(|(i, &(u, v))| GraphEdge { u, v, origin: Origin::Row(i), in_tree: true }).collect();
    edges.extend(cols.iter().enumerate().map(|(j, &(u, v))| GraphEdge { u, v, origin: Origin::Col(j), in_tree: false }));
    GraphTreePair { num_vertices: n, edges }
}

#[test]
fn five_by_five_witness() {
    let m = five_by_five();
    let v = oracle_is_graphic(&m).unwrap();
    assert!(v.graphic);
    assert!(v.trees_examined >= 1);
    let w = v.witness.unwrap();
    assert_eq!(w.num_vertices, 6);
    assert!(verify_realization(&m, &w));
}

#[test]
fn one_row_of_ones_is_graphic() {
    let m = SparseBinaryMatrix::from_rows(7, vec![(0..7).collect()]).unwrap();
    let v = oracle_is_graphic(&m).unwrap();
    assert!(v.graphic);
    assert!(verify_realization(&m, &v.witness.unwrap()));
}

#[test]
fn dual_of_k33_and_k5_are_not_graphic() {
    for m in [derive_k33_dual(), derive_k5_dual()] {
        let v = oracle_is_graphic(&m).unwrap();
        assert!(!v.graphic);
        assert!(v.witness.is_none());
        assert!(!is_graphic(&m).graphic);
        assert!(oracle_is_graphic(&m.transpose()).unwrap().graphic);
    }
}

#[test]
fn too_many_rows_in_one_block() {
    let n = ORACLE_MAX_ROWS + 1;
    let m = SparseBinaryMatrix::from_rows(1, vec![vec![0]; n]).unwrap();
    assert_eq!(oracle_is_graphic(&m), Err(OracleError::ScaleExceeded { rows: n, limit: ORACLE_MAX_ROWS }));
    let split = SparseBinaryMatrix::from_rows(1, vec![vec![0]; 4]).unwrap().direct_sum(&SparseBinaryMatrix::from_rows(1, vec![vec![0]; 5]).unwrap());
    assert!(oracle_is_graphic(&split).unwrap().graphic);
}

#[test]
fn generator_small_cases() {
    for seed in 0..20 {
        let (g, m) = random_graphic_instance(seed, 2, 2, false).unwrap();
        assert_eq!(m.rows(), &[vec![0]]);
        assert!(verify_realization(&m, &g));
        let (g, m) = random_graphic_instance(seed, 5, 10, true).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (4, 6));
        let mut seen: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 10);
        assert!(verify_realization(&m, &g));
    }
}

#[test]
fn generator_rejects_impossible_shapes() {
    assert!(matches!(random_graphic_instance(1, 0, 0, false), Err(OracleError::Infeasible(_))));
    assert!(matches!(random_graphic_instance(1, 6, 4, false), Err(OracleError::Infeasible(_))));
    assert!(matches!(random_graphic_instance(1, 4, 7, true), Err(OracleError::Infeasible(_))));
    assert!(matches!(random_graphic_instance(1, 1, 1, false), Err(OracleError::Infeasible(_))));
    assert!(random_graphic_instance(1, 4, 9, false).is_ok());
}

#[test]
fn verification_catches_a_swapped_label() {
    let m = five_by_five();
    let mut w = oracle_is_graphic(&m).unwrap().witness.unwrap();
    assert!(verify_realization(&m, &w));
    for e in &mut w.edges {
        e.origin = match e.origin {
            Origin::Col(0) => Origin::Col(4),
            Origin::Col(4) => Origin::Col(0),
            o => o,
        };
    }
    assert!(!verify_realization(&m, &w));
    w.edges.pop();
    assert!(!verify_realization(&m, &w));
}

#[test]
fn twisted_graph_realizes_the_same_matrix() {
    let g = pair(6, &[(0, 2), (2, 3), (3, 1), (0, 4), (4, 5)], &[(5, 1), (0, 1)]);
    let twisted = pair(6, &[(0, 2), (2, 3), (3, 1), (1, 4), (4, 5)], &[(5, 0), (0, 1)]);
    let m = graphrec::spqr::representation_matrix(&g).unwrap();
    assert!(verify_realization(&m, &g));
    assert!(verify_realization(&m, &twisted));
}

#[test]
fn witnesses_of_connected_matrices_are_two_connected() {
    let mut checked = 0;
    for seed in 0..400 {
        let m = random_matrix(seed, 6, 6);
        let d = connected_blocks(&m);
        if d.blocks.len() != 1 || !d.zero_rows.is_empty() || !d.zero_cols.is_empty() {
            continue;
        }
        let v = oracle_is_graphic(&m).unwrap();
        assert_eq!(v.graphic, is_graphic(&m).graphic, "{:?}", m.rows());
        if let Some(w) = v.witness {
            let ends: Vec<[usize; 2]> = w.edges.iter().map(|e| [e.u, e.v]).collect();
            assert!(is_biconnected(w.num_vertices, &ends), "{:?}", m.rows());
            checked += 1;
        }
    }
    assert!(checked > 50);
}
