mod common;

use common::*;
use graphrec::augment::{is_graphic, maximal_graphic_rows};
use graphrec::binmatrix::{RowVector, SparseBinaryMatrix};
use graphrec::oracle::{oracle_is_graphic, verify_realization};
use graphrec::spqr::{NodeKind, SpqrForest};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kinds(forest: &mut SpqrForest) -> (usize, usize, usize, usize) {
    let s = forest.stats();
    (s.p_nodes, s.s_nodes, s.r_nodes, s.q_nodes)
}

#[test]
fn five_by_five_accepted_with_exact_certificate() {
    let m = five_by_five();
    let rep = is_graphic(&m);
    assert!(rep.graphic);
    assert!(verify_realization(&m, rep.certificate.as_ref().unwrap()));
}

#[test]
fn nine_column_tree_shape() {
    let mut rep = is_graphic(&nine_column());
    assert!(rep.graphic);
    assert_eq!(rep.stats.trees, 1);
    assert_eq!(kinds(&mut rep.forest), (4, 2, 1, 0));
    check_forest(&mut rep.forest).unwrap();
}

#[test]
fn extra_row_is_graphic() {
    let mut rep = is_graphic(&nine_column());
    assert!(rep.forest.add_row(&RowVector::new(extra_row())).unwrap());
    check_forest(&mut rep.forest).unwrap();
}

#[test]
fn every_row_keeps_the_forest_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let m = random_matrix(&mut rng, 6, 6);
        let mut f = SpqrForest::with_columns(m.num_cols());
        for (r, row) in m.rows().iter().enumerate() {
            let before = graphrec::spqr::to_json(&mut f);
            let ok = f.add_row(&RowVector::new(row.clone())).unwrap();
            if !ok {
                assert_eq!(before, graphrec::spqr::to_json(&mut f), "rejected row {r} changed the forest");
                break;
            }
            if let Err(e) = check_forest(&mut f) {
                panic!("after row {r} of {:?}: {e}", m.rows());
            }
        }
    }
}

#[test]
fn agrees_with_oracle_on_small_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..400 {
        let m = random_matrix(&mut rng, 5, 5);
        let ours = is_graphic(&m);
        let truth = oracle_is_graphic(&m).unwrap();
        assert_eq!(ours.graphic, truth.graphic, "{:?}", m.rows());
        if let Some(c) = &ours.certificate {
            assert!(verify_realization(&m, c), "{:?}", m.rows());
        }
    }
}

#[test]
fn maximal_rows_of_k33_dual() {
    let m = graphrec::oracle::derive_k33_dual();
    let rep = maximal_graphic_rows(&m);
    assert!(!rep.skipped.is_empty());
    assert!(verify_realization(&m.select_rows(&rep.kept), &relabel(&rep)));
    for &r in &rep.skipped {
        let mut sel = rep.kept.clone();
        sel.push(r);
        sel.sort_unstable();
        assert!(!oracle_is_graphic(&m.select_rows(&sel)).unwrap().graphic);
    }
}

fn relabel(rep: &graphrec::augment::MaximalReport) -> graphrec::spqr::GraphTreePair {
    let mut g = rep.certificate.clone();
    for e in &mut g.edges {
        if let graphrec::spqr::Origin::Row(r) = e.origin {
            e.origin = graphrec::spqr::Origin::Row(rep.kept.iter().position(|&k| k == r).unwrap());
        }
    }
    g
}

#[test]
fn kind_enum_is_exported() {
    assert_ne!(NodeKind::S, NodeKind::P);
}

#[test]
fn second_parallel_row_turns_a_q_node_into_a_triangle() {
    let mut f = SpqrForest::with_columns(1);
    assert!(f.add_row(&RowVector::new(vec![0])).unwrap());
    assert_eq!(kinds(&mut f), (0, 0, 0, 1));
    assert!(f.add_row(&RowVector::new(vec![0])).unwrap());
    assert_eq!(kinds(&mut f), (0, 1, 0, 0));
    let n = f.live_nodes()[0];
    assert_eq!(f.node_len(n), 3);
    check_forest(&mut f).unwrap();
}

#[test]
fn last_row_of_five_by_five_added_to_the_rest() {
    let m = five_by_five();
    let mut rep = is_graphic(&m.select_rows(&[0, 1, 2, 3]));
    assert!(rep.graphic);
    assert!(rep.forest.add_row(&RowVector::new(m.row(4).to_vec())).unwrap());
    check_forest(&mut rep.forest).unwrap();
    assert!(verify_realization(&m, &rep.forest.certificate().unwrap()));
}

#[test]
fn row_joining_two_blocks_and_a_new_column() {
    let m = SparseBinaryMatrix::from_rows(3, vec![vec![0], vec![1]]).unwrap();
    let mut rep = is_graphic(&m);
    assert_eq!(rep.stats.trees, 2);
    assert!(rep.forest.add_row(&RowVector::new(vec![0, 1, 2])).unwrap());
    check_forest(&mut rep.forest).unwrap();
    assert_eq!(rep.forest.stats().trees, 1);
    let bond = rep.forest.live_nodes().into_iter().find(|&n| rep.forest.kind(n) == NodeKind::P).unwrap();
    assert_eq!(rep.forest.node_len(bond), 4);
    let full = SparseBinaryMatrix::from_rows(3, vec![vec![0], vec![1], vec![0, 1, 2]]).unwrap();
    assert!(verify_realization(&full, &rep.forest.certificate().unwrap()));
}

#[test]
fn matrix_without_columns() {
    let m = SparseBinaryMatrix::zeros(3, 0);
    let rep = is_graphic(&m);
    assert!(rep.graphic);
    assert!(verify_realization(&m, rep.certificate.as_ref().unwrap()));
}

#[test]
fn unknown_column_is_an_error() {
    let mut f = SpqrForest::with_columns(2);
    assert!(f.add_row(&RowVector::new(vec![0, 2])).is_err());
    assert_eq!(f.num_rows(), 0);
}

#[test]
fn stacked_instance_skips_only_the_non_graphic_part() {
    let m = five_by_five().direct_sum(&graphrec::oracle::derive_k33_dual());
    let rep = maximal_graphic_rows(&m);
    assert!(!rep.skipped.is_empty());
    assert!(rep.skipped.iter().all(|&r| r >= 5));
    assert!((0..5).all(|r| rep.kept.contains(&r)));
    assert!(verify_realization(&m.select_rows(&rep.kept), &relabel(&rep)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_ignores_row_and_column_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, 6, 7);
        let mut rp: Vec<usize> = (0..m.num_rows()).collect();
        let mut cp: Vec<usize> = (0..m.num_cols()).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let p = m.submatrix(&rp, &cp);
        let (a, b) = (is_graphic(&m), is_graphic(&p));
        prop_assert_eq!(a.graphic, b.graphic);
        if let Some(c) = &b.certificate {
            prop_assert!(verify_realization(&p, c));
        }
    }
}
