#![allow(dead_code)]

use graphrec::binmatrix::SparseBinaryMatrix;
use graphrec::spqr::{check_minimal, check_size_bounds, validate, SpqrForest};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rows a..e over columns f..j.
pub fn five_by_five() -> SparseBinaryMatrix {
    let rows = vec![vec![1, 2, 3], vec![0, 1], vec![0, 2, 3], vec![2, 3, 4], vec![3, 4]];
    let m = SparseBinaryMatrix::from_rows(5, rows).unwrap();
    let rl = "abcde".chars().map(String::from).collect();
    let cl = "fghij".chars().map(String::from).collect();
    m.with_labels(rl, cl).unwrap()
}

/// Rows a..f over columns g..o.
pub fn nine_column() -> SparseBinaryMatrix {
    let rows = vec![
        vec![0, 1, 3],
        vec![0, 1, 2, 3],
        vec![0, 1, 2, 4],
        vec![0, 1, 2, 5],
        vec![0, 1, 2, 6, 7, 8],
        vec![3],
    ];
    let m = SparseBinaryMatrix::from_rows(9, rows).unwrap();
    let rl = "abcdef".chars().map(String::from).collect();
    let cl = "ghijklmno".chars().map(String::from).collect();
    m.with_labels(rl, cl).unwrap()
}

/// The extra row over columns g, h, i, l, n, o.
pub fn extra_row() -> Vec<usize> {
    vec![0, 1, 2, 5, 7, 8]
}

/// `m` rows over three columns: (1,1,0), (1,0,1), then (1,0,0) repeated.
pub fn b_family(m: usize) -> SparseBinaryMatrix {
    let mut rows = vec![vec![0, 1], vec![0, 2]];
    rows.extend((2..m).map(|_| vec![0]));
    rows.truncate(m);
    SparseBinaryMatrix::from_rows(3, rows).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize) -> SparseBinaryMatrix {
    let m = rng.gen_range(1..=max_rows);
    let n = rng.gen_range(1..=max_cols);
    let p = [0.2, 0.35, 0.5, 0.7][rng.gen_range(0..4)];
    let rows = (0..m).map(|_| (0..n).filter(|_| rng.gen_bool(p)).collect()).collect();
    SparseBinaryMatrix::from_rows(n, rows).unwrap()
}

/// Validity, minimality and size bounds.
pub fn check_forest(forest: &mut SpqrForest) -> Result<(), String> {
    validate(forest).map_err(|v| v.to_string())?;
    if !check_minimal(forest) {
        return Err("forest is not minimal".into());
    }
    check_size_bounds(forest).map_err(|v| v.to_string())
}
