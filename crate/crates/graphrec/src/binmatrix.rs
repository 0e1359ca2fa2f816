//! Sparse binary matrices, text formats and the block decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unionfind::DisjointSets;

/// Immutable row-major 0/1 matrix.
///
/// Each row stores the strictly increasing list of column indices that hold
/// a one. Labels are carried for input and output only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseBinaryMatrix {
    num_rows: usize,
    num_cols: usize,
    rows: Vec<Vec<usize>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row}: column index {col} out of range (matrix has {num_cols} columns)")]
    ColumnOutOfRange { row: usize, col: usize, num_cols: usize },
    #[error("row {row}: duplicate entry in column {col}")]
    DuplicateEntry { row: usize, col: usize },
    #[error("label count mismatch: expected {expected}, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row supports in any order; duplicates are rejected.
    pub fn from_rows(num_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let mut out = Vec::with_capacity(rows.len());
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(MatrixError::DuplicateEntry { row: r, col: w[0] });
                }
            }
            if let Some(&c) = row.last() {
                if c >= num_cols {
                    return Err(MatrixError::ColumnOutOfRange { row: r, col: c, num_cols });
                }
            }
            out.push(row);
        }
        let num_rows = out.len();
        Ok(Self {
            num_rows,
            num_cols,
            rows: out,
            row_labels: default_labels('r', num_rows),
            col_labels: default_labels('c', num_cols),
        })
    }

    /// Builds a matrix from a dense 0/1 grid.
    pub fn from_dense(num_cols: usize, grid: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let rows = grid
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, _)| j).collect())
            .collect();
        Self::from_rows(num_cols, rows)
    }

    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        Self::from_rows(num_cols, vec![Vec::new(); num_rows]).expect("empty rows are valid")
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self, MatrixError> {
        if row_labels.len() != self.num_rows {
            return Err(MatrixError::LabelCount { expected: self.num_rows, got: row_labels.len() });
        }
        if col_labels.len() != self.num_cols {
            return Err(MatrixError::LabelCount { expected: self.num_cols, got: col_labels.len() });
        }
        for labels in [&row_labels, &col_labels] {
            let mut sorted: Vec<&String> = labels.iter().collect();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(MatrixError::DuplicateLabel(w[0].clone()));
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    /// True when both matrices have the same shape and the same nonzero set.
    pub fn same_entries(&self, other: &Self) -> bool {
        self.num_rows == other.num_rows && self.num_cols == other.num_cols && self.rows == other.rows
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.num_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        Self {
            num_rows: self.num_cols,
            num_cols: self.num_rows,
            rows: cols,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Rows `sel` in the given order, all columns kept.
    pub fn select_rows(&self, sel: &[usize]) -> Self {
        Self {
            num_rows: sel.len(),
            num_cols: self.num_cols,
            rows: sel.iter().map(|&r| self.rows[r].clone()).collect(),
            row_labels: sel.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: self.col_labels.clone(),
        }
    }

    /// Rows `rsel` and columns `csel`, both in the given order.
    pub fn submatrix(&self, rsel: &[usize], csel: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.num_cols];
        for (k, &c) in csel.iter().enumerate() {
            pos[c] = k;
        }
        let rows = rsel
            .iter()
            .map(|&r| {
                let mut v: Vec<usize> = self.rows[r].iter().filter(|&&c| pos[c] != usize::MAX).map(|&c| pos[c]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self {
            num_rows: rsel.len(),
            num_cols: csel.len(),
            rows,
            row_labels: rsel.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: csel.iter().map(|&c| self.col_labels[c].clone()).collect(),
        }
    }

    /// Column supports as row-index lists.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        self.transpose().rows
    }

    /// Block-diagonal stack of `self` above-left of `other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|row| row.iter().map(|&c| c + self.num_cols).collect()));
        Self::from_rows(self.num_cols + other.num_cols, rows).expect("direct sum of valid matrices")
    }
}

fn default_labels(prefix: char, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Supported text formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixFormat {
    /// Header `m n nnz`, then 1-based `row col` pairs.
    Coordinate,
    /// Whitespace-separated 0/1 grid, one line per row.
    Dense,
    /// Header `m n`, then one line per row with 1-based sorted column indices.
    RowList,
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coordinate" | "coo" | "mtx" => Ok(Self::Coordinate),
            "dense" => Ok(Self::Dense),
            "row-list" | "rowlist" | "rows" => Ok(Self::RowList),
            _ => Err(format!("unknown matrix format {s:?}")),
        }
    }
}

impl fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Coordinate => "coordinate",
            Self::Dense => "dense",
            Self::RowList => "row-list",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Non-comment lines with their 1-based line numbers. Lines starting with `%`
/// are Matrix-Market comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.starts_with('%'))
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| perr(line, format!("expected {what}, found {tok:?}")))
}

/// Parses a matrix from text. Entry order in the file is irrelevant.
pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<SparseBinaryMatrix, ParseError> {
    match format {
        MatrixFormat::Coordinate => parse_coordinate(text),
        MatrixFormat::Dense => parse_dense(text),
        MatrixFormat::RowList => parse_row_list(text),
    }
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, arity: usize) -> Result<(usize, Vec<usize>), ParseError> {
    let (ln, header) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| perr(1, "missing header line"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != arity {
        return Err(perr(ln, format!("malformed header: expected {arity} integers, found {}", toks.len())));
    }
    let vals = toks.iter().map(|t| parse_usize(ln, t, "a nonnegative integer")).collect::<Result<_, _>>()?;
    Ok((ln, vals))
}

fn parse_coordinate(text: &str) -> Result<SparseBinaryMatrix, ParseError> {
    let mut lines = content_lines(text);
    let (hln, h) = parse_header(&mut lines, 3)?;
    let (m, n, nnz) = (h[0], h[1], h[2]);
    let mut rows = vec![Vec::new(); m];
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for (ln, l) in lines {
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(perr(ln, "expected `row col`"));
        }
        let r = parse_usize(ln, toks[0], "a row index")?;
        let c = parse_usize(ln, toks[1], "a column index")?;
        if let Some(v) = toks.get(2) {
            let v = parse_usize(ln, v, "value 1")?;
            if v != 1 {
                return Err(perr(ln, format!("binary matrices only admit value 1, found {v}")));
            }
        }
        if r == 0 || r > m {
            return Err(perr(ln, format!("row index {r} out of range 1..={m}")));
        }
        if c == 0 || c > n {
            return Err(perr(ln, format!("column index {c} out of range 1..={n}")));
        }
        if !seen.insert((r, c)) {
            return Err(perr(ln, format!("duplicate entry ({r}, {c})")));
        }
        rows[r - 1].push(c - 1);
        count += 1;
    }
    if count != nnz {
        return Err(perr(hln, format!("header declares {nnz} entries but {count} were listed")));
    }
    Ok(SparseBinaryMatrix::from_rows(n, rows).expect("entries validated"))
}

fn parse_dense(text: &str) -> Result<SparseBinaryMatrix, ParseError> {
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    for (ln, l) in content_lines(text) {
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if let Some(w) = width {
            if toks.len() != w {
                return Err(perr(ln, format!("row has {} entries, expected {w}", toks.len())));
            }
        } else {
            width = Some(toks.len());
        }
        let mut row = Vec::new();
        for (j, t) in toks.iter().enumerate() {
            match *t {
                "0" => {}
                "1" => row.push(j),
                _ => return Err(perr(ln, format!("expected 0 or 1, found {t:?}"))),
            }
        }
        rows.push(row);
    }
    Ok(SparseBinaryMatrix::from_rows(width.unwrap_or(0), rows).expect("entries validated"))
}

fn parse_row_list(text: &str) -> Result<SparseBinaryMatrix, ParseError> {
    let mut lines = content_lines(text);
    let (hln, h) = parse_header(&mut lines, 2)?;
    let (m, n) = (h[0], h[1]);
    let mut rows = Vec::with_capacity(m);
    let mut last_ln = hln;
    for (ln, l) in lines {
        if rows.len() == m {
            if l.is_empty() {
                continue;
            }
            return Err(perr(ln, format!("more than the declared {m} rows")));
        }
        last_ln = ln;
        let mut row: Vec<usize> = Vec::new();
        for t in l.split_whitespace() {
            let c = parse_usize(ln, t, "a column index")?;
            if c == 0 || c > n {
                return Err(perr(ln, format!("column index {c} out of range 1..={n}")));
            }
            if let Some(&prev) = row.last() {
                if c - 1 == prev {
                    return Err(perr(ln, format!("duplicate entry in column {c}")));
                }
                if c - 1 < prev {
                    return Err(perr(ln, "column indices must be strictly increasing"));
                }
            }
            row.push(c - 1);
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(perr(last_ln, format!("header declares {m} rows but {} were listed", rows.len())));
    }
    Ok(SparseBinaryMatrix::from_rows(n, rows).expect("entries validated"))
}

/// Renders a matrix in the given format; parsing the output yields the same entries.
pub fn serialize_matrix(m: &SparseBinaryMatrix, format: MatrixFormat) -> String {
    let mut out = String::new();
    match format {
        MatrixFormat::Coordinate => {
            out.push_str(&format!("{} {} {}\n", m.num_rows, m.num_cols, m.nnz()));
            for (r, row) in m.rows.iter().enumerate() {
                for &c in row {
                    out.push_str(&format!("{} {}\n", r + 1, c + 1));
                }
            }
        }
        MatrixFormat::Dense => {
            for row in &m.rows {
                let mut line = vec!["0"; m.num_cols];
                for &c in row {
                    line[c] = "1";
                }
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        MatrixFormat::RowList => {
            out.push_str(&format!("{} {}\n", m.num_rows, m.num_cols));
            for row in &m.rows {
                let line: Vec<String> = row.iter().map(|c| (c + 1).to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
    }
    out
}

/// A connected component of the bipartite row/column incidence graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub row_indices: Vec<usize>,
    pub col_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
}

/// Connected components of the bipartite graph with adjacency `[[0, M], [Mᵀ, 0]]`.
///
/// Blocks are ordered by their smallest row index. All-zero rows and columns
/// are reported separately.
pub fn connected_blocks(m: &SparseBinaryMatrix) -> BlockDecomposition {
    let (nr, nc) = (m.num_rows, m.num_cols);
    let mut ds = DisjointSets::new();
    for _ in 0..nr + nc {
        ds.make_set();
    }
    let mut col_used = vec![false; nc];
    for (r, row) in m.rows.iter().enumerate() {
        for &c in row {
            ds.union(r, nr + c);
            col_used[c] = true;
        }
    }
    let mut block_of = vec![usize::MAX; nr + nc];
    let mut blocks: Vec<Block> = Vec::new();
    let mut zero_rows = Vec::new();
    for (r, row) in m.rows.iter().enumerate() {
        if row.is_empty() {
            zero_rows.push(r);
            continue;
        }
        let root = ds.find(r);
        if block_of[root] == usize::MAX {
            block_of[root] = blocks.len();
            blocks.push(Block { row_indices: Vec::new(), col_indices: Vec::new() });
        }
        blocks[block_of[root]].row_indices.push(r);
    }
    let mut zero_cols = Vec::new();
    for c in 0..nc {
        if !col_used[c] {
            zero_cols.push(c);
            continue;
        }
        let root = ds.find(nr + c);
        blocks[block_of[root]].col_indices.push(c);
    }
    BlockDecomposition { blocks, zero_rows, zero_cols }
}

/// A new row given by the sorted set of columns where it holds a one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowVector {
    pub support: Vec<usize>,
}

impl RowVector {
    pub fn new(mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        support.dedup();
        Self { support }
    }
}

/// The pieces of a row: one sub-support per touched block, plus the columns
/// that belong to no block yet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowPartition {
    pub parts: Vec<(usize, Vec<usize>)>,
    pub fresh: Vec<usize>,
}

pub fn partition_row(b: &RowVector, blocks: &[Block]) -> RowPartition {
    let mut owner = std::collections::HashMap::new();
    for (i, blk) in blocks.iter().enumerate() {
        for &c in &blk.col_indices {
            owner.insert(c, i);
        }
    }
    let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut fresh = Vec::new();
    for &c in &b.support {
        match owner.get(&c) {
            Some(&i) => match parts.iter_mut().find(|(j, _)| *j == i) {
                Some((_, v)) => v.push(c),
                None => parts.push((i, vec![c])),
            },
            None => fresh.push(c),
        }
    }
    parts.sort_by_key(|(i, _)| *i);
    RowPartition { parts, fresh }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_by_five() -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_rows(5, vec![vec![1, 2, 3], vec![0, 1], vec![0, 2, 3], vec![2, 3, 4], vec![3, 4]]).unwrap()
    }

    #[test]
    fn empty_coordinate_file() {
        let m = parse_matrix("0 0 0\n", MatrixFormat::Coordinate).unwrap();
        assert_eq!((m.num_rows(), m.num_cols(), m.nnz()), (0, 0, 0));
    }

    #[test]
    fn coordinate_order_is_irrelevant() {
        let a = parse_matrix("2 2 2\n1 1\n2 2\n", MatrixFormat::Coordinate).unwrap();
        let b = parse_matrix("%comment\n2 2 2\n2 2\n1 1\n", MatrixFormat::Coordinate).unwrap();
        assert!(a.same_entries(&b));
    }

    #[test]
    fn parse_errors_name_lines() {
        let e = parse_matrix("2 2 2\n1 1\n1 1\n", MatrixFormat::Coordinate).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix("2 2 1\n3 1\n", MatrixFormat::Coordinate).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_matrix("2 x 1\n", MatrixFormat::Coordinate).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_matrix("1 0\n0 2\n", MatrixFormat::Dense).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_matrix("2 3\n1 2\n3 3\n", MatrixFormat::RowList).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix("2 3\n1 2\n", MatrixFormat::RowList).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn round_trip_all_formats() {
        let m = five_by_five();
        for f in [MatrixFormat::Coordinate, MatrixFormat::Dense, MatrixFormat::RowList] {
            let back = parse_matrix(&serialize_matrix(&m, f), f).unwrap();
            assert!(back.same_entries(&m), "{f}");
        }
    }

    #[test]
    fn five_by_five_is_one_block() {
        let d = connected_blocks(&five_by_five());
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].row_indices.len(), 5);
        assert_eq!(d.blocks[0].col_indices.len(), 5);
    }

    #[test]
    fn stacked_copies_give_two_blocks() {
        let m = five_by_five().direct_sum(&five_by_five());
        assert_eq!(connected_blocks(&m).blocks.len(), 2);
    }

    #[test]
    fn identity_gives_singletons() {
        let m = SparseBinaryMatrix::from_rows(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let d = connected_blocks(&m);
        assert_eq!(d.blocks.len(), 3);
        for b in &d.blocks {
            assert_eq!((b.row_indices.len(), b.col_indices.len()), (1, 1));
        }
    }

    #[test]
    fn zero_lines_are_separate() {
        let m = SparseBinaryMatrix::from_rows(3, vec![vec![0], vec![], vec![0]]).unwrap();
        let d = connected_blocks(&m);
        assert_eq!(d.zero_rows, vec![1]);
        assert_eq!(d.zero_cols, vec![1, 2]);
        assert_eq!(d.blocks.len(), 1);
    }

    #[test]
    fn partition_examples() {
        let d = connected_blocks(&five_by_five());
        let p = partition_row(&RowVector::new(vec![0, 4]), &d.blocks);
        assert_eq!(p.parts, vec![(0, vec![0, 4])]);
        assert!(p.fresh.is_empty());
        let p = partition_row(&RowVector::new(vec![0, 5]), &d.blocks);
        assert_eq!(p.parts, vec![(0, vec![0])]);
        assert_eq!(p.fresh, vec![5]);
        let p = partition_row(&RowVector::new(vec![]), &d.blocks);
        assert!(p.parts.is_empty() && p.fresh.is_empty());
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(SparseBinaryMatrix::from_rows(2, vec![vec![2]]).is_err());
        assert!(SparseBinaryMatrix::from_rows(2, vec![vec![1, 1]]).is_err());
        let m = SparseBinaryMatrix::zeros(1, 1);
        assert!(m.with_labels(vec!["a".into()], vec!["a".into()]).is_ok());
        let m = SparseBinaryMatrix::zeros(2, 0);
        assert!(m.with_labels(vec!["a".into(), "a".into()], vec![]).is_err());
    }
}
