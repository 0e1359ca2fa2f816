//! Recognition of graphic binary matrices by row-wise augmentation of a
//! minimal SPQR forest.
//!
//! A binary matrix is graphic when it is the representation matrix of some
//! graph and spanning tree: rows are tree edges, columns are non-tree edges,
//! and each column marks the tree path between its endpoints. Rows are added
//! one at a time; each accepted row updates the forest so that it describes
//! every realization of the matrix seen so far.
//!
//! ```
//! use graphrec::{augment::is_graphic, binmatrix::SparseBinaryMatrix};
//!
//! let m = SparseBinaryMatrix::from_rows(3, vec![vec![0, 1], vec![0, 2], vec![0]]).unwrap();
//! let report = is_graphic(&m);
//! assert!(report.graphic);
//! ```

pub mod augment;
pub mod binmatrix;
pub mod oracle;
pub mod reduce;
pub mod splittable;
pub mod spqr;
pub mod unionfind;

pub use augment::{is_graphic, maximal_graphic_rows, GraphicReport, MaximalReport};
pub use binmatrix::{parse_matrix, serialize_matrix, MatrixFormat, SparseBinaryMatrix};
pub use oracle::{oracle_is_graphic, OracleVerdict};
pub use spqr::{representation_matrix, GraphTreePair, SpqrForest};
