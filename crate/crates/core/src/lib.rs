//! Exact enumeration toolkit for k-Dyck paths and k-non-crossing trees.
//!
//! Three independent routes to the same numbers are provided and
//! cross-checked by the test suites:
//!
//! * exhaustive generation of paths ([`path`]), butterfly trees ([`tree`])
//!   and geometric non-crossing trees ([`geometric`]);
//! * closed-form residue-class counts ([`formulas`]);
//! * a truncated multivariate power-series engine ([`series`]) solving the
//!   butterfly equation.
//!
//! [`bijection`] connects trees and paths and carries the edge statistic to
//! the down-step statistic.

pub mod arith;
pub mod bijection;
pub mod error;
pub mod formulas;
pub mod geometric;
pub mod path;
pub mod render;
pub mod series;
pub mod signature;
pub mod tree;
pub mod verify;

use num_bigint::BigInt;

pub use arith::{binomial, exact_div, BigCount};
pub use bijection::{
    decompose_bounded, path_to_tree, recombine, statistic_transport, tree_to_path,
    BoundedDecomposition,
};
pub use error::{Error, Result};
pub use formulas::{fuss_catalan, kdyck_count_bounded, kdyck_count_t0, nct_bivariate};
pub use geometric::{enumerate_geometric_ncts, GeometricNct};
pub use path::{enumerate_paths, KDyckPath, Step};
pub use series::{Coefficient, MultiPoly, ZSeries};
pub use signature::{EdgeClassHist, ResidueStats, Signature};
pub use tree::{enumerate_trees, KnctNode, KnctTree};

/// Marker polynomial with exact integer coefficients.
pub type BigPoly = MultiPoly<BigInt>;
/// Power series over [`BigPoly`].
pub type BigSeries = ZSeries<BigInt>;
/// Machine-word series, exact as long as nothing overflows.
pub type I64Series = ZSeries<i64>;
/// Wider machine-word series.
pub type I128Series = ZSeries<i128>;
