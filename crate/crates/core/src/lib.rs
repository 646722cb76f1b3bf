//! Exact arithmetic and diagram calculus for groups of piecewise-linear maps
//! of the unit interval with irrational slopes.

pub mod canonical;
pub mod diagram;
pub mod error;
pub mod parity;
pub mod perm;
pub mod plmap;
pub mod presentation;
pub mod random;
pub mod relators;
pub mod ring;
pub mod tree;
pub mod vbeta;
pub mod word;

pub use diagram::{BetaDiagram, Diagram, ElementClass, TreePairDiagram};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use ring::{Scalar, ZBeta, ZTau};
pub use tree::{Caret, CaretKind, CaretTree, TernaryCaret, TernaryCaretTree, Tree};
