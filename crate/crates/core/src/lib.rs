//! Enumeration of unitrivalent tree diagrams on colored legs, their link and
//! IHX relations, and exact quotient dimensions computed by modular rank.

pub mod basis;
pub mod counting;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod relations;
pub mod system;

pub use basis::{Basis, BasisSpec, Limits, Space};
pub use diagram::{canonicalize, CanonicalDiagram, Color, Diagram, Mode, Sign, TreeComponent};
pub use error::{Error, Result};
pub use linalg::{RankResult, SparseMatrix, DEFAULT_PRIMES};
pub use relations::{RelationRow, RelationSet};
pub use system::{compute, Outcome, System};

/// Version string recorded alongside cached results.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
