pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{Basis, ExactMatrix, Field, Scalar, Span};
pub mod algebra;
pub use algebra::{Algebra, AlgebraElement, Cell, CellDatum, Poset};
pub mod alpha;
pub mod module;
pub use alpha::AlphaDatum;
pub use module::{CellModule, Side};
pub mod ingest;
pub mod repth;
pub mod relations;
pub mod report;
pub use report::Report;
