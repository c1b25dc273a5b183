//! Polar degree of projective hypersurfaces.
//!
//! Two independent routes to `pol(V)`, the topological degree of the
//! gradient map of a homogeneous polynomial:
//!
//! * [`formula`] evaluates closed-form expressions in the Milnor data of the
//!   singular locus (isolated points, singular curves with their transversal
//!   type, and special points on those curves);
//! * [`oracle`] counts the regular points of a generic fiber of the gradient
//!   map numerically, by total-degree homotopy continuation.
//!
//! [`catalog`] holds the regression fixtures (cubic surfaces and worked
//! examples) that exercise both routes against each other.

pub mod catalog;
pub mod formula;
pub mod oracle;
pub mod poly;

pub use catalog::{Catalog, CatalogEntry, Suite};
pub use formula::{FormulaError, PolResult, SingularityProfile};
pub use oracle::{OracleError, OracleReport, TrackerConfig};
pub use poly::{parse, Polynomial};
