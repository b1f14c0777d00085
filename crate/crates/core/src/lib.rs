//! Torsion invariants of flat triangulated 3-manifolds and the edge-deviation
//! complex of triangulated 4-manifolds.

pub mod complex;
pub mod developing;
pub mod error;
pub mod fd;
pub mod format;
pub mod homology;
pub mod jacobians;
pub mod linalg;
pub mod metric;
pub mod pachner;
pub mod report;
pub mod torsion;
pub mod zoo;

pub use complex::{CellId, DeckGroup, Lift, SimplicialPreComplex};
pub use developing::{CoverPlacement, MetricTriangulation, Representation};
pub use error::{Error, Result};
pub use metric::MetricData;
