//! Analysis of four-term vertex recurrences
//! `p[j+m1] - p[j+m2] = w (p[j+k] - p[j])` on closed polygons, and of
//! polytopes whose vertices are cycled by a single isometry.
//!
//! The recurrence is a circulant linear system, so its solution space is
//! spanned by the Fourier polygons `v_t` whose eigenvalue vanishes. The
//! [`recurrence`] module enumerates those zero-sets and sorts them into the
//! terminal cases that decide whether every solution is regular, affinely
//! regular, or neither. [`polytope`] builds and verifies the higher
//! dimensional analogue: vertex sets with a cyclic symmetry, their Gram
//! projectors and the John conditions at the circumscribed sphere.

pub mod cyclotomic;
pub mod dd;
pub mod diagonal;
mod error;
pub mod formats;
pub mod modular;
pub mod polygon;
pub mod polytope;
pub mod recurrence;

pub use cyclotomic::{ComplexPolygon, Spectrum, C64};
pub use error::{Error, Result};
pub use polygon::{PolygonClass, PolygonLabel};
pub use polytope::{CyclicIsometry, FrequencySet, GramReport, PolytopeVertices};
pub use recurrence::{CaseLabel, CaseReport, RatioFamily, RecurrenceSpec, Verdict};
