//! Stable graphs, decorated strata classes and their integrals.

pub mod census;
pub mod element;
pub mod graph;
pub mod integrate;

pub use element::{kappa_of_f, StrataElement};
pub use graph::{canonicalize, enumerate_stable_graphs, Decoration, StableGraph};
pub use integrate::{integrate, vertex_integral, AmbientMonomial};
