//! Truncated series arithmetic over exact rationals.

pub mod bivariate;
pub mod laurent;
pub mod multi;
pub mod power;

pub use bivariate::Bivariate;
pub use laurent::{Laurent, LaurentSeries, Ring};
pub use multi::{Alphabet, Exps, MultiSeries, TermJson};
pub use power::{PowerSeries, SeriesJson};
