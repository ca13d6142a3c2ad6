//! Tropical moduli spaces of weighted stable curves.

pub mod chambers;
pub mod cli;
pub mod complex;
pub mod datum;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod io;
pub mod losev_manin;
pub mod taut;

pub use datum::{Rational, WeightData};
pub use error::{Error, Result};
pub use graph::{AutomorphismGroup, CanonicalForm, ContractionMap, WeightedGraph};
