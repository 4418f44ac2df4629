//! Random triangulations of the sphere and the flip Markov chain on them.

pub mod chain;
pub mod construct;
pub mod counting;
pub mod cycles;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod exploration;
pub mod map;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
pub use map::{CanonicalCode, Dart, MapKind, Triangulation};
