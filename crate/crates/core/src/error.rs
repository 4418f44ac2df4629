use thiserror::Error;

use crate::map::{Dart, Violation};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invariant violated: {0}")]
    Invalid(#[from] Violation),
    #[error("malformed map file: {0}")]
    Malformed(String),
    #[error("dart {0} is not a dart of this map")]
    NoSuchDart(Dart),
    #[error("operation requires a sphere triangulation")]
    NotSphere,
    #[error("operation requires a triangulation with a boundary")]
    NotBoundary,
    #[error("perimeters differ: {0} vs {1}")]
    PerimeterMismatch(usize, usize),
    #[error("no triangulation with {inner} inner vertices and perimeter {perimeter}")]
    EmptyClass { inner: usize, perimeter: usize },
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("not a simple cycle: {0}")]
    NotSimpleCycle(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
