//! Symmetrized low-discrepancy point sets and their b-adic Haar analysis.

pub mod bounds;
pub mod coeffs;
pub mod error;
pub mod haar;
pub mod io;
pub mod norms;
pub mod pointgen;
pub mod sum;

pub use error::{Error, Result};
pub use haar::{ComplexValue, HaarIndex, HaarIndex1D, HaarIndex2D};
pub use norms::{BesovParams, Exponent, NormReport};
pub use pointgen::{Base, Coord, Label, Permutation, PermutationKind, PointMultiset, RationalPoint, ScheduleSpec, ScrambleSchedule};
