//! Fixed workloads shared by the benchmarks.

use symdisc_core::pointgen::{hammersley_symmetrized, vdc_symmetrized};
use symdisc_core::{Base, Permutation, PointMultiset, ScrambleSchedule};

pub fn base(b: u32) -> Base {
    Base::new(b).expect("valid base")
}

/// Symmetrized van der Corput prefix of length `count`.
pub fn vdc_sym(b: u32, count: u64) -> PointMultiset {
    vdc_symmetrized(base(b), count).expect("valid size")
}

/// Symmetrized Hammersley set with identity scrambling at every digit.
pub fn ham_sym(b: u32, n: usize) -> PointMultiset {
    let schedule = ScrambleSchedule::new(Permutation::identity(base(b)), vec![true; n]).expect("valid schedule");
    hammersley_symmetrized(base(b), n, &schedule).expect("valid size")
}
