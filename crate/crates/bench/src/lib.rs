//! Workloads shared by the benchmarks and their smoke test.

use tannaka_core::bar::{bar_complex, BarBound, BarComplex, BarError};
use tannaka_core::fixtures::{dual_numbers, exterior_pair, truncated_polynomial, two_generator_mixed_tate};
use tannaka_core::AugmentedDGA;

/// A named bar construction to time.
pub struct Workload {
    pub name: &'static str,
    pub algebra: AugmentedDGA,
    pub bound: BarBound,
}

impl Workload {
    pub fn run(&self) -> Result<BarComplex, BarError> {
        bar_complex(&self.algebra, None, self.bound)
    }
}

pub fn workloads() -> Vec<Workload> {
    vec![
        Workload { name: "dual-numbers-cap7", algebra: dual_numbers(), bound: BarBound::WordLength(7) },
        Workload { name: "quartic-cap6", algebra: truncated_polynomial(4), bound: BarBound::WordLength(6) },
        Workload { name: "quartic-cap7", algebra: truncated_polynomial(4), bound: BarBound::WordLength(7) },
        Workload { name: "exterior-pair-w8", algebra: exterior_pair(), bound: BarBound::Weight(8) },
        Workload { name: "square-zero-w12", algebra: two_generator_mixed_tate(), bound: BarBound::Weight(12) },
    ]
}
