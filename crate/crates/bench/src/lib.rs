//! Shared fixtures for the criterion benchmarks in `benches/`.

use dwell_core::potentials::{DswpParams, IswpParams, PhysicalConstants};
use dwell_core::quantum_state::{make_superposition, Pair, Side, SuperpositionState, System};

/// Ground-pair superposition of the default potential, mass on the left.
pub fn default_state(system: System) -> SuperpositionState {
    make_superposition(system, Pair::Ground, Side::Left, &DswpParams::default(), &IswpParams::default(), &PhysicalConstants::default())
        .expect("default parameters give a bound doublet")
}
