//! Bound states of the double and infinite square wells, their two-level
//! tunneling dynamics, and the information-theoretic measures (Shannon,
//! Fisher, disequilibrium, LMC complexity, Rényi) of the evolving position
//! and momentum densities.

pub mod eigensolver;
pub mod infomeasures;
pub mod numerics;
pub mod potentials;
pub mod quantum_state;
pub mod wavefunction;
