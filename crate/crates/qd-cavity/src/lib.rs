//! Steady-state simulator for a driven quantum-dot-microcavity system and
//! the polarization entanglement of the photon pairs it emits.
//!
//! The model is a four-level quantum dot (ground, two circularly polarized
//! excitons, biexciton) coupled to two polarized cavity modes, driven by two
//! CW lasers and damped by exciton/biexciton decay and cavity leakage. The
//! crate builds the truncated product basis and Hamiltonian ([`basis`],
//! [`model`]), analyzes the dressed-state ladder ([`dressed`]), solves the
//! Lindblad master equation for the steady state ([`lindblad`]), extracts the
//! two-photon polarization density matrix of the cascade emission and its
//! entanglement ([`pairs`]), and drives parameter sweeps over all of it
//! ([`sweep`]).
//!
//! Units: the cavity leak rate `Γ = 1` throughout; energies are detunings
//! from the exciton line `ε₀` unless an explicit `eps0` is supplied.

pub mod basis;
pub mod dressed;
pub mod error;
pub mod lindblad;
pub mod model;
pub mod pairs;
pub mod sweep;

pub use basis::{build_basis, BasisState, Operator, Polarization, ProductBasis, QdLevel};
pub use dressed::{
    cubic_shifts, diagonalize_manifolds, g_minus, transition_table, DressedLabel, DressedState,
    TransitionTable,
};
pub use error::{Error, Result};
pub use lindblad::{
    build_liouvillian, collapse_channels, shell_population, steady_state, CollapseChannel,
    Liouvillian, SteadyState,
};
pub use model::{build_drive, build_h0, rotating_frame_hamiltonian, ModelParams};
pub use pairs::{
    build_transition_operator, build_transition_operators, concurrence, eof, eof_from_concurrence,
    pair_density_matrix, photon_frequencies, CascadeBranch, PairDensityMatrix,
};
pub use sweep::{
    dressed_scan, evaluate_point, evaluate_point_detailed, resolve_model, run_sweep,
    write_dressed_scan_csv, write_sweep_csv, Axis, PointDetail, PointRecord, PointStatus,
    SweepConfig, SweepResult,
};

/// Pin faer to sequential execution, once per process.
///
/// faer otherwise parallelizes inside whatever rayon pool is ambient, and the
/// resulting reduction order makes solves/eigendecompositions vary in the last
/// bits with the worker count. Results must be bitwise reproducible regardless
/// of `--workers`, and sweep throughput comes from parallelism *across* grid
/// points, so every linear-algebra entry point routes through here first.
pub(crate) fn ensure_sequential_linalg() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}
