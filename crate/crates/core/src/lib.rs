//! Simulation toolkit for quantum 2-SAT (Q2SAT) instances whose clauses all
//! project onto the same two-qubit state α|10⟩ + β|01⟩.
//!
//! The toolkit builds the projector Hamiltonian H₀ = Δ Σⱼ Πⱼ of an instance,
//! computes its ground space and spectral gap sector by sector, integrates the
//! time-dependent Schrödinger equation along a closed single-qubit rotation of
//! all spins, and compares the outcome against the Wilczek–Zee holonomy acting
//! inside the degenerate ground manifold. Ensemble drivers reproduce the
//! gap-scaling statistics of random constraint graphs.
//!
//! # Conventions
//!
//! Fixed across every module (tests rely on them):
//!
//! * Basis state index `r` in `[0, 2^n)`: **bit `a` of `r` is qubit `a`**, and
//!   bit value 1 means |1⟩. The trivial product solutions are the indices `0`
//!   (all |0⟩) and `2^n − 1` (all |1⟩).
//! * Spin: |0⟩ is the sᶻ = +1/2 eigenstate, so sᶻ = diag(+1/2, −1/2) and
//!   s⁺|1⟩ = |0⟩.
//! * ħ = 1; energies in units of Δ; times in units of 1/Δ.
//! * The adiabatic rotation conjugates by R(t) = ⊗ₐ exp(+iθ(t) s^n̂ₐ) with
//!   θ(t) = 2πt/T, i.e. each spin operator evolves as
//!   s(t) = R(t) s R(t)†. At t = T the frame closes up to the global phase
//!   (−1)ⁿ and H(T) = H₀ exactly.
//! * Random ensembles draw from `ChaCha8Rng::seed_from_u64(seed)`, one `f64`
//!   draw per unordered qubit pair in lexicographic order; an edge (a, b) with
//!   a < b is kept when the draw is `< d`. This stream is platform-independent
//!   and pinned by a regression test.

pub mod chain;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod holonomy;
pub mod instance;
pub mod parallel;
pub mod sector;
pub mod sparse;
pub mod spectrum;
pub mod state;

pub use error::Error;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Result alias for fallible toolkit operations.
pub type Result<T> = std::result::Result<T, Error>;

/// Formats a float with 17 significant digits, the on-disk format for every
/// numeric field in instance files and experiment outputs.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}
