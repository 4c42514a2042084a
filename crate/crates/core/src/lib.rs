//! Verification toolkit for the planar harmonic oscillator, its chiral and
//! pseudo-chiral first-order modes, and the Jordan-Schwinger SU(2)/SU(1,1)
//! realizations they generate on truncated bosonic Fock spaces.
//!
//! The crate is organized in four layers:
//!
//! * [`fock`] — truncated multimode Fock spaces, ladder/position/momentum
//!   operators as dense complex matrices, and guarded-subspace residuals
//!   (identities involving k ladder factors are checked away from the cutoff
//!   boundary, where truncation artifacts live).
//! * [`lagrangian`] — quadratic Lagrangians `L = ½q̇ᵀKq̇ + q̇ᵀCq + ½qᵀVq`
//!   with a normal form modulo total time derivatives, linear coordinate
//!   maps, auxiliary-coordinate elimination, and the soldering construction
//!   that fuses opposite chiral modes into a second-order oscillator.
//!   Generic over the scalar so everything runs both in complex floating
//!   point and in exact Gaussian-rational arithmetic.
//! * [`dynamics`] — degenerate and regular Legendre transforms, canonical
//!   pairings and linear canonical maps, exact matrix-exponential
//!   integration of the induced linear flows, and conserved charges.
//! * [`jsalg`] — pseudo-chiral mode operators, the antiunitary metric
//!   `η = (−1)^{n₂} ∘ K` with its g-adjoint, the four algebra realizations,
//!   Casimir factorization checks, and spectra.

pub mod dynamics;
pub mod fock;
pub mod jsalg;
pub mod lagrangian;

/// Default residual threshold for operator-identity checks.
pub const TOL_ALGEBRA: f64 = 1e-12;
/// Default threshold for classifying a matrix as (anti-)hermitian.
pub const TOL_HERMITICITY: f64 = 1e-10;
/// Default bound on conserved-quantity drift along integrated flows.
pub const TOL_CONSERVATION: f64 = 1e-10;
/// Default bound on cross terms that must cancel in split Hamiltonians.
pub const TOL_CROSS_TERMS: f64 = 1e-14;
