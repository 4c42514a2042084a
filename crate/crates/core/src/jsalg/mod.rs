//! Jordan-Schwinger realizations of su(2) and su(1,1) on a two-mode
//! truncated Fock space.
//!
//! The module provides four layers:
//!
//! * [`build_pseudochiral_modes`] — the first-order chart
//!   `p_± = (p₁ ± iω x₂)/√2`, `x_± = (x₁ ± i p₂/ω)/√2` and the
//!   pseudo-chiral ladder pairs `(a, ã)`, `(b, b̃)` it generates. The tilde
//!   operators are *not* hermitian adjoints, yet `[a, ã] = [b, b̃] = 1`
//!   away from the truncation boundary, so they form genuine (non-hermitian)
//!   oscillator algebras.
//! * [`build_eta`] — the antiunitary similarity `η = (−1)^{n₂} ∘ K`
//!   (mode-2 parity composed with Fock-basis complex conjugation), the
//!   g-adjoint `O‡ = η⁻¹O†η` it induces, and the indefinite inner product
//!   `⟨⟨ψ|φ⟩⟩ = ⟨ηψ|φ⟩`. Under the g-adjoint the tilde operators *are*
//!   the adjoints of the untilded ones.
//! * [`build_realization`] / [`check_algebra`] — the four bilinear
//!   realizations (`su2_js`, `su11_pseudochiral`,
//!   `su11_pseudochiral_hermitian_map`, `su11_standard`), their commutation
//!   relations, hermiticity classification of the components, and Casimir
//!   factorization including the one realization where it fails.
//! * [`spectra`] — guarded eigenvalue tables for the direct and indirect
//!   (hyperbolic) Hamiltonians and residual bookkeeping for the
//!   pseudo-chiral split `H_I = 𝓗₊ + 𝓗₋`.

mod eta;
mod modes;
mod realization;
mod spectra;

pub use eta::{build_eta, g_adjoint, g_inner_product, AntiunitaryOperator};
pub use modes::{build_pseudochiral_modes, pseudo_mode_relations, ModeRelation, PseudoChiralModes};
pub use realization::{
    build_realization, casimir_factorization, casimir_witness, check_algebra, AlgebraRealization,
    AlgebraReport, CasimirReport, HermiticityReport, RealizationName, RelationEntry,
};
pub use spectra::{spectra, PseudoModeSection, SpectralCluster, SpectrumReport, SpectrumTable};

use crate::fock::FockError;
use thiserror::Error;

/// Errors from the algebra-realization layer.
#[derive(Debug, Error)]
pub enum JsAlgebraError {
    #[error("the pseudo-chiral construction needs exactly 2 modes, got {0}")]
    WrongModeCount(usize),
    #[error("operator lives on a different space than the similarity ({0} vs {1})")]
    SpaceMismatch(String, String),
    #[error("state vector has length {got}, expected the space dimension {expected}")]
    StateLength { got: usize, expected: usize },
    #[error("antiunitary similarity failed its defining relation {relation}: residual {residual:.3e}")]
    EtaVerification { relation: String, residual: f64 },
    #[error(
        "unknown realization `{0}` (expected su2_js, su11_pseudochiral, \
         su11_pseudochiral_hermitian_map, or su11_standard)"
    )]
    UnknownRealization(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}
