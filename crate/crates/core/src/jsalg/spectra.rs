//! Spectral tables for the planar Hamiltonians and the pseudo-chiral split.
//!
//! Three Hamiltonians matter here:
//!
//! * the direct sum `H_D = ½(p₁² + p₂²) + ½ω²(x₁² + x₂²)`, reported with
//!   its zero-point energy ω deducted so the guarded spectrum is exactly
//!   `ω·(n₁ + n₂)`;
//! * the indirect (hyperbolic) combination
//!   `H_I = ½(p₁² + ω²x₁²) − ½(p₂² + ω²x₂²)`, whose guarded spectrum is
//!   `ω·(n₁ − n₂)` — unbounded in both directions;
//! * the pseudo-chiral halves `𝓗₊ = ω ãa` and `𝓗₋ = ω b̃b` with
//!   `H_I = 𝓗₊ + 𝓗₋` up to the zero-point bookkeeping.
//!
//! `H_D` and `H_I` are hermitian, so their guarded restrictions are
//! diagonalized directly. The halves `𝓗_±` are *not* hermitian and their
//! truncated matrices are not normal: spurious complex eigenvalues appear
//! at any finite cutoff, and projecting the matrix does not remove them
//! (the restriction of a non-normal matrix keeps boundary contamination in
//! its spectrum). Their ladder structure is therefore certified through
//! operator identities instead: the residuals of `𝓗₊ = ½(p₊² + ω²x₊²) − ω/2`
//! and `[𝓗₊, ã] = ω ã` (and the `−` partners) vanish on the guarded
//! subspace, which pins the spectrum to the oscillator ladder `ω·{0, 1, …}`
//! exactly as the diagonal form says, while the η-pseudo-hermiticity
//! relations `η 𝓗_± η⁻¹ = 𝓗_±† = 𝓗_∓` hold exactly even at the boundary.

use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::fock::{
    commutator, identity, position_momentum, residual_on_subspace, FockSpace, OperatorMatrix,
    ProjectedSubspace,
};

use super::eta::build_eta;
use super::modes::build_pseudochiral_modes;
use super::JsAlgebraError;

/// A group of (numerically) coincident eigenvalues.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralCluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Sorted guarded spectrum of one hermitian Hamiltonian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub label: String,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<SpectralCluster>,
    /// Largest distance from any eigenvalue to the nearest integer
    /// multiple of ω.
    pub max_deviation_from_ladder: f64,
}

/// Residual bookkeeping for the non-hermitian pseudo-chiral halves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudoModeSection {
    /// The ladder `ω·{0, 1, …, N−1}` certified by the identities below.
    pub nominal_ladder: Vec<f64>,
    /// Guarded residual of `ω ãa = ½(p₊² + ω²x₊²) − ω/2`.
    pub plus_identity_residual: f64,
    /// Guarded residual of `ω b̃b = ½(p₋² + ω²x₋²) − ω/2`.
    pub minus_identity_residual: f64,
    /// Guarded residual of the ladder relation `[𝓗₊, ã] = ω ã`.
    pub plus_ladder_residual: f64,
    /// Guarded residual of the ladder relation `[𝓗₋, b̃] = ω b̃`.
    pub minus_ladder_residual: f64,
    /// Full-space residual of `η 𝓗₊ η⁻¹ = 𝓗₊†` (exact, no guard).
    pub pseudo_hermiticity_plus: f64,
    /// Full-space residual of `η 𝓗₋ η⁻¹ = 𝓗₋†` (exact, no guard).
    pub pseudo_hermiticity_minus: f64,
    /// Full-space residual of `𝓗₊† = 𝓗₋` (exact, no guard).
    pub adjoint_swap_residual: f64,
    /// Full-space residual of `H_I = 𝓗₊ + 𝓗₋` in the canonical
    /// `½(p² + ω²x²)` forms, whose zero points cancel.
    pub canonical_split_residual: f64,
    /// The constant by which the number forms differ from `H_I`:
    /// `H_I = ω ãa + ω b̃b + ω`.
    pub zero_point_shift: f64,
    /// Guarded residual of `H_I = ω ãa + ω b̃b + ω` after the shift.
    pub number_split_residual: f64,
}

/// Guarded spectra of the direct and indirect Hamiltonians plus the
/// pseudo-chiral residual section.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub cutoff: usize,
    pub guard: usize,
    pub omega: f64,
    pub h_direct: SpectrumTable,
    pub h_indirect: SpectrumTable,
    pub pseudo_modes: PseudoModeSection,
}

fn spectrum_table(
    label: &str,
    h: &OperatorMatrix,
    sub: &ProjectedSubspace,
    omega: f64,
) -> SpectrumTable {
    let restricted = sub.restrict(h.entries());
    let eigen = nalgebra::SymmetricEigen::new(restricted);
    let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);

    let cluster_tol = 1e-8 * omega.abs().max(1.0);
    let mut clusters: Vec<SpectralCluster> = Vec::new();
    for &lambda in &eigenvalues {
        match clusters.last_mut() {
            Some(c) if (lambda - c.value).abs() < cluster_tol => {
                // Running mean keeps the representative centered.
                c.value = (c.value * c.multiplicity as f64 + lambda) / (c.multiplicity + 1) as f64;
                c.multiplicity += 1;
            }
            _ => clusters.push(SpectralCluster {
                value: lambda,
                multiplicity: 1,
            }),
        }
    }

    let max_deviation_from_ladder = eigenvalues
        .iter()
        .map(|&lambda| (lambda - omega * (lambda / omega).round()).abs())
        .fold(0.0, f64::max);

    SpectrumTable {
        label: label.to_string(),
        eigenvalues,
        clusters,
        max_deviation_from_ladder,
    }
}

/// Compute the spectrum report on the guarded subspace with the given guard.
///
/// Guard 1 is enough for the quadratic Hamiltonian tables; the identity
/// residuals in the pseudo-chiral section involve up to three ladder
/// bilinears and are reported at the same guard, so prefer guard ≥ 1.
pub fn spectra(space: &FockSpace, guard: usize) -> Result<SpectrumReport, JsAlgebraError> {
    if space.n_modes() != 2 {
        return Err(JsAlgebraError::WrongModeCount(space.n_modes()));
    }
    let omega = space.omega();
    let sub = ProjectedSubspace::new(space, guard)?;

    let (x1, p1) = position_momentum(space, 0)?;
    let (x2, p2) = position_momentum(space, 1)?;
    let half = Complex64::new(0.5, 0.0);
    let w2half = Complex64::new(0.5 * omega * omega, 0.0);
    let h1 = &(&p1 * &p1).scaled(half) + &(&x1 * &x1).scaled(w2half);
    let h2 = &(&p2 * &p2).scaled(half) + &(&x2 * &x2).scaled(w2half);

    let one = identity(space);
    let h_direct = &(&h1 + &h2) - &one.scaled(Complex64::new(omega, 0.0));
    let h_indirect = &h1 - &h2;

    let direct_table = spectrum_table("H_direct", &h_direct, &sub, omega);
    let indirect_table = spectrum_table("H_indirect", &h_indirect, &sub, omega);

    // Pseudo-chiral halves.
    let m = build_pseudochiral_modes(space)?;
    let eta = build_eta(space)?;
    let h_plus_canonical =
        &(&m.p_plus * &m.p_plus).scaled(half) + &(&m.x_plus * &m.x_plus).scaled(w2half);
    let h_minus_canonical =
        &(&m.p_minus * &m.p_minus).scaled(half) + &(&m.x_minus * &m.x_minus).scaled(w2half);
    let omega_c = Complex64::new(omega, 0.0);
    let h_plus_number = (&m.a_tilde * &m.a).scaled(omega_c);
    let h_minus_number = (&m.b_tilde * &m.b).scaled(omega_c);
    let half_omega = one.scaled(Complex64::new(0.5 * omega, 0.0));

    let plus_identity_residual = residual_on_subspace(
        &h_plus_number,
        &(&h_plus_canonical - &half_omega),
        &sub,
    )?;
    let minus_identity_residual = residual_on_subspace(
        &h_minus_number,
        &(&h_minus_canonical - &half_omega),
        &sub,
    )?;

    let plus_ladder_residual = residual_on_subspace(
        &commutator(&h_plus_number, &m.a_tilde)?,
        &m.a_tilde.scaled(omega_c),
        &sub,
    )?;
    let minus_ladder_residual = residual_on_subspace(
        &commutator(&h_minus_number, &m.b_tilde)?,
        &m.b_tilde.scaled(omega_c),
        &sub,
    )?;

    let pseudo_hermiticity_plus = (eta.conjugate_operator(&h_plus_canonical)?.entries()
        - h_plus_canonical.dagger().entries())
    .norm();
    let pseudo_hermiticity_minus = (eta.conjugate_operator(&h_minus_canonical)?.entries()
        - h_minus_canonical.dagger().entries())
    .norm();
    let adjoint_swap_residual =
        (h_plus_canonical.dagger().entries() - h_minus_canonical.entries()).norm();

    let canonical_split_residual =
        (h_indirect.entries() - (&h_plus_canonical + &h_minus_canonical).entries()).norm();
    let number_split_residual = residual_on_subspace(
        &h_indirect,
        &(&(&h_plus_number + &h_minus_number) + &one.scaled(omega_c)),
        &sub,
    )?;

    let pseudo_modes = PseudoModeSection {
        nominal_ladder: (0..space.cutoff()).map(|n| omega * n as f64).collect(),
        plus_identity_residual,
        minus_identity_residual,
        plus_ladder_residual,
        minus_ladder_residual,
        pseudo_hermiticity_plus,
        pseudo_hermiticity_minus,
        adjoint_swap_residual,
        canonical_split_residual,
        zero_point_shift: omega,
        number_split_residual,
    };

    Ok(SpectrumReport {
        cutoff: space.cutoff(),
        guard: sub.guard(),
        omega,
        h_direct: direct_table,
        h_indirect: indirect_table,
        pseudo_modes,
    })
}
