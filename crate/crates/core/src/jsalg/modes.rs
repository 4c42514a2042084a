//! Pseudo-chiral mode operators on a two-mode space.
//!
//! Starting from the planar chart `(x₁, p₁, x₂, p₂)`, form the complex
//! first-order combinations
//!
//! ```text
//! p_± = (p₁ ± iω x₂)/√2,        x_± = (x₁ ± i p₂/ω)/√2,
//! ```
//!
//! and from each `±` sector a ladder pair
//!
//! ```text
//! a = √(ω/2)(x₊ + i p₊/ω),      ã = √(ω/2)(x₊ − i p₊/ω),
//! b = √(ω/2)(x₋ + i p₋/ω),      b̃ = √(ω/2)(x₋ − i p₋/ω).
//! ```
//!
//! In terms of the original mode ladders these collapse to
//! `a = (a₁ − a₂†)/√2`, `ã = (a₁† + a₂)/√2`, `b = (a₁ + a₂†)/√2`,
//! `b̃ = (a₁† − a₂)/√2`, which makes two things manifest: `ã ≠ a†`, and
//! nevertheless `[a, ã] = [b, b̃] = 1` with all cross pairs commuting.
//! On the truncated space the unit commutators and `[a, b̃]`, `[ã, b]`
//! acquire boundary defects and hold only on the guarded subspace, while
//! `[a, b]` and `[ã, b̃]` cancel identically even at the boundary.

use num_complex::Complex64;

use crate::fock::{
    commutator, identity, position_momentum, residual_on_subspace, zero, FockSpace, OperatorMatrix,
    ProjectedSubspace,
};

use super::JsAlgebraError;

/// The pseudo-chiral chart and its ladder operators.
#[derive(Debug, Clone)]
pub struct PseudoChiralModes {
    space: FockSpace,
    pub x_plus: OperatorMatrix,
    pub p_plus: OperatorMatrix,
    pub x_minus: OperatorMatrix,
    pub p_minus: OperatorMatrix,
    pub a: OperatorMatrix,
    pub a_tilde: OperatorMatrix,
    pub b: OperatorMatrix,
    pub b_tilde: OperatorMatrix,
}

impl PseudoChiralModes {
    pub fn space(&self) -> &FockSpace {
        &self.space
    }
}

/// Build the pseudo-chiral chart and ladder pairs on a two-mode space.
pub fn build_pseudochiral_modes(space: &FockSpace) -> Result<PseudoChiralModes, JsAlgebraError> {
    if space.n_modes() != 2 {
        return Err(JsAlgebraError::WrongModeCount(space.n_modes()));
    }
    let omega = space.omega();
    let (x1, p1) = position_momentum(space, 0)?;
    let (x2, p2) = position_momentum(space, 1)?;

    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i_omega = Complex64::new(0.0, omega);
    let i_over_omega = Complex64::new(0.0, 1.0 / omega);

    let p_plus = (&p1 + &x2.scaled(i_omega)).scaled(inv_sqrt2).relabel("p_plus");
    let p_minus = (&p1 - &x2.scaled(i_omega)).scaled(inv_sqrt2).relabel("p_minus");
    let x_plus = (&x1 + &p2.scaled(i_over_omega)).scaled(inv_sqrt2).relabel("x_plus");
    let x_minus = (&x1 - &p2.scaled(i_over_omega)).scaled(inv_sqrt2).relabel("x_minus");

    let root = Complex64::new((omega / 2.0).sqrt(), 0.0);
    let ladder = |x: &OperatorMatrix, p: &OperatorMatrix, sign: f64, label: &str| {
        (x + &p.scaled(Complex64::new(0.0, sign / omega))).scaled(root).relabel(label)
    };
    let a = ladder(&x_plus, &p_plus, 1.0, "a");
    let a_tilde = ladder(&x_plus, &p_plus, -1.0, "a_tilde");
    let b = ladder(&x_minus, &p_minus, 1.0, "b");
    let b_tilde = ladder(&x_minus, &p_minus, -1.0, "b_tilde");

    Ok(PseudoChiralModes {
        space: *space,
        x_plus,
        p_plus,
        x_minus,
        p_minus,
        a,
        a_tilde,
        b,
        b_tilde,
    })
}

/// One commutation relation of the pseudo-chiral pairs, with its residual on
/// the full truncated space and on the guarded subspace. Relations built
/// from same-mode ladder products pick up truncation defects at the
/// boundary, so `full_residual` can be O(cutoff) while `guarded_residual`
/// vanishes; relations that cancel structurally are zero in both columns.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ModeRelation {
    pub name: String,
    pub full_residual: f64,
    pub guarded_residual: f64,
}

/// Check the pseudo-chiral ladder algebra
/// `[a, ã] = [b, b̃] = 1`, all cross pairs commuting.
pub fn pseudo_mode_relations(
    modes: &PseudoChiralModes,
    guard: usize,
) -> Result<Vec<ModeRelation>, JsAlgebraError> {
    let sub = ProjectedSubspace::new(&modes.space, guard)?;
    let one = identity(&modes.space);
    let zero_op = zero(&modes.space);

    let checks = [
        ("[a, a_tilde] - 1", commutator(&modes.a, &modes.a_tilde)?, &one),
        ("[b, b_tilde] - 1", commutator(&modes.b, &modes.b_tilde)?, &one),
        ("[a, b]", commutator(&modes.a, &modes.b)?, &zero_op),
        ("[a, b_tilde]", commutator(&modes.a, &modes.b_tilde)?, &zero_op),
        ("[a_tilde, b]", commutator(&modes.a_tilde, &modes.b)?, &zero_op),
        ("[a_tilde, b_tilde]", commutator(&modes.a_tilde, &modes.b_tilde)?, &zero_op),
    ];

    let mut out = Vec::with_capacity(checks.len());
    for (name, lhs, rhs) in &checks {
        out.push(ModeRelation {
            name: (*name).to_string(),
            full_residual: (lhs.entries() - rhs.entries()).norm(),
            guarded_residual: residual_on_subspace(lhs, rhs, &sub)?,
        });
    }
    Ok(out)
}
