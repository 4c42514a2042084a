//! The antiunitary similarity `η` and the g-adjoint structure it induces.
//!
//! `η = U ∘ K` where `U = (−1)^{n₂}` is the parity of the second mode and
//! `K` is complex conjugation in the Fock basis. Its defining action on the
//! planar chart is
//!
//! ```text
//! η x₁ η⁻¹ = x₁,   η x₂ η⁻¹ = −x₂,   η p₁ η⁻¹ = −p₁,   η p₂ η⁻¹ = p₂,
//! ```
//!
//! i.e. a reflection of the second coordinate combined with motion reversal.
//! All four relations hold *exactly* on the truncated space (no guard is
//! needed), and [`build_eta`] verifies them before handing out the operator.
//!
//! The induced g-adjoint `O‡ = η⁻¹ O† η` swaps each pseudo-chiral ladder
//! operator with its tilde partner (`a‡ = ã`, `b‡ = b̃`), and the sesquilinear
//! form `⟨⟨ψ|φ⟩⟩ = ⟨ηψ|φ⟩` is the indefinite inner product in which the
//! pseudo-chiral Hamiltonians are self-adjoint.

use num_complex::Complex64;

use crate::fock::{position_momentum, CMatrix, CVector, FockSpace, OperatorMatrix};

use super::JsAlgebraError;

/// An antiunitary operator `η = U ∘ K`: a unitary part applied after
/// Fock-basis complex conjugation.
#[derive(Debug, Clone)]
pub struct AntiunitaryOperator {
    u: OperatorMatrix,
}

impl AntiunitaryOperator {
    /// The unitary factor `U` (here the diagonal mode-2 parity).
    pub fn unitary_part(&self) -> &OperatorMatrix {
        &self.u
    }

    pub fn space(&self) -> &FockSpace {
        self.u.space()
    }

    /// `η|ψ⟩ = U · conj(ψ)`.
    pub fn transform_state(&self, psi: &CVector) -> CVector {
        self.u.apply(&psi.map(|z| z.conj()))
    }

    /// Antiunitary conjugation `η O η⁻¹ = U · conj(O) · U†`.
    pub fn conjugate_operator(&self, o: &OperatorMatrix) -> Result<OperatorMatrix, JsAlgebraError> {
        self.check_space(o)?;
        let conj = o.dagger().transposed();
        Ok((&(&self.u * &conj) * &self.u.dagger()).relabel(format!("η({})η⁻¹", o.label())))
    }

    fn check_space(&self, o: &OperatorMatrix) -> Result<(), JsAlgebraError> {
        if o.space() != self.u.space() {
            return Err(JsAlgebraError::SpaceMismatch(
                format!("{:?}", o.space()),
                format!("{:?}", self.u.space()),
            ));
        }
        Ok(())
    }

    fn check_state(&self, v: &CVector) -> Result<(), JsAlgebraError> {
        if v.len() != self.u.space().dim() {
            return Err(JsAlgebraError::StateLength {
                got: v.len(),
                expected: self.u.space().dim(),
            });
        }
        Ok(())
    }
}

/// Build `η = (−1)^{n₂} ∘ K` on a two-mode space and verify its defining
/// conjugation relations on the chart before returning it.
pub fn build_eta(space: &FockSpace) -> Result<AntiunitaryOperator, JsAlgebraError> {
    if space.n_modes() != 2 {
        return Err(JsAlgebraError::WrongModeCount(space.n_modes()));
    }
    let dim = space.dim();
    let entries = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            let n2 = space.occupations(r)[1];
            Complex64::new(if n2 % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eta = AntiunitaryOperator {
        u: OperatorMatrix::new(*space, entries, "U")?,
    };

    // The defining relations are exact even on the truncated space; accept
    // the operator only once each residual is at rounding level.
    let (x1, p1) = position_momentum(space, 0)?;
    let (x2, p2) = position_momentum(space, 1)?;
    let relations: [(&str, &OperatorMatrix, Complex64); 4] = [
        ("η x1 η⁻¹ = x1", &x1, Complex64::new(1.0, 0.0)),
        ("η x2 η⁻¹ = -x2", &x2, Complex64::new(-1.0, 0.0)),
        ("η p1 η⁻¹ = -p1", &p1, Complex64::new(-1.0, 0.0)),
        ("η p2 η⁻¹ = p2", &p2, Complex64::new(1.0, 0.0)),
    ];
    for (name, op, sign) in relations {
        let lhs = eta.conjugate_operator(op)?;
        let residual = (lhs.entries() - op.scaled(sign).entries()).norm();
        if residual > 1e-12 {
            return Err(JsAlgebraError::EtaVerification {
                relation: name.to_string(),
                residual,
            });
        }
    }
    Ok(eta)
}

/// The g-adjoint `O‡ = η⁻¹ O† η = conj(U† O† U)`.
///
/// It is an involution, reverses products, and its defining property is
/// `⟨⟨ψ|Oφ⟩⟩ = ⟨⟨O‡ψ|φ⟩⟩` for the inner product [`g_inner_product`].
pub fn g_adjoint(
    o: &OperatorMatrix,
    eta: &AntiunitaryOperator,
) -> Result<OperatorMatrix, JsAlgebraError> {
    eta.check_space(o)?;
    let inner = &(&eta.u.dagger() * &o.dagger()) * &eta.u;
    Ok(inner
        .dagger()
        .transposed()
        .relabel(format!("({})‡", o.label())))
}

/// The indefinite inner product `⟨⟨ψ|φ⟩⟩ = ⟨ηψ|φ⟩`, antilinear in `ψ` and
/// linear in `φ`. For the parity `U` it reduces to `ψᵀ U φ`, so Fock basis
/// states have g-norm `(−1)^{n₂}`.
pub fn g_inner_product(
    psi: &CVector,
    phi: &CVector,
    eta: &AntiunitaryOperator,
) -> Result<Complex64, JsAlgebraError> {
    eta.check_state(psi)?;
    eta.check_state(phi)?;
    Ok(eta.transform_state(psi).dotc(phi))
}

#[cfg(test)]
mod tests {
    use super::super::modes::build_pseudochiral_modes;
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(cutoff: usize) -> FockSpace {
        FockSpace::new(2, cutoff, 1.0).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
        CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn eta_squares_to_the_identity() {
        let eta = build_eta(&space(6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let psi = random_state(&mut rng, 36);
            let twice = eta.transform_state(&eta.transform_state(&psi));
            assert!((twice - &psi).norm() < 1e-14);
        }
    }

    #[test]
    fn chart_conjugation_relations_are_exact() {
        let sp = space(8);
        let eta = build_eta(&sp).unwrap();
        let (x1, p1) = position_momentum(&sp, 0).unwrap();
        let (x2, p2) = position_momentum(&sp, 1).unwrap();
        for (op, sign) in [(&x1, 1.0), (&x2, -1.0), (&p1, -1.0), (&p2, 1.0)] {
            let lhs = eta.conjugate_operator(op).unwrap();
            let residual = (lhs.entries() - op.scaled(Complex64::new(sign, 0.0)).entries()).norm();
            assert!(residual < 1e-15, "residual {residual} for {}", op.label());
        }
    }

    #[test]
    fn g_adjoint_swaps_ladders_with_their_tilde_partners() {
        let sp = space(10);
        let eta = build_eta(&sp).unwrap();
        let m = build_pseudochiral_modes(&sp).unwrap();
        let pairs = [
            (&m.a, &m.a_tilde),
            (&m.a_tilde, &m.a),
            (&m.b, &m.b_tilde),
            (&m.b_tilde, &m.b),
        ];
        for (op, partner) in pairs {
            let sharp = g_adjoint(op, &eta).unwrap();
            assert!(
                (sharp.entries() - partner.entries()).norm() < 1e-12,
                "({})‡ should equal {}",
                op.label(),
                partner.label()
            );
        }
    }

    #[test]
    fn pseudo_number_operators_are_g_self_adjoint() {
        let sp = space(8);
        let eta = build_eta(&sp).unwrap();
        let m = build_pseudochiral_modes(&sp).unwrap();
        let h_plus = &m.a_tilde * &m.a;
        let h_minus = &m.b_tilde * &m.b;
        for h in [&h_plus, &h_minus] {
            let sharp = g_adjoint(h, &eta).unwrap();
            assert!((sharp.entries() - h.entries()).norm() < 1e-12);
        }

        // Self-adjointness seen through the inner product itself.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let psi = random_state(&mut rng, sp.dim());
            let phi = random_state(&mut rng, sp.dim());
            let lhs = g_inner_product(&psi, &h_plus.apply(&phi), &eta).unwrap();
            let rhs = g_inner_product(&h_plus.apply(&psi), &phi, &eta).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * psi.norm() * phi.norm() * 10.0);
        }
    }

    #[test]
    fn g_inner_product_is_indefinite_on_basis_states() {
        let sp = space(4);
        let eta = build_eta(&sp).unwrap();
        for n1 in 0..4 {
            for n2 in 0..4 {
                let v = sp.basis_state(&[n1, n2]).unwrap();
                let g = g_inner_product(&v, &v, &eta).unwrap();
                let expected = if n2 % 2 == 0 { 1.0 } else { -1.0 };
                assert!((g - Complex64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn defining_property_relates_adjoint_and_inner_product() {
        let sp = space(5);
        let eta = build_eta(&sp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let dim = sp.dim();
        for _ in 0..10 {
            let entries = CMatrix::from_fn(dim, dim, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let op = OperatorMatrix::new(sp, entries, "O").unwrap();
            let sharp = g_adjoint(&op, &eta).unwrap();
            let psi = random_state(&mut rng, dim);
            let phi = random_state(&mut rng, dim);
            let lhs = g_inner_product(&psi, &op.apply(&phi), &eta).unwrap();
            let rhs = g_inner_product(&sharp.apply(&psi), &phi, &eta).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn g_adjoint_is_an_involution(
            entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 81)
        ) {
            let sp = FockSpace::new(2, 3, 1.0).unwrap();
            let m = CMatrix::from_fn(9, 9, |r, c| {
                let (re, im) = entries[9 * r + c];
                Complex64::new(re, im)
            });
            let op = OperatorMatrix::new(sp, m, "O").unwrap();
            let eta = build_eta(&sp).unwrap();
            let twice = g_adjoint(&g_adjoint(&op, &eta).unwrap(), &eta).unwrap();
            prop_assert!((twice.entries() - op.entries()).norm() < 1e-13);
        }
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let eta = build_eta(&space(4)).unwrap();
        let other = space(5);
        let (x1, _) = position_momentum(&other, 0).unwrap();
        assert!(matches!(
            g_adjoint(&x1, &eta),
            Err(JsAlgebraError::SpaceMismatch(_, _))
        ));
        let short = CVector::zeros(7);
        assert!(matches!(
            g_inner_product(&short, &short, &eta),
            Err(JsAlgebraError::StateLength { got: 7, .. })
        ));
    }
}
