//! The verification sections behind each subcommand. Every builder
//! returns a serializable payload, the pass/fail check lines the exit
//! code is computed from, and human-readable info lines for the text
//! renderer.

use std::str::FromStr;

use nalgebra::DMatrix;
use num::BigRational;
use num_complex::Complex64;
use serde::Serialize;

use oscalg_core::dynamics::{
    canonical_pairing, canonicity_residual, conserved_series, ct_map, exact as dyn_exact,
    integrate, legendre, noether_charge, signed_area_rate, tn2_map, trajectory_to_csv,
    transform_hamiltonian, ChargeKind, ChiralSense, ConservedSeries, QuadraticHamiltonian,
};
use oscalg_core::fock::{FockSpace, ProjectedSubspace};
use oscalg_core::jsalg::{
    build_eta, build_pseudochiral_modes, build_realization, casimir_witness, check_algebra,
    g_adjoint, pseudo_mode_relations, spectra, AlgebraReport, ModeRelation, RealizationName,
    SpectrumReport,
};
use oscalg_core::lagrangian::scalar::rational_scalar;
use oscalg_core::lagrangian::{
    builtin_lagrangian, epsilon_matrix, sigma1_matrix, solder, solder_target, soldering_currents,
    symmetry_variation, CRational, LagScalar, LagrangianKind, SolderKind, SolderingState,
};

use crate::report::{
    exact_check, floor_check, match_check, residual_check, CheckLine, Tolerances,
};

/// Everything a section needs from the command line.
pub struct Ctx {
    pub omega: f64,
    pub omega_rational: Option<BigRational>,
    pub cutoff: usize,
    pub guard: usize,
    pub exact: bool,
    pub tol: Tolerances,
}

impl Ctx {
    fn space(&self) -> Result<FockSpace, String> {
        FockSpace::new(2, self.cutoff, self.omega).map_err(|e| e.to_string())
    }

    fn omega_exact(&self) -> CRational {
        let rational = self
            .omega_rational
            .clone()
            .expect("exact mode is validated to carry a rational ω");
        rational_scalar(rational)
    }
}

/// A section's payload plus its check lines and text-summary lines.
pub struct SectionOutput<T: Serialize> {
    pub payload: T,
    pub checks: Vec<CheckLine>,
    pub info: Vec<String>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-15 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// verify-algebra
// ---------------------------------------------------------------------------

/// Casimir/candidate expectations on one basis state.
#[derive(Debug, Serialize)]
pub struct WitnessEntry {
    pub occupations: Vec<usize>,
    pub casimir: [f64; 2],
    pub candidate: [f64; 2],
}

/// One realization's report plus what the toolkit expects of it.
#[derive(Debug, Serialize)]
pub struct RealizationBlock {
    pub expected_hermiticity: [&'static str; 3],
    pub expected_factorizes: bool,
    /// Frobenius norm of the guarded Casimir; the quartic residuals are
    /// judged relative to it.
    pub casimir_scale: f64,
    pub witnesses: Vec<WitnessEntry>,
    pub report: AlgebraReport,
}

/// Pseudo-chiral mode bookkeeping: commutators, the antilinear-adjoint
/// images, and the truncation-honesty gap `‖ã − a†‖`.
#[derive(Debug, Serialize)]
pub struct EtaBlock {
    pub mode_relations: Vec<ModeRelation>,
    pub g_adjoint_a_residual: f64,
    pub g_adjoint_b_residual: f64,
    pub a_tilde_vs_a_dagger_gap: f64,
}

#[derive(Debug, Serialize)]
pub struct AlgebraSection {
    pub realizations: Vec<RealizationBlock>,
    pub eta: EtaBlock,
}

fn expected_hermiticity(name: RealizationName) -> [&'static str; 3] {
    match name {
        RealizationName::Su11Pseudochiral => ["hermitian", "anti-hermitian", "anti-hermitian"],
        _ => ["hermitian", "hermitian", "hermitian"],
    }
}

fn mode_relation<'a>(relations: &'a [ModeRelation], name: &str) -> Result<&'a ModeRelation, String> {
    relations
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| format!("mode relation `{name}` missing from report"))
}

pub fn algebra_section(ctx: &Ctx) -> Result<SectionOutput<AlgebraSection>, String> {
    let space = ctx.space()?;
    let sub = ProjectedSubspace::new(&space, ctx.guard).map_err(|e| e.to_string())?;

    let mut realizations = Vec::new();
    let mut checks = Vec::new();
    let mut info = Vec::new();

    for name in RealizationName::ALL {
        let r = build_realization(name, &space).map_err(|e| e.to_string())?;
        let report = check_algebra(&r, ctx.guard).map_err(|e| e.to_string())?;
        let casimir_scale = sub.restrict(r.casimir.entries()).norm().max(1.0);

        for rel in &report.relations {
            if rel.name.starts_with("[J²") {
                // The quartic commutators accumulate rounding proportional
                // to ‖J²‖, so their threshold is scale-relative.
                checks.push(residual_check(
                    format!("{name}: {} (scale-relative)", rel.name),
                    rel.residual,
                    ctx.tol.algebra * casimir_scale,
                ));
            } else {
                checks.push(residual_check(
                    format!("{name}: {}", rel.name),
                    rel.residual,
                    ctx.tol.algebra,
                ));
            }
        }

        let expected = expected_hermiticity(name);
        checks.push(match_check(
            format!("{name}: hermiticity of (Jx, Jy, Jz)"),
            format!(
                "{}, {}, {}",
                report.hermiticity.jx, report.hermiticity.jy, report.hermiticity.jz
            ),
            format!("{}, {}, {}", expected[0], expected[1], expected[2]),
        ));

        let expected_factorizes = name != RealizationName::Su11Standard;
        let mut witnesses = Vec::new();
        if expected_factorizes {
            checks.push(residual_check(
                format!("{name}: Casimir = (n̂/2)(n̂/2 + 1) (scale-relative)"),
                report.casimir.residual,
                ctx.tol.algebra * casimir_scale,
            ));
        } else {
            // The standard su(1,1) realization closes as an algebra but its
            // Casimir does not factorize; exhibit the obstruction on two
            // basis states instead of a residual bound.
            checks.push(floor_check(
                format!("{name}: Casimir factorization obstruction"),
                report.casimir.residual,
                0.1,
            ));
            for occupations in [vec![0usize, 0], vec![1usize, 1]] {
                let (casimir, candidate) =
                    casimir_witness(&r, &occupations).map_err(|e| e.to_string())?;
                witnesses.push(WitnessEntry {
                    occupations: occupations.clone(),
                    casimir: pair(casimir),
                    candidate: pair(candidate),
                });
                if occupations == [0, 0] {
                    checks.push(match_check(
                        format!("{name}: vacuum witness (J², candidate)"),
                        format!("{:.3}, {:.3}", casimir.re, candidate.re),
                        "-0.250, 0.000",
                    ));
                }
            }
        }

        let samples: Vec<String> = report
            .casimir
            .sample_eigenvalues
            .iter()
            .take(4)
            .map(|v| {
                let value = if v[0].abs() < 1e-9 { 0.0 } else { v[0] };
                format!("{value:.3}")
            })
            .collect();
        info.push(format!(
            "{name}: ladder relation `{}`; Casimir samples [{}]",
            r.ladder_relation_name(),
            samples.join(", ")
        ));

        realizations.push(RealizationBlock {
            expected_hermiticity: expected,
            expected_factorizes,
            casimir_scale,
            witnesses,
            report,
        });
    }

    // Pseudo-chiral mode layer: commutator classes and the antilinear
    // adjoint that pairs (a, ã) and (b, b̃).
    let modes = build_pseudochiral_modes(&space).map_err(|e| e.to_string())?;
    let relations = pseudo_mode_relations(&modes, ctx.guard).map_err(|e| e.to_string())?;
    let eta = build_eta(&space).map_err(|e| e.to_string())?;

    let g_adjoint_a_residual = (g_adjoint(&modes.a, &eta)
        .map_err(|e| e.to_string())?
        .entries()
        - modes.a_tilde.entries())
    .norm();
    let g_adjoint_b_residual = (g_adjoint(&modes.b, &eta)
        .map_err(|e| e.to_string())?
        .entries()
        - modes.b_tilde.entries())
    .norm();
    let a_tilde_vs_a_dagger_gap = (modes.a_tilde.entries() - modes.a.dagger().entries()).norm();

    for name in ["[a, a_tilde] - 1", "[b, b_tilde] - 1"] {
        let rel = mode_relation(&relations, name)?;
        checks.push(residual_check(
            format!("modes: {name} (guarded)"),
            rel.guarded_residual,
            ctx.tol.algebra,
        ));
    }
    for name in ["[a, b]", "[a_tilde, b_tilde]"] {
        let rel = mode_relation(&relations, name)?;
        checks.push(residual_check(
            format!("modes: {name} (full space)"),
            rel.full_residual,
            ctx.tol.algebra,
        ));
    }
    for name in ["[a, b_tilde]", "[a_tilde, b]"] {
        let rel = mode_relation(&relations, name)?;
        checks.push(residual_check(
            format!("modes: {name} (guarded)"),
            rel.guarded_residual,
            ctx.tol.algebra,
        ));
    }
    // The cross commutators that vanish only modulo boundary terms must
    // show a visible defect on the full truncated space — if they were
    // exactly zero there the guard would be pointless.
    let boundary = mode_relation(&relations, "[a, b_tilde]")?;
    checks.push(floor_check(
        "modes: [a, b_tilde] truncation defect (full space)",
        boundary.full_residual,
        1e-6,
    ));
    checks.push(residual_check(
        "modes: g-adjoint sends a to a_tilde",
        g_adjoint_a_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "modes: g-adjoint sends b to b_tilde",
        g_adjoint_b_residual,
        ctx.tol.algebra,
    ));
    checks.push(floor_check(
        "modes: a_tilde differs from a†",
        a_tilde_vs_a_dagger_gap,
        1e-6,
    ));

    info.push(format!(
        "modes: η chart action x1 ↦ x1, x2 ↦ −x2, p1 ↦ −p1, p2 ↦ p2 (verified at construction); \
         ‖ã − a†‖ = {a_tilde_vs_a_dagger_gap:.3}"
    ));

    Ok(SectionOutput {
        payload: AlgebraSection {
            realizations,
            eta: EtaBlock {
                mode_relations: relations,
                g_adjoint_a_residual,
                g_adjoint_b_residual,
                a_tilde_vs_a_dagger_gap,
            },
        },
        checks,
        info,
    })
}

// ---------------------------------------------------------------------------
// solder-check
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct SymmetryLine {
    pub lagrangian: String,
    pub generator: &'static str,
    pub magnitude: f64,
}

#[derive(Debug, Serialize)]
pub struct SolderBlock {
    pub kind: String,
    pub target: String,
    /// Largest normal-form coefficient deviation between the reduced
    /// Lagrangian and the builtin target (float arithmetic).
    pub reduced_deviation: f64,
    /// Present in exact mode when the reduction closes identically.
    pub exact_statement: Option<String>,
    pub gauge_states: usize,
    /// Largest |δL − Λ·J| over the sampled states (float arithmetic).
    pub gauge_identity_max_gap: f64,
    /// Exact-mode verdict of the same identity on rational states.
    pub exact_gauge_identity: Option<bool>,
    pub symmetry_variations: Vec<SymmetryLine>,
}

#[derive(Debug, Serialize)]
pub struct SolderSection {
    pub blocks: Vec<SolderBlock>,
}

/// Evaluate the gauge-variation identity on a fixed table of states,
/// returning the worst gap, whether every gap is exactly zero, and the
/// number of states visited. Generic so float and rational arithmetic
/// sample the same points.
fn gauge_identity<S: LagScalar>(
    kind: SolderKind,
    omega: &S,
) -> Result<(f64, bool, usize), String> {
    let mut max_gap = 0.0f64;
    let mut all_exact = true;
    let mut states = 0;
    for k in 0..5i64 {
        let state = SolderingState {
            y: [S::from_ratio(3 + k, 10), S::from_ratio(k - 2, 7)],
            y_dot: [S::from_ratio(1 - k, 5), S::from_ratio(2 * k + 1, 9)],
            z: [S::from_ratio(2 - k, 11), S::from_ratio(k + 1, 4)],
            z_dot: [S::from_ratio(3 * k - 2, 8), S::from_ratio(-k - 3, 13)],
        };
        let lambda = [S::from_ratio(k + 2, 3), S::from_ratio(1 - 2 * k, 6)];
        let check = soldering_currents(kind, omega, &state, &lambda).map_err(|e| e.to_string())?;
        let gap = check.delta_l - check.current_contraction;
        max_gap = max_gap.max(gap.magnitude());
        all_exact &= gap.is_exactly_zero();
        states += 1;
    }
    Ok((max_gap, all_exact, states))
}

pub fn solder_section(ctx: &Ctx) -> Result<SectionOutput<SolderSection>, String> {
    let mut blocks = Vec::new();
    let mut checks = Vec::new();
    let mut info = Vec::new();
    let w = c(ctx.omega);
    let theta = c(0.37);

    for kind in [SolderKind::ChiralToDirect, SolderKind::PseudochiralToIndirect] {
        let target_kind = kind.target_kind();

        // Float reduction: composite → eliminate B → x = y − z → drop u.
        let soldered = solder::<Complex64>(kind, &w).map_err(|e| e.to_string())?;
        let target = solder_target::<Complex64>(kind, &w).map_err(|e| e.to_string())?;
        let reduced_deviation = soldered
            .reduced
            .el_normal_form()
            .max_deviation(&target.el_normal_form())
            .map_err(|e| e.to_string())?;
        checks.push(residual_check(
            format!("{}: reduced ≡ {}", kind.name(), target_kind.name()),
            reduced_deviation,
            ctx.tol.algebra,
        ));

        // Exact reduction over Gaussian rationals: zero tolerance.
        let mut exact_statement = None;
        let mut exact_gauge_identity = None;
        if ctx.exact {
            let wr = ctx.omega_exact();
            let soldered = solder::<CRational>(kind, &wr).map_err(|e| e.to_string())?;
            let target = solder_target::<CRational>(kind, &wr).map_err(|e| e.to_string())?;
            let identical = soldered
                .reduced
                .el_normal_form()
                .is_identical(&target.el_normal_form())
                .map_err(|e| e.to_string())?;
            let statement = if identical {
                format!("reduced ≡ {} (exact)", target_kind.name())
            } else {
                format!("reduced ≠ {} (exact mismatch)", target_kind.name())
            };
            checks.push(exact_check(
                format!("{}: exact reduction", kind.name()),
                statement.clone(),
                identical,
            ));
            info.push(format!("{}: {statement}", kind.name()));
            exact_statement = Some(statement);

            let (_, all_exact, _) = gauge_identity::<CRational>(kind, &wr)?;
            checks.push(exact_check(
                format!("{}: exact gauge identity δL = Λ·J", kind.name()),
                if all_exact { "δL ≡ Λ·J" } else { "δL ≠ Λ·J" },
                all_exact,
            ));
            exact_gauge_identity = Some(all_exact);
        }

        // Gauge-variation identity on the float state table.
        let (gauge_identity_max_gap, _, gauge_states) = gauge_identity::<Complex64>(kind, &w)?;
        checks.push(residual_check(
            format!(
                "{}: gauge variation matches current contraction ({} states)",
                kind.name(),
                gauge_states
            ),
            gauge_identity_max_gap,
            ctx.tol.cross_terms,
        ));

        // The rigid symmetry of each mode and of the soldered target is a
        // pure total derivative: its normal-form variation vanishes.
        let (generator, generator_name, trio) = match kind {
            SolderKind::ChiralToDirect => (
                epsilon_matrix::<Complex64>(),
                "ε (rotation)",
                [
                    target_kind,
                    LagrangianKind::ChiralPlus,
                    LagrangianKind::ChiralMinus,
                ],
            ),
            SolderKind::PseudochiralToIndirect => (
                sigma1_matrix::<Complex64>(),
                "σ₁ (hyperbolic boost)",
                [
                    target_kind,
                    LagrangianKind::PseudochiralPlus,
                    LagrangianKind::PseudochiralMinus,
                ],
            ),
        };
        let mut symmetry_variations = Vec::new();
        for member in trio {
            let lagrangian = builtin_lagrangian::<Complex64>(member, &w).map_err(|e| e.to_string())?;
            let variation =
                symmetry_variation(&lagrangian, &generator, &theta).map_err(|e| e.to_string())?;
            let magnitude = variation.magnitude();
            checks.push(residual_check(
                format!("δL({}) under {}", member.name(), generator_name),
                magnitude,
                ctx.tol.cross_terms,
            ));
            symmetry_variations.push(SymmetryLine {
                lagrangian: member.name().to_string(),
                generator: generator_name,
                magnitude,
            });
        }

        let (plus, minus) = kind.mode_kinds();
        info.push(format!(
            "{}: {} ⊕ {} → eliminate B → x = y − z → {} (float deviation {reduced_deviation:.3e})",
            kind.name(),
            plus.name(),
            minus.name(),
            target_kind.name()
        ));

        blocks.push(SolderBlock {
            kind: kind.name().to_string(),
            target: target_kind.name().to_string(),
            reduced_deviation,
            exact_statement,
            gauge_states,
            gauge_identity_max_gap,
            exact_gauge_identity,
            symmetry_variations,
        });
    }

    Ok(SectionOutput {
        payload: SolderSection { blocks },
        checks,
        info,
    })
}

// ---------------------------------------------------------------------------
// canonical maps (full-report)
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct CanonicalSection {
    /// `max |H − 2ω²I|` for the Legendre transform of the left-handed
    /// first-order mode.
    pub legendre_h_residual: f64,
    pub bracket_x1_x2: [f64; 2],
    pub bracket_expected: f64,
    pub tn2_residual: f64,
    pub ct_residual: f64,
    pub split_diagonal_residual: f64,
    pub split_cross_max: f64,
    pub exact_tn2: Option<bool>,
    pub exact_ct: Option<bool>,
    pub exact_split: Option<bool>,
}

pub fn canonical_section(ctx: &Ctx) -> Result<SectionOutput<CanonicalSection>, String> {
    let mut checks = Vec::new();
    let mut info = Vec::new();
    let w = c(ctx.omega);
    let two_w2 = 2.0 * ctx.omega * ctx.omega;

    // First-order Legendre branch: H = 2ω²I and {x1, x2} = −1/(2ω).
    let chiral = builtin_lagrangian::<Complex64>(LagrangianKind::ChiralPlus, &w)
        .map_err(|e| e.to_string())?;
    let system = legendre(&chiral).map_err(|e| e.to_string())?;
    let expected_h = DMatrix::<Complex64>::identity(2, 2).scale(two_w2);
    let legendre_h_residual = max_abs(&(system.hamiltonian.matrix() - expected_h));
    checks.push(residual_check(
        "legendre(chiral_plus): H = 2ω²I",
        legendre_h_residual,
        ctx.tol.algebra,
    ));

    let z0 = system.state(&[c(0.7), c(-0.3)]).map_err(|e| e.to_string())?;
    let bracket = z0.bracket("x1", "x2").map_err(|e| e.to_string())?;
    let bracket_expected = -1.0 / (2.0 * ctx.omega);
    checks.push(residual_check(
        "legendre(chiral_plus): {x1, x2} = −1/(2ω)",
        (bracket - c(bracket_expected)).norm(),
        ctx.tol.algebra,
    ));

    // Canonicity of the frozen maps.
    let tn2 = tn2_map(ctx.omega);
    let tn2_residual = canonicity_residual(&tn2, &system.pairing, &canonical_pairing(1))
        .map_err(|e| e.to_string())?;
    checks.push(residual_check(
        "tn2: [x1, x2] → [x, p_x] is canonical",
        tn2_residual,
        ctx.tol.algebra,
    ));

    let ct = ct_map(ctx.omega);
    let omega4 = canonical_pairing(2);
    let ct_residual =
        canonicity_residual(&ct, &omega4, &omega4).map_err(|e| e.to_string())?;
    checks.push(residual_check(
        "ct: [x1, p_x1, x2, p_x2] → [x_plus, p_plus, x_minus, p_minus] is canonical",
        ct_residual,
        ctx.tol.algebra,
    ));

    // Transport of the difference-of-oscillators Hamiltonian along `ct`
    // must split into two positive oscillators with no cross terms.
    let w2 = ctx.omega * ctx.omega;
    let mut h_i = DMatrix::<Complex64>::zeros(4, 4);
    h_i[(0, 0)] = c(w2);
    h_i[(1, 1)] = c(1.0);
    h_i[(2, 2)] = c(-w2);
    h_i[(3, 3)] = c(-1.0);
    let h_indirect = QuadraticHamiltonian::new(ct.source_labels().to_vec(), h_i)
        .map_err(|e| e.to_string())?;
    let transported =
        transform_hamiltonian(&h_indirect, &ct, &omega4, &omega4).map_err(|e| e.to_string())?;
    let expected_diag = [w2, 1.0, w2, 1.0];
    let mut split_diagonal_residual = 0.0f64;
    let mut split_cross_max = 0.0f64;
    for r in 0..4 {
        for col in 0..4 {
            let entry = transported.matrix()[(r, col)];
            if r == col {
                split_diagonal_residual =
                    split_diagonal_residual.max((entry - c(expected_diag[r])).norm());
            } else {
                split_cross_max = split_cross_max.max(entry.norm());
            }
        }
    }
    checks.push(residual_check(
        "ct transport of H_I: diagonal equals (ω², 1, ω², 1)",
        split_diagonal_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "ct transport of H_I: cross terms",
        split_cross_max,
        ctx.tol.cross_terms,
    ));

    // Exact replay: both maps are M̂/√2 with M̂ Gaussian-rational, so
    // canonicity and the split are rational identities.
    let (mut exact_tn2, mut exact_ct, mut exact_split) = (None, None, None);
    if ctx.exact {
        let wr = ctx.omega_exact();
        let tn2_ok = dyn_exact::scaled_map_is_canonical(
            &dyn_exact::tn2_hat(&wr),
            &dyn_exact::chiral_pairing_exact(&wr, true),
            &dyn_exact::canonical_pairing_exact(1),
        );
        let ct_ok = dyn_exact::scaled_map_is_canonical(
            &dyn_exact::ct_hat(&wr),
            &dyn_exact::canonical_pairing_exact(2),
            &dyn_exact::canonical_pairing_exact(2),
        );
        let split_ok = dyn_exact::scaled_transform(
            &dyn_exact::hyperbolic_hamiltonian_exact(&wr),
            &dyn_exact::ct_hat(&wr),
        ) == dyn_exact::split_hamiltonian_exact(&wr);
        checks.push(exact_check(
            "tn2: exact canonicity of M̂/√2",
            if tn2_ok { "½M̂ΩM̂ᵀ ≡ Ω" } else { "½M̂ΩM̂ᵀ ≠ Ω" },
            tn2_ok,
        ));
        checks.push(exact_check(
            "ct: exact canonicity of M̂/√2",
            if ct_ok { "½M̂ΩM̂ᵀ ≡ Ω" } else { "½M̂ΩM̂ᵀ ≠ Ω" },
            ct_ok,
        ));
        checks.push(exact_check(
            "ct: exact split diag(ω², 1, −ω², −1) → diag(ω², 1, ω², 1)",
            if split_ok { "½M̂ᵀHM̂ ≡ H_split" } else { "½M̂ᵀHM̂ ≠ H_split" },
            split_ok,
        ));
        exact_tn2 = Some(tn2_ok);
        exact_ct = Some(ct_ok);
        exact_split = Some(split_ok);
    }

    info.push(format!(
        "canonical maps: tn2 [x1, x2] → [x, p_x]; ct [x1, p_x1, x2, p_x2] → \
         [x_plus, p_plus, x_minus, p_minus]; {{x1, x2}} = {:.6} (expected {:.6})",
        bracket.re, bracket_expected
    ));

    Ok(SectionOutput {
        payload: CanonicalSection {
            legendre_h_residual,
            bracket_x1_x2: pair(bracket),
            bracket_expected,
            tn2_residual,
            ct_residual,
            split_diagonal_residual,
            split_cross_max,
            exact_tn2,
            exact_ct,
            exact_split,
        },
        checks,
        info,
    })
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

pub fn spectrum_section(ctx: &Ctx) -> Result<SectionOutput<SpectrumReport>, String> {
    let space = ctx.space()?;
    let report = spectra(&space, ctx.guard).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();
    let mut info = Vec::new();

    checks.push(residual_check(
        "H_direct: guarded spectrum on the ladder ω(n₁ + n₂)",
        report.h_direct.max_deviation_from_ladder,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "H_indirect: guarded spectrum on the ladder ω(n₁ − n₂)",
        report.h_indirect.max_deviation_from_ladder,
        ctx.tol.algebra,
    ));

    let pm = &report.pseudo_modes;
    checks.push(residual_check(
        "ωãa = ½(p₊² + ω²x₊²) − ω/2 (guarded)",
        pm.plus_identity_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "ωb̃b = ½(p₋² + ω²x₋²) − ω/2 (guarded)",
        pm.minus_identity_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "[H₊, ã] = ωã (guarded)",
        pm.plus_ladder_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "[H₋, b̃] = ωb̃ (guarded)",
        pm.minus_ladder_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "ηH₊η⁻¹ = H₊† (full space)",
        pm.pseudo_hermiticity_plus,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "ηH₋η⁻¹ = H₋† (full space)",
        pm.pseudo_hermiticity_minus,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "H₊† = H₋ (full space)",
        pm.adjoint_swap_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "H_I = H₊ + H₋ in canonical forms (full space)",
        pm.canonical_split_residual,
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "number-form zero-point shift equals ω",
        (pm.zero_point_shift - ctx.omega).abs(),
        ctx.tol.algebra,
    ));
    checks.push(residual_check(
        "H_I = ωãa + ωb̃b + ω (guarded)",
        pm.number_split_residual,
        ctx.tol.algebra,
    ));

    for table in [&report.h_direct, &report.h_indirect] {
        info.push(format!(
            "{} — {} guarded eigenvalues, ladder deviation {:.3e}",
            table.label,
            table.eigenvalues.len(),
            table.max_deviation_from_ladder
        ));
        info.push("  value       multiplicity".to_string());
        for cluster in table.clusters.iter().take(13) {
            let value = if cluster.value.abs() < 1e-9 {
                0.0
            } else {
                cluster.value
            };
            info.push(format!("  {value:>10.6}  ×{}", cluster.multiplicity));
        }
        if table.clusters.len() > 13 {
            info.push(format!("  … ({} clusters total)", table.clusters.len()));
        }
    }
    let ladder_head: Vec<String> = pm
        .nominal_ladder
        .iter()
        .take(4)
        .map(|v| format!("{v:.3}"))
        .collect();
    info.push(format!(
        "pseudo-chiral halves are non-normal when truncated; their ladder ω·{{0, 1, …, {}}} \
         ([{}, …]) is certified by the guarded identities above",
        report.cutoff.saturating_sub(1),
        ladder_head.join(", ")
    ));

    Ok(SectionOutput {
        payload: report,
        checks,
        info,
    })
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// The first-order modes plus the soldered planar oscillator.
pub const SIMULATED_SYSTEMS: [&str; 5] = [
    "chiral_plus",
    "chiral_minus",
    "pseudochiral_plus",
    "pseudochiral_minus",
    "bidimensional_direct",
];

#[derive(Debug, Serialize)]
pub struct SimulateSection {
    pub system: String,
    pub labels: Vec<String>,
    pub initial: Vec<[f64; 2]>,
    pub periods: usize,
    pub steps_per_period: usize,
    pub dt: f64,
    pub samples: usize,
    pub charge: String,
    pub energy_initial: [f64; 2],
    pub energy_max_drift: f64,
    pub charge_initial: [f64; 2],
    pub charge_max_drift: f64,
    /// Closed-form value of the charge at `t = 0` (first-order modes).
    pub noether_closed_form: Option<[f64; 2]>,
    /// `ε_ij x_i ẋ_j` at `t = 0` (first-order modes).
    pub signed_area_rate: Option<[f64; 2]>,
    pub trajectory_file: String,
    pub series: Vec<ConservedSeries>,
}

fn charge_observable(
    kind: LagrangianKind,
    omega: f64,
) -> (&'static str, DMatrix<Complex64>, Option<(ChargeKind, ChiralSense)>) {
    let scaled_identity = |s: f64| DMatrix::<Complex64>::identity(2, 2).scale(s);
    let scaled_metric = |s: f64| {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = c(s);
        m[(1, 1)] = c(-s);
        m
    };
    match kind {
        LagrangianKind::ChiralPlus => (
            "angular_momentum",
            scaled_identity(2.0 * omega),
            Some((ChargeKind::AngularMomentum, ChiralSense::Plus)),
        ),
        LagrangianKind::ChiralMinus => (
            "angular_momentum",
            scaled_identity(-2.0 * omega),
            Some((ChargeKind::AngularMomentum, ChiralSense::Minus)),
        ),
        LagrangianKind::PseudochiralPlus => (
            "su11_charge",
            scaled_metric(2.0 * omega),
            Some((ChargeKind::Su11Charge, ChiralSense::Plus)),
        ),
        LagrangianKind::PseudochiralMinus => (
            "su11_charge",
            scaled_metric(-2.0 * omega),
            Some((ChargeKind::Su11Charge, ChiralSense::Minus)),
        ),
        LagrangianKind::BidimensionalDirect => {
            // L = x1·p_x2 − x2·p_x1 as ½zᵀQz on (x1, p_x1, x2, p_x2).
            let mut q = DMatrix::<Complex64>::zeros(4, 4);
            q[(0, 3)] = c(1.0);
            q[(3, 0)] = c(1.0);
            q[(1, 2)] = c(-1.0);
            q[(2, 1)] = c(-1.0);
            ("angular_momentum", q, None)
        }
        _ => unreachable!("simulatable systems are validated before dispatch"),
    }
}

fn default_initial(labels: &[String]) -> Vec<Complex64> {
    const COORDINATES: [f64; 2] = [0.7, -0.3];
    let mut next = 0;
    labels
        .iter()
        .map(|label| {
            if label.starts_with("p_") {
                c(0.0)
            } else {
                let value = COORDINATES[next % COORDINATES.len()];
                next += 1;
                c(value)
            }
        })
        .collect()
}

fn parse_initial(text: &str, expected: usize) -> Result<Vec<Complex64>, String> {
    let values: Vec<Complex64> = text
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .map(c)
                .map_err(|_| format!("cannot parse initial value `{}`", piece.trim()))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != expected {
        return Err(format!(
            "initial state has {} values but the phase space needs {expected}",
            values.len()
        ));
    }
    Ok(values)
}

pub fn simulate_section(
    ctx: &Ctx,
    system: &str,
    periods: usize,
    steps_per_period: usize,
    initial: Option<&str>,
) -> Result<(SectionOutput<SimulateSection>, String), String> {
    if !SIMULATED_SYSTEMS.contains(&system) {
        return Err(format!(
            "system `{system}` is not simulatable; choose one of {}",
            SIMULATED_SYSTEMS.join(", ")
        ));
    }
    if periods == 0 || steps_per_period == 0 {
        return Err("periods and steps-per-period must be positive".to_string());
    }
    let kind = LagrangianKind::from_str(system)?;
    let lagrangian =
        builtin_lagrangian::<Complex64>(kind, &c(ctx.omega)).map_err(|e| e.to_string())?;
    let sys = legendre(&lagrangian).map_err(|e| e.to_string())?;
    let labels = sys.hamiltonian.labels().to_vec();

    let values = match initial {
        Some(text) => parse_initial(text, labels.len())?,
        None => default_initial(&labels),
    };
    let z0 = sys.state(&values).map_err(|e| e.to_string())?;

    let period = 2.0 * std::f64::consts::PI / ctx.omega;
    let dt = period / steps_per_period as f64;
    let n_steps = periods * steps_per_period;
    // Half a step of headroom so floor(t_final/dt) lands on n_steps.
    let t_final = dt * (n_steps as f64 + 0.5);
    let trajectory = integrate(&sys.hamiltonian, &z0, t_final, dt).map_err(|e| e.to_string())?;

    let energy =
        conserved_series(&trajectory, &sys.hamiltonian, "energy").map_err(|e| e.to_string())?;
    let (charge_name, q, closed_form) = charge_observable(kind, ctx.omega);
    let charge_h =
        QuadraticHamiltonian::new(labels.clone(), q).map_err(|e| e.to_string())?;
    let charge = conserved_series(&trajectory, &charge_h, charge_name).map_err(|e| e.to_string())?;

    let mut checks = Vec::new();
    let mut info = Vec::new();

    checks.push(residual_check(
        format!("{system}: energy drift over {periods} periods"),
        energy.max_drift,
        ctx.tol.conservation,
    ));
    checks.push(residual_check(
        format!("{system}: {charge_name} drift over {periods} periods"),
        charge.max_drift,
        ctx.tol.conservation,
    ));

    let mut noether_closed_form = None;
    let mut area_rate = None;
    if let Some((charge_kind, sense)) = closed_form {
        let closed = noether_charge(charge_kind, &z0, ctx.omega, sense).map_err(|e| e.to_string())?;
        let sampled = Complex64::new(charge.values[0][0], charge.values[0][1]);
        checks.push(residual_check(
            format!("{system}: initial {charge_name} matches ±ω closed form"),
            (closed - sampled).norm(),
            ctx.tol.algebra,
        ));
        noether_closed_form = Some(pair(closed));

        let rate = signed_area_rate(&sys, &z0).map_err(|e| e.to_string())?;
        area_rate = Some(pair(rate));
        if charge_kind == ChargeKind::AngularMomentum {
            let handed = rate.re * sense.sign() > 0.0;
            checks.push(exact_check(
                format!("{system}: signed-area-rate sign matches handedness"),
                format!("{:+.6e}", rate.re),
                handed,
            ));
        }
        info.push(format!(
            "signed area rate at t = 0: {} (re {:+.3e})",
            fmt_complex(rate),
            rate.re
        ));
    }

    let initial_pairs: Vec<[f64; 2]> = values.iter().map(|z| pair(*z)).collect();
    let initial_display: Vec<String> = values.iter().map(|z| fmt_complex(*z)).collect();
    info.insert(
        0,
        format!(
            "system {system} on [{}], ω = {}, initial ({})",
            labels.join(", "),
            ctx.omega,
            initial_display.join(", ")
        ),
    );
    info.insert(
        1,
        format!(
            "integrated {periods} periods × {steps_per_period} steps (dt = {dt:.6e}), {} samples",
            trajectory.times.len()
        ),
    );
    info.push(format!("max |H(t) − H(0)| = {:.3e}", energy.max_drift));
    info.push(format!(
        "max |Q(t) − Q(0)| = {:.3e} ({charge_name})",
        charge.max_drift
    ));

    let csv = trajectory_to_csv(&trajectory);
    let section = SimulateSection {
        system: system.to_string(),
        labels,
        initial: initial_pairs,
        periods,
        steps_per_period,
        dt,
        samples: trajectory.times.len(),
        charge: charge_name.to_string(),
        energy_initial: charge_pair_first(&energy),
        energy_max_drift: energy.max_drift,
        charge_initial: charge_pair_first(&charge),
        charge_max_drift: charge.max_drift,
        noether_closed_form,
        signed_area_rate: area_rate,
        trajectory_file: format!("trajectory_{system}.csv"),
        series: vec![energy, charge],
    };

    Ok((
        SectionOutput {
            payload: section,
            checks,
            info,
        },
        csv,
    ))
}

fn charge_pair_first(series: &ConservedSeries) -> [f64; 2] {
    series.values.first().copied().unwrap_or([0.0, 0.0])
}
