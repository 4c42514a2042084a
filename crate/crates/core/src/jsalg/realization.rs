//! The four bilinear realizations of su(2) and su(1,1), with relation
//! checking, hermiticity classification, and Casimir factorization.
//!
//! All four are built from ladder bilinears on a two-mode space:
//!
//! * `su2_js` — the Jordan-Schwinger su(2): `J_z = ½(a†a − b†b)`,
//!   `J₊ = a†b`, `J₋ = ab†` with the two plain mode ladders. Compact
//!   relation `[J₊, J₋] = +2J_z`; all components hermitian; the Casimir
//!   factorizes as `(n̂/2)(n̂/2 + 1)` with `n̂ = a†a + b†b`.
//! * `su11_pseudochiral` — the same bilinear pattern in the pseudo-chiral
//!   pairs `(a, ã)`, `(b, b̃)`: `J_z = ½(ãa − b̃b)`, `J₊ = ãb`, `J₋ = −b̃a`.
//!   Non-compact relation `[J₊, J₋] = −2J_z`; only `J_x` is hermitian while
//!   `J_y`, `J_z` are anti-hermitian; the Casimir still factorizes, now with
//!   `n̂ = ãa + b̃b`.
//! * `su11_pseudochiral_hermitian_map` — the component relabeling
//!   `J_x → J_y, J_y → iJ_z, J_z → −iJ_x` applied to the pseudo-chiral
//!   triple. It preserves the su(1,1) relations but renders *all three*
//!   components hermitian, at the price of trading the compact generator.
//! * `su11_standard` — the textbook two-mode su(1,1): `J_z = ½(a†a + bb†)`,
//!   `J₊ = a†b†`, `J₋ = ab`. The relations hold and all components are
//!   hermitian, but the Casimir `J_z² − ½(J₊J₋ + J₋J₊)` does **not**
//!   factorize in the `(n̂/2)(n̂/2 + 1)` pattern: on the vacuum it evaluates
//!   to −1/4 while the candidate product gives 0.
//!
//! `J_x = (J₊ + J₋)/2` and `J_y = (J₊ − J₋)/(2i)` throughout, so
//! `J_± = J_x ± iJ_y` holds by construction in every realization.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::{
    annihilation, commutator, identity, residual_on_subspace, zero, FockSpace, OperatorMatrix,
    ProjectedSubspace,
};
use crate::{TOL_ALGEBRA, TOL_HERMITICITY};

use super::modes::build_pseudochiral_modes;
use super::JsAlgebraError;

/// Identifier for one of the four supported realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealizationName {
    Su2Js,
    Su11Pseudochiral,
    Su11PseudochiralHermitianMap,
    Su11Standard,
}

impl RealizationName {
    pub const ALL: [RealizationName; 4] = [
        RealizationName::Su2Js,
        RealizationName::Su11Pseudochiral,
        RealizationName::Su11PseudochiralHermitianMap,
        RealizationName::Su11Standard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RealizationName::Su2Js => "su2_js",
            RealizationName::Su11Pseudochiral => "su11_pseudochiral",
            RealizationName::Su11PseudochiralHermitianMap => "su11_pseudochiral_hermitian_map",
            RealizationName::Su11Standard => "su11_standard",
        }
    }

    /// Whether the `[J₊, J₋]` relation closes on `−2J_z` (non-compact)
    /// rather than `+2J_z` (compact).
    pub fn is_su11(self) -> bool {
        !matches!(self, RealizationName::Su2Js)
    }
}

impl fmt::Display for RealizationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RealizationName {
    type Err = JsAlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RealizationName::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| JsAlgebraError::UnknownRealization(s.to_string()))
    }
}

/// A concrete matrix realization of su(2) or su(1,1) on a truncated
/// two-mode space, with its Casimir and the candidate factorized form.
#[derive(Debug, Clone)]
pub struct AlgebraRealization {
    name: RealizationName,
    space: FockSpace,
    pub jx: OperatorMatrix,
    pub jy: OperatorMatrix,
    pub jz: OperatorMatrix,
    pub jplus: OperatorMatrix,
    pub jminus: OperatorMatrix,
    /// `J_z² ± ½(J₊J₋ + J₋J₊)` — plus sign for su(2), minus for su(1,1).
    pub casimir: OperatorMatrix,
    /// `(n̂/2)(n̂/2 + 1)` with the realization's own number-pair operator.
    pub casimir_candidate: OperatorMatrix,
}

impl AlgebraRealization {
    pub fn name(&self) -> RealizationName {
        self.name
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    /// Name of the compact/non-compact closure relation being checked.
    pub fn ladder_relation_name(&self) -> &'static str {
        if self.name.is_su11() {
            "[J+, J-] + 2Jz"
        } else {
            "[J+, J-] - 2Jz"
        }
    }
}

/// Build one of the four realizations on a two-mode space.
pub fn build_realization(
    name: RealizationName,
    space: &FockSpace,
) -> Result<AlgebraRealization, JsAlgebraError> {
    if space.n_modes() != 2 {
        return Err(JsAlgebraError::WrongModeCount(space.n_modes()));
    }
    let half = Complex64::new(0.5, 0.0);
    let i = Complex64::new(0.0, 1.0);

    // Primary data: (J_z, J₊, J₋) and the number pair n̂ entering the
    // candidate factorization.
    let (jz, jplus, jminus, number_pair) = match name {
        RealizationName::Su2Js => {
            let a = annihilation(space, 0)?;
            let b = annihilation(space, 1)?;
            let (na, nb) = (&a.dagger() * &a, &b.dagger() * &b);
            (
                (&na - &nb).scaled(half),
                &a.dagger() * &b,
                &a * &b.dagger(),
                &na + &nb,
            )
        }
        RealizationName::Su11Pseudochiral | RealizationName::Su11PseudochiralHermitianMap => {
            let m = build_pseudochiral_modes(space)?;
            let (ta, tb) = (&m.a_tilde * &m.a, &m.b_tilde * &m.b);
            (
                (&ta - &tb).scaled(half),
                &m.a_tilde * &m.b,
                (&m.b_tilde * &m.a).scaled(-Complex64::new(1.0, 0.0)),
                &ta + &tb,
            )
        }
        RealizationName::Su11Standard => {
            let a = annihilation(space, 0)?;
            let b = annihilation(space, 1)?;
            let na = &a.dagger() * &a;
            let nb = &b.dagger() * &b;
            (
                (&na + &(&b * &b.dagger())).scaled(half),
                &a.dagger() * &b.dagger(),
                &a * &b,
                &na + &nb,
            )
        }
    };

    // Components from the ladder pair.
    let jx = (&jplus + &jminus).scaled(half);
    let jy = (&jplus - &jminus).scaled(Complex64::new(0.0, -0.5));

    // The hermitian-map variant relabels the components and rebuilds its
    // ladder pair from the new triple; everything else keeps the primary set.
    let (jx, jy, jz, jplus, jminus) = if name == RealizationName::Su11PseudochiralHermitianMap {
        let new_jx = jz.scaled(i);
        let new_jy = jx;
        let new_jz = jy.scaled(-i);
        let new_jplus = &new_jx + &new_jy.scaled(i);
        let new_jminus = &new_jx - &new_jy.scaled(i);
        (new_jx, new_jy, new_jz, new_jplus, new_jminus)
    } else {
        (jx, jy, jz, jplus, jminus)
    };

    let anti = &(&jplus * &jminus) + &(&jminus * &jplus);
    let casimir_sign = if name.is_su11() { -0.5 } else { 0.5 };
    let casimir = (&(&jz * &jz) + &anti.scaled(Complex64::new(casimir_sign, 0.0))).relabel("J²");

    let nhalf = number_pair.scaled(half);
    let casimir_candidate =
        (&nhalf * &(&nhalf + &identity(space))).relabel("(n̂/2)(n̂/2 + 1)");

    Ok(AlgebraRealization {
        name,
        space: *space,
        jx: jx.relabel("Jx"),
        jy: jy.relabel("Jy"),
        jz: jz.relabel("Jz"),
        jplus: jplus.relabel("J+"),
        jminus: jminus.relabel("J-"),
        casimir,
        casimir_candidate,
    })
}

/// One checked relation and its guarded residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationEntry {
    pub name: String,
    pub residual: f64,
}

/// Hermiticity class of each component: `"hermitian"`, `"anti-hermitian"`,
/// or `"neither"`, judged on the guarded subspace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermiticityReport {
    #[serde(rename = "Jx")]
    pub jx: String,
    #[serde(rename = "Jy")]
    pub jy: String,
    #[serde(rename = "Jz")]
    pub jz: String,
}

/// Casimir factorization outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CasimirReport {
    pub factorizes: bool,
    pub residual: f64,
    /// Distinct Casimir eigenvalues on the guarded subspace (ascending by
    /// real part, at most eight), as `[re, im]` pairs.
    pub sample_eigenvalues: Vec<[f64; 2]>,
}

/// Full verification report for one realization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub realization: String,
    pub cutoff: usize,
    pub guard: usize,
    pub relations: Vec<RelationEntry>,
    pub hermiticity: HermiticityReport,
    pub casimir: CasimirReport,
}

impl AlgebraReport {
    /// Largest relation residual in the report.
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

fn classify_hermiticity(op: &OperatorMatrix, sub: &ProjectedSubspace) -> String {
    let m = sub.restrict(op.entries());
    let hermitian_defect = (&m - &m.adjoint()).norm();
    let anti_defect = (&m + &m.adjoint()).norm();
    if hermitian_defect < TOL_HERMITICITY {
        "hermitian"
    } else if anti_defect < TOL_HERMITICITY {
        "anti-hermitian"
    } else {
        "neither"
    }
    .to_string()
}

/// Distinct eigenvalues of the (Fock-diagonal) Casimir on the guarded
/// subspace, ascending by real part.
fn casimir_samples(r: &AlgebraRealization, sub: &ProjectedSubspace) -> Vec<[f64; 2]> {
    let m = sub.restrict(r.casimir.entries());
    let mut diag: Vec<Complex64> = (0..m.nrows()).map(|k| m[(k, k)]).collect();
    diag.sort_by(|p, q| {
        p.re.total_cmp(&q.re)
            .then_with(|| p.im.total_cmp(&q.im))
    });
    let mut out: Vec<[f64; 2]> = Vec::new();
    for z in diag {
        if out
            .last()
            .is_none_or(|last| (z - Complex64::new(last[0], last[1])).norm() > 1e-9)
        {
            out.push([z.re, z.im]);
            if out.len() == 8 {
                break;
            }
        }
    }
    out
}

/// Residual of `J² = (n̂/2)(n̂/2 + 1)` on the guarded subspace, and whether
/// it passes the algebra tolerance.
pub fn casimir_factorization(
    r: &AlgebraRealization,
    guard: usize,
) -> Result<(bool, f64), JsAlgebraError> {
    let sub = ProjectedSubspace::new(&r.space, guard)?;
    let residual = residual_on_subspace(&r.casimir, &r.casimir_candidate, &sub)?;
    Ok((residual < TOL_ALGEBRA, residual))
}

/// Expectation of the Casimir and of its candidate factorization on one
/// Fock basis state. For `su11_standard` this exhibits the failure
/// concretely: the vacuum gives `(−1/4, 0)`.
pub fn casimir_witness(
    r: &AlgebraRealization,
    occupations: &[usize],
) -> Result<(Complex64, Complex64), JsAlgebraError> {
    let v = r.space.basis_state(occupations)?;
    Ok((
        r.casimir.expectation(&v),
        r.casimir_candidate.expectation(&v),
    ))
}

/// Check all defining relations of a realization on the guarded subspace
/// and assemble the serializable report.
pub fn check_algebra(
    r: &AlgebraRealization,
    guard: usize,
) -> Result<AlgebraReport, JsAlgebraError> {
    let sub = ProjectedSubspace::new(&r.space, guard)?;
    let zero_op = zero(&r.space);
    let minus_one = Complex64::new(-1.0, 0.0);

    let ladder_sign = if r.name.is_su11() { -2.0 } else { 2.0 };
    let two_jz = r.jz.scaled(Complex64::new(ladder_sign, 0.0));

    let checks: [(String, OperatorMatrix, &OperatorMatrix); 6] = [
        (
            "[Jz, J+] - J+".to_string(),
            commutator(&r.jz, &r.jplus)?,
            &r.jplus,
        ),
        (
            "[Jz, J-] + J-".to_string(),
            commutator(&r.jz, &r.jminus)?,
            &r.jminus.scaled(minus_one),
        ),
        (
            r.ladder_relation_name().to_string(),
            commutator(&r.jplus, &r.jminus)?,
            &two_jz,
        ),
        ("[J², Jz]".to_string(), commutator(&r.casimir, &r.jz)?, &zero_op),
        ("[J², J+]".to_string(), commutator(&r.casimir, &r.jplus)?, &zero_op),
        ("[J², J-]".to_string(), commutator(&r.casimir, &r.jminus)?, &zero_op),
    ];

    let mut relations = Vec::with_capacity(checks.len());
    for (name, lhs, rhs) in &checks {
        relations.push(RelationEntry {
            name: name.clone(),
            residual: residual_on_subspace(lhs, rhs, &sub)?,
        });
    }

    let hermiticity = HermiticityReport {
        jx: classify_hermiticity(&r.jx, &sub),
        jy: classify_hermiticity(&r.jy, &sub),
        jz: classify_hermiticity(&r.jz, &sub),
    };

    let (factorizes, residual) = casimir_factorization(r, guard)?;
    let casimir = CasimirReport {
        factorizes,
        residual,
        sample_eigenvalues: casimir_samples(r, &sub),
    };

    Ok(AlgebraReport {
        realization: r.name.name().to_string(),
        cutoff: r.space.cutoff(),
        guard: sub.guard(),
        relations,
        hermiticity,
        casimir,
    })
}
