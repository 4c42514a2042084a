//! Report plumbing shared by every subcommand: the check-line type the
//! exit code is computed from, the config echo and conventions block
//! embedded in every payload, and the text renderer.
//!
//! Reports are deterministic: for a fixed configuration the JSON payload
//! and the text summary are byte-identical across runs (no timestamps,
//! no absolute paths, no iteration-order dependence).

use serde::Serialize;

/// One verified statement: what was measured, what it must satisfy, and
/// whether it did. The process exit code is 1 iff any check fails.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub observed: String,
    pub requirement: String,
    pub pass: bool,
}

/// Check that a residual is below a tolerance.
pub fn residual_check(name: impl Into<String>, residual: f64, tol: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        observed: format!("{residual:.3e}"),
        requirement: format!("< {tol:.3e}"),
        pass: residual < tol,
    }
}

/// Check that a magnitude is *above* a floor (used for structural gaps
/// that must not vanish, like truncation boundary defects).
pub fn floor_check(name: impl Into<String>, magnitude: f64, floor: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        observed: format!("{magnitude:.3e}"),
        requirement: format!("> {floor:.3e}"),
        pass: magnitude > floor,
    }
}

/// Check an exact (boolean) statement.
pub fn exact_check(name: impl Into<String>, observed: impl Into<String>, pass: bool) -> CheckLine {
    CheckLine {
        name: name.into(),
        observed: observed.into(),
        requirement: "exact".to_string(),
        pass,
    }
}

/// Check that an observed string equals an expected one.
pub fn match_check(
    name: impl Into<String>,
    observed: impl Into<String>,
    expected: impl Into<String>,
) -> CheckLine {
    let observed = observed.into();
    let expected = expected.into();
    CheckLine {
        pass: observed == expected,
        name: name.into(),
        requirement: expected,
        observed,
    }
}

/// Threshold set in force for a run; every payload echoes it so a stored
/// report is self-describing.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub algebra: f64,
    pub conservation: f64,
    pub cross_terms: f64,
}

/// The configuration a report was produced under.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub omega: String,
    pub omega_float: f64,
    pub cutoff: usize,
    pub guard: usize,
    pub arithmetic: String,
    pub tolerances: Tolerances,
}

/// Sign and construction conventions the numbers depend on.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub epsilon: &'static str,
    pub sigma1: &'static str,
    pub metric: &'static str,
    pub lagrangian: &'static str,
    pub fock_space: &'static str,
    pub guarded_subspace: &'static str,
    pub eta: &'static str,
    pub g_adjoint: &'static str,
    pub zero_point: &'static str,
}

pub fn conventions() -> Conventions {
    Conventions {
        epsilon: "ε is antisymmetric with ε₁₂ = +1",
        sigma1: "σ₁ = [[0, 1], [1, 0]]",
        metric: "hyperbolic metric g = diag(1, −1)",
        lagrangian: "L = ½q̇ᵀKq̇ + q̇ᵀCq + ½qᵀVq; a rotational term c·ε_ij xᵢẋⱼ \
                     has C = −c·ε and a potential −ω²x·x has V = −2ω²I; Lagrangians \
                     are identified modulo total derivatives d/dt(½qᵀSq)",
        fock_space: "two bosonic modes with a uniform occupation cutoff; mode 0 is \
                     the leftmost Kronecker factor and ⟨n−1|a|n⟩ = √n",
        guarded_subspace: "guarded residuals restrict to Fock states whose every \
                           occupation is at least `guard` below the cutoff, where \
                           ladder identities are exact despite truncation",
        eta: "η = U∘K with U = (−1)^{n₂} (parity of mode 2) and K the Fock-basis \
              complex conjugation",
        g_adjoint: "O‡ = η⁻¹O†η, the adjoint of the indefinite inner product \
                    ⟨⟨ψ|φ⟩⟩ = ⟨ηψ|φ⟩; it sends a ↦ ã and b ↦ b̃",
        zero_point: "the direct Hamiltonian is tabulated with its zero-point energy \
                     ω deducted; the pseudo-chiral number forms satisfy \
                     H_I = ωãa + ωb̃b + ω",
    }
}

/// Top-level JSON payload written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub config: ConfigEcho,
    pub conventions: Conventions,
    pub report: T,
    pub checks: Vec<CheckLine>,
    pub failures: usize,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config: ConfigEcho, report: T, checks: Vec<CheckLine>) -> Self {
        let failures = checks.iter().filter(|c| !c.pass).count();
        Envelope {
            config,
            conventions: conventions(),
            report,
            checks,
            failures,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

/// Render the human-readable summary: header, section info lines, one
/// line per check, and the final tally.
pub fn render_text(
    config: &ConfigEcho,
    info: &[String],
    checks: &[CheckLine],
    written: &[String],
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "oscalg {} — ω = {}, cutoff {}, guard {}, {} arithmetic\n",
        config.command, config.omega, config.cutoff, config.guard, config.arithmetic
    ));
    out.push_str(&format!(
        "tolerances: algebra {:.1e}, conservation {:.1e}, cross-terms {:.1e}\n",
        config.tolerances.algebra, config.tolerances.conservation, config.tolerances.cross_terms
    ));
    if !info.is_empty() {
        out.push('\n');
        for line in info {
            out.push_str(line);
            out.push('\n');
        }
    }
    if !checks.is_empty() {
        out.push('\n');
        for check in checks {
            let verdict = if check.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{verdict}] {} — {} (requires {})\n",
                check.name, check.observed, check.requirement
            ));
        }
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    out.push_str(&format!(
        "\nsummary: {} checks, {} failures\n",
        checks.len(),
        failures
    ));
    for path in written {
        out.push_str(&format!("wrote {path}\n"));
    }
    out
}
