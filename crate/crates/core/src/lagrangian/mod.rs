//! Quadratic Lagrangians over named coordinate charts.
//!
//! A [`QuadraticLagrangian`] stores `L = ½ q̇ᵀK q̇ + q̇ᵀC q + ½ qᵀV q` as
//! three blocks over an ordered chart of coordinate names. Two Lagrangians
//! are physically equivalent when they differ by a total time derivative
//! `d/dt(½ qᵀS q)` with `S` symmetric, which shifts `C` by `S`; the
//! [`ElNormalForm`] (symmetrized `K`, antisymmetric part of `C`, symmetrized
//! `V`) is the invariant content, and equality of Lagrangians is decided
//! there.
//!
//! The layer is generic over [`LagScalar`], so every construction runs both
//! in `Complex64` floating point and in exact Gaussian-rational arithmetic
//! ([`CRational`]), where the soldering identities can be asserted with zero
//! tolerance.

pub mod matrix;
pub mod scalar;

pub use matrix::DenseMat;
pub use scalar::{CRational, LagScalar};

use num_complex::Complex64;
use thiserror::Error;

/// Errors from Lagrangian construction and manipulation.
#[derive(Debug, Error, PartialEq)]
pub enum LagrangianError {
    #[error("{block} block must be {expected}x{expected} to match the chart, got {rows}x{cols}")]
    BlockShape {
        block: &'static str,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate coordinate name `{0}` in chart")]
    DuplicateCoordinate(String),
    #[error("coordinate `{0}` is not in the chart")]
    UnknownCoordinate(String),
    #[error("charts do not match: expected [{expected}], got [{got}]")]
    ChartMismatch { expected: String, got: String },
    #[error("coordinate map must be invertible")]
    SingularMap,
    #[error("omega must be nonzero")]
    ZeroOmega,
    #[error("auxiliary coordinate `{0}` has a kinetic (velocity-velocity) term")]
    AuxHasKineticTerm(String),
    #[error(
        "auxiliary coordinate `{0}` has first-order velocity couplings that no total \
         derivative removes"
    )]
    AuxNotAlgebraic(String),
    #[error("stationarity system for the auxiliary coordinates is singular")]
    AuxSystemSingular,
    #[error("coordinate `{coordinate}` stays coupled after reduction (residual {magnitude:.3e})")]
    ResidualCoupling { coordinate: String, magnitude: f64 },
    #[error("first-order variational derivative requires a vanishing velocity-velocity block")]
    NotFirstOrder,
    #[error("JSON error: {0}")]
    Json(String),
}

type Result<T> = std::result::Result<T, LagrangianError>;

// ---------------------------------------------------------------------------
// Core types
// ---------------------------------------------------------------------------

/// `L = ½ q̇ᵀK q̇ + q̇ᵀC q + ½ qᵀV q` over an ordered coordinate chart.
///
/// `K` and `V` are symmetrized at construction; `C` is stored as given
/// (its symmetric part is a total derivative and is dropped by
/// [`el_normal_form`]).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLagrangian<S> {
    chart: Vec<String>,
    k: DenseMat<S>,
    c: DenseMat<S>,
    v: DenseMat<S>,
}

impl<S: LagScalar> QuadraticLagrangian<S> {
    pub fn new(
        chart: Vec<String>,
        k: DenseMat<S>,
        c: DenseMat<S>,
        v: DenseMat<S>,
    ) -> Result<Self> {
        let n = chart.len();
        for (label, block) in [("K", &k), ("C", &c), ("V", &v)] {
            if block.nrows() != n || block.ncols() != n {
                return Err(LagrangianError::BlockShape {
                    block: label,
                    expected: n,
                    rows: block.nrows(),
                    cols: block.ncols(),
                });
            }
        }
        for (i, name) in chart.iter().enumerate() {
            if chart[..i].contains(name) {
                return Err(LagrangianError::DuplicateCoordinate(name.clone()));
            }
        }
        Ok(QuadraticLagrangian {
            chart,
            k: k.symmetric_part(),
            c,
            v: v.symmetric_part(),
        })
    }

    pub fn chart(&self) -> &[String] {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn k(&self) -> &DenseMat<S> {
        &self.k
    }

    pub fn c(&self) -> &DenseMat<S> {
        &self.c
    }

    pub fn v(&self) -> &DenseMat<S> {
        &self.v
    }

    /// Evaluate `L(q, q̇)`.
    pub fn value(&self, q: &[S], q_dot: &[S]) -> S {
        assert_eq!(q.len(), self.dim(), "coordinate count mismatch");
        assert_eq!(q_dot.len(), self.dim(), "velocity count mismatch");
        let q = DenseMat::column(q);
        let qd = DenseMat::column(q_dot);
        let half = S::half();
        let kinetic = qd.transpose().mul(&self.k.mul(&qd));
        let cross = qd.transpose().mul(&self.c.mul(&q));
        let potential = q.transpose().mul(&self.v.mul(&q));
        half.clone() * kinetic.get(0, 0).clone()
            + cross.get(0, 0).clone()
            + half * potential.get(0, 0).clone()
    }

    /// Variational derivative `δS/δq = (Cᵀ − C) q̇ + V q` for first-order
    /// Lagrangians (vanishing `K`), where no accelerations appear.
    pub fn first_order_variational_derivative(&self, q: &[S], q_dot: &[S]) -> Result<Vec<S>> {
        if !self.k.is_exactly_zero() {
            return Err(LagrangianError::NotFirstOrder);
        }
        let q = DenseMat::column(q);
        let qd = DenseMat::column(q_dot);
        let first = self.c.transpose().sub(&self.c).mul(&qd);
        let second = self.v.mul(&q);
        Ok((0..self.dim())
            .map(|i| first.get(i, 0).clone() + second.get(i, 0).clone())
            .collect())
    }

    /// The Euler–Lagrange content: `(K, antisym C, V)` on the same chart.
    pub fn el_normal_form(&self) -> ElNormalForm<S> {
        ElNormalForm {
            chart: self.chart.clone(),
            k: self.k.clone(),
            c_a: self.c.antisymmetric_part(),
            v: self.v.clone(),
        }
    }
}

/// Euler–Lagrange normal form: what survives when total time derivatives
/// are discarded. Two Lagrangians with equal normal forms yield identical
/// equations of motion.
#[derive(Debug, Clone, PartialEq)]
pub struct ElNormalForm<S> {
    chart: Vec<String>,
    k: DenseMat<S>,
    c_a: DenseMat<S>,
    v: DenseMat<S>,
}

impl<S: LagScalar> ElNormalForm<S> {
    pub fn chart(&self) -> &[String] {
        &self.chart
    }

    pub fn k(&self) -> &DenseMat<S> {
        &self.k
    }

    pub fn c_a(&self) -> &DenseMat<S> {
        &self.c_a
    }

    pub fn v(&self) -> &DenseMat<S> {
        &self.v
    }

    /// Largest entry magnitude across the block differences.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        if self.chart != other.chart {
            return Err(LagrangianError::ChartMismatch {
                expected: self.chart.join(","),
                got: other.chart.join(","),
            });
        }
        Ok(self
            .k
            .sub(&other.k)
            .max_magnitude()
            .max(self.c_a.sub(&other.c_a).max_magnitude())
            .max(self.v.sub(&other.v).max_magnitude()))
    }

    /// Entry-for-entry identity (meaningful in exact arithmetic).
    pub fn is_identical(&self, other: &Self) -> Result<bool> {
        if self.chart != other.chart {
            return Err(LagrangianError::ChartMismatch {
                expected: self.chart.join(","),
                got: other.chart.join(","),
            });
        }
        Ok(self.k == other.k && self.c_a == other.c_a && self.v == other.v)
    }
}

/// Free-function form of [`QuadraticLagrangian::el_normal_form`].
pub fn el_normal_form<S: LagScalar>(l: &QuadraticLagrangian<S>) -> ElNormalForm<S> {
    l.el_normal_form()
}

// ---------------------------------------------------------------------------
// Constant matrices and builtin Lagrangians
// ---------------------------------------------------------------------------

/// Antisymmetric symbol as a matrix, `ε₁₂ = +1`.
pub fn epsilon_matrix<S: LagScalar>() -> DenseMat<S> {
    DenseMat::from_rows(&[
        vec![S::zero(), S::one()],
        vec![-S::one(), S::zero()],
    ])
}

/// First Pauli matrix `σ₁`.
pub fn sigma1_matrix<S: LagScalar>() -> DenseMat<S> {
    DenseMat::from_rows(&[
        vec![S::zero(), S::one()],
        vec![S::one(), S::zero()],
    ])
}

/// Pseudo-Euclidean plane metric `g = diag(1, −1)`.
pub fn hyperbolic_metric<S: LagScalar>() -> DenseMat<S> {
    DenseMat::from_rows(&[
        vec![S::one(), S::zero()],
        vec![S::zero(), -S::one()],
    ])
}

/// The catalogue of planar-oscillator Lagrangians the toolkit audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagrangianKind {
    /// `½ẋ² − ½ω²x²` on chart `[x]`.
    Direct1d,
    /// `ẋẏ − ω²xy` on chart `[x, y]`.
    Indirect2var,
    /// `½g_ij ẋᵢẋⱼ − ½ω²g_ij xᵢxⱼ` on chart `[x1, x2]`.
    IndirectHyperbolic,
    /// `½ẋᵢẋᵢ − ½ω²xᵢxᵢ` on chart `[x1, x2]`.
    BidimensionalDirect,
    /// `+ωε_ij xᵢẋⱼ − ω²xᵢxᵢ` (left-handed first-order mode).
    ChiralPlus,
    /// `−ωε_ij xᵢẋⱼ − ω²xᵢxᵢ` (right-handed first-order mode).
    ChiralMinus,
    /// `+iωε_ij xᵢẋⱼ − ω²g_ij xᵢxⱼ` (complex-valued hyperbolic mode).
    PseudochiralPlus,
    /// `−iωε_ij xᵢẋⱼ − ω²g_ij xᵢxⱼ`.
    PseudochiralMinus,
}

impl LagrangianKind {
    pub const ALL: [LagrangianKind; 8] = [
        LagrangianKind::Direct1d,
        LagrangianKind::Indirect2var,
        LagrangianKind::IndirectHyperbolic,
        LagrangianKind::BidimensionalDirect,
        LagrangianKind::ChiralPlus,
        LagrangianKind::ChiralMinus,
        LagrangianKind::PseudochiralPlus,
        LagrangianKind::PseudochiralMinus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LagrangianKind::Direct1d => "direct_1d",
            LagrangianKind::Indirect2var => "indirect_2var",
            LagrangianKind::IndirectHyperbolic => "indirect_hyperbolic",
            LagrangianKind::BidimensionalDirect => "bidimensional_direct",
            LagrangianKind::ChiralPlus => "chiral_plus",
            LagrangianKind::ChiralMinus => "chiral_minus",
            LagrangianKind::PseudochiralPlus => "pseudochiral_plus",
            LagrangianKind::PseudochiralMinus => "pseudochiral_minus",
        }
    }
}

impl std::str::FromStr for LagrangianKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        LagrangianKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown lagrangian kind `{s}`"))
    }
}

fn chart_of(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Build one of the named Lagrangians at frequency `omega` (nonzero).
///
/// Conventions: `ε₁₂ = +1`, `σ₁ = [[0,1],[1,0]]`, `g = diag(1,−1)`. The
/// term `c·ε_ij xᵢẋⱼ` has velocity-coordinate block `C = −c·ε`; the
/// potential `−ω²x·x` has `V = −2ω²·I` under the `½qᵀVq` convention.
pub fn builtin_lagrangian<S: LagScalar>(
    kind: LagrangianKind,
    omega: &S,
) -> Result<QuadraticLagrangian<S>> {
    if omega.is_exactly_zero() {
        return Err(LagrangianError::ZeroOmega);
    }
    let w = omega.clone();
    let w2 = w.clone() * w.clone();
    let two = S::from_int(2);
    match kind {
        LagrangianKind::Direct1d => QuadraticLagrangian::new(
            chart_of(&["x"]),
            DenseMat::identity(1),
            DenseMat::zeros(1, 1),
            DenseMat::from_rows(&[vec![-w2]]),
        ),
        LagrangianKind::Indirect2var => QuadraticLagrangian::new(
            chart_of(&["x", "y"]),
            sigma1_matrix(),
            DenseMat::zeros(2, 2),
            sigma1_matrix().scale(&-w2),
        ),
        LagrangianKind::IndirectHyperbolic => QuadraticLagrangian::new(
            chart_of(&["x1", "x2"]),
            hyperbolic_metric(),
            DenseMat::zeros(2, 2),
            hyperbolic_metric().scale(&-w2),
        ),
        LagrangianKind::BidimensionalDirect => QuadraticLagrangian::new(
            chart_of(&["x1", "x2"]),
            DenseMat::identity(2),
            DenseMat::zeros(2, 2),
            DenseMat::identity(2).scale(&-w2),
        ),
        LagrangianKind::ChiralPlus | LagrangianKind::ChiralMinus => {
            let sign = if kind == LagrangianKind::ChiralPlus {
                S::one()
            } else {
                -S::one()
            };
            QuadraticLagrangian::new(
                chart_of(&["x1", "x2"]),
                DenseMat::zeros(2, 2),
                epsilon_matrix().scale(&-(sign * w)),
                DenseMat::identity(2).scale(&-(two * w2)),
            )
        }
        LagrangianKind::PseudochiralPlus | LagrangianKind::PseudochiralMinus => {
            let sign = if kind == LagrangianKind::PseudochiralPlus {
                S::i()
            } else {
                -S::i()
            };
            QuadraticLagrangian::new(
                chart_of(&["x1", "x2"]),
                DenseMat::zeros(2, 2),
                epsilon_matrix().scale(&-(sign * w)),
                hyperbolic_metric().scale(&-(two * w2)),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Coordinate maps
// ---------------------------------------------------------------------------

/// Invertible linear change of variables `q_source = M · q_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCoordinateMap<S> {
    source_chart: Vec<String>,
    target_chart: Vec<String>,
    matrix: DenseMat<S>,
}

impl<S: LagScalar> LinearCoordinateMap<S> {
    pub fn new(
        source_chart: Vec<String>,
        target_chart: Vec<String>,
        matrix: DenseMat<S>,
    ) -> Result<Self> {
        let n = source_chart.len();
        if target_chart.len() != n || matrix.nrows() != n || matrix.ncols() != n {
            return Err(LagrangianError::BlockShape {
                block: "map",
                expected: n,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.inverse().is_none() {
            return Err(LagrangianError::SingularMap);
        }
        Ok(LinearCoordinateMap {
            source_chart,
            target_chart,
            matrix,
        })
    }

    pub fn source_chart(&self) -> &[String] {
        &self.source_chart
    }

    pub fn target_chart(&self) -> &[String] {
        &self.target_chart
    }

    pub fn matrix(&self) -> &DenseMat<S> {
        &self.matrix
    }

    /// The inverse change of variables (charts swapped, matrix inverted).
    pub fn inverse_map(&self) -> Self {
        LinearCoordinateMap {
            source_chart: self.target_chart.clone(),
            target_chart: self.source_chart.clone(),
            matrix: self
                .matrix
                .inverse()
                .expect("validated invertible at construction"),
        }
    }
}

/// Substitute `q = M q'` into `L`; blocks transform as `B ↦ MᵀBM`.
pub fn apply_map<S: LagScalar>(
    l: &QuadraticLagrangian<S>,
    map: &LinearCoordinateMap<S>,
) -> Result<QuadraticLagrangian<S>> {
    if l.chart != map.source_chart {
        return Err(LagrangianError::ChartMismatch {
            expected: l.chart.join(","),
            got: map.source_chart.join(","),
        });
    }
    let m = &map.matrix;
    let mt = m.transpose();
    QuadraticLagrangian::new(
        map.target_chart.clone(),
        mt.mul(&l.k.mul(m)),
        mt.mul(&l.c.mul(m)),
        mt.mul(&l.v.mul(m)),
    )
}

/// Float-only named maps.
pub mod maps {
    use super::*;

    /// Half-sum/half-difference map `x = (x1+x2)/√2`, `y = (x1−x2)/√2`
    /// taking the two-variable indirect chart `[x, y]` to hyperbolic
    /// coordinates `[x1, x2]`.
    pub fn hyperbolic_map() -> LinearCoordinateMap<Complex64> {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        LinearCoordinateMap::new(
            chart_of(&["x", "y"]),
            chart_of(&["x1", "x2"]),
            DenseMat::from_rows(&[vec![r, r], vec![r, -r]]),
        )
        .expect("fixed invertible map")
    }

    /// Planar rotation by `theta` on the chart `[x1, x2]`.
    pub fn rotation_map(theta: f64) -> LinearCoordinateMap<Complex64> {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::new(theta.sin(), 0.0);
        LinearCoordinateMap::new(
            chart_of(&["x1", "x2"]),
            chart_of(&["x1", "x2"]),
            DenseMat::from_rows(&[vec![c, s], vec![-s, c]]),
        )
        .expect("rotations are invertible")
    }
}

// ---------------------------------------------------------------------------
// Auxiliary elimination
// ---------------------------------------------------------------------------

fn is_negligible<S: LagScalar>(value: &S, scale: f64) -> bool {
    if S::EXACT {
        value.is_exactly_zero()
    } else {
        value.magnitude() <= 1e-12 * scale.max(1.0)
    }
}

fn chart_indices(chart: &[String], names: &[&str]) -> Result<Vec<usize>> {
    let mut idx = Vec::with_capacity(names.len());
    for name in names {
        let pos = chart
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| LagrangianError::UnknownCoordinate(name.to_string()))?;
        if idx.contains(&pos) {
            return Err(LagrangianError::DuplicateCoordinate(name.to_string()));
        }
        idx.push(pos);
    }
    Ok(idx)
}

/// Eliminate algebraic auxiliary coordinates by their stationarity
/// equations.
///
/// The `aux` coordinates must have no kinetic term (their `K` rows and
/// columns vanish). Velocity couplings `ṡᵀC_ss s` (symmetric part) and
/// `ṡᵀC_sr r` are first removed by subtracting total time derivatives,
/// which transfers them into the retained rows; a genuinely first-order
/// aux sector (antisymmetric `C_ss`) is an error. The stationarity system
/// `V_ss s = −(C_rsᵀ ṙ + V_sr r)` is then solved and substituted, giving
///
/// `K_red = K_rr − C_rs V_ss⁻¹ C_rsᵀ`,
/// `C_red = C_rr − C_rs V_ss⁻¹ V_sr`,
/// `V_red = V_rr − V_rs V_ss⁻¹ V_sr`.
pub fn eliminate_auxiliary<S: LagScalar>(
    l: &QuadraticLagrangian<S>,
    aux: &[&str],
) -> Result<QuadraticLagrangian<S>> {
    let s_idx = chart_indices(&l.chart, aux)?;
    let r_idx: Vec<usize> = (0..l.dim()).filter(|i| !s_idx.contains(i)).collect();
    let k_scale = l.k.max_magnitude();
    let c_scale = l.c.max_magnitude();

    // No kinetic terms for the auxiliaries.
    for (&si, name) in s_idx.iter().zip(aux) {
        for j in 0..l.dim() {
            if !is_negligible(l.k.get(si, j), k_scale) || !is_negligible(l.k.get(j, si), k_scale) {
                return Err(LagrangianError::AuxHasKineticTerm(name.to_string()));
            }
        }
    }

    // Aux-aux velocity couplings must be a pure total derivative
    // (symmetric block); an antisymmetric part is first-order dynamics.
    let c_ss = l.c.block(&s_idx, &s_idx);
    let c_ss_anti = c_ss.antisymmetric_part();
    if !c_ss_anti
        .to_rows()
        .iter()
        .flatten()
        .all(|e| is_negligible(e, c_scale))
    {
        return Err(LagrangianError::AuxNotAlgebraic(aux[0].to_string()));
    }

    // Transfer ṡᵀC_sr r couplings to the retained rows via a total
    // derivative: C_rs ← C_rs − C_srᵀ, C_sr ← 0.
    let c_rs = l
        .c
        .block(&r_idx, &s_idx)
        .sub(&l.c.block(&s_idx, &r_idx).transpose());
    let c_rr = l.c.block(&r_idx, &r_idx);

    let v_ss = l.v.block(&s_idx, &s_idx);
    let v_sr = l.v.block(&s_idx, &r_idx);
    let v_rs = l.v.block(&r_idx, &s_idx);
    let v_rr = l.v.block(&r_idx, &r_idx);
    let k_rr = l.k.block(&r_idx, &r_idx);

    let v_ss_inv = v_ss.inverse().ok_or(LagrangianError::AuxSystemSingular)?;

    let k_red = k_rr.sub(&c_rs.mul(&v_ss_inv).mul(&c_rs.transpose()));
    let c_red = c_rr.sub(&c_rs.mul(&v_ss_inv).mul(&v_sr));
    let v_red = v_rr.sub(&v_rs.mul(&v_ss_inv).mul(&v_sr));

    let chart: Vec<String> = r_idx.iter().map(|&i| l.chart[i].clone()).collect();
    QuadraticLagrangian::new(chart, k_red, c_red, v_red)
}

/// Restrict `L` to a sub-chart after verifying the dropped coordinates
/// decouple (their normal-form rows and columns vanish); the symmetric
/// `C` couplings that remain are pure total derivatives and are discarded
/// with the coordinates.
pub fn drop_inert_coordinates<S: LagScalar>(
    l: &QuadraticLagrangian<S>,
    dropped: &[&str],
) -> Result<QuadraticLagrangian<S>> {
    let d_idx = chart_indices(&l.chart, dropped)?;
    let keep_idx: Vec<usize> = (0..l.dim()).filter(|i| !d_idx.contains(i)).collect();
    let nf = l.el_normal_form();
    let scale = nf
        .k
        .max_magnitude()
        .max(nf.c_a.max_magnitude())
        .max(nf.v.max_magnitude());
    for (&di, name) in d_idx.iter().zip(dropped) {
        for j in 0..l.dim() {
            for block in [&nf.k, &nf.c_a, &nf.v] {
                for entry in [block.get(di, j), block.get(j, di)] {
                    if !is_negligible(entry, scale) {
                        return Err(LagrangianError::ResidualCoupling {
                            coordinate: name.to_string(),
                            magnitude: entry.magnitude(),
                        });
                    }
                }
            }
        }
    }
    let chart: Vec<String> = keep_idx.iter().map(|&i| l.chart[i].clone()).collect();
    QuadraticLagrangian::new(
        chart,
        l.k.block(&keep_idx, &keep_idx),
        l.c.block(&keep_idx, &keep_idx),
        l.v.block(&keep_idx, &keep_idx),
    )
}

// ---------------------------------------------------------------------------
// Soldering
// ---------------------------------------------------------------------------

/// Which pair of first-order modes is fused, and what the fusion yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolderKind {
    /// Opposite chiral modes fuse into the planar oscillator.
    ChiralToDirect,
    /// Opposite pseudo-chiral modes fuse into the hyperbolic oscillator.
    PseudochiralToIndirect,
}

impl SolderKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolderKind::ChiralToDirect => "chiral_to_direct",
            SolderKind::PseudochiralToIndirect => "pseudochiral_to_indirect",
        }
    }

    /// The `+` and `−` mode kinds fused by this soldering.
    pub fn mode_kinds(&self) -> (LagrangianKind, LagrangianKind) {
        match self {
            SolderKind::ChiralToDirect => {
                (LagrangianKind::ChiralPlus, LagrangianKind::ChiralMinus)
            }
            SolderKind::PseudochiralToIndirect => (
                LagrangianKind::PseudochiralPlus,
                LagrangianKind::PseudochiralMinus,
            ),
        }
    }

    /// The builtin kind the reduced Lagrangian must reproduce.
    pub fn target_kind(&self) -> LagrangianKind {
        match self {
            SolderKind::ChiralToDirect => LagrangianKind::BidimensionalDirect,
            SolderKind::PseudochiralToIndirect => LagrangianKind::IndirectHyperbolic,
        }
    }

    // Rotational coefficient of the `+` mode (`c` in `c·ε_ij xᵢẋⱼ`) and
    // the metric entering its potential and currents.
    fn mode_data<S: LagScalar>(&self, omega: &S) -> (S, DenseMat<S>) {
        match self {
            SolderKind::ChiralToDirect => (omega.clone(), DenseMat::identity(2)),
            SolderKind::PseudochiralToIndirect => {
                (S::i() * omega.clone(), hyperbolic_metric())
            }
        }
    }
}

impl std::str::FromStr for SolderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "chiral_to_direct" => Ok(SolderKind::ChiralToDirect),
            "pseudochiral_to_indirect" => Ok(SolderKind::PseudochiralToIndirect),
            other => Err(format!("unknown solder kind `{other}`")),
        }
    }
}

/// Result of a soldering run: the gauge-invariant composite on
/// `(y, z, B)` and the reduction to the difference coordinate.
#[derive(Debug, Clone)]
pub struct Soldered<S> {
    pub composite: QuadraticLagrangian<S>,
    pub reduced: QuadraticLagrangian<S>,
}

fn set_block<S: LagScalar>(
    m: &mut DenseMat<S>,
    rows: &[usize],
    cols: &[usize],
    block: &DenseMat<S>,
) {
    for (bi, &r) in rows.iter().enumerate() {
        for (bj, &c) in cols.iter().enumerate() {
            m.set(r, c, block.get(bi, bj).clone());
        }
    }
}

/// Build the gauge-invariant composite
/// `L₊(y) + L₋(z) − Bᵢ(Jᵢ⁺(y) + Jᵢ⁻(z)) − 2ω² G_ij BᵢBⱼ`
/// on the chart `[y1, y2, z1, z2, B1, B2]`.
pub fn solder_composite<S: LagScalar>(
    kind: SolderKind,
    omega: &S,
) -> Result<QuadraticLagrangian<S>> {
    if omega.is_exactly_zero() {
        return Err(LagrangianError::ZeroOmega);
    }
    let (plus_kind, minus_kind) = kind.mode_kinds();
    let l_plus = builtin_lagrangian::<S>(plus_kind, omega)?;
    let l_minus = builtin_lagrangian::<S>(minus_kind, omega)?;
    let (c_plus, metric) = kind.mode_data::<S>(omega);
    let c_minus = -c_plus.clone();
    let w2 = omega.clone() * omega.clone();
    let two = S::from_int(2);
    let four = S::from_int(4);

    let y_idx = [0usize, 1];
    let z_idx = [2usize, 3];
    let b_idx = [4usize, 5];

    let k = DenseMat::zeros(6, 6);

    let mut c = DenseMat::zeros(6, 6);
    set_block(&mut c, &y_idx, &y_idx, l_plus.c());
    set_block(&mut c, &z_idx, &z_idx, l_minus.c());
    // −Bᵢ·2c_σ ε_ij q̇ⱼ contributes C[q_j, B_i] = −2 c_σ ε_ij, i.e. the
    // block 2 c_σ ε in (row=coordinate, column=B) layout.
    let eps = epsilon_matrix::<S>();
    set_block(&mut c, &y_idx, &b_idx, &eps.scale(&(two.clone() * c_plus)));
    set_block(&mut c, &z_idx, &b_idx, &eps.scale(&(two.clone() * c_minus)));

    let mut v = DenseMat::zeros(6, 6);
    set_block(&mut v, &y_idx, &y_idx, l_plus.v());
    set_block(&mut v, &z_idx, &z_idx, l_minus.v());
    // +2ω² Bᵢ G_ij qⱼ, symmetric in (B, q).
    let coupling = metric.scale(&(two * w2.clone()));
    set_block(&mut v, &b_idx, &y_idx, &coupling);
    set_block(&mut v, &y_idx, &b_idx, &coupling.transpose());
    set_block(&mut v, &b_idx, &z_idx, &coupling);
    set_block(&mut v, &z_idx, &b_idx, &coupling.transpose());
    // −2ω² G_ij BᵢBⱼ.
    set_block(&mut v, &b_idx, &b_idx, &metric.scale(&-(four * w2)));

    QuadraticLagrangian::new(
        chart_of(&["y1", "y2", "z1", "z2", "B1", "B2"]),
        k,
        c,
        v,
    )
}

/// Run the full soldering: build the composite, eliminate the `B` field,
/// pass to the difference coordinate `x = y − z` (with spectator
/// `u = z`), and drop the decoupled spectator.
///
/// The reduction closes with the composite coefficients exactly as
/// constructed — no internal rescaling is applied at any stage — and the
/// reduced normal form equals the builtin target
/// ([`SolderKind::target_kind`]) exactly in rational arithmetic.
pub fn solder<S: LagScalar>(kind: SolderKind, omega: &S) -> Result<Soldered<S>> {
    let composite = solder_composite(kind, omega)?;
    let no_b = eliminate_auxiliary(&composite, &["B1", "B2"])?;

    // (y, z) = M (x, u) with y = x + u, z = u, so x = y − z.
    let one = S::one();
    let zero = S::zero();
    let m = DenseMat::from_rows(&[
        vec![one.clone(), zero.clone(), one.clone(), zero.clone()],
        vec![zero.clone(), one.clone(), zero.clone(), one.clone()],
        vec![zero.clone(), zero.clone(), one.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
    ]);
    let map = LinearCoordinateMap::new(
        chart_of(&["y1", "y2", "z1", "z2"]),
        chart_of(&["x1", "x2", "u1", "u2"]),
        m,
    )?;
    let on_xu = apply_map(&no_b, &map)?;
    let reduced = drop_inert_coordinates(&on_xu, &["u1", "u2"])?;
    Ok(Soldered { composite, reduced })
}

/// The builtin Lagrangian a soldering must reproduce.
pub fn solder_target<S: LagScalar>(
    kind: SolderKind,
    omega: &S,
) -> Result<QuadraticLagrangian<S>> {
    builtin_lagrangian(kind.target_kind(), omega)
}

/// Point of evaluation for the gauge-variation identity.
#[derive(Debug, Clone)]
pub struct SolderingState<S> {
    pub y: [S; 2],
    pub y_dot: [S; 2],
    pub z: [S; 2],
    pub z_dot: [S; 2],
}

/// Both sides of the gauge-variation identity `δL = Λᵢ(Jᵢ⁺(y) + Jᵢ⁻(z))`.
#[derive(Debug, Clone)]
pub struct CurrentCheck<S> {
    /// First-order change of `L₊(y) + L₋(z)` under `δy = δz = Λ`,
    /// computed from the variational derivatives (total derivatives
    /// discarded).
    pub delta_l: S,
    /// Contraction `Λᵢ(Jᵢ⁺(y) + Jᵢ⁻(z))` with the closed-form currents
    /// `Jᵢ^σ(x) = 2(c_σ ε_ij ẋⱼ − ω² G_ij xⱼ)`.
    pub current_contraction: S,
}

/// Evaluate the shift of the mode sum under the rigid variation
/// `δyᵢ = δzᵢ = Λᵢ` along with the closed-form current contraction, so
/// callers can assert the two agree.
///
/// At `y = z` the rotational pieces of the two currents cancel and the
/// contraction collapses to `−4ω² Λ·(G y)`.
pub fn soldering_currents<S: LagScalar>(
    kind: SolderKind,
    omega: &S,
    state: &SolderingState<S>,
    lambda: &[S; 2],
) -> Result<CurrentCheck<S>> {
    if omega.is_exactly_zero() {
        return Err(LagrangianError::ZeroOmega);
    }
    let (plus_kind, minus_kind) = kind.mode_kinds();
    let l_plus = builtin_lagrangian::<S>(plus_kind, omega)?;
    let l_minus = builtin_lagrangian::<S>(minus_kind, omega)?;

    let d_plus = l_plus.first_order_variational_derivative(&state.y, &state.y_dot)?;
    let d_minus = l_minus.first_order_variational_derivative(&state.z, &state.z_dot)?;
    let mut delta_l = S::zero();
    for i in 0..2 {
        delta_l = delta_l + lambda[i].clone() * (d_plus[i].clone() + d_minus[i].clone());
    }

    let (c_plus, metric) = kind.mode_data::<S>(omega);
    let c_minus = -c_plus.clone();
    let w2 = omega.clone() * omega.clone();
    let two = S::from_int(2);
    let eps = epsilon_matrix::<S>();
    let current = |coeff: &S, q: &[S; 2], q_dot: &[S; 2]| -> Vec<S> {
        (0..2)
            .map(|i| {
                let mut rot = S::zero();
                let mut pot = S::zero();
                for j in 0..2 {
                    rot = rot + eps.get(i, j).clone() * q_dot[j].clone();
                    pot = pot + metric.get(i, j).clone() * q[j].clone();
                }
                two.clone() * (coeff.clone() * rot - w2.clone() * pot)
            })
            .collect()
    };
    let j_plus = current(&c_plus, &state.y, &state.y_dot);
    let j_minus = current(&c_minus, &state.z, &state.z_dot);
    let mut contraction = S::zero();
    for i in 0..2 {
        contraction = contraction + lambda[i].clone() * (j_plus[i].clone() + j_minus[i].clone());
    }

    Ok(CurrentCheck {
        delta_l,
        current_contraction: contraction,
    })
}

// ---------------------------------------------------------------------------
// Symmetry variations
// ---------------------------------------------------------------------------

/// Exact first-order change of `L` under `δq = θ G q`, reported as the
/// dominant coefficient of the normal form of the variation (zero iff the
/// variation is a pure total derivative).
pub fn symmetry_variation<S: LagScalar>(
    l: &QuadraticLagrangian<S>,
    generator: &DenseMat<S>,
    theta: &S,
) -> Result<S> {
    let n = l.dim();
    if generator.nrows() != n || generator.ncols() != n {
        return Err(LagrangianError::BlockShape {
            block: "generator",
            expected: n,
            rows: generator.nrows(),
            cols: generator.ncols(),
        });
    }
    let gt = generator.transpose();
    let dk = gt.mul(&l.k).add(&l.k.mul(generator));
    let dc = gt.mul(&l.c).add(&l.c.mul(generator));
    let dv = gt.mul(&l.v).add(&l.v.mul(generator));
    // Normal form of the variation: symmetric part of C is discarded.
    let dc_a = dc.antisymmetric_part();
    let mut dominant = S::zero();
    for block in [&dk, &dc_a, &dv] {
        let candidate = block.dominant_entry();
        if candidate.magnitude() > dominant.magnitude() {
            dominant = candidate;
        }
    }
    Ok(theta.clone() * dominant)
}

// ---------------------------------------------------------------------------
// JSON serialization (floating-point instantiation)
// ---------------------------------------------------------------------------

/// JSON round-tripping for `QuadraticLagrangian<Complex64>` with schema
/// `{chart: [names], K: [[...]], C: [[...]], V: [[...]]}` and complex
/// entries encoded as `[re, im]`.
pub mod json {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct LagrangianJson {
        chart: Vec<String>,
        #[serde(rename = "K")]
        k: Vec<Vec<[f64; 2]>>,
        #[serde(rename = "C")]
        c: Vec<Vec<[f64; 2]>>,
        #[serde(rename = "V")]
        v: Vec<Vec<[f64; 2]>>,
    }

    fn mat_to_rows(m: &DenseMat<Complex64>) -> Vec<Vec<[f64; 2]>> {
        m.to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|e| [e.re, e.im]).collect())
            .collect()
    }

    fn rows_to_mat(block: &'static str, n: usize, rows: &[Vec<[f64; 2]>]) -> Result<DenseMat<Complex64>> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(LagrangianError::BlockShape {
                block,
                expected: n,
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        Ok(DenseMat::from_fn(n, n, |r, c| {
            Complex64::new(rows[r][c][0], rows[r][c][1])
        }))
    }

    pub fn to_json(l: &QuadraticLagrangian<Complex64>) -> String {
        let shadow = LagrangianJson {
            chart: l.chart().to_vec(),
            k: mat_to_rows(l.k()),
            c: mat_to_rows(l.c()),
            v: mat_to_rows(l.v()),
        };
        serde_json::to_string_pretty(&shadow).expect("serialization of plain data cannot fail")
    }

    pub fn from_json(text: &str) -> Result<QuadraticLagrangian<Complex64>> {
        let shadow: LagrangianJson =
            serde_json::from_str(text).map_err(|e| LagrangianError::Json(e.to_string()))?;
        let n = shadow.chart.len();
        QuadraticLagrangian::new(
            shadow.chart.clone(),
            rows_to_mat("K", n, &shadow.k)?,
            rows_to_mat("C", n, &shadow.c)?,
            rows_to_mat("V", n, &shadow.v)?,
        )
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::scalar::rational_scalar;
    use super::*;
    use num::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rat(num: i64, den: i64) -> CRational {
        <CRational as LagScalar>::from_ratio(num, den)
    }

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DenseMat<Complex64> {
        let raw = DenseMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        raw.symmetric_part()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DenseMat<Complex64> {
        DenseMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn builtin_blocks_match_conventions() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Direct1d, &c64(1.0)).unwrap();
        assert_eq!(l.chart(), ["x"]);
        assert_eq!(*l.k().get(0, 0), c64(1.0));
        assert_eq!(*l.v().get(0, 0), c64(-1.0));
        assert!(l.c().is_exactly_zero());

        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Indirect2var, &c64(1.0)).unwrap();
        assert_eq!(l.chart(), ["x", "y"]);
        assert_eq!(*l.k().get(0, 1), c64(1.0));
        assert_eq!(*l.k().get(0, 0), c64(0.0));
        assert_eq!(*l.v().get(0, 1), c64(-1.0));

        let w = 1.7;
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::ChiralPlus, &c64(w)).unwrap();
        assert_eq!(l.chart(), ["x1", "x2"]);
        assert!(l.k().is_exactly_zero());
        assert_eq!(*l.c().get(0, 1), c64(-w));
        assert_eq!(*l.c().get(1, 0), c64(w));
        assert_eq!(*l.v().get(0, 0), c64(-2.0 * w * w));
        assert_eq!(*l.v().get(1, 1), c64(-2.0 * w * w));

        let l = builtin_lagrangian::<Complex64>(LagrangianKind::PseudochiralPlus, &c64(w)).unwrap();
        assert_eq!(*l.c().get(0, 1), Complex64::new(0.0, -w));
        assert_eq!(*l.c().get(1, 0), Complex64::new(0.0, w));
        assert_eq!(*l.v().get(0, 0), c64(-2.0 * w * w));
        assert_eq!(*l.v().get(1, 1), c64(2.0 * w * w));

        assert_eq!(
            builtin_lagrangian::<Complex64>(LagrangianKind::Direct1d, &c64(0.0)),
            Err(LagrangianError::ZeroOmega)
        );
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in LagrangianKind::ALL {
            assert_eq!(kind.name().parse::<LagrangianKind>().unwrap(), kind);
        }
        assert!("nonsense".parse::<LagrangianKind>().is_err());
    }

    #[test]
    fn symmetric_velocity_coupling_is_pure_surface_term() {
        let s = DenseMat::from_rows(&[vec![c64(2.0), c64(0.5)], vec![c64(0.5), c64(-1.0)]]);
        let l = QuadraticLagrangian::new(
            chart_of(&["x1", "x2"]),
            DenseMat::identity(2),
            s,
            DenseMat::identity(2).scale(&c64(-1.0)),
        )
        .unwrap();
        assert!(l.el_normal_form().c_a().is_exactly_zero());
    }

    #[test]
    fn direct_normal_form_is_itself() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Direct1d, &c64(2.0)).unwrap();
        let nf = l.el_normal_form();
        assert_eq!(nf.k(), l.k());
        assert_eq!(nf.v(), l.v());
        assert!(nf.c_a().is_exactly_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn normal_form_invariant_under_total_derivatives(seed in 0u64..1_000_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 3;
            let l = QuadraticLagrangian::new(
                (0..n).map(|i| format!("q{i}")).collect(),
                random_symmetric(&mut rng, n),
                random_matrix(&mut rng, n),
                random_symmetric(&mut rng, n),
            ).unwrap();
            let s = random_symmetric(&mut rng, n);
            // Adding d/dt(½ qᵀS q) shifts C by S and nothing else.
            let shifted = QuadraticLagrangian::new(
                l.chart().to_vec(),
                l.k().clone(),
                l.c().add(&s),
                l.v().clone(),
            ).unwrap();
            let dev = l.el_normal_form().max_deviation(&shifted.el_normal_form()).unwrap();
            prop_assert!(dev < 1e-12, "normal form moved by {dev}");
        }

        #[test]
        fn map_round_trip_preserves_normal_form(seed in 0u64..1_000_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 2;
            let l = QuadraticLagrangian::new(
                chart_of(&["a", "b"]),
                random_symmetric(&mut rng, n),
                random_matrix(&mut rng, n),
                random_symmetric(&mut rng, n),
            ).unwrap();
            // Diagonally dominant, hence well-conditioned and invertible.
            let a = Complex64::new(rng.gen_range(-0.6..0.6), 0.0);
            let b = Complex64::new(rng.gen_range(-0.6..0.6), 0.0);
            let m = DenseMat::from_rows(&[vec![c64(1.0), a], vec![b, c64(1.0)]]);
            let fwd = LinearCoordinateMap::new(
                chart_of(&["a", "b"]),
                chart_of(&["s", "t"]),
                m,
            ).unwrap();
            let back = fwd.inverse_map();
            let mut round = apply_map(&apply_map(&l, &fwd).unwrap(), &back).unwrap();
            // inverse_map swaps charts, so the round trip lands back on [a, b].
            prop_assert_eq!(round.chart(), l.chart());
            round = QuadraticLagrangian::new(
                l.chart().to_vec(),
                round.k().clone(),
                round.c().clone(),
                round.v().clone(),
            ).unwrap();
            let dev = l.el_normal_form().max_deviation(&round.el_normal_form()).unwrap();
            prop_assert!(dev < 1e-9, "round trip deviated by {dev}");
        }
    }

    #[test]
    fn hyperbolic_map_diagonalizes_two_variable_form() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Indirect2var, &c64(1.0)).unwrap();
        let mapped = apply_map(&l, &maps::hyperbolic_map()).unwrap();
        let target =
            builtin_lagrangian::<Complex64>(LagrangianKind::IndirectHyperbolic, &c64(1.0)).unwrap();
        let dev = mapped
            .el_normal_form()
            .max_deviation(&target.el_normal_form())
            .unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn rotation_preserves_planar_form() {
        let l =
            builtin_lagrangian::<Complex64>(LagrangianKind::BidimensionalDirect, &c64(1.3)).unwrap();
        let mapped = apply_map(&l, &maps::rotation_map(0.7)).unwrap();
        let dev = mapped
            .el_normal_form()
            .max_deviation(&l.el_normal_form())
            .unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn map_errors_are_reported() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::BidimensionalDirect, &c64(1.0))
            .unwrap();
        let wrong_chart = LinearCoordinateMap::new(
            chart_of(&["a", "b"]),
            chart_of(&["s", "t"]),
            DenseMat::identity(2),
        )
        .unwrap();
        assert!(matches!(
            apply_map(&l, &wrong_chart),
            Err(LagrangianError::ChartMismatch { .. })
        ));
        let singular = DenseMat::from_rows(&[vec![c64(1.0), c64(1.0)], vec![c64(1.0), c64(1.0)]]);
        assert_eq!(
            LinearCoordinateMap::new(chart_of(&["a", "b"]), chart_of(&["s", "t"]), singular)
                .unwrap_err(),
            LagrangianError::SingularMap
        );
    }

    /// `½ẋ² − ½ω²x² + b·x − ½b²` reduces by `b = x` to
    /// `½ẋ² − ½(ω²−1)x²`.
    fn coupled_auxiliary_example<S: LagScalar>(omega: &S) -> QuadraticLagrangian<S> {
        let w2 = omega.clone() * omega.clone();
        let k = DenseMat::from_rows(&[
            vec![S::one(), S::zero()],
            vec![S::zero(), S::zero()],
        ]);
        let v = DenseMat::from_rows(&[
            vec![-w2, S::one()],
            vec![S::one(), -S::one()],
        ]);
        QuadraticLagrangian::new(chart_of(&["x", "b"]), k, DenseMat::zeros(2, 2), v).unwrap()
    }

    #[test]
    fn eliminate_scalar_auxiliary_float() {
        let l = coupled_auxiliary_example::<Complex64>(&c64(2.0));
        let red = eliminate_auxiliary(&l, &["b"]).unwrap();
        assert_eq!(red.chart(), ["x"]);
        assert_eq!(*red.k().get(0, 0), c64(1.0));
        assert!((red.v().get(0, 0) - c64(-3.0)).norm() < 1e-15);
    }

    #[test]
    fn eliminate_scalar_auxiliary_exact() {
        let l = coupled_auxiliary_example::<CRational>(&rat(2, 1));
        let red = eliminate_auxiliary(&l, &["b"]).unwrap();
        assert_eq!(*red.k().get(0, 0), rat(1, 1));
        assert_eq!(*red.v().get(0, 0), rat(-3, 1));
    }

    #[test]
    fn eliminate_rejects_bad_auxiliaries() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::BidimensionalDirect, &c64(1.0))
            .unwrap();
        assert_eq!(
            eliminate_auxiliary(&l, &["x2"]).unwrap_err(),
            LagrangianError::AuxHasKineticTerm("x2".into())
        );
        assert_eq!(
            eliminate_auxiliary(&l, &["nope"]).unwrap_err(),
            LagrangianError::UnknownCoordinate("nope".into())
        );

        // Antisymmetric aux-aux velocity coupling: genuine first-order
        // dynamics, not an algebraic sector.
        let chiral =
            builtin_lagrangian::<Complex64>(LagrangianKind::ChiralPlus, &c64(1.0)).unwrap();
        assert_eq!(
            eliminate_auxiliary(&chiral, &["x1", "x2"]).unwrap_err(),
            LagrangianError::AuxNotAlgebraic("x1".into())
        );

        // Aux enters nothing quadratically: singular stationarity system.
        let mut v = DenseMat::zeros(2, 2);
        v.set(0, 0, c64(-1.0));
        let l = QuadraticLagrangian::new(
            chart_of(&["x", "s"]),
            DenseMat::zeros(2, 2),
            DenseMat::zeros(2, 2),
            v,
        )
        .unwrap();
        assert_eq!(
            eliminate_auxiliary(&l, &["s"]).unwrap_err(),
            LagrangianError::AuxSystemSingular
        );
    }

    /// Passing the mode sum to `(y, x)` with `z = y − x` leaves `y`
    /// algebraic (the chiral velocity terms cancel); eliminating it must
    /// land on the planar oscillator.
    fn difference_coordinate_reduction<S: LagScalar>(omega: &S) -> (ElNormalForm<S>, ElNormalForm<S>) {
        let l_plus = builtin_lagrangian::<S>(LagrangianKind::ChiralPlus, omega).unwrap();
        let l_minus = builtin_lagrangian::<S>(LagrangianKind::ChiralMinus, omega).unwrap();
        let mut k = DenseMat::zeros(4, 4);
        let mut c = DenseMat::zeros(4, 4);
        let mut v = DenseMat::zeros(4, 4);
        set_block(&mut k, &[0, 1], &[0, 1], l_plus.k());
        set_block(&mut k, &[2, 3], &[2, 3], l_minus.k());
        set_block(&mut c, &[0, 1], &[0, 1], l_plus.c());
        set_block(&mut c, &[2, 3], &[2, 3], l_minus.c());
        set_block(&mut v, &[0, 1], &[0, 1], l_plus.v());
        set_block(&mut v, &[2, 3], &[2, 3], l_minus.v());
        let sum = QuadraticLagrangian::new(chart_of(&["y1", "y2", "z1", "z2"]), k, c, v).unwrap();

        // (y, z) = M (y, x) with z = y − x.
        let one = S::one();
        let zero = S::zero();
        let m = DenseMat::from_rows(&[
            vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone(), zero.clone()],
            vec![one.clone(), zero.clone(), -one.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone(), -one.clone()],
        ]);
        let map = LinearCoordinateMap::new(
            chart_of(&["y1", "y2", "z1", "z2"]),
            chart_of(&["y1", "y2", "x1", "x2"]),
            m,
        )
        .unwrap();
        let on_yx = apply_map(&sum, &map).unwrap();
        let reduced = eliminate_auxiliary(&on_yx, &["y1", "y2"]).unwrap();
        let target = builtin_lagrangian::<S>(LagrangianKind::BidimensionalDirect, omega).unwrap();
        (reduced.el_normal_form(), target.el_normal_form())
    }

    #[test]
    fn difference_coordinate_reduction_float() {
        let (reduced, target) = difference_coordinate_reduction::<Complex64>(&c64(1.0));
        let dev = reduced.max_deviation(&target).unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn difference_coordinate_reduction_exact() {
        let (reduced, target) = difference_coordinate_reduction::<CRational>(&rat(3, 2));
        assert!(reduced.is_identical(&target).unwrap());
    }

    #[test]
    fn elimination_commutes_with_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = 3;
            // One auxiliary coordinate q2: no kinetic terms, symmetric
            // aux-aux velocity coupling (trivially, a 1x1 block), and a
            // nondegenerate stationarity system.
            let mut k = random_symmetric(&mut rng, n);
            for j in 0..n {
                k.set(2, j, c64(0.0));
                k.set(j, 2, c64(0.0));
            }
            let c = random_matrix(&mut rng, n);
            let mut v = random_symmetric(&mut rng, n);
            v.set(2, 2, v.get(2, 2) + c64(3.0));
            let chart = chart_of(&["q0", "q1", "q2"]);
            let l = QuadraticLagrangian::new(chart.clone(), k, c, v).unwrap();

            let red_then_nf = eliminate_auxiliary(&l, &["q2"]).unwrap().el_normal_form();
            let nf = l.el_normal_form();
            let nf_as_lagrangian = QuadraticLagrangian::new(
                chart,
                nf.k().clone(),
                nf.c_a().clone(),
                nf.v().clone(),
            )
            .unwrap();
            let nf_then_red = eliminate_auxiliary(&nf_as_lagrangian, &["q2"])
                .unwrap()
                .el_normal_form();
            let dev = red_then_nf.max_deviation(&nf_then_red).unwrap();
            assert!(dev < 1e-12, "paths disagree by {dev}");
        }
    }

    #[test]
    fn soldering_reduces_to_planar_oscillator_float() {
        let soldered = solder::<Complex64>(SolderKind::ChiralToDirect, &c64(1.0)).unwrap();
        assert_eq!(soldered.composite.dim(), 6);
        assert_eq!(soldered.reduced.chart(), ["x1", "x2"]);
        let target = solder_target::<Complex64>(SolderKind::ChiralToDirect, &c64(1.0)).unwrap();
        let dev = soldered
            .reduced
            .el_normal_form()
            .max_deviation(&target.el_normal_form())
            .unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn soldering_closes_exactly_over_rationals() {
        for omega in [rat(1, 1), rat(3, 2), rat(7, 5)] {
            for kind in [SolderKind::ChiralToDirect, SolderKind::PseudochiralToIndirect] {
                let soldered = solder::<CRational>(kind, &omega).unwrap();
                let target = solder_target::<CRational>(kind, &omega).unwrap();
                assert!(
                    soldered
                        .reduced
                        .el_normal_form()
                        .is_identical(&target.el_normal_form())
                        .unwrap(),
                    "{} at omega {omega} failed to close exactly",
                    kind.name()
                );
            }
        }
    }

    #[test]
    fn hyperbolic_soldering_reduces_to_hyperbolic_oscillator() {
        let soldered =
            solder::<Complex64>(SolderKind::PseudochiralToIndirect, &c64(1.0)).unwrap();
        let target =
            solder_target::<Complex64>(SolderKind::PseudochiralToIndirect, &c64(1.0)).unwrap();
        let dev = soldered
            .reduced
            .el_normal_form()
            .max_deviation(&target.el_normal_form())
            .unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn soldered_blocks_scale_with_frequency() {
        let at_one = solder::<CRational>(SolderKind::ChiralToDirect, &rat(1, 1)).unwrap();
        let at_three = solder::<CRational>(SolderKind::ChiralToDirect, &rat(3, 1)).unwrap();
        // K carries no power of the frequency, C one, V two.
        assert_eq!(at_three.reduced.k(), at_one.reduced.k());
        assert!(at_three.reduced.el_normal_form().c_a().is_exactly_zero());
        assert!(at_one.reduced.el_normal_form().c_a().is_exactly_zero());
        assert_eq!(
            *at_three.reduced.v(),
            at_one.reduced.v().scale(&rat(9, 1))
        );
    }

    #[test]
    fn gauge_variation_matches_currents_float() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for kind in [SolderKind::ChiralToDirect, SolderKind::PseudochiralToIndirect] {
            for _ in 0..100 {
                let mut draw = || {
                    [
                        Complex64::new(rng.gen_range(-2.0..2.0), 0.0),
                        Complex64::new(rng.gen_range(-2.0..2.0), 0.0),
                    ]
                };
                let state = SolderingState {
                    y: draw(),
                    y_dot: draw(),
                    z: draw(),
                    z_dot: draw(),
                };
                let lambda = draw();
                let check = soldering_currents(kind, &c64(1.0), &state, &lambda).unwrap();
                let gap = (check.delta_l - check.current_contraction).norm();
                assert!(gap < 1e-12, "{}: gap {gap}", kind.name());
            }
        }
    }

    #[test]
    fn gauge_variation_matches_currents_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let draw = |rng: &mut ChaCha8Rng| {
            [
                rat(rng.gen_range(-9..9), rng.gen_range(1..7)),
                rat(rng.gen_range(-9..9), rng.gen_range(1..7)),
            ]
        };
        for kind in [SolderKind::ChiralToDirect, SolderKind::PseudochiralToIndirect] {
            for _ in 0..20 {
                let state = SolderingState {
                    y: draw(&mut rng),
                    y_dot: draw(&mut rng),
                    z: draw(&mut rng),
                    z_dot: draw(&mut rng),
                };
                let lambda = draw(&mut rng);
                let check = soldering_currents(kind, &rat(3, 2), &state, &lambda).unwrap();
                assert_eq!(check.delta_l, check.current_contraction, "{}", kind.name());
            }
        }
    }

    #[test]
    fn currents_vanish_for_zero_gauge_parameter() {
        let state = SolderingState {
            y: [c64(0.3), c64(-1.2)],
            y_dot: [c64(0.9), c64(0.4)],
            z: [c64(-0.5), c64(2.0)],
            z_dot: [c64(0.0), c64(1.0)],
        };
        let check = soldering_currents(
            SolderKind::ChiralToDirect,
            &c64(1.0),
            &state,
            &[c64(0.0), c64(0.0)],
        )
        .unwrap();
        assert!(LagScalar::is_exactly_zero(&check.delta_l));
        assert!(LagScalar::is_exactly_zero(&check.current_contraction));
    }

    #[test]
    fn coincident_modes_collapse_to_potential_current() {
        // At y = z the rotational parts of the two currents cancel and
        // Λᵢ(Jᵢ⁺ + Jᵢ⁻) = −4ω² Λ·(G y).
        let y = [rat(2, 3), rat(-1, 4)];
        let y_dot = [rat(1, 2), rat(5, 1)];
        let lambda = [rat(1, 1), rat(2, 1)];
        let omega = rat(3, 2);
        let w2 = omega.clone() * omega.clone();

        let state = SolderingState {
            y: y.clone(),
            y_dot: y_dot.clone(),
            z: y.clone(),
            z_dot: y_dot.clone(),
        };
        let check =
            soldering_currents(SolderKind::ChiralToDirect, &omega, &state, &lambda).unwrap();
        let expected = -rat(4, 1)
            * w2.clone()
            * (lambda[0].clone() * y[0].clone() + lambda[1].clone() * y[1].clone());
        assert_eq!(check.current_contraction, expected);
        assert_eq!(check.delta_l, expected);

        let check =
            soldering_currents(SolderKind::PseudochiralToIndirect, &omega, &state, &lambda)
                .unwrap();
        let expected = -rat(4, 1)
            * w2
            * (lambda[0].clone() * y[0].clone() - lambda[1].clone() * y[1].clone());
        assert_eq!(check.current_contraction, expected);
        assert_eq!(check.delta_l, expected);
    }

    #[test]
    fn planar_symmetries_vanish_identically() {
        let theta = c64(1e-3);
        let eps = epsilon_matrix::<Complex64>();
        let sigma = sigma1_matrix::<Complex64>();
        let cases = [
            (LagrangianKind::BidimensionalDirect, &eps),
            (LagrangianKind::ChiralPlus, &eps),
            (LagrangianKind::ChiralMinus, &eps),
            (LagrangianKind::IndirectHyperbolic, &sigma),
            (LagrangianKind::PseudochiralPlus, &sigma),
            (LagrangianKind::PseudochiralMinus, &sigma),
        ];
        for (kind, generator) in cases {
            let l = builtin_lagrangian::<Complex64>(kind, &c64(1.7)).unwrap();
            let variation = symmetry_variation(&l, generator, &theta).unwrap();
            assert!(
                LagScalar::is_exactly_zero(&variation),
                "{} should be invariant, got {variation}",
                kind.name()
            );
        }
    }

    #[test]
    fn broken_symmetry_is_detected() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::BidimensionalDirect, &c64(1.0))
            .unwrap();
        let variation = symmetry_variation(&l, &sigma1_matrix(), &c64(1e-3)).unwrap();
        assert!(variation.norm() > 1e-4, "expected a nonzero variation");
        let wrong_dim = DenseMat::<Complex64>::identity(3);
        assert!(matches!(
            symmetry_variation(&l, &wrong_dim, &c64(1e-3)),
            Err(LagrangianError::BlockShape { .. })
        ));
    }

    #[test]
    fn exact_symmetry_check_over_rationals() {
        let theta = rat(1, 1000);
        let l = builtin_lagrangian::<CRational>(LagrangianKind::PseudochiralPlus, &rat(5, 3))
            .unwrap();
        let variation = symmetry_variation(&l, &sigma1_matrix(), &theta).unwrap();
        assert!(LagScalar::is_exactly_zero(&variation));
    }

    #[test]
    fn json_round_trip() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::PseudochiralPlus, &c64(1.5))
            .unwrap();
        let text = json::to_json(&l);
        assert!(text.contains("\"chart\""));
        assert!(text.contains("\"K\""));
        let back = json::from_json(&text).unwrap();
        assert_eq!(back.chart(), l.chart());
        assert!(back.k().sub(l.k()).max_magnitude() < 1e-15);
        assert!(back.c().sub(l.c()).max_magnitude() < 1e-15);
        assert!(back.v().sub(l.v()).max_magnitude() < 1e-15);
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(matches!(
            json::from_json("{ not json"),
            Err(LagrangianError::Json(_))
        ));
        // Ragged block: 2-name chart with a 1x1 K.
        let bad = r#"{"chart":["a","b"],"K":[[[1.0,0.0]]],"C":[[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]],"V":[[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]}"#;
        assert!(matches!(
            json::from_json(bad),
            Err(LagrangianError::BlockShape { .. })
        ));
    }

    #[test]
    fn lagrangian_value_evaluates_blocks() {
        // L = ẋẏ − ω²xy at ω=2, q=(1,2), q̇=(3,4): 3·4·? → K=σ₁ gives
        // ½(q̇ᵀσ₁q̇) = q̇₁q̇₂ = 12; V term: −ω²xy = −4·2 = −8.
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Indirect2var, &c64(2.0)).unwrap();
        let value = l.value(&[c64(1.0), c64(2.0)], &[c64(3.0), c64(4.0)]);
        assert!((value - c64(4.0)).norm() < 1e-14);
    }

    #[test]
    fn variational_derivative_requires_first_order_form() {
        let l = builtin_lagrangian::<Complex64>(LagrangianKind::Direct1d, &c64(1.0)).unwrap();
        assert_eq!(
            l.first_order_variational_derivative(&[c64(1.0)], &[c64(0.0)])
                .unwrap_err(),
            LagrangianError::NotFirstOrder
        );
    }

    #[test]
    fn construction_rejects_bad_shapes_and_duplicates() {
        let err = QuadraticLagrangian::new(
            chart_of(&["a", "b"]),
            DenseMat::<Complex64>::identity(3),
            DenseMat::zeros(2, 2),
            DenseMat::zeros(2, 2),
        )
        .unwrap_err();
        assert!(matches!(err, LagrangianError::BlockShape { block: "K", .. }));
        let err = QuadraticLagrangian::new(
            chart_of(&["a", "a"]),
            DenseMat::<Complex64>::identity(2),
            DenseMat::zeros(2, 2),
            DenseMat::zeros(2, 2),
        )
        .unwrap_err();
        assert_eq!(err, LagrangianError::DuplicateCoordinate("a".into()));
    }

    #[test]
    fn exact_rational_scalar_promotion() {
        let r = rational_scalar(BigRational::new(3.into(), 2.into()));
        assert_eq!(r, rat(3, 2));
    }
}
