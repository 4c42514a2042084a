//! Classical phase-space layer: Legendre transforms, symplectic pairings,
//! linear canonical maps, exact-exponential trajectory integration, and
//! Noether charges for the planar oscillator family.
//!
//! Phase space is complex throughout — reality of a trajectory is a
//! checkable property, not a type constraint — and every flow here is
//! linear, so integration uses the matrix exponential of the flow map per
//! step rather than a generic ODE scheme. The √2 factors appearing in the
//! frozen canonical maps are handled exactly in [`exact`] by working with
//! `√2 · M`, whose canonicity condition involves only `M̂ Ω M̂ᵀ / 2` and is
//! therefore rational.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lagrangian::{DenseMat, QuadraticLagrangian};

/// Errors from phase-space constructions.
#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("phase-space dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("labels and data disagree: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("labels do not match: expected [{expected}], got [{got}]")]
    LabelMismatch { expected: String, got: String },
    #[error("symplectic pairing must be antisymmetric")]
    PairingNotAntisymmetric,
    #[error("symplectic pairing must be invertible")]
    PairingSingular,
    #[error("matrix must be {expected}x{expected}, got {rows}x{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("velocity-velocity block is singular but not zero: mixed-order Lagrangians are unsupported")]
    DegenerateKinetic,
    #[error("first-order Lagrangian needs an invertible antisymmetric velocity-coordinate part")]
    FirstOrderDegenerate,
    #[error("time step must be positive and finite")]
    BadTimeStep,
    #[error("map is not canonical: residual {0:.3e}")]
    NotCanonical(f64),
}

type Result<T> = std::result::Result<T, DynamicsError>;

const CANONICAL_TOL: f64 = 1e-12;

fn to_dmatrix(m: &DenseMat<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| *m.get(r, c))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|e| e.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Phase-space types
// ---------------------------------------------------------------------------

/// A point of a complex phase space together with the symplectic pairing
/// `Ω` defining `{f, g} = ∇fᵀ Ω ∇g`.
#[derive(Debug, Clone)]
pub struct PhaseState {
    labels: Vec<String>,
    values: DVector<Complex64>,
    pairing: DMatrix<Complex64>,
}

impl PhaseState {
    pub fn new(
        labels: Vec<String>,
        values: DVector<Complex64>,
        pairing: DMatrix<Complex64>,
    ) -> Result<Self> {
        let n = labels.len();
        if n % 2 != 0 {
            return Err(DynamicsError::OddDimension(n));
        }
        if values.len() != n {
            return Err(DynamicsError::LengthMismatch {
                expected: n,
                got: values.len(),
            });
        }
        if pairing.nrows() != n || pairing.ncols() != n {
            return Err(DynamicsError::MatrixShape {
                expected: n,
                rows: pairing.nrows(),
                cols: pairing.ncols(),
            });
        }
        let scale = max_abs(&pairing).max(1.0);
        if max_abs(&(&pairing + pairing.transpose())) > 1e-12 * scale {
            return Err(DynamicsError::PairingNotAntisymmetric);
        }
        if !pairing.clone().lu().is_invertible() {
            return Err(DynamicsError::PairingSingular);
        }
        Ok(PhaseState {
            labels,
            values,
            pairing,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &DVector<Complex64> {
        &self.values
    }

    pub fn pairing(&self) -> &DMatrix<Complex64> {
        &self.pairing
    }

    /// Poisson bracket of two coordinate functions by label.
    pub fn bracket(&self, a: &str, b: &str) -> Result<Complex64> {
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        Ok(self.pairing[(ia, ib)])
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| DynamicsError::LabelMismatch {
                expected: self.labels.join(","),
                got: label.to_string(),
            })
    }
}

/// `H(z) = ½ zᵀ H z` over a labelled phase vector (bilinear, not
/// sesquilinear: complex charts are first-class).
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    labels: Vec<String>,
    matrix: DMatrix<Complex64>,
}

impl QuadraticHamiltonian {
    pub fn new(labels: Vec<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = labels.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(DynamicsError::MatrixShape {
                expected: n,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let sym = (&matrix + matrix.transpose()).scale(0.5);
        Ok(QuadraticHamiltonian {
            labels,
            matrix: sym,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn value(&self, z: &DVector<Complex64>) -> Complex64 {
        (z.transpose() * &self.matrix * z)[(0, 0)] * Complex64::new(0.5, 0.0)
    }
}

/// A Hamiltonian together with the symplectic pairing generating its flow
/// `ż = Ω H z`.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    pub hamiltonian: QuadraticHamiltonian,
    pub pairing: DMatrix<Complex64>,
}

impl HamiltonianSystem {
    /// Phase point with this system's labels and pairing.
    pub fn state(&self, values: &[Complex64]) -> Result<PhaseState> {
        PhaseState::new(
            self.hamiltonian.labels().to_vec(),
            DVector::from_column_slice(values),
            self.pairing.clone(),
        )
    }

    /// The linear flow map `A = Ω H`.
    pub fn flow_matrix(&self) -> DMatrix<Complex64> {
        &self.pairing * self.hamiltonian.matrix()
    }
}

/// Invertible linear map of phase vectors, `z_source = M · z_target`.
#[derive(Debug, Clone)]
pub struct LinearCanonicalMap {
    source_labels: Vec<String>,
    target_labels: Vec<String>,
    matrix: DMatrix<Complex64>,
}

impl LinearCanonicalMap {
    pub fn new(
        source_labels: Vec<String>,
        target_labels: Vec<String>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        let n = source_labels.len();
        if target_labels.len() != n || matrix.nrows() != n || matrix.ncols() != n {
            return Err(DynamicsError::MatrixShape {
                expected: n,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(LinearCanonicalMap {
            source_labels,
            target_labels,
            matrix,
        })
    }

    pub fn source_labels(&self) -> &[String] {
        &self.source_labels
    }

    pub fn target_labels(&self) -> &[String] {
        &self.target_labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

// ---------------------------------------------------------------------------
// Legendre transform
// ---------------------------------------------------------------------------

/// Interleaved canonical pairing on `(q1, p1, q2, p2, …)`:
/// `{q_i, p_i} = 1`.
pub fn canonical_pairing(n_pairs: usize) -> DMatrix<Complex64> {
    let mut omega = DMatrix::zeros(2 * n_pairs, 2 * n_pairs);
    for i in 0..n_pairs {
        omega[(2 * i, 2 * i + 1)] = Complex64::new(1.0, 0.0);
        omega[(2 * i + 1, 2 * i)] = Complex64::new(-1.0, 0.0);
    }
    omega
}

/// Momentum label conjugate to a coordinate label.
pub fn momentum_label(coordinate: &str) -> String {
    format!("p_{coordinate}")
}

/// Legendre transform of a quadratic Lagrangian.
///
/// Second-order branch (`K` invertible): momenta `p = Kq̇ + Cq` give
/// `H = ½pᵀK⁻¹p − pᵀK⁻¹Cq + ½qᵀ(CᵀK⁻¹C − V)q` on the interleaved chart
/// `(q_i, p_{q_i})` with the canonical pairing.
///
/// First-order branch (`K = 0`, antisymmetric part `C_a` invertible): the
/// coordinates are already a phase space; the equations of motion
/// `−2C_a q̇ + Vq = 0` are Hamiltonian for `H = −V` with pairing
/// `Ω = −(2C_a)⁻¹`.
pub fn legendre(l: &QuadraticLagrangian<Complex64>) -> Result<HamiltonianSystem> {
    let n = l.dim();
    let k = to_dmatrix(l.k());
    let c = to_dmatrix(l.c());
    let v = to_dmatrix(l.v());
    let scale = max_abs(&k)
        .max(max_abs(&c))
        .max(max_abs(&v))
        .max(1.0);

    if max_abs(&k) <= 1e-13 * scale {
        // First-order (chiral) branch.
        let c_a = (&c - c.transpose()).scale(0.5);
        let two_c_a = c_a.scale(2.0);
        let inv = two_c_a
            .clone()
            .try_inverse()
            .ok_or(DynamicsError::FirstOrderDegenerate)?;
        let pairing = -inv;
        let hamiltonian = QuadraticHamiltonian::new(l.chart().to_vec(), -v)?;
        return Ok(HamiltonianSystem {
            hamiltonian,
            pairing,
        });
    }

    let k_inv = k
        .clone()
        .try_inverse()
        .ok_or(DynamicsError::DegenerateKinetic)?;
    let h_qq = c.transpose() * &k_inv * &c - v;
    let h_qp = -(c.transpose() * &k_inv);
    let h_pq = -(&k_inv * &c);
    let h_pp = k_inv;

    let mut h = DMatrix::zeros(2 * n, 2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for i in 0..n {
        labels.push(l.chart()[i].clone());
        labels.push(momentum_label(&l.chart()[i]));
    }
    for i in 0..n {
        for j in 0..n {
            h[(2 * i, 2 * j)] = h_qq[(i, j)];
            h[(2 * i, 2 * j + 1)] = h_qp[(i, j)];
            h[(2 * i + 1, 2 * j)] = h_pq[(i, j)];
            h[(2 * i + 1, 2 * j + 1)] = h_pp[(i, j)];
        }
    }
    Ok(HamiltonianSystem {
        hamiltonian: QuadraticHamiltonian::new(labels, h)?,
        pairing: canonical_pairing(n),
    })
}

// ---------------------------------------------------------------------------
// Canonicity and Hamiltonian transport
// ---------------------------------------------------------------------------

/// Largest entry of `M Ω_target Mᵀ − Ω_source`.
///
/// With `z_source = M z_target`, the bracket induced on target
/// coordinates by the source pairing is `M⁻¹ Ω_source M⁻ᵀ`; the map is
/// canonical when that equals the target pairing, i.e. when
/// `M Ω_target Mᵀ = Ω_source`. For equal pairings this is the familiar
/// `MᵀΩM = Ω` condition.
pub fn canonicity_residual(
    map: &LinearCanonicalMap,
    source_pairing: &DMatrix<Complex64>,
    target_pairing: &DMatrix<Complex64>,
) -> Result<f64> {
    let n = map.matrix.nrows();
    for omega in [source_pairing, target_pairing] {
        if omega.nrows() != n || omega.ncols() != n {
            return Err(DynamicsError::MatrixShape {
                expected: n,
                rows: omega.nrows(),
                cols: omega.ncols(),
            });
        }
    }
    let lhs = &map.matrix * target_pairing * map.matrix.transpose();
    Ok(max_abs(&(lhs - source_pairing)))
}

/// True when the map preserves the bracket to `1e−12`.
pub fn is_canonical(
    map: &LinearCanonicalMap,
    source_pairing: &DMatrix<Complex64>,
    target_pairing: &DMatrix<Complex64>,
) -> Result<bool> {
    Ok(canonicity_residual(map, source_pairing, target_pairing)? < CANONICAL_TOL)
}

/// Transport a Hamiltonian along a canonical map: `H' = MᵀHM` on the
/// target labels. Refuses non-canonical maps.
pub fn transform_hamiltonian(
    h: &QuadraticHamiltonian,
    map: &LinearCanonicalMap,
    source_pairing: &DMatrix<Complex64>,
    target_pairing: &DMatrix<Complex64>,
) -> Result<QuadraticHamiltonian> {
    if h.labels != map.source_labels {
        return Err(DynamicsError::LabelMismatch {
            expected: h.labels.join(","),
            got: map.source_labels.join(","),
        });
    }
    let residual = canonicity_residual(map, source_pairing, target_pairing)?;
    if residual >= CANONICAL_TOL {
        return Err(DynamicsError::NotCanonical(residual));
    }
    QuadraticHamiltonian::new(
        map.target_labels.clone(),
        map.matrix.transpose() * &h.matrix * &map.matrix,
    )
}

/// The frozen first-order-to-canonical chart change
/// `x1 = p_x/(√2 ω)`, `x2 = x/√2` from the chiral chart `[x1, x2]` to
/// `[x, p_x]`.
pub fn tn2_map(omega: f64) -> LinearCanonicalMap {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(r / omega, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    LinearCanonicalMap::new(
        vec!["x1".into(), "x2".into()],
        vec!["x".into(), "p_x".into()],
        m,
    )
    .expect("fixed 2x2 shape")
}

/// The frozen complex canonical transformation from
/// `[x1, p_x1, x2, p_x2]` to `[x_plus, p_plus, x_minus, p_minus]`:
///
/// `x1 = (x₊ + x₋)/√2`, `p_x1 = (p₊ + p₋)/√2`,
/// `x2 = −i(p₊ − p₋)/(√2 ω)`, `p_x2 = −iω(x₊ − x₋)/√2`.
pub fn ct_map(omega: f64) -> LinearCanonicalMap {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        re(r),          zero,            re(r),         zero,
        zero,           re(r),           zero,          re(r),
        zero,           im(-r / omega),  zero,          im(r / omega),
        im(-r * omega), zero,            im(r * omega), zero,
    ]);
    LinearCanonicalMap::new(
        vec!["x1".into(), "p_x1".into(), "x2".into(), "p_x2".into()],
        vec![
            "x_plus".into(),
            "p_plus".into(),
            "x_minus".into(),
            "p_minus".into(),
        ],
        m,
    )
    .expect("fixed 4x4 shape")
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// A sampled linear-flow trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub samples: Vec<DVector<Complex64>>,
}

impl Trajectory {
    /// Largest `|H(z(t)) − H(z(0))|` along the samples.
    pub fn max_drift(&self, h: &QuadraticHamiltonian) -> f64 {
        let initial = h.value(&self.samples[0]);
        self.samples
            .iter()
            .map(|z| (h.value(z) - initial).norm())
            .fold(0.0, f64::max)
    }
}

/// Integrate `ż = Ω H z` from `z0`, sampling at multiples of `dt` up to
/// `t_final`, with one fixed matrix exponential applied per step.
pub fn integrate(
    h: &QuadraticHamiltonian,
    z0: &PhaseState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    if h.labels() != z0.labels() {
        return Err(DynamicsError::LabelMismatch {
            expected: h.labels.join(","),
            got: z0.labels.join(","),
        });
    }
    if !(dt > 0.0) || !dt.is_finite() || !t_final.is_finite() || t_final < 0.0 {
        return Err(DynamicsError::BadTimeStep);
    }
    let flow = (z0.pairing() * h.matrix()).scale(dt);
    let step = flow.exp();
    let n_steps = (t_final / dt).floor() as usize;
    let mut samples = Vec::with_capacity(n_steps + 1);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut z = z0.values().clone();
    samples.push(z.clone());
    times.push(0.0);
    for k in 1..=n_steps {
        z = &step * z;
        samples.push(z.clone());
        times.push(k as f64 * dt);
    }
    Ok(Trajectory {
        labels: z0.labels().to_vec(),
        times,
        samples,
    })
}

// ---------------------------------------------------------------------------
// Charges and chirality
// ---------------------------------------------------------------------------

/// Handedness selector for the first-order planar modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiralSense {
    Plus,
    Minus,
}

impl ChiralSense {
    pub fn sign(&self) -> f64 {
        match self {
            ChiralSense::Plus => 1.0,
            ChiralSense::Minus => -1.0,
        }
    }
}

/// Conserved charges of the planar first-order modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeKind {
    /// `ε_ij x_i p_j` with the on-shell momentum `p_i = ∓ω ε_ij x_j`
    /// substituted: `±ω(x1² + x2²)`.
    AngularMomentum,
    /// The hyperbolic charge `±ω(x1² − x2²)`.
    Su11Charge,
}

/// Evaluate a Noether charge on a first-order planar phase point with
/// labels `[x1, x2]`.
pub fn noether_charge(
    kind: ChargeKind,
    z: &PhaseState,
    omega: f64,
    sense: ChiralSense,
) -> Result<Complex64> {
    let expected = ["x1", "x2"];
    if z.labels() != expected {
        return Err(DynamicsError::LabelMismatch {
            expected: expected.join(","),
            got: z.labels().join(","),
        });
    }
    let x1 = z.values()[0];
    let x2 = z.values()[1];
    let quad = match kind {
        ChargeKind::AngularMomentum => x1 * x1 + x2 * x2,
        ChargeKind::Su11Charge => x1 * x1 - x2 * x2,
    };
    Ok(quad * Complex64::new(sense.sign() * omega, 0.0))
}

/// Instantaneous signed-area rate `ε_ij x_i ẋ_j = x1 ẋ2 − x2 ẋ1` of a
/// two-dimensional first-order system at a phase point.
pub fn signed_area_rate(system: &HamiltonianSystem, z: &PhaseState) -> Result<Complex64> {
    if z.labels() != system.hamiltonian.labels() {
        return Err(DynamicsError::LabelMismatch {
            expected: system.hamiltonian.labels.join(","),
            got: z.labels().join(","),
        });
    }
    if z.labels().len() != 2 {
        return Err(DynamicsError::MatrixShape {
            expected: 2,
            rows: z.labels().len(),
            cols: z.labels().len(),
        });
    }
    let velocity = system.flow_matrix() * z.values();
    Ok(z.values()[0] * velocity[1] - z.values()[1] * velocity[0])
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

/// Render a trajectory as CSV with header `t, re(q1), im(q1), …`.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut header = vec!["t".to_string()];
    for label in &traj.labels {
        header.push(format!("re({label})"));
        header.push(format!("im({label})"));
    }
    let mut out = header.join(", ");
    out.push('\n');
    for (t, z) in traj.times.iter().zip(&traj.samples) {
        let mut row = vec![format!("{t:.12e}")];
        for value in z.iter() {
            row.push(format!("{:.12e}", value.re));
            row.push(format!("{:.12e}", value.im));
        }
        out.push_str(&row.join(", "));
        out.push('\n');
    }
    out
}

/// Time series of a conserved quantity along a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConservedSeries {
    pub quantity: String,
    pub times: Vec<f64>,
    /// Complex samples as `[re, im]` pairs.
    pub values: Vec<[f64; 2]>,
    /// Largest `|value(t) − value(0)|`.
    pub max_drift: f64,
}

/// Sample a quadratic observable `½zᵀQz` along a trajectory.
pub fn conserved_series(
    traj: &Trajectory,
    observable: &QuadraticHamiltonian,
    quantity: &str,
) -> Result<ConservedSeries> {
    if observable.labels() != traj.labels {
        return Err(DynamicsError::LabelMismatch {
            expected: observable.labels.join(","),
            got: traj.labels.join(","),
        });
    }
    let values: Vec<Complex64> = traj.samples.iter().map(|z| observable.value(z)).collect();
    let initial = values[0];
    let max_drift = values
        .iter()
        .map(|v| (v - initial).norm())
        .fold(0.0, f64::max);
    Ok(ConservedSeries {
        quantity: quantity.to_string(),
        times: traj.times.clone(),
        values: values.iter().map(|v| [v.re, v.im]).collect(),
        max_drift,
    })
}

// ---------------------------------------------------------------------------
// Exact-arithmetic canonicity
// ---------------------------------------------------------------------------

/// Exact-rational verification of the frozen canonical maps.
///
/// Both maps carry a single overall factor `1/√2`: writing `M = M̂/√2`
/// with `M̂` Gaussian-rational, the canonicity condition
/// `M Ω_target Mᵀ = Ω_source` becomes `½ M̂ Ω_target M̂ᵀ = Ω_source`, and
/// Hamiltonian transport becomes `½ M̂ᵀ H M̂` — all rational, so the
/// identities are checked with zero tolerance.
pub mod exact {
    use crate::lagrangian::{CRational, DenseMat, LagScalar};

    fn one() -> CRational {
        <CRational as LagScalar>::one()
    }

    fn zero() -> CRational {
        <CRational as LagScalar>::zero()
    }

    fn i_unit() -> CRational {
        <CRational as LagScalar>::i()
    }

    fn half() -> CRational {
        <CRational as LagScalar>::half()
    }

    /// Interleaved canonical pairing over rationals.
    pub fn canonical_pairing_exact(n_pairs: usize) -> DenseMat<CRational> {
        let mut omega = DenseMat::zeros(2 * n_pairs, 2 * n_pairs);
        for i in 0..n_pairs {
            omega.set(2 * i, 2 * i + 1, one());
            omega.set(2 * i + 1, 2 * i, -one());
        }
        omega
    }

    /// First-order pairing `∓ε/(2ω)` of the `±` planar mode.
    pub fn chiral_pairing_exact(omega: &CRational, plus: bool) -> DenseMat<CRational> {
        let entry = half() / omega.clone();
        let entry = if plus { -entry } else { entry };
        let mut m = DenseMat::zeros(2, 2);
        m.set(0, 1, entry.clone());
        m.set(1, 0, -entry);
        m
    }

    /// `√2` times the first-order-to-canonical map.
    pub fn tn2_hat(omega: &CRational) -> DenseMat<CRational> {
        let mut m = DenseMat::zeros(2, 2);
        m.set(0, 1, one() / omega.clone());
        m.set(1, 0, one());
        m
    }

    /// `√2` times the complex splitting map.
    pub fn ct_hat(omega: &CRational) -> DenseMat<CRational> {
        let i = i_unit();
        DenseMat::from_rows(&[
            vec![one(), zero(), one(), zero()],
            vec![zero(), one(), zero(), one()],
            vec![
                zero(),
                -i.clone() / omega.clone(),
                zero(),
                i.clone() / omega.clone(),
            ],
            vec![-i.clone() * omega.clone(), zero(), i * omega.clone(), zero()],
        ])
    }

    /// Exact canonicity of a `M̂/√2` map: `½ M̂ Ω_target M̂ᵀ == Ω_source`.
    pub fn scaled_map_is_canonical(
        m_hat: &DenseMat<CRational>,
        source_pairing: &DenseMat<CRational>,
        target_pairing: &DenseMat<CRational>,
    ) -> bool {
        let lhs = m_hat
            .mul(target_pairing)
            .mul(&m_hat.transpose())
            .scale(&half());
        lhs == *source_pairing
    }

    /// Exact Hamiltonian transport along a `M̂/√2` map: `½ M̂ᵀ H M̂`.
    pub fn scaled_transform(
        h: &DenseMat<CRational>,
        m_hat: &DenseMat<CRational>,
    ) -> DenseMat<CRational> {
        m_hat.transpose().mul(h).mul(m_hat).scale(&half())
    }

    /// Interleaved difference-of-oscillators Hamiltonian
    /// `diag(ω², 1, −ω², −1)` over rationals.
    pub fn hyperbolic_hamiltonian_exact(omega: &CRational) -> DenseMat<CRational> {
        let w2 = omega.clone() * omega.clone();
        let mut h = DenseMat::zeros(4, 4);
        h.set(0, 0, w2.clone());
        h.set(1, 1, one());
        h.set(2, 2, -w2);
        h.set(3, 3, -one());
        h
    }

    /// The split target `diag(ω², 1, ω², 1)`: two positive oscillators.
    pub fn split_hamiltonian_exact(omega: &CRational) -> DenseMat<CRational> {
        let w2 = omega.clone() * omega.clone();
        let mut h = DenseMat::zeros(4, 4);
        h.set(0, 0, w2.clone());
        h.set(1, 1, one());
        h.set(2, 2, w2);
        h.set(3, 3, one());
        h
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
