//! Truncated multimode bosonic Fock spaces and dense operator matrices.
//!
//! Each mode is truncated at a uniform occupation cutoff `N`; the composite
//! space is the Kronecker product with **mode 0 as the leftmost factor**, so
//! a basis index decomposes as `index = n₀·N^{m−1} + n₁·N^{m−2} + …`.
//!
//! Truncation makes operator identities fail in the top occupation levels
//! (e.g. `[a, a†] = 1 − N·|N−1⟩⟨N−1|` rather than the identity). Identities
//! built from `k` ladder factors are therefore verified on the *guarded*
//! subspace of states with every occupation `≤ N−1−k`, see
//! [`ProjectedSubspace`] and [`residual_on_subspace`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Dense complex operator matrix storage.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex state vector.
pub type CVector = DVector<Complex64>;

/// Hard cap on the composite Hilbert-space dimension.
pub const MAX_DIMENSION: usize = 4096;

/// Errors from Fock-space construction and operator algebra.
#[derive(Debug, Error, PartialEq)]
pub enum FockError {
    #[error("occupation cutoff must be at least 2, got {0}")]
    CutoffTooSmall(usize),
    #[error("at least one mode is required")]
    NoModes,
    #[error("mode frequency must be positive and finite, got {0}")]
    BadOmega(f64),
    #[error("composite dimension {dim} exceeds the cap of {MAX_DIMENSION}")]
    DimensionTooLarge { dim: usize },
    #[error("mode index {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("operators live on different spaces ({0} vs {1})")]
    SpaceMismatch(String, String),
    #[error("guard {guard} leaves no states below cutoff {cutoff}")]
    GuardTooLarge { guard: usize, cutoff: usize },
    #[error("matrix is {rows}x{cols} but the space has dimension {dim}")]
    EntryShape { rows: usize, cols: usize, dim: usize },
    #[error("occupation list has {got} entries, expected {expected}")]
    OccupationLength { got: usize, expected: usize },
    #[error("occupation {occ} is outside 0..{cutoff}")]
    OccupationRange { occ: usize, cutoff: usize },
}

/// A truncated Fock space: `n_modes` bosonic modes, each cut off at
/// occupation `cutoff − 1`, with a common frequency `omega` (ħ = 1, m = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    n_modes: usize,
    cutoff: usize,
    omega: f64,
}

impl FockSpace {
    pub fn new(n_modes: usize, cutoff: usize, omega: f64) -> Result<Self, FockError> {
        if n_modes == 0 {
            return Err(FockError::NoModes);
        }
        if cutoff < 2 {
            return Err(FockError::CutoffTooSmall(cutoff));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(FockError::BadOmega(omega));
        }
        let mut dim: usize = 1;
        for _ in 0..n_modes {
            dim = dim
                .checked_mul(cutoff)
                .ok_or(FockError::DimensionTooLarge { dim: usize::MAX })?;
            if dim > MAX_DIMENSION {
                return Err(FockError::DimensionTooLarge { dim });
            }
        }
        Ok(Self { n_modes, cutoff, omega })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Total dimension `cutoff^n_modes`.
    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.n_modes as u32)
    }

    /// Per-mode occupations of a composite basis index (mode 0 leftmost).
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let mut occ = vec![0usize; self.n_modes];
        let mut rest = index;
        for m in (0..self.n_modes).rev() {
            occ[m] = rest % self.cutoff;
            rest /= self.cutoff;
        }
        occ
    }

    /// Composite basis index of a per-mode occupation list.
    pub fn index_of(&self, occ: &[usize]) -> Result<usize, FockError> {
        if occ.len() != self.n_modes {
            return Err(FockError::OccupationLength { got: occ.len(), expected: self.n_modes });
        }
        let mut index = 0usize;
        for &n in occ {
            if n >= self.cutoff {
                return Err(FockError::OccupationRange { occ: n, cutoff: self.cutoff });
            }
            index = index * self.cutoff + n;
        }
        Ok(index)
    }

    /// Unit vector for the basis state `|n₀, n₁, …⟩`.
    pub fn basis_state(&self, occ: &[usize]) -> Result<CVector, FockError> {
        let idx = self.index_of(occ)?;
        let mut v = CVector::zeros(self.dim());
        v[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode >= self.n_modes {
            Err(FockError::ModeOutOfRange { mode, n_modes: self.n_modes })
        } else {
            Ok(())
        }
    }

    fn summary(&self) -> String {
        format!("{} modes, cutoff {}, omega {}", self.n_modes, self.cutoff, self.omega)
    }
}

/// A dense operator on a [`FockSpace`], tagged with a human-readable label.
///
/// Arithmetic between operators on *different* spaces is a programming error;
/// the `std::ops` implementations assert space equality and panic with a
/// clear message, while the named entry points ([`commutator`],
/// [`residual_on_subspace`]) return [`FockError::SpaceMismatch`].
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    space: FockSpace,
    entries: CMatrix,
    label: String,
}

impl OperatorMatrix {
    pub fn new(space: FockSpace, entries: CMatrix, label: impl Into<String>) -> Result<Self, FockError> {
        let dim = space.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(FockError::EntryShape { rows: entries.nrows(), cols: entries.ncols(), dim });
        }
        Ok(Self { space, entries, label: label.into() })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Hermitian adjoint (conjugate transpose).
    pub fn dagger(&self) -> Self {
        Self {
            space: self.space,
            entries: self.entries.adjoint(),
            label: format!("({})†", self.label),
        }
    }

    /// Plain transpose in the Fock basis (no conjugation).
    pub fn transposed(&self) -> Self {
        Self {
            space: self.space,
            entries: self.entries.transpose(),
            label: format!("({})ᵀ", self.label),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space: self.space,
            entries: &self.entries * factor,
            label: format!("{}·({})", factor, self.label),
        }
    }

    /// Frobenius norm of `self − self†` (0 for hermitian operators).
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    /// Apply to a state vector.
    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }

    /// Expectation value `⟨v|O|v⟩ / ⟨v|v⟩`.
    pub fn expectation(&self, v: &CVector) -> Complex64 {
        let num = v.dotc(&(&self.entries * v));
        let den = v.dotc(v);
        num / den
    }

    fn assert_same_space(&self, other: &Self) {
        assert!(
            self.space == other.space,
            "operator algebra across different spaces: {} vs {}",
            self.space.summary(),
            other.space.summary()
        );
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_space(rhs);
        OperatorMatrix {
            space: self.space,
            entries: &self.entries + &rhs.entries,
            label: format!("({} + {})", self.label, rhs.label),
        }
    }
}

impl std::ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_space(rhs);
        OperatorMatrix {
            space: self.space,
            entries: &self.entries - &rhs.entries,
            label: format!("({} - {})", self.label, rhs.label),
        }
    }
}

impl std::ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_same_space(rhs);
        OperatorMatrix {
            space: self.space,
            entries: &self.entries * &rhs.entries,
            label: format!("{}·{}", self.label, rhs.label),
        }
    }
}

/// Identity operator.
pub fn identity(space: &FockSpace) -> OperatorMatrix {
    OperatorMatrix {
        space: *space,
        entries: CMatrix::identity(space.dim(), space.dim()),
        label: "1".to_string(),
    }
}

/// Zero operator.
pub fn zero(space: &FockSpace) -> OperatorMatrix {
    OperatorMatrix {
        space: *space,
        entries: CMatrix::zeros(space.dim(), space.dim()),
        label: "0".to_string(),
    }
}

fn single_mode_annihilation(cutoff: usize) -> CMatrix {
    // ⟨n−1| a |n⟩ = √n
    CMatrix::from_fn(cutoff, cutoff, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Embed a single-mode matrix into the composite space at `mode`
/// (mode 0 = leftmost Kronecker factor).
fn embed(space: &FockSpace, mode: usize, single: &CMatrix) -> CMatrix {
    let n = space.cutoff;
    let left = CMatrix::identity(n.pow(mode as u32), n.pow(mode as u32));
    let right_dim = n.pow((space.n_modes - 1 - mode) as u32);
    let right = CMatrix::identity(right_dim, right_dim);
    left.kronecker(single).kronecker(&right)
}

/// Annihilation operator for one mode: `⟨n−1|a|n⟩ = √n`.
pub fn annihilation(space: &FockSpace, mode: usize) -> Result<OperatorMatrix, FockError> {
    space.check_mode(mode)?;
    let entries = embed(space, mode, &single_mode_annihilation(space.cutoff));
    Ok(OperatorMatrix { space: *space, entries, label: format!("a{}", mode) })
}

/// Creation operator for one mode (adjoint of [`annihilation`]).
pub fn creation(space: &FockSpace, mode: usize) -> Result<OperatorMatrix, FockError> {
    Ok(annihilation(space, mode)?.dagger().relabel(format!("a{}†", mode)))
}

/// Number operator `a†a` for one mode (diagonal `0, 1, …, N−1`).
pub fn number(space: &FockSpace, mode: usize) -> Result<OperatorMatrix, FockError> {
    let a = annihilation(space, mode)?;
    Ok((&a.dagger() * &a).relabel(format!("n{}", mode)))
}

/// Position and momentum for one mode:
/// `x = (a + a†)/√(2ω)`, `p = i√(ω/2)(a† − a)`, so `[x, p] = i` away from
/// the cutoff boundary.
pub fn position_momentum(space: &FockSpace, mode: usize) -> Result<(OperatorMatrix, OperatorMatrix), FockError> {
    let a = annihilation(space, mode)?;
    let adag = a.dagger();
    let omega = space.omega;
    let x = (&a + &adag)
        .scaled(Complex64::new(1.0 / (2.0 * omega).sqrt(), 0.0))
        .relabel(format!("x{}", mode + 1));
    let p = (&adag - &a)
        .scaled(Complex64::new(0.0, (omega / 2.0).sqrt()))
        .relabel(format!("p{}", mode + 1));
    Ok((x, p))
}

/// Commutator `[A, B] = AB − BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, FockError> {
    if a.space != b.space {
        return Err(FockError::SpaceMismatch(a.space.summary(), b.space.summary()));
    }
    Ok((&(a * b) - &(b * a)).relabel(format!("[{}, {}]", a.label, b.label)))
}

/// The guarded subspace: basis states whose every occupation is
/// `≤ cutoff − 1 − guard`. Identities containing `k` ladder factors hold
/// exactly there (guard = k), because truncation artifacts cannot propagate
/// more than `k` levels down from the cutoff boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedSubspace {
    space: FockSpace,
    guard: usize,
}

impl ProjectedSubspace {
    pub fn new(space: &FockSpace, guard: usize) -> Result<Self, FockError> {
        if guard >= space.cutoff {
            return Err(FockError::GuardTooLarge { guard, cutoff: space.cutoff });
        }
        Ok(Self { space: *space, guard })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Does composite basis index `index` belong to the guarded subspace?
    pub fn keeps(&self, index: usize) -> bool {
        let limit = self.space.cutoff - 1 - self.guard;
        self.space.occupations(index).iter().all(|&n| n <= limit)
    }

    /// Indices of retained basis states, ascending.
    pub fn retained_indices(&self) -> Vec<usize> {
        (0..self.space.dim()).filter(|&i| self.keeps(i)).collect()
    }

    /// Dimension of the guarded subspace: `(cutoff − guard)^n_modes`.
    pub fn dim(&self) -> usize {
        (self.space.cutoff - self.guard).pow(self.space.n_modes as u32)
    }

    /// Orthogonal projector onto the guarded subspace (diagonal 0/1).
    pub fn projector(&self) -> CMatrix {
        CMatrix::from_fn(self.space.dim(), self.space.dim(), |r, c| {
            if r == c && self.keeps(r) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Compress a full-space matrix to the guarded basis
    /// (rows/columns of retained indices).
    pub fn restrict(&self, m: &CMatrix) -> CMatrix {
        let idx = self.retained_indices();
        CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
    }
}

/// Frobenius norm of `P (A − B) P` with `P` the guarded projector:
/// how far `A = B` fails away from the truncation boundary.
pub fn residual_on_subspace(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    subspace: &ProjectedSubspace,
) -> Result<f64, FockError> {
    if a.space != b.space {
        return Err(FockError::SpaceMismatch(a.space.summary(), b.space.summary()));
    }
    if a.space != *subspace.space() {
        return Err(FockError::SpaceMismatch(a.space.summary(), subspace.space().summary()));
    }
    let diff = &a.entries - &b.entries;
    Ok(subspace.restrict(&diff).norm())
}
