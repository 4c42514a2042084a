//! Small dense matrices over an arbitrary [`LagScalar`].
//!
//! The Lagrangian layer works with block matrices of dimension ≤ 6, in
//! either floating-point or exact rational arithmetic, so a simple
//! row-major store with Gauss–Jordan inversion is all that is needed.

use super::scalar::LagScalar;

/// Row-major dense matrix over a [`LagScalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: LagScalar> DenseMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseMat { rows, cols, data }
    }

    /// Build from row slices; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: expected uniform width {ncols}"
        );
        DenseMat {
            rows: nrows,
            cols: ncols,
            data: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        }
    }

    /// Column vector from a slice.
    pub fn column(entries: &[S]) -> Self {
        DenseMat {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: S) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[r * self.cols + c] = value;
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        DenseMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() + rhs.get(r, c).clone()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).clone() - rhs.get(r, c).clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|s| -s.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map(|s| factor.clone() * s.clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        Self::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self.get(r, k).clone() * rhs.get(k, c).clone();
            }
            acc
        })
    }

    /// `(M + Mᵀ)/2` — defined for square matrices.
    pub fn symmetric_part(&self) -> Self {
        assert!(self.is_square(), "symmetric_part needs a square matrix");
        let half = S::half();
        Self::from_fn(self.rows, self.cols, |r, c| {
            half.clone() * (self.get(r, c).clone() + self.get(c, r).clone())
        })
    }

    /// `(M − Mᵀ)/2` — defined for square matrices.
    pub fn antisymmetric_part(&self) -> Self {
        assert!(self.is_square(), "antisymmetric_part needs a square matrix");
        let half = S::half();
        Self::from_fn(self.rows, self.cols, |r, c| {
            half.clone() * (self.get(r, c).clone() - self.get(c, r).clone())
        })
    }

    /// Submatrix picked out by explicit row and column index lists.
    pub fn block(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self.get(row_idx[r], col_idx[c]).clone()
        })
    }

    /// Largest entry magnitude (0 for empty matrices).
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|s| s.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_exactly_zero())
    }

    /// Gauss–Jordan inverse with magnitude pivoting; `None` when singular.
    ///
    /// In exact mode any nonzero pivot is exact, so singularity detection
    /// is itself exact; in float mode a column with no pivot above
    /// `1e-12` of the matrix scale is treated as singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let scale = self.max_magnitude().max(1.0);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            // Pick the pivot with the largest magnitude.
            let mut pivot_row = None;
            let mut pivot_mag = 0.0;
            for r in col..n {
                let mag = a.get(r, col).magnitude();
                if !a.get(r, col).is_exactly_zero() && mag >= pivot_mag {
                    pivot_mag = mag;
                    pivot_row = Some(r);
                }
            }
            let pr = pivot_row?;
            if !S::EXACT && pivot_mag < 1e-12 * scale {
                return None;
            }
            if pr != col {
                for c in 0..n {
                    let tmp = a.get(pr, c).clone();
                    a.set(pr, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                    let tmp = inv.get(pr, c).clone();
                    inv.set(pr, c, inv.get(col, c).clone());
                    inv.set(col, c, tmp);
                }
            }
            let pivot = a.get(col, col).clone();
            for c in 0..n {
                a.set(col, c, a.get(col, c).clone() / pivot.clone());
                inv.set(col, c, inv.get(col, c).clone() / pivot.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_exactly_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for c in 0..n {
                    let av = a.get(r, c).clone() - factor.clone() * a.get(col, c).clone();
                    a.set(r, c, av);
                    let iv = inv.get(r, c).clone() - factor.clone() * inv.get(col, c).clone();
                    inv.set(r, c, iv);
                }
            }
        }
        Some(inv)
    }

    /// Entry with the largest magnitude (its clone), or zero for empty.
    pub fn dominant_entry(&self) -> S {
        self.data
            .iter()
            .max_by(|a, b| {
                a.magnitude()
                    .partial_cmp(&b.magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// All entries as row-major rows (for serialization).
    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::scalar::CRational;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_and_transpose() {
        let a = DenseMat::from_rows(&[vec![c(1.0), c(2.0)], vec![c(3.0), c(4.0)]]);
        let b = DenseMat::from_rows(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]);
        let ab = a.mul(&b);
        assert_eq!(*ab.get(0, 0), c(2.0));
        assert_eq!(*ab.get(0, 1), c(1.0));
        assert_eq!(*ab.get(1, 0), c(4.0));
        assert_eq!(*ab.get(1, 1), c(3.0));
        assert_eq!(a.transpose().get(0, 1), a.get(1, 0));
    }

    #[test]
    fn symmetric_and_antisymmetric_parts_recompose() {
        let a = DenseMat::from_rows(&[vec![c(1.0), c(5.0)], vec![c(-3.0), c(2.0)]]);
        let recomposed = a.symmetric_part().add(&a.antisymmetric_part());
        assert!(recomposed.sub(&a).max_magnitude() < 1e-15);
        let anti = a.antisymmetric_part();
        assert!(anti.add(&anti.transpose()).max_magnitude() < 1e-15);
    }

    #[test]
    fn float_inverse_matches_identity() {
        let a = DenseMat::from_rows(&[
            vec![c(2.0), c(1.0), c(0.0)],
            vec![c(1.0), c(3.0), c(1.0)],
            vec![c(0.0), c(1.0), c(4.0)],
        ]);
        let inv = a.inverse().expect("invertible");
        let err = a.mul(&inv).sub(&DenseMat::identity(3)).max_magnitude();
        assert!(err < 1e-14, "inverse error {err}");
    }

    #[test]
    fn exact_inverse_is_exact() {
        let two = <CRational as LagScalar>::from_int(2);
        let one = <CRational as LagScalar>::one();
        let zero = <CRational as LagScalar>::zero();
        let a = DenseMat::from_rows(&[
            vec![two.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        ]);
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.mul(&inv), DenseMat::<CRational>::identity(2));
        let singular = DenseMat::from_rows(&[
            vec![one.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        ]);
        assert!(singular.inverse().is_none());
        let _ = zero;
    }

    #[test]
    fn singular_float_matrix_rejected() {
        let a = DenseMat::from_rows(&[vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]);
        assert!(a.inverse().is_none());
    }

    #[test]
    fn block_extraction() {
        let a = DenseMat::from_fn(4, 4, |r, c_| Complex64::new((4 * r + c_) as f64, 0.0));
        let b = a.block(&[1, 3], &[0, 2]);
        assert_eq!(*b.get(0, 0), c(4.0));
        assert_eq!(*b.get(0, 1), c(6.0));
        assert_eq!(*b.get(1, 0), c(12.0));
        assert_eq!(*b.get(1, 1), c(14.0));
    }
}
