//! Magic unitaries: `n × n` grids of projections on `C^d` whose rows and
//! columns each sum to the identity. Each one is a finite-dimensional
//! representation of the generators `u_ij` of `C(S_n^+)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    self, block_diag, c, ensure_unitary, idempotence_residual, kron_capped, max_abs, CMatrix, HermitianMatrix,
    ProjectionMatrix, DEFAULT_DIM_CAP,
};
use crate::perm::Permutation;

/// Residual threshold for every magic unitary relation.
pub const MAGIC_TOL: f64 = 1e-8;

/// An unvalidated `n × n` grid of `d × d` complex matrices, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MagicGrid {
    pub n: usize,
    pub d: usize,
    pub cells: Vec<CMatrix>,
}

/// Residuals of every magic unitary relation on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub d: usize,
    /// `‖P − P†‖_max` per cell, row-major.
    pub hermiticity: Vec<f64>,
    /// `‖P² − P‖_max` per cell, row-major.
    pub projection: Vec<f64>,
    /// `‖Σ_j P_ij − 1‖_max` per row.
    pub row_sums: Vec<f64>,
    /// `‖Σ_i P_ij − 1‖_max` per column.
    pub column_sums: Vec<f64>,
    /// `max_{i, j ≠ j'} ‖P_ij P_ij'‖_max`; implied by the other relations.
    pub row_orthogonality: f64,
    pub worst: f64,
    pub passed: bool,
}

impl MagicGrid {
    pub fn validate(&self) -> ValidationReport {
        let (n, d) = (self.n, self.d);
        let shape_ok = self.cells.len() == n * n && self.cells.iter().all(|m| m.nrows() == d && m.ncols() == d);
        if !shape_ok {
            return ValidationReport {
                n,
                d,
                hermiticity: vec![],
                projection: vec![],
                row_sums: vec![],
                column_sums: vec![],
                row_orthogonality: f64::INFINITY,
                worst: f64::INFINITY,
                passed: false,
            };
        }
        let id = CMatrix::identity(d, d);
        let cell = |i: usize, j: usize| &self.cells[i * n + j];
        let hermiticity: Vec<f64> = self.cells.iter().map(|m| max_abs(&(m - m.adjoint()))).collect();
        let projection: Vec<f64> = self.cells.iter().map(idempotence_residual).collect();
        let row_sums: Vec<f64> = (0..n)
            .map(|i| {
                let s = (0..n).fold(CMatrix::zeros(d, d), |acc, j| acc + cell(i, j));
                max_abs(&(s - &id))
            })
            .collect();
        let column_sums: Vec<f64> = (0..n)
            .map(|j| {
                let s = (0..n).fold(CMatrix::zeros(d, d), |acc, i| acc + cell(i, j));
                max_abs(&(s - &id))
            })
            .collect();
        let mut row_orthogonality = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    row_orthogonality = row_orthogonality.max(max_abs(&(cell(i, j) * cell(i, k))));
                }
            }
        }
        let worst =
            hermiticity.iter().chain(&projection).chain(&row_sums).chain(&column_sums).fold(0.0_f64, |a, &b| a.max(b));
        let passed = worst <= MAGIC_TOL && n > 0 && d > 0;
        ValidationReport { n, d, hermiticity, projection, row_sums, column_sums, row_orthogonality, worst, passed }
    }
}

/// A validated magic unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct MagicUnitary {
    n: usize,
    d: usize,
    grid: Vec<ProjectionMatrix>,
}

impl TryFrom<MagicGrid> for MagicUnitary {
    type Error = Error;

    fn try_from(grid: MagicGrid) -> Result<Self> {
        let report = grid.validate();
        if !report.passed {
            return Err(Error::InvalidMagicUnitary { worst: report.worst });
        }
        let cells =
            grid.cells.into_iter().map(|m| ProjectionMatrix::new_unchecked(HermitianMatrix::symmetrized(m))).collect();
        Ok(MagicUnitary { n: grid.n, d: grid.d, grid: cells })
    }
}

impl MagicUnitary {
    /// Validates a row-major list of cells.
    pub fn new(n: usize, d: usize, cells: Vec<CMatrix>) -> Result<Self> {
        MagicGrid { n, d, cells }.try_into()
    }

    fn from_projections(n: usize, d: usize, grid: Vec<ProjectionMatrix>) -> Self {
        debug_assert_eq!(grid.len(), n * n);
        MagicUnitary { n, d, grid }
    }

    fn from_matrices_unchecked(n: usize, d: usize, cells: Vec<CMatrix>) -> Self {
        let grid =
            cells.into_iter().map(|m| ProjectionMatrix::new_unchecked(HermitianMatrix::symmetrized(m))).collect();
        Self::from_projections(n, d, grid)
    }

    /// The one-dimensional representation `u_ij ↦ 1_{σ(i) = j}`.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let n = sigma.n();
        let cells = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let v = if sigma.apply(i) == j { 1.0 } else { 0.0 };
                CMatrix::from_element(1, 1, c(v, 0.0))
            })
            .collect();
        Self::from_matrices_unchecked(n, 1, cells)
    }

    /// `from_permutation` after validating the image list.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        Ok(Self::from_permutation(&Permutation::new(images.to_vec())?))
    }

    /// The `n = 4` grid `[[p, 1−p, 0, 0], [1−p, p, 0, 0], [0, 0, q, 1−q], [0, 0, 1−q, q]]`.
    pub fn two_block(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<Self> {
        Self::two_block_padded(p, q, 4)
    }

    /// [`Self::two_block`] extended by `n − 4` trailing fixed points.
    pub fn two_block_padded(p: &ProjectionMatrix, q: &ProjectionMatrix, n: usize) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
        }
        if n < 4 {
            return Err(Error::SizeMismatch { left: n, right: 4 });
        }
        let d = p.dim();
        let zero = ProjectionMatrix::zeros(d);
        let one = ProjectionMatrix::identity(d);
        let mut grid = vec![zero; n * n];
        let (pc, qc) = (p.complement(), q.complement());
        grid[0] = p.clone();
        grid[1] = pc.clone();
        grid[n] = pc;
        grid[n + 1] = p.clone();
        grid[2 * n + 2] = q.clone();
        grid[2 * n + 3] = qc.clone();
        grid[3 * n + 2] = qc;
        grid[3 * n + 3] = q.clone();
        for k in 4..n {
            grid[k * n + k] = one.clone();
        }
        Ok(Self::from_projections(n, d, grid))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cell(&self, i: usize, j: usize) -> &ProjectionMatrix {
        &self.grid[i * self.n + j]
    }

    pub fn cells(&self) -> &[ProjectionMatrix] {
        &self.grid
    }

    pub fn to_grid(&self) -> MagicGrid {
        MagicGrid { n: self.n, d: self.d, cells: self.grid.iter().map(|p| p.as_matrix().clone()).collect() }
    }

    pub fn validate(&self) -> ValidationReport {
        self.to_grid().validate()
    }

    /// `ω[i][j] = tr_d(P_ij)`, row-major.
    pub fn omega(&self) -> Vec<f64> {
        self.grid.iter().map(|p| p.trace()).collect()
    }

    /// `P_ij ↦ u P_ij u†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.d || u.ncols() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: u.nrows() });
        }
        ensure_unitary(u)?;
        Ok(Self::from_projections(self.n, self.d, self.grid.iter().map(|p| p.conjugate_by(u)).collect()))
    }

    /// Block-diagonal representation `a ⊕ b`.
    pub fn direct_sum(&self, other: &MagicUnitary) -> Result<Self> {
        self.same_n(other)?;
        let cells = self.grid.iter().zip(&other.grid).map(|(a, b)| block_diag(a.as_matrix(), b.as_matrix())).collect();
        Ok(Self::from_matrices_unchecked(self.n, self.d + other.d, cells))
    }

    /// Comultiplication: `grid[i][j] = Σ_k a[i][k] ⊗ b[k][j]` on `C^{a.d} ⊗ C^{b.d}`.
    pub fn convolve(&self, other: &MagicUnitary) -> Result<Self> {
        self.convolve_with_cap(other, DEFAULT_DIM_CAP)
    }

    pub fn convolve_with_cap(&self, other: &MagicUnitary, cap: usize) -> Result<Self> {
        self.same_n(other)?;
        let n = self.n;
        let d = self.d * other.d;
        if d > cap {
            return Err(Error::DimensionOverflow { dim: d, cap });
        }
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = CMatrix::zeros(d, d);
                for k in 0..n {
                    acc += kron_capped(self.cell(i, k).as_matrix(), other.cell(k, j).as_matrix(), cap)?;
                }
                cells.push(acc);
            }
        }
        Ok(Self::from_matrices_unchecked(n, d, cells))
    }

    /// `P_ij ⊗ 1_k`: the same trace on `C^d ⊗ C^k`.
    pub fn amplify_right(&self, k: usize, cap: usize) -> Result<Self> {
        let id = CMatrix::identity(k, k);
        let cells = self.grid.iter().map(|p| kron_capped(p.as_matrix(), &id, cap)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_matrices_unchecked(self.n, self.d * k, cells))
    }

    /// `1_k ⊗ P_ij`.
    pub fn amplify_left(&self, k: usize, cap: usize) -> Result<Self> {
        let id = CMatrix::identity(k, k);
        let cells = self.grid.iter().map(|p| kron_capped(&id, p.as_matrix(), cap)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_matrices_unchecked(self.n, self.d * k, cells))
    }

    /// Cells equal entrywise within `tol` (and same `n`, `d`).
    pub fn approx_eq(&self, other: &MagicUnitary, tol: f64) -> bool {
        self.n == other.n
            && self.d == other.d
            && self.grid.iter().zip(&other.grid).all(|(a, b)| max_abs(&(a.as_matrix() - b.as_matrix())) <= tol)
    }

    /// True when every cell is a scalar multiple of the identity.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.grid.iter().all(|p| {
            let m = p.as_matrix();
            let t = linalg::normalized_trace(p.as_hermitian());
            max_abs(&(m - CMatrix::identity(self.d, self.d) * c(t, 0.0))) <= tol
        })
    }

    fn same_n(&self, other: &MagicUnitary) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}
