//! Dense complex Hermitian linear algebra: normalized traces, spectra, trace
//! norms and the lattice of orthogonal projections.
//!
//! All traces are normalized (`tr(1) = 1`). Eigen- and singular value
//! decompositions are delegated to `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Default cap on the dimension of any constructed matrix.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Max entrywise deviation from Hermitian symmetry accepted on construction.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// `‖P² − P‖_max` accepted for projections.
pub const PROJECTION_TOL: f64 = 1e-8;
/// Unitarity residual accepted for conjugating unitaries.
pub const UNITARY_TOL: f64 = 1e-10;
/// Singular values of `U_p† U_q` at least `1 - MEET_SV_TOL` span the meet.
pub const MEET_SV_TOL: f64 = 1e-9;
/// Eigenvalue cut separating the range of a projection from its kernel.
pub const RANK_CUT: f64 = 0.5;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Checks `u† u = 1` and returns the max entrywise residual.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    max_abs(&(prod - CMatrix::identity(u.nrows(), u.ncols())))
}

pub fn ensure_unitary(u: &CMatrix) -> Result<()> {
    let residual = unitarity_residual(u);
    if residual <= UNITARY_TOL {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual })
    }
}

/// A square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl TryFrom<CMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: CMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianMatrix> for CMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

impl HermitianMatrix {
    /// Validates hermiticity to [`HERMITIAN_TOL`] and stores the exact
    /// Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let residual = hermiticity_residual(&m);
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self::symmetrized(m))
    }

    /// Takes `(m + m†)/2` without checking how far `m` was from Hermitian.
    pub fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj).scale(0.5))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i], 0.0) } else { c(0.0, 0.0) }))
    }

    /// Builds a Hermitian matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: rows.first().map_or(0, |r| r.len()) });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> HermitianMatrix {
        Self::symmetrized(u * &self.0 * u.adjoint())
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eigh(m: &HermitianMatrix) -> Result<Spectrum> {
    let dim = m.dim();
    if dim == 0 {
        return Ok(Spectrum { values: vec![], vectors: CMatrix::zeros(0, 0) });
    }
    let eig =
        SymmetricEigen::try_new(m.0.clone(), f64::EPSILON, 1000 * dim.max(4)).ok_or(Error::EigenFailure { dim })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(dim, dim, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum { values, vectors })
}

pub fn eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh(m)?.values)
}

/// `(1/dim) Σ_i Re m_ii`.
pub fn normalized_trace(m: &HermitianMatrix) -> f64 {
    normalized_trace_raw(&m.0)
}

pub(crate) fn normalized_trace_raw(m: &CMatrix) -> f64 {
    let dim = m.nrows();
    if dim == 0 {
        return 0.0;
    }
    (0..dim).map(|i| m[(i, i)].re).sum::<f64>() / dim as f64
}

/// Normalized Schatten-1 norm `(1/dim) Σ |λ_k|`.
pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    let dim = m.dim();
    if dim == 0 {
        return Ok(0.0);
    }
    Ok(eigenvalues(m)?.iter().map(|v| v.abs()).sum::<f64>() / dim as f64)
}

/// Normalized squared Hilbert–Schmidt norm `(1/dim) tr(m†m)`.
pub fn hs_norm_sq(m: &HermitianMatrix) -> f64 {
    let dim = m.dim();
    if dim == 0 {
        return 0.0;
    }
    m.0.iter().map(|z| z.norm_sqr()).sum::<f64>() / dim as f64
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    let values = eigenvalues(m)?;
    Ok(values.first().copied().unwrap_or(0.0))
}

/// `a ⊗ b`, failing when the product dimension exceeds `cap`.
pub fn kron_capped(a: &CMatrix, b: &CMatrix, cap: usize) -> Result<CMatrix> {
    let dim = a.nrows() * b.nrows();
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    Ok(a.kronecker(b))
}

pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn kron_with_cap(a: &HermitianMatrix, b: &HermitianMatrix, cap: usize) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix(kron_capped(&a.0, &b.0, cap)?))
}

/// An orthogonal projection: Hermitian, idempotent, spectrum in {0, 1}.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionMatrix(HermitianMatrix);

impl TryFrom<HermitianMatrix> for ProjectionMatrix {
    type Error = Error;

    fn try_from(h: HermitianMatrix) -> Result<Self> {
        Self::new(h)
    }
}

impl From<ProjectionMatrix> for HermitianMatrix {
    fn from(p: ProjectionMatrix) -> Self {
        p.0
    }
}

/// `‖P² − P‖_max`.
pub fn idempotence_residual(m: &CMatrix) -> f64 {
    max_abs(&(m * m - m))
}

impl ProjectionMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let residual = idempotence_residual(&h.0);
        if residual > PROJECTION_TOL {
            return Err(Error::NotProjection { residual });
        }
        // idempotence within 1e-8 pins the spectrum near {0, 1}
        Ok(ProjectionMatrix(h))
    }

    /// Skips validation; callers guarantee idempotence.
    pub(crate) fn new_unchecked(h: HermitianMatrix) -> Self {
        ProjectionMatrix(h)
    }

    pub fn identity(dim: usize) -> Self {
        ProjectionMatrix(HermitianMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ProjectionMatrix(HermitianMatrix::zeros(dim))
    }

    /// Projection onto the column span of `basis`, whose columns must be
    /// orthonormal.
    pub fn from_orthonormal_columns(dim: usize, basis: &CMatrix) -> Self {
        if basis.ncols() == 0 {
            return Self::zeros(dim);
        }
        ProjectionMatrix(HermitianMatrix::symmetrized(basis * basis.adjoint()))
    }

    /// Projection onto the span of arbitrary (nonzero, independent) vectors.
    pub fn onto_span(vectors: &[Vec<C64>]) -> Result<Self> {
        let dim = vectors.first().map_or(0, |v| v.len());
        let mut cols: Vec<nalgebra::DVector<C64>> = Vec::new();
        for v in vectors {
            let mut w = nalgebra::DVector::from_column_slice(v);
            // a second pass restores orthogonality lost to cancellation
            for _ in 0..2 {
                for q in &cols {
                    let coeff = q.dotc(&w);
                    w -= q * coeff;
                }
            }
            let norm = w.norm();
            if norm > 1e-12 {
                cols.push(w / c(norm, 0.0));
            }
        }
        let basis = CMatrix::from_columns(&cols);
        Ok(Self::from_orthonormal_columns(dim, &basis))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0 .0
    }

    /// `1 − P`.
    pub fn complement(&self) -> ProjectionMatrix {
        ProjectionMatrix(HermitianMatrix::identity(self.dim()).sub(&self.0))
    }

    pub fn conjugate_by(&self, u: &CMatrix) -> ProjectionMatrix {
        ProjectionMatrix(self.0.conjugate_by(u))
    }

    pub fn trace(&self) -> f64 {
        normalized_trace(&self.0)
    }

    /// Integer rank, read off the trace.
    pub fn rank(&self) -> usize {
        (normalized_trace(&self.0) * self.dim() as f64).round().max(0.0) as usize
    }

    /// Orthonormal basis of the range (eigenvectors above [`RANK_CUT`]).
    pub fn range_basis(&self) -> Result<CMatrix> {
        let dim = self.dim();
        let spec = eigh(&self.0)?;
        let cols: Vec<usize> = (0..dim).filter(|&k| spec.values[k] > RANK_CUT).collect();
        Ok(CMatrix::from_fn(dim, cols.len(), |i, j| spec.vectors[(i, cols[j])]))
    }
}

fn same_dim(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    Ok(())
}

/// Squared cosines of the principal angles, as the spectrum of the
/// compression `U_p† q U_p`. Eigen-solving this Hermitian matrix is used
/// instead of a complex singular value decomposition, which loses accuracy
/// on clustered singular values.
fn overlap_spectrum(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<Option<(CMatrix, Spectrum)>> {
    let up = p.range_basis()?;
    let uq = q.range_basis()?;
    if up.ncols() == 0 || uq.ncols() == 0 {
        return Ok(None);
    }
    let overlap = up.adjoint() * &uq;
    let gram = HermitianMatrix::symmetrized(&overlap * overlap.adjoint());
    let spectrum = eigh(&gram)?;
    Ok(Some((up, spectrum)))
}

/// Cosines of the principal angles between `Ran(p)` and `Ran(q)`, descending.
pub fn principal_cosines(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<Vec<f64>> {
    same_dim(p, q)?;
    let Some((_, spectrum)) = overlap_spectrum(p, q)? else {
        return Ok(vec![]);
    };
    let count = p.rank().min(q.rank());
    let mut cosines: Vec<f64> = spectrum.values.iter().rev().take(count).map(|&v| v.max(0.0).sqrt()).collect();
    cosines.sort_by(|a, b| b.total_cmp(a));
    Ok(cosines)
}

/// `p ∧ q`: the projection onto `Ran(p) ∩ Ran(q)`.
///
/// Keeps the principal directions of `Ran(p)` whose cosine with `Ran(q)` is
/// at least `1 − MEET_SV_TOL`.
pub fn meet(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<ProjectionMatrix> {
    same_dim(p, q)?;
    let dim = p.dim();
    let Some((up, spectrum)) = overlap_spectrum(p, q)? else {
        return Ok(ProjectionMatrix::zeros(dim));
    };
    let cut = (1.0 - MEET_SV_TOL) * (1.0 - MEET_SV_TOL);
    let keep: Vec<usize> = (0..spectrum.values.len()).filter(|&k| spectrum.values[k] >= cut).collect();
    let directions = CMatrix::from_fn(up.ncols(), keep.len(), |i, j| spectrum.vectors[(i, keep[j])]);
    let basis = &up * directions;
    Ok(ProjectionMatrix::from_orthonormal_columns(dim, &basis))
}

/// `p ∨ q = 1 − (1 − p) ∧ (1 − q)`.
pub fn join(p: &ProjectionMatrix, q: &ProjectionMatrix) -> Result<ProjectionMatrix> {
    Ok(meet(&p.complement(), &q.complement())?.complement())
}

/// `(pqp)^k` for `k` a power of two, by repeated squaring.
///
/// Converges to `p ∧ q` at a rate governed by the smallest nonzero principal
/// angle; used only as an independent cross-check of [`meet`].
pub fn pqp_power(p: &ProjectionMatrix, q: &ProjectionMatrix, k: u32) -> Result<CMatrix> {
    same_dim(p, q)?;
    assert!(k.is_power_of_two(), "k must be a power of two");
    let pm = p.as_matrix();
    let mut acc = pm * q.as_matrix() * pm;
    for _ in 0..k.trailing_zeros() {
        acc = &acc * &acc;
    }
    Ok(acc)
}

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) / c(std::f64::consts::SQRT_2, 0.0)
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / c(d.norm(), 0.0) } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniformly random rank-`rank` projection in dimension `dim`.
pub fn random_projection<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ProjectionMatrix {
    let u = haar_unitary(dim, rng);
    let basis = u.columns(0, rank.min(dim)).into_owned();
    ProjectionMatrix::from_orthonormal_columns(dim, &basis)
}

/// `exp(x)` for skew-Hermitian `x`, through the spectrum of the Hermitian
/// matrix `-i x`.
pub fn expm_skew_hermitian(x: &CMatrix) -> Result<CMatrix> {
    let h = HermitianMatrix::symmetrized(x * c(0.0, -1.0));
    let spec = eigh(&h)?;
    let phases =
        CMatrix::from_fn(
            h.dim(),
            h.dim(),
            |i, j| {
                if i == j {
                    C64::from_polar(1.0, spec.values[i])
                } else {
                    c(0.0, 0.0)
                }
            },
        );
    Ok(&spec.vectors * phases * spec.vectors.adjoint())
}

/// Unitary polar factor of a square matrix: the nearest unitary.
///
/// Built from the spectrum of `m† m`; directions in the kernel of `m` are
/// completed to an orthonormal basis arbitrarily.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    let dim = m.nrows();
    if m.ncols() != dim {
        return Err(Error::NotSquare { rows: dim, cols: m.ncols() });
    }
    let spectrum = eigh(&HermitianMatrix::symmetrized(m.adjoint() * m))?;
    let top = spectrum.values.last().copied().unwrap_or(0.0).max(0.0);
    let mut images: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(dim);
    // largest singular directions first, so they are the least perturbed
    for k in (0..dim).rev() {
        let v = spectrum.vectors.column(k);
        let candidate =
            if top > 0.0 && spectrum.values[k] > 1e-20 * top { m * v } else { nalgebra::DVector::zeros(dim) };
        images.push(orthonormalize_against(candidate, &images, dim));
    }
    let w = CMatrix::from_columns(&images);
    let v = CMatrix::from_fn(dim, dim, |i, j| spectrum.vectors[(i, dim - 1 - j)]);
    Ok(w * v.adjoint())
}

/// Projects `w` off `basis` (two passes) and normalizes it, falling back to
/// standard basis vectors when `w` lies in the span.
fn orthonormalize_against(
    w: nalgebra::DVector<C64>,
    basis: &[nalgebra::DVector<C64>],
    dim: usize,
) -> nalgebra::DVector<C64> {
    let reduce = |mut w: nalgebra::DVector<C64>| {
        for _ in 0..2 {
            for q in basis {
                let coeff = q.dotc(&w);
                w -= q * coeff;
            }
        }
        w
    };
    let w = reduce(w);
    let norm = w.norm();
    if norm > 1e-8 {
        return w / c(norm, 0.0);
    }
    for e in 0..dim {
        let w = reduce(nalgebra::DVector::from_fn(dim, |i, _| if i == e { c(1.0, 0.0) } else { c(0.0, 0.0) }));
        let norm = w.norm();
        if norm > 1e-8 {
            return w / c(norm, 0.0);
        }
    }
    unreachable!("fewer than dim basis vectors always leave room")
}

/// Block-diagonal `a ⊕ b`.
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(da + db, da + db);
    out.view_mut((0, 0), (da, da)).copy_from(a);
    out.view_mut((da, da), (db, db)).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    fn proj_diag(d: &[f64]) -> ProjectionMatrix {
        ProjectionMatrix::new(diag(d)).unwrap()
    }

    #[test]
    fn normalized_trace_examples() {
        assert_eq!(normalized_trace(&HermitianMatrix::identity(3)), 1.0);
        assert_eq!(normalized_trace(&HermitianMatrix::zeros(5)), 0.0);
        assert_abs_diff_eq!(normalized_trace(&diag(&[1.0, 1.0, 0.0])), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn trace_norm_examples() {
        assert_abs_diff_eq!(trace_norm(&diag(&[1.0, -1.0])).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_norm(&diag(&[0.6, -0.2, 0.0])).unwrap(), 0.8 / 3.0, epsilon = 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_projection(5, 2, &mut rng);
        assert_abs_diff_eq!(trace_norm(p.as_hermitian()).unwrap(), p.trace(), epsilon = 1e-12);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_abs_diff_eq!(min_eigenvalue(&HermitianMatrix::identity(4)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(min_eigenvalue(&diag(&[2.0, -3.0])).unwrap(), -3.0, epsilon = 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_projection(4, 3, &mut rng);
        assert_abs_diff_eq!(min_eigenvalue(p.as_hermitian()).unwrap(), 0.0, epsilon = 1e-12);
        let full = random_projection(3, 3, &mut rng);
        assert_abs_diff_eq!(min_eigenvalue(full.as_hermitian()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn projection_rejects_half_identity() {
        let half = HermitianMatrix::identity(2).scale(0.5);
        assert!(matches!(ProjectionMatrix::new(half), Err(Error::NotProjection { .. })));
    }

    #[test]
    fn meet_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_projection(4, 2, &mut rng);
        assert_abs_diff_eq!(max_abs(&(meet(&p, &p).unwrap().as_matrix() - p.as_matrix())), 0.0, epsilon = 1e-10);
        let id = ProjectionMatrix::identity(4);
        assert_abs_diff_eq!(max_abs(&(meet(&p, &id).unwrap().as_matrix() - p.as_matrix())), 0.0, epsilon = 1e-10);

        let p = proj_diag(&[1.0, 1.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = ProjectionMatrix::onto_span(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(s, 0.0), c(s, 0.0)],
        ])
        .unwrap();
        let m = meet(&p, &q).unwrap();
        let e1 = proj_diag(&[1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(max_abs(&(m.as_matrix() - e1.as_matrix())), 0.0, epsilon = 1e-12);

        // join has rank rank(p) + rank(q) − rank(meet) = 2 + 2 − 1
        let j = join(&p, &q).unwrap();
        assert_eq!(j.rank(), 3);
        assert_abs_diff_eq!(max_abs(&(j.as_matrix() - CMatrix::identity(3, 3))), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn join_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_projection(3, 1, &mut rng);
        let zero = ProjectionMatrix::zeros(3);
        assert_abs_diff_eq!(max_abs(&(join(&p, &zero).unwrap().as_matrix() - p.as_matrix())), 0.0, epsilon = 1e-10);
        let id = ProjectionMatrix::identity(3);
        assert_abs_diff_eq!(max_abs(&(join(&p, &id).unwrap().as_matrix() - id.as_matrix())), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn meet_of_generic_pair_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_projection(4, 2, &mut rng);
        let q = random_projection(4, 2, &mut rng);
        assert_eq!(meet(&p, &q).unwrap().rank(), 0);
        let q3 = random_projection(4, 3, &mut rng);
        assert_eq!(meet(&p, &q3).unwrap().rank(), 1);
    }

    #[test]
    fn kron_examples() {
        let k = kron(&HermitianMatrix::identity(2), &HermitianMatrix::identity(3)).unwrap();
        assert_eq!(k, HermitianMatrix::identity(6));
        let k = kron(&diag(&[1.0, 0.0]), &diag(&[1.0, 0.0])).unwrap();
        assert_eq!(k, diag(&[1.0, 0.0, 0.0, 0.0]));

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = HermitianMatrix::symmetrized(gaussian_matrix(3, 3, &mut rng));
        let b = HermitianMatrix::symmetrized(gaussian_matrix(4, 4, &mut rng));
        let lhs = normalized_trace(&kron(&a, &b).unwrap());
        // direct: (1/12) Σ_{i,k} a_ii b_kk
        let mut direct = 0.0;
        for i in 0..3 {
            for k in 0..4 {
                direct += a.as_matrix()[(i, i)].re * b.as_matrix()[(k, k)].re;
            }
        }
        assert_abs_diff_eq!(lhs, direct / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lhs, normalized_trace(&a) * normalized_trace(&b), epsilon = 1e-12);
    }

    #[test]
    fn kron_respects_cap() {
        let a = HermitianMatrix::identity(3);
        assert_eq!(kron_with_cap(&a, &a, 8), Err(Error::DimensionOverflow { dim: 9, cap: 8 }));
    }

    #[test]
    fn pqp_iteration_converges_to_meet() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_projection(5, 3, &mut rng);
        let q = random_projection(5, 4, &mut rng);
        let m = meet(&p, &q).unwrap();
        assert_eq!(m.rank(), 2);
        let iter = pqp_power(&p, &q, 256).unwrap();
        assert!(max_abs(&(iter - m.as_matrix())) < 1e-4);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in 1..6 {
            assert!(unitarity_residual(&haar_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn skew_exponential_is_unitary_and_matches_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = gaussian_matrix(3, 3, &mut rng) * c(0.1, 0.0);
        let x = &g - g.adjoint();
        let e = expm_skew_hermitian(&x).unwrap();
        assert!(unitarity_residual(&e) < 1e-12);
        let mut series = CMatrix::identity(3, 3);
        let mut term = CMatrix::identity(3, 3);
        for k in 1..30 {
            term = &term * &x / c(k as f64, 0.0);
            series += &term;
        }
        assert!(max_abs(&(e - series)) < 1e-12);
    }

    #[test]
    fn polar_factor_is_unitary_and_nearest() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let u = haar_unitary(4, &mut rng);
        assert!(max_abs(&(polar_unitary(&u).unwrap() - &u)) < 1e-12);
        let g = gaussian_matrix(5, 5, &mut rng);
        let w = polar_unitary(&g).unwrap();
        assert!(unitarity_residual(&w) < 1e-12);
        // w† g is the positive factor, so it is Hermitian
        let h = w.adjoint() * &g;
        assert!(max_abs(&(&h - h.adjoint())) < 1e-10);
        let singular = CMatrix::from_fn(3, 3, |i, j| if i == 0 && j == 0 { c(2.0, 0.0) } else { c(0.0, 0.0) });
        assert!(unitarity_residual(&polar_unitary(&singular).unwrap()) < 1e-12);
        assert!(unitarity_residual(&polar_unitary(&CMatrix::zeros(2, 2)).unwrap()) < 1e-12);
    }

    #[test]
    fn meet_of_tensor_products_with_clustered_cosines() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let shared = random_projection(6, 3, &mut rng);
        let extra_p = random_projection(6, 2, &mut rng);
        let a = ProjectionMatrix::onto_span(
            &[shared.range_basis().unwrap(), extra_p.range_basis().unwrap().columns(0, 1).into_owned()]
                .iter()
                .flat_map(|m| m.column_iter().map(|col| col.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let k = |x: &ProjectionMatrix, y: &ProjectionMatrix| {
            ProjectionMatrix::new(kron(x.as_hermitian(), y.as_hermitian()).unwrap()).unwrap()
        };
        let lhs = meet(&k(&a, &a), &k(&shared, &a)).unwrap();
        let rhs = k(&shared, &a);
        assert!(max_abs(&(lhs.as_matrix() - rhs.as_matrix())) < 1e-10);
        let cos = principal_cosines(&a, &shared).unwrap();
        assert_eq!(cos.len(), 3);
        assert!(cos.iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }
}
