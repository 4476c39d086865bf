//! Dense complex linear algebra for small matrices.
//!
//! Everything here is sized for density matrices of at most six qubits
//! (64 × 64). The eigensolver is a cyclic Jacobi method for Hermitian
//! matrices and singular values come from one-sided (Hestenes) Jacobi
//! rotations, both chosen for determinism and good absolute accuracy on
//! tiny problems rather than asymptotic speed.
//!
//! Composite indices are row-major over the tensor factors: subsystem 0
//! is the leftmost factor, so for dims `[d0, d1, d2]` the basis state
//! `|i0 i1 i2>` lives at index `(i0 * d1 + i1) * d2 + i2`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use thiserror::Error;

/// Maximum allowed entrywise deviation `|m - m†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues of a nominally PSD matrix in `[-PSD_CLIP, 0)` are clipped to zero.
pub const PSD_CLIP: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Off-diagonal pivots below this fraction of the Frobenius norm are treated as zero.
const NEGLIGIBLE: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected} entries, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("subsystem dims {dims:?} do not match side length {side}")]
    DimMismatch { dims: Vec<usize>, side: usize },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NotConverged { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Tolerances used by the Hermitian routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinalgConfig {
    pub hermitian_tol: f64,
    pub psd_clip: f64,
}

impl Default for LinalgConfig {
    fn default() -> Self {
        Self {
            hermitian_tol: HERMITIAN_TOL,
            psd_clip: PSD_CLIP,
        }
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad lengths and NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The projector `|psi><psi|` (no normalization applied).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`; `INFINITY` when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m†) / 2`
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    /// `V diag(f(λ)) V†`
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lk) in mapped.iter().enumerate() {
                    acc += v[(i, k)] * lk * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| l)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != m.rows {
        return Err(LinalgError::DimMismatch {
            dims: dims.to_vec(),
            side: m.rows,
        });
    }
    Ok(())
}

fn check_indices(indices: &[usize], count: usize) -> Result<()> {
    match indices.iter().find(|&&i| i >= count) {
        Some(&index) => Err(LinalgError::IndexOutOfRange { index, count }),
        None => Ok(()),
    }
}

/// Splits a composite index into per-subsystem digits (subsystem 0 most significant).
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept subsystems stay in their original relative order, whatever
/// order `keep` lists them in.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    check_indices(keep, dims.len())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // full_index[k * dt + t] = composite index of (kept digits k, traced digits t)
    let mut full_index = vec![0usize; dk * dt];
    let mut scratch = vec![0usize; dims.len()];
    for k in 0..dk {
        let kd = digits(k, &kept_dims);
        for t in 0..dt {
            let td = digits(t, &traced_dims);
            for (&pos, &x) in kept.iter().zip(&kd) {
                scratch[pos] = x;
            }
            for (&pos, &x) in traced.iter().zip(&td) {
                scratch[pos] = x;
            }
            full_index[k * dt + t] = compose(&scratch, dims);
        }
    }

    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..dt {
                acc += rho[(full_index[i * dt + t], full_index[j * dt + t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the tensor factors listed in `parts`, leaving the others untouched.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &[usize],
    parts: &[usize],
) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    check_indices(parts, dims.len())?;
    let n = rho.rows;
    let all_digits: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut di = vec![0usize; dims.len()];
    let mut dj = vec![0usize; dims.len()];
    for i in 0..n {
        for j in 0..n {
            di.copy_from_slice(&all_digits[i]);
            dj.copy_from_slice(&all_digits[j]);
            for &p in parts {
                std::mem::swap(&mut di[p], &mut dj[p]);
            }
            out[(i, j)] = rho[(compose(&di, dims), compose(&dj, dims))];
        }
    }
    Ok(out)
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.data
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::NonFinite);
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(LinalgError::NotHermitian { deviation });
    }
    Ok(())
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    hermitian_eigen_with(m, &LinalgConfig::default())
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then
/// applies the classical real Jacobi rotation, so the combined transform
/// is unitary and zeroes `a_pq` exactly.
pub fn hermitian_eigen_with(m: &ComplexMatrix, cfg: &LinalgConfig) -> Result<HermitianSpectrum> {
    check_hermitian(m, cfg.hermitian_tol)?;
    let n = m.rows;
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(LinalgError::NotConverged { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let magnitude = apq.norm();
                if magnitude <= NEGLIGIBLE * scale {
                    continue;
                }
                rotated = true;
                let phase = apq / magnitude;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * magnitude);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sign / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G restricted to the (p, q) plane
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, col)] = v[(k, src)];
        }
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values in descending order, by one-sided Jacobi rotations on the columns.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.data
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::NonFinite);
    }
    // work column-wise on whichever orientation has fewer columns
    let work = if m.cols > m.rows {
        m.adjoint()
    } else {
        m.clone()
    };
    let ncols = work.cols;
    let mut cols: Vec<Vec<Complex64>> = (0..ncols).map(|j| work.column(j)).collect();

    let mut sweep = 0;
    loop {
        if sweep == MAX_SWEEPS {
            return Err(LinalgError::NotConverged { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        let mut rotated = false;
        for i in 0..ncols {
            for j in i + 1..ncols {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let unphase = (gamma / g).conj();
                let (head, tail) = cols.split_at_mut(j);
                for (u, v) in head[i].iter_mut().zip(tail[0].iter_mut()) {
                    let x = *u;
                    let y = *v * unphase;
                    *u = x * c - y * s;
                    *v = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Sum of singular values. Hermitian inputs use `Σ|λ|` from the eigensolver.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.hermitian_deviation() <= HERMITIAN_TOL {
        let spec = hermitian_eigen(m)?;
        Ok(spec.eigenvalues.iter().map(|l| l.abs()).sum())
    } else {
        Ok(singular_values(m)?.iter().sum())
    }
}

pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(m, &LinalgConfig::default())
}

pub fn psd_sqrt_with(m: &ComplexMatrix, cfg: &LinalgConfig) -> Result<ComplexMatrix> {
    let spec = hermitian_eigen_with(m, cfg)?;
    let spec = clip_psd(spec, cfg.psd_clip)?;
    Ok(spec.map_eigenvalues(f64::sqrt))
}

/// Clamps eigenvalues in `[-clip, 0)` to zero; anything more negative is an error.
pub fn clip_psd(mut spec: HermitianSpectrum, clip: f64) -> Result<HermitianSpectrum> {
    for l in spec.eigenvalues.iter_mut() {
        if *l < 0.0 {
            if *l < -clip {
                return Err(LinalgError::NotPsd { eigenvalue: *l });
            }
            *l = 0.0;
        }
    }
    Ok(spec)
}
