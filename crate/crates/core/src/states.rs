//! Pure and mixed state types, the generalized Schmidt and W-class
//! families, and seeded Haar sampling.
//!
//! Random draws use [`ChaCha8Rng`] seeded through `seed_from_u64`, so a
//! given seed yields the same amplitudes on every platform.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};

/// The seedable generator used for every random draw in this crate.
pub type StateRng = ChaCha8Rng;

/// Inputs whose squared norm is within this distance of 1 are renormalized silently.
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Tolerance of the stored-norm invariant on [`PureState`].
pub const NORM_TOL: f64 = 1e-12;

/// Trace tolerance for [`DensityMatrix`] validation.
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("squared norm {norm_sq} is too far from 1 to renormalize")]
    Normalization { norm_sq: f64 },
    #[error("negative coefficient {0} where a nonnegative one is required")]
    NegativeCoefficient(f64),
    #[error("amplitude count {actual} does not match dims {dims:?}")]
    DimMismatch { dims: Vec<usize>, actual: usize },
    #[error("state needs at least one subsystem, all of positive dimension")]
    EmptyDims,
    #[error("density matrix trace {0} is not 1")]
    Trace(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, StateError>;

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(StateError::EmptyDims);
    }
    Ok(())
}

/// A normalized state vector over a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates the shape and normalizes amplitudes whose norm is within
    /// [`RENORMALIZE_TOL`] of one.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims)?;
        if dims.iter().product::<usize>() != amps.len() {
            return Err(StateError::DimMismatch {
                dims,
                actual: amps.len(),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite.into());
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > RENORMALIZE_TOL {
            return Err(StateError::Normalization { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        let amps = amps.into_iter().map(|z| z * inv).collect();
        Ok(Self { dims, amps })
    }

    /// A computational basis state `|digits>`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(x, d)| x >= d) {
            return Err(StateError::DimMismatch {
                dims,
                actual: digits.len(),
            });
        }
        let index = digits
            .iter()
            .zip(&dims)
            .fold(0, |acc, (&x, &d)| acc * d + x);
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.iter().product()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reshapes the amplitudes into a matrix whose rows index the subsystems
    /// in `part` (original order) and whose columns index the rest.
    ///
    /// Column `t` is the unnormalized conditional state of `part` given the
    /// rest is in basis state `t`, so the columns form a pure-state ensemble
    /// for the reduction onto `part`.
    pub fn as_bipartite(&self, part: &[usize]) -> Result<ComplexMatrix> {
        let count = self.dims.len();
        if let Some(&index) = part.iter().find(|&&i| i >= count) {
            return Err(LinalgError::IndexOutOfRange { index, count }.into());
        }
        let mut rows_sys: Vec<usize> = part.to_vec();
        rows_sys.sort_unstable();
        rows_sys.dedup();
        let cols_sys: Vec<usize> = (0..count).filter(|i| !rows_sys.contains(i)).collect();
        let row_dim: usize = rows_sys.iter().map(|&i| self.dims[i]).product();
        let col_dim: usize = cols_sys.iter().map(|&i| self.dims[i]).product();

        let mut m = ComplexMatrix::zeros(row_dim, col_dim);
        let mut digits = vec![0usize; count];
        for (index, &amp) in self.amps.iter().enumerate() {
            let mut rest = index;
            for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
                *slot = rest % d;
                rest /= d;
            }
            let r = rows_sys
                .iter()
                .fold(0, |acc, &i| acc * self.dims[i] + digits[i]);
            let c = cols_sys
                .iter()
                .fold(0, |acc, &i| acc * self.dims[i] + digits[i]);
            m[(r, c)] = amp;
        }
        Ok(m)
    }

    /// Applies `U_0 ⊗ U_1 ⊗ ...`, one unitary per subsystem.
    pub fn apply_local(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        if unitaries.len() != self.dims.len()
            || unitaries
                .iter()
                .zip(&self.dims)
                .any(|(u, &d)| u.rows() != d || u.cols() != d)
        {
            return Err(StateError::DimMismatch {
                dims: self.dims.clone(),
                actual: unitaries.len(),
            });
        }
        let mut full = ComplexMatrix::identity(1);
        for u in unitaries {
            full = linalg::kron(&full, u);
        }
        let column = ComplexMatrix::from_vec(self.amps.len(), 1, self.amps.clone())?;
        let out = full.matmul(&column)?;
        Self::new(self.dims.clone(), out.as_slice().to_vec())
    }
}

/// A validated density matrix together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity (eigenvalues ≥ -1e-10).
    pub fn new(dims: Vec<usize>, mat: ComplexMatrix) -> Result<Self> {
        check_dims(&dims)?;
        if !mat.is_square() || mat.rows() != dims.iter().product::<usize>() {
            return Err(StateError::DimMismatch {
                dims,
                actual: mat.rows(),
            });
        }
        let spec = linalg::hermitian_eigen(&mat)?;
        let trace: f64 = spec.eigenvalues.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(StateError::Trace(trace));
        }
        linalg::clip_psd(spec, linalg::PSD_CLIP)?;
        Ok(Self { dims, mat })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let n: usize = dims.iter().product();
        let mat = ComplexMatrix::from_diag(&vec![1.0 / n as f64; n]);
        Ok(Self { dims, mat })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `|ψ><ψ|`
pub fn to_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix {
        dims: psi.dims.clone(),
        mat: ComplexMatrix::outer(&psi.amps),
    }
}

/// Reduced state on the subsystems in `keep` (kept in their original order).
pub fn reduce(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let mat = linalg::partial_trace(&rho.mat, &rho.dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let dims = kept.iter().map(|&i| rho.dims[i]).collect();
    Ok(DensityMatrix {
        dims,
        mat: mat.hermitian_part(),
    })
}

/// Reduced state of a pure state, computed directly from the amplitudes as `M M†`
/// where `M` is [`PureState::as_bipartite`].
pub fn reduce_pure(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let m = psi.as_bipartite(keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let dims = kept.iter().map(|&i| psi.dims[i]).collect();
    Ok(DensityMatrix {
        dims,
        mat: m.matmul(&m.adjoint())?.hermitian_part(),
    })
}

fn normalized_nonneg(coeffs: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = coeffs.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(StateError::NegativeCoefficient(bad));
    }
    let norm_sq: f64 = coeffs.iter().map(|x| x * x).sum();
    if (norm_sq - 1.0).abs() > RENORMALIZE_TOL {
        return Err(StateError::Normalization { norm_sq });
    }
    let inv = 1.0 / norm_sq.sqrt();
    Ok(coeffs.iter().map(|x| x * inv).collect())
}

/// Three-qubit generalized Schmidt form
/// `λ0|000> + λ1 e^{iφ}|100> + λ2|101> + λ3|110> + λ4|111>`.
///
/// The kets are read with the last two qubits in the order (A3, A2): λ2
/// sits on A1 = A2 = 1, A3 = 0 and λ3 on A1 = A3 = 1, A2 = 0. With that
/// reading the pairwise concurrences are `C_{A1A2} = 2λ0λ2` and
/// `C_{A1A3} = 2λ0λ3`, the usual closed forms for this family.
pub fn schmidt3_state(lambdas: [f64; 5], phi: f64) -> Result<PureState> {
    let l = normalized_nonneg(&lambdas)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    // index bits are (A1, A2, A3)
    amps[0b000] = Complex64::new(l[0], 0.0);
    amps[0b100] = Complex64::from_polar(l[1], phi);
    amps[0b110] = Complex64::new(l[2], 0.0);
    amps[0b101] = Complex64::new(l[3], 0.0);
    amps[0b111] = Complex64::new(l[4], 0.0);
    Ok(PureState {
        dims: vec![2, 2, 2],
        amps,
    })
}

/// `a|100> + b|010> + c|001>`
pub fn w_class_state(a: f64, b: f64, c: f64) -> Result<PureState> {
    let l = normalized_nonneg(&[a, b, c])?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b100] = Complex64::new(l[0], 0.0);
    amps[0b010] = Complex64::new(l[1], 0.0);
    amps[0b001] = Complex64::new(l[2], 0.0);
    Ok(PureState {
        dims: vec![2, 2, 2],
        amps,
    })
}

/// The W-class instance `(|100> + |010>)/2 + (√2/2)|001>`.
pub fn w_class_default() -> PureState {
    w_class_state(0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2).expect("normalized by construction")
}

/// The generalized Schmidt instance with λ0 = λ3 = 1/2 and λ1 = λ2 = λ4 = √6/6.
pub fn schmidt3_example() -> PureState {
    let s = 6f64.sqrt() / 6.0;
    schmidt3_state([0.5, s, s, 0.5, s], 0.0).expect("normalized by construction")
}

/// Haar-random pure state: a normalized complex standard-normal vector.
pub fn haar_random_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    let mut rng = StateRng::seed_from_u64(seed);
    haar_random_pure_with(dims, &mut rng)
}

pub fn haar_random_pure_with(dims: &[usize], rng: &mut StateRng) -> Result<PureState> {
    check_dims(dims)?;
    let n: usize = dims.iter().product();
    let mut amps: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in amps.iter_mut() {
        *z /= norm;
    }
    Ok(PureState {
        dims: dims.to_vec(),
        amps,
    })
}

fn gaussian(rng: &mut StateRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random `d × d` unitary from Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // a draw in the span of earlier columns has probability zero; redraw if it happens numerically
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn schmidt3_layout() {
        let psi = schmidt3_state([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(psi, PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap());

        let psi = schmidt3_state([0.5, 0.5, 0.5, 0.5, 0.0], 0.7).unwrap();
        let nonzero: Vec<usize> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert!(nonzero.iter().all(|i| [0, 4, 5, 6, 7].contains(i)));
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = NORM_TOL);
        // phase lands on |100>
        let z = psi.amplitudes()[4];
        assert_abs_diff_eq!(z.arg(), 0.7, epsilon = 1e-14);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn normalization_rules() {
        // 0.7071 is close enough to 1/sqrt(2) to be renormalized
        let psi = w_class_state(0.0, 0.70710678, 0.70710678).unwrap();
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = NORM_TOL);
        assert!(matches!(
            w_class_state(0.5, 0.5, 0.5),
            Err(StateError::Normalization { .. })
        ));
        assert!(matches!(
            schmidt3_state([1.0, -0.0001, 0.0, 0.0, 0.0], 0.0),
            Err(StateError::NegativeCoefficient(_))
        ));
        assert!(matches!(
            PureState::new(vec![2], vec![Complex64::new(1.0, 0.0)]),
            Err(StateError::DimMismatch { .. })
        ));
        assert!(matches!(
            PureState::new(vec![], vec![]),
            Err(StateError::EmptyDims)
        ));
    }

    #[test]
    fn w_class_examples() {
        let psi = w_class_state(1.0, 0.0, 0.0).unwrap();
        assert_eq!(psi, PureState::basis(vec![2, 2, 2], &[1, 0, 0]).unwrap());
        let w = w_class_default();
        assert_abs_diff_eq!(w.amplitudes()[4].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.amplitudes()[2].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.amplitudes()[1].re, 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn haar_is_seeded_and_normalized() {
        let a = haar_random_pure(&[2, 3, 2], 99).unwrap();
        let b = haar_random_pure(&[2, 3, 2], 99).unwrap();
        let c = haar_random_pure(&[2, 3, 2], 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_abs_diff_eq!(a.norm_sqr(), 1.0, epsilon = NORM_TOL);
    }

    #[test]
    fn haar_purity_moment_two_qubits() {
        // E[Tr ρ_A²] = (dA + dB) / (dA dB + 1) for Haar states on dA ⊗ dB
        let mut rng = StateRng::seed_from_u64(2024);
        let samples = 10_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let psi = haar_random_pure_with(&[2, 2], &mut rng).unwrap();
            acc += reduce_pure(&psi, &[0]).unwrap().purity();
        }
        let mean = acc / samples as f64;
        assert!((mean - 0.8).abs() < 0.02, "mean purity {mean}");
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = StateRng::seed_from_u64(5);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng);
            assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-13);
        }
    }

    #[test]
    fn density_and_reductions() {
        let psi = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let rho = to_density(&psi);
        let spec = linalg::hermitian_eigen(rho.matrix()).unwrap();
        assert_abs_diff_eq!(spec.eigenvalues[0], 1.0, epsilon = 1e-15);
        assert!(spec.eigenvalues[1..].iter().all(|l| l.abs() < 1e-15));
        assert!(matches!(
            reduce(&rho, &[3]),
            Err(StateError::Linalg(LinalgError::IndexOutOfRange { .. }))
        ));

        let mut rng = StateRng::seed_from_u64(17);
        for _ in 0..20 {
            let psi = haar_random_pure_with(&[2, 3, 2, 2], &mut rng).unwrap();
            let rho = to_density(&psi);
            let direct = reduce(&rho, &[0, 3]).unwrap();
            let staged = reduce(&reduce(&rho, &[0, 2, 3]).unwrap(), &[0, 2]).unwrap();
            let from_amps = reduce_pure(&psi, &[3, 0]).unwrap();
            assert!(direct.matrix().max_abs_diff(from_amps.matrix()) < 1e-14);
            assert_eq!(direct.dims(), &[2, 2]);
            assert!(direct.matrix().max_abs_diff(staged.matrix()) < 1e-14);
            // every reduction is itself a valid density matrix
            DensityMatrix::new(direct.dims().to_vec(), direct.matrix().clone()).unwrap();
            DensityMatrix::new(rho.dims().to_vec(), rho.matrix().clone()).unwrap();
            assert_abs_diff_eq!(direct.matrix().trace().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn density_validation() {
        let bad_trace = ComplexMatrix::from_diag(&[0.5, 0.6]);
        assert!(matches!(
            DensityMatrix::new(vec![2], bad_trace),
            Err(StateError::Trace(_))
        ));
        let not_psd = ComplexMatrix::from_diag(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(vec![2], not_psd),
            Err(StateError::Linalg(LinalgError::NotPsd { .. }))
        ));
        let mm = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_abs_diff_eq!(mm.purity(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn local_unitaries_preserve_norm() {
        let mut rng = StateRng::seed_from_u64(8);
        let psi = haar_random_pure_with(&[2, 2, 2], &mut rng).unwrap();
        let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let moved = psi.apply_local(&us).unwrap();
        assert_abs_diff_eq!(moved.norm_sqr(), 1.0, epsilon = NORM_TOL);
    }
}
