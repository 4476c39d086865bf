//! Bipartite correlation measures: concurrence, concurrence of assistance,
//! negativity and its squared convex-roof (SCREN) and assisted (SCRENoA)
//! extensions, plus assembly of the one-vs-rest / pairwise measure vector.
//!
//! Negativity uses the un-halved convention `N(ρ) = ||ρ^{T_A}||₁ - 1`
//! throughout; [`NegativityConvention::Halved`] gives the conventional
//! value when explicitly requested.
//!
//! Two-qubit mixed-state quantities go through the Wootters numbers
//! `μ₁ ≥ μ₂ ≥ μ₃ ≥ μ₄`, the square roots of the eigenvalues of `ρρ̃`.
//! They are computed as the singular values of the overlap matrix
//! `T_kl = ψ_kᵀ (σ_y ⊗ σ_y) ψ_l` of any pure-state ensemble
//! `ρ = Σ_k ψ_k ψ_k†`. Taking singular values directly keeps the absolute
//! error at machine precision even when `ρ` is rank deficient, where a
//! square root of tiny eigenvalues would amplify round-off.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::states::{self, DensityMatrix, PureState, StateError};

/// Largest qubit count accepted by [`measure_vector`].
pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("partition {part:?} is not a proper nonempty subset of {count} subsystems")]
    InvalidPartition { part: Vec<usize>, count: usize },
    #[error("expected a two-qubit state, got dims {0:?}")]
    NotTwoQubit(Vec<usize>),
    #[error("{kind} measure vectors need 3 to {max} qubits, got dims {dims:?}", max = MAX_QUBITS)]
    Unsupported { kind: MeasureKind, dims: Vec<usize> },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, MeasureError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Concurrence,
    NegativityScren,
    Screnoa,
    ConcurrenceAssistance,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Concurrence,
        MeasureKind::NegativityScren,
        MeasureKind::Screnoa,
        MeasureKind::ConcurrenceAssistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::NegativityScren => "negativity_scren",
            MeasureKind::Screnoa => "screnoa",
            MeasureKind::ConcurrenceAssistance => "concurrence_assistance",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "concurrence" | "c" => Ok(MeasureKind::Concurrence),
            "negativity_scren" | "scren" | "negativity" => Ok(MeasureKind::NegativityScren),
            "screnoa" => Ok(MeasureKind::Screnoa),
            "concurrence_assistance" | "coa" => Ok(MeasureKind::ConcurrenceAssistance),
            _ => Err(format!(
                "unknown measure '{s}' (expected concurrence, negativity_scren, screnoa or concurrence_assistance)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativityConvention {
    /// `||ρ^{T_A}||₁ - 1`
    #[default]
    Unhalved,
    /// `(||ρ^{T_A}||₁ - 1) / 2`
    Halved,
}

/// One state's correlation profile: `Q_{A1|A2...An}` and `[Q_{A1A2}, ..., Q_{A1An}]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureVector {
    pub kind: MeasureKind,
    pub one_vs_rest: f64,
    /// Entry `i` belongs to the pair (A1, A_{i+2}).
    pub pairwise: Vec<f64>,
}

fn check_partition(part: &[usize], count: usize) -> Result<()> {
    let mut p = part.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.is_empty() || p.len() >= count || p.iter().any(|&i| i >= count) {
        return Err(MeasureError::InvalidPartition {
            part: part.to_vec(),
            count,
        });
    }
    Ok(())
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(MeasureError::NotTwoQubit(rho.dims().to_vec()));
    }
    Ok(())
}

/// `√(2(1 - Tr ρ_A²))`, with `ρ_A` the reduction onto `part_a`.
pub fn concurrence_pure(psi: &PureState, part_a: &[usize]) -> Result<f64> {
    check_partition(part_a, psi.num_subsystems())?;
    let purity = states::reduce_pure(psi, part_a)?.purity();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// `||ρ^{T_A}||₁ - 1`
pub fn negativity(rho: &DensityMatrix, part_a: &[usize]) -> Result<f64> {
    negativity_with(rho, part_a, NegativityConvention::Unhalved)
}

pub fn negativity_with(
    rho: &DensityMatrix,
    part_a: &[usize],
    convention: NegativityConvention,
) -> Result<f64> {
    check_partition(part_a, rho.dims().len())?;
    let pt = linalg::partial_transpose(rho.matrix(), rho.dims(), part_a)?;
    let raw = (linalg::trace_norm(&pt)? - 1.0).max(0.0);
    Ok(match convention {
        NegativityConvention::Unhalved => raw,
        NegativityConvention::Halved => raw / 2.0,
    })
}

/// Pure-state negativity from the reduced spectrum, `(Tr √ρ_A)² - 1`.
pub fn negativity_pure(psi: &PureState, part_a: &[usize]) -> Result<f64> {
    check_partition(part_a, psi.num_subsystems())?;
    let rho_a = states::reduce_pure(psi, part_a)?;
    let spec = linalg::clip_psd(linalg::hermitian_eigen(rho_a.matrix())?, linalg::PSD_CLIP)?;
    let root_trace: f64 = spec.eigenvalues.iter().map(|l| l.sqrt()).sum();
    Ok((root_trace * root_trace - 1.0).max(0.0))
}

/// Squared negativity of a pure state.
pub fn scren_pure(psi: &PureState, part_a: &[usize]) -> Result<f64> {
    Ok(negativity_pure(psi, part_a)?.powi(2))
}

/// `σ_y ⊗ σ_y` acts on two-qubit amplitudes as `(a, b, c, d) ↦ (-d, c, b, -a)`.
fn spin_flip(v: &[Complex64]) -> [Complex64; 4] {
    [-v[3], v[2], v[1], -v[0]]
}

/// Wootters numbers `μ₁ ≥ ... ≥ μ₄` of `Σ_k ψ_k ψ_k†`, where the columns of
/// `ensemble` are the (unnormalized) two-qubit vectors `ψ_k`.
pub fn wootters_mus_from_ensemble(ensemble: &ComplexMatrix) -> Result<[f64; 4]> {
    if ensemble.rows() != 4 {
        return Err(MeasureError::NotTwoQubit(vec![ensemble.rows()]));
    }
    let m = ensemble.cols();
    let cols: Vec<Vec<Complex64>> = (0..m).map(|k| ensemble.column(k)).collect();
    let flipped: Vec<[Complex64; 4]> = cols.iter().map(|c| spin_flip(c)).collect();
    let mut t = ComplexMatrix::zeros(m, m);
    for k in 0..m {
        for l in 0..m {
            t[(k, l)] = cols[k].iter().zip(&flipped[l]).map(|(a, b)| a * b).sum();
        }
    }
    let sv = linalg::singular_values(&t)?;
    let mut mus = [0.0; 4];
    for (slot, s) in mus.iter_mut().zip(sv) {
        *slot = s;
    }
    Ok(mus)
}

/// Wootters numbers of a two-qubit density matrix, via its eigen-ensemble.
pub fn wootters_mus(rho: &DensityMatrix) -> Result<[f64; 4]> {
    check_two_qubit(rho)?;
    let spec = linalg::clip_psd(linalg::hermitian_eigen(rho.matrix())?, linalg::PSD_CLIP)?;
    let mut ensemble = ComplexMatrix::zeros(4, 4);
    for (k, &p) in spec.eigenvalues.iter().enumerate() {
        let w = p.sqrt();
        for i in 0..4 {
            ensemble[(i, k)] = spec.eigenvectors[(i, k)] * w;
        }
    }
    wootters_mus_from_ensemble(&ensemble)
}

fn concurrence_from_mus(mus: &[f64; 4]) -> f64 {
    (mus[0] - mus[1] - mus[2] - mus[3]).max(0.0)
}

fn assistance_from_mus(mus: &[f64; 4]) -> f64 {
    mus.iter().sum()
}

/// Wootters concurrence `max(0, μ₁ - μ₂ - μ₃ - μ₄)`.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_from_mus(&wootters_mus(rho)?))
}

/// Concurrence of assistance `μ₁ + μ₂ + μ₃ + μ₄`.
pub fn concurrence_assistance_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(assistance_from_mus(&wootters_mus(rho)?))
}

/// SCREN of a two-qubit state. Pure two-qubit negativity equals concurrence,
/// so the convex roof is the Wootters concurrence.
pub fn scren_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_2q(rho)?.powi(2))
}

/// SCRENoA of a two-qubit state, the squared concurrence of assistance.
pub fn screnoa_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_assistance_2q(rho)?.powi(2))
}

fn pairwise_value(kind: MeasureKind, mus: &[f64; 4]) -> f64 {
    match kind {
        MeasureKind::Concurrence => concurrence_from_mus(mus),
        MeasureKind::NegativityScren => concurrence_from_mus(mus).powi(2),
        MeasureKind::Screnoa => assistance_from_mus(mus).powi(2),
        MeasureKind::ConcurrenceAssistance => assistance_from_mus(mus),
    }
}

/// Measure vector of an n-qubit pure state, 3 ≤ n ≤ 6, with A1 = qubit 0.
///
/// Pairwise entries use the exact ensemble of conditional states obtained
/// by reshaping the amplitudes, so no eigen-decomposition of `ρ_{A1Ai}` is
/// needed.
pub fn measure_vector(psi: &PureState, kind: MeasureKind) -> Result<MeasureVector> {
    let n = psi.num_subsystems();
    if !(3..=MAX_QUBITS).contains(&n) || psi.dims().iter().any(|&d| d != 2) {
        return Err(MeasureError::Unsupported {
            kind,
            dims: psi.dims().to_vec(),
        });
    }
    let one_vs_rest = match kind {
        MeasureKind::Concurrence | MeasureKind::ConcurrenceAssistance => {
            concurrence_pure(psi, &[0])?
        }
        MeasureKind::NegativityScren | MeasureKind::Screnoa => scren_pure(psi, &[0])?,
    };
    let pairwise = (1..n)
        .map(|i| {
            let ensemble = psi.as_bipartite(&[0, i])?;
            Ok(pairwise_value(
                kind,
                &wootters_mus_from_ensemble(&ensemble)?,
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MeasureVector {
        kind,
        one_vs_rest,
        pairwise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{haar_random_pure_with, haar_unitary, reduce_pure, to_density, StateRng};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        PureState::new(
            vec![2, 2],
            vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)],
        )
        .unwrap()
    }

    /// Independent route: μ² are the eigenvalues of √ρ ρ̃ √ρ.
    fn mus_via_root(rho: &DensityMatrix) -> [f64; 4] {
        let m = rho.matrix();
        let y = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.0, 0.0, 0.0, -1.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                -1.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        let tilde = &(&y * &m.conj()) * &y;
        let root = linalg::psd_sqrt(m).unwrap();
        let r = (&(&root * &tilde) * &root).hermitian_part();
        let spec = linalg::hermitian_eigen(&r).unwrap();
        let mut out = [0.0; 4];
        for (o, l) in out.iter_mut().zip(spec.eigenvalues) {
            *o = l.max(0.0).sqrt();
        }
        out
    }

    fn random_mixed_2q(rng: &mut StateRng) -> DensityMatrix {
        // trace out a 2-dim ancilla: generic rank-2 two-qubit state; 4-dim ancilla gives full rank
        let ancilla = if rng.random_bool(0.5) { 2 } else { 4 };
        let psi = haar_random_pure_with(&[2, 2, ancilla], rng).unwrap();
        reduce_pure(&psi, &[0, 1]).unwrap()
    }

    #[test]
    fn concurrence_pure_examples() {
        let product = PureState::basis(vec![2, 2, 2], &[0, 1, 0]).unwrap();
        assert_eq!(concurrence_pure(&product, &[0]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            concurrence_pure(&bell(), &[0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let ex = states::schmidt3_example();
        assert_abs_diff_eq!(
            concurrence_pure(&ex, &[0]).unwrap(),
            21f64.sqrt() / 6.0,
            epsilon = 1e-12
        );
        // the rest-side purity gives the same number
        assert_abs_diff_eq!(
            concurrence_pure(&ex, &[1, 2]).unwrap(),
            21f64.sqrt() / 6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn partition_checks() {
        let psi = bell();
        for bad in [vec![], vec![0, 1], vec![2]] {
            assert!(matches!(
                concurrence_pure(&psi, &bad),
                Err(MeasureError::InvalidPartition { .. })
            ));
        }
        let rho = to_density(&states::w_class_default());
        assert!(matches!(
            concurrence_2q(&rho),
            Err(MeasureError::NotTwoQubit(_))
        ));
        assert!(matches!(
            negativity(&rho, &[0, 1, 2]),
            Err(MeasureError::InvalidPartition { .. })
        ));
    }

    #[test]
    fn wootters_examples() {
        let mm = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_eq!(concurrence_2q(&mm).unwrap(), 0.0);
        assert_abs_diff_eq!(
            concurrence_assistance_2q(&mm).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let ex = states::schmidt3_example();
        let r12 = reduce_pure(&ex, &[0, 1]).unwrap();
        let r13 = reduce_pure(&ex, &[0, 2]).unwrap();
        assert_abs_diff_eq!(
            concurrence_2q(&r12).unwrap(),
            6f64.sqrt() / 6.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(concurrence_2q(&r13).unwrap(), 0.5, epsilon = 1e-12);

        let b = to_density(&bell());
        assert_abs_diff_eq!(concurrence_2q(&b).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_assistance_2q(&b).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn assistance_on_w_state() {
        let w = states::w_class_default();
        let r12 = reduce_pure(&w, &[0, 1]).unwrap();
        let r13 = reduce_pure(&w, &[0, 2]).unwrap();
        assert_abs_diff_eq!(
            concurrence_assistance_2q(&r12).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(screnoa_2q(&r12).unwrap(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(
            concurrence_assistance_2q(&r13).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(screnoa_2q(&r13).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(scren_pure(&w, &[0]).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn ensemble_route_matches_root_route() {
        let mut rng = StateRng::seed_from_u64(11);
        for _ in 0..200 {
            let rho = random_mixed_2q(&mut rng);
            let a = wootters_mus(&rho).unwrap();
            let b = mus_via_root(&rho);
            for (x, y) in a.iter().zip(&b) {
                // the root route loses half the digits on near-zero μ
                assert!((x - y).abs() < 1e-6, "{a:?} vs {b:?}");
            }
            assert!(a.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn wootters_matches_pure_formula() {
        let mut rng = StateRng::seed_from_u64(12);
        for _ in 0..500 {
            let psi = haar_random_pure_with(&[2, 2], &mut rng).unwrap();
            let c_pure = concurrence_pure(&psi, &[0]).unwrap();
            let rho = to_density(&psi);
            assert_abs_diff_eq!(concurrence_2q(&rho).unwrap(), c_pure, epsilon = 1e-9);
            assert_abs_diff_eq!(
                concurrence_assistance_2q(&rho).unwrap(),
                c_pure,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn negativity_examples() {
        let product = to_density(&PureState::basis(vec![2, 2], &[1, 0]).unwrap());
        assert_abs_diff_eq!(negativity(&product, &[0]).unwrap(), 0.0, epsilon = 1e-14);
        let b = to_density(&bell());
        assert_abs_diff_eq!(negativity(&b, &[0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            negativity_with(&b, &[0], NegativityConvention::Halved).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(scren_pure(&bell(), &[0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(
            scren_pure(&PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap(), &[0]).unwrap(),
            0.0
        );
    }

    #[test]
    fn pure_negativity_closed_forms_agree() {
        let mut rng = StateRng::seed_from_u64(13);
        for dims in [[2, 2], [2, 3], [3, 3], [2, 4]] {
            for _ in 0..25 {
                let psi = haar_random_pure_with(&dims, &mut rng).unwrap();
                let via_trace_norm = negativity(&to_density(&psi), &[0]).unwrap();
                let via_root = negativity_pure(&psi, &[0]).unwrap();
                let spec =
                    linalg::hermitian_eigen(reduce_pure(&psi, &[0]).unwrap().matrix()).unwrap();
                let l: Vec<f64> = spec.eigenvalues.iter().map(|x| x.max(0.0)).collect();
                let mut pairs = 0.0;
                for i in 0..l.len() {
                    for j in i + 1..l.len() {
                        pairs += (l[i] * l[j]).sqrt();
                    }
                }
                assert_abs_diff_eq!(via_trace_norm, via_root, epsilon = 1e-8);
                assert_abs_diff_eq!(via_root, 2.0 * pairs, epsilon = 1e-10);
            }
        }
        let ex = states::schmidt3_example();
        let via_root = negativity_pure(&ex, &[0]).unwrap();
        assert_abs_diff_eq!(
            via_root,
            negativity(&to_density(&ex), &[0]).unwrap(),
            epsilon = 1e-10
        );
        // qubit A1: negativity coincides with concurrence
        assert_abs_diff_eq!(via_root, 21f64.sqrt() / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn measure_vector_examples() {
        let mv = measure_vector(&states::schmidt3_example(), MeasureKind::Concurrence).unwrap();
        assert_abs_diff_eq!(mv.one_vs_rest, 21f64.sqrt() / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mv.pairwise[0], 6f64.sqrt() / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mv.pairwise[1], 0.5, epsilon = 1e-12);

        let mv = measure_vector(&states::w_class_default(), MeasureKind::Screnoa).unwrap();
        assert_abs_diff_eq!(mv.one_vs_rest, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(mv.pairwise[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(mv.pairwise[1], 0.5, epsilon = 1e-12);

        let zero = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        for kind in MeasureKind::ALL {
            let mv = measure_vector(&zero, kind).unwrap();
            assert_eq!(mv.one_vs_rest, 0.0);
            assert_eq!(mv.pairwise, vec![0.0, 0.0]);
        }
        assert!(matches!(
            measure_vector(&bell(), MeasureKind::Concurrence),
            Err(MeasureError::Unsupported { .. })
        ));
        let qutrit = PureState::basis(vec![2, 3, 2], &[0, 0, 0]).unwrap();
        assert!(measure_vector(&qutrit, MeasureKind::Concurrence).is_err());
    }

    #[test]
    fn measure_vector_pairwise_matches_density_route() {
        let mut rng = StateRng::seed_from_u64(14);
        for n in 3..=5 {
            let psi = haar_random_pure_with(&vec![2; n], &mut rng).unwrap();
            let mv = measure_vector(&psi, MeasureKind::Concurrence).unwrap();
            let ca = measure_vector(&psi, MeasureKind::ConcurrenceAssistance).unwrap();
            assert_eq!(mv.pairwise.len(), n - 1);
            for i in 1..n {
                let rho = reduce_pure(&psi, &[0, i]).unwrap();
                assert_abs_diff_eq!(
                    mv.pairwise[i - 1],
                    concurrence_2q(&rho).unwrap(),
                    epsilon = 1e-10
                );
                assert_abs_diff_eq!(
                    ca.pairwise[i - 1],
                    concurrence_assistance_2q(&rho).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn schmidt3_closed_forms() {
        let mut rng = StateRng::seed_from_u64(15);
        for _ in 0..200 {
            let raw: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let l: Vec<f64> = raw.iter().map(|x| x / norm).collect();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let psi = states::schmidt3_state([l[0], l[1], l[2], l[3], l[4]], phi).unwrap();
            let mv = measure_vector(&psi, MeasureKind::Concurrence).unwrap();
            assert_abs_diff_eq!(mv.pairwise[0], 2.0 * l[0] * l[2], epsilon = 1e-9);
            assert_abs_diff_eq!(mv.pairwise[1], 2.0 * l[0] * l[3], epsilon = 1e-9);
            let expect = 2.0 * l[0] * (l[2] * l[2] + l[3] * l[3] + l[4] * l[4]).sqrt();
            assert_abs_diff_eq!(mv.one_vs_rest, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn ckw_base_relation() {
        let mut rng = StateRng::seed_from_u64(16);
        for _ in 0..1000 {
            let psi = haar_random_pure_with(&[2, 2, 2], &mut rng).unwrap();
            let mv = measure_vector(&psi, MeasureKind::Concurrence).unwrap();
            let lhs = mv.one_vs_rest.powi(2);
            let rhs: f64 = mv.pairwise.iter().map(|c| c * c).sum();
            assert!(lhs >= rhs - 1e-8, "{lhs} < {rhs}");
        }
    }

    #[test]
    fn screnoa_polygamy_base_relation() {
        let mut rng = StateRng::seed_from_u64(17);
        for _ in 0..1000 {
            let v: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let psi = states::w_class_state(v[0] / norm, v[1] / norm, v[2] / norm).unwrap();
            let mv = measure_vector(&psi, MeasureKind::Screnoa).unwrap();
            let rhs: f64 = mv.pairwise.iter().sum();
            assert!(mv.one_vs_rest <= rhs + 1e-8);
        }
    }

    #[test]
    fn symmetric_w_state_pairs_agree() {
        let s = 1.0 / 3f64.sqrt();
        let psi = states::w_class_state(s, s, s).unwrap();
        let mv = measure_vector(&psi, MeasureKind::Screnoa).unwrap();
        assert_abs_diff_eq!(mv.pairwise[0], mv.pairwise[1], epsilon = 1e-14);
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = StateRng::seed_from_u64(18);
        for trial in 0..500 {
            let psi = haar_random_pure_with(&[2, 2, 2], &mut rng).unwrap();
            let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
            let moved = psi.apply_local(&us).unwrap();
            let kind = MeasureKind::ALL[trial % 4];
            let a = measure_vector(&psi, kind).unwrap();
            let b = measure_vector(&moved, kind).unwrap();
            assert!((a.one_vs_rest - b.one_vs_rest).abs() < 1e-8);
            for (x, y) in a.pairwise.iter().zip(&b.pairwise) {
                assert!((x - y).abs() < 1e-8, "{kind}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn measure_kind_names_round_trip() {
        for kind in MeasureKind::ALL {
            assert_eq!(kind.name().parse::<MeasureKind>().unwrap(), kind);
        }
        assert!("entropy".parse::<MeasureKind>().is_err());
    }
}
