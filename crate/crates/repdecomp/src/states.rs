//! Generic adapted density states: random elements of the algebra spanned by
//! the representation matrices, symmetrized and shifted into density matrices.
//!
//! These states inherit the invariant-subspace structure of the representation
//! they are built from, which is what the decomposition pipeline exploits.

use crate::groups::{paper_t_table, AngleTriple, GroupError, GroupTable, HalfInt, TensorRep};
use crate::numerics::{
    cluster_eigenvalues, hermitian_eig, max_abs, CMatrix, NumericsError, TolerancePolicy,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

const RESAMPLE_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("seed exhausted after {0} resampling attempts")]
    SeedExhausted(usize),
    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (within `eq_tol`), unit trace (within 1e-10), and
    /// positive semi-definiteness (eigenvalues ≥ −1e-10).
    pub fn new(mat: CMatrix, pol: &TolerancePolicy) -> Result<Self, StateError> {
        if mat.nrows() != mat.ncols() {
            return Err(StateError::NotADensityMatrix(format!(
                "matrix is {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_dev = max_abs(&(&mat - mat.adjoint()));
        if herm_dev > pol.eq_tol * max_abs(&mat).max(1.0) {
            return Err(StateError::NotADensityMatrix(format!(
                "Hermiticity deviation {herm_dev:.3e}"
            )));
        }
        let tr: Complex64 = mat.diagonal().iter().sum();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(StateError::NotADensityMatrix(format!(
                "trace {tr} is not 1"
            )));
        }
        let (vals, _) = hermitian_eig(&mat, pol)?;
        if vals[0] < -1e-10 {
            return Err(StateError::NotADensityMatrix(format!(
                "minimum eigenvalue {:.3e}",
                vals[0]
            )));
        }
        Ok(Self { mat })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn eigenvalues(&self, pol: &TolerancePolicy) -> Result<Vec<f64>, StateError> {
        let (vals, _) = hermitian_eig(&self.mat, pol)?;
        Ok(vals.iter().copied().collect())
    }
}

/// SplitMix64 step: derives a decorrelated child seed from a master seed and a
/// stream index, so every state and retry attempt has its own reproducible
/// generator.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a coefficient vector from the complex annulus: magnitudes uniform in
/// [0.1, 1], phases uniform. Components below 1e-3 in magnitude trigger a full
/// redraw (bounded), keeping the vector safely away from zero.
fn draw_phi(rng: &mut ChaCha20Rng, len: usize) -> Result<Vec<Complex64>, StateError> {
    for _ in 0..RESAMPLE_LIMIT {
        let phi: Vec<Complex64> = (0..len)
            .map(|_| {
                let mag: f64 = rng.random_range(0.1..=1.0);
                let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(mag, phase)
            })
            .collect();
        if phi.iter().all(|z| z.norm() >= 1e-3) {
            return Ok(phi);
        }
    }
    Err(StateError::SeedExhausted(RESAMPLE_LIMIT))
}

fn draw_phi_real(rng: &mut ChaCha20Rng, len: usize) -> Result<Vec<f64>, StateError> {
    for _ in 0..RESAMPLE_LIMIT {
        let phi: Vec<f64> = (0..len).map(|_| rng.random_range(0.1..=1.0)).collect();
        if phi.iter().all(|v| v.abs() >= 1e-3) {
            return Ok(phi);
        }
    }
    Err(StateError::SeedExhausted(RESAMPLE_LIMIT))
}

/// Symmetrize, shift by the spectral radius, and normalize:
/// ρ̃′ = ρ̃ + ρ̃†, ρ̃″ = ρ̃′ + s·I, ρ = ρ̃″ / Tr(ρ̃″).
///
/// Returns `None` when the shifted matrix has (numerically) zero trace, which
/// callers treat as a resampling event.
fn symmetrize_shift_normalize(
    rho_tilde: &CMatrix,
    pol: &TolerancePolicy,
) -> Result<Option<DensityMatrix>, StateError> {
    let n = rho_tilde.nrows();
    let sym = rho_tilde + rho_tilde.adjoint();
    let (vals, _) = hermitian_eig(&sym, pol)?;
    let s = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let shifted = &sym + CMatrix::identity(n, n).map(|z| z * s);
    let tr: Complex64 = shifted.diagonal().iter().sum();
    if tr.re <= 1e-9 * (n as f64 * s).max(1.0) {
        return Ok(None);
    }
    let rho = shifted.map(|z| z / tr.re);
    Ok(Some(DensityMatrix::new(rho, pol)?))
}

/// Adapted state of the regular representation of a finite group: the entry
/// pattern `[ρ̃]_{ij} = φ(T(i,j))` realizes `Σ_k φ(k) U(g_k)` without forming
/// the sum.
pub fn adapted_state_finite(
    group: &GroupTable,
    seed: u64,
    pol: &TolerancePolicy,
) -> Result<DensityMatrix, StateError> {
    let n = group.order();
    let t = paper_t_table(group);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..RESAMPLE_LIMIT {
        let phi = draw_phi(&mut rng, n)?;
        let rho_tilde = CMatrix::from_fn(n, n, |i, j| phi[t[i][j]]);
        if let Some(dm) = symmetrize_shift_normalize(&rho_tilde, pol)? {
            return Ok(dm);
        }
    }
    Err(StateError::SeedExhausted(RESAMPLE_LIMIT))
}

fn sample_angles(rng: &mut ChaCha20Rng, n_angles: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut axis = |_: usize| -> Vec<f64> {
        (0..n_angles)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect()
    };
    let xs = axis(0);
    let ys = axis(1);
    let zs = axis(2);
    (xs, ys, zs)
}

fn su2_algebra_sum(
    rep: &TensorRep,
    xs: &[f64],
    ys: &[f64],
    zs: &[f64],
    phi: &[Complex64],
) -> CMatrix {
    let d = rep.dim();
    let mut rho_tilde = CMatrix::zeros(d, d);
    let mut idx = 0;
    for &x in xs {
        for &y in ys {
            for &z in zs {
                let u = rep.element(AngleTriple::new(x, y, z));
                rho_tilde += u.map(|v| v * phi[idx]);
                idx += 1;
            }
        }
    }
    rho_tilde
}

/// Adapted state of a tensor product of spin representations, built from a
/// grid of `n_angles³` random rotations (one angle list per axis) with random
/// coefficients, then symmetrized, shifted, and normalized.
pub fn adapted_state_su2(
    factors: &[HalfInt],
    n_angles: usize,
    seed: u64,
    pol: &TolerancePolicy,
) -> Result<DensityMatrix, StateError> {
    let rep = TensorRep::new(factors)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (xs, ys, zs) = sample_angles(&mut rng, n_angles);
    for _ in 0..RESAMPLE_LIMIT {
        let phi = draw_phi(&mut rng, n_angles * n_angles * n_angles)?;
        let rho_tilde = su2_algebra_sum(&rep, &xs, &ys, &zs, &phi);
        if let Some(dm) = symmetrize_shift_normalize(&rho_tilde, pol)? {
            return Ok(dm);
        }
    }
    Err(StateError::SeedExhausted(RESAMPLE_LIMIT))
}

/// Real-valued state from a pre-symmetrization algebra sum:
/// τ = ρ̃ + conj(ρ̃), ρ = ττᵗ / Tr(ττᵗ). The result is exactly real,
/// symmetric, and PSD by construction, and stays inside the algebra because
/// entrywise conjugation and transposition map rotation matrices to rotation
/// matrices (with negated y-angle and negated x,z-angles respectively).
pub fn realify(rho_tilde: &CMatrix, pol: &TolerancePolicy) -> Result<DensityMatrix, StateError> {
    let tau: DMatrix<f64> = rho_tilde.map(|z| 2.0 * z.re);
    let m = &tau * tau.transpose();
    let tr = m.trace();
    if tr <= 1e-12 {
        return Err(StateError::NotADensityMatrix(
            "algebra sum has vanishing real part".into(),
        ));
    }
    let rho = m.map(|v| Complex64::new(v / tr, 0.0));
    DensityMatrix::new(rho, pol)
}

/// Real adapted state for a spin tensor product. The angle grid comes from
/// `angle_seed` (shared between the two states of a pair) and the real
/// coefficients from `phi_seed`.
pub fn adapted_state_su2_real(
    factors: &[HalfInt],
    n_angles: usize,
    angle_seed: u64,
    phi_seed: u64,
    pol: &TolerancePolicy,
) -> Result<DensityMatrix, StateError> {
    let rep = TensorRep::new(factors)?;
    let mut angle_rng = ChaCha20Rng::seed_from_u64(angle_seed);
    let (xs, ys, zs) = sample_angles(&mut angle_rng, n_angles);
    let mut phi_rng = ChaCha20Rng::seed_from_u64(phi_seed);
    for _ in 0..RESAMPLE_LIMIT {
        let phi_real = draw_phi_real(&mut phi_rng, n_angles * n_angles * n_angles)?;
        let phi: Vec<Complex64> = phi_real.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let rho_tilde = su2_algebra_sum(&rep, &xs, &ys, &zs, &phi);
        match realify(&rho_tilde, pol) {
            Ok(dm) => return Ok(dm),
            Err(StateError::NotADensityMatrix(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(StateError::SeedExhausted(RESAMPLE_LIMIT))
}

/// Eigenvalue-cluster diagnostics for a candidate adapted state.
#[derive(Debug, Clone)]
pub struct GenericityDiagnostics {
    pub eigenvalues: Vec<f64>,
    pub cluster_sizes: Vec<usize>,
    pub generic: bool,
    pub detail: String,
}

/// Clusters the eigenvalues of `rho` at `eig_group_tol` resolution. With an
/// expected structure `[(c_α, n_α)]` the cluster-size multiset must be exactly
/// {c_α with multiplicity n_α}; without one, only the degenerate single-cluster
/// case is rejected (each size is some candidate copy count a priori).
pub fn check_genericity(
    rho: &DensityMatrix,
    expected_structure: Option<&[(usize, usize)]>,
    pol: &TolerancePolicy,
) -> GenericityDiagnostics {
    let (vals, _) = match hermitian_eig(rho.mat(), pol) {
        Ok(v) => v,
        Err(e) => {
            return GenericityDiagnostics {
                eigenvalues: vec![],
                cluster_sizes: vec![],
                generic: false,
                detail: format!("eigendecomposition failed: {e}"),
            }
        }
    };
    let vals: Vec<f64> = vals.iter().copied().collect();
    let clusters = cluster_eigenvalues(&vals, pol.eig_group_tol);
    let sizes: Vec<usize> = clusters.iter().map(|r| r.len()).collect();
    let (generic, detail) = match expected_structure {
        Some(structure) => {
            let mut expected: Vec<usize> = structure
                .iter()
                .flat_map(|&(c, n)| std::iter::repeat(c).take(n))
                .collect();
            expected.sort_unstable();
            let mut got = sizes.clone();
            got.sort_unstable();
            if got == expected {
                (true, "cluster sizes match expected structure".to_string())
            } else {
                (
                    false,
                    format!("cluster sizes {got:?} differ from expected {expected:?}"),
                )
            }
        }
        None => {
            if sizes.len() == 1 && rho.dim() > 1 {
                (
                    false,
                    "all eigenvalues fall in one cluster (maximally degenerate)".to_string(),
                )
            } else {
                (true, format!("cluster sizes {sizes:?}"), )
            }
        }
    };
    GenericityDiagnostics {
        eigenvalues: vals,
        cluster_sizes: sizes,
        generic,
        detail,
    }
}

/// Two independent adapted states with their seeds and a genericity verdict.
#[derive(Debug, Clone)]
pub struct AdaptedStatePair {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
    pub seed1: u64,
    pub seed2: u64,
    pub genericity_certificate: bool,
    pub diagnostics: String,
}

impl AdaptedStatePair {
    /// Frobenius distance between the two states.
    pub fn separation(&self) -> f64 {
        (self.rho1.mat() - self.rho2.mat()).norm()
    }

    fn certify(
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        seed1: u64,
        seed2: u64,
        pol: &TolerancePolicy,
    ) -> Self {
        let diag1 = check_genericity(&rho1, None, pol);
        let diag2 = check_genericity(&rho2, None, pol);
        let separation = (rho1.mat() - rho2.mat()).norm();
        let separated = separation > 1e-4;
        let same_clusters = diag1.cluster_sizes == diag2.cluster_sizes;
        let certificate = diag1.generic && diag2.generic && separated && same_clusters;
        let diagnostics = format!(
            "state 1: {}; state 2: {}; separation {separation:.3e}{}",
            diag1.detail,
            diag2.detail,
            if separated { "" } else { " (too close, reseed)" }
        );
        Self {
            rho1,
            rho2,
            seed1,
            seed2,
            genericity_certificate: certificate,
            diagnostics,
        }
    }
}

/// Adapted pair for a finite group's regular representation; the two seeds are
/// derived from `master` on separate streams.
pub fn finite_pair(
    group: &GroupTable,
    master: u64,
    pol: &TolerancePolicy,
) -> Result<AdaptedStatePair, StateError> {
    let seed1 = derive_seed(master, 1);
    let seed2 = derive_seed(master, 2);
    let rho1 = adapted_state_finite(group, seed1, pol)?;
    let rho2 = adapted_state_finite(group, seed2, pol)?;
    Ok(AdaptedStatePair::certify(rho1, rho2, seed1, seed2, pol))
}

/// Adapted pair for a spin tensor product (complex coefficients).
pub fn su2_pair(
    factors: &[HalfInt],
    n_angles: usize,
    master: u64,
    pol: &TolerancePolicy,
) -> Result<AdaptedStatePair, StateError> {
    let seed1 = derive_seed(master, 1);
    let seed2 = derive_seed(master, 2);
    let rho1 = adapted_state_su2(factors, n_angles, seed1, pol)?;
    let rho2 = adapted_state_su2(factors, n_angles, seed2, pol)?;
    Ok(AdaptedStatePair::certify(rho1, rho2, seed1, seed2, pol))
}

/// Real adapted pair for a spin tensor product: one shared angle grid, two
/// coefficient seeds.
pub fn su2_real_pair(
    factors: &[HalfInt],
    n_angles: usize,
    master: u64,
    pol: &TolerancePolicy,
) -> Result<AdaptedStatePair, StateError> {
    let angle_seed = derive_seed(master, 0);
    let seed1 = derive_seed(master, 1);
    let seed2 = derive_seed(master, 2);
    let rho1 = adapted_state_su2_real(factors, n_angles, angle_seed, seed1, pol)?;
    let rho2 = adapted_state_su2_real(factors, n_angles, angle_seed, seed2, pol)?;
    Ok(AdaptedStatePair::certify(rho1, rho2, seed1, seed2, pol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::regular_representation;
    use crate::numerics::fro_norm;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn trivial_group_state_is_one() {
        let g = GroupTable::cyclic(1).unwrap();
        for seed in 0..8 {
            let rho = adapted_state_finite(&g, seed, &pol()).unwrap();
            assert!((rho.mat()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn z2_state_is_real_circulant() {
        let g = GroupTable::cyclic(2).unwrap();
        let rho = adapted_state_finite(&g, 7, &pol()).unwrap();
        let m = rho.mat();
        assert!(m[(0, 0)].im.abs() < 1e-14 && m[(0, 1)].im.abs() < 1e-14);
        assert!((m[(0, 0)] - m[(1, 1)]).norm() < 1e-12);
        assert!((m[(0, 1)] - m[(1, 0)]).norm() < 1e-12);
    }

    #[test]
    fn s3_state_properties_and_clusters() {
        let g = GroupTable::s3();
        let rho = adapted_state_finite(&g, 42, &pol()).unwrap();
        assert_eq!(rho.dim(), 6);
        let diag = check_genericity(&rho, Some(&[(1, 1), (1, 1), (2, 2)]), &pol());
        assert!(diag.generic, "{}", diag.detail);
    }

    #[test]
    fn abelian_state_commutes_with_representation() {
        let g = GroupTable::cyclic(5).unwrap();
        let rep = regular_representation(&g);
        let rho = adapted_state_finite(&g, 3, &pol()).unwrap();
        for u in &rep.matrices {
            let comm = rho.mat() * u - u * rho.mat();
            assert!(fro_norm(&comm) < 1e-8);
        }
    }

    #[test]
    fn distinct_seeds_give_distinct_states() {
        let g = GroupTable::s3();
        let pair = finite_pair(&g, 0, &pol()).unwrap();
        assert!(pair.separation() > 1e-4, "{}", pair.diagnostics);
        assert_ne!(pair.seed1, pair.seed2);
    }

    #[test]
    fn same_seed_reproduces_exactly() {
        let g = GroupTable::a4();
        let a = adapted_state_finite(&g, 11, &pol()).unwrap();
        let b = adapted_state_finite(&g, 11, &pol()).unwrap();
        assert_eq!(fro_norm(&(a.mat() - b.mat())), 0.0);
    }

    #[test]
    fn su2_state_dimensions() {
        let half = HalfInt::from_twice(1);
        let rho = adapted_state_su2(&[half, half], 3, 5, &pol()).unwrap();
        assert_eq!(rho.dim(), 4);
        let rho2 = adapted_state_su2(
            &[HalfInt::from_twice(3), HalfInt::from_int(1)],
            3,
            5,
            &pol(),
        )
        .unwrap();
        assert_eq!(rho2.dim(), 12);
    }

    #[test]
    fn realify_output_is_exactly_real() {
        let rho_tilde = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(0.3 + i as f64 * 0.1, 0.2 - j as f64 * 0.05)
        });
        let rho = realify(&rho_tilde, &pol()).unwrap();
        for v in rho.mat().iter() {
            assert_eq!(v.im, 0.0);
        }
        let tr: Complex64 = rho.mat().diagonal().iter().sum();
        assert!((tr.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su2_real_pair_states_are_real_and_share_structure() {
        let half = HalfInt::from_twice(1);
        let pair = su2_real_pair(&[half, half], 3, 9, &pol()).unwrap();
        for v in pair.rho1.mat().iter().chain(pair.rho2.mat().iter()) {
            assert_eq!(v.im, 0.0);
        }
        assert!(pair.separation() > 1e-4);
    }

    #[test]
    fn maximally_mixed_is_not_generic() {
        let d = 4;
        let mixed = DensityMatrix::new(
            CMatrix::identity(d, d).map(|z| z / d as f64),
            &pol(),
        )
        .unwrap();
        let diag = check_genericity(&mixed, None, &pol());
        assert!(!diag.generic);
        assert_eq!(diag.cluster_sizes, vec![d]);
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        let p = pol();
        // Not trace 1.
        assert!(DensityMatrix::new(CMatrix::identity(2, 2), &p).is_err());
        // Not PSD.
        let m = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 1.5 } else { -0.5 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(DensityMatrix::new(m, &p).is_err());
        // Not Hermitian.
        let m = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(0.5, 0.0)
            } else if i < j {
                Complex64::new(0.3, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(DensityMatrix::new(m, &p).is_err());
    }

    #[test]
    fn derive_seed_decorrelates_streams() {
        let a = derive_seed(0, 0);
        let b = derive_seed(0, 1);
        let c = derive_seed(1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }
}
