//! Symplectic form, Gaussian states and the uncertainty principle.
//!
//! Quadratures are always ordered `(x1, p1, x2, p2, ..., xN, pN)` and are
//! dimensionless with `[x, p] = i`, so the vacuum covariance is `I/2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, is_symmetric, max_abs, min_hermitian_eigenvalue, symmetrize,
    to_complex, RMat, RVec, Tolerance,
};

/// Ω = I_N ⊗ [[0, 1], [-1, 0]].
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm {
    matrix: RMat,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.nrows() / 2
    }
}

pub fn build_omega(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidDimension("mode count must be at least 1".into()));
    }
    Ok(SymplecticForm { matrix: omega(n) })
}

/// Raw Ω for `n` modes; `n = 0` gives an empty matrix.
pub(crate) fn omega(n: usize) -> RMat {
    let mut m = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

pub(crate) fn modes_of(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "expected a positive even dimension, got {dim}"
        )));
    }
    Ok(dim / 2)
}

/// `true` iff `‖S Ω Sᵀ − Ω‖_max ≤ tol`.
pub fn is_symplectic(s: &RMat, tol: f64) -> Result<bool> {
    if !s.is_square() {
        return Err(Error::InvalidDimension(format!(
            "symplectic test needs a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let n = modes_of(s.nrows())?;
    let om = omega(n);
    Ok(max_abs(&(s * &om * s.transpose() - &om)) <= tol)
}

/// A real matrix preserving Ω.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    matrix: RMat,
}

impl SymplecticMatrix {
    /// Accepts `s` if it is symplectic to within `1e-10 (1 + ‖S‖²_max)`.
    pub fn new(s: RMat) -> Result<Self> {
        let scale = max_abs(&s);
        let tol = Tolerance::default().resolve(scale * scale);
        Self::with_tolerance(s, tol)
    }

    pub fn with_tolerance(s: RMat, tol: f64) -> Result<Self> {
        if !is_symplectic(&s, tol)? {
            return Err(Error::InvalidInput("matrix is not symplectic".into()));
        }
        Ok(Self { matrix: s })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: RMat::identity(2 * n, 2 * n) }
    }

    /// The shear `x → x + a p` on a single mode.
    pub fn shear(a: f64) -> Self {
        Self { matrix: RMat::from_row_slice(2, 2, &[1.0, a, 0.0, 1.0]) }
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `S⁻¹ = Ω Sᵀ Ωᵀ`, exact for symplectic `S`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = omega(self.mode_count());
        SymplecticMatrix { matrix: &om * self.matrix.transpose() * om.transpose() }
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        let a = self.matrix.nrows();
        let b = other.matrix.nrows();
        let mut m = RMat::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        m.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        SymplecticMatrix { matrix: m }
    }
}

/// First and second moments of an N-mode Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: RVec,
    cov: RMat,
}

impl GaussianState {
    /// Builds a state; the covariance is symmetrized.
    pub fn new(mean: RVec, cov: RMat) -> Result<Self> {
        if !cov.is_square() {
            return Err(Error::InvalidDimension("covariance must be square".into()));
        }
        modes_of(cov.nrows())?;
        if mean.len() != cov.nrows() {
            return Err(Error::InvalidDimension(format!(
                "mean has length {} but covariance is {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("state contains non-finite entries".into()));
        }
        Ok(Self { mean, cov: symmetrize(&cov) })
    }

    pub fn from_cov(cov: RMat) -> Result<Self> {
        let n = cov.nrows();
        Self::new(RVec::zeros(n), cov)
    }

    pub fn vacuum(n: usize) -> Self {
        Self { mean: RVec::zeros(2 * n), cov: RMat::identity(2 * n, 2 * n) * 0.5 }
    }

    /// Product of thermal states with the given occupations.
    pub fn thermal(occupations: &[f64]) -> Self {
        let diag: Vec<f64> = occupations.iter().flat_map(|&n| [n + 0.5, n + 0.5]).collect();
        let d = RVec::from_vec(diag);
        Self { mean: RVec::zeros(d.len()), cov: RMat::from_diagonal(&d) }
    }

    pub fn mean(&self) -> &RVec {
        &self.mean
    }

    pub fn cov(&self) -> &RMat {
        &self.cov
    }

    pub fn mode_count(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn into_parts(self) -> (RVec, RMat) {
        (self.mean, self.cov)
    }

    /// Congruence `M V Mᵀ`, `M mean` by an arbitrary real matrix.
    pub(crate) fn transformed(&self, m: &RMat) -> GaussianState {
        GaussianState {
            mean: m * &self.mean,
            cov: symmetrize(&(m * &self.cov * m.transpose())),
        }
    }
}

/// Smallest eigenvalue of the Hermitian matrix `V + (i/2) Ω`.
pub fn uncertainty_margin(cov: &RMat) -> Result<f64> {
    let n = modes_of(cov.nrows())?;
    let m = to_complex(cov) + to_complex(&omega(n)) * Complex64::new(0.0, 0.5);
    Ok(min_hermitian_eigenvalue(&m))
}

/// `V + (i/2) Ω ⪰ 0` within `tol` (scaled by the covariance magnitude).
pub fn uncertainty_ok(state: &GaussianState, tol: impl Into<Tolerance>) -> Result<bool> {
    uncertainty_ok_cov(state.cov(), tol)
}

/// Covariance-level form of [`uncertainty_ok`]; rejects non-symmetric input.
pub fn uncertainty_ok_cov(cov: &RMat, tol: impl Into<Tolerance>) -> Result<bool> {
    let scale = max_abs(cov);
    if !is_symmetric(cov, 1e-12 * (1.0 + scale)) {
        return Err(Error::InvalidInput("covariance matrix is not symmetric".into()));
    }
    let tol = tol.into().resolve(scale);
    Ok(uncertainty_margin(cov)? >= -tol)
}

/// Transforms a state by `S⁻¹`: `mean → S⁻¹ mean`, `V → S⁻¹ V S⁻ᵀ`.
pub fn symplectic_conjugate_state(
    state: &GaussianState,
    s: &SymplecticMatrix,
) -> Result<GaussianState> {
    if s.matrix().nrows() != state.cov().nrows() {
        return Err(Error::InvalidDimension(format!(
            "symplectic matrix is {}x{} but the state has {} modes",
            s.matrix().nrows(),
            s.matrix().ncols(),
            state.mode_count()
        )));
    }
    Ok(state.transformed(s.inverse().matrix()))
}

/// Symplectic spectrum of a positive-definite covariance, ascending.
///
/// Computed as the positive eigenvalues of the Hermitian matrix
/// `V^{1/2} (iΩ) V^{1/2}`, which are the moduli of the eigenvalues of `iΩV`.
pub fn symplectic_eigenvalues(cov: &RMat) -> Result<Vec<f64>> {
    let scale = max_abs(cov);
    if !is_symmetric(cov, 1e-12 * (1.0 + scale)) {
        return Err(Error::InvalidInput("covariance matrix is not symmetric".into()));
    }
    let n = modes_of(cov.nrows())?;
    let eig = nalgebra::SymmetricEigen::new(symmetrize(cov));
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidInput("covariance matrix is not positive definite".into()));
    }
    let sqrt_diag = RMat::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let root_c = to_complex(&root);
    let i_omega = to_complex(&omega(n)) * Complex64::new(0.0, 1.0);
    let h = &root_c * i_omega * &root_c;
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = hermitian_eigenvalues(&h).iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let mut out: Vec<f64> = ev.into_iter().take(n).collect();
    out.reverse();
    Ok(out)
}

/// Williamson-form covariance `S diag(ν1, ν1, ..., νN, νN) Sᵀ`.
pub fn williamson_compose(nus: &[f64], s: &SymplecticMatrix) -> Result<RMat> {
    if 2 * nus.len() != s.matrix().nrows() {
        return Err(Error::InvalidDimension("spectrum and symplectic matrix sizes differ".into()));
    }
    let d: Vec<f64> = nus.iter().flat_map(|&v| [v, v]).collect();
    let d = DMatrix::from_diagonal(&RVec::from_vec(d));
    Ok(symmetrize(&(s.matrix() * d * s.matrix().transpose())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn omega_single_and_two_mode() {
        let o1 = build_omega(1).unwrap();
        assert_eq!(o1.matrix(), &RMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let o2 = build_omega(2).unwrap();
        let m = o2.matrix();
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m[(2, 3)], 1.0);
        assert_eq!(m[(3, 2)], -1.0);
        assert_eq!(m[(0, 3)], 0.0);
        assert_eq!(m[(1, 2)], 0.0);
    }

    #[test]
    fn omega_squares_to_minus_identity() {
        for n in 1..5 {
            let o = build_omega(n).unwrap();
            let sq = o.matrix() * o.matrix();
            assert_eq!(sq, -RMat::identity(2 * n, 2 * n));
            assert_eq!(o.matrix().transpose(), -o.matrix());
        }
    }

    #[test]
    fn omega_rejects_zero_modes() {
        assert!(matches!(build_omega(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn symplectic_membership() {
        assert!(is_symplectic(&RMat::identity(4, 4), 1e-12).unwrap());
        for a in [-3.0, 0.0, 0.4, 17.0] {
            assert!(is_symplectic(SymplecticMatrix::shear(a).matrix(), 1e-12).unwrap());
        }
        assert!(!is_symplectic(&(RMat::identity(2, 2) * 2.0), 1e-12).unwrap());
        assert!(matches!(
            is_symplectic(&RMat::identity(3, 3), 1e-12),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn uncertainty_examples() {
        for n in 1..4 {
            assert!(uncertainty_ok(&GaussianState::vacuum(n), Tolerance::default()).unwrap());
        }
        let squeezed_below = GaussianState::from_cov(RMat::identity(2, 2) * 0.4).unwrap();
        assert!(!uncertainty_ok(&squeezed_below, Tolerance::default()).unwrap());

        let asym = RMat::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0]);
        assert!(matches!(
            uncertainty_ok_cov(&asym, Tolerance::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn conjugation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vac = GaussianState::vacuum(2);
        let same = symplectic_conjugate_state(&vac, &SymplecticMatrix::identity(2)).unwrap();
        assert_eq!(same, vac);

        let s = random_symplectic(2, &mut rng);
        let moved = symplectic_conjugate_state(&vac, &s).unwrap();
        assert!(uncertainty_ok(&moved, Tolerance::default()).unwrap());

        // reflection (x2, p2) -> (-x2, -p2) is orthogonal symplectic
        let refl = SymplecticMatrix::new(RMat::from_diagonal(&RVec::from_vec(vec![
            1.0, 1.0, -1.0, -1.0,
        ])))
        .unwrap();
        let r = symplectic_conjugate_state(&vac, &refl).unwrap();
        assert_eq!(r.cov(), vac.cov());

        assert!(matches!(
            SymplecticMatrix::new(RMat::identity(2, 2) * 2.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(symplectic_conjugate_state(&vac, &SymplecticMatrix::identity(1)).is_err());
    }

    #[test]
    fn symplectic_spectrum_examples() {
        let ev = symplectic_eigenvalues(&(RMat::identity(6, 6) * 0.5)).unwrap();
        assert_eq!(ev.len(), 3);
        for v in ev {
            assert!((v - 0.5).abs() < 1e-14);
        }
        let ev = symplectic_eigenvalues(&(RMat::identity(2, 2) * 2.5)).unwrap();
        assert!((ev[0] - 2.5).abs() < 1e-14);

        // Williamson round trip
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_symplectic(2, &mut rng);
        let v = williamson_compose(&[0.7, 2.3], &s).unwrap();
        let ev = symplectic_eigenvalues(&v).unwrap();
        assert!((ev[0] - 0.7).abs() < 1e-10 * 0.7, "{ev:?}");
        assert!((ev[1] - 2.3).abs() < 1e-10 * 2.3, "{ev:?}");

        let indefinite = RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(symplectic_eigenvalues(&indefinite), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inverse_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_symplectic(3, &mut rng);
        let prod = s.matrix() * s.inverse().matrix();
        assert!(max_abs(&(prod - RMat::identity(6, 6))) < 1e-12);
    }
}
