//! Random symplectic matrices, states and Kossakowski matrices for tests
//! and property scans.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{expm, hermitize, CMat, RMat, RVec};
use crate::symplectic::{omega, GaussianState, SymplecticMatrix};

/// Symmetric matrix with independent entries uniform in `[-1, 1]`.
pub fn random_symmetric<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RMat {
    let mut m = RMat::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x = rng.random_range(-1.0..=1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// `exp(Ω H)` with `H` from [`random_symmetric`].
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticMatrix {
    let h = random_symmetric(2 * n, rng);
    let s = expm(&(omega(n) * h));
    SymplecticMatrix::with_tolerance(s, f64::INFINITY).expect("exp(ΩH) is symplectic")
}

/// Random local symplectic `S1 ⊕ S2 ⊕ ...`, one factor per mode.
pub fn random_local_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticMatrix {
    let mut s = random_symplectic(1, rng);
    for _ in 1..n {
        s = s.direct_sum(&random_symplectic(1, rng));
    }
    s
}

/// Complex Hermitian matrix with entries uniform in the unit square.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let m = CMat::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    });
    hermitize(&m)
}

/// Random positive semidefinite matrix `B B†`, optionally rank deficient.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMat {
    let b = CMat::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    });
    hermitize(&(&b * b.adjoint()))
}

/// Random real positive semidefinite matrix `B Bᵀ`.
pub fn random_real_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> RMat {
    let b = RMat::from_fn(dim, rank, |_, _| rng.random_range(-1.0..=1.0));
    let m = &b * b.transpose();
    (&m + m.transpose()) * 0.5
}

/// Hermitian matrix whose smallest eigenvalue is exactly `lambda_min`
/// (other eigenvalues uniform in `[lambda_min, 1]`), in a random unitary basis.
pub fn random_hermitian_with_min<R: Rng + ?Sized>(dim: usize, lambda_min: f64, rng: &mut R) -> CMat {
    let q = random_hermitian(dim, rng).qr().q();
    let mut d = vec![lambda_min];
    for _ in 1..dim {
        d.push(rng.random_range(lambda_min..=1.0_f64.max(lambda_min)));
    }
    let dm = CMat::from_diagonal(&nalgebra::DVector::from_vec(
        d.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    ));
    hermitize(&(&q * dm * q.adjoint()))
}

/// Random physical state: Williamson form with symplectic eigenvalues in
/// `[1/2, 1/2 + spread]`, random symplectic frame and a random mean.
pub fn random_physical_state<R: Rng + ?Sized>(n: usize, spread: f64, rng: &mut R) -> GaussianState {
    let nus: Vec<f64> = (0..n).map(|_| 0.5 + spread * rng.random::<f64>()).collect();
    let s = random_symplectic(n, rng);
    let cov = crate::symplectic::williamson_compose(&nus, &s).expect("sizes agree");
    let mean = RVec::from_fn(2 * n, |_, _| rng.random_range(-1.0..=1.0));
    GaussianState::new(mean, cov).expect("finite by construction")
}

/// Two-mode squeezed vacuum with squeezing `r`.
pub fn two_mode_squeezed(r: f64) -> GaussianState {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    #[rustfmt::skip]
    let cov = RMat::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    GaussianState::from_cov(cov).expect("valid covariance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_hermitian_eigenvalue;
    use crate::symplectic::is_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_matrices_have_requested_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..4 {
            let s = random_symplectic(n, &mut rng);
            let scale = crate::linalg::max_abs(s.matrix());
            assert!(is_symplectic(s.matrix(), 1e-10 * (1.0 + scale * scale)).unwrap());
        }
        let p = random_psd(4, 2, &mut rng);
        assert!(min_hermitian_eigenvalue(&p) > -1e-12);
        let m = random_hermitian_with_min(3, -0.3, &mut rng);
        assert!((min_hermitian_eigenvalue(&m) + 0.3).abs() < 1e-12);
    }

    #[test]
    fn tmsv_is_pure() {
        let v = two_mode_squeezed(0.7);
        let nus = crate::symplectic::symplectic_eigenvalues(v.cov()).unwrap();
        for nu in nus {
            assert!((nu - 0.5).abs() < 1e-12);
        }
    }
}
