use cv_gksl::prelude::*;
use cv_gksl::sampling::random_symplectic;
use cv_gksl::symplectic::williamson_compose;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let omega = build_omega(2)?;
    println!("Omega =\n{}", omega.matrix());

    let s = random_symplectic(2, &mut rng);
    println!("S is symplectic: {}", is_symplectic(s.matrix(), 1e-10)?);

    // squeezed vacuum V = S (I/2) Sᵀ stays pure
    let squeezed = symplectic_conjugate_state(&GaussianState::vacuum(2), &s.inverse())?;
    println!("pure state obeys uncertainty: {}", uncertainty_ok(&squeezed, Tolerance::default())?);
    println!("symplectic eigenvalues: {:?}", symplectic_eigenvalues(squeezed.cov())?);

    // thermal spectrum in the same frame
    let mixed = williamson_compose(&[0.5, 2.0], &s)?;
    println!("mixed spectrum: {:?}", symplectic_eigenvalues(&mixed)?);

    // shrinking the vacuum breaks the uncertainty principle
    let bad = GaussianState::from_cov(RMat::identity(4, 4) * 0.4)?;
    println!("V = 0.4 I obeys uncertainty: {}", uncertainty_ok(&bad, Tolerance::default())?);
    Ok(())
}
