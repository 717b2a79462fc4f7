use cv_gksl::prelude::*;
use cv_gksl::sampling::{random_physical_state, random_psd, random_symmetric};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gen = GaussianGenerator::new(random_symmetric(4, &mut rng), random_psd(4, 2, &mut rng))?;
    let v0 = random_physical_state(2, 0.5, &mut rng);
    let times = vec![0.25, 0.5, 1.0, 2.0];

    let exact = evolve(&gen, &v0, &PropagationPlan::new(Method::ExactExponential, times.clone())?)?;
    let rk_plan = PropagationPlan::new(Method::AdaptiveRk, times.clone())?
        .with_tolerances(RkTolerances { abs: 1e-12, rel: 1e-12 });
    let rk = evolve(&gen, &v0, &rk_plan)?;
    let local = evolve(&gen, &v0, &PropagationPlan::new(Method::LocalFrameRk, times.clone())?)?;

    for (i, t) in times.iter().enumerate() {
        let scale = exact[i].cov().amax();
        println!(
            "t = {t:.2}: |V_rk - V_exact| = {:.2e}, |V_local - V_exact| = {:.2e}, E_N = {:.6}",
            (rk[i].cov() - exact[i].cov()).amax() / scale,
            (local[i].cov() - exact[i].cov()).amax() / scale,
            log_negativity(&exact[i])?
        );
    }

    // free particle: momentum noise makes position spread grow as t³
    let free = GaussianGenerator::real(
        RMat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        RMat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 0.1]),
    )?;
    for t in [1.0, 10.0, 100.0] {
        let st = evolve_exact(&free, &GaussianState::vacuum(1), t)?;
        println!("free particle t = {t}: <x^2> = {:.4e}", st.cov()[(0, 0)]);
    }
    Ok(())
}
