use cv_gksl::entanglement::log_negativity_cov;
use cv_gksl::prelude::*;
use cv_gksl::sampling::two_mode_squeezed;

fn main() -> Result<()> {
    for r in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let st = two_mode_squeezed(r);
        let e = log_negativity(&st)?;
        let o = log_negativity_oracle(st.cov())?;
        println!(
            "r = {r:.1}: E_N = {e:.12}  oracle {o:.12}  2r log2(e) = {:.12}  PPT: {}",
            2.0 * r * std::f64::consts::LOG2_E,
            ppt_separable(&st, Tolerance::default())?
        );
    }

    // thermal noise on top of squeezing
    let cov = two_mode_squeezed(0.5).cov().clone();
    for noise in [0.0, 0.2, 0.5, 1.0] {
        let v = &cov + RMat::identity(4, 4) * noise;
        println!("added noise {noise:.1}: E_N = {:.6}", log_negativity_cov(&v)?);
    }
    Ok(())
}
