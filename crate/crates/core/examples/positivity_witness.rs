//! Position-noise generators `κ_N ⊗ τ` with an indefinite `κ_N` are not
//! completely positive, and the witness shows the state turning unphysical.

use cv_gksl::linalg::kron;
use cv_gksl::prelude::*;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn main() -> Result<()> {
    let kappa_n = CMat::from_row_slice(2, 2, &[c(0.3), c(0.5), c(0.5), c(0.3)]);
    let tau = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    let gen = GaussianGenerator::new(RMat::zeros(4, 4), kron(&kappa_n, &tau))?;
    println!("completely positive: {}", is_completely_positive(&gen, Tolerance::default()));

    let spec = in_diffusive_class(&gen, None, Tolerance::default())?.expect("position noise only");
    let w = violation_witness(&spec).expect("kappa_N is indefinite");
    println!("witness value u'V'u = {:.6}", w.value);
    println!("witness vector u = {:?}", w.u.as_slice());

    let rep = positivity_equals_cp_check(&gen, &spec, 1e-2, Tolerance::default())?;
    println!(
        "after eps = {:.3e}: u'(V + i Omega/2)u = {:.3e}, min eigenvalue {:.3e}, violated: {}",
        rep.epsilon,
        rep.witness_form.unwrap_or(f64::NAN),
        rep.min_eigenvalue,
        rep.uncertainty_violated
    );

    // sheared noise on one mode: only visible after undoing the shear
    let (k1, a) = (-0.5, 1.3);
    let sheared = GaussianGenerator::real(
        RMat::zeros(2, 2),
        RMat::from_row_slice(2, 2, &[k1, k1 * a, k1 * a, k1 * a * a]),
    )?;
    let shear = SymplecticMatrix::shear(a);
    let spec = in_diffusive_class(&sheared, Some(&shear), Tolerance::default())?.expect("sheared class");
    let rep = positivity_equals_cp_check(&sheared, &spec, 1e-2, Tolerance::default())?;
    println!("sheared: witness {:?}, violated {}", rep.witness_value, rep.uncertainty_violated);
    Ok(())
}
