use cv_gksl::experiments::{detection_time, td_detection_time};
use cv_gksl::gravity::{orders_above_bound, regime_report, td_ratio, R0_EXPERIMENTAL_BOUND};
use cv_gksl::prelude::*;

fn main() -> Result<()> {
    let newton = GravityScenario::reference(ModelKind::Newton);
    println!("K = {:.6e} kg/s^2", newton_coupling(&newton));
    let rep = regime_report(&newton, Some(10.0))?;
    println!("K/(m w^2) = {:.3e}, spread ratio at 10 s = {:.3e}", rep.coupling_ratio, rep.spread_ratio.unwrap());

    let xc = critical_ratio()?;
    let r0c = critical_r0(newton.distance_m)?;
    println!("critical d/R0 = {xc:.6} (kappa11/K_TD = {:.6})", td_ratio(xc));
    println!(
        "critical R0 = {r0c:.4e} m, {:.2} orders above the bound {R0_EXPERIMENTAL_BOUND:e} m",
        orders_above_bound(newton.distance_m)?
    );

    let t_newton = detection_time(&newton, 1e-2, 10.0)?.expect("Newton crosses within 10 s");
    println!("Newton reaches E_N = 1e-2 at t = {t_newton:.4} s");
    let td = GravityScenario::reference(ModelKind::Td);
    match td_detection_time(&td, 1e-2, 3.6e-4, 1e-2, 10.0)? {
        Some(t) => println!("best TD smearing reaches E_N = 1e-2 at t = {t:.4} s"),
        None => println!("TD never reaches E_N = 1e-2 within 10 s"),
    }
    Ok(())
}
