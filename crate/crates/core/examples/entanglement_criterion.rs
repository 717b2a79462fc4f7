use cv_gksl::partial_transpose::entanglement_report;
use cv_gksl::prelude::*;

fn main() -> Result<()> {
    let d = 3e-4;
    println!("{:>10} {:>10} {:>16}", "R0 [m]", "d/R0", "verdict");
    for r0 in [2e-4, 3e-4, 3.4e-4, 3.6e-4, 5e-4, 3e-3] {
        let scn = GravityScenario::reference(ModelKind::Td).with_r0(r0);
        let gen = build_generator(&scn)?;
        let rep = entanglement_report(&gen, Tolerance::Relative(1e-10))?;
        println!("{r0:>10.2e} {:>10.4} {:>16?}", d / r0, rep.verdict);
    }

    // the transposed generator of the TD model at R0 = 0.5 mm
    let gen = build_generator(&GravityScenario::reference(ModelKind::Td))?;
    let pt = pt_generator(&gen)?;
    println!("H^PT =\n{:.3e}", pt.hamiltonian());
    println!("Re kappa^PT =\n{:.3e}", pt.kossakowski().map(|z| z.re));
    Ok(())
}
