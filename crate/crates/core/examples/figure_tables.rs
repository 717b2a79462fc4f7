//! Writes the figure tables for a reduced grid into a directory
//! (default `figures/`).

use std::path::PathBuf;

use cv_gksl::experiments::{cmd_fig1, cmd_fig2, cmd_fig3, ExperimentConfig, Format};
use cv_gksl::gravity::ModelKind;
use cv_gksl::Result;

fn main() -> Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;

    let mut cfg = ExperimentConfig::default();
    cfg.time_grid.samples = 100;
    cfg.r0_grid.samples = 40;

    let mut f1 = cfg.clone();
    f1.scenario.model = ModelKind::Newton;
    f1.scenario.r0_m = None;
    f1.time_grid.t_max_s = 30.0;
    let fig1 = cmd_fig1(&f1)?;
    fig1.write(&dir.join("fig1.csv"), Format::Csv)?;

    let (top, bottom) = cmd_fig2(&cfg)?;
    top.write(&dir.join("fig2_top.csv"), Format::Csv)?;
    bottom.write(&dir.join("fig2_bottom.csv"), Format::Json)?;

    let fig3 = cmd_fig3(&cfg)?;
    fig3.write(&dir.join("fig3.csv"), Format::Csv)?;
    let compatible: Vec<String> = fig3
        .column("r0_m")
        .unwrap()
        .into_iter()
        .zip(fig3.column("compatible_t13").unwrap())
        .filter(|(_, f)| *f == 1.0)
        .map(|(r, _)| format!("{r:.3e}"))
        .collect();
    println!("wrote tables to {}", dir.display());
    println!("R0 compatible with E_N = 0.10 ± 0.01 at 13 s: {}", compatible.join(", "));
    Ok(())
}
