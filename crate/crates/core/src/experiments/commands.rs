use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::curves::en_curve;
use super::output::{Cell, Table};
use crate::error::{Error, Result};
use crate::gravity::{
    build_generator, critical_r0, critical_ratio, newton_coupling, regime_report, td_ratio,
    GravityScenario, ModelKind, RegimeReport, R0_EXPERIMENTAL_BOUND,
};
use crate::linalg::Tolerance;
use crate::partial_transpose::{entanglement_report, Verdict};

/// Tolerance for criterion checks on physically scaled generators.
pub const CRITERION_TOLERANCE: Tolerance = Tolerance::Relative(1e-10);

fn guard(scn: &GravityScenario, t_max_s: f64) -> Result<RegimeReport> {
    let r = regime_report(scn, Some(t_max_s))?;
    if let Some(msg) = &r.hard_failure {
        return Err(Error::RegimeGuard(msg.clone()));
    }
    Ok(r)
}

fn require_td(scn: &GravityScenario, what: &str) -> Result<()> {
    if scn.model != ModelKind::Td {
        return Err(Error::Config(format!("{what} needs model \"td\", got \"{}\"", scn.model)));
    }
    Ok(())
}

fn verdict_name(v: Verdict) -> String {
    match v {
        Verdict::Generating => "generating".into(),
        Verdict::NonGenerating => "non-generating".into(),
        Verdict::Undecidable { kappa_pt_psd: true } => "undecidable (separability-preserving)".into(),
        Verdict::Undecidable { kappa_pt_psd: false } => "undecidable (no conclusion)".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionSummary {
    pub model: String,
    pub verdict: String,
    pub d_over_r0: Option<f64>,
    /// `κ11/K^TD` (td only).
    pub kappa11_over_ktd: Option<f64>,
    /// Dimensionless `det Re κ_N`.
    pub det_re_kappa: Option<f64>,
    /// Dimensionless `c²`.
    pub c_squared: f64,
    pub critical_ratio: f64,
    pub critical_r0_m: f64,
    pub experimental_r0_bound_m: f64,
    pub critical_r0_above_bound: bool,
    pub warnings: Vec<String>,
}

impl CriterionSummary {
    pub fn to_text(&self) -> String {
        let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.6e}"));
        let mut s = String::new();
        s += &format!("model: {}\n", self.model);
        s += &format!("verdict: {}\n", self.verdict);
        s += &format!("d/R0: {}\n", opt(self.d_over_r0));
        s += &format!("kappa11/K_TD: {}\n", opt(self.kappa11_over_ktd));
        s += &format!("det Re kappa_N: {}\n", opt(self.det_re_kappa));
        s += &format!("c^2: {:.6e}\n", self.c_squared);
        s += &format!("critical d/R0: {:.6}\n", self.critical_ratio);
        s += &format!("critical R0 [m]: {:.6e}\n", self.critical_r0_m);
        s += &format!(
            "critical R0 above experimental bound {:e} m: {}\n",
            self.experimental_r0_bound_m, self.critical_r0_above_bound
        );
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        s
    }
}

pub fn cmd_criterion(cfg: &ExperimentConfig) -> Result<CriterionSummary> {
    let scn = cfg.scenario()?;
    let reg = guard(&scn, cfg.time_grid.t_max_s)?;
    let gen = build_generator(&scn)?;
    let rep = entanglement_report(&gen, CRITERION_TOLERANCE)?;
    let xc = critical_ratio()?;
    let r0c = critical_r0(scn.distance_m)?;
    let ratio = match scn.model {
        ModelKind::Td => Some(scn.ratio()?),
        _ => None,
    };
    Ok(CriterionSummary {
        model: scn.model.to_string(),
        verdict: verdict_name(rep.verdict),
        d_over_r0: ratio,
        kappa11_over_ktd: ratio.map(td_ratio),
        det_re_kappa: rep.det,
        c_squared: rep.c * rep.c,
        critical_ratio: xc,
        critical_r0_m: r0c,
        experimental_r0_bound_m: R0_EXPERIMENTAL_BOUND,
        critical_r0_above_bound: r0c >= R0_EXPERIMENTAL_BOUND,
        warnings: reg.warnings,
    })
}

/// Columns `t_s, en_newton, en_naive, rel_diff`.
pub fn cmd_fig1(cfg: &ExperimentConfig) -> Result<Table> {
    let base = cfg.scenario()?;
    let times = cfg.time_grid.times()?;
    guard(&base, cfg.time_grid.t_max_s)?;
    let models = [ModelKind::Newton, ModelKind::Naive];
    let curves: Vec<Vec<f64>> = models
        .par_iter()
        .map(|&m| en_curve(&base.with_model(m), &times))
        .collect::<Result<_>>()?;
    let mut t = Table::new(["t_s", "en_newton", "en_naive", "rel_diff"]);
    for (i, &ts) in times.iter().enumerate() {
        let (n, v) = (curves[0][i], curves[1][i]);
        let rel = if n == 0.0 { 0.0 } else { (n - v) / n };
        t.push(vec![ts.into(), n.into(), v.into(), rel.into()]);
    }
    Ok(t)
}

fn en_column(prefix: &str, x: f64) -> String {
    format!("{prefix}{x}")
}

/// Top panel `t_s, en_newton, en_td_r0_<R0>...`; bottom panel
/// `r0_m, en_t<t>...` over the R0 grid.
pub fn cmd_fig2(cfg: &ExperimentConfig) -> Result<(Table, Table)> {
    let base = cfg.scenario()?;
    require_td(&base, "fig2")?;
    let times = cfg.time_grid.times()?;
    let bottom_times = &cfg.fig2.bottom_times_s;
    let t_max = bottom_times.iter().copied().fold(cfg.time_grid.t_max_s, f64::max);
    for &r0 in &cfg.fig2.r0_list_m {
        guard(&base.with_r0(r0), t_max)?;
    }

    let mut scenarios = vec![base.with_model(ModelKind::Newton)];
    scenarios.extend(cfg.fig2.r0_list_m.iter().map(|&r| base.with_r0(r)));
    let curves: Vec<Vec<f64>> = scenarios.par_iter().map(|s| en_curve(s, &times)).collect::<Result<_>>()?;
    let mut cols = vec!["t_s".to_string(), "en_newton".to_string()];
    cols.extend(cfg.fig2.r0_list_m.iter().map(|&r| en_column("en_td_r0_", r)));
    let mut top = Table::new(cols);
    for (i, &ts) in times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![ts.into()];
        row.extend(curves.iter().map(|c| Cell::Num(c[i])));
        top.push(row);
    }

    let r0s = cfg.r0_grid.values()?;
    let rows: Vec<Vec<f64>> = r0s.par_iter().map(|&r| en_curve(&base.with_r0(r), bottom_times)).collect::<Result<_>>()?;
    let mut cols = vec!["r0_m".to_string()];
    cols.extend(bottom_times.iter().map(|&t| en_column("en_t", t)));
    let mut bottom = Table::new(cols);
    for (r0, vals) in r0s.iter().zip(rows) {
        let mut row: Vec<Cell> = vec![(*r0).into()];
        row.extend(vals.into_iter().map(Cell::Num));
        bottom.push(row);
    }
    Ok((top, bottom))
}

/// `r0_m, en_t<t>..., compatible_t<t>...`; a sample is compatible when
/// `|E_N − centre| < half width`.
pub fn cmd_fig3(cfg: &ExperimentConfig) -> Result<Table> {
    let base = cfg.scenario()?;
    require_td(&base, "fig3")?;
    let times = &cfg.fig3.times_s;
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let r0s = cfg.r0_grid.values()?;
    guard(&base.with_r0(r0s[0]), t_max)?;
    let rows: Vec<Vec<f64>> = r0s.par_iter().map(|&r| en_curve(&base.with_r0(r), times)).collect::<Result<_>>()?;
    let mut cols = vec!["r0_m".to_string()];
    cols.extend(times.iter().map(|&t| en_column("en_t", t)));
    cols.extend(times.iter().map(|&t| en_column("compatible_t", t)));
    let mut table = Table::new(cols);
    let (centre, half) = (cfg.fig3.band_center, cfg.fig3.band_halfwidth);
    for (r0, vals) in r0s.iter().zip(rows) {
        let mut row: Vec<Cell> = vec![(*r0).into()];
        row.extend(vals.iter().map(|&v| Cell::Num(v)));
        row.extend(vals.iter().map(|&v| Cell::Flag((v - centre).abs() < half)));
        table.push(row);
    }
    Ok(table)
}

/// `r0_m, t_s, en`, ordered by R0 then t.
pub fn cmd_scan(cfg: &ExperimentConfig) -> Result<Table> {
    let base = cfg.scenario()?;
    let times = cfg.time_grid.times()?;
    let r0s = cfg.r0_grid.values()?;
    guard(&base.with_r0(r0s[0]), cfg.time_grid.t_max_s)?;
    let surfaces: Vec<Vec<f64>> = r0s.par_iter().map(|&r| en_curve(&base.with_r0(r), &times)).collect::<Result<_>>()?;
    let mut table = Table::new(["r0_m", "t_s", "en"]);
    for (r0, vals) in r0s.iter().zip(surfaces) {
        for (&t, v) in times.iter().zip(vals) {
            table.push(vec![(*r0).into(), t.into(), v.into()]);
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub omega_rad_s: f64,
    pub x0_m: f64,
    pub p0_kg_m_s: f64,
    pub t0_s: f64,
    pub newton_coupling: f64,
    /// Dimensionless `x1 x2` coupling `c`.
    pub coupling_c: f64,
    /// Dimensionless reduced Kossakowski matrix.
    pub kappa_n: [[f64; 2]; 2],
    pub coupling_ratio: f64,
    pub spread_ratio: Option<f64>,
    pub warnings: Vec<String>,
    pub hard_failure: Option<String>,
}

impl ValidationReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("model: {}\n", self.model);
        s += &format!("omega [rad/s]: {:.6e}\n", self.omega_rad_s);
        s += &format!("x0 [m]: {:.6e}\n", self.x0_m);
        s += &format!("p0 [kg m/s]: {:.6e}\n", self.p0_kg_m_s);
        s += &format!("t0 [s]: {:.6e}\n", self.t0_s);
        s += &format!("K [kg/s^2]: {:.6e}\n", self.newton_coupling);
        s += &format!("c: {:.6e}\n", self.coupling_c);
        let k = self.kappa_n;
        s += &format!("kappa_N: [[{:.6e}, {:.6e}], [{:.6e}, {:.6e}]]\n", k[0][0], k[0][1], k[1][0], k[1][1]);
        s += &format!("K/(m w^2): {:.6e}\n", self.coupling_ratio);
        if let Some(r) = self.spread_ratio {
            s += &format!("dx_t/min(d, R0): {r:.6e}\n");
        }
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        match &self.hard_failure {
            Some(f) => s += &format!("regime guard: FAILED ({f})\n"),
            None => s += "regime guard: ok\n",
        }
        s
    }
}

/// Parses a config file and evaluates the regime guards without refusing.
pub fn cmd_validate(path: &Path) -> Result<ValidationReport> {
    let cfg = ExperimentConfig::load(path)?;
    let scn = cfg.scenario()?;
    let reg = regime_report(&scn, Some(cfg.time_grid.t_max_s))?;
    let u = scn.units();
    let s = scn.stiffness();
    let c = crate::gravity::effective_coupling(&scn)? / s;
    let kn = crate::gravity::reduced_kossakowski(&scn)?;
    Ok(ValidationReport {
        model: scn.model.to_string(),
        omega_rad_s: scn.omega,
        x0_m: u.x0,
        p0_kg_m_s: u.p0,
        t0_s: u.t0,
        newton_coupling: newton_coupling(&scn),
        coupling_c: c,
        kappa_n: [[kn[0][0] / s, kn[0][1] / s], [kn[1][0] / s, kn[1][1] / s]],
        coupling_ratio: reg.coupling_ratio,
        spread_ratio: reg.spread_ratio,
        warnings: reg.warnings,
        hard_failure: reg.hard_failure,
    })
}
