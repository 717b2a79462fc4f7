use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cv_gksl::experiments::{
    cmd_criterion, cmd_fig1, cmd_fig2, cmd_fig3, cmd_scan, cmd_validate, ExperimentConfig, Format, Table,
};
use cv_gksl::gravity::ModelKind;
use cv_gksl::{Error, Result};

#[derive(Parser)]
#[command(name = "cv-gksl", version, about = "Gaussian GKSL entanglement experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement-generation verdict and critical smearing length.
    Criterion(Common),
    /// Newton vs naive negativity over time.
    Fig1(Common),
    /// TD negativity vs time (top) and vs R0 (bottom).
    Fig2(Common),
    /// TD negativity vs R0 against a measured band.
    Fig3(Common),
    /// Full negativity surface over the R0 and time grids.
    Scan(Common),
    /// Check a config file and report derived quantities.
    Validate {
        /// Config file to check.
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Newton,
    Naive,
    Td,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (fig2 writes `<stem>_top` and `<stem>_bottom`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    model: Option<ModelArg>,
    #[arg(long)]
    mass_kg: Option<f64>,
    #[arg(long)]
    distance_m: Option<f64>,
    #[arg(long)]
    trap_frequency_rad_s: Option<f64>,
    #[arg(long)]
    r0_m: Option<f64>,
    #[arg(long)]
    t_max_s: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    r0_min_m: Option<f64>,
    #[arg(long)]
    r0_max_m: Option<f64>,
    #[arg(long)]
    r0_samples: Option<usize>,
    #[arg(long)]
    sensitivity: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let s = &mut cfg.scenario;
        if let Some(m) = self.model {
            s.model = match m {
                ModelArg::Newton => ModelKind::Newton,
                ModelArg::Naive => ModelKind::Naive,
                ModelArg::Td => ModelKind::Td,
            };
        }
        macro_rules! set {
            ($field:expr, $value:expr) => {
                if let Some(v) = $value {
                    $field = v;
                }
            };
        }
        set!(s.mass_kg, self.mass_kg);
        set!(s.distance_m, self.distance_m);
        set!(s.trap_frequency_rad_s, self.trap_frequency_rad_s);
        if self.r0_m.is_some() {
            s.r0_m = self.r0_m;
        }
        set!(cfg.time_grid.t_max_s, self.t_max_s);
        set!(cfg.time_grid.samples, self.samples);
        set!(cfg.r0_grid.min_m, self.r0_min_m);
        set!(cfg.r0_grid.max_m, self.r0_max_m);
        set!(cfg.r0_grid.samples, self.r0_samples);
        set!(cfg.sensitivity, self.sensitivity);
        if let Some(f) = self.format {
            cfg.output.format = to_format(f);
        }
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        cfg.validate()?;
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?;
        }
        Ok(cfg)
    }
}

fn to_format(f: FormatArg) -> Format {
    match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn emit_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_table(cfg: &ExperimentConfig, table: &Table) -> Result<()> {
    emit_text(cfg.output.path.as_deref(), &table.render(cfg.output.format)?)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Criterion(c) => {
            let cfg = c.load()?;
            let rep = cmd_criterion(&cfg)?;
            let text = match cfg.output.format {
                Format::Csv => rep.to_text(),
                Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
            };
            emit_text(cfg.output.path.as_deref(), &text)
        }
        Command::Fig1(c) => {
            let cfg = c.load()?;
            emit_table(&cfg, &cmd_fig1(&cfg)?)
        }
        Command::Fig2(c) => {
            let cfg = c.load()?;
            let (top, bottom) = cmd_fig2(&cfg)?;
            let fmt = cfg.output.format;
            match &cfg.output.path {
                Some(p) => {
                    top.write(&suffixed(p, "top"), fmt)?;
                    bottom.write(&suffixed(p, "bottom"), fmt)
                }
                None => {
                    print!("{}", top.render(fmt)?);
                    println!();
                    print!("{}", bottom.render(fmt)?);
                    Ok(())
                }
            }
        }
        Command::Fig3(c) => {
            let cfg = c.load()?;
            emit_table(&cfg, &cmd_fig3(&cfg)?)
        }
        Command::Scan(c) => {
            let cfg = c.load()?;
            emit_table(&cfg, &cmd_scan(&cfg)?)
        }
        Command::Validate { file, format } => {
            let rep = cmd_validate(&file)?;
            let text = match format.map(to_format) {
                Some(Format::Json) => serde_json::to_string_pretty(&rep)? + "\n",
                _ => rep.to_text(),
            };
            print!("{text}");
            match rep.hard_failure {
                Some(msg) => Err(Error::RegimeGuard(msg)),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
