//! `billiard-lab`: run one experiment from a TOML config and write a run directory.

mod commands;
mod config;
mod error;
mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use billiard_lab::geometry::ArithmeticMode;
use config::ExperimentConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "billiard-lab", version, about = "Polygonal billiards and translation surface experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Billiard trajectories.
    Simulate,
    /// Unfold a rational polygon into a translation surface.
    Unfold,
    /// First-return interval exchange on a perpendicular transversal.
    Iet,
    /// Lyapunov spectrum of the induction cocycle.
    Lyapunov,
    /// Eigenvalue exclusion test over a list of frequencies.
    VeechTest,
    /// Product-flow equidistribution of indicator functions.
    Equidist,
    /// Weak-mixing certificate over a tent family.
    WmCert,
    /// Shadowing sweep over perturbation sizes.
    PerturbScan,
    /// Cocycle growth survey over horocycle directions.
    Survey,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Unfold => "unfold",
            Command::Iet => "iet",
            Command::Lyapunov => "lyapunov",
            Command::VeechTest => "veech-test",
            Command::Equidist => "equidist",
            Command::WmCert => "wm-cert",
            Command::PerturbScan => "perturb-scan",
            Command::Survey => "survey",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Mode {
    Rational,
    Float,
}

fn load(cli: &Cli) -> Result<(ExperimentConfig, PathBuf, PathBuf), CliError> {
    let (mut cfg, base) = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let cfg: ExperimentConfig = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
            (cfg, path.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (ExperimentConfig::default(), PathBuf::new()),
    };
    let name = cli.command.name();
    if let Some(c) = &cfg.command {
        if c != name {
            return Err(CliError::Config(format!("config is for {c:?}, not {name:?}")));
        }
    }
    cfg.command = Some(name.to_string());
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(m) = cli.mode {
        cfg.mode = match m {
            Mode::Rational => ArithmeticMode::Rational,
            Mode::Float => ArithmeticMode::Float,
        };
    }
    // The run directory is not part of the experiment: replays elsewhere hash the same.
    let out = cli.out.clone().or_else(|| cfg.out.take().map(|o| base.join(o))).unwrap_or_else(|| PathBuf::from(format!("run-{name}")));
    cfg.out = None;
    Ok((cfg, base, out))
}

fn run(cli: &Cli) -> Result<PathBuf, CliError> {
    let (cfg, base, out) = load(cli)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let result = match cli.command {
        Command::Simulate => commands::simulate(&cfg, &base),
        Command::Unfold => commands::unfold_cmd(&cfg, &base),
        Command::Iet => commands::iet(&cfg, &base),
        Command::Lyapunov => commands::lyapunov(&cfg, &base),
        Command::VeechTest => commands::veech(&cfg, &base),
        Command::Equidist => commands::equidist(&cfg, &base),
        Command::WmCert => commands::wm_cert(&cfg, &base),
        Command::PerturbScan => commands::perturb_scan(&cfg, &base),
        Command::Survey => commands::survey(&cfg, &base),
    }?;
    output::write_run(&out, &cfg, cli.command.name(), result)?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("billiard-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
