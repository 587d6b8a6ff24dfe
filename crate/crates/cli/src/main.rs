#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod artifacts;
mod config;
mod error;
mod oracle_check;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Kind};
use error::{CliError, CliResult};

pub const LOG_FILE: &str = "run.log";

#[derive(Parser)]
#[command(name = "lrquench", version, about = "Sudden quenches of the long-range extended transverse Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV, JSON summary and log.
    Run(ConfigArgs),
    /// Check a configuration without running it.
    Validate(ConfigArgs),
    /// Compare the free-fermion pipeline with exact diagonalization.
    OracleCheck {
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8, 10])]
        sizes: Vec<usize>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Config file plus flag overrides; a flag wins over the file.
#[derive(Args, Clone, Debug, Default)]
struct ConfigArgs {
    /// TOML config, or a JSON run summary whose embedded config is reused.
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    h_initial: Option<f64>,
    #[arg(long)]
    alpha_initial: Option<f64>,
    #[arg(long)]
    h_final: Option<f64>,
    #[arg(long)]
    alpha_final: Option<f64>,
    #[arg(long)]
    steady_state_time: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Inclusive fit window `R_MIN,R_MAX`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    fit_window: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut cfg = match (&self.config, self.kind) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(kind)) => ExperimentConfig::new(kind),
            (None, None) => return Err(CliError::Config("give a config file or --kind".into())),
        };
        let m = &mut cfg.model;
        if let Some(k) = self.kind {
            cfg.kind = k;
        }
        macro_rules! set {
            ($($flag:ident => $target:expr),* $(,)?) => {$(
                if let Some(v) = self.$flag.clone() {
                    $target = v;
                }
            )*};
        }
        set!(n => m.n, h_initial => m.h_initial, alpha_initial => m.alpha_initial,
             h_final => m.h_final, alpha_final => m.alpha_final);
        set!(steady_state_time => cfg.time.steady_state_time, dt => cfg.time.dt, t_max => cfg.time.t_max,
             sizes => cfg.sweep.sizes, workers => cfg.output.workers, output_dir => cfg.output.dir);
        if let Some(w) = &self.fit_window {
            cfg.fit.window = Some([w[0], w[1]]);
        }
        Ok(cfg)
    }
}

fn init_pool(workers: usize) -> CliResult<()> {
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.resolve()?;
            cfg.validate()?;
            artifacts::init_logging(Some(&cfg.output.dir.join(LOG_FILE)))?;
            init_pool(cfg.output.workers)?;
            run::run(&cfg)?;
            println!("{}", cfg.output.dir.join(run::SUMMARY_FILE).display());
            Ok(())
        }
        Command::Validate(args) => {
            let cfg = args.resolve()?;
            cfg.validate()?;
            println!("ok: {} configuration is valid", serde_json::json!(cfg.kind).as_str().unwrap_or_default());
            Ok(())
        }
        Command::OracleCheck { draws, seed, tolerance, sizes, workers } => {
            init_pool(workers.unwrap_or(0))?;
            oracle_check::oracle_check(&oracle_check::CheckOptions { draws, seed, tolerance, sizes })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(msg) => msg.lines().for_each(|l| eprintln!("error: {l}")),
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
