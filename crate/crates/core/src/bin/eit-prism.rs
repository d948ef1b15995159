use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eit_prism::commands::{cmd_chi, cmd_profile, cmd_sweep, cmd_trace};
use eit_prism::config::Command as ConfigCommand;
use eit_prism::parallel::with_threads;
use eit_prism::{parse_config, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "eit-prism", version, about = "Coherently driven atomic-vapor prism simulator")]
struct Cli {
    /// Flat `key: value` config file merged over the built-in scene.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Number of sweep points.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Lower sweep bound (Hz).
    #[arg(long, global = true, allow_hyphen_values = true)]
    min_hz: Option<f64>,
    /// Upper sweep bound (Hz).
    #[arg(long, global = true, allow_hyphen_values = true)]
    max_hz: Option<f64>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Susceptibility and refractive index versus detuning.
    Chi,
    /// Ray and wave deflection, transmission and far-field spot versus detuning.
    Sweep,
    /// Input and far-field intensity profiles.
    Profile {
        /// Detunings to propagate (Hz); repeat or comma-separate.
        #[arg(long = "detuning-hz", value_delimiter = ',', allow_hyphen_values = true)]
        detunings: Vec<f64>,
        /// Emit power per cm instead of unit-peak normalised intensity.
        #[arg(long)]
        raw: bool,
    },
    /// Ray trajectory through the cell.
    Trace {
        #[arg(long = "detuning-hz", allow_hyphen_values = true)]
        detuning: Option<f64>,
    },
}

fn load(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(n) = cli.points {
        cfg.sweep_points = n;
    }
    if let Some(v) = cli.min_hz {
        cfg.sweep_min_hz = v;
    }
    if let Some(v) = cli.max_hz {
        cfg.sweep_max_hz = v;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.display().to_string());
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn run(cli: Cli) -> Result<(), String> {
    let cfg = load(&cli)?;
    let command = match (&cli.command, cfg.command) {
        (Some(c), _) => c,
        (None, Some(ConfigCommand::Chi)) => &Cmd::Chi,
        (None, Some(ConfigCommand::Sweep)) => &Cmd::Sweep,
        (None, Some(ConfigCommand::Profile)) => &Cmd::Profile {
            detunings: Vec::new(),
            raw: false,
        },
        (None, Some(ConfigCommand::Trace)) => &Cmd::Trace { detuning: None },
        (None, None) => return Err("no subcommand given (chi | sweep | profile | trace)".into()),
    };

    let out_path = cfg.out.as_ref().map(PathBuf::from);
    let mut out: Box<dyn Write + Send> = match &out_path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };

    let result = with_threads(cli.threads, || -> Result<(), String> {
        match command {
            Cmd::Chi => cmd_chi(&cfg, &mut out).map_err(|e| e.to_string()),
            Cmd::Sweep => {
                let summary = cmd_sweep(&cfg, &mut out).map_err(|e| e.to_string())?;
                eprintln!("{}", summary.human());
                if let Some(p) = &out_path {
                    let sp = summary_path(p);
                    let mut f = BufWriter::new(
                        File::create(&sp).map_err(|e| format!("{}: {e}", sp.display()))?,
                    );
                    summary.write_csv(&mut f).map_err(|e| e.to_string())?;
                    f.flush().map_err(|e| e.to_string())?;
                }
                Ok(())
            }
            Cmd::Profile { detunings, raw } => {
                let list = if detunings.is_empty() {
                    cfg.profile_detunings_hz.clone()
                } else {
                    detunings.clone()
                };
                cmd_profile(&cfg, &list, *raw, &mut out).map_err(|e| e.to_string())
            }
            Cmd::Trace { detuning } => {
                let hz = detuning.unwrap_or(cfg.trace_detuning_hz);
                let t = cmd_trace(&cfg, hz, &mut out).map_err(|e| e.to_string())?;
                if t.paraxial_violation {
                    eprintln!("warning: ray left the paraxial regime");
                }
                Ok(())
            }
        }
    });
    result?;
    out.flush().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
