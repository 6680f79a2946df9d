use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wyner_rates::schemes::EvalOptions;
use wyner_rates_cli::{
    close_to_capacity_shortfalls, evaluate_point, parse_dimension, parse_scheme, parse_scheme_list, run_sweep,
    validate_layers, write_output, CliError, FigureId, Grid, OutputFormat, Result, SweepSpec, SweepVariable,
};

/// Per-cell uplink rates of collaboration schemes over Wyner cellular arrays.
#[derive(Parser)]
#[command(name = "wyner-rates", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate of one scheme at one operating point.
    Rate {
        #[arg(long)]
        scheme: String,
        /// 1d or 2d
        #[arg(long, default_value = "1d")]
        dim: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        snr_db: f64,
        /// Layers per cell for the multilayer scheme.
        #[arg(long, default_value_t = 4)]
        layers: usize,
    },
    /// Rates of several schemes over a grid in α or SNR.
    Sweep {
        /// Comma-separated scheme names, or `all`.
        #[arg(long, default_value = "all")]
        schemes: String,
        #[arg(long, default_value = "1d")]
        dim: String,
        /// alpha or snr-db
        #[arg(long, default_value = "alpha")]
        vary: String,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        step: f64,
        /// Fixed α when sweeping SNR.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// Fixed SNR (dB) when sweeping α.
        #[arg(long, allow_negative_numbers = true)]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        /// csv or json
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output path, `-` for stdout.
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Dataset behind one of the comparison figures.
    Figure {
        /// fig-1d-5db, fig-1d-10db, fig-2d-10db, fig-1d-alpha05 or fig-2d-alpha05
        id: String,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
}

fn report_shortfalls(records: &[wyner_rates_cli::Record]) -> Result<()> {
    for s in close_to_capacity_shortfalls(records)? {
        eprintln!("flag: {s}");
    }
    Ok(())
}

fn sweep_and_write(spec: &SweepSpec, output: &str) -> Result<()> {
    let records = run_sweep(spec)?;
    write_output(&records, spec.format, output)?;
    report_shortfalls(&records)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rate {
            scheme,
            dim,
            alpha,
            snr_db,
            layers,
        } => {
            let scheme = parse_scheme(&scheme)?;
            let dim = parse_dimension(&dim)?;
            validate_layers(layers)?;
            let opts = EvalOptions {
                layers,
                ..EvalOptions::default()
            };
            let r = evaluate_point(scheme, dim, alpha, snr_db, &opts)?;
            let split = if r.split.is_empty() { "-" } else { r.split.as_str() };
            println!(
                "scheme={} dim={} alpha={} snr_db={} rate={:.6} split={split}",
                r.scheme, r.dim, r.alpha, r.snr_db, r.rate
            );
            report_shortfalls(&[r])
        }
        Command::Sweep {
            schemes,
            dim,
            vary,
            start,
            stop,
            step,
            alpha,
            snr_db,
            layers,
            format,
            output,
        } => {
            let dimension = parse_dimension(&dim)?;
            let variable: SweepVariable = vary.parse()?;
            let fixed = match variable {
                SweepVariable::Alpha => {
                    snr_db.ok_or_else(|| CliError::Input("--snr-db is required when sweeping alpha".into()))?
                }
                SweepVariable::SnrDb => {
                    alpha.ok_or_else(|| CliError::Input("--alpha is required when sweeping snr-db".into()))?
                }
            };
            let spec = SweepSpec {
                schemes: parse_scheme_list(&schemes, dimension)?,
                dimension,
                variable,
                grid: Grid::new(start, stop, step)?,
                fixed,
                layers,
                format: format.parse::<OutputFormat>()?,
            };
            sweep_and_write(&spec, &output)
        }
        Command::Figure {
            id,
            layers,
            format,
            output,
        } => {
            let spec = id.parse::<FigureId>()?.sweep(layers, format.parse()?);
            sweep_and_write(&spec, &output)
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
