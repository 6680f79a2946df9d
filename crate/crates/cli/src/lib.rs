//! Sweeps and figure datasets over the scheme catalog.
//!
//! Grid points are evaluated on a rayon pool (capped by `WYNER_RATES_THREADS`)
//! and collected back in grid order, so output is reproducible byte for byte.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use wyner_rates::schemes::{evaluate, wyner_bound, EvalOptions, SchemeId, MAX_LAYERS};
use wyner_rates::topology::{CellArrayModel, Dimension};

pub const THREADS_ENV: &str = "WYNER_RATES_THREADS";

/// Fraction of the joint-processing bound that overlap-scheduled decoding is
/// expected to reach on the line for `α ≤ CLOSE_TO_CAPACITY_MAX_ALPHA`.
pub const CLOSE_TO_CAPACITY_RATIO: f64 = 0.9;
pub const CLOSE_TO_CAPACITY_MAX_ALPHA: f64 = 0.8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {reason}")]
    Output { path: String, reason: String },
    #[error(transparent)]
    Compute(#[from] wyner_rates::Error),
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 for output failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Compute(wyner_rates::Error::Unsupported(_)) => 2,
            CliError::Output { .. } => 3,
            CliError::Compute(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn parse_dimension(s: &str) -> Result<Dimension> {
    match s {
        "1d" => Ok(Dimension::Line1D),
        "2d" => Ok(Dimension::Hex2D),
        _ => Err(CliError::Input(format!("unknown dimension '{s}' (expected 1d or 2d)"))),
    }
}

pub fn parse_scheme(s: &str) -> Result<SchemeId> {
    s.parse()
        .map_err(|e: wyner_rates::Error| CliError::Input(e.to_string()))
}

/// Comma-separated scheme names, or `all` for every scheme of `dimension`.
pub fn parse_scheme_list(s: &str, dimension: Dimension) -> Result<Vec<SchemeId>> {
    if s == "all" {
        return Ok(SchemeId::available(dimension).collect());
    }
    let ids = s
        .split(',')
        .map(|p| parse_scheme(p.trim()))
        .collect::<Result<Vec<_>>>()?;
    if ids.is_empty() {
        return Err(CliError::Input("empty scheme list".into()));
    }
    Ok(ids)
}

pub fn validate_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(CliError::Input(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

pub fn validate_snr_db(snr_db: f64) -> Result<()> {
    if snr_db.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("SNR must be finite, got {snr_db}")))
    }
}

pub fn validate_layers(layers: usize) -> Result<()> {
    if (1..=MAX_LAYERS).contains(&layers) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "layers must lie in 1..={MAX_LAYERS}, got {layers}"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    Alpha,
    SnrDb,
}

impl FromStr for SweepVariable {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "snr-db" | "snr_db" => Ok(Self::SnrDb),
            _ => Err(CliError::Input(format!(
                "unknown sweep variable '{s}' (expected alpha or snr-db)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Input(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(CliError::Input(format!("grid step must be > 0, got {step}")));
        }
        if !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(CliError::Input(format!("empty grid [{start}, {stop}]")));
        }
        Ok(Self { start, stop, step })
    }

    /// Ascending grid points; the stop value is included when it lies on the
    /// grid up to rounding. Points are snapped to 12 decimals so that
    /// `0.35` prints as `0.35`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<SchemeId>,
    pub dimension: Dimension,
    pub variable: SweepVariable,
    pub grid: Grid,
    /// Value of the variable that is not swept.
    pub fixed: f64,
    pub layers: usize,
    pub format: OutputFormat,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(CliError::Input("no schemes selected".into()));
        }
        for s in &self.schemes {
            if !s.supports(self.dimension) {
                return Err(CliError::Input(format!(
                    "{s} is not defined for the {} array",
                    self.dimension
                )));
            }
        }
        let pts = self.grid.points();
        match self.variable {
            SweepVariable::Alpha => {
                pts.iter().try_for_each(|&a| validate_alpha(a))?;
                validate_snr_db(self.fixed)?;
            }
            SweepVariable::SnrDb => validate_alpha(self.fixed)?,
        }
        validate_layers(self.layers)
    }

    /// `(α, SNR dB)` for every grid point, in ascending order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.grid
            .points()
            .into_iter()
            .map(|x| match self.variable {
                SweepVariable::Alpha => (x, self.fixed),
                SweepVariable::SnrDb => (self.fixed, x),
            })
            .collect()
    }

    pub fn options(&self) -> EvalOptions {
        EvalOptions {
            layers: self.layers,
            ..EvalOptions::default()
        }
    }
}

/// One output row; CSV columns and JSON keys share these names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub scheme: String,
    pub dim: String,
    pub alpha: f64,
    pub snr_db: f64,
    pub rate: f64,
    pub split: String,
}

pub const CSV_HEADER: &str = "scheme,dim,alpha,snr_db,rate,split";

pub fn evaluate_point(
    scheme: SchemeId,
    dimension: Dimension,
    alpha: f64,
    snr_db: f64,
    opts: &EvalOptions,
) -> Result<Record> {
    validate_alpha(alpha)?;
    validate_snr_db(snr_db)?;
    let model = CellArrayModel::from_snr_db(dimension, alpha, snr_db)?;
    let r = evaluate(scheme, &model, opts)?;
    Ok(Record {
        scheme: scheme.name().to_string(),
        dim: dimension.to_string(),
        alpha,
        snr_db,
        rate: r.rate.value(),
        split: r.split_summary(),
    })
}

fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Evaluates every `(scheme, point)` pair, schemes in the given order and
/// points ascending.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Record>> {
    spec.validate()?;
    let opts = spec.options();
    let points = spec.points();
    let jobs: Vec<(SchemeId, f64, f64)> = spec
        .schemes
        .iter()
        .flat_map(|&s| points.iter().map(move |&(a, db)| (s, a, db)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| CliError::Input(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(s, a, db)| evaluate_point(s, spec.dimension, a, db, &opts))
            .collect()
    })
}

/// A point where overlap-scheduled decoding on the line falls short of
/// `CLOSE_TO_CAPACITY_RATIO` of the joint-processing bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Shortfall {
    pub alpha: f64,
    pub snr_db: f64,
    pub rate: f64,
    pub bound: f64,
}

impl Shortfall {
    pub fn ratio(&self) -> f64 {
        self.rate / self.bound
    }
}

impl fmt::Display for Shortfall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "overlap-scheduled at alpha={} snr_db={} reaches {:.4} of the joint-processing bound ({:.6} vs {:.6})",
            self.alpha,
            self.snr_db,
            self.ratio(),
            self.rate,
            self.bound
        )
    }
}

/// Flags 1D overlap-scheduled rows with `α ≤ 0.8` below 90% of the bound.
/// The bound is taken from a `wyner` row at the same point when present.
pub fn close_to_capacity_shortfalls(records: &[Record]) -> Result<Vec<Shortfall>> {
    let line = Dimension::Line1D.to_string();
    let mut out = Vec::new();
    for r in records {
        if r.scheme != SchemeId::OverlapScheduled.name() || r.dim != line || r.alpha > CLOSE_TO_CAPACITY_MAX_ALPHA {
            continue;
        }
        let bound = match records
            .iter()
            .find(|w| w.scheme == SchemeId::Wyner.name() && w.dim == line && w.alpha == r.alpha && w.snr_db == r.snr_db)
        {
            Some(w) => w.rate,
            None => wyner_bound(&CellArrayModel::from_snr_db(Dimension::Line1D, r.alpha, r.snr_db)?)?.value(),
        };
        if r.rate < CLOSE_TO_CAPACITY_RATIO * bound {
            out.push(Shortfall {
                alpha: r.alpha,
                snr_db: r.snr_db,
                rate: r.rate,
                bound,
            });
        }
    }
    Ok(out)
}

pub fn write_records<W: Write>(records: &[Record], format: OutputFormat, out: W) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if records.is_empty() {
                w.write_record(CSV_HEADER.split(','))?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)
        }
    }
}

/// Writes to `path`, or to stdout for `-`.
pub fn write_output(records: &[Record], format: OutputFormat, path: &str) -> Result<()> {
    let fail = |e: std::io::Error| CliError::Output {
        path: path.to_string(),
        reason: e.to_string(),
    };
    if path == "-" {
        let stdout = std::io::stdout();
        return write_records(records, format, stdout.lock()).map_err(fail);
    }
    let file = std::fs::File::create(path).map_err(fail)?;
    let mut buf = std::io::BufWriter::new(file);
    write_records(records, format, &mut buf).map_err(fail)?;
    buf.flush().map_err(fail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Line5Db,
    Line10Db,
    Hex10Db,
    LineAlphaHalf,
    HexAlphaHalf,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Line5Db,
        FigureId::Line10Db,
        FigureId::Hex10Db,
        FigureId::LineAlphaHalf,
        FigureId::HexAlphaHalf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Line5Db => "fig-1d-5db",
            FigureId::Line10Db => "fig-1d-10db",
            FigureId::Hex10Db => "fig-2d-10db",
            FigureId::LineAlphaHalf => "fig-1d-alpha05",
            FigureId::HexAlphaHalf => "fig-2d-alpha05",
        }
    }

    /// Every scheme of the array, bound included: either `α ∈ [0, 1]` in
    /// steps of 0.01 at fixed SNR, or SNR ∈ [0, 25] dB in steps of 0.5 at
    /// `α = 0.5`.
    pub fn sweep(self, layers: usize, format: OutputFormat) -> SweepSpec {
        let (dimension, variable, fixed) = match self {
            FigureId::Line5Db => (Dimension::Line1D, SweepVariable::Alpha, 5.0),
            FigureId::Line10Db => (Dimension::Line1D, SweepVariable::Alpha, 10.0),
            FigureId::Hex10Db => (Dimension::Hex2D, SweepVariable::Alpha, 10.0),
            FigureId::LineAlphaHalf => (Dimension::Line1D, SweepVariable::SnrDb, 0.5),
            FigureId::HexAlphaHalf => (Dimension::Hex2D, SweepVariable::SnrDb, 0.5),
        };
        let grid = match variable {
            SweepVariable::Alpha => Grid {
                start: 0.0,
                stop: 1.0,
                step: 0.01,
            },
            SweepVariable::SnrDb => Grid {
                start: 0.0,
                stop: 25.0,
                step: 0.5,
            },
        };
        SweepSpec {
            schemes: SchemeId::available(dimension).collect(),
            dimension,
            variable,
            grid,
            fixed,
            layers,
            format,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|id| id.name()).collect();
            CliError::Input(format!("unknown figure '{s}' (expected one of: {})", names.join(", ")))
        })
    }
}
