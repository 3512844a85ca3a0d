//! Everything behind the `ionbound` binary that is worth testing without a
//! process boundary: config parsing, figure and sweep tables, CSV encoding,
//! the constants report and the error → exit-code mapping.
//!
//! All numbers come from the library modules; this layer only chooses grids
//! and formats.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::bounds::{
    self, BoundKind, BoundOptions, BoundReport, BoundsError, ShiftMode, StateData,
};
use crate::hydrogen::{self, HydrogenError, HydrogenState, ShiftNorm};
use crate::kato::{self, KatoError};
use crate::parallel::{self, Execution};
use crate::pulse::{Pulse, PulseConfig, PulseError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "IONBOUND_OUT_DIR";

/// Sweeps larger than this are rejected before any work is done.
pub const MAX_SWEEP_ROWS: usize = 10_000_000;

/// Points per figure curve (both ends included).
pub const FIGURE_POINTS: usize = 401;

pub const FIGURE1_OMEGA: f64 = 1.5;
pub const FIGURE1_FIELDS: [f64; 3] = [5.0, 10.0, 20.0];
pub const FIGURE2_OMEGA: f64 = 50.0;
pub const FIGURE2_FIELD: f64 = 10.0;
pub const FIGURE2_CYCLES: f64 = 4.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for anything the user can fix in their inputs or environment,
    /// 2 when the numerics themselves fail.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<PulseError> for CliError {
    fn from(e: PulseError) -> Self {
        match e {
            PulseError::InvalidParameter { .. }
            | PulseError::Config(_)
            | PulseError::Negative(_) => CliError::Config(e.to_string()),
            PulseError::Distributional
            | PulseError::Quadrature(_)
            | PulseError::Inconsistent { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<HydrogenError> for CliError {
    fn from(e: HydrogenError) -> Self {
        match e {
            HydrogenError::InvalidState { .. } | HydrogenError::Parse(_) => {
                CliError::Config(e.to_string())
            }
            HydrogenError::NonFiniteShift(_) | HydrogenError::Quadrature(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Pulse(p) => p.into(),
            BoundsError::Hydrogen(h) => h.into(),
            BoundsError::UnsupportedShiftMode { .. } | BoundsError::InvalidStateData(_) => {
                CliError::Config(e.to_string())
            }
            BoundsError::Quadrature(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<KatoError> for CliError {
    fn from(e: KatoError) -> Self {
        match e {
            KatoError::InvalidParams { .. } => CliError::Config(e.to_string()),
            KatoError::NonConvergence { .. } | KatoError::Quadrature(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub state: HydrogenState,
    pub options: BoundOptions,
    pub execution: Execution,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            state: HydrogenState::ground(),
            options: BoundOptions::default(),
            execution: Execution::default(),
        }
    }
}

impl RunSettings {
    fn state_data(&self) -> Result<StateData, CliError> {
        let data = StateData::hydrogen(&self.state);
        data.supports(self.options.shift_mode)?;
        Ok(data)
    }
}

/// Reads and builds a pulse from a TOML file.
pub fn load_pulse(path: &Path) -> Result<Pulse, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read pulse file {}: {e}", path.display())))?;
    let config = PulseConfig::parse(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(config.build()?)
}

/// Where a command's output goes: an explicit path, a default file name in
/// the environment-provided directory, or stdout (`None`).
pub fn resolve_output(
    explicit: Option<&Path>,
    env_dir: Option<&Path>,
    default_name: &str,
) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| env_dir.map(|d| d.join(default_name)))
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Full-precision float for CSV (17 significant digits, round-trips).
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV is UTF-8")
}

// ---------------------------------------------------------------- report

pub fn report(pulse: &Pulse, settings: &RunSettings) -> Result<Vec<BoundReport>, CliError> {
    let state = settings.state_data()?;
    Ok(bounds::all_bounds(pulse, &state, settings.options)?)
}

pub fn report_csv(reports: &[BoundReport]) -> String {
    let header = ["kind", "valid", "raw", "clipped", "reason", "terms"].map(String::from);
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let terms = r
                .terms
                .iter()
                .map(|t| format!("{}={}", t.name, fmt_float(t.value)))
                .collect::<Vec<_>>()
                .join(";");
            vec![
                r.kind.to_string(),
                r.valid.to_string(),
                fmt_opt(r.raw),
                fmt_opt(r.clipped),
                r.reason.clone(),
                terms,
            ]
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn report_text(pulse: &Pulse, settings: &RunSettings, reports: &[BoundReport]) -> String {
    let mut out = String::new();
    let tau = pulse.duration();
    let _ = writeln!(
        out,
        "state {}  tau {}  shift-mode {}  drop-spreading {}",
        settings.state, tau, settings.options.shift_mode, settings.options.drop_spreading
    );
    let _ = writeln!(out, "{:<8} {:>22} {:>22}  notes", "bound", "raw", "clipped");
    for r in reports {
        let raw = r
            .raw
            .map(|v| format!("{v:.12e}"))
            .unwrap_or_else(|| "-".into());
        let clipped = r
            .clipped
            .map(|v| format!("{v:.12}"))
            .unwrap_or_else(|| "-".into());
        let notes = if r.valid {
            r.terms
                .iter()
                .map(|t| format!("{}={:.6e}", t.name, t.value))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            format!("invalid: {}", r.reason)
        };
        let _ = writeln!(out, "{:<8} {:>22} {:>22}  {}", r.kind, raw, clipped, notes);
    }
    out
}

// ---------------------------------------------------------------- figures

/// One curve of a figure: a bound kind at one field amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub kind: BoundKind,
    pub e0: f64,
    pub reports: Vec<BoundReport>,
}

impl Series {
    pub fn label(&self) -> String {
        format!("{}_e{}", self.kind, self.e0)
    }

    pub fn raw(&self) -> Vec<Option<f64>> {
        self.reports.iter().map(|r| r.raw).collect()
    }

    pub fn clipped(&self) -> Vec<Option<f64>> {
        self.reports.iter().map(|r| r.clipped).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub omega: f64,
    pub taus: Vec<f64>,
    pub series: Vec<Series>,
}

impl CurveSet {
    pub fn series(&self, kind: BoundKind, e0: f64) -> Option<&Series> {
        self.series.iter().find(|s| s.kind == kind && s.e0 == e0)
    }

    /// `tau`, then `<kind>_e<E0>_raw` and `_clipped` per series; invalid
    /// points are empty cells.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["tau".to_string()];
        for s in &self.series {
            header.push(format!("{}_raw", s.label()));
            header.push(format!("{}_clipped", s.label()));
        }
        let rows: Vec<Vec<String>> = self
            .taus
            .iter()
            .enumerate()
            .map(|(i, &tau)| {
                let mut row = vec![fmt_float(tau)];
                for s in &self.series {
                    row.push(fmt_opt(s.reports[i].raw));
                    row.push(fmt_opt(s.reports[i].clipped));
                }
                row
            })
            .collect();
        csv_string(&header, &rows)
    }
}

/// `n` equally spaced points over `[0, end]`, endpoints included.
pub fn grid(end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Upper (`upper2`) and lower bounds for one cosine pulse.
pub fn cosine_point(
    e0: f64,
    omega: f64,
    tau: f64,
    state: &StateData,
    options: BoundOptions,
) -> Result<(BoundReport, BoundReport), CliError> {
    let pulse = Pulse::cosine(e0, omega, tau)?;
    let upper = bounds::upper_bound_2(&pulse, state, options)?;
    let lower = bounds::lower_bound(&pulse, state, options)?;
    Ok((upper, lower))
}

fn curves(
    omega: f64,
    fields: &[f64],
    taus: Vec<f64>,
    with_lower: bool,
    settings: &RunSettings,
) -> Result<CurveSet, CliError> {
    let state = settings.state_data()?;
    let jobs: Vec<(f64, f64)> = fields
        .iter()
        .flat_map(|&e0| taus.iter().map(move |&t| (e0, t)))
        .collect();
    let points = parallel::try_map(settings.execution, &jobs, |&(e0, tau)| {
        cosine_point(e0, omega, tau, &state, settings.options)
    })?;
    let n = taus.len();
    let mut series = Vec::new();
    for (i, &e0) in fields.iter().enumerate() {
        let chunk = &points[i * n..(i + 1) * n];
        series.push(Series {
            kind: BoundKind::Upper2,
            e0,
            reports: chunk.iter().map(|p| p.0.clone()).collect(),
        });
    }
    if with_lower {
        for (i, &e0) in fields.iter().enumerate() {
            let chunk = &points[i * n..(i + 1) * n];
            series.push(Series {
                kind: BoundKind::Lower,
                e0,
                reports: chunk.iter().map(|p| p.1.clone()).collect(),
            });
        }
    }
    Ok(CurveSet {
        omega,
        taus,
        series,
    })
}

/// One optical cycle at `ω = 1.5` for `E₀ ∈ {5, 10, 20}`, upper and lower
/// bounds with the field-independent spreading term dropped.
pub fn figure1(settings: &RunSettings) -> Result<CurveSet, CliError> {
    let mut s = *settings;
    s.options.drop_spreading = true;
    let period = 2.0 * PI / FIGURE1_OMEGA;
    curves(
        FIGURE1_OMEGA,
        &FIGURE1_FIELDS,
        grid(period, FIGURE_POINTS),
        true,
        &s,
    )
}

/// Four cycles at `ω = 50`, `E₀ = 10`: the upper bound including the
/// spreading term unless `settings` drops it.
pub fn figure2(settings: &RunSettings) -> Result<CurveSet, CliError> {
    let end = FIGURE2_CYCLES * 2.0 * PI / FIGURE2_OMEGA;
    curves(
        FIGURE2_OMEGA,
        &[FIGURE2_FIELD],
        grid(end, FIGURE_POINTS),
        false,
        settings,
    )
}

// ---------------------------------------------------------------- sweeps

/// A list of values or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl AxisSpec {
    pub fn len(&self) -> usize {
        match self {
            AxisSpec::List(v) => v.len(),
            AxisSpec::Range { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            AxisSpec::List(v) => v.clone(),
            AxisSpec::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(rename = "E0")]
    pub e0: AxisSpec,
    pub omega: AxisSpec,
    pub tau: Option<AxisSpec>,
    /// Durations given as `ωτ` instead of `τ`.
    pub omega_tau: Option<AxisSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sweep: SweepSpec,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: SweepConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("sweep config: {e}")))?;
        match (&cfg.sweep.tau, &cfg.sweep.omega_tau) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "sweep config: give either `tau` or `omega_tau`, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "sweep config: missing `tau` or `omega_tau`".into(),
            )),
            _ => Ok(cfg),
        }
    }

    pub fn row_count(&self) -> usize {
        let s = &self.sweep;
        let t = s
            .tau
            .as_ref()
            .or(s.omega_tau.as_ref())
            .map_or(0, AxisSpec::len);
        s.e0.len().saturating_mul(s.omega.len()).saturating_mul(t)
    }

    /// `(E₀, ω, τ)` in row order: `E₀` outermost, then `ω`, then `τ`.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let s = &self.sweep;
        let mut out = Vec::with_capacity(self.row_count());
        for e0 in s.e0.values() {
            for omega in s.omega.values() {
                let taus = match (&s.tau, &s.omega_tau) {
                    (Some(t), _) => t.values(),
                    (None, Some(wt)) => wt.values().into_iter().map(|x| x / omega).collect(),
                    (None, None) => Vec::new(),
                };
                for tau in taus {
                    out.push((e0, omega, tau));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub e0: f64,
    pub omega: f64,
    pub tau: f64,
    pub reports: Vec<BoundReport>,
}

pub fn sweep(config: &SweepConfig, settings: &RunSettings) -> Result<Vec<SweepRow>, CliError> {
    let rows = config.row_count();
    if rows > MAX_SWEEP_ROWS {
        return Err(CliError::Config(format!(
            "sweep has {rows} rows, more than the limit of {MAX_SWEEP_ROWS}"
        )));
    }
    let state = settings.state_data()?;
    let points = config.points();
    parallel::try_map(settings.execution, &points, |&(e0, omega, tau)| {
        let pulse = Pulse::cosine(e0, omega, tau)?;
        Ok(SweepRow {
            e0,
            omega,
            tau,
            reports: bounds::all_bounds(&pulse, &state, settings.options)?,
        })
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut header: Vec<String> = ["E0", "omega", "tau"].map(String::from).to_vec();
    for kind in BoundKind::ALL {
        header.push(format!("{kind}_raw"));
        header.push(format!("{kind}_clipped"));
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![fmt_float(r.e0), fmt_float(r.omega), fmt_float(r.tau)];
            for rep in &r.reports {
                row.push(fmt_opt(rep.raw));
                row.push(fmt_opt(rep.clipped));
            }
            row
        })
        .collect();
    csv_string(&header, &body)
}

// ---------------------------------------------------------------- constants

/// Displacements probed for the ground-state shift-norm summary.
pub const SHIFT_GRID: [f64; 9] = [0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0];

pub fn constants_report(execution: Execution) -> Result<String, CliError> {
    let opt = kato::optimize_resolvent_bound()?;
    let closed = kato::resolvent_constant_closed_form();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# Coulomb resolvent constant ||r^-1 (-Laplacian + 1)^-1||"
    );
    let _ = writeln!(out, "optimized          {:.15}", opt.value);
    let _ = writeln!(out, "closed form        {closed:.15}");
    let _ = writeln!(
        out,
        "optimizer          rho={:.12} R={:.12} sweeps={} |grad|={:.3e}",
        opt.params.rho, opt.params.r, opt.sweeps, opt.stationarity
    );
    let _ = writeln!(
        out,
        "rounded value      {} (rounds down by {:.3e}; not used in bounds)",
        kato::ROUNDED_RESOLVENT_CONSTANT,
        closed - kato::ROUNDED_RESOLVENT_CONSTANT
    );

    let _ = writeln!(out);
    let _ = writeln!(out, "# First-term coefficient K(n,l): T1 <= K tau");
    let states: Vec<HydrogenState> = (1..=10i64)
        .flat_map(|n| {
            (0..n).map(move |l| HydrogenState::new(n, l, 0).expect("valid quantum numbers"))
        })
        .collect();
    let ks = parallel::map(execution, &states, kato::generic_first_term_coefficient);
    for (s, k) in states.iter().zip(&ks) {
        let _ = writeln!(out, "K({},{})  {k:.9}", s.n(), s.l());
    }
    let _ = writeln!(
        out,
        "max K over n<=10   {:.9}",
        ks.iter().copied().fold(0.0, f64::max)
    );

    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "# Ground state: ||(V(x - c e_z) - V(x)) psi_100|| <= sqrt(N2(c) + 2) <= 2"
    );
    let rows = parallel::try_map(execution, &SHIFT_GRID, |&c| -> Result<_, CliError> {
        Ok((
            c,
            hydrogen::coulomb_mean_shifted(c)?,
            hydrogen::coulomb_sq_mean_shifted(c)?,
            hydrogen::shift_difference_norm(c, ShiftNorm::Estimate)?.value,
            hydrogen::shift_difference_norm(c, ShiftNorm::Exact)?.value,
        ))
    })?;
    let _ = writeln!(
        out,
        "{:>8} {:>18} {:>18} {:>18} {:>18}",
        "c", "N1", "N2", "estimate", "exact"
    );
    for (c, n1, n2, est, ex) in &rows {
        let _ = writeln!(
            out,
            "{c:>8} {n1:>18.12} {n2:>18.12} {est:>18.12} {ex:>18.12}"
        );
    }
    let max_est = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    let _ = writeln!(
        out,
        "max estimate over grid {max_est:.12} (<= 2: {})",
        max_est <= 2.0
    );
    Ok(out)
}

/// Parses a `--shift-mode` value.
pub fn parse_shift_mode(s: &str) -> Result<ShiftMode, CliError> {
    s.parse().map_err(CliError::Config)
}
