//! `ett`: tunneling-time calculations and reproduction scans from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::error;
use serde::Serialize;

use ett_core::experiments::{
    check_table1, comparable_contour, default_et_lengths_angstrom, et_scan, he_scan, run_table1, CellCheck,
    DEFAULT_ET_DELTAS_EV, DEFAULT_ET_ENERGY_EV, DEFAULT_HE_STEPS,
};
use ett_core::output::{fmt_float, fmt_opt, write_csv, write_json, Tabular};
use ett_core::transmission::{pt_numeric, pt_rectangular_exact, DEFAULT_SLICES};
use ett_core::units::{angstrom_to_au, au_to_ev, ev_to_au, to_attoseconds, to_femtoseconds};
use ett_core::{Barrier, HeModel, TabulatedBarrier, TimesReport, TunnelingProblem, ZeffModel, DEFAULT_QUAD_TOL};

/// Entropic, classical, phase and dwell tunneling times for 1-D barriers.
///
/// Inputs are in atomic units unless `--unit` says otherwise.
#[derive(Debug, Parser)]
#[command(name = "ett", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every tunneling time for one barrier and energy.
    Times(TimesArgs),
    /// Helium turning points and times at fields 0.04 and 0.11, checked against the reference values.
    Table1(OutputArgs),
    /// Helium ionization scan over the peak laser field.
    HeScan(HeScanArgs),
    /// Electron-transfer scan over rectangular barriers.
    EtScan(EtScanArgs),
    /// Transfer-matrix transmission for one barrier and energy.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BarrierKind {
    Rect,
    Tri,
    LaserCoulomb,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Unit {
    /// Energies (v0, energy, tabulated V) in electronvolts.
    Ev,
    /// Lengths (length, tabulated x) in ångström.
    Angstrom,
    /// Lab-unit time columns in attoseconds (the default).
    As,
    /// Lab-unit time columns in femtoseconds.
    Fs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file [default: standard output].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BarrierArgs {
    /// Barrier shape.
    #[arg(long, value_enum)]
    barrier: BarrierKind,
    /// Barrier height (rect, tri).
    #[arg(long)]
    v0: Option<f64>,
    /// Barrier width (rect, tri).
    #[arg(long)]
    length: Option<f64>,
    /// Ramp slope in a.u. (tri).
    #[arg(long)]
    slope: Option<f64>,
    /// Peak laser field in a.u. (laser-coulomb).
    #[arg(long)]
    field: Option<f64>,
    /// Effective charge: sae, kullie, clementi or a number (laser-coulomb).
    #[arg(long, default_value = "sae")]
    zeff: String,
    /// Two-column `x V` sample file (tabulated).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Particle energy.
    #[arg(long, allow_negative_numbers = true)]
    energy: f64,
    /// Particle mass.
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Unit overrides, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    unit: Vec<Unit>,
}

#[derive(Debug, Args)]
struct TimesArgs {
    #[command(flatten)]
    barrier: BarrierArgs,
    /// Relative tolerance of the action and time integrals.
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    quad_tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    barrier: BarrierArgs,
    /// Number of constant-potential slices.
    #[arg(long, default_value_t = DEFAULT_SLICES)]
    slices: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct HeScanArgs {
    /// Lowest peak field (a.u.).
    #[arg(long, default_value_t = 0.04)]
    field_min: f64,
    /// Highest peak field (a.u.).
    #[arg(long, default_value_t = 0.11)]
    field_max: f64,
    /// Number of fields, endpoints included.
    #[arg(long, default_value_t = DEFAULT_HE_STEPS)]
    steps: usize,
    /// Charge models, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "sae,kullie,clementi")]
    models: Vec<String>,
    /// Laser angular frequency (a.u.); adds the Keldysh parameter column.
    #[arg(long)]
    omega: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct EtScanArgs {
    /// Electron energy (eV).
    #[arg(long, default_value_t = DEFAULT_ET_ENERGY_EV)]
    energy: f64,
    /// Effective barriers V0 − E (eV), comma separated [default: 0.05,0.1,0.2,0.5,1].
    #[arg(long, value_delimiter = ',')]
    delta_e: Vec<f64>,
    /// Tunneling distances (Å), comma separated [default: 5 to 30 in steps of 1].
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

enum Failure {
    Usage(String),
    Numeric(ett_core::Error),
    Io(anyhow::Error),
    Mismatch(usize),
}

impl From<ett_core::Error> for Failure {
    fn from(e: ett_core::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn require(value: Option<f64>, flag: &str, barrier: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --barrier {barrier}")))
}

fn parse_zeff(s: &str) -> Result<ZeffModel, Failure> {
    if let Ok(model) = s.parse::<HeModel>() {
        return Ok(model.zeff());
    }
    s.parse::<f64>()
        .map(ZeffModel::Constant)
        .map_err(|_| Failure::Usage(format!("--zeff expects sae, kullie, clementi or a number, got '{s}'")))
}

struct Scales {
    energy: f64,
    length: f64,
}

impl BarrierArgs {
    fn scales(&self) -> Scales {
        Scales {
            energy: if self.unit.contains(&Unit::Ev) { ev_to_au(1.0) } else { 1.0 },
            length: if self.unit.contains(&Unit::Angstrom) { angstrom_to_au(1.0) } else { 1.0 },
        }
    }

    fn energy_au(&self) -> f64 {
        self.energy * self.scales().energy
    }

    fn build(&self) -> Result<Barrier, Failure> {
        let s = self.scales();
        let barrier = match self.barrier {
            BarrierKind::Rect => Barrier::rectangular(
                require(self.v0, "v0", "rect")? * s.energy,
                require(self.length, "length", "rect")? * s.length,
            )?,
            BarrierKind::Tri => Barrier::triangular(
                require(self.v0, "v0", "tri")? * s.energy,
                require(self.slope, "slope", "tri")?,
                require(self.length, "length", "tri")? * s.length,
            )?,
            BarrierKind::LaserCoulomb => {
                Barrier::laser_coulomb(require(self.field, "field", "laser-coulomb")?, parse_zeff(&self.zeff)?)?
            }
            BarrierKind::Tabulated => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Failure::Usage("--file is required for --barrier tabulated".into()))?;
                let raw = TabulatedBarrier::from_file(path)?;
                let samples: Vec<(f64, f64)> = raw.samples().map(|(x, v)| (x * s.length, v * s.energy)).collect();
                Barrier::Tabulated(TabulatedBarrier::new(&samples)?)
            }
        };
        Ok(barrier)
    }

    fn time_unit(&self) -> TimeUnit {
        if self.unit.contains(&Unit::Fs) {
            TimeUnit::Fs
        } else {
            TimeUnit::As
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum TimeUnit {
    As,
    Fs,
}

impl TimeUnit {
    fn convert(self, t: f64) -> f64 {
        match self {
            TimeUnit::As => to_attoseconds(t),
            TimeUnit::Fs => to_femtoseconds(t),
        }
    }

    fn name(self) -> &'static str {
        match self {
            TimeUnit::As => "as",
            TimeUnit::Fs => "fs",
        }
    }
}

/// Times report with lab-unit copies of the times and the energy.
#[derive(Debug, Serialize)]
struct TimesRow {
    #[serde(flatten)]
    report: TimesReport,
    energy_ev: f64,
    time_unit: TimeUnit,
    ett_lab: f64,
    tau_c_lab: f64,
    phase_time_lab: Option<f64>,
    dwell_time_lab: Option<f64>,
}

impl Tabular for TimesRow {
    fn header() -> &'static [&'static str] {
        &[
            "energy", "mass", "x_left", "x_right", "ett", "tau_c", "phase_time", "dwell_time", "p_t_used", "p_t_kind",
            "p_t_wkb", "p_t_exact", "phi", "p_m", "entropy_over_kb", "inv_kbt", "kBT", "positivity_flag", "energy_ev",
            "time_unit", "ett_lab", "tau_c_lab", "phase_time_lab", "dwell_time_lab",
        ]
    }

    fn record(&self) -> Vec<String> {
        let r = &self.report;
        let kind = serde_json::to_value(r.p_t_kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        vec![
            fmt_float(r.energy),
            fmt_float(r.mass),
            fmt_float(r.x_left),
            fmt_float(r.x_right),
            fmt_float(r.ett),
            fmt_float(r.tau_c),
            fmt_opt(r.phase_time),
            fmt_opt(r.dwell_time),
            fmt_float(r.p_t_used),
            kind,
            fmt_float(r.p_t_wkb),
            fmt_opt(r.p_t_exact),
            fmt_float(r.phi),
            fmt_float(r.p_m),
            fmt_float(r.entropy_over_kb),
            fmt_float(r.inv_kbt),
            fmt_float(r.kbt),
            r.positivity_flag.to_string(),
            fmt_float(self.energy_ev),
            self.time_unit.name().to_string(),
            fmt_float(self.ett_lab),
            fmt_float(self.tau_c_lab),
            fmt_opt(self.phase_time_lab),
            fmt_opt(self.dwell_time_lab),
        ]
    }
}

#[derive(Debug, Serialize)]
struct OracleRow {
    p_t: f64,
    p_r: f64,
    slices: usize,
    /// Transmission with twice the slices; the gap estimates discretization error.
    p_t_doubled: f64,
    convergence_gap: f64,
    p_t_exact: Option<f64>,
}

impl Tabular for OracleRow {
    fn header() -> &'static [&'static str] {
        &["p_t", "p_r", "slices", "p_t_doubled", "convergence_gap", "p_t_exact"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            fmt_float(self.p_t),
            fmt_float(self.p_r),
            self.slices.to_string(),
            fmt_float(self.p_t_doubled),
            fmt_float(self.convergence_gap),
            fmt_opt(self.p_t_exact),
        ]
    }
}

fn emit<T: Tabular>(rows: &[T], out: &OutputArgs) -> Outcome {
    let sink: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match out.format {
        Format::Csv => write_csv(rows, &mut sink),
        Format::Json => write_json(rows, &mut sink),
    }
    .and_then(|_| sink.flush())
    .context("writing output")?;
    Ok(())
}

fn cmd_times(args: &TimesArgs) -> Outcome {
    let b = &args.barrier;
    let problem = TunnelingProblem::new(b.build()?, b.energy_au(), b.mass)?;
    let report = TimesReport::compute(&problem, args.quad_tol)?;
    let unit = b.time_unit();
    let row = TimesRow {
        energy_ev: au_to_ev(report.energy),
        time_unit: unit,
        ett_lab: unit.convert(report.ett),
        tau_c_lab: unit.convert(report.tau_c),
        phase_time_lab: report.phase_time.map(|t| unit.convert(t)),
        dwell_time_lab: report.dwell_time.map(|t| unit.convert(t)),
        report,
    };
    emit(&[row], &args.out)
}

fn cmd_oracle(args: &OracleArgs) -> Outcome {
    let b = &args.barrier;
    let barrier = b.build()?;
    let (energy, mass) = (b.energy_au(), b.mass);
    let r = pt_numeric(&barrier, energy, mass, args.slices)?;
    let doubled = pt_numeric(&barrier, energy, mass, 2 * args.slices)?;
    let p_t_exact = match barrier {
        Barrier::Rectangular { v0, length } if energy > 0.0 && energy < v0 => {
            Some(pt_rectangular_exact(energy, v0, (2.0 * mass * (v0 - energy)).sqrt() * length)?)
        }
        _ => None,
    };
    let row = OracleRow {
        p_t: r.p_t,
        p_r: r.p_r,
        slices: r.grid_points,
        p_t_doubled: doubled.p_t,
        convergence_gap: (doubled.p_t - r.p_t).abs(),
        p_t_exact,
    };
    emit(&[row], &args.out)
}

fn describe(c: &CellCheck) -> String {
    format!(
        "{:<8} {:<5} {:<9} {:>10.4} {:>10.4} {:>+9.4}% {:>8} {}{}",
        c.model.name(),
        c.field,
        c.quantity,
        c.computed,
        c.reference,
        100.0 * (c.computed - c.reference) / c.reference,
        c.tolerance.to_string(),
        if c.pass { "pass" } else { "FAIL" },
        c.loose_root_value.map(|v| format!("  loose-root {v:.4}")).unwrap_or_default(),
    )
}

fn cmd_table1(out: &OutputArgs) -> Outcome {
    let rows = run_table1()?;
    emit(&rows, out)?;
    let checks = check_table1(&rows)?;
    let mut diag = io::stderr().lock();
    writeln!(diag, "{:<8} {:<5} {:<9} {:>10} {:>10} {:>10} {:>8} result", "model", "field", "quantity", "computed", "reference", "deviation", "band")
        .ok();
    for c in &checks {
        writeln!(diag, "{}", describe(c)).ok();
    }
    let failed: Vec<&CellCheck> = checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        writeln!(diag, "{} {} {}: deviation attributed to {:?}", c.model, c.field, c.quantity, c.attribution).ok();
    }
    writeln!(diag, "{}/{} cells within tolerance", checks.len() - failed.len(), checks.len()).ok();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(failed.len()))
    }
}

fn cmd_he_scan(args: &HeScanArgs) -> Outcome {
    let models = args
        .models
        .iter()
        .map(|s| s.parse::<HeModel>().map_err(|e| Failure::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if !(args.field_min > 0.0 && args.field_max > args.field_min) || args.steps < 2 {
        return Err(Failure::Usage("need 0 < --field-min < --field-max and --steps >= 2".into()));
    }
    let scan = he_scan(args.field_min, args.field_max, args.steps, &models, args.omega)?;
    if !scan.skipped.is_empty() {
        log::warn!("{} of {} grid points skipped", scan.skipped.len(), scan.skipped.len() + scan.points.len());
    }
    emit(&scan.points, &args.out)
}

fn cmd_et_scan(args: &EtScanArgs) -> Outcome {
    let deltas = if args.delta_e.is_empty() { DEFAULT_ET_DELTAS_EV.to_vec() } else { args.delta_e.clone() };
    let lengths = if args.lengths.is_empty() { default_et_lengths_angstrom() } else { args.lengths.clone() };
    let points = et_scan(args.energy, &deltas, &lengths)?;
    for (delta, length) in comparable_contour(&points) {
        match length {
            Some(l) => log::info!("ΔE = {delta} eV: entropic time reaches 5 fs from L = {l} Å"),
            None => log::info!("ΔE = {delta} eV: entropic time stays below 5 fs on the grid"),
        }
    }
    emit(&points, &args.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Times(a) => cmd_times(a),
        Command::Table1(o) => cmd_table1(o),
        Command::HeScan(a) => cmd_he_scan(a),
        Command::EtScan(a) => cmd_et_scan(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: UsageError: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(3)
        }
        Err(Failure::Mismatch(n)) => {
            eprintln!("error: ReferenceMismatch: {n} cells outside tolerance");
            ExitCode::from(3)
        }
        Err(Failure::Io(e))
            if e.root_cause().downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(Failure::Io(e)) => {
            error!("{e:#}");
            eprintln!("error: IoError: {e:#}");
            ExitCode::from(1)
        }
    }
}
