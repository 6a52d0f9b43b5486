//! Reproduction harness: the helium turning-point/time table, laser-field
//! scans, and electron-transfer scans over rectangular barriers.

use std::fmt;
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::roots::bisect;
use crate::output::{fmt_float, fmt_opt, Tabular};
use crate::potentials::{Barrier, ZeffModel};
use crate::times::{ett_he, ett_rectangular, rectangular_classical_time, TimesReport};
use crate::turning::TunnelingProblem;
use crate::units::{angstrom_to_au, ev_to_au, to_attoseconds, to_femtoseconds};
use crate::wkb::{WkbQuantities, DEFAULT_QUAD_TOL};

/// First ionization potential of helium, as the bound electron energy (a.u.).
pub const HE_ENERGY: f64 = -0.904;
pub const TABLE1_FIELDS: [f64; 2] = [0.04, 0.11];
/// Residual at which the reference table's root iteration stopped.
pub const REFERENCE_ROOT_RESIDUAL: f64 = 1e-4;
/// Relative spread under which the three charge models count as agreeing.
pub const LOW_FIELD_AGREEMENT: f64 = 0.10;
/// Half-period of nuclear vibrations below 3000 cm⁻¹.
pub const VIBRATION_THRESHOLD_FS: f64 = 5.0;
pub const DEFAULT_ET_ENERGY_EV: f64 = 1.0;
pub const DEFAULT_ET_DELTAS_EV: [f64; 5] = [0.05, 0.1, 0.2, 0.5, 1.0];
pub const DEFAULT_HE_STEPS: usize = 15;

pub fn default_et_lengths_angstrom() -> Vec<f64> {
    (5..=30).map(f64::from).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HeModel {
    #[serde(rename = "SAE")]
    Sae,
    Kullie,
    Clementi,
}

impl HeModel {
    pub const ALL: [HeModel; 3] = [HeModel::Sae, HeModel::Kullie, HeModel::Clementi];

    pub fn zeff(self) -> ZeffModel {
        match self {
            HeModel::Sae => ZeffModel::SAE,
            HeModel::Kullie => ZeffModel::KULLIE,
            HeModel::Clementi => ZeffModel::CLEMENTI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeModel::Sae => "SAE",
            HeModel::Kullie => "Kullie",
            HeModel::Clementi => "Clementi",
        }
    }
}

impl fmt::Display for HeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sae" => Ok(HeModel::Sae),
            "kullie" => Ok(HeModel::Kullie),
            "clementi" => Ok(HeModel::Clementi),
            other => Err(Error::domain(format!("unknown charge model '{other}' (expected sae, kullie or clementi)"))),
        }
    }
}

fn he_problem(model: HeModel, field: f64) -> Result<TunnelingProblem> {
    TunnelingProblem::new(Barrier::laser_coulomb(field, model.zeff())?, HE_ENERGY, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub model: HeModel,
    pub field: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub tau_c_as: f64,
    pub ett_as: f64,
}

impl Tabular for Table1Row {
    fn header() -> &'static [&'static str] {
        &["model", "field", "x_left", "x_right", "tau_c_as", "ett_as"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.model.to_string(),
            fmt_float(self.field),
            fmt_float(self.x_left),
            fmt_float(self.x_right),
            fmt_float(self.tau_c_as),
            fmt_float(self.ett_as),
        ]
    }
}

/// Six rows, model-major, each model at both table fields.
pub fn run_table1() -> Result<Vec<Table1Row>> {
    HeModel::ALL
        .iter()
        .flat_map(|&m| TABLE1_FIELDS.iter().map(move |&f| (m, f)))
        .map(|(model, field)| {
            let problem = he_problem(model, field)?;
            let w = WkbQuantities::compute(&problem, DEFAULT_QUAD_TOL)?;
            Ok(Table1Row {
                model,
                field,
                x_left: problem.x_left(),
                x_right: problem.x_right(),
                tau_c_as: to_attoseconds(w.tau_c),
                ett_as: to_attoseconds(ett_he(w.tau_c, w.phi)),
            })
        })
        .collect()
}

/// Published values the table is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Reference {
    pub model: HeModel,
    pub field: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub tau_c_as: f64,
    pub ett_as: f64,
}

pub const TABLE1_REFERENCE: [Table1Reference; 6] = [
    Table1Reference { model: HeModel::Sae, field: 0.04, x_left: 1.24, x_right: 21.43, tau_c_as: 833.82, ett_as: 113.08 },
    Table1Reference { model: HeModel::Sae, field: 0.11, x_left: 1.39, x_right: 6.90, tau_c_as: 312.24, ett_as: 22.20 },
    Table1Reference { model: HeModel::Kullie, field: 0.04, x_left: 1.64, x_right: 20.96, tau_c_as: 850.73, ett_as: 111.75 },
    Table1Reference { model: HeModel::Kullie, field: 0.11, x_left: 2.02, x_right: 6.20, tau_c_as: 322.72, ett_as: 16.85 },
    Table1Reference { model: HeModel::Clementi, field: 0.04, x_left: 2.05, x_right: 20.55, tau_c_as: 856.49, ett_as: 109.14 },
    Table1Reference { model: HeModel::Clementi, field: 0.11, x_left: 2.87, x_right: 5.35, tau_c_as: 326.50, ett_as: 6.54 },
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn accepts(self, computed: f64, reference: f64) -> bool {
        match self {
            Tolerance::Absolute(t) => (computed - reference).abs() <= t,
            Tolerance::Relative(t) => ((computed - reference) / reference).abs() <= t,
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Absolute(t) => write!(f, "±{t}"),
            Tolerance::Relative(t) => write!(f, "±{}%", t * 100.0),
        }
    }
}

/// Acceptance band of one table cell.
pub fn table1_tolerance(model: HeModel, field: f64, quantity: &str) -> Tolerance {
    match quantity {
        "x_left" | "x_right" => Tolerance::Absolute(0.01),
        "tau_c_as" => Tolerance::Relative(0.01),
        _ if model == HeModel::Clementi && field > 0.1 => Tolerance::Relative(0.05),
        _ => Tolerance::Relative(0.02),
    }
}

/// What a time cell's deviation is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attribution {
    /// Within band; nothing to attribute.
    None,
    /// Reference lies inside the spread produced by a 1e−4 root residual.
    RootTolerance,
    /// Reference lies inside the quadrature error estimate.
    Quadrature,
    Unexplained,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCheck {
    pub model: HeModel,
    pub field: f64,
    pub quantity: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
    /// Value obtained with the turning points pulled in to the reference
    /// table's `V − E = 1e−4` stopping residual (time cells only).
    pub loose_root_value: Option<f64>,
    pub attribution: Attribution,
}

// τ_c and ETT with the turning points moved inside the barrier to where V − E
// equals the looser residual.
fn loose_root_times(model: HeModel, field: f64) -> Result<(f64, f64)> {
    let problem = he_problem(model, field)?;
    let barrier = problem.barrier().clone();
    let (x_peak, _) = barrier.peak()?;
    let g = |x: f64| barrier.eval(x).map(|v| v - HE_ENERGY - REFERENCE_ROOT_RESIDUAL).unwrap_or(f64::NAN);
    let to_err = |_| Error::BracketFailure { lo: problem.x_left(), hi: problem.x_right() };
    let l = bisect(g, problem.x_left(), x_peak).map_err(to_err)?;
    let r = bisect(g, x_peak, problem.x_right()).map_err(to_err)?;
    let inner = TunnelingProblem::from_parts_unchecked(barrier, HE_ENERGY, 1.0, l, r);
    let w = WkbQuantities::compute(&inner, DEFAULT_QUAD_TOL)?;
    Ok((to_attoseconds(w.tau_c), to_attoseconds(ett_he(w.tau_c, w.phi))))
}

fn quadrature_spread(model: HeModel, field: f64) -> Result<(f64, f64)> {
    let problem = he_problem(model, field)?;
    let a = WkbQuantities::compute(&problem, DEFAULT_QUAD_TOL)?;
    let b = WkbQuantities::compute(&problem, 1e-13)?;
    Ok((
        to_attoseconds((a.tau_c - b.tau_c).abs()),
        to_attoseconds((ett_he(a.tau_c, a.phi) - ett_he(b.tau_c, b.phi)).abs()),
    ))
}

/// Cell-by-cell comparison of computed rows with [`TABLE1_REFERENCE`].
pub fn check_table1(rows: &[Table1Row]) -> Result<Vec<CellCheck>> {
    let mut checks = Vec::with_capacity(rows.len() * 4);
    for row in rows {
        let reference = TABLE1_REFERENCE
            .iter()
            .find(|r| r.model == row.model && r.field == row.field)
            .ok_or_else(|| Error::domain(format!("no reference for {} at field {}", row.model, row.field)))?;
        let (loose_tau, loose_ett) = loose_root_times(row.model, row.field)?;
        let (quad_tau, quad_ett) = quadrature_spread(row.model, row.field)?;
        let cells = [
            ("x_left", row.x_left, reference.x_left, None, 0.0),
            ("x_right", row.x_right, reference.x_right, None, 0.0),
            ("tau_c_as", row.tau_c_as, reference.tau_c_as, Some(loose_tau), quad_tau),
            ("ett_as", row.ett_as, reference.ett_as, Some(loose_ett), quad_ett),
        ];
        for (quantity, computed, expected, loose, quad_err) in cells {
            let tolerance = table1_tolerance(row.model, row.field, quantity);
            let pass = tolerance.accepts(computed, expected);
            let attribution = match loose {
                _ if pass => Attribution::None,
                _ if (computed - expected).abs() <= quad_err => Attribution::Quadrature,
                Some(l) if (expected - computed) * (expected - l) <= 0.0 => Attribution::RootTolerance,
                _ => Attribution::Unexplained,
            };
            checks.push(CellCheck {
                model: row.model,
                field: row.field,
                quantity,
                computed,
                reference: expected,
                tolerance,
                pass,
                loose_root_value: loose,
                attribution,
            });
        }
    }
    Ok(checks)
}

/// Keldysh parameter `γ = ω·√(2·I_p)/𝓔`.
pub fn keldysh_gamma(omega: f64, ionization_potential: f64, field: f64) -> Result<f64> {
    if !(omega > 0.0 && ionization_potential > 0.0 && field > 0.0) {
        return Err(Error::domain("Keldysh parameter needs positive omega, ionization potential and field"));
    }
    Ok(omega * (2.0 * ionization_potential).sqrt() / field)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub field: f64,
    pub model: HeModel,
    pub ett_as: f64,
    pub tau_c_as: f64,
    /// `|E|/𝓔`, the width proxy used by the attoclock analysis.
    pub exp_width: f64,
    /// `x_R − x_L`.
    pub true_width: f64,
    pub phi: f64,
    pub keldysh_gamma: Option<f64>,
}

impl Tabular for ScanPoint {
    fn header() -> &'static [&'static str] {
        &["field", "model", "ett_as", "tau_c_as", "exp_width", "true_width", "phi", "keldysh_gamma"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            fmt_float(self.field),
            self.model.to_string(),
            fmt_float(self.ett_as),
            fmt_float(self.tau_c_as),
            fmt_float(self.exp_width),
            fmt_float(self.true_width),
            fmt_float(self.phi),
            fmt_opt(self.keldysh_gamma),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub field: f64,
    pub model: HeModel,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanOutcome {
    pub points: Vec<ScanPoint>,
    pub skipped: Vec<SkippedPoint>,
}

/// Evenly spaced fields, endpoints included.
pub fn field_grid(field_min: f64, field_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(field_min > 0.0 && field_max > field_min && steps >= 2) {
        return Err(Error::domain(format!(
            "need 0 < field_min < field_max and steps >= 2, got {field_min}, {field_max}, {steps}"
        )));
    }
    let h = (field_max - field_min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { field_max } else { field_min + h * i as f64 }).collect())
}

/// Helium ionization scan over the peak field for the requested models.
/// Points computed in parallel, returned in field-major grid order.
pub fn he_scan(field_min: f64, field_max: f64, steps: usize, models: &[HeModel], omega: Option<f64>) -> Result<ScanOutcome> {
    if models.is_empty() {
        return Err(Error::domain("at least one charge model is required"));
    }
    if let Some(w) = omega {
        if !(w > 0.0) {
            return Err(Error::domain(format!("omega must be positive, got {w}")));
        }
    }
    let grid: Vec<(f64, HeModel)> =
        field_grid(field_min, field_max, steps)?.into_iter().flat_map(|f| models.iter().map(move |&m| (f, m))).collect();

    let results: Vec<Result<ScanPoint>> = grid
        .par_iter()
        .map(|&(field, model)| {
            let problem = he_problem(model, field)?;
            let w = WkbQuantities::compute(&problem, DEFAULT_QUAD_TOL)?;
            Ok(ScanPoint {
                field,
                model,
                ett_as: to_attoseconds(ett_he(w.tau_c, w.phi)),
                tau_c_as: to_attoseconds(w.tau_c),
                exp_width: HE_ENERGY.abs() / field,
                true_width: problem.width(),
                phi: w.phi,
                keldysh_gamma: omega.map(|w| keldysh_gamma(w, HE_ENERGY.abs(), field)).transpose()?,
            })
        })
        .collect();

    let mut outcome = ScanOutcome::default();
    for (&(field, model), res) in grid.iter().zip(results) {
        match res {
            Ok(p) => outcome.points.push(p),
            Err(error) => {
                warn!("skipping {model} at field {field}: {error}");
                outcome.skipped.push(SkippedPoint { field, model, error });
            }
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtScanPoint {
    /// `V0 − E` in eV.
    pub delta_e_eff: f64,
    pub length_angstrom: f64,
    pub tau_c_fs: f64,
    pub ett_fs: f64,
    /// Entropic time at or above the vibrational half-period.
    pub comparable_flag: bool,
}

impl Tabular for EtScanPoint {
    fn header() -> &'static [&'static str] {
        &["delta_e_eff", "length_angstrom", "tau_c_fs", "ett_fs", "comparable_flag"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            fmt_float(self.delta_e_eff),
            fmt_float(self.length_angstrom),
            fmt_float(self.tau_c_fs),
            fmt_float(self.ett_fs),
            self.comparable_flag.to_string(),
        ]
    }
}

/// Electron-transfer scan: rectangular barriers of height `E + ΔE_eff` and
/// width `L`, timed with the exact rectangular transmission.
pub fn et_scan(energy_ev: f64, delta_e_grid_ev: &[f64], length_grid_angstrom: &[f64]) -> Result<Vec<EtScanPoint>> {
    if !(energy_ev > 0.0) {
        return Err(Error::domain(format!("electron energy must be positive, got {energy_ev} eV")));
    }
    if let Some(d) = delta_e_grid_ev.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::domain(format!("effective barrier ΔE must be positive, got {d} eV")));
    }
    if let Some(l) = length_grid_angstrom.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::domain(format!("tunneling distance must be positive, got {l} Å")));
    }
    let energy = ev_to_au(energy_ev);
    let mut points = Vec::with_capacity(delta_e_grid_ev.len() * length_grid_angstrom.len());
    for &delta in delta_e_grid_ev {
        let v0 = energy + ev_to_au(delta);
        for &length_a in length_grid_angstrom {
            let length = angstrom_to_au(length_a);
            let tau_c = rectangular_classical_time(energy, v0, length, 1.0);
            let ett = ett_rectangular(energy, v0, length, 1.0)?;
            let ett_fs = to_femtoseconds(ett);
            points.push(EtScanPoint {
                delta_e_eff: delta,
                length_angstrom: length_a,
                tau_c_fs: to_femtoseconds(tau_c),
                ett_fs,
                comparable_flag: ett_fs >= VIBRATION_THRESHOLD_FS,
            });
        }
    }
    Ok(points)
}

/// For each ΔE in the scan, the shortest distance at which the entropic time
/// reaches the vibrational threshold (`None` if it never does on the grid).
pub fn comparable_contour(points: &[EtScanPoint]) -> Vec<(f64, Option<f64>)> {
    let mut deltas: Vec<f64> = points.iter().map(|p| p.delta_e_eff).collect();
    deltas.dedup();
    deltas
        .into_iter()
        .map(|d| {
            let first = points
                .iter()
                .filter(|p| p.delta_e_eff == d && p.comparable_flag)
                .map(|p| p.length_angstrom)
                .min_by(f64::total_cmp);
            (d, first)
        })
        .collect()
}

/// Convenience wrapper mirroring [`TimesReport::compute`] for one helium configuration.
pub fn he_times(model: HeModel, field: f64) -> Result<TimesReport> {
    TimesReport::compute(&he_problem(model, field)?, DEFAULT_QUAD_TOL)
}
