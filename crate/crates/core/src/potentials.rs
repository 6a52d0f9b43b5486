//! Barrier families and effective nuclear charge models.

use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::interp::MonotoneCubic;
use crate::numeric::roots::golden_max;

/// Coefficients of the single-active-electron charge
/// `Z + a1·e^(−a2·x) + a3·x·e^(−a4·x) + a5·e^(−a6·x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaeParams {
    pub z: f64,
    pub a: [f64; 6],
}

impl SaeParams {
    /// Helium parametrization.
    pub const HELIUM: SaeParams = SaeParams { z: 1.0, a: [1.231, 0.662, -1.325, 1.236, -0.231, 0.480] };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeffModel {
    Constant(f64),
    Sae(SaeParams),
}

impl ZeffModel {
    pub const KULLIE: ZeffModel = ZeffModel::Constant(1.375);
    pub const CLEMENTI: ZeffModel = ZeffModel::Constant(1.6875);
    pub const SAE: ZeffModel = ZeffModel::Sae(SaeParams::HELIUM);

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ZeffModel::Constant(z) => z,
            ZeffModel::Sae(SaeParams { z, a }) => {
                z + a[0] * (-a[1] * x).exp() + a[2] * x * (-a[3] * x).exp() + a[4] * (-a[5] * x).exp()
            }
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match *self {
            ZeffModel::Constant(z) => Some(z),
            ZeffModel::Sae(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ZeffModel::Constant(z) if !(z > 0.0 && z.is_finite()) => {
                Err(Error::domain(format!("constant Z_eff must be positive, got {z}")))
            }
            ZeffModel::Sae(p) if p.a.iter().chain([&p.z]).any(|v| !v.is_finite()) => {
                Err(Error::domain("SAE coefficients must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// A barrier sampled on a grid and interpolated with a monotone cubic.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedBarrier {
    curve: MonotoneCubic,
}

impl TabulatedBarrier {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < Self::MIN_SAMPLES {
            return Err(Error::domain(format!(
                "tabulated barrier needs at least {} samples, got {}",
                Self::MIN_SAMPLES,
                samples.len()
            )));
        }
        if samples.iter().any(|(x, v)| !x.is_finite() || !v.is_finite()) {
            return Err(Error::domain("tabulated samples must be finite"));
        }
        let (xs, vs): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        MonotoneCubic::new(xs, vs)
            .map(|curve| Self { curve })
            .ok_or_else(|| Error::domain("tabulated x values must be strictly increasing"))
    }

    /// Whitespace-separated `x V` pairs in atomic units; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace().map(str::parse::<f64>);
            match (cols.next(), cols.next(), cols.next()) {
                (Some(Ok(x)), Some(Ok(v)), None) => samples.push((x, v)),
                _ => return Err(Error::domain(format!("line {}: expected two numeric columns", lineno + 1))),
            }
        }
        Self::new(&samples)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.curve.x_min(), self.curve.x_max())
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.curve.nodes()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Barrier {
    /// Height `v0` on `[0, length]`, zero elsewhere.
    Rectangular { v0: f64, length: f64 },
    /// `v0 − slope·x` on `[0, length]`, zero elsewhere.
    Triangular { v0: f64, slope: f64, length: f64 },
    /// `−Z_eff(x)/x − field·x` for `x > 0`.
    LaserCoulomb { field: f64, zeff: ZeffModel },
    Tabulated(TabulatedBarrier),
}

/// Bracket for the numeric peak search of x-dependent charge models.
pub const SAE_PEAK_BRACKET: (f64, f64) = (0.1, 100.0);

impl Barrier {
    pub fn rectangular(v0: f64, length: f64) -> Result<Self> {
        let b = Barrier::Rectangular { v0, length };
        b.validate()?;
        Ok(b)
    }

    pub fn triangular(v0: f64, slope: f64, length: f64) -> Result<Self> {
        let b = Barrier::Triangular { v0, slope, length };
        b.validate()?;
        Ok(b)
    }

    pub fn laser_coulomb(field: f64, zeff: ZeffModel) -> Result<Self> {
        let b = Barrier::LaserCoulomb { field, zeff };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            Barrier::Rectangular { v0, length } => {
                positive("v0", *v0)?;
                positive("length", *length)
            }
            Barrier::Triangular { v0, slope, length } => {
                positive("v0", *v0)?;
                positive("slope", *slope)?;
                positive("length", *length)
            }
            Barrier::LaserCoulomb { field, zeff } => {
                positive("field", *field)?;
                zeff.validate()
            }
            Barrier::Tabulated(_) => Ok(()),
        }
    }

    /// Closed interval on which the barrier (and its turning points) live.
    /// For the laser-dressed Coulomb potential the upper end is infinite and
    /// the lower end is excluded.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Barrier::Rectangular { length, .. } | Barrier::Triangular { length, .. } => (0.0, *length),
            Barrier::LaserCoulomb { .. } => (0.0, f64::INFINITY),
            Barrier::Tabulated(t) => t.x_range(),
        }
    }

    /// Rectangular and triangular barriers drop to zero outside their support,
    /// so the support edges act as walls.
    pub(crate) fn has_walls(&self) -> bool {
        matches!(self, Barrier::Rectangular { .. } | Barrier::Triangular { .. })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("x is NaN"));
        }
        match self {
            Barrier::Rectangular { v0, length } => Ok(if (0.0..=*length).contains(&x) { *v0 } else { 0.0 }),
            Barrier::Triangular { v0, slope, length } => {
                Ok(if (0.0..=*length).contains(&x) { v0 - slope * x } else { 0.0 })
            }
            Barrier::LaserCoulomb { field, zeff } => {
                if x > 0.0 {
                    Ok(-zeff.eval(x) / x - field * x)
                } else {
                    Err(Error::domain(format!("laser-dressed Coulomb potential needs x > 0, got {x}")))
                }
            }
            Barrier::Tabulated(t) => t.curve.eval(x).ok_or_else(|| {
                let (lo, hi) = t.x_range();
                Error::domain(format!("x = {x} outside tabulated range [{lo}, {hi}]"))
            }),
        }
    }

    /// Location and height of the barrier maximum.
    pub fn peak(&self) -> Result<(f64, f64)> {
        match self {
            Barrier::Rectangular { v0, length } => Ok((0.5 * length, *v0)),
            Barrier::Triangular { v0, .. } => Ok((0.0, *v0)),
            Barrier::LaserCoulomb { field, zeff } => match zeff.constant_value() {
                Some(z) => Ok(((z / field).sqrt(), -2.0 * (z * field).sqrt())),
                None => {
                    let (lo, hi) = SAE_PEAK_BRACKET;
                    let (x, v) = golden_max(|x| -zeff.eval(x) / x - field * x, lo, hi, 1e-12);
                    if x - lo < 1e-6 || hi - x < 1e-6 {
                        return Err(Error::NoPeak);
                    }
                    Ok((x, v))
                }
            },
            Barrier::Tabulated(t) => {
                let (i_max, (x, v)) = t
                    .samples()
                    .enumerate()
                    .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                    .expect("at least eight samples");
                if i_max == 0 || i_max + 1 == t.samples().count() {
                    return Err(Error::NoPeak);
                }
                Ok((x, v))
            }
        }
    }

    /// Potential level of the flat leads the barrier is embedded between,
    /// `None` when the potential has no finite asymptote.
    pub fn lead_levels(&self) -> Option<(f64, f64)> {
        match self {
            Barrier::Rectangular { .. } | Barrier::Triangular { .. } => Some((0.0, 0.0)),
            Barrier::LaserCoulomb { .. } => None,
            Barrier::Tabulated(t) => {
                let (lo, hi) = t.x_range();
                Some((t.curve.eval(lo)?, t.curve.eval(hi)?))
            }
        }
    }
}
