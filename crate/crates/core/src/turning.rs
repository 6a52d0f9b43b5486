//! Classical turning points `x_L < x_R` with `V(x) = E`.

use log::debug;

use crate::error::{Error, Result};
use crate::numeric::roots::{bisect, RootError};
use crate::potentials::{Barrier, ZeffModel};

/// Residual `|V(x) − E|` every resolved turning point must meet.
pub const ROOT_TOL: f64 = 1e-10;
/// Cap on the self-consistent charge iteration.
pub const MAX_ITERATIONS: usize = 1000;

/// A fully specified tunneling instance: energy, mass, barrier and the
/// forbidden interval `[x_left, x_right]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TunnelingProblem {
    energy: f64,
    mass: f64,
    barrier: Barrier,
    x_left: f64,
    x_right: f64,
}

impl TunnelingProblem {
    /// Validates the inputs and resolves the turning points with the solver
    /// suited to the barrier family.
    pub fn new(barrier: Barrier, energy: f64, mass: f64) -> Result<Self> {
        barrier.validate()?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        if !energy.is_finite() {
            return Err(Error::domain(format!("energy must be finite, got {energy}")));
        }
        let (x_left, x_right) = resolve_turning_points(&barrier, energy)?;
        Ok(Self { energy, mass, barrier, x_left, x_right })
    }

    /// Accepts caller-supplied turning points after checking that each one
    /// is a root of `V − E` (or a wall of a rectangular/triangular barrier).
    pub fn with_turning_points(barrier: Barrier, energy: f64, mass: f64, x_left: f64, x_right: f64) -> Result<Self> {
        barrier.validate()?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        if !(x_left < x_right) {
            return Err(Error::domain(format!("need x_left < x_right, got {x_left} and {x_right}")));
        }
        for x in [x_left, x_right] {
            let gap = barrier.eval(x)? - energy;
            let on_wall = barrier.has_walls() && gap > 0.0 && {
                let (lo, hi) = barrier.domain();
                x == lo || x == hi
            };
            if gap.abs() > ROOT_TOL && !on_wall {
                return Err(Error::domain(format!("x = {x} is not a turning point (V − E = {gap:e})")));
            }
        }
        Ok(Self { energy, mass, barrier, x_left, x_right })
    }

    pub(crate) fn from_parts_unchecked(barrier: Barrier, energy: f64, mass: f64, x_left: f64, x_right: f64) -> Self {
        Self { energy, mass, barrier, x_left, x_right }
    }

    /// Same barrier and mass at a different energy, with turning points re-resolved.
    pub fn at_energy(&self, energy: f64) -> Result<Self> {
        Self::new(self.barrier.clone(), energy, self.mass)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn barrier(&self) -> &Barrier {
        &self.barrier
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn width(&self) -> f64 {
        self.x_right - self.x_left
    }
}

pub fn resolve_turning_points(barrier: &Barrier, energy: f64) -> Result<(f64, f64)> {
    match barrier {
        Barrier::LaserCoulomb { field, zeff: ZeffModel::Constant(z) } => turning_points_quadratic(*z, energy, *field),
        Barrier::LaserCoulomb { zeff: ZeffModel::Sae(_), .. } => turning_points_selfconsistent(barrier, energy),
        _ => turning_points_bracketed(barrier, energy),
    }
}

/// Both roots of `field·x² − |E|·x + z = 0`, ascending.
///
/// This is the zero set of `−z/x − field·x − E` for `E < 0`, `x > 0`.
pub fn turning_points_quadratic(z: f64, energy: f64, field: f64) -> Result<(f64, f64)> {
    if !(z > 0.0 && field > 0.0) {
        return Err(Error::domain(format!("need z > 0 and field > 0, got z = {z}, field = {field}")));
    }
    let v_max = -2.0 * (z * field).sqrt();
    let disc = energy * energy - 4.0 * z * field;
    if energy >= 0.0 || disc <= 0.0 {
        return Err(Error::OverBarrier { energy, v_max });
    }
    // Cancellation-free pair: q·(z/q) = z/field·field.
    let q = 0.5 * (-energy + disc.sqrt());
    Ok((z / q, q / field))
}

fn quadratic_branch(z: f64, energy: f64, field: f64, right: bool) -> Option<f64> {
    let disc = energy * energy - 4.0 * z * field;
    if disc <= 0.0 {
        return None;
    }
    let q = 0.5 * (-energy + disc.sqrt());
    Some(if right { q / field } else { z / q })
}

/// Turning points for an x-dependent charge, found by iterating the quadratic
/// root with `Z_eff` evaluated at the previous iterate, then polished by bisection.
pub fn turning_points_selfconsistent(barrier: &Barrier, energy: f64) -> Result<(f64, f64)> {
    let (field, zeff) = match barrier {
        Barrier::LaserCoulomb { field, zeff } => (*field, *zeff),
        _ => return Err(Error::domain("self-consistent solver needs a laser-dressed Coulomb barrier")),
    };
    let (x_peak, v_max) = barrier.peak()?;
    if !(energy < v_max) {
        return Err(Error::OverBarrier { energy, v_max });
    }

    let seeds = turning_points_quadratic(ZeffModel::KULLIE.constant_value().unwrap(), energy, field).ok();
    let residual = |x: f64| -zeff.eval(x) / x - field * x - energy;

    let solve_branch = |right: bool| -> Result<f64> {
        let (lo, hi) = if right { (x_peak, far_side(&residual, x_peak)?) } else { (near_side(&residual, x_peak)?, x_peak) };
        let mut x = seeds.map(|(l, r)| if right { r } else { l }).unwrap_or(if right { hi } else { lo });
        let mut converged = false;
        for n in 0..MAX_ITERATIONS {
            if residual(x).abs() < ROOT_TOL {
                debug!("self-consistent {} root converged after {n} iterations", if right { "right" } else { "left" });
                converged = true;
                break;
            }
            match quadratic_branch(zeff.eval(x), energy, field, right) {
                Some(next) => x = next,
                None => break,
            }
        }
        if converged {
            let (a, b) = (x * (1.0 - 1e-6), x * (1.0 + 1e-6));
            if let Ok(r) = bisect(&residual, a.max(lo), b.min(hi)) {
                return Ok(r);
            }
        }
        bisect(&residual, lo, hi).map_err(|_| Error::NoConvergence { iterations: MAX_ITERATIONS })
    };

    let left = solve_branch(false)?;
    let right = solve_branch(true)?;
    Ok((left, right))
}

/// Turning points by bisection on either side of the barrier peak.
/// Support edges of rectangular and triangular barriers count as turning
/// points when `V − E` is still positive there.
pub fn turning_points_bracketed(barrier: &Barrier, energy: f64) -> Result<(f64, f64)> {
    let (x_peak, v_max) = barrier.peak()?;
    if !(energy < v_max) {
        return Err(Error::OverBarrier { energy, v_max });
    }
    let (lo, hi) = barrier.domain();
    let residual = |x: f64| barrier.eval(x).map(|v| v - energy).unwrap_or(f64::NAN);
    let to_bracket = |e: RootError| match e {
        RootError::NoSignChange { lo, hi } => Error::BracketFailure { lo, hi },
    };

    let left = if barrier.has_walls() && residual(lo) > 0.0 {
        lo
    } else {
        let a = if lo.is_finite() && residual(lo).is_finite() { lo } else { near_side(&residual, x_peak)? };
        bisect(&residual, a, x_peak).map_err(to_bracket)?
    };
    let right = if barrier.has_walls() && residual(hi) > 0.0 {
        hi
    } else {
        let b = if hi.is_finite() { hi } else { far_side(&residual, x_peak)? };
        bisect(&residual, x_peak, b).map_err(to_bracket)?
    };
    Ok((left, right))
}

// Walk toward x = 0 until the residual turns negative (Coulomb core).
fn near_side(residual: &impl Fn(f64) -> f64, x_peak: f64) -> Result<f64> {
    let mut x = x_peak;
    for _ in 0..1100 {
        x *= 0.5;
        if residual(x) < 0.0 {
            return Ok(x);
        }
    }
    Err(Error::BracketFailure { lo: x, hi: x_peak })
}

// Walk downfield until the residual turns negative.
fn far_side(residual: &impl Fn(f64) -> f64, x_peak: f64) -> Result<f64> {
    let mut x = x_peak.max(1.0);
    for _ in 0..1000 {
        x *= 2.0;
        if residual(x) < 0.0 {
            return Ok(x);
        }
    }
    Err(Error::BracketFailure { lo: x_peak, hi: x })
}
