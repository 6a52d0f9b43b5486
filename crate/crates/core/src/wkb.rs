//! Semiclassical barrier integrals: the action `Φ = ∫℘ dx / ħ`, the
//! imaginary-time traversal `τ_c = ∫ m dx / ℘` and the penetration
//! probability `p_m = e^(−2Φ)`.
//!
//! Both integrals go through the substitution `x = x_L + (x_R − x_L)·sin²θ`,
//! which turns the `1/√(x − x_turn)` endpoint behaviour of the `τ_c`
//! integrand into a bounded, smooth function of θ.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numeric::quadrature::{integrate, QuadError, MAX_PANELS};
use crate::turning::TunnelingProblem;
use crate::units::HBAR;

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const QUAD_TOL_RANGE: (f64, f64) = (1e-13, 1e-6);
/// Negative `V − E` down to this size is rounding at the turning points.
pub const RADICAND_CLAMP: f64 = 1e-12;
pub const DEFAULT_ENERGY_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbQuantities {
    pub phi: f64,
    pub tau_c: f64,
    pub p_m: f64,
}

impl WkbQuantities {
    pub fn compute(problem: &TunnelingProblem, quad_tol: f64) -> Result<Self> {
        let phi = action_phi(problem, quad_tol)?;
        let tau_c = classical_time(problem, quad_tol)?;
        Ok(Self { phi, tau_c, p_m: penetration_probability(phi) })
    }
}

pub fn penetration_probability(phi: f64) -> f64 {
    (-2.0 * phi).exp()
}

// ℘(x) without the interval check; NaN flags an interior classically allowed pocket.
fn momentum_unchecked(problem: &TunnelingProblem, x: f64) -> f64 {
    let v = match problem.barrier().eval(x) {
        Ok(v) => v,
        Err(_) => return f64::NAN,
    };
    let gap = v - problem.energy();
    if gap >= 0.0 {
        (2.0 * problem.mass() * gap).sqrt()
    } else if gap >= -RADICAND_CLAMP {
        0.0
    } else {
        f64::NAN
    }
}

/// Magnitude of the imaginary classical momentum, `√(2m(V − E))`.
pub fn momentum_magnitude(problem: &TunnelingProblem, x: f64) -> Result<f64> {
    let (l, r) = (problem.x_left(), problem.x_right());
    if !(x >= l && x <= r) {
        return Err(Error::domain(format!("x = {x} outside the forbidden region [{l}, {r}]")));
    }
    if x == l || x == r {
        // Walls of rectangular/triangular barriers keep a finite momentum.
        let p = momentum_unchecked(problem, x);
        if problem.barrier().has_walls() && p > 0.0 {
            return Ok(p);
        }
        return Ok(0.0);
    }
    let p = momentum_unchecked(problem, x);
    if p.is_nan() {
        Err(Error::Singularity { x })
    } else {
        Ok(p)
    }
}

fn check_tol(quad_tol: f64) -> Result<()> {
    let (lo, hi) = QUAD_TOL_RANGE;
    if quad_tol >= lo && quad_tol <= hi {
        Ok(())
    } else {
        Err(Error::domain(format!("quadrature tolerance {quad_tol:e} outside [{lo:e}, {hi:e}]")))
    }
}

fn map_quad(e: QuadError) -> Error {
    match e {
        QuadError::NonFinite { x } => Error::Singularity { x },
        QuadError::Budget { panels, abs_error } => Error::QuadratureFailure { panels, error: abs_error },
    }
}

/// Integrate `g(℘(x))·dx/dθ` over the sin²-mapped forbidden region.
fn mapped_integral(problem: &TunnelingProblem, quad_tol: f64, g: impl Fn(f64, f64, f64) -> f64) -> Result<f64> {
    check_tol(quad_tol)?;
    let (l, r) = (problem.x_left(), problem.x_right());
    let width = r - l;
    if width <= 0.0 {
        return Ok(0.0);
    }
    let mut bad_x = None;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = l + width * s * s;
        let jac = 2.0 * width * s * c;
        let p = momentum_unchecked(problem, x);
        if p.is_nan() {
            bad_x.get_or_insert(x);
            return f64::NAN;
        }
        g(p, jac, (x - l).min(r - x) / width)
    };
    let res = integrate(integrand, 0.0, FRAC_PI_2, quad_tol, MAX_PANELS).map_err(map_quad);
    match (res, bad_x) {
        (Err(Error::Singularity { .. }), Some(x)) => Err(Error::Singularity { x }),
        (res, _) => res.map(|q| q.value),
    }
}

/// Dimensionless barrier action `Φ = (1/ħ)∫℘ dx`.
pub fn action_phi(problem: &TunnelingProblem, quad_tol: f64) -> Result<f64> {
    let phi = mapped_integral(problem, quad_tol, |p, jac, _| p * jac)? / HBAR;
    Ok(phi.max(0.0))
}

/// Classical (imaginary-time) traversal time `τ_c = ∫ m dx / ℘`.
pub fn classical_time(problem: &TunnelingProblem, quad_tol: f64) -> Result<f64> {
    let m = problem.mass();
    mapped_integral(problem, quad_tol, |p, jac, edge_distance| {
        if p > 0.0 {
            m * jac / p
        } else if edge_distance < 1e-6 {
            // Clamped radicand within rounding of a turning point; the mapped
            // integrand is bounded there and the point carries negligible weight.
            0.0
        } else {
            f64::INFINITY
        }
    })
}

/// `∂Φ/∂E` by central differences, re-resolving the turning points at each
/// shifted energy. `−ħ·∂Φ/∂E` reproduces `τ_c`.
pub fn dphi_de(problem: &TunnelingProblem, step: f64, quad_tol: f64) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(format!("energy step must be positive, got {step}")));
    }
    let e = problem.energy();
    let up = action_phi(&problem.at_energy(e + step)?, quad_tol)?;
    let down = action_phi(&problem.at_energy(e - step)?, quad_tol)?;
    Ok((up - down) / (2.0 * step))
}
