//! Tunneling-time definitions.
//!
//! The entropic time `Δt = ħ/(2·ΔE_ther)` with `ΔE_ther = p_t·2πk_BT`
//! evaluates to `−(τ_c/(2π·p_t))·e^(−2Φ)·bracket(Φ)`. It is signed: for
//! `Φ ≤ Φ*` the temperature and the time come out negative and the report
//! clears its positivity flag instead of hiding the sign.
//!
//! Phase and dwell times are only given for the rectangular barrier.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::Barrier;
use crate::stattherm::{bracket, phi_star, StatState};
use crate::transmission::{pt_rectangular_exact, pt_wkb, rectangular_decay_over_pt, rectangular_mismatch, wkb_decay_over_pt};
use crate::turning::TunnelingProblem;
use crate::units::HBAR;
use crate::wkb::WkbQuantities;

/// General entropic tunneling time for any transmission probability `p_t`.
pub fn ett_general(tau_c: f64, phi: f64, p_t: f64) -> f64 {
    // e^(−2Φ)/p_t in log space so neither factor underflows on its own.
    let decay_over_pt = (-2.0 * phi - p_t.ln()).exp();
    -(tau_c / (2.0 * PI)) * decay_over_pt * bracket(phi)
}

/// Entropic time with the WKB transmission `1/cosh²Φ`.
pub fn ett_he(tau_c: f64, phi: f64) -> f64 {
    -(tau_c / (2.0 * PI)) * wkb_decay_over_pt(phi) * bracket(phi)
}

/// `Φ = √(2m(V0 − E))·L/ħ` for a rectangular barrier.
pub fn rectangular_action(energy: f64, v0: f64, length: f64, mass: f64) -> f64 {
    (2.0 * mass * (v0 - energy)).sqrt() * length / HBAR
}

/// `τ_c = m·L²/(ħΦ) = m·L/√(2m(V0 − E))`.
pub fn rectangular_classical_time(energy: f64, v0: f64, length: f64, mass: f64) -> f64 {
    mass * length / (2.0 * mass * (v0 - energy)).sqrt()
}

fn check_rectangular(energy: f64, v0: f64, length: f64, mass: f64) -> Result<f64> {
    if !(length >= 0.0 && mass > 0.0) {
        return Err(Error::domain(format!("need length >= 0 and mass > 0, got {length}, {mass}")));
    }
    rectangular_mismatch(energy, v0)
}

/// Entropic time for the rectangular barrier with its exact transmission,
/// written as `−τ_c/(2π(V0 − E))·((V0 − E) + (V0·sinhΦ)²/(4E))·e^(−2Φ)·bracket(Φ)`.
pub fn ett_rectangular(energy: f64, v0: f64, length: f64, mass: f64) -> Result<f64> {
    check_rectangular(energy, v0, length, mass)?;
    let phi = rectangular_action(energy, v0, length, mass);
    let tau_c = rectangular_classical_time(energy, v0, length, mass);
    let gap = v0 - energy;
    let q = (-2.0 * phi).exp();
    let half = -0.5 * (-2.0 * phi).exp_m1(); // sinhΦ·e^(−Φ)
    let weight = gap * q + v0 * v0 * half * half / (4.0 * energy);
    Ok(-(tau_c / (2.0 * PI * gap)) * weight * bracket(phi))
}

// (p_t, p_t·sinhΦ·coshΦ) for the rectangle, free of e^(±2Φ) overflow.
fn rectangular_pt_pair(c: f64, phi: f64) -> (f64, f64) {
    let q = (-2.0 * phi).exp();
    let om = -(-2.0 * phi).exp_m1();
    let coth = (1.0 + q) / om;
    let inv_sinh2 = 4.0 * q / (om * om);
    (inv_sinh2 / (inv_sinh2 + c), coth / (inv_sinh2 + c))
}

struct RectParts {
    phi: f64,
    phi_e: f64,
    tau_c: f64,
    p_t: f64,
    p_t_sinh_cosh: f64,
}

fn rect_parts(energy: f64, v0: f64, length: f64, mass: f64) -> Result<Option<RectParts>> {
    let c = check_rectangular(energy, v0, length, mass)?;
    if length == 0.0 {
        return Ok(None);
    }
    let phi = rectangular_action(energy, v0, length, mass);
    let (p_t, p_t_sinh_cosh) = rectangular_pt_pair(c, phi);
    Ok(Some(RectParts {
        phi,
        phi_e: (2.0 * mass * energy).sqrt() * length / HBAR,
        tau_c: rectangular_classical_time(energy, v0, length, mass),
        p_t,
        p_t_sinh_cosh,
    }))
}

/// Phase (Wigner) time of the rectangular barrier.
pub fn phase_time_rectangular(energy: f64, v0: f64, length: f64, mass: f64) -> Result<f64> {
    let Some(RectParts { phi, phi_e, tau_c, p_t, p_t_sinh_cosh }) = rect_parts(energy, v0, length, mass)? else {
        return Ok(0.0);
    };
    let (p2, e2) = (phi * phi, phi_e * phi_e);
    let inner = phi * e2 * (p2 - e2) * p_t + (p2 + e2).powi(2) * p_t_sinh_cosh;
    Ok(tau_c / (2.0 * p2 * e2 * phi_e) * inner)
}

/// Dwell time of the rectangular barrier.
pub fn dwell_time_rectangular(energy: f64, v0: f64, length: f64, mass: f64) -> Result<f64> {
    let Some(RectParts { phi, phi_e, tau_c, p_t, p_t_sinh_cosh }) = rect_parts(energy, v0, length, mass)? else {
        return Ok(0.0);
    };
    let (p2, e2) = (phi * phi, phi_e * phi_e);
    let inner = phi * (p2 - e2) * p_t + (p2 + e2) * p_t_sinh_cosh;
    Ok(tau_c / (2.0 * p2 * phi_e) * inner)
}

/// Action and classical time of the ramp `V0 − field·x` on `[0, L]`, obtained
/// by rescaling the rectangular values of the same height and width:
/// `Φ = (2/3)·r·Φ_rect`, `τ_c = 2·r·τ_c,rect` with `r = (V0 − E)/(field·L)`.
/// Exact only when the ramp crosses `E` inside the support (`r ≤ 1`).
pub fn triangular_scalings(v0: f64, energy: f64, field: f64, length: f64, mass: f64) -> Result<(f64, f64)> {
    if !(energy < v0 && field > 0.0 && length > 0.0 && mass > 0.0) {
        return Err(Error::domain("need E < V0 and positive field, length and mass"));
    }
    let ratio = (v0 - energy) / (field * length);
    if ratio > 1.0 {
        return Err(Error::Regime(format!(
            "ramp reaches E at x = {} beyond the support length {length}",
            (v0 - energy) / field
        )));
    }
    let phi = 2.0 / 3.0 * ratio * rectangular_action(energy, v0, length, mass);
    let tau = 2.0 * ratio * rectangular_classical_time(energy, v0, length, mass);
    Ok((phi, tau))
}

/// Which transmission probability fed the entropic time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransmissionKind {
    ExactRectangular,
    Wkb,
}

/// Everything computed for one tunneling problem, in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimesReport {
    pub energy: f64,
    pub mass: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub ett: f64,
    pub tau_c: f64,
    pub phase_time: Option<f64>,
    pub dwell_time: Option<f64>,
    pub p_t_used: f64,
    pub p_t_kind: TransmissionKind,
    pub p_t_wkb: f64,
    pub p_t_exact: Option<f64>,
    pub phi: f64,
    pub p_m: f64,
    pub entropy_over_kb: f64,
    pub inv_kbt: f64,
    #[serde(rename = "kBT")]
    pub kbt: f64,
    pub positivity_flag: bool,
}

impl TimesReport {
    pub fn compute(problem: &TunnelingProblem, quad_tol: f64) -> Result<Self> {
        let wkb = WkbQuantities::compute(problem, quad_tol)?;
        let (phi, tau_c) = (wkb.phi, wkb.tau_c);
        let stat = StatState::new(phi, tau_c)?;
        let p_t_wkb = pt_wkb(phi);

        let (ett, p_t_used, p_t_kind, p_t_exact, phase, dwell) = match *problem.barrier() {
            Barrier::Rectangular { v0, length } if problem.energy() > 0.0 => {
                let (e, m) = (problem.energy(), problem.mass());
                let c = rectangular_mismatch(e, v0)?;
                let exact = pt_rectangular_exact(e, v0, phi)?;
                let ett = -(tau_c / (2.0 * PI)) * rectangular_decay_over_pt(c, phi) * bracket(phi);
                let phase = phase_time_rectangular(e, v0, length, m)?;
                let dwell = dwell_time_rectangular(e, v0, length, m)?;
                (ett, exact, TransmissionKind::ExactRectangular, Some(exact), Some(phase), Some(dwell))
            }
            _ => (ett_he(tau_c, phi), p_t_wkb, TransmissionKind::Wkb, None, None, None),
        };

        Ok(Self {
            energy: problem.energy(),
            mass: problem.mass(),
            x_left: problem.x_left(),
            x_right: problem.x_right(),
            ett,
            tau_c,
            phase_time: phase,
            dwell_time: dwell,
            p_t_used,
            p_t_kind,
            p_t_wkb,
            p_t_exact,
            phi,
            p_m: wkb.p_m,
            entropy_over_kb: stat.entropy_over_kb,
            inv_kbt: stat.inv_kbt,
            kbt: stat.kbt(),
            positivity_flag: phi > phi_star(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::ZeffModel;
    use crate::units::to_attoseconds;
    use crate::wkb::DEFAULT_QUAD_TOL;
    use approx::assert_relative_eq;

    // Plain textbook evaluation used as the reference for the rearranged forms.
    fn naive_ett(tau_c: f64, phi: f64, p_t: f64) -> f64 {
        let u = 1.0 + 2.0 * phi;
        -(tau_c / (2.0 * PI * p_t)) * (-2.0 * phi).exp() * (1.0 / u + (1.0 / u).ln())
    }

    #[test]
    fn general_examples() {
        assert!(ett_general(1.0, phi_star(), 0.3).abs() < 1e-11);
        let pt = 1.0 / 1f64.cosh().powi(2);
        let want = naive_ett(1.0, 1.0, pt);
        assert_relative_eq!(ett_general(1.0, 1.0, pt), want, max_relative = 1e-13);
        // −(1/2π)·cosh²1·e^(−2)·(1/3 − ln 3)
        assert!((want - 0.039249).abs() < 1e-6, "{want}");
    }

    #[test]
    fn he_form_equals_general_with_wkb() {
        assert_relative_eq!(ett_he(1.0, 1.0), ett_general(1.0, 1.0, pt_wkb(1.0)), max_relative = 1e-12);
        for i in 1..=40 {
            let phi = 0.25 * i as f64;
            assert_relative_eq!(ett_he(3.0, phi), ett_general(3.0, phi, pt_wkb(phi)), max_relative = 1e-12);
        }
    }

    #[test]
    fn rectangular_example() {
        let ett = ett_rectangular(0.5, 1.0, 2.0, 1.0).unwrap();
        let pt = 1.0 / 2f64.cosh().powi(2);
        let want = naive_ett(2.0, 2.0, pt);
        assert_relative_eq!(ett, want, max_relative = 1e-13);
        assert!((ett - 0.116306).abs() < 1e-6, "{ett}");
        assert!(ett_rectangular(1.5, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn rectangular_ett_diverges_with_width() {
        let at = |l: f64| ett_rectangular(0.5, 1.0, l, 1.0).unwrap();
        assert!(at(8.0) > at(4.0) && at(4.0) > at(2.0));
    }

    #[test]
    fn near_top_of_barrier_goes_negative() {
        let (e, v0, l) = (0.999, 1.0, 2.0);
        let ett = ett_rectangular(e, v0, l, 1.0).unwrap();
        assert!(rectangular_action(e, v0, l, 1.0) < phi_star());
        assert!(ett < 0.0);
        let p = TunnelingProblem::new(Barrier::rectangular(v0, l).unwrap(), e, 1.0).unwrap();
        let r = TimesReport::compute(&p, DEFAULT_QUAD_TOL).unwrap();
        assert!(!r.positivity_flag && r.ett < 0.0 && r.kbt < 0.0);
    }

    #[test]
    fn wide_barrier_limits() {
        let (e, v0) = (0.5, 1.0);
        let phase = phase_time_rectangular(e, v0, 200.0, 1.0).unwrap();
        let dwell = dwell_time_rectangular(e, v0, 200.0, 1.0).unwrap();
        assert!((phase / 2.0 - 1.0).abs() < 0.01, "{phase}");
        assert!((dwell / 1.0 - 1.0).abs() < 0.01, "{dwell}");
        let phase = phase_time_rectangular(0.5, 2.0, 200.0, 1.0).unwrap();
        assert!((phase / 1.1547 - 1.0).abs() < 0.01, "{phase}");
        // Dwell limit shrinks with barrier height.
        let tall = dwell_time_rectangular(0.5, 10.0, 200.0, 1.0).unwrap();
        assert!(tall < dwell);
        assert!(dwell <= phase);
    }

    #[test]
    fn zero_width_has_zero_phase_and_dwell() {
        assert_eq!(phase_time_rectangular(0.5, 1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(dwell_time_rectangular(0.5, 1.0, 0.0, 1.0).unwrap(), 0.0);
        let small = phase_time_rectangular(0.5, 1.0, 1e-6, 1.0).unwrap();
        assert!(small.is_finite() && small.abs() < 1e-4, "{small}");
    }

    #[test]
    fn phase_time_matches_wigner_derivative() {
        // Oracle: energy derivative of the transmission-amplitude phase,
        // t = e^{−ikL}/(cosh κL + i(κ² − k²)/(2kκ)·sinh κL), phase time ħ·d(arg t + kL)/dE.
        let (v0, l, m) = (1.0, 1.7, 1.0);
        let arg = |e: f64| {
            let k = (2.0 * m * e).sqrt();
            let kap = (2.0 * m * (v0 - e)).sqrt();
            let re = (kap * l).cosh();
            let im = (kap * kap - k * k) / (2.0 * k * kap) * (kap * l).sinh();
            -im.atan2(re)
        };
        for e in [0.2, 0.5, 0.8] {
            let h = 1e-6;
            let fd = HBAR * (arg(e + h) - arg(e - h)) / (2.0 * h);
            let phase = phase_time_rectangular(e, v0, l, m).unwrap();
            assert_relative_eq!(phase, fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn triangular_examples() {
        let (phi, tau) = triangular_scalings(1.0, 0.5, 0.25, 2.0, 1.0).unwrap();
        assert_relative_eq!(phi, 4.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(tau, 4.0, max_relative = 1e-14);
        let (phi, _) = triangular_scalings(1.0, 0.5, 0.5, 2.0, 1.0).unwrap();
        assert_relative_eq!(phi, 2.0 / 3.0, max_relative = 1e-14);
        assert!(phi < rectangular_action(0.5, 1.0, 2.0, 1.0));
        // Precondition boundary at field = (V0 − E)/L.
        assert!(triangular_scalings(1.0, 0.5, 0.25, 2.0, 1.0).is_ok());
        assert!(matches!(triangular_scalings(1.0, 0.5, 0.2499, 2.0, 1.0), Err(Error::Regime(_))));
    }

    #[test]
    fn report_for_rectangle() {
        let p = TunnelingProblem::new(Barrier::rectangular(1.0, 2.0).unwrap(), 0.5, 1.0).unwrap();
        let r = TimesReport::compute(&p, DEFAULT_QUAD_TOL).unwrap();
        assert_relative_eq!(r.phi, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.tau_c, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.ett, ett_rectangular(0.5, 1.0, 2.0, 1.0).unwrap(), max_relative = 1e-11);
        assert_eq!(r.p_t_kind, TransmissionKind::ExactRectangular);
        assert!(r.phase_time.is_some() && r.dwell_time.is_some());
        assert!(r.positivity_flag && r.ett > 0.0);
        let stored = -(r.tau_c / (2.0 * PI * r.p_t_used)) * (-2.0 * r.phi).exp() * bracket(r.phi);
        assert_relative_eq!(r.ett, stored, max_relative = 1e-12);
    }

    #[test]
    fn report_for_he_kullie_strong_field() {
        let b = Barrier::laser_coulomb(0.11, ZeffModel::KULLIE).unwrap();
        let p = TunnelingProblem::new(b, -0.904, 1.0).unwrap();
        let r = TimesReport::compute(&p, DEFAULT_QUAD_TOL).unwrap();
        let ett_as = to_attoseconds(r.ett);
        assert!((ett_as / 16.85 - 1.0).abs() < 0.02, "{ett_as}");
        assert_eq!(r.p_t_kind, TransmissionKind::Wkb);
        assert!(r.phase_time.is_none());
        assert_relative_eq!(r.ett, 1.0 / (4.0 * PI * r.p_t_used * r.kbt), max_relative = 1e-12);
    }
}
