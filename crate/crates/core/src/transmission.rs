//! Transmission probabilities: the exact rectangular result, the WKB form
//! `1/cosh²Φ`, and a transfer-matrix solution of the stationary Schrödinger
//! equation used as an independent oracle.

use crate::error::{Error, Result};
use crate::potentials::Barrier;
use crate::units::HBAR;

pub const DEFAULT_SLICES: usize = 4096;
pub const MIN_SLICES: usize = 64;
/// Above this action the WKB probability switches to its `e^(−2Φ)` form.
pub const COSH_BRANCH_PHI: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScatteringResult {
    pub p_t: f64,
    pub p_r: f64,
    pub grid_points: usize,
}

/// `V0²/(4E(V0 − E))`, the rectangular-barrier mismatch factor.
pub(crate) fn rectangular_mismatch(energy: f64, v0: f64) -> Result<f64> {
    if !(energy > 0.0 && energy < v0) {
        return Err(Error::domain(format!("rectangular formulas need 0 < E < V0, got E = {energy}, V0 = {v0}")));
    }
    Ok(v0 * v0 / (4.0 * energy * (v0 - energy)))
}

/// `1/(1 + V0²·sinh²Φ/(4E(V0 − E)))`.
pub fn pt_rectangular_exact(energy: f64, v0: f64, phi: f64) -> Result<f64> {
    let c = rectangular_mismatch(energy, v0)?;
    if !(phi >= 0.0) {
        return Err(Error::domain(format!("phi must be non-negative, got {phi}")));
    }
    let s = phi.sinh();
    Ok(1.0 / (1.0 + c * s * s))
}

/// `e^(−2Φ)/p_t` for the exact rectangular probability, without forming `sinh²Φ`.
pub(crate) fn rectangular_decay_over_pt(c: f64, phi: f64) -> f64 {
    let q = (-2.0 * phi).exp();
    let half = -0.5 * (-2.0 * phi).exp_m1();
    q + c * half * half
}

/// `1/cosh²Φ`.
pub fn pt_wkb(phi: f64) -> f64 {
    if phi < COSH_BRANCH_PHI {
        let d = phi.exp() + (-phi).exp();
        4.0 / (d * d)
    } else {
        let q = (-2.0 * phi).exp();
        4.0 * q / ((1.0 + q) * (1.0 + q))
    }
}

/// `cosh²Φ·e^(−2Φ) = (1 + e^(−2Φ))²/4`.
pub(crate) fn wkb_decay_over_pt(phi: f64) -> f64 {
    let q = (-2.0 * phi).exp();
    0.25 * (1.0 + q) * (1.0 + q)
}

/// Transfer-matrix transmission through a barrier embedded between flat
/// leads at its asymptotic level. Not available for the laser-dressed
/// Coulomb potential, which has no lower-bounded downfield lead.
pub fn pt_numeric(barrier: &Barrier, energy: f64, mass: f64, slices: usize) -> Result<ScatteringResult> {
    barrier.validate()?;
    let (lead_left, lead_right) = barrier
        .lead_levels()
        .ok_or_else(|| Error::domain("transfer-matrix oracle is not offered for unbounded potentials"))?;
    let (a, b) = barrier.domain();
    pt_numeric_profile(|x| barrier.eval(x).unwrap_or(0.0), a, b, (lead_left, lead_right), energy, mass, slices)
}

/// Transfer-matrix transmission through an arbitrary profile `v` on `[a, b]`,
/// sampled at slice midpoints, between leads at `leads = (V_left, V_right)`.
pub fn pt_numeric_profile<F: Fn(f64) -> f64>(
    v: F,
    a: f64,
    b: f64,
    leads: (f64, f64),
    energy: f64,
    mass: f64,
    slices: usize,
) -> Result<ScatteringResult> {
    if slices < MIN_SLICES {
        return Err(Error::domain(format!("need at least {MIN_SLICES} slices, got {slices}")));
    }
    if !(b > a) || !(mass > 0.0) {
        return Err(Error::domain("need b > a and mass > 0"));
    }
    let (kin_l, kin_r) = (energy - leads.0, energy - leads.1);
    if !(kin_l > 0.0 && kin_r > 0.0) {
        return Err(Error::EvanescentLead { left: kin_l, right: kin_r });
    }
    let k_l = (2.0 * mass * kin_l).sqrt() / HBAR;
    let k_r = (2.0 * mass * kin_r).sqrt() / HBAR;

    // Propagator of (ψ, ψ') across the whole region.
    let h = (b - a) / slices as f64;
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for i in 0..slices {
        let x = a + (i as f64 + 0.5) * h;
        let s = slice_matrix(2.0 * mass * (energy - v(x)) / (HBAR * HBAR), h);
        m = matmul(&s, &m);
    }
    let [[m11, m12], [m21, m22]] = m;

    let kk = k_l * k_r;
    let minus_re = m21 - kk * m12;
    let minus_im = k_r * m11 + k_l * m22;
    let plus_re = m21 + kk * m12;
    let plus_im = k_l * m22 - k_r * m11;
    let denom = minus_re * minus_re + minus_im * minus_im;
    Ok(ScatteringResult {
        p_t: 4.0 * kk / denom,
        p_r: (plus_re * plus_re + plus_im * plus_im) / denom,
        grid_points: slices,
    })
}

// Exact propagator for ψ'' = −k²ψ over a constant slice of width h, with
// k² = 2m(E − V)/ħ² of either sign.
fn slice_matrix(k2: f64, h: f64) -> [[f64; 2]; 2] {
    if k2 > 0.0 {
        let k = k2.sqrt();
        let (s, c) = (k * h).sin_cos();
        [[c, s / k], [-k * s, c]]
    } else if k2 < 0.0 {
        let kappa = (-k2).sqrt();
        let (s, c) = ((kappa * h).sinh(), (kappa * h).cosh());
        [[c, s / kappa], [kappa * s, c]]
    } else {
        [[1.0, h], [0.0, 1.0]]
    }
}

fn matmul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::ZeffModel;
    use approx::assert_relative_eq;

    #[test]
    fn exact_rectangular_examples() {
        assert_eq!(pt_rectangular_exact(0.3, 1.0, 0.0).unwrap(), 1.0);
        let c2 = 2f64.cosh();
        assert_relative_eq!(pt_rectangular_exact(0.5, 1.0, 2.0).unwrap(), 1.0 / (c2 * c2), max_relative = 1e-14);
        assert!((pt_rectangular_exact(0.5, 1.0, 2.0).unwrap() - 0.070651).abs() < 1e-6);
        assert!(pt_rectangular_exact(0.0, 1.0, 1.0).is_err());
        assert!(pt_rectangular_exact(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn half_height_reduces_to_wkb() {
        for i in 1..=20 {
            let phi = 0.5 * i as f64;
            let exact = pt_rectangular_exact(0.5, 1.0, phi).unwrap();
            assert_relative_eq!(exact, pt_wkb(phi), max_relative = 1e-12);
        }
    }

    // V0²/(4E(V0 − E)) ≥ 1 with equality only at E = V0/2, so the exact
    // probability never exceeds the WKB one.
    #[test]
    fn exact_versus_wkb_ordering() {
        for phi in [0.5, 2.0, 6.0] {
            assert!(pt_rectangular_exact(0.2, 1.0, phi).unwrap() < pt_wkb(phi));
            assert!(pt_rectangular_exact(0.8, 1.0, phi).unwrap() < pt_wkb(phi));
        }
    }

    #[test]
    fn wkb_examples() {
        assert_eq!(pt_wkb(0.0), 1.0);
        let want = 4.0 * (-30f64).exp() / (1.0 + (-30f64).exp()).powi(2);
        assert_relative_eq!(pt_wkb(15.0), want, max_relative = 1e-13);
        assert!((pt_wkb(15.0) - 3.7430e-13).abs() < 1e-16);
        assert!((pt_wkb(2.0) - 0.070651).abs() < 1e-6);
        // Both branches agree at the switch and stay positive far out.
        let below = 1.0 / COSH_BRANCH_PHI.cosh().powi(2);
        assert_relative_eq!(pt_wkb(COSH_BRANCH_PHI), below, max_relative = 1e-13);
        assert!(pt_wkb(300.0) > 0.0);
    }

    #[test]
    fn decay_ratios() {
        for phi in [0.1, 1.0, 5.0, 25.0] {
            let pt = pt_wkb(phi);
            assert_relative_eq!(wkb_decay_over_pt(phi), (-2.0 * phi).exp() / pt, max_relative = 1e-12);
            let c = rectangular_mismatch(0.3, 1.0).unwrap();
            let pt = pt_rectangular_exact(0.3, 1.0, phi).unwrap();
            assert_relative_eq!(rectangular_decay_over_pt(c, phi), (-2.0 * phi).exp() / pt, max_relative = 1e-12);
        }
    }

    #[test]
    fn oracle_matches_exact_rectangle() {
        let b = Barrier::rectangular(1.0, 2.0).unwrap();
        let r = pt_numeric(&b, 0.5, 1.0, DEFAULT_SLICES).unwrap();
        let exact = pt_rectangular_exact(0.5, 1.0, 2.0).unwrap();
        assert_relative_eq!(r.p_t, exact, max_relative = 1e-6);
        assert!((r.p_t + r.p_r - 1.0).abs() < 1e-9);
        assert_eq!(r.grid_points, DEFAULT_SLICES);
    }

    #[test]
    fn free_particle_is_fully_transmitted() {
        let r = pt_numeric_profile(|_| 0.0, 0.0, 5.0, (0.0, 0.0), 0.7, 1.0, DEFAULT_SLICES).unwrap();
        assert!((r.p_t - 1.0).abs() < 1e-12);
        assert!(r.p_r < 1e-12);
    }

    #[test]
    fn evanescent_lead_and_unsupported_barrier() {
        let b = Barrier::rectangular(1.0, 2.0).unwrap();
        assert!(matches!(pt_numeric(&b, -0.1, 1.0, 128), Err(Error::EvanescentLead { .. })));
        assert!(matches!(pt_numeric(&b, 0.5, 1.0, 10), Err(Error::Domain(_))));
        let he = Barrier::laser_coulomb(0.04, ZeffModel::KULLIE).unwrap();
        assert!(matches!(pt_numeric(&he, 0.5, 1.0, 128), Err(Error::Domain(_))));
    }

    #[test]
    fn steep_tanh_edges_approximate_the_rectangle() {
        let (v0, l, e) = (1.0, 2.0, 0.5);
        let s = 50.0 / l;
        let v = |x: f64| 0.5 * v0 * ((s * x).tanh() - (s * (x - l)).tanh());
        let r = pt_numeric_profile(v, -l, 2.0 * l, (v(-l), v(2.0 * l)), e, 1.0, 4 * DEFAULT_SLICES).unwrap();
        let sharp = pt_rectangular_exact(e, v0, (2.0 * (v0 - e)).sqrt() * l).unwrap();
        assert!(((r.p_t - sharp) / sharp).abs() < 0.05, "{} vs {}", r.p_t, sharp);
        assert!((r.p_t + r.p_r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unequal_leads_conserve_flux() {
        let v = |x: f64| 0.8 * (-(x - 2.0).powi(2)).exp() - 0.3 * (1.0 + (x - 2.0).tanh()) / 2.0;
        let r = pt_numeric_profile(v, -6.0, 10.0, (v(-6.0), v(10.0)), 0.4, 1.0, DEFAULT_SLICES).unwrap();
        assert!(r.p_t > 0.0 && r.p_t < 1.0);
        assert!((r.p_t + r.p_r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oracle_converges_on_coulomb_shaped_barrier() {
        // Steep rise on the core side, slow downfield decay.
        let v = |x: f64| 2.0 * x * (1.0 - x).exp();
        let at = |n: usize| pt_numeric_profile(v, 0.0, 30.0, (v(0.0), v(30.0)), 0.5, 1.0, n).unwrap().p_t;
        let mut prev_gap = f64::INFINITY;
        for n in [128, 256, 512, 1024, 2048] {
            let gap = (at(2 * n) - at(n)).abs();
            assert!(gap < prev_gap, "{n}: {gap} !< {prev_gap}");
            prev_gap = gap;
        }
        // Midpoint slicing is second order: successive gaps shrink fourfold.
        let (p1, p2, p4) = (at(DEFAULT_SLICES / 2), at(DEFAULT_SLICES), at(2 * DEFAULT_SLICES));
        assert!(((p2 - p1) / (p4 - p2) - 4.0).abs() < 0.01);
        let extrapolated = p4 + (p4 - p2) / 3.0;
        assert!(((p4 - extrapolated) / extrapolated).abs() < 1e-4);
    }
}
