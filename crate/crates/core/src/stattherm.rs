//! Statistical layer of the entropic tunneling time.
//!
//! With `2Φ + 1` microstates weighted by the penetration probability
//! `p_m = e^(−2Φ)`, the tunneling entropy is `S/k_B = p_m·ln(1 − ln p_m)`.
//! Its energy derivative gives a signed inverse temperature whose sign is set
//! by [`bracket`], which changes sign at [`phi_star`].

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numeric::roots::bisect;
use crate::units::HBAR;

/// `S/k_B = p·ln(1 − ln p)` for `p ∈ (0, 1]`.
pub fn entropy(p_m: f64) -> Result<f64> {
    if !(p_m > 0.0 && p_m <= 1.0) {
        return Err(Error::domain(format!("probability must lie in (0, 1], got {p_m}")));
    }
    Ok(p_m * (-p_m.ln()).ln_1p())
}

/// `1/(1 + 2Φ) + ln(1/(1 + 2Φ))`.
pub fn bracket(phi: f64) -> f64 {
    let u = 1.0 + 2.0 * phi;
    1.0 / u - (2.0 * phi).ln_1p()
}

/// Unique zero of [`bracket`] on `Φ ≥ 0`, bisected once to 1e−12 and cached.
pub fn phi_star() -> f64 {
    static PHI_STAR: OnceLock<f64> = OnceLock::new();
    *PHI_STAR.get_or_init(|| {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if bracket(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Signed `1/(k_B T) = −(2τ_c/ħ)·e^(−2Φ)·bracket(Φ)`; positive iff `Φ > Φ*`.
pub fn inverse_temperature(phi: f64, tau_c: f64) -> f64 {
    -(2.0 * tau_c / HBAR) * (-2.0 * phi).exp() * bracket(phi)
}

/// `ΔE_ther = p_t·2π·k_BT`, keeping the sign of `k_BT`.
pub fn thermal_energy(p_t: f64, kbt: f64) -> Result<f64> {
    if !(p_t > 0.0 && p_t <= 1.0) {
        return Err(Error::domain(format!("transmission probability must lie in (0, 1], got {p_t}")));
    }
    Ok(p_t * 2.0 * PI * kbt)
}

/// Stationary point `(p*, S*/k_B)` of the entropy on `(0, 1)`, from
/// `ln(1 − ln p) = 1/(1 − ln p)`.
pub fn entropy_maximum() -> (f64, f64) {
    let stationarity = |p: f64| {
        let w = 1.0 - p.ln();
        w.ln() - 1.0 / w
    };
    let p = bisect(stationarity, 0.1, 0.9).expect("entropy derivative changes sign on [0.1, 0.9]");
    (p, p * (-p.ln()).ln_1p())
}

/// Entropy, inverse temperature and bracket for one `(Φ, τ_c)` pair.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct StatState {
    pub entropy_over_kb: f64,
    pub inv_kbt: f64,
    pub bracket_value: f64,
}

impl StatState {
    pub fn new(phi: f64, tau_c: f64) -> Result<Self> {
        if !(phi >= 0.0) || !(tau_c > 0.0) {
            return Err(Error::domain(format!("need phi >= 0 and tau_c > 0, got {phi}, {tau_c}")));
        }
        Ok(Self {
            entropy_over_kb: entropy((-2.0 * phi).exp().max(f64::MIN_POSITIVE))?,
            inv_kbt: inverse_temperature(phi, tau_c),
            bracket_value: bracket(phi),
        })
    }

    pub fn kbt(&self) -> f64 {
        1.0 / self.inv_kbt
    }

    pub fn is_positive_temperature(&self) -> bool {
        self.inv_kbt > 0.0
    }
}
