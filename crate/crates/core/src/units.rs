//! Hartree atomic units (ħ = mₑ = e = 1) and the handful of laboratory
//! conversions used at the input/output boundary.
//!
//! Everything inside the crate works in atomic units. The Boltzmann constant
//! is likewise set to one, so temperatures are reported as energies.

/// CODATA 2018 values, fixed at compile time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Attoseconds per atomic unit of time.
    pub au_time_in_as: f64,
    /// Electron volts per hartree.
    pub au_energy_in_ev: f64,
    /// Ångström per bohr.
    pub au_length_in_angstrom: f64,
    /// Speed of light in atomic units (inverse fine-structure constant).
    pub speed_of_light_au: f64,
    pub hbar_au: f64,
    pub electron_mass_au: f64,
    pub boltzmann_scale: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    au_time_in_as: 24.188843265,
    au_energy_in_ev: 27.211386245,
    au_length_in_angstrom: 0.5291772109,
    speed_of_light_au: 137.035999,
    hbar_au: 1.0,
    electron_mass_au: 1.0,
    boltzmann_scale: 1.0,
};

pub const HBAR: f64 = CONSTANTS.hbar_au;
pub const SPEED_OF_LIGHT: f64 = CONSTANTS.speed_of_light_au;

pub fn to_attoseconds(t: f64) -> f64 {
    t * CONSTANTS.au_time_in_as
}

pub fn from_attoseconds(t_as: f64) -> f64 {
    t_as / CONSTANTS.au_time_in_as
}

pub fn to_femtoseconds(t: f64) -> f64 {
    t * CONSTANTS.au_time_in_as * 1e-3
}

pub fn from_femtoseconds(t_fs: f64) -> f64 {
    t_fs * 1e3 / CONSTANTS.au_time_in_as
}

pub fn ev_to_au(e_ev: f64) -> f64 {
    e_ev / CONSTANTS.au_energy_in_ev
}

pub fn au_to_ev(e: f64) -> f64 {
    e * CONSTANTS.au_energy_in_ev
}

pub fn angstrom_to_au(l_angstrom: f64) -> f64 {
    l_angstrom / CONSTANTS.au_length_in_angstrom
}

pub fn au_to_angstrom(l: f64) -> f64 {
    l * CONSTANTS.au_length_in_angstrom
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn attosecond_examples() {
        assert_eq!(to_attoseconds(0.0), 0.0);
        assert_eq!(to_attoseconds(1.0), 24.188843265);
        // SAE classical time at 0.04 a.u. from the He table, back-converted.
        assert!((to_attoseconds(34.471) - 833.82).abs() < 0.01);
    }

    #[test]
    fn lab_conversions() {
        assert_relative_eq!(ev_to_au(27.211386245), 1.0, max_relative = 1e-15);
        assert!((angstrom_to_au(5.0) - 9.4486).abs() < 1e-3);
        assert!((to_femtoseconds(41.3414) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constants_are_positive() {
        let c = CONSTANTS;
        for v in [c.au_time_in_as, c.au_energy_in_ev, c.au_length_in_angstrom, c.speed_of_light_au] {
            assert!(v > 0.0);
        }
        assert_eq!((c.hbar_au, c.electron_mass_au, c.boltzmann_scale), (1.0, 1.0, 1.0));
    }

    proptest! {
        #[test]
        fn round_trips(x in -1e6f64..1e6) {
            let tol = 1e-12 * x.abs().max(f64::MIN_POSITIVE);
            prop_assert!((from_attoseconds(to_attoseconds(x)) - x).abs() <= tol);
            prop_assert!((from_femtoseconds(to_femtoseconds(x)) - x).abs() <= tol);
            prop_assert!((ev_to_au(au_to_ev(x)) - x).abs() <= tol);
            prop_assert!((angstrom_to_au(au_to_angstrom(x)) - x).abs() <= tol);
        }

        #[test]
        fn conversions_are_monotone(a in -1e3f64..1e3, d in 1e-6f64..1e3) {
            let b = a + d;
            prop_assert!(to_attoseconds(a) < to_attoseconds(b));
            prop_assert!(ev_to_au(a) < ev_to_au(b));
            prop_assert!(angstrom_to_au(a) < angstrom_to_au(b));
            prop_assert!(to_femtoseconds(a) < to_femtoseconds(b));
        }
    }
}
