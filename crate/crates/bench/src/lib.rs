//! Fixtures shared by the benchmarks.

use ett_core::{Barrier, HeModel, TunnelingProblem};

/// Helium problem at the given peak field.
pub fn helium(model: HeModel, field: f64) -> TunnelingProblem {
    let barrier = Barrier::laser_coulomb(field, model.zeff()).expect("valid field");
    TunnelingProblem::new(barrier, ett_core::experiments::HE_ENERGY, 1.0).expect("tunneling regime")
}

/// Rectangular barrier sampled well below its top.
pub fn rectangle() -> TunnelingProblem {
    TunnelingProblem::new(Barrier::rectangular(1.0, 10.0).expect("valid barrier"), 0.3, 1.0).expect("below barrier")
}
