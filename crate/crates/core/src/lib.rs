//! Tunneling-time calculators for one-dimensional barriers.
//!
//! The centrepiece is the entropic tunneling time (ETT), built from the
//! semiclassical action `Φ`, the imaginary-time traversal `τ_c`, a tunneling
//! entropy and the transmission probability. Classical, phase and dwell
//! times are provided alongside for comparison, together with reproduction
//! harnesses for helium strong-field ionization and electron-transfer
//! barriers.
//!
//! All quantities are in Hartree atomic units unless a name says otherwise
//! (`_as`, `_fs`, `_ev`, `_angstrom`).
//!
//! ```
//! use ett_core::{Barrier, TunnelingProblem, TimesReport, ZeffModel, DEFAULT_QUAD_TOL};
//!
//! let barrier = Barrier::laser_coulomb(0.04, ZeffModel::KULLIE).unwrap();
//! let problem = TunnelingProblem::new(barrier, -0.904, 1.0).unwrap();
//! let report = TimesReport::compute(&problem, DEFAULT_QUAD_TOL).unwrap();
//! assert!(report.ett > 0.0 && report.ett < report.tau_c);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod numeric;
pub mod output;
pub mod potentials;
pub mod stattherm;
pub mod times;
pub mod transmission;
pub mod turning;
pub mod units;
pub mod wkb;

pub use error::{Error, Result};
pub use experiments::{HeModel, ScanPoint, EtScanPoint, Table1Row};
pub use potentials::{Barrier, SaeParams, TabulatedBarrier, ZeffModel};
pub use stattherm::{phi_star, StatState};
pub use times::{TimesReport, TransmissionKind};
pub use transmission::ScatteringResult;
pub use turning::TunnelingProblem;
pub use wkb::{WkbQuantities, DEFAULT_QUAD_TOL};
