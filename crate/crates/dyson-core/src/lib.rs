//! Contour machinery, rigorous energy/entropy bounds, and phase-transition
//! diagnostics for one-dimensional long-range Ising chains with couplings
//! `J(d) = d^(alpha-2)`, `0 <= alpha < 1`, and external fields decaying as
//! `h_x = h* (1 + |x|)^(-gamma)`.
//!
//! The crate is organized around five pieces:
//!
//! * [`lattice`] — configurations, couplings, fields, exact energies, and a
//!   brute-force partition-function oracle for tiny windows;
//! * [`contour`] — the triangle construction (spin-flip points, nearest-pair
//!   growth), contour grouping, and contour energies;
//! * [`bounds`] — closed-form constants and the certified lower bound
//!   `W_alpha(L) >= zeta_alpha chi_alpha(L)`;
//! * [`census`] — exhaustive small-contour enumeration, entropy and
//!   quasi-additivity checks, the Peierls series and its beta threshold;
//! * [`mc`] — seeded Metropolis dynamics and ± boundary gap scans.

pub mod bounds;
pub mod census;
pub mod contour;
pub mod error;
pub mod lattice;
pub mod mc;

pub use bounds::{BoundReport, KcReport, KcVariant};
pub use census::{BetaCBound, EntropyCheck, QuasiAdditivityReport};
pub use contour::{Contour, ContourConfiguration, DualPoint, Triangle, TriangleFamily};
pub use error::{Error, Result};
pub use lattice::{
    Boundary, CouplingParams, EnergyBreakdown, FieldProfile, PairTable, SpinConfiguration,
};
pub use mc::{GapScanRow, Measurement, SimParams};
