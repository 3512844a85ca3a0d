//! Rigorous, field-dependent bounds on the ionization probability of an
//! atomic bound state driven by a short laser pulse, in the dipole
//! approximation and atomic units.
//!
//! The pipeline is: a [`pulse::Pulse`] supplies the momentum transfer `b(τ)`,
//! the classical displacement `c(τ)` and the Volkov phase `a(τ)`;
//! [`hydrogen`] supplies the state matrix elements; [`kato`] supplies the
//! Coulomb resolvent constant; [`bounds`] combines them into upper and lower
//! bounds. [`volkov`] holds the free-electron propagators and gauge maps that
//! the bounds rest on, and [`cli`] is the library half of the `ionbound`
//! binary.

pub mod bounds;
pub mod cli;
pub mod hydrogen;
pub mod kato;
pub mod parallel;
pub mod pulse;
pub mod quadrature;
pub mod volkov;

pub use bounds::{BoundKind, BoundOptions, BoundReport, ShiftMode, StateData};
pub use hydrogen::HydrogenState;
pub use parallel::Execution;
pub use pulse::Pulse;
