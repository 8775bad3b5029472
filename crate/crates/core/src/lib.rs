//! Frog-model first-passage simulation and analysis.
//!
//! * [`walkfield`]: lattice geometry and keyed random-walk trajectories.
//! * [`frogcore`]: exact passage times, genealogies, frog removal, oracles.
//! * [`percpath`]: site-percolation fields and exact path/animal maxima.
//! * [`statkit`]: estimators and experiment analytics.
//! * [`labcli`]: configuration, persistence and the CLI driver.
//! * [`sched`]: the deterministic worker pool.

pub mod frogcore;
pub mod labcli;
pub mod percpath;
pub mod sched;
pub mod statkit;
pub mod walkfield;
