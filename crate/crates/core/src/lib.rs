//! Simulation and qualitative analysis of scalar delay equations
//!
//! ```text
//! x'(t) = sum_k f_k(t, x(h_1(t)), ..., x(h_l(t))) - g(t, x(t)),   t >= 0
//! x(t)  = phi(t),                                                  t <= 0
//! ```
//!
//! The crate is organised in five layers:
//!
//! * [`model`] describes the right-hand side, the delays and the initial history,
//!   and ships constructors for the standard population models.
//! * [`integrator`] solves the equation by the method of steps with an embedded
//!   Dormand-Prince pair, dense output and breakpoint tracking.
//! * [`criteria`] evaluates the sufficient conditions for existence, boundedness,
//!   persistence, permanence and unboundedness on finite sampling grids.
//! * [`analysis`] turns a trajectory into a qualitative classification.
//! * [`cli`] wires everything into the `mixdelay` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod integrator;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};
