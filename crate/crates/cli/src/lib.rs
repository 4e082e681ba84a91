//! Scenario-driven front end for the airy-evolve toolkit: parse a flat
//! dotted-key configuration, run the analytic and numeric evolutions, emit
//! CSV/JSON artifacts, and see the exit-status contract in [`runner`].

// `!(x > 0.0)` guards reject NaN as well; `x <= 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod jsonfmt;
pub mod runner;
pub mod scenario;
pub mod selfcheck;

pub use runner::{run_scenario, EXIT_DIVERGENCE, EXIT_IO_CONFIG, EXIT_OK, EXIT_THRESHOLD};
pub use scenario::{parse_scenario, Scenario, ScenarioError, Thresholds};
