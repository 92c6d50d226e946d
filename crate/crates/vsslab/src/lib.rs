//! vsslab: a variable-structure control laboratory built around a 4-state
//! AUV immersion model.
//!
//! The crate implements first- and second-order sliding-mode depth
//! controllers, their multimodel fusion variants (single and multi-surface),
//! numerical stability checkers for every closed-loop condition, and a
//! deterministic batch simulator with CSV/SVG artifact emission.
//!
//! Start with [`sim::Scenario::default_scenario`] and [`sim::run_simulation`];
//! the `vsslab` binary wraps the same machinery behind `simulate`, `compare`,
//! `stability`, and `sweep` subcommands.

// validation guards are written `!(x > 0.0)` so NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod controllers;
pub mod defaults;
pub mod multimodel;
pub mod numerics;
pub mod plant;
pub mod sim;
pub mod smmm;
pub mod stability;
pub mod surfaces;
