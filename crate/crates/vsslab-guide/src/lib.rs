//! Doc-test shim for the book: each chapter is included as module
//! documentation so `cargo test` compiles and runs every fenced Rust
//! snippet in `book/src/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/plant.md")]
pub mod plant {}

#[doc = include_str!("../../../book/src/sliding_mode.md")]
pub mod sliding_mode {}

#[doc = include_str!("../../../book/src/second_order.md")]
pub mod second_order {}

#[doc = include_str!("../../../book/src/multimodel.md")]
pub mod multimodel {}

#[doc = include_str!("../../../book/src/fused_controllers.md")]
pub mod fused_controllers {}

#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
