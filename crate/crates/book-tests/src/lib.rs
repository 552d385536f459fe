//! Test shim for the guide in `book/`. Each chapter is included verbatim as
//! the documentation of an empty module, so `cargo test` runs the book's
//! code blocks as doc-tests and any drift between prose and library breaks
//! the build.

#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/fixed-point-engine.md")]
pub mod fixed_point_engine {}

#[doc = include_str!("../../../book/src/dyadic-gates.md")]
pub mod dyadic_gates {}

#[doc = include_str!("../../../book/src/generating-s-boxes.md")]
pub mod generating_s_boxes {}

#[doc = include_str!("../../../book/src/measuring-quality.md")]
pub mod measuring_quality {}

#[doc = include_str!("../../../book/src/latency-model.md")]
pub mod latency_model {}

#[doc = include_str!("../../../book/src/cli-and-formats.md")]
pub mod cli_and_formats {}
