//! Manifest-driven verification pipelines and deterministic reports on top
//! of the exact contact-geometry engine.

#![allow(clippy::needless_range_loop)]

pub mod manifest;
pub mod pipeline;
pub mod registry;
pub mod report;
