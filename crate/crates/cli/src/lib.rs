//! Command-line and HTTP front ends for `locus_core`.

pub mod commands;
pub mod geometry;
pub mod output;
pub mod render;
pub mod server;
