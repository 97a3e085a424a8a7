//! File formats, dataset IO and the command-line pipeline around
//! `multiplex-core`.

pub mod cli;
pub mod dataset_io;
pub mod manifest;
pub mod owl;
pub mod pipeline;
pub mod report;
pub mod scores;
pub mod taxonomy_io;

pub use multiplex_core as core;
