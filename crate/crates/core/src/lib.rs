//! Taxonomy model, problem transformation, dataset repair, cascaded
//! inference and evaluation for multiplex classification.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod ensemble;
pub mod fixtures;
pub mod metrics;
pub mod name;
pub mod taxonomy;
pub mod transform;
