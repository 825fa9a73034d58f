#![no_std]

extern crate alloc;

pub mod bounds;
pub mod cayley;
pub mod electrical;
pub mod error;
pub mod graph;
pub mod group;
pub mod linalg;
pub mod littlewood;
pub mod rng;
pub mod samplers;
pub mod stats;

pub use error::{Error, Result};
