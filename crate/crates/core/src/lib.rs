//! Exact computations with cyclonic orbits, Burnside spans, Mackey functors and big Witt vectors.

pub mod abgrp;
pub mod arith;
pub mod burnside;
pub mod cyclonic;
pub mod cyclotomic;
pub mod dga;
pub mod error;
pub mod json;
pub mod mackey;
pub mod rational;
pub mod supernat;
pub mod witt;

pub use error::{Error, Result};
