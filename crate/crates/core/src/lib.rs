//! Symbol constructions, pullback-measure estimators and Schatten-class
//! diagnostics for composition operators on the Hardy space H².
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod criteria;
mod error;
pub mod measure;
pub mod numerics;
pub mod operator;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
