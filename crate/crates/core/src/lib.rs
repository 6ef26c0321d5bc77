//! Modular calculus: residue rings, modulated logarithms and derivatives,
//! polynomial calculus over `Z/p`, discrete geometry and Diophantine checks.

pub mod arith;
pub mod cache;
pub mod calculus;
pub mod claims;
pub mod config;
pub mod digital;
pub mod dioph;
pub mod error;
pub mod gauss;
pub mod geometry;
pub mod interp;
pub mod lcg;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod valued;

pub use error::{Error, Result};
