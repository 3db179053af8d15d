//! Singer cyclic difference sets, the cyclic Singer digons and triangles built
//! from them, gluing matrices over Coxeter diagrams with `m_st ∈ {2, 3, ∞}`,
//! and finite presentations of the resulting Singer cyclic lattices.
//!
//! Everything here is pure and allocation-only; text formats and the command
//! line live in the companion `singer` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod diffset;
mod error;
pub mod field;
pub mod polygon;
pub mod presentation;
pub mod weyl;

pub use error::{Error, Result};

/// Residue of `value` modulo `modulus`, always in `[0, modulus)`.
#[inline]
pub(crate) fn modulo(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(i64::from(modulus)) as u32
}
