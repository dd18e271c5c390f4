//! Numerical core for a zeta-function laboratory.
//!
//! The crate evaluates the Riemann zeta-function and the Hardy Z-function,
//! computes and validates tables of nontrivial-zero ordinates, builds
//! Euler-product zeta-functions of Matsumoto type from local factor data,
//! smooths their Dirichlet series with a compactly supported cutoff, and
//! measures shift-ensemble statistics: pair correlation of the zero
//! ordinates, phase equidistribution, a random multiplicative model, and
//! sup-norm discrepancy densities over discrete shifts.
//!
//! Everything here is pure computation over `alloc`; file formats, the
//! command-line surface, and thread orchestration live in the companion
//! `zetalab-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fitting;
pub mod matsumoto;
pub mod paircorr;
pub mod primes;
pub mod quad;
pub mod random_model;
pub mod smoothing;
pub mod stats;
pub mod universality;
pub mod zeros;
pub mod zeta;

pub use num_complex::Complex64;

pub use zeta::ComplexPoint;
