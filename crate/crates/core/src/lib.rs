//! Exact and numeric machinery for classifying Endo–Pajitnov matrix data.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs; file formats, reports and the command line live
//! in the companion `epclass` crate.
//!
//! Layers, bottom up:
//!
//! * [`exactmath`]: integer polynomials, Sturm root counting, exact matrices.
//! * [`lattice`]: integral LLL, minimal polynomials of real algebraic numbers,
//!   integer dependence witnesses.
//! * [`numeric`]: binary big floats and high-precision complex root refinement.
//! * [`spectra`]: the admissibility test and the certified real eigenvalue.
//! * [`curvetest`]: the exact eigenvector over `Q(alpha)` and the integer
//!   independence verdict.
//! * [`geometry`]: numeric realisation of the deck group and its identities.
//! * [`fibration`]: block splittings and torus-fibration certificates.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod curvetest;
pub mod error;
pub mod exactmath;
pub mod fibration;
pub mod geometry;
pub mod lattice;
pub mod numeric;
pub mod spectra;

pub use error::{Error, Result};
pub use exactmath::{IntMatrix, IntPoly, Interval, RatMatrix};
