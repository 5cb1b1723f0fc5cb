//! Fourier interpolation from modular forms: theta functions, kernels, the
//! interpolation basis, lattice Poisson summation and LP packing certificates.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod checks;
pub mod classical;
pub mod cli;
pub mod contours;
pub mod error;
pub mod fourier;
pub mod kernels;
pub mod lattice;
pub mod lp;
pub mod modular;
