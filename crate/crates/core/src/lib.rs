//! Numerical core for studying deep Gaussian process (DGP) priors built from
//! polynomial kernels.
//!
//! A DGP with kernels `k_1(x,y) = scale^2 (xy + c)^d1` and
//! `k_i(x,y) = sigma_i^2 (xy)^d_i` collapses to a product of independent
//! Gaussian factors raised to integer powers. Taking logarithms turns that
//! product into a weighted sum of `log|Y_i|`, which the Berry-Esseen theorem
//! approximates by a normal law with an explicit uniform error bound. This
//! crate provides
//!
//! * closed-form moments of `log|X|` for centered Gaussian `X`
//!   ([`logmoments`], backed by [`specfun`] and [`quadrature`]),
//! * exact sampling of Gaussian products and DGP paths in sign/log-magnitude
//!   form ([`products`], [`dgp`]),
//! * the log-normal surrogate laws and their Berry-Esseen bounds
//!   ([`products`], [`surrogate`]),
//! * empirical CDF machinery and figure-data generators ([`montecarlo`]).
//!
//! The crate is `no_std` (it needs `alloc`). Parallel execution is abstracted
//! behind [`rng::Executor`]; results never depend on the number of workers.

#![no_std]

extern crate alloc;

pub mod dgp;
pub mod error;
pub mod logmoments;
pub mod montecarlo;
pub mod products;
pub mod quadrature;
pub mod rng;
pub mod signed;
pub mod specfun;
pub mod surrogate;

pub use error::{Error, Result};
pub use signed::{Sign, SignedLog};
