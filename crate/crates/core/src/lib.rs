//! Evaluation and optimisation of debt-repayment strategies for a mixed
//! pay-as-you-go / funded pension scheme.
//!
//! The state covers the deficit years of a PAYG system as a credit; the
//! contributor invests a multiple of the deficit in a fund and repays either
//! annually ([`lump_sum`]), as one lump sum at the horizon
//! ([`credit_variant_b`]) or by continuously skimming returns above a barrier
//! ([`continuous_withdrawal`]). [`strategy_compare`] ranks the routes.
//! Everything closed-form rests on the running maximum of a drifted Brownian
//! motion ([`fund_model`]) and on the shared numerical kernels
//! ([`numerics`]).
//!
//! Monte Carlo sweeps run data-parallel through [`mc`] when the default
//! `parallel` feature is enabled and fall back to an identical sequential
//! chunk loop without it; either way the results are bit-reproducible for a
//! fixed seed.

pub mod continuous_withdrawal;
pub mod credit_variant_b;
pub mod error;
pub mod fund_model;
pub mod lump_sum;
pub mod mc;
pub mod numerics;
pub mod strategy_compare;

pub use error::{Error, Result};
pub use fund_model::{FundParams, PathSample};
