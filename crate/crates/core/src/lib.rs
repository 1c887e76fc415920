//! Exact evaluation and verification of alternating triple-binomial sums
//! modulo a prime, together with the Jordan-block tensor computations over
//! GF(p) in which those sums appear as generator coefficients.

pub mod arith;
pub mod triplesums;
pub mod gfp;
pub mod tensorrep;
pub mod theoremcheck;
pub mod cli;
