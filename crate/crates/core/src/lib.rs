#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod apfloat;
pub mod arith;
pub mod diophantine;
pub mod error;
pub mod galois;
pub mod invariants;
pub mod modular;
pub mod poly;
pub mod quadratic;
