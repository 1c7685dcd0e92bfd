//! Exact Hirzebruch–Mumford covolumes of the unitary groups of
//! `L_n = diag(1, …, 1, −1)` and `M_n = diag(1, …, 1, −2)` over imaginary
//! quadratic fields `ℚ(√−d)`, the Bruinier invariant `K(Γ)` of their
//! reflection groups, and the resulting necessary conditions for the
//! algebra of hermitian automorphic forms to be free.

pub mod arith;
pub mod bruinier;
pub mod characters;
pub mod cli;
pub mod covolumes;
pub mod error;
pub mod exact_numbers;
pub mod report;
pub mod special_values;

pub use error::{Error, Result};
