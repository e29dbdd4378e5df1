//! Decision procedures for local solvability of diagonal forms
//! `x_1^n + ... + x_l^n - k`.
//!
//! A polynomial with integer coefficients is intersective exactly when it has
//! a root modulo every positive integer. For the diagonal forms handled here
//! that question reduces to finitely many prime-power moduli, and every
//! answer comes with a certificate: explicit witness tuples when the form is
//! solvable everywhere, or a modulus together with the uncovered residue
//! class when it is not.
//!
//! The crate is `no_std` (it needs `alloc`). Module layout:
//!
//! - [`arith`]: factorization, valuations, modular exponentiation, CRT.
//! - [`residues`]: n-th power residue sets with least witnesses.
//! - [`sumsets`]: iterated sumsets with witness back-pointers and the
//!   classical lower bounds used to guarantee covering.
//! - [`lifting`]: Hensel steps and the explicit lift for primes dividing the
//!   exponent, plus the per-prime lifting criterion.
//! - [`solver`]: congruence solving mod `m`, the "nicely solvable" report and
//!   exact integer representations for even exponents.
//! - [`characterize`]: default arity, critical moduli, [`decide`] and the
//!   per-arity [`table`].
//! - [`oracle`]: an independent brute-force verifier.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
mod bitset;
pub mod characterize;
mod error;
pub mod lifting;
pub mod oracle;
pub mod residues;
pub mod solver;
pub mod sumsets;

pub use bitset::BitSet;
pub use characterize::{
    critical_moduli, decide, default_arity, table, Certificate, CriticalModuli, Decision,
    DecisionBranch, Table, TableRow,
};
pub use error::{Error, Result};
pub use solver::{DiagonalForm, Witness};
