//! Exact free-field (Wakimoto-type) realization of the toroidal Lie algebra
//! of type `A_n^{(1)}` on the polynomial Fock space `C[x] ⊗ C[y]`.
//!
//! Generators act as finite differential operators on exact sparse
//! polynomials. The [`verify`] module checks the defining relations, the
//! Heisenberg relations, the auxiliary bracket identities and the Serre
//! relations mode by mode on seeded test vectors, with rational arithmetic
//! throughout.
//!
//! Module map:
//! - [`lattice`]: multi-indices, the total group order and `θ`
//! - [`formalcalc`]: formal δ-distributions, residues and the λ-transform
//! - [`cartan`]: the affine Cartan matrix
//! - [`fock`]: Fock-space vectors, grading, random test vectors
//! - [`kappa`]: central cocycle data `κ_{m,p}` and its validation
//! - [`operators`]: primitive mode operators and summable products
//! - [`realization`]: `Φ(b_i)` and the generator fields `ρ(E_r)`, `ρ(F_r)`, `ρ(H_r)`
//! - [`verify`]: relation suites and reports
//! - [`cli`]: configuration and the command-line runner

pub mod cartan;
pub mod cli;
pub mod error;
pub mod fock;
pub mod formalcalc;
pub mod kappa;
pub mod lattice;
pub mod operators;
pub mod rational;
pub mod realization;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
