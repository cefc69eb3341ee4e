//! Exact symbolic computation in the quantum matrix ball.
//!
//! This crate realizes a q-deformation of the algebra of functions on the
//! unit ball of rectangular complex matrices, together with the quantum
//! symmetry acting on it and a positive invariant integral on the ideal of
//! finite functions. Everything is exact: coefficients are rational
//! functions in `s = q^(1/2)` over arbitrary-precision rationals, and every
//! claimed identity is a structural equality of canonical forms.
//!
//! The pieces:
//!
//! - [`scalar`] -- the ground field `Q(s)` and numeric evaluation at
//!   rational `q` in `(0, 1)`.
//! - [`algebra`] -- generators `z[a,α]`, their stars, and the delta element
//!   `f0`; a confluent normal-ordering rewriting system for the defining
//!   relations; the ideal of finite functions.
//! - [`action`] -- the Chevalley generator actions (`E_k`, `F_k`,
//!   `K_k^(±1)`) extended to products by the coproduct Leibniz rule and to
//!   starred letters through the antipode, with a mechanical covariance
//!   audit.
//! - [`harmonic`] -- the graded module spanned by `w·f0`, finite-rank
//!   operator blocks, the canonical scalar product, and the invariant
//!   integral as a twisted trace.
//! - [`parse`] / [`cli`] -- a small expression front-end and the command
//!   implementations behind the `qmball` binary.
//!
//! Start with the runnable examples (`cargo run --example normal_ordering`
//! and friends) for a tour of each capability.

pub mod action;
pub mod algebra;
pub mod cli;
pub mod harmonic;
pub mod parse;
pub mod scalar;

pub use action::{Action, CovarianceReport, GenKind, HopfConvention, QGen, Weight};
pub use algebra::{Algebra, Element, Letter, NormalMonomial, Shape, ZIndex};
pub use harmonic::{GramMatrix, Harmonic, OperatorBlock};

pub use scalar::{Rational, Scalar, ScalarError};
