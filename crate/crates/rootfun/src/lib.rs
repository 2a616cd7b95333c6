//! Exact computation of bounded root functionals, ideal slices, and the unit
//! root functional of a square polynomial system with finitely many roots.
//!
//! Given `f = (f_1, ..., f_n)` in n variables over an exact field, the solver
//! works entirely inside the space of polynomials of total degree at most
//! `delta_f = sum(deg f_i - 1)`. It produces:
//!
//! * a basis of the restrictions of all root functionals of `f` to that
//!   bounded space (point evaluations at roots and their derivative
//!   functionals at multiple roots, in coordinate form),
//! * a basis of the intersection of the ideal `(f)` with the bounded space,
//! * the restriction of the unit root functional, certified by the Bezoutian
//!   identity it must satisfy.
//!
//! The pipeline is eight steps of exact Gaussian elimination glued together
//! by the extension operation on functionals, which is realized through
//! bordered Bezoutian determinants. Everything is deterministic; certificates
//! emitted by the CLI are byte-stable across runs.

pub mod bezoutian;
pub mod certificate;
pub mod cli;
pub mod field;
pub mod functionals;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod print;
pub mod solver;

pub use field::{Field, PrimeField, Rationals};
pub use poly::{DoublePoly, Poly, PolySystem};
pub use solver::{solve, SolveError, SolveOptions, SolveResult};
