//! Exact-arithmetic classification engine for Inoue surfaces.
//!
//! Everything here computes with arbitrary-precision integers, rationals and
//! real quadratic irrationalities; no floating point enters the exact core.
//! The library splits into:
//!
//! - [`exact_arith`] — rationals, the field Q(√d), continued fractions and
//!   fundamental units of real quadratic orders;
//! - [`intmat`] — integer matrices, Smith/Hermite normal forms and finite
//!   quotient groups Z²/(AZ² + rZ²);
//! - [`conjugacy`] — GL(2,Z)-similarity classes of hyperbolic integer
//!   matrices via reduction cycles of indefinite binary quadratic forms,
//!   with BFS conjugation certificates;
//! - [`centralizer`] — the centraliser lattice of a hyperbolic matrix and a
//!   generator of its positive centraliser;
//! - [`moduli_core`] — the type II / type III classification pipeline:
//!   admissible α, exact eigenpairs, the c ↔ p correspondence, the Z² and
//!   star actions, orbit spaces Z_{N,r}/Z⁺ and component labels;
//! - [`cubic`] — the type I pipeline: cubic admissibility, discriminants and
//!   ideal classes of the (possibly non-maximal) cubic order Z[α];
//! - [`affine_group`] — exact affine maps of H×C, generator sets, relation
//!   verification and word normal forms.

pub mod affine_group;
pub mod centralizer;
pub mod conjugacy;
pub mod cubic;
pub mod exact_arith;
pub mod intmat;
pub mod moduli_core;
