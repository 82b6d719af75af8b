//! Exact lattices, orders and ideals in crystalline graded rings `A = K◊_{σ,α}G`.
//!
//! Module map:
//! - [`exactalg`]: base rings `R`, quotient fields `K`, fractional ideals, HNF.
//! - [`crystal`]: the ring `A` itself, its validation and element arithmetic.
//! - [`lattice`]: full `R`-lattices in `A` and their calculus.
//! - [`orders`]: maximal orders, prime ideals and factorization.
//! - [`graded`]: graded lattices and the gr-versions of the above.
//! - [`oracle`]: brute-force enumerators used as independent cross-checks.
//! - [`cli`]: spec-file format and command reports.

// index loops read better than iterator chains in the matrix code
#![allow(clippy::needless_range_loop)]

pub mod exactalg;
pub mod crystal;
pub mod lattice;
pub mod orders;
pub mod graded;
pub mod oracle;
pub mod cli;
