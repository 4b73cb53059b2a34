//! Machinery for mixed Ramsey edge-colourings of complete graphs.
//!
//! The crate builds finite fields and projective planes PG(2,q), realizes
//! rotational Hamilton cycles in their incidence graphs, expands rotational
//! word encodings into special edge-colourings of K_n, decides admissibility
//! (no monochromatic K_m, no rainbow K_4), checks the associated colour
//! bounds, and searches for admissible rotational colourings by backtracking
//! or via a DIMACS CNF export.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `mixed-ramsey` binary for the same operations behind a thin
//! command-line front end.

pub mod admissibility;
pub mod bitset;
pub mod colouring;
pub mod error;
pub mod field;
pub mod plane;
pub mod search;

pub use error::Error;
