//! Lattice problems measured by polytope gauge semi-norms.
//!
//! The crate solves shortest-vector, subspace-avoiding, closest-vector, and
//! integer feasibility/optimization problems where distance is measured by the
//! gauge (Minkowski functional) of a possibly asymmetric H-polytope. Randomized
//! sieving drives the solvers; small instances are cross-checked against exact
//! brute-force oracles that enumerate lattice points in certified boxes.
//!
//! Layering, bottom to top:
//!   rational  exact scalars, vectors, small dense matrices
//!   lp        exact rational simplex (bounding boxes, Chebyshev centers, facet minima)
//!   geometry  centered polytopes, gauges, symmetry estimation, barycenters
//!   sampling  uniform sampling over polytopes on an exact dyadic grid
//!   lattice   bases, coordinates, residues, rational subspaces
//!   oracle    exact enumeration solvers for small dimensions
//!   sieve     pair clustering, short-vector generation, SAP solvers
//!   cvp       closest-vector solvers through a one-dimension lift
//!   ip        integer feasibility and optimization over polytopes
//!   instance  JSON instance/report formats used by the CLI and FFI
//!   gen       deterministic instance generators for tests and demos

pub mod config;
pub mod cvp;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod instance;
pub mod ip;
pub mod lattice;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod sampling;
pub mod sieve;

pub use config::{SolverConfig, VerifyLevel};
pub use error::{Error, Result};
