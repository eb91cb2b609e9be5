//! Norms of homology and cohomology classes on triangulated manifolds.
//!
//! The crate is organized around three computational pillars:
//!
//! * combinatorial topology of oriented simplicial complexes with exact
//!   rational homology ([`complex`], [`homology`]),
//! * discrete Hodge theory for piecewise-flat metrics via Whitney forms
//!   ([`metric`], [`whitney`], [`pointwise`]),
//! * linear programming for the simplicial l1 seminorm and its l-infinity
//!   dual ([`lp`], [`norms`]).
//!
//! On top of these sit geodesic simplex straightening in hyperbolic space
//! ([`hyperbolic`]) and an evaluator/verifier for the explicit constant
//! chains tying the norms together ([`bounds`]). [`mesh`] holds the mesh
//! file formats and [`builtin`] a library of small reference complexes.

pub mod builtin;
pub mod bounds;
pub mod complex;
pub mod homology;
pub mod hyperbolic;
pub mod lp;
pub mod mesh;
pub mod metric;
pub mod norms;
pub mod pointwise;
pub mod whitney;

pub use complex::{Chain, Cochain, Simplex, SimplicialComplex};
pub use metric::MetricComplex;

