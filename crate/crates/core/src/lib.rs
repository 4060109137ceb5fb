//! Median graphs, Sageev cubulations and median sets of isometries of
//! CAT(0) cube complexes.
//!
//! Finite complexes are stored as their 1-skeleton ([`CubeComplex`]).
//! Unbounded examples are modelled as lattice-periodic subcomplexes of
//! `Z^d` ([`PeriodicComplex`]) acted on by signed permutations plus
//! translations ([`AffineIsometry`]).

pub mod canon;
pub mod catalog;
pub mod error;
pub mod exec;
pub mod io;
pub mod isometry;
pub mod lattice;
pub mod median_core;
pub mod median_set;
pub mod periodic;
pub mod random;
pub mod selftest;
pub mod wallspace;

pub use error::{Error, ErrorKind, Result};
pub use isometry::{FiniteIsometry, InvertedWall, IsometryClass, WallSet};
pub use lattice::Lattice;
pub use median_core::{CubeComplex, HyperplaneId, MedianViolation, VertexId, VertexSet};
pub use median_set::{flat_certificate, AbelianFlat, Check, Factor, MedSet, MedianDecomposition};
pub use periodic::{
    check_symmetry, roller_directions, AffineIsometry, BoxRange, DirectionClass, ExtInt, PeriodicComplex,
    PeriodicViolation, Point, RollerComponent, RollerReport, Wall, Window,
};
pub use wallspace::{
    cubical_quotient, cubulate, subalgebra_cubulation, Cubulation, QuotientMap, SubalgebraCubulation, Wallspace,
};
