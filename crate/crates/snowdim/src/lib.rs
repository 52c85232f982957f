//! Numerics and combinatorics for self-similar snowspheres.
//!
//! The crate has two halves that meet in the dimension formulas:
//!
//! * **Dynamics on the Riemann sphere** — overflow-safe projective points
//!   ([`sphere`]), polynomial root finding ([`poly`]), rational maps with
//!   critical-orbit portraits ([`ratmap`]), orbifold signatures
//!   ([`orbifold`]), Birkhoff-sum Lyapunov estimates ([`ergodic`]) and the
//!   invariant-density sequence κ_j ([`density`]).
//! * **Combinatorics of subdivision complexes** — N-generators, iterated
//!   subdivision into j-cylinders and the chain metric d_j ([`snowcomb`]).
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, and the `snowdim` binary for the CSV-producing subcommands.

pub mod config;
pub mod density;
pub mod ergodic;
pub mod orbifold;
pub mod poly;
pub mod ratmap;
pub mod report;
pub mod snowcomb;
pub mod sphere;

pub use ratmap::RationalMap;
pub use sphere::{RngStream, SpherePoint};
