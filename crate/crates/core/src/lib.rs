//! Exact projection of pointed polyhedra by Fourier-Motzkin elimination with
//! LP-free redundancy removal, and a parametric LP solver built on it.

pub mod balas;
pub mod cli;
pub mod dd;
pub mod error;
pub mod fme;
pub mod io;
pub mod linalg;
pub mod minrep;
pub mod plp;
pub mod polyhedron;
pub mod testkit;

pub use error::{Error, Result};
pub use linalg::{Rat, RatMatrix, RatVector};
pub use polyhedron::{HSystem, Inequality};
