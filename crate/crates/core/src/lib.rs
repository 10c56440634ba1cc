//! Exact computations for invariant generalized complex structures on real
//! flag manifolds of split simple Lie groups.

pub mod btransform;
pub mod chevalley;
pub mod courant;
pub mod error;
pub mod gtangent;
pub mod linalg;
pub mod mclass;
pub mod rootsys;
pub mod scalar;

pub use error::{Error, Result};
