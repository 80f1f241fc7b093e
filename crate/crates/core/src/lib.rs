//! Exact computations with the augmentation-ideal spectral sequence of free
//! complexes over modular group algebras of finite p-groups.

pub mod error;
pub mod fgcomplex;
pub mod grfun;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod obstruct;
pub mod pgroup;
pub mod realize;
pub mod specseq;

pub use error::{Error, Result};
