//! Exact computation of algebraic differential operators, derivations and
//! jet modules over finite-dimensional associative algebras.
//!
//! Everything reduces to linear algebra over `Q` or `GF(p)`: algebras and
//! bimodules are given by structure constants, operator spaces are solved
//! as canonical subspaces, and every identity is checked on basis tuples.

#![allow(clippy::needless_range_loop)]

pub mod algcore;
pub mod bimod;
pub mod commdiff;
pub mod error;
pub mod exactla;
pub mod io;
pub mod jetmod;
pub mod ncdiff;

pub use algcore::{AlgElem, Algebra, BuiltinSpec};
pub use bimod::{Bimodule, HomKind, HomSpace, LinMap};
pub use error::{Error, Result};
pub use exactla::{Field, Mat, Scalar, Subspace};
