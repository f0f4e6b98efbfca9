//! Logarithmic derivation modules of hyperplane arrangements, with a focus on
//! deformations of Weyl arrangements: exact Gröbner bases for graded modules,
//! minimal free resolutions, freeness certificates and jumping lines of the
//! associated rank two bundles on the projective plane.

pub mod arrangement;
mod certify;
pub mod error;
pub mod families;
pub mod freeness;
pub mod groebner;
pub mod lattice;
pub mod linalg;
pub mod logder;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod rootsys;
pub mod scalar;
pub mod sheaf;

pub use error::{Error, Result};
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{DerivationVector, Polynomial};
pub use scalar::{Field, Fp, Rational};
