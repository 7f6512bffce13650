//! Exact lattice-polytope invariants: Newton numbers, local h- and
//! h*-polynomials, mixed volumes, Euler obstructions and algebraic degrees.

#![allow(clippy::needless_range_loop)]

pub mod bitset;
pub mod classify;
pub mod complex;
pub mod corpus;
pub mod degrees;
pub mod e_newton;
pub mod ehrhart;
pub mod error;
pub mod geom;
pub mod io;
pub mod lattice;
pub mod mixed_volume;
pub mod newton;
pub mod polynomial;
pub mod poset;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use geom::{Cone, ConeFace, ConeSpec, LatticeMap, LatticePointSet, Point, Polytope};
pub use polynomial::{IntPolynomial, Rational, RationalPolynomial};
pub use poset::{FinitePoset, PosetClass, SubdivisionMap};
pub use classify::BkCertificate;
pub use corpus::CorpusEntry;
pub use degrees::{DegreeKind, DegreeQuery};
pub use e_newton::{ObstructionTable, ProjectivePoint};
pub use mixed_volume::MixedVolumeQuery;
pub use newton::NewtonReport;
