//! Finite lattice toolkit for atom-generated planar (AGP) lattices.
//!
//! The crate builds finite lattices from cover relations, decides planarity
//! through two-dimensional realizers, computes the atom-profile machinery of
//! AGP lattices, enumerates small AGP lattices up to isomorphism and
//! constructs the unbounded four-atom family `K_n`. Every structural claim is
//! checked by exhaustive verification routines that report witnesses.

pub mod agp;
pub mod canon;
pub mod dot;
pub mod doc;
pub mod enumerate;
pub mod kfamily;
pub mod lattice;
pub mod planar;
pub mod report;

pub use agp::{AtomOrder, AtomProfile};
pub use canon::CanonicalForm;
pub use doc::LatticeDoc;
pub use enumerate::{Census, EnumSpec};
pub use kfamily::{KFixture, KLattice, KStep};
pub use lattice::{ElementSet, FiniteLattice, LatticeError, Poset};
pub use planar::{Boundary, LrRelation, Realizer};
pub use report::{CheckRecord, VerifyReport};

/// A failed check: a short description plus the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub what: String,
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn new(what: impl Into<String>, witness: Vec<usize>) -> Self {
        Violation {
            what: what.into(),
            witness,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (witness {:?})", self.what, self.witness)
    }
}
