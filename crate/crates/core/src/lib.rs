//! Exact combinatorics of the perverse sheaf of nearby cycles on a strictly
//! semi-stable special fiber with `r` smooth branches.
//!
//! Everything here is integer arithmetic: Grothendieck-group classes in the
//! intermediate-extension basis and its `j_!` / `j_*` companions, the graded
//! data of the stratification filtrations of Ψ together with their non-split
//! order constraints, the nilpotent monodromy on the graded grid, the stalk
//! spectral sequence as signed subset-inclusion complexes, and the
//! degree-interval vanishing induction for character-twisted nearby cycles.
//!
//! Twists are stored as integer numerators `a` meaning the Tate twist `(a/2)`;
//! the weight of such a piece is `-a`.

pub mod error;
pub mod filtration;
pub mod kgroup;
pub mod linalg;
pub mod monodromy;
pub mod stalks;
pub mod vanishing;

pub use error::{Error, Result};
pub use kgroup::{Class, Generator, IcClass, KClass, SheafTable, ShriekClass, StarClass, Stratum};
pub use linalg::{Characteristic, IntMatrix};
