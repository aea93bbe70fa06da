//! Grothendieck-group arithmetic on the special fiber.

pub mod class;
pub mod identities;
pub mod stratum;
pub mod table;

pub use class::{
    format_twist, ic_to_shriek, ic_to_star, pi_class, psi_class, psi_twist, shriek_to_ic,
    star_to_ic, Basis, Class, Generator, IcClass, KClass, ShriekClass, StarClass,
};
pub use identities::{
    verify_all, verify_identity, verify_identity_named, Identity, IdentityReport,
};
pub use stratum::{
    all_strata, binomial, strata_of_size, Stratum, DEFAULT_BRANCH_CAP, MAX_BRANCHES,
};
pub use table::SheafTable;
