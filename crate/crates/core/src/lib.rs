//! Exact computational models for parahoric filtration quotients.
//!
//! The crate has three layers:
//!
//! * combinatorics: [`root_datum`], [`apartment`] and the symbolic lemma
//!   certification in [`commutator`] work with exact integer/rational data and
//!   never touch a group element;
//! * finite models: [`field`], [`series`] and [`group`] realize the filtration
//!   quotients `G_r(F_{q^n})` as matrices of truncated polynomial series in a
//!   canonical coset form;
//! * representation theory: [`tori`], [`dl`] and [`chartable`] build rational
//!   tori, characters with exact cyclotomic values, the closed-form trace and
//!   inner-product predictions, and the brute-force oracles (fixed-point
//!   scans, induced characters, Dixon character tables) that validate them.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod apartment;
pub mod chartable;
pub mod commutator;
pub mod cyclotomic;
pub mod dl;
pub mod error;
pub mod field;
pub mod group;
pub mod report;
pub mod root_datum;
pub mod series;
pub mod tori;

pub use apartment::{affine_frobenius, AffineRoot, ApartmentPoint, FiltrationProfile, TwistedFrobenius};
pub use chartable::{character_table, match_irreducible, CharacterTable};
pub use cyclotomic::Cyc;
pub use error::{Error, Result};
pub use field::{field, Fq};
pub use group::{GroupElement, GroupFamily, GroupSpec, SubgroupDescriptor};
pub use root_datum::{build_root_datum, Family, Rat, RootDatum, WeylElement};
pub use series::TruncatedSeries;
pub use tori::{characters_of, realize_torus, weyl_wx, Character, RationalTorusPoints, TorusSpec};
