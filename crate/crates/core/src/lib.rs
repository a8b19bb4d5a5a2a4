//! Two-generator Möbius groups described by their principal characters
//! `(gamma, beta, beta_tilde) = (tr[f,g] - 2, tr^2 f - 4, tr^2 g - 4)`.
//!
//! The crate covers matrix arithmetic and classification, the exceptional
//! (elementary) characters, a layered discreteness filter with an orbit search
//! over a polynomial semigroup, slice scanning, and explicit matrix families.

pub mod characters;
pub mod complex;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod filter;
pub mod io;
pub mod moebius;
pub mod tables;

pub use characters::{
    character_of, project, subgroup_character, zext_characters, DihedralDiagnosis, PrincipalCharacter, SlicePoint,
};
pub use complex::{format_complex, parse_complex, Complex};
pub use config::Config;
pub use dynamics::{iterate, scan_slice, semigroup_search, OrbitRecord, PixelClass, Raster, Word, Window};
pub use error::{Error, Result};
pub use families::{dehn_surgery_point, dehn_sweep, realize, DehnFamilyPoint, RealizedPair};
pub use filter::{discreteness_filter, FilterReport, Verdict};
pub use moebius::{beta, classify, commutator, complex_distance, fricke_gamma, gamma, AxisDistance, ElementClass, MoebiusMap};
pub use tables::{exceptional_tables, match_exceptional, regenerate_table_entry, ExceptionalEntry, GroupName};
