//! Genus numbers and conductor counts for abelian extensions of `Q`.

pub mod arith;
pub mod asymptotics;
pub mod characters;
pub mod enumerate;
pub mod error;
pub mod exponents;
pub mod forms;
pub mod frobenian;
pub mod genus;
pub mod group;
pub mod lattice;

pub use characters::{LocalCharacter, LocalUnitStructure, ResidueCharacter};
pub use enumerate::{LocalConditionSet, SummationSeries};
pub use error::{Error, Result};
pub use exponents::DegreeOracle;
pub use genus::ExtensionRecord;
pub use group::{FiniteAbelianGroup, GroupElement, Subgroup};
