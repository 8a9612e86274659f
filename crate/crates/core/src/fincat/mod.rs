//! Finite categories, presheaves on them, and quotient objects of representables.

mod category;
mod congruence;
mod error;
pub mod format;
pub mod limits;
mod presheaf;

pub use category::{FiniteCategory, MorId, Morphism, ObjId};
pub use congruence::{
    enumerate_quotient_objects, image_quotient, quotient_of_representable, quotient_pointed, RepCongruence, DEFAULT_BUDGET,
};
pub use error::{FincatError, LawViolation};
pub use presheaf::{representable, yoneda_morphism, Presheaf, PresheafMorphism};

/// Parses and validates a category document.
pub fn validate_category(raw: &format::CategoryFile) -> Result<FiniteCategory, FincatError> {
    FiniteCategory::from_file(raw)
}
