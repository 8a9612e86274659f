//! Local state classifiers of finite presheaf topoi.
//!
//! - [`fincat`]: finite categories, presheaves, limits and quotient objects
//!   of representables.
//! - [`lsc`]: the local state classifier `Ξ`, its cocone components and its
//!   meet-semilattice structure.
//! - [`normalize`]: the normalization operator `ξ_Ξ` and finite groups.
//! - [`filters`]: internal filters of `Ξ` and the comonad they induce.
//! - [`words`]: right congruences on `Σ*` as pointed automata.

pub mod certificate;
pub mod fincat;
pub mod filters;
pub mod fixtures;
pub mod lsc;
pub mod normalize;
pub mod words;

pub use certificate::{Certificate, Verdict};
pub use lsc::{build_lsc, LocalStateClassifier};
