use std::fmt;

use thiserror::Error;

/// A single failed category law, naming the morphisms involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawViolation {
    Associativity { h: String, g: String, f: String },
    Identity { object: String, morphism: String },
    IllTypedComposite { g: String, f: String, result: String },
    MissingComposite { g: String, f: String },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails: {h}∘({g}∘{ff}) ≠ ({h}∘{g})∘{ff}")
            }
            LawViolation::Identity { object, morphism } => {
                write!(f, "identity law fails at object `{object}` for `{morphism}`")
            }
            LawViolation::IllTypedComposite { g, f: ff, result } => {
                write!(f, "composite {g}∘{ff} = {result} is ill-typed")
            }
            LawViolation::MissingComposite { g, f: ff } => {
                write!(f, "composable pair {g}∘{ff} has no composite")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum FincatError {
    #[error("category laws violated: {}", join(.0))]
    LawViolations(Vec<LawViolation>),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("element #{index} is not in the carrier at `{object}`")]
    ElementNotInCarrier { object: String, index: usize },
    #[error("presheaf action is not functorial: {0}")]
    NotFunctorial(String),
    #[error("components are not natural: {0}")]
    NotNatural(String),
    #[error("selection is not closed under the action: {0}")]
    NotSubpresheaf(String),
    #[error("morphism source is not a representable presheaf")]
    NonRepresentableSource,
    #[error("presheaves live on different sites")]
    SiteMismatch,
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("congruences live at different objects")]
    ObjectMismatch,
    #[error("budget exceeded at `{object}`: {size} {what} > cap {cap}")]
    BudgetExceeded {
        object: String,
        what: &'static str,
        size: usize,
        cap: usize,
    },
}

fn join(v: &[LawViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
