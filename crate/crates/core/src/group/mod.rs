//! Finite groups from presentations: coset enumeration, the regular
//! representation, centers, and checks of the factorization `W = Z·⟨g0⟩·X`.

mod coset;
mod finite;
mod tree;
mod word;

pub use coset::{enumerate_cosets, CosetTable, Presentation};
pub use finite::FiniteGroup;
pub use tree::{verify_factorization, verify_tree, SpanningTree, TreeEdge};
pub use word::{Letter, Word, WordParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error(transparent)]
    Parse(#[from] WordParseError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(char),
    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimit(usize),
    #[error("relator `{0}` is not the identity in the enumerated group")]
    RelatorFails(String),
    #[error("factorization sizes multiply to {got}, group order is {expected}")]
    SizeMismatch { expected: usize, got: usize },
}
