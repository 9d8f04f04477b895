use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not invertible: det E = 0")]
    NotInvertible,

    #[error("degenerate (not a chain/loop atom): {0}")]
    Degenerate(String),

    #[error("map is not a group homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("group is not a subgroup of the diagonal symmetry group")]
    NotSubgroup,

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("σ does not preserve f: {0}")]
    NotPreserved(String),

    #[error("group is not invariant under the permutation {0}")]
    NotInvariant(String),

    #[error("flip automorphism present — excluded by scope (block {block}, element s^{power})")]
    Flip { block: usize, power: usize },

    #[error("out of theorem scope: {0}")]
    OutOfScope(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("oracle inapplicable: {0}")]
    OracleInapplicable(String),

    #[error("oracle cap exceeded: |G⋊S| = {order} > {cap}")]
    OracleCapExceeded { order: usize, cap: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
