//! Error type shared by every module of the crate.

use crate::weierstrass::ReductionKind;

/// Everything that can go wrong across the crate's operations.
///
/// Variants are deliberately specific: callers (and the CLI) match on them
/// to distinguish usage mistakes from genuine mathematical refusals such as
/// [`Error::CriterionInapplicable`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument that must be prime was not.
    #[error("{n} is not prime")]
    NotPrime { n: u64 },

    /// An exponent or index below the range an operation supports.
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: u64,
        got: u64,
    },

    /// The p-adic valuation of zero is undefined.
    #[error("the {p}-adic valuation of 0 is undefined")]
    ValuationOfZero { p: u64 },

    /// A coordinate change that would leave the integers.
    ///
    /// Scaling by `u` divides the coefficient `a_i` by `u^i`; the division
    /// must be exact for the result to be another integral model.
    #[error("coordinate change is not integral: {coefficient} is not divisible as required")]
    NonIntegralTransform { coefficient: &'static str },

    /// A Weierstrass model with discriminant zero (a singular cubic).
    #[error("model is degenerate (discriminant = 0)")]
    DegenerateModel,

    /// Reduction mod p was requested at a prime dividing the discriminant.
    #[error("model has bad reduction at {p}: {p} divides the discriminant")]
    BadReductionAt { p: u64 },

    /// Point counting works over odd prime fields only.
    #[error("reduction mod 2 is not supported; counting needs an odd prime")]
    EvenCharacteristic,

    /// Exhaustive point counting is quadratic in p; refuse absurd inputs.
    #[error("p = {p} exceeds the exhaustive-counting limit {max}")]
    CountingPrimeTooLarge { p: u64, max: u64 },

    /// Two arguments that must be distinct primes coincided.
    #[error("primes must be distinct, got {p} twice")]
    PrimesNotDistinct { p: u64 },

    /// The unramifiedness criterion only speaks about multiplicative
    /// reduction; additive or unclassified reduction is neither `true`
    /// nor `false` but outside the criterion's reach.
    #[error("valuation criterion inapplicable at {p}: reduction kind is {kind:?}")]
    CriterionInapplicable { p: u64, kind: ReductionKind },

    /// A reducibility-check configuration that fails its own invariants.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    /// Trace-polynomial enumeration past the configured degree cap.
    ///
    /// The search box grows like (2 sqrt p)^(d(d+1)/2); past the cap the
    /// exhaustive sweep stops being a desk-scale computation.
    #[error(
        "degree {requested} exceeds the enumeration cap {cap}; the candidate \
         box grows like (2*sqrt(p))^(d(d+1)/2) and is no longer desk-scale"
    )]
    DegreeOverCap { requested: u64, cap: u64 },

    /// Trace-polynomial enumeration for a prime past the supported range.
    #[error("p = {p} exceeds the enumeration limit {max}")]
    WeilPrimeTooLarge { p: u64, max: u64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
