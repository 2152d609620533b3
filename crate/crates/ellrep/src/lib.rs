//! Exact arithmetic for elliptic curves given by integral Weierstrass
//! equations: invariants and minimal local reduction data, point counts
//! over small prime fields, and the mod-ell representation checks built
//! on top of them.
//!
//! Everything is integer arithmetic (`num-bigint` / machine words); no
//! floats, no randomness, no external tables. Each computation that
//! certifies a claim returns the witnesses it used, so results can be
//! re-checked independently.

pub mod arith;
pub mod error;
pub mod finite_field;
pub mod verifier;
pub mod weierstrass;
pub mod weil;

pub use error::{Error, Result};
pub use finite_field::{
    count_points, hasse_bound, hasse_interval, reduce_mod_p, trace_of_frobenius, ReducedCurve,
};
pub use verifier::{
    good_reduction_obstruction, is_irreducible, reducibility_exceptions, tate_trace_residues,
    unramified_at, verify_theorem, verify_theorem_with, Claim, IrreducibilityEvidence,
    ObstructionCheck, ReducibilityConfig, UnramifiedCheck, VerificationReport,
};
pub use weierstrass::{
    frey_curve, valuation, CurveInvariants, LocalReduction, ReductionKind, WeierstrassModel,
};
pub use weil::{
    dimension_growth_table, enumerate_trace_polys, enumerate_trace_polys_with_mode,
    excluded_prime_bound, CandidateMode, ExclusionBound, IntegerPolynomial,
};
