//! The per-prime verification pipeline and its ingredients: the
//! discriminant-valuation unramifiedness test, trace congruences at a
//! prime of multiplicative reduction, the reducibility congruence
//! solver, and the good-reduction obstruction.
//!
//! The chain of reasoning, for the curve `E = frey_curve(ell)`:
//!
//! 1. `E` is bad at 2 and 3 and good at 5 and `ell` (local reduction
//!    data), and semistable outside 2 (every odd bad prime is
//!    multiplicative — certified without factoring the discriminant).
//! 2. The valuation of the minimal discriminant at 3 is divisible by
//!    `ell`, so the mod-`ell` representation of `E` is unramified at 3
//!    despite the bad reduction.
//! 3. The representation is irreducible: were it reducible, its trace
//!    at the auxiliary prime 5 would satisfy `a ≡ r + 5 r^{-1} (mod
//!    ell)` for some `r` with `r^4 = 1`; the solver intersects those
//!    congruences with the Hasse window at 5 and the actual `a_5` never
//!    lands in the intersection.
//! 4. No elliptic curve with good reduction at 3 can carry the same
//!    representation: its trace at 3 would satisfy `t ≡ ±4 (mod ell)`
//!    inside the Hasse window at 3, which is empty for `ell > 7`.
//!
//! Every step returns its witnesses; [`verify_theorem`] composes them
//! into a [`VerificationReport`] whose claims are tri-state
//! ([`Claim`]), so "the criterion does not apply" is never conflated
//! with "the claim is false".

use num_integer::Integer;
use num_traits::{One, Signed};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::finite_field::{self, hasse_interval};
use crate::weierstrass::{frey_curve, ReductionKind, WeierstrassModel};

/// Odd prime divisors of the discriminant are searched for by trial
/// division up to this bound; each one found is explicitly checked to
/// be multiplicative.
pub const TRIAL_DIVISION_BOUND: u64 = 10_000;

/// Constants bounding the character through which a hypothetical
/// reducible mod-`ell` representation would factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibilityConfig {
    /// Upper bound for the 2-part of the conductor of any elliptic
    /// curve over the rationals.
    pub max_curve_conductor_2part: u64,
    /// Conductor bound for the character: its square divides the curve
    /// conductor's 2-part.
    pub max_character_conductor: u64,
    /// Order bound for the character: the exponent of the unit group
    /// modulo `max_character_conductor`.
    pub max_character_order: u64,
    /// Good-reduction prime where traces are compared.
    pub auxiliary_prime: u64,
}

impl Default for ReducibilityConfig {
    fn default() -> Self {
        ReducibilityConfig {
            max_curve_conductor_2part: 256,
            max_character_conductor: 16,
            max_character_order: 4,
            auxiliary_prime: 5,
        }
    }
}

impl ReducibilityConfig {
    /// Check the internal consistency of the constants.
    pub fn validate(&self) -> Result<()> {
        if !arith::is_prime(self.auxiliary_prime) || self.auxiliary_prime == 2 {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "auxiliary prime {} must be an odd prime",
                    self.auxiliary_prime
                ),
            });
        }
        if self.auxiliary_prime > finite_field::MAX_COUNTING_PRIME {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "auxiliary prime {} exceeds the counting cap {}",
                    self.auxiliary_prime,
                    finite_field::MAX_COUNTING_PRIME
                ),
            });
        }
        let sq = self
            .max_character_conductor
            .checked_mul(self.max_character_conductor);
        if sq.map_or(true, |sq| sq > self.max_curve_conductor_2part) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "character conductor {} squared must divide into the curve conductor bound {}",
                    self.max_character_conductor, self.max_curve_conductor_2part
                ),
            });
        }
        let exponent = arith::unit_group_exponent(self.max_character_conductor);
        if self.max_character_order != exponent {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "character order {} is not the unit-group exponent {} modulo {}",
                    self.max_character_order, exponent, self.max_character_conductor
                ),
            });
        }
        Ok(())
    }
}

/// A verified statement: established, refuted, or outside the reach of
/// the criterion that was tried.
///
/// Serializes to JSON `true` / `false` / `null` respectively, so a
/// criterion that did not apply is never silently read as "false".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Holds,
    Fails,
    Inapplicable,
}

impl Claim {
    pub fn holds(self) -> bool {
        matches!(self, Claim::Holds)
    }
}

impl From<bool> for Claim {
    fn from(b: bool) -> Self {
        if b {
            Claim::Holds
        } else {
            Claim::Fails
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Claim::Holds => s.serialize_bool(true),
            Claim::Fails => s.serialize_bool(false),
            Claim::Inapplicable => s.serialize_unit(),
        }
    }
}

impl<'de> Deserialize<'de> for Claim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ClaimVisitor;
        impl<'de> Visitor<'de> for ClaimVisitor {
            type Value = Claim;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("true, false, or null")
            }
            fn visit_bool<E: de::Error>(self, v: bool) -> std::result::Result<Claim, E> {
                Ok(Claim::from(v))
            }
            fn visit_unit<E: de::Error>(self) -> std::result::Result<Claim, E> {
                Ok(Claim::Inapplicable)
            }
            fn visit_none<E: de::Error>(self) -> std::result::Result<Claim, E> {
                Ok(Claim::Inapplicable)
            }
        }
        d.deserialize_any(ClaimVisitor)
    }
}

/// Decimal-string (de)serialization for the integer report fields, so
/// downstream consumers never lose width on large values.
macro_rules! decimal_string_modules {
    ($($mod_name:ident : $ty:ty),* $(,)?) => {$(
        mod $mod_name {
            use serde::de::Error as _;
            use serde::{Deserialize, Deserializer, Serializer};

            pub fn serialize<S: Serializer>(
                v: &$ty,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(v)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<$ty, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(D::Error::custom)
            }
        }
    )*};
}

decimal_string_modules!(dec_u64: u64, dec_i64: i64);

mod dec_u64_seq {
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[u64],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<u64>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| t.parse().map_err(D::Error::custom)).collect()
    }
}

mod dec_u64_pair {
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &(u64, u64),
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&v.0.to_string())?;
        seq.serialize_element(&v.1.to_string())?;
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<(u64, u64), D::Error> {
        let texts = <[String; 2]>::deserialize(d)?;
        Ok((
            texts[0].parse().map_err(D::Error::custom)?,
            texts[1].parse().map_err(D::Error::custom)?,
        ))
    }
}

mod dec_i64_set {
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeSet;

    pub fn serialize<S: Serializer>(
        v: &BTreeSet<i64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeSet<i64>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| t.parse().map_err(D::Error::custom)).collect()
    }
}

/// Everything [`verify_theorem`] establishes for one prime, with the
/// witnesses needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(with = "dec_u64")]
    pub ell: u64,
    pub bad_at_2: Claim,
    pub bad_at_3: Claim,
    pub good_at_5: Claim,
    pub good_at_ell: Claim,
    pub semistable_outside_2: Claim,
    /// Odd bad primes found by trial division and explicitly confirmed
    /// multiplicative (the semistability claim covers all the rest via
    /// the gcd certificate).
    #[serde(with = "dec_u64_seq")]
    pub checked_odd_bad_primes: Vec<u64>,
    #[serde(with = "dec_u64")]
    pub v3_min_disc: u64,
    pub unramified_at_3: Claim,
    #[serde(with = "dec_u64_pair")]
    pub tate_residues_at_3: (u64, u64),
    #[serde(with = "dec_i64_set")]
    pub reducibility_exception_set: BTreeSet<i64>,
    #[serde(with = "dec_i64")]
    pub actual_a5: i64,
    pub irreducible: Claim,
    pub no_good_reduction_curve_at_3: Claim,
    pub theorem_holds: bool,
}

/// Result of the discriminant-valuation unramifiedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedCheck {
    pub p: u64,
    pub ell: u64,
    pub reduction: ReductionKind,
    /// The witness: valuation of the minimal discriminant at `p`.
    pub disc_valuation: u64,
    /// Whether the certificate holds: multiplicative reduction with
    /// `disc_valuation ≡ 0 (mod ell)`.
    pub unramified: bool,
}

/// Evidence produced by [`is_irreducible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityEvidence {
    pub ell: u64,
    pub auxiliary_prime: u64,
    /// Traces a reducible representation could have shown.
    pub exception_set: BTreeSet<i64>,
    /// Trace the curve actually has.
    pub actual_trace: i64,
    pub irreducible: bool,
}

/// Outcome of [`good_reduction_obstruction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCheck {
    pub ell: u64,
    pub p: u64,
    /// `{+(p+1), -(p+1)}` reduced mod `ell`, smaller residue first.
    pub residues: (u64, u64),
    /// A Hasse-window trace matching one of the residues, if any.
    pub violating_trace: Option<i64>,
    /// True when no such trace exists.
    pub holds: bool,
}

/// Whether the mod-`ell` representation of `model` is certified
/// unramified at `p` by the multiplicative-reduction valuation test:
/// the reduction at `p` is multiplicative and the valuation of the
/// minimal discriminant is divisible by `ell`.
///
/// Good reduction returns `unramified: false` — the representation is
/// of course unramified there, but not by *this* certificate; additive
/// or unclassified reduction is an error, because then the test can
/// neither pass nor fail meaningfully.
pub fn unramified_at(model: &WeierstrassModel, p: u64, ell: u64) -> Result<UnramifiedCheck> {
    for q in [p, ell] {
        if !arith::is_prime(q) {
            return Err(Error::NotPrime { n: q });
        }
    }
    if p == ell {
        return Err(Error::PrimesNotDistinct { p });
    }
    let local = model.local_data(p)?;
    match local.kind {
        ReductionKind::Additive | ReductionKind::UnclassifiedAt2 => {
            Err(Error::CriterionInapplicable { p, kind: local.kind })
        }
        kind => Ok(UnramifiedCheck {
            p,
            ell,
            reduction: kind,
            disc_valuation: local.min_disc_valuation,
            unramified: kind.is_multiplicative() && local.min_disc_valuation % ell == 0,
        }),
    }
}

/// The two residues `±(p+1) mod ell` — the only values the trace of
/// Frobenius at `p` can take, mod `ell`, for a representation that at
/// `p` looks like a curve with multiplicative reduction. Returned with
/// the smaller residue first.
pub fn tate_trace_residues(p: u64, ell: u64) -> Result<(u64, u64)> {
    for q in [p, ell] {
        if !arith::is_prime(q) {
            return Err(Error::NotPrime { n: q });
        }
    }
    if p == ell {
        return Err(Error::PrimesNotDistinct { p });
    }
    let plus = (p + 1) % ell;
    let minus = (ell - plus) % ell;
    Ok((plus.min(minus), plus.max(minus)))
}

/// Traces a *reducible* mod-`ell` representation could exhibit at the
/// auxiliary prime: integers `a` in the Hasse window with
/// `a ≡ r + q·r^{-1} (mod ell)` for some `r` with
/// `r^max_character_order ≡ 1`, `q` the auxiliary prime.
///
/// The roots `r` are enumerated directly (at most 4 of them), so the
/// returned set is exactly the solvable one — no spurious solutions
/// from squaring tricks.
pub fn reducibility_exceptions(ell: u64, cfg: &ReducibilityConfig) -> Result<BTreeSet<i64>> {
    cfg.validate()?;
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime { n: ell });
    }
    if ell < 11 {
        return Err(Error::TooSmall {
            what: "reducibility-solver prime",
            min: 11,
            got: ell,
        });
    }
    let aux = cfg.auxiliary_prime;
    if ell == aux {
        return Err(Error::PrimesNotDistinct { p: ell });
    }
    let mut out = BTreeSet::new();
    for r in 1..ell {
        if arith::powmod(r, cfg.max_character_order, ell) != 1 {
            continue;
        }
        let target = (r + arith::mulmod(aux % ell, arith::invmod_prime(r, ell), ell)) % ell;
        for a in hasse_interval(aux) {
            if a.rem_euclid(ell as i64) as u64 == target {
                out.insert(a);
            }
        }
    }
    Ok(out)
}

/// Irreducibility of the mod-`ell` representation of `model`, decided
/// by comparing the actual trace at the auxiliary prime against the
/// reducible-case exception set.
pub fn is_irreducible(
    model: &WeierstrassModel,
    ell: u64,
    cfg: &ReducibilityConfig,
) -> Result<IrreducibilityEvidence> {
    let exception_set = reducibility_exceptions(ell, cfg)?;
    let actual_trace = finite_field::trace_of_frobenius(model, cfg.auxiliary_prime)?;
    Ok(IrreducibilityEvidence {
        ell,
        auxiliary_prime: cfg.auxiliary_prime,
        irreducible: !exception_set.contains(&actual_trace),
        exception_set,
        actual_trace,
    })
}

/// Whether a representation whose trace at `p` is forced into
/// `±(p+1) mod ell` can come from an elliptic curve with *good*
/// reduction at `p`: scans the Hasse window at `p` for a matching
/// trace. `holds: true` means no curve with good reduction at `p`
/// fits.
pub fn good_reduction_obstruction(ell: u64, p: u64) -> Result<ObstructionCheck> {
    let residues = tate_trace_residues(p, ell)?;
    let violating_trace = hasse_interval(p).into_iter().find(|t| {
        let r = t.rem_euclid(ell as i64) as u64;
        r == residues.0 || r == residues.1
    });
    Ok(ObstructionCheck {
        ell,
        p,
        residues,
        holds: violating_trace.is_none(),
        violating_trace,
    })
}

/// Semistability outside 2, certified without factoring: if the odd
/// part of `gcd(c4, disc)` is 1, every odd prime dividing the
/// discriminant leaves `c4` a unit, which makes the given model
/// p-minimal with a nodal reduction — multiplicative. Odd bad primes
/// found by trial division are additionally run through `local_data`
/// as an explicit spot check; if trial division happens to factor the
/// discriminant completely, that check alone is exhaustive.
fn semistability_outside_2(model: &WeierstrassModel) -> Result<(Claim, Vec<u64>)> {
    let inv = model.invariants();
    let gcd = inv.c4.gcd(&inv.disc);
    let odd_part_trivial = {
        let mut g = gcd.abs();
        let two = num_bigint::BigInt::from(2);
        while g.is_even() {
            g /= &two;
        }
        g.is_one()
    };
    let (factors, cofactor) = arith::small_prime_factors(&inv.disc, TRIAL_DIVISION_BOUND);
    let mut checked = Vec::new();
    for (p, _) in factors.iter().filter(|(p, _)| *p != 2) {
        if !model.local_data(*p)?.kind.is_multiplicative() {
            return Ok((Claim::Fails, checked));
        }
        checked.push(*p);
    }
    let claim = if odd_part_trivial || cofactor.abs().is_one() {
        Claim::Holds
    } else {
        // odd bad primes may hide beyond the trial-division bound
        Claim::Inapplicable
    };
    Ok((claim, checked))
}

/// Run the whole pipeline for one prime `ell > 7` with the default
/// configuration.
pub fn verify_theorem(ell: u64) -> Result<VerificationReport> {
    verify_theorem_with(ell, &ReducibilityConfig::default())
}

/// Run the whole pipeline for one prime `ell > 7`.
///
/// `theorem_holds` is the conjunction of every claim in the report;
/// a claim whose criterion turned out inapplicable keeps it false.
pub fn verify_theorem_with(ell: u64, cfg: &ReducibilityConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if !arith::is_prime(ell) {
        return Err(Error::NotPrime { n: ell });
    }
    if ell <= 7 {
        return Err(Error::TooSmall {
            what: "verified prime",
            min: 11,
            got: ell,
        });
    }
    let model = frey_curve(ell)?;

    let at2 = model.local_data(2)?;
    let bad_at_2 = match at2.kind {
        ReductionKind::Good => Claim::Fails,
        ReductionKind::UnclassifiedAt2 => {
            // below 12 the given valuation is certainly minimal, so the
            // curve is certainly bad; at 12 or above we cannot be sure
            if at2.min_disc_valuation < 12 {
                Claim::Holds
            } else {
                Claim::Inapplicable
            }
        }
        _ => Claim::Holds,
    };

    let at3 = model.local_data(3)?;
    let bad_at_3 = Claim::from(at3.kind != ReductionKind::Good);
    let good_at_5 = Claim::from(model.local_data(5)?.kind == ReductionKind::Good);
    let good_at_ell = Claim::from(model.local_data(ell)?.kind == ReductionKind::Good);

    let (semistable_outside_2, checked_odd_bad_primes) = semistability_outside_2(&model)?;

    let unramified_at_3 = match unramified_at(&model, 3, ell) {
        Ok(check) => Claim::from(check.unramified),
        Err(Error::CriterionInapplicable { .. }) => Claim::Inapplicable,
        Err(e) => return Err(e),
    };

    let tate_residues_at_3 = tate_trace_residues(3, ell)?;
    let evidence = is_irreducible(&model, ell, cfg)?;
    let obstruction = good_reduction_obstruction(ell, 3)?;

    let report = VerificationReport {
        ell,
        bad_at_2,
        bad_at_3,
        good_at_5,
        good_at_ell,
        semistable_outside_2,
        checked_odd_bad_primes,
        v3_min_disc: at3.min_disc_valuation,
        unramified_at_3,
        tate_residues_at_3,
        reducibility_exception_set: evidence.exception_set,
        actual_a5: evidence.actual_trace,
        irreducible: Claim::from(evidence.irreducible),
        no_good_reduction_curve_at_3: Claim::from(obstruction.holds),
        theorem_holds: false,
    };
    let all_claims = [
        report.bad_at_2,
        report.bad_at_3,
        report.good_at_5,
        report.good_at_ell,
        report.semistable_outside_2,
        report.unramified_at_3,
        report.irreducible,
        report.no_good_reduction_curve_at_3,
    ];
    Ok(VerificationReport {
        theorem_holds: all_claims.iter().all(|c| c.holds()),
        ..report
    })
}
