//! Point counts of Weierstrass equations over small prime fields and the
//! trace of Frobenius they determine.
//!
//! Counting is done twice, by methods that share no code path: a
//! quadratic-character sum (always), and a brute-force scan of the full
//! `(x, y)` grid (for primes small enough that its `O(p^2)` cost is
//! negligible). The two counts are asserted equal, and the resulting
//! trace is asserted into the Hasse window `|a_p| <= 2*sqrt(p)`, so a
//! returned value has survived two independent derivations plus an
//! a-priori bound.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Zero;
use std::collections::BTreeSet;

use crate::arith;
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassModel;

/// Largest prime this module will count points over.
///
/// The character-sum count costs `O(p log p)` modular multiplications;
/// the cap keeps a single count well under a millisecond and the whole
/// pipeline's counting work trivial.
pub const MAX_COUNTING_PRIME: u64 = 10_000;

/// Primes up to this bound are cheap enough to also count by scanning
/// all `p^2` affine points, giving the redundant second count.
const DIRECT_SCAN_LIMIT: u64 = 1_000;

/// A Weierstrass equation with coefficients reduced modulo an odd prime,
/// nonsingular over that prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCurve {
    pub p: u64,
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub a4: u64,
    pub a6: u64,
}

/// Reduce a model modulo `p`, insisting the result is a smooth curve.
///
/// `p` must be an odd prime at most [`MAX_COUNTING_PRIME`]. If `p`
/// divides the discriminant of the *given equation*, the reduction is
/// singular and the count would not be that of an elliptic curve, so the
/// call is refused; pass a p-minimal model of the curve to count at a
/// prime of good reduction.
pub fn reduce_mod_p(model: &WeierstrassModel, p: u64) -> Result<ReducedCurve> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if p > MAX_COUNTING_PRIME {
        return Err(Error::CountingPrimeTooLarge {
            p,
            max: MAX_COUNTING_PRIME,
        });
    }
    let disc = model.discriminant();
    let pb = BigInt::from(p);
    if disc.mod_floor(&pb).is_zero() {
        return Err(Error::BadReductionAt { p });
    }
    let red = |x: &BigInt| u64::try_from(&x.mod_floor(&pb)).expect("residue fits u64");
    Ok(ReducedCurve {
        p,
        a1: red(&model.a1),
        a2: red(&model.a2),
        a3: red(&model.a3),
        a4: red(&model.a4),
        a6: red(&model.a6),
    })
}

impl ReducedCurve {
    /// Number of points over `F_p`, the point at infinity included.
    ///
    /// Completing the square (2 is invertible) turns the equation into
    /// `z^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`, so each `x` contributes
    /// `1 + chi(g(x))` points, `chi` the quadratic character, and
    ///
    /// ```text
    ///     N = p + 1 + sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6).
    /// ```
    ///
    /// For small `p` the full grid scan recomputes `N` from the raw
    /// equation and the two values are asserted equal.
    pub fn count_points(&self) -> u64 {
        let n = self.count_by_character_sum();
        if self.p <= DIRECT_SCAN_LIMIT {
            assert_eq!(
                n,
                self.count_by_grid_scan(),
                "character-sum and grid-scan counts disagree at p = {}",
                self.p
            );
        }
        n
    }

    /// Trace of Frobenius `a_p = p + 1 - N`, asserted into the Hasse
    /// window.
    pub fn trace_of_frobenius(&self) -> i64 {
        let n = self.count_points();
        let a = self.p as i64 + 1 - n as i64;
        assert!(
            a.unsigned_abs() <= hasse_bound(self.p),
            "trace {} escapes the Hasse bound at p = {}",
            a,
            self.p
        );
        a
    }

    fn count_by_character_sum(&self) -> u64 {
        let p = self.p;
        let b2 = (arith::mulmod(self.a1, self.a1, p) + 4 * self.a2) % p;
        let b4_twice = (2 * arith::mulmod(self.a1, self.a3, p) + 4 * self.a4) % p;
        let b6 = (arith::mulmod(self.a3, self.a3, p) + 4 * self.a6) % p;
        let mut n = p as i64 + 1;
        for x in 0..p {
            let x2 = arith::mulmod(x, x, p);
            let x3 = arith::mulmod(x2, x, p);
            let g = (4 * x3 % p + arith::mulmod(b2, x2, p) + arith::mulmod(b4_twice, x, p) + b6)
                % p;
            n += arith::legendre(g, p) as i64;
        }
        u64::try_from(n).expect("point count is positive")
    }

    fn count_by_grid_scan(&self) -> u64 {
        let p = self.p;
        let mut n = 1; // the point at infinity
        for x in 0..p {
            let x2 = arith::mulmod(x, x, p);
            let x3 = arith::mulmod(x2, x, p);
            let rhs = (x3 + arith::mulmod(self.a2, x2, p) + arith::mulmod(self.a4, x, p)
                + self.a6)
                % p;
            let a1x_a3 = (arith::mulmod(self.a1, x, p) + self.a3) % p;
            for y in 0..p {
                let lhs = (arith::mulmod(y, y, p) + arith::mulmod(a1x_a3, y, p)) % p;
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }
}

/// Count the points of `model` reduced modulo `p` (see [`reduce_mod_p`]
/// for the preconditions).
pub fn count_points(model: &WeierstrassModel, p: u64) -> Result<u64> {
    Ok(reduce_mod_p(model, p)?.count_points())
}

/// Trace of Frobenius of `model` at a prime of good reduction.
pub fn trace_of_frobenius(model: &WeierstrassModel, p: u64) -> Result<i64> {
    Ok(reduce_mod_p(model, p)?.trace_of_frobenius())
}

/// `floor(2*sqrt(p))`, the Hasse bound on `|a_p|`, computed exactly as
/// the integer square root of `4p`.
pub fn hasse_bound(p: u64) -> u64 {
    (4 * p).sqrt()
}

/// Every integer the trace of Frobenius at `p` could possibly be: the
/// closed interval `[-floor(2*sqrt(p)), floor(2*sqrt(p))]`.
pub fn hasse_interval(p: u64) -> BTreeSet<i64> {
    let b = hasse_bound(p) as i64;
    (-b..=b).collect()
}
