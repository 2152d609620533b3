//! Enumeration of trace candidates: monic integer polynomials whose
//! roots are all real and lie in the closed interval `[-2√p, 2√p]`,
//! and the largest-prime exclusion bounds they generate.
//!
//! The point of the exercise: a trace value `c` attached to a
//! hypothetical modular realization of dimension `d` is an algebraic
//! integer of degree at most `d` whose conjugates obey the Weil bound
//! at `p`, and it must satisfy `c ≡ ±(p+1)` modulo a prime above
//! `ell`. So `ell` divides `m(p+1)·m(-(p+1))` for `m` the minimal
//! polynomial of `c` — a nonzero integer, since `p+1 > 2√p`. Taking
//! the largest prime factor of those products over *every* candidate
//! `m` of degree up to `d` yields a bound above which no prime `ell`
//! admits a realization of dimension `≤ d`; the bound grows with `d`.
//!
//! Certification is exact everywhere: Sturm chains over arbitrary-
//! precision integers, with signs at the irrational endpoints `±2√p`
//! decided by comparing `A²` against `4p·B²` for the evaluation
//! `A + B·2√p`. Endpoint roots (`x² - 4p` factors, e.g. `x² - 12` at
//! `p = 3`) are divided out first, so the closed interval is handled
//! without ε-fudging. Enumeration prunes by the derivative: every
//! derivative of an admissible polynomial is admissible (Rolle), and
//! the `(d-j)`-th derivative depends only on the top `j+1`
//! coefficients, so whole coefficient-prefix subtrees are cut.

use num_bigint::BigInt;
use num_integer::{binomial, Integer, Roots};
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::arith;
use crate::error::{Error, Result};

/// Hard cap on the enumeration degree. The candidate space grows like
/// `(2√p)^(d(d+1)/2)` before pruning, which is why the cap is small.
pub const DEGREE_CAP: u64 = 4;

/// Largest prime the enumerator accepts; keeps the worst admitted
/// `(p, DEGREE_CAP)` search comfortably fast.
pub const MAX_WEIL_PRIME: u64 = 13;

/// Raw coefficient-box enumeration refuses to walk more candidates
/// than this.
const BOX_ENUMERATION_LIMIT: u128 = 10_000_000;

/// How the candidate set is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateMode {
    /// Keep only polynomials with all roots real in `[-2√p, 2√p]`,
    /// certified exactly. The default.
    TotallyRealInterval,
    /// Keep everything in the elementary-symmetric coefficient box
    /// `|e_k| ≤ C(d,k)·(2√p)^k` — a strict superset of the above
    /// (complex roots of absolute value `≤ 2√p` allowed, and then
    /// some). Sound for exclusion bounds, much larger, and only
    /// feasible for small boxes.
    CoefficientBox,
}

/// A monic polynomial with integer coefficients, degree at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPolynomial {
    /// Low-to-high; last entry is 1.
    coefficients: Vec<BigInt>,
}

impl IntegerPolynomial {
    /// Wrap a monic coefficient list (constant term first).
    pub fn from_coefficients(low_to_high: Vec<BigInt>) -> Result<Self> {
        if low_to_high.len() < 2 {
            return Err(Error::TooSmall {
                what: "polynomial degree",
                min: 1,
                got: low_to_high.len().saturating_sub(1) as u64,
            });
        }
        if !low_to_high.last().expect("nonempty").is_one() {
            return Err(Error::InvalidConfig {
                reason: "polynomial must be monic".to_string(),
            });
        }
        Ok(IntegerPolynomial {
            coefficients: low_to_high,
        })
    }

    pub fn degree(&self) -> u64 {
        (self.coefficients.len() - 1) as u64
    }

    /// Coefficients, constant term first, leading 1 last.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.coefficients.len() - 1;
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if i == 0 || !mag.is_one() {
                write!(f, "{}", mag)?;
                if i > 0 {
                    f.write_str("*")?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        if first {
            f.write_str("0")?; // unreachable for monic polys; stay total
        }
        let _ = d;
        Ok(())
    }
}

/// The largest prime an exclusion sweep failed to rule out, with its
/// witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionBound {
    pub p: u64,
    /// Candidates of every degree up to this one were swept.
    pub degree: u64,
    /// Largest prime dividing some witness product; every prime above
    /// it forces dimension > `degree`.
    pub bound: u64,
    /// First candidate (lowest degree, then enumeration order) whose
    /// product attains the bound.
    pub witness: IntegerPolynomial,
    pub witness_degree: u64,
    /// `|witness(p+1) · witness(-(p+1))|`.
    pub witness_product: BigInt,
}

// ---------- exact interval certification ----------

fn poly_deg(f: &[BigInt]) -> usize {
    f.len().saturating_sub(1)
}

fn normalize(mut f: Vec<BigInt>) -> Vec<BigInt> {
    while f.len() > 1 && f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
    if f.is_empty() {
        f.push(BigInt::zero());
    }
    f
}

fn poly_is_zero(f: &[BigInt]) -> bool {
    f.iter().all(|c| c.is_zero())
}

fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    if f.len() <= 1 {
        return vec![BigInt::zero()];
    }
    normalize(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Divide by the gcd of the coefficients (a positive scalar), keeping
/// signs.
fn primitive_part(f: Vec<BigInt>) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for c in &f {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        return f;
    }
    f.into_iter().map(|c| c / &content).collect()
}

/// Next Sturm-chain element: the negated remainder of `prev` modulo
/// `cur`, up to a positive scalar. Computed fraction-free: the
/// pseudo-remainder picks up a factor `lc(cur)^steps`, whose sign is
/// compensated before negating.
fn sturm_next(prev: &[BigInt], cur: &[BigInt]) -> Vec<BigInt> {
    let m = cur.last().expect("nonempty").clone();
    let mut f = prev.to_vec();
    let mut steps = 0u32;
    while !poly_is_zero(&f) && poly_deg(&f) >= poly_deg(cur) {
        let delta = poly_deg(&f) - poly_deg(cur);
        let lead = f.last().expect("nonempty").clone();
        for c in f.iter_mut() {
            *c *= &m;
        }
        for (i, c) in cur.iter().enumerate() {
            f[i + delta] -= &lead * c;
        }
        steps += 1;
        f = normalize(f);
    }
    // f = m^steps * (true remainder); flip to the NEGATED remainder up
    // to a positive factor
    let flip_sign = !(m.is_negative() && steps % 2 == 1);
    if flip_sign {
        for c in f.iter_mut() {
            *c = -&*c;
        }
    }
    primitive_part(normalize(f))
}

/// Sturm chain of `f`: starts `f, f'`, ends at (a positive multiple
/// of) `gcd(f, f')`.
fn sturm_chain(f: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let mut chain = vec![f.clone(), derivative(&f)];
    while poly_deg(chain.last().expect("nonempty")) >= 1 {
        let next = sturm_next(&chain[chain.len() - 2], chain.last().expect("nonempty"));
        if poly_is_zero(&next) {
            break;
        }
        chain.push(next);
    }
    chain
}

/// Sign of `f(±√q)` for nonsquare `q > 0`: split `f(±√q) = A ± B·√q`
/// with integer `A, B` and compare `A²` against `q·B²`.
fn sign_at_sqrt(f: &[BigInt], q: u64, negative_branch: bool) -> i8 {
    let qb = BigInt::from(q);
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut q_pow = BigInt::one();
    for pair in f.chunks(2) {
        a += &pair[0] * &q_pow;
        if let Some(odd) = pair.get(1) {
            b += odd * &q_pow;
        }
        q_pow *= &qb;
    }
    if negative_branch {
        b = -b;
    }
    match (a.sign(), b.sign()) {
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => 0,
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus)
        | (num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
            let diff = &a * &a - qb * &b * &b;
            let dominant_is_a = diff.is_positive();
            let tie = diff.is_zero();
            if tie {
                0
            } else if dominant_is_a {
                if a.is_positive() {
                    1
                } else {
                    -1
                }
            } else if b.is_positive() {
                1
            } else {
                -1
            }
        }
        (a_sign, b_sign) => {
            if a_sign == num_bigint::Sign::Minus || b_sign == num_bigint::Sign::Minus {
                -1
            } else {
                1
            }
        }
    }
}

fn sign_variations(signs: impl IntoIterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last: Option<i8> = None;
    for s in signs {
        if s == 0 {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Exact division of `f` by `x² - q` when the remainder vanishes.
fn divide_out_endpoint_factor(f: &[BigInt], q: u64) -> Option<Vec<BigInt>> {
    let n = poly_deg(f);
    if n < 2 {
        return None;
    }
    let qb = BigInt::from(q);
    let mut work = f.to_vec();
    let mut quo = vec![BigInt::zero(); n - 1];
    for i in (2..=n).rev() {
        let c = std::mem::replace(&mut work[i], BigInt::zero());
        work[i - 2] += &c * &qb;
        quo[i - 2] = c;
    }
    if work[0].is_zero() && work[1].is_zero() {
        Some(normalize(quo))
    } else {
        None
    }
}

/// Whether every root of the integer polynomial `f` (complex roots
/// included, multiplicity included) is real and lies in the closed
/// interval `[-√q, √q]`. `q` must be 4·(a prime), hence never a
/// perfect square.
fn totally_real_in_interval(f: &[BigInt], q: u64) -> bool {
    let mut f = normalize(f.to_vec());
    if poly_is_zero(&f) {
        return false;
    }
    // peel off exact endpoint factors x² - q (roots ±√q, admissible)
    while let Some(rest) = divide_out_endpoint_factor(&f, q) {
        f = rest;
    }
    if poly_deg(&f) == 0 {
        return true;
    }
    // x² - q is irreducible, so now f(±√q) ≠ 0 and the Sturm counts
    // over [-√q, √q] are clean
    let chain = sturm_chain(f.clone());
    let gcd_degree = poly_deg(chain.last().expect("nonempty"));
    let at_lo = sign_variations(chain.iter().map(|c| sign_at_sqrt(c, q, true)));
    let at_hi = sign_variations(chain.iter().map(|c| sign_at_sqrt(c, q, false)));
    // distinct roots in the interval must exhaust the squarefree degree
    at_lo - at_hi == poly_deg(&f) - gcd_degree
}

// ---------- enumeration ----------

/// `⌊C(d,k) · q^(k/2)⌋` — the elementary-symmetric coefficient bound.
fn coefficient_bound(d: u64, k: u64, q: u64) -> i64 {
    let c: u128 = binomial(u128::from(d), u128::from(k));
    let val = c * c * u128::from(q).pow(k as u32);
    i64::try_from(val.sqrt()).expect("coefficient bound fits i64")
}

/// The `(d-j)`-th derivative of `x^d + Σ c_i x^i`, which depends only
/// on the top coefficients `top = [c_{d-1}, ..., c_{d-j}]`.
fn prefix_derivative(d: u64, top: &[i64]) -> Vec<BigInt> {
    let j = top.len() as u64;
    let order = d - j; // differentiate this many times
    let mut out = vec![BigInt::zero(); top.len() + 1];
    for (m, coeff) in std::iter::once(1i64).chain(top.iter().copied()).enumerate() {
        let n = d - m as u64; // exponent in f
        let mut falling = BigInt::one();
        for t in (n - order + 1)..=n {
            falling *= BigInt::from(t);
        }
        out[(j - m as u64) as usize] = BigInt::from(coeff) * falling;
    }
    out
}

fn validated(p: u64, d: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime { n: p });
    }
    if p > MAX_WEIL_PRIME {
        return Err(Error::WeilPrimeTooLarge {
            p,
            max: MAX_WEIL_PRIME,
        });
    }
    if d == 0 {
        return Err(Error::TooSmall {
            what: "enumeration degree",
            min: 1,
            got: 0,
        });
    }
    if d > DEGREE_CAP {
        return Err(Error::DegreeOverCap {
            requested: d,
            cap: DEGREE_CAP,
        });
    }
    Ok(())
}

/// All monic integer polynomials of degree exactly `d` whose roots are
/// all real and lie in `[-2√p, 2√p]`, in ascending lexicographic order
/// of `(c_{d-1}, ..., c_0)`.
pub fn enumerate_trace_polys(p: u64, d: u64) -> Result<Vec<IntegerPolynomial>> {
    enumerate_trace_polys_with_mode(p, d, CandidateMode::TotallyRealInterval)
}

/// As [`enumerate_trace_polys`], under the chosen [`CandidateMode`].
pub fn enumerate_trace_polys_with_mode(
    p: u64,
    d: u64,
    mode: CandidateMode,
) -> Result<Vec<IntegerPolynomial>> {
    validated(p, d)?;
    let q = 4 * p;
    let bounds: Vec<i64> = (1..=d).map(|k| coefficient_bound(d, k, q)).collect();
    if mode == CandidateMode::CoefficientBox {
        let box_size: u128 = bounds
            .iter()
            .map(|b| 2 * (*b as u128) + 1)
            .product();
        if box_size > BOX_ENUMERATION_LIMIT {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "coefficient box for p = {}, degree {} holds {} candidates \
                     (limit {}); use the pruned mode",
                    p, d, box_size, BOX_ENUMERATION_LIMIT
                ),
            });
        }
    }
    let mut results = Vec::new();
    let mut top = Vec::with_capacity(d as usize);
    enumerate_level(p, d, q, mode, &bounds, &mut top, &mut results);
    Ok(results)
}

fn enumerate_level(
    p: u64,
    d: u64,
    q: u64,
    mode: CandidateMode,
    bounds: &[i64],
    top: &mut Vec<i64>,
    results: &mut Vec<IntegerPolynomial>,
) {
    let j = top.len();
    let bound = bounds[j];
    for c in -bound..=bound {
        top.push(c);
        let keep = match mode {
            CandidateMode::CoefficientBox => true,
            CandidateMode::TotallyRealInterval => {
                totally_real_in_interval(&prefix_derivative(d, top), q)
            }
        };
        if keep {
            if top.len() as u64 == d {
                let mut coeffs: Vec<BigInt> =
                    top.iter().rev().map(|&c| BigInt::from(c)).collect();
                coeffs.push(BigInt::one());
                results.push(IntegerPolynomial {
                    coefficients: coeffs,
                });
            } else {
                enumerate_level(p, d, q, mode, bounds, top, results);
            }
        }
        top.pop();
    }
    let _ = p;
}

// ---------- exclusion bounds ----------

/// Exclusion data for each degree `1..=d_max`: the largest prime
/// dividing some `m(p+1)·m(-(p+1))` over all candidates of degree up
/// to `d`, with its first witness. Nondecreasing in the degree by
/// construction.
pub fn dimension_growth_table(p: u64, d_max: u64) -> Result<Vec<ExclusionBound>> {
    validated(p, d_max)?;
    let t_plus = BigInt::from(p + 1);
    let t_minus = BigInt::from(-(p as i64 + 1));
    let mut rows: Vec<ExclusionBound> = Vec::new();
    let mut best: Option<(u64, IntegerPolynomial, u64, BigInt)> = None;
    for k in 1..=d_max {
        for m in enumerate_trace_polys(p, k)? {
            let product = (m.eval(&t_plus) * m.eval(&t_minus)).abs();
            assert!(
                !product.is_zero(),
                "p + 1 > 2sqrt(p), so no candidate vanishes at ±(p+1)"
            );
            let value = u128::try_from(&product).expect("product fits u128");
            if value == 1 {
                // e.g. x² - 8 at p = 2 evaluates to 1 at both ±3:
                // nonzero, but contributes no primes
                continue;
            }
            let largest = arith::largest_prime_factor(value);
            if best.as_ref().map_or(true, |(b, _, _, _)| largest > *b) {
                best = Some((largest, m, k, product));
            }
        }
        let (bound, witness, witness_degree, witness_product) =
            best.clone().expect("degree >= 1 sweeps are nonempty");
        rows.push(ExclusionBound {
            p,
            degree: k,
            bound,
            witness,
            witness_degree,
            witness_product,
        });
    }
    Ok(rows)
}

/// The last row of [`dimension_growth_table`]: the bound after
/// sweeping every degree up to `d`.
pub fn excluded_prime_bound(p: u64, d: u64) -> Result<ExclusionBound> {
    Ok(dimension_growth_table(p, d)?
        .pop()
        .expect("table has one row per degree"))
}
