//! The acceptance battery: one test per headline claim, each printing
//! a single pass/fail line. Run with `--nocapture` to see the lines
//! even when everything is green.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ellrep::{
    count_points, excluded_prime_bound, frey_curve, good_reduction_obstruction,
    reducibility_exceptions, tate_trace_residues, trace_of_frobenius, valuation, verify_theorem,
    ReducibilityConfig, VerificationReport, WeierstrassModel,
};
use ellrep_cli::{run_fixture_checks, run_sweep, RunConfig};

fn conclude(number: u32, description: &str, ok: bool) {
    println!(
        "acceptance {:02}: {} - {}",
        number,
        if ok { "pass" } else { "FAIL" },
        description
    );
    assert!(ok, "acceptance criterion {:02} failed: {}", number, description);
}

#[test]
fn acceptance_01_full_sweep_under_ten_seconds() {
    let started = Instant::now();
    let cfg = RunConfig {
        ell_min: 11,
        ell_max: 499,
        parallelism: 1,
        ..RunConfig::default()
    };
    let mut buf = Vec::new();
    let summary = run_sweep(&cfg, &mut buf).unwrap();
    let elapsed = started.elapsed();
    let ok = summary.verified.len() == 91
        && summary.all_hold()
        && buf.iter().filter(|&&b| b == b'\n').count() == 91
        && elapsed.as_secs_f64() < 10.0;
    conclude(
        1,
        &format!(
            "all 91 primes in [11, 499] verified single-threaded in {:.2?}",
            elapsed
        ),
        ok,
    );
}

#[test]
fn acceptance_02_point_count_at_17_mod_5() {
    let m = frey_curve(17).unwrap();
    let n = count_points(&m, 5).unwrap();
    let a = trace_of_frobenius(&m, 5).unwrap();
    conclude(
        2,
        &format!("E^17 mod 5 has {} points with a_5 = {}", n, a),
        n == 8 && a == -2,
    );
}

#[test]
fn acceptance_03_exception_sets_vanish_except_17() {
    let cfg = ReducibilityConfig::default();
    let mut ok = true;
    for ell in ellrep::arith::primes_in(11, 499) {
        let exceptions = reducibility_exceptions(ell, &cfg).unwrap();
        let expected_empty = ell != 17;
        if expected_empty {
            ok &= exceptions.is_empty();
        } else {
            ok &= exceptions.into_iter().collect::<Vec<_>>() == vec![-1, 1];
        }
    }
    conclude(
        3,
        "reducibility exceptions are empty for 11..499 except {+1, -1} at 17",
        ok,
    );
}

#[test]
fn acceptance_04_the_ell_7_example_curve() {
    let mut buf = Vec::new();
    let ok = run_fixture_checks(&mut buf).unwrap();
    conclude(
        4,
        "y^2 + xy + y = x^3 - 89x + 316: disc -2^7*5*11^3, v2 = 7, unramified \
         mod 7 at 2, obstruction holds at 2, conductor support {5, 11}",
        ok,
    );
}

#[test]
fn acceptance_05_threshold_is_sharp_at_7() {
    let at7 = good_reduction_obstruction(7, 3).unwrap();
    let mut ok = !at7.holds;
    for ell in ellrep::arith::primes_in(11, 499) {
        ok &= good_reduction_obstruction(ell, 3).unwrap().holds;
    }
    conclude(
        5,
        "a good-reduction trace matches at ell = 7 but at no prime in [11, 499]",
        ok,
    );
}

#[test]
fn acceptance_06_minimal_discriminant_law() {
    let mut ok = true;
    for ell in ellrep::arith::primes_in(11, 499) {
        let m = frey_curve(ell).unwrap();
        let t = BigInt::from(3).pow(u32::try_from(ell).unwrap());
        let closed_form = BigInt::from(16) * &t * &t * (&t + 1) * (&t + 1);
        ok &= m.discriminant() == closed_form;
        ok &= valuation(&closed_form, 3).unwrap() == 2 * ell;
        ok &= m.local_data(3).unwrap().min_disc_valuation == 2 * ell;
    }
    conclude(
        6,
        "v3 of the minimal discriminant is 2*ell for every prime in [11, 499], \
         by minimalization and by the closed form",
        ok,
    );
}

#[test]
fn acceptance_07_exclusion_bounds() {
    let d1 = excluded_prime_bound(3, 1).unwrap();
    let d2 = excluded_prime_bound(3, 2).unwrap();
    let ok = d1.bound == 7 && d2.bound == 29 && d1.bound <= d2.bound;
    conclude(
        7,
        &format!(
            "excluded-prime bounds at p = 3: degree 1 gives {}, degree 2 gives {}",
            d1.bound, d2.bound
        ),
        ok,
    );
}

#[test]
fn acceptance_08_randomized_property_suite() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0E11_7E57);
    let mut ok = true;

    // invariant identities on 10^4 random integral models
    for _ in 0..10_000 {
        let m = WeierstrassModel::new(
            rng.gen_range(-50i64..=50),
            rng.gen_range(-500i64..=500),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-5_000i64..=5_000),
            rng.gen_range(-5_000i64..=5_000),
        );
        let inv = m.invariants();
        ok &= &inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6
            == BigInt::from(1728) * &inv.disc;
        ok &= BigInt::from(4) * &inv.b8 == &inv.b2 * &inv.b6 - &inv.b4 * &inv.b4;
    }

    // dual-oracle point counts and Hasse bound on 10^3 good-reduction
    // curves at primes up to 97 (count_points itself asserts the
    // character-sum and direct-scan totals agree)
    let primes = ellrep::arith::primes_in(3, 97);
    let mut counted = 0usize;
    while counted < 1_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let m = WeierstrassModel::new(
            rng.gen_range(0i64..=5),
            rng.gen_range(-30i64..=30),
            rng.gen_range(0i64..=5),
            rng.gen_range(-200i64..=200),
            rng.gen_range(-200i64..=200),
        );
        if (m.discriminant() % BigInt::from(p)).is_zero() {
            continue;
        }
        let n = count_points(&m, p).unwrap();
        let a = trace_of_frobenius(&m, p).unwrap();
        ok &= a.unsigned_abs() <= ellrep::hasse_bound(p);
        ok &= i64::try_from(n).unwrap() == p as i64 + 1 - a;
        counted += 1;
    }

    // serialized reports parse back unchanged
    for ell in [11u64, 13, 17, 19] {
        let report = verify_theorem(ell).unwrap();
        let back: VerificationReport =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        ok &= back == report;
    }
    // and the trace-residue helper stays consistent with its inputs
    ok &= tate_trace_residues(3, 11).unwrap() == (4, 7);

    let elapsed = started.elapsed();
    ok &= elapsed.as_secs_f64() < 30.0;
    conclude(
        8,
        &format!(
            "10^4 invariant identities, 10^3 dual-counted curves, and JSON \
             round-trips in {:.2?}",
            elapsed
        ),
        ok,
    );
}
