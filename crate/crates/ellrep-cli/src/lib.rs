//! Sweep driver and report formatting for the `ellrep` binary.
//!
//! Everything here is a thin, deterministic shell around the library:
//! workers call only pure verification functions, and a reorder buffer
//! keeps the output stream in ascending `ell` no matter how many
//! threads raced to produce it.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use anyhow::{bail, Context};
use num_bigint::BigInt;

use ellrep::{
    count_points, dimension_growth_table, frey_curve, good_reduction_obstruction,
    tate_trace_residues, trace_of_frobenius, unramified_at, verify_theorem_with, Claim,
    ReducibilityConfig, VerificationReport, WeierstrassModel,
};

/// How sweep reports are rendered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// One JSON object per line; parses back into the report type.
    #[default]
    JsonLines,
    /// A human-readable table.
    Markdown,
}

/// Settings for a verification sweep.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Lowest prime to verify; must exceed 7.
    pub ell_min: u64,
    /// Highest prime to verify (inclusive).
    pub ell_max: u64,
    /// Auxiliary good prime used by the irreducibility argument.
    pub aux_prime: u64,
    /// Prime for the trace-polynomial exclusion table.
    pub weil_p: u64,
    /// Top degree for the exclusion table.
    pub weil_max_degree: u64,
    /// Worker threads; 1 means fully sequential.
    pub parallelism: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ell_min: 11,
            ell_max: 499,
            aux_prime: 5,
            weil_p: 3,
            weil_max_degree: 2,
            parallelism: 1,
            output_format: OutputFormat::JsonLines,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.ell_min <= 7 {
            bail!(
                "ell-min must exceed 7 (got {}); smaller primes are outside the theorem",
                self.ell_min
            );
        }
        if self.ell_min > self.ell_max {
            bail!("empty sweep: ell-min {} > ell-max {}", self.ell_min, self.ell_max);
        }
        if self.weil_max_degree > ellrep::weil::DEGREE_CAP {
            bail!(
                "max-degree {} exceeds the enumeration cap {}",
                self.weil_max_degree,
                ellrep::weil::DEGREE_CAP
            );
        }
        if self.parallelism == 0 {
            bail!("jobs must be at least 1");
        }
        Ok(())
    }

    fn reducibility(&self) -> ReducibilityConfig {
        ReducibilityConfig {
            auxiliary_prime: self.aux_prime,
            ..ReducibilityConfig::default()
        }
    }
}

/// What a sweep found, independent of how it was rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    /// Primes examined, ascending.
    pub verified: Vec<u64>,
    /// The subset whose reports came back with `theorem_holds = false`.
    pub failed: Vec<u64>,
}

impl SweepSummary {
    pub fn all_hold(&self) -> bool {
        self.failed.is_empty()
    }
}

fn claim_cell(c: Claim) -> &'static str {
    match c {
        Claim::Holds => "yes",
        Claim::Fails => "NO",
        Claim::Inapplicable => "n/a",
    }
}

fn write_report(
    out: &mut dyn Write,
    format: OutputFormat,
    report: &VerificationReport,
) -> anyhow::Result<()> {
    match format {
        OutputFormat::JsonLines => {
            let line = serde_json::to_string(report).context("serializing report")?;
            writeln!(out, "{}", line)?;
        }
        OutputFormat::Markdown => {
            let exceptions = report
                .reducibility_exception_set
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(
                out,
                "| {} | {} | {} | {{{}}} | {} | {} | {} | {} |",
                report.ell,
                report.v3_min_disc,
                report.actual_a5,
                exceptions,
                claim_cell(report.irreducible),
                claim_cell(report.unramified_at_3),
                claim_cell(report.no_good_reduction_curve_at_3),
                if report.theorem_holds { "yes" } else { "NO" },
            )?;
        }
    }
    Ok(())
}

fn markdown_header(out: &mut dyn Write) -> anyhow::Result<()> {
    writeln!(
        out,
        "| ell | v3(min disc) | a5 | exceptions | irreducible | unramified at 3 | no good curve at 3 | holds |"
    )?;
    writeln!(out, "|---|---|---|---|---|---|---|---|")?;
    Ok(())
}

/// Verify every prime in `[ell_min, ell_max]`, writing one report per
/// prime in ascending order regardless of `parallelism`.
pub fn run_sweep(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<SweepSummary> {
    cfg.validate()?;
    let ells = ellrep::arith::primes_in(cfg.ell_min, cfg.ell_max);
    let rcfg = cfg.reducibility();

    if cfg.output_format == OutputFormat::Markdown {
        markdown_header(out)?;
    }

    let mut failed = Vec::new();
    let mut emit = |report: &VerificationReport| -> anyhow::Result<()> {
        if !report.theorem_holds {
            failed.push(report.ell);
        }
        write_report(out, cfg.output_format, report)
    };

    if cfg.parallelism <= 1 || ells.len() <= 1 {
        for &ell in &ells {
            let report = verify_theorem_with(ell, &rcfg)
                .with_context(|| format!("verifying ell = {}", ell))?;
            emit(&report)?;
        }
    } else {
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<(usize, ellrep::Result<VerificationReport>)>();
        std::thread::scope(|scope| -> anyhow::Result<()> {
            for _ in 0..cfg.parallelism.min(ells.len()) {
                let tx = tx.clone();
                let next = &next;
                let ells = &ells;
                let rcfg = &rcfg;
                scope.spawn(move || {
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= ells.len() {
                            break;
                        }
                        if tx.send((i, verify_theorem_with(ells[i], rcfg))).is_err() {
                            break;
                        }
                    }
                });
            }
            drop(tx);
            // reorder buffer: emit in index order as results arrive
            let mut pending: BTreeMap<usize, ellrep::Result<VerificationReport>> = BTreeMap::new();
            let mut next_out = 0usize;
            for (i, result) in rx {
                pending.insert(i, result);
                while let Some(result) = pending.remove(&next_out) {
                    let report = result
                        .with_context(|| format!("verifying ell = {}", ells[next_out]))?;
                    emit(&report)?;
                    next_out += 1;
                }
            }
            debug_assert_eq!(next_out, ells.len());
            Ok(())
        })?;
    }

    Ok(SweepSummary {
        verified: ells,
        failed,
    })
}

/// Emit the exclusion-bound table for `(cfg.weil_p, cfg.weil_max_degree)`.
pub fn run_weil_table(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    cfg.validate()?;
    let rows = dimension_growth_table(cfg.weil_p, cfg.weil_max_degree)?;
    writeln!(out, "| degree | excluded above | witness | witness product |")?;
    writeln!(out, "|---|---|---|---|")?;
    for row in &rows {
        writeln!(
            out,
            "| {} | {} | {} | {} |",
            row.degree, row.bound, row.witness, row.witness_product
        )?;
    }
    Ok(())
}

/// Point count and trace for the family member `E^ell` reduced mod `p`.
pub fn run_count(ell: u64, p: u64, out: &mut dyn Write) -> anyhow::Result<()> {
    let m = frey_curve(ell)?;
    let n = count_points(&m, p)?;
    let a = trace_of_frobenius(&m, p)?;
    writeln!(out, "E^{} mod {}: {} points, a_{} = {}", ell, p, n, p, a)?;
    Ok(())
}

// ---------- fixture battery ----------

struct FixtureCheck {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// The regression battery for the curve `y² + xy + y = x³ - 89x + 316`,
/// whose mod-7 representation is unramified at 2 yet comes from a curve
/// with multiplicative reduction there.
fn fixture_battery(model: &WeierstrassModel) -> anyhow::Result<Vec<FixtureCheck>> {
    let mut checks = Vec::new();
    let disc = model.discriminant();

    // -2^7 · 5 · 11^3 = -851840; an exact match pins the full
    // factorization, so the bad-prime list {2, 5, 11} is complete
    let expected_disc = -BigInt::from(851_840);
    checks.push(FixtureCheck {
        name: "discriminant equals -2^7 * 5 * 11^3",
        passed: disc == expected_disc,
        detail: format!("disc = {}", disc),
    });

    let at2 = model.local_data(2)?;
    checks.push(FixtureCheck {
        name: "multiplicative at 2 with v2 = 7",
        passed: at2.kind.is_multiplicative() && at2.min_disc_valuation == 7,
        detail: format!("kind {:?}, v2 = {}", at2.kind, at2.min_disc_valuation),
    });

    let unram = unramified_at(model, 2, 7)?;
    checks.push(FixtureCheck {
        name: "mod-7 representation unramified at 2",
        passed: unram.unramified,
        detail: format!("witness valuation {}", unram.disc_valuation),
    });

    let residues = tate_trace_residues(2, 7)?;
    checks.push(FixtureCheck {
        name: "trace residues at 2 are {3, 4}",
        passed: residues == (3, 4),
        detail: format!("got {:?}", residues),
    });

    let obstruction = good_reduction_obstruction(7, 2)?;
    checks.push(FixtureCheck {
        name: "no good-reduction curve at 2 realizes the traces",
        passed: obstruction.holds,
        detail: match obstruction.violating_trace {
            None => "no admissible trace matches".to_string(),
            Some(a) => format!("violated by trace {}", a),
        },
    });

    // prime-to-7 conductor support: among the bad primes {2, 5, 11},
    // the mod-7 representation stays ramified exactly where the
    // discriminant valuation is not a multiple of 7
    let at5 = model.local_data(5)?;
    let at11 = model.local_data(11)?;
    let support_is_5_11 = at5.kind.is_multiplicative()
        && at5.min_disc_valuation == 1
        && at11.kind.is_multiplicative()
        && at11.min_disc_valuation == 3
        && at2.min_disc_valuation % 7 == 0;
    checks.push(FixtureCheck {
        name: "prime-to-7 conductor support is {5, 11}, product 55",
        passed: support_is_5_11,
        detail: format!(
            "v5 = {}, v11 = {}, v2 = {} (only v2 is divisible by 7)",
            at5.min_disc_valuation, at11.min_disc_valuation, at2.min_disc_valuation
        ),
    });

    Ok(checks)
}

/// Run the fixture battery, then re-run it on a deliberately corrupted
/// model (`a4` bumped from -89 to -88) and insist something fails.
/// Returns whether the whole exercise passed.
pub fn run_fixture_checks(out: &mut dyn Write) -> anyhow::Result<bool> {
    let fixture = WeierstrassModel::new(1, 0, 1, -89, 316);
    let mut all_passed = true;
    for check in fixture_battery(&fixture)? {
        all_passed &= check.passed;
        writeln!(
            out,
            "{} {} ({})",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.detail
        )?;
    }

    let mutated = WeierstrassModel::new(1, 0, 1, -88, 316);
    let first_failure = fixture_battery(&mutated)?
        .into_iter()
        .find(|check| !check.passed);
    match first_failure {
        Some(check) => {
            writeln!(
                out,
                "ok   mutated model (a4 = -88) fails as it must, first at: {} ({})",
                check.name, check.detail
            )?;
        }
        None => {
            all_passed = false;
            writeln!(
                out,
                "FAIL mutated model (a4 = -88) passed every check; the battery is inert"
            )?;
        }
    }
    Ok(all_passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { ell_min: 7, ..Default::default() }.validate().is_err());
        assert!(
            RunConfig { ell_min: 31, ell_max: 11, ..Default::default() }
                .validate()
                .is_err()
        );
        assert!(
            RunConfig { weil_max_degree: 5, ..Default::default() }
                .validate()
                .is_err()
        );
        assert!(
            RunConfig { parallelism: 0, ..Default::default() }
                .validate()
                .is_err()
        );
    }

    #[test]
    fn singleton_sweep_emits_one_line() {
        let cfg = RunConfig { ell_min: 11, ell_max: 11, ..Default::default() };
        let mut buf = Vec::new();
        let summary = run_sweep(&cfg, &mut buf).unwrap();
        assert_eq!(summary.verified, vec![11]);
        assert!(summary.all_hold());
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        let report: VerificationReport = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(report.ell, 11);
        assert!(report.theorem_holds);
    }

    #[test]
    fn parallel_sweep_matches_sequential_byte_for_byte() {
        let sequential = {
            let cfg = RunConfig { ell_min: 11, ell_max: 61, ..Default::default() };
            let mut buf = Vec::new();
            run_sweep(&cfg, &mut buf).unwrap();
            buf
        };
        let parallel = {
            let cfg = RunConfig {
                ell_min: 11,
                ell_max: 61,
                parallelism: 4,
                ..Default::default()
            };
            let mut buf = Vec::new();
            run_sweep(&cfg, &mut buf).unwrap();
            buf
        };
        assert_eq!(sequential, parallel);
    }

    #[test]
    fn markdown_sweep_renders_rows() {
        let cfg = RunConfig {
            ell_min: 11,
            ell_max: 13,
            output_format: OutputFormat::Markdown,
            ..Default::default()
        };
        let mut buf = Vec::new();
        let summary = run_sweep(&cfg, &mut buf).unwrap();
        assert_eq!(summary.verified, vec![11, 13]);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4); // header, separator, two rows
        assert!(text.contains("| 11 | 22 | 2 | {} | yes | yes | yes | yes |"));
    }

    #[test]
    fn weil_table_output() {
        let cfg = RunConfig { weil_max_degree: 2, ..Default::default() };
        let mut buf = Vec::new();
        run_weil_table(&cfg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("| 1 | 7 | x - 3 | 7 |"));
        assert!(text.contains("| 2 | 29 | x^2 - 3*x + 1 | 145 |"));
    }

    #[test]
    fn count_output() {
        let mut buf = Vec::new();
        run_count(17, 5, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "E^17 mod 5: 8 points, a_5 = -2\n"
        );
    }

    #[test]
    fn fixture_battery_passes_and_catches_the_mutant() {
        let mut buf = Vec::new();
        assert!(run_fixture_checks(&mut buf).unwrap());
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches("ok  ").count(), 7); // six checks + mutant line
        assert!(!text.contains("FAIL"));
        assert!(text.contains("discriminant equals -2^7 * 5 * 11^3"));
        assert!(text.contains("mutated model (a4 = -88) fails as it must"));
    }
}
