//! Named verification campaigns.
//!
//! Each check draws seeded random matrices and compares two independently
//! computed sides of an identity with exact equality. Trials run
//! concurrently; the report is the same for any schedule.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::berkowitz::{adjoint, adjoint_poly, char_poly, determinant, Mode};
use crate::clow::{analyze_involution, clow_sum_coefficients, minor_sum_coefficients};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::matrix_file;
use crate::random::TrialRng;
use crate::ring::{RingElement, RingSpec};

/// Largest size accepted by checks that enumerate combinatorial objects.
pub const ORACLE_SIZE_CAP: usize = 5;
/// Largest size accepted by purely algebraic checks.
pub const ALGEBRAIC_SIZE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Samuelson,
    AdjointIdentity,
    CayleyHamilton,
    DetMultiplicative,
    ClowEquivalence,
    MinorEquivalence,
    InvolutionSuite,
    BerkowitzStructure3x3,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Samuelson,
        Check::AdjointIdentity,
        Check::CayleyHamilton,
        Check::DetMultiplicative,
        Check::ClowEquivalence,
        Check::MinorEquivalence,
        Check::InvolutionSuite,
        Check::BerkowitzStructure3x3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Samuelson => "samuelson",
            Check::AdjointIdentity => "adjoint_identity",
            Check::CayleyHamilton => "cayley_hamilton",
            Check::DetMultiplicative => "det_multiplicative",
            Check::ClowEquivalence => "clow_equivalence",
            Check::MinorEquivalence => "minor_equivalence",
            Check::InvolutionSuite => "involution_suite",
            Check::BerkowitzStructure3x3 => "berkowitz_structure_3x3",
        }
    }

    pub fn size_cap(self) -> usize {
        match self {
            Check::ClowEquivalence | Check::MinorEquivalence | Check::InvolutionSuite => {
                ORACLE_SIZE_CAP
            }
            _ => ALGEBRAIC_SIZE_CAP,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub ring: String,
    pub size: usize,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Lexicographically smallest serialized failing input.
    pub first_counterexample: Option<String>,
    /// Check-specific counters.
    pub stats: BTreeMap<String, u64>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Line-oriented `key: value` rendering. The counterexample, if any,
    /// follows as indented lines.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "check: {}", self.check_name);
        let _ = writeln!(out, "ring: {}", self.ring);
        let _ = writeln!(out, "size: {}", self.size);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "trials: {}", self.trials);
        for (k, v) in &self.stats {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "failures: {}", self.failures);
        let _ = writeln!(
            out,
            "status: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        let _ = writeln!(out, "elapsed_ms: {}", self.elapsed.as_millis());
        if let Some(cx) = &self.first_counterexample {
            let _ = writeln!(out, "counterexample:");
            for line in cx.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }
}

/// Outcome of one trial: `Ok(None)` on success, `Ok(Some(input))` on a
/// mismatch.
type TrialOutcome = Result<Option<String>>;

/// Run a named check with `trials` seeded trials of size `size`.
pub fn run_check(
    check: Check,
    size: usize,
    trials: usize,
    seed: u64,
    ring: RingSpec,
    enum_cap: u64,
) -> Result<VerificationReport> {
    validate_size(check, size, ring)?;
    let started = Instant::now();
    let mut stats = BTreeMap::new();

    let outcomes: Vec<TrialOutcome> = if check == Check::InvolutionSuite {
        let analysis = analyze_involution(size, size, None, enum_cap)?;
        stats.insert("sequences".to_string(), analysis.sequences as u64);
        stats.insert(
            "fixed_points".to_string(),
            analysis.fixed_points.len() as u64,
        );
        stats.insert("swap_pairs".to_string(), analysis.pairs.len() as u64);
        let mut outcomes: Vec<TrialOutcome> = analysis
            .violations
            .iter()
            .map(|(cs, law)| Ok(Some(format!("{cs}: {law}"))))
            .collect();
        outcomes.extend(
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    involution_weight_trial(
                        size,
                        &mut TrialRng::new(seed, t as u64),
                        ring,
                        enum_cap,
                    )
                })
                .collect::<Vec<_>>(),
        );
        outcomes
    } else {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = TrialRng::new(seed, t as u64);
                run_trial(check, size, &mut rng, ring, enum_cap)
            })
            .collect()
    };

    let mut failures = 0;
    let mut first: Option<String> = None;
    for outcome in outcomes {
        if let Some(cx) = outcome? {
            failures += 1;
            if first.as_ref().is_none_or(|f| cx < *f) {
                first = Some(cx);
            }
        }
    }
    Ok(VerificationReport {
        check_name: check.name().to_string(),
        ring: ring.to_string(),
        size,
        seed,
        trials,
        failures,
        first_counterexample: first,
        stats,
        elapsed: started.elapsed(),
    })
}

fn validate_size(check: Check, size: usize, ring: RingSpec) -> Result<()> {
    let invalid = |reason| Error::InvalidSize {
        check: check.name(),
        size,
        reason,
    };
    if size > check.size_cap() {
        return Err(Error::SizeOverCap {
            check: check.name(),
            size,
            cap: check.size_cap(),
        });
    }
    if size == 0 {
        return Err(invalid("size must be at least 1"));
    }
    match check {
        Check::Samuelson if size < 2 => {
            Err(invalid("needs n >= 2 so the principal block is nonempty"))
        }
        Check::BerkowitzStructure3x3 if size != 3 => Err(invalid("only defined for 3x3 inputs")),
        Check::Samuelson | Check::AdjointIdentity => match ring.modulus() {
            Some(p) if p < size as u64 + 2 => {
                Err(invalid("prime field has fewer than n+2 evaluation points"))
            }
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}

fn run_trial(
    check: Check,
    n: usize,
    rng: &mut TrialRng,
    ring: RingSpec,
    enum_cap: u64,
) -> TrialOutcome {
    let a = rng.matrix(ring, n);
    let ok = match check {
        Check::Samuelson => samuelson_holds(&a)?,
        Check::AdjointIdentity => adjoint_identity_holds(&a)?,
        Check::CayleyHamilton => cayley_hamilton_holds(&a)?,
        Check::DetMultiplicative => {
            let b = rng.matrix(ring, n);
            if !det_multiplicative_holds(&a, &b)? {
                return Ok(Some(format!(
                    "{}{}",
                    matrix_file::print(&a),
                    matrix_file::print(&b)
                )));
            }
            true
        }
        Check::ClowEquivalence => {
            char_poly(&a, Mode::Sequential)?.coeffs == clow_sum_coefficients(&a, enum_cap)?
        }
        Check::MinorEquivalence => {
            char_poly(&a, Mode::Sequential)?.coeffs == minor_sum_coefficients(&a, enum_cap)?
        }
        Check::BerkowitzStructure3x3 => structure_3x3_holds(&a)?,
        Check::InvolutionSuite => unreachable!("handled by run_check"),
    };
    Ok((!ok).then(|| matrix_file::print(&a)))
}

/// `n + 2` distinct sample points `0, 1, ..., n+1`.
fn sample_points(spec: RingSpec, n: usize) -> impl Iterator<Item = RingElement> {
    (0..n as i64 + 2).map(move |x| spec.from_i64(x))
}

/// `p(x) = (x - a_11) q(x) - R B(x) S` at `n + 2` points, where `q` and
/// `B` belong to the trailing principal block `M`.
pub fn samuelson_holds(a: &Matrix) -> Result<bool> {
    let n = a.require_square()?;
    let spec = a.spec();
    let blocks = a.decompose(1)?;
    let p = char_poly(a, Mode::Sequential)?;
    let q = char_poly(&blocks.principal, Mode::Sequential)?;
    let b = adjoint_poly(&blocks.principal)?;
    for x in sample_points(spec, n) {
        let rbs = blocks
            .row_block
            .multiply(&b.evaluate(&x)?)?
            .multiply(&blocks.col_block)?;
        let rhs = &(&(&x - &blocks.pivot) * &q.evaluate(&x)) - &rbs.entries()[0];
        if p.evaluate(&x) != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B(x)(xI - M) = q(x) I` at `n + 2` points, and `A adj(A) = adj(A) A =
/// det(A) I`.
pub fn adjoint_identity_holds(m: &Matrix) -> Result<bool> {
    let n = m.require_square()?;
    let spec = m.spec();
    let q = char_poly(m, Mode::Sequential)?;
    let b = adjoint_poly(m)?;
    for x in sample_points(spec, n) {
        let shifted = Matrix::scalar(spec, n, &x).sub(m)?;
        if b.evaluate(&x)?.multiply(&shifted)? != Matrix::scalar(spec, n, &q.evaluate(&x)) {
            return Ok(false);
        }
    }
    let adj = adjoint(m)?;
    let det_i = Matrix::scalar(spec, n, &determinant(m)?);
    Ok(m.multiply(&adj)? == det_i && adj.multiply(m)? == det_i)
}

/// `p(A) = 0`.
pub fn cayley_hamilton_holds(a: &Matrix) -> Result<bool> {
    let p = char_poly(a, Mode::Sequential)?;
    let value = p.evaluate_matrix(a)?;
    Ok(value.entries().iter().all(RingElement::is_zero))
}

/// `det(AB) = det(A) det(B)`.
pub fn det_multiplicative_holds(a: &Matrix, b: &Matrix) -> Result<bool> {
    Ok(determinant(&a.multiply(b)?)? == &determinant(a)? * &determinant(b)?)
}

/// The four rows relating `p = char_poly(A)` to `q = char_poly(M)` for a
/// 3x3 matrix, with `RS` and `RMS` formed by plain matrix products.
pub fn structure_3x3_holds(a: &Matrix) -> Result<bool> {
    let blocks = a.decompose(1)?;
    if blocks.principal.rows() != 2 {
        return Err(Error::InvalidSize {
            check: Check::BerkowitzStructure3x3.name(),
            size: a.rows(),
            reason: "only defined for 3x3 inputs",
        });
    }
    let p = char_poly(a, Mode::Sequential)?.coeffs;
    let q = char_poly(&blocks.principal, Mode::Sequential)?.coeffs;
    let a11 = &blocks.pivot;
    let rs = blocks.row_block.multiply(&blocks.col_block)?.entries()[0].clone();
    let rms = blocks
        .row_block
        .multiply(&blocks.principal)?
        .multiply(&blocks.col_block)?
        .entries()[0]
        .clone();
    let expected = [
        q[0].clone(),
        &-&(a11 * &q[0]) + &q[1],
        &(&-&(&rs * &q[0]) - &(a11 * &q[1])) + &q[2],
        &(&-&(&rms * &q[0]) - &(&rs * &q[1])) - &(a11 * &q[2]),
    ];
    Ok(p == expected)
}

/// Weight preservation of the involution on one random matrix.
fn involution_weight_trial(
    n: usize,
    rng: &mut TrialRng,
    ring: RingSpec,
    enum_cap: u64,
) -> TrialOutcome {
    let a = rng.matrix(ring, n);
    let analysis = analyze_involution(n, n, Some(&a), enum_cap)?;
    Ok((!analysis.violations.is_empty()).then(|| matrix_file::print(&a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clow::DEFAULT_ENUM_CAP;

    fn run(check: Check, n: usize, trials: usize, seed: u64, ring: RingSpec) -> VerificationReport {
        run_check(check, n, trials, seed, ring, DEFAULT_ENUM_CAP).unwrap()
    }

    #[test]
    fn cayley_hamilton_mod_101() {
        let r = run(
            Check::CayleyHamilton,
            4,
            50,
            42,
            RingSpec::prime_field(101).unwrap(),
        );
        assert_eq!(r.failures, 0);
        assert!(r.first_counterexample.is_none());
        assert_eq!(r.trials, 50);
    }

    #[test]
    fn clow_equivalence_scalar() {
        let r = run(Check::ClowEquivalence, 1, 1, 9, RingSpec::Integer);
        assert_eq!(r.failures, 0);
    }

    #[test]
    fn structure_3x3_integers() {
        let r = run(Check::BerkowitzStructure3x3, 3, 20, 7, RingSpec::Integer);
        assert_eq!(r.failures, 0);
    }

    #[test]
    fn involution_suite_counts() {
        let r = run(Check::InvolutionSuite, 3, 4, 1, RingSpec::Integer);
        assert_eq!(r.failures, 0);
        assert_eq!(r.stats["sequences"], 12);
        assert_eq!(r.stats["fixed_points"], 6);
        assert_eq!(r.stats["swap_pairs"], 3);
    }

    #[test]
    fn every_check_passes_small() {
        let rings = [
            RingSpec::Integer,
            RingSpec::Rational,
            RingSpec::prime_field(101).unwrap(),
        ];
        for check in Check::ALL {
            let n = if check == Check::BerkowitzStructure3x3 {
                3
            } else {
                4
            };
            for ring in rings {
                let r = run(check, n, 5, 3, ring);
                assert!(r.passed(), "{}", r.render_text());
            }
        }
    }

    #[test]
    fn size_errors() {
        let z = RingSpec::Integer;
        assert!(matches!(
            run_check(Check::ClowEquivalence, 9, 1, 0, z, DEFAULT_ENUM_CAP),
            Err(Error::SizeOverCap { .. })
        ));
        assert!(matches!(
            run_check(Check::CayleyHamilton, 17, 1, 0, z, DEFAULT_ENUM_CAP),
            Err(Error::SizeOverCap { .. })
        ));
        assert!(matches!(
            run_check(Check::BerkowitzStructure3x3, 4, 1, 0, z, DEFAULT_ENUM_CAP),
            Err(Error::InvalidSize { .. })
        ));
        assert!(matches!(
            run_check(
                Check::Samuelson,
                4,
                1,
                0,
                RingSpec::prime_field(5).unwrap(),
                DEFAULT_ENUM_CAP
            ),
            Err(Error::InvalidSize { .. })
        ));
        assert!(matches!(
            "nope".parse::<Check>(),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let f = RingSpec::prime_field(101).unwrap();
        let a = run(Check::Samuelson, 5, 10, 11, f);
        let b = run(Check::Samuelson, 5, 10, 11, f);
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.first_counterexample, b.first_counterexample);
    }

    #[test]
    fn broken_identity_is_caught() {
        // a wrong Cayley-Hamilton evaluation must be detected: shift A by I
        let f = RingSpec::prime_field(101).unwrap();
        let a = TrialRng::new(5, 0).matrix(f, 3);
        let p = char_poly(&a, Mode::Sequential).unwrap();
        let shifted = a.add(&Matrix::identity(f, 3)).unwrap();
        let value = p.evaluate_matrix(&shifted).unwrap();
        assert!(!value.entries().iter().all(RingElement::is_zero));
    }

    #[test]
    fn text_rendering() {
        let mut r = run(Check::InvolutionSuite, 3, 1, 1, RingSpec::Integer);
        r.elapsed = Duration::from_millis(3);
        assert_eq!(
            r.render_text(),
            "check: involution_suite\nring: int\nsize: 3\nseed: 1\ntrials: 1\n\
             fixed_points: 6\nsequences: 12\nswap_pairs: 3\nfailures: 0\nstatus: PASS\nelapsed_ms: 3\n"
        );
    }
}
