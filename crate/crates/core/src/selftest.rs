//! The acceptance suite: ten seeded, deterministic criteria exercising the
//! whole pipeline. The CLI `selftest` subcommand and the acceptance
//! integration tests both run these.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cf::{
    convergents, detect_period, euler_matrix, expand, lagrange_expansion, qproduct_check,
    qproduct_residual, vrelation_check, vrelation_residual, CertifyConfig, DigitSequence,
    PeriodOutcome,
};
use crate::corpus::Corpus;
use crate::error::Result;
use crate::gaussian::{Decision, Dyadic, Rat};
use crate::lattice::{dirichlet_reduce, DomainConfig};
use crate::numfield::{colinearity_certificate, fixed_point_of, RootSelector};
use crate::scalar::Scalar;
use crate::unitary::{
    dagger_word_identity_check, decompose_power4, is_root_of_unity, verify_unitary, UnitaryMatrix,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub details: String,
}

/// Scale factors for the sampled criteria: the full profile matches the
/// stated acceptance sizes, the quick profile shrinks them for fast
/// deterministic smoke runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Full,
    Quick,
}

impl Profile {
    fn scale(&self, n: usize) -> usize {
        match self {
            Profile::Full => n,
            Profile::Quick => (n / 10).max(2),
        }
    }
}

pub const CRITERION_COUNT: u32 = 10;

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "diagonal enumeration",
        2 => "generator identities",
        3 => "decomposition round trip",
        4 => "pairing vanishes iff projectively equal",
        5 => "euler direction",
        6 => "lagrange direction closed loop",
        7 => "algorithmic periodicity (best effort)",
        8 => "rational termination",
        9 => "reduction bound",
        10 => "orbit product and fixed-point identities",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u32, seed: u64, profile: Profile) -> CriterionReport {
    let outcome = match id {
        1 => criterion_diagonals(),
        2 => criterion_generator_identities(seed, profile),
        3 => criterion_decompose_roundtrip(seed, profile),
        4 => criterion_relation_iff(seed, profile),
        5 => criterion_euler(seed, profile),
        6 => criterion_lagrange(seed, profile),
        7 => criterion_periodicity(seed, profile),
        8 => criterion_rational_termination(seed, profile),
        9 => criterion_reduction_bound(seed, profile),
        10 => criterion_orbit_identities(seed, profile),
        _ => Err(crate::error::Error::MalformedInput(format!(
            "no criterion {id}"
        ))),
    };
    match outcome {
        Ok(details) => CriterionReport {
            id,
            name: criterion_name(id).into(),
            pass: true,
            details,
        },
        Err(e) => CriterionReport {
            id,
            name: criterion_name(id).into(),
            pass: false,
            details: e.to_string(),
        },
    }
}

pub fn run_all(seed: u64, profile: Profile) -> Vec<CriterionReport> {
    (1..=CRITERION_COUNT)
        .map(|id| run_criterion(id, seed, profile))
        .collect()
}

fn fail(msg: String) -> crate::error::Error {
    crate::error::Error::CertificationFailed(msg)
}

/// Criterion 1: exactly the eight diagonal matrices, each of order
/// dividing 4 and commuting with J.
fn criterion_diagonals() -> Result<String> {
    let ds = UnitaryMatrix::diagonals();
    if ds.len() != 8 {
        return Err(fail(format!("{} diagonals, expected 8", ds.len())));
    }
    // diag(d, e, d) for d in {1,-1,i,-i}, e in {1,-1}
    let mut expected = Vec::new();
    for d in crate::gaussian::GaussianInteger::units() {
        for e in [
            crate::gaussian::GaussianInteger::one(),
            -&crate::gaussian::GaussianInteger::one(),
        ] {
            let z = crate::gaussian::GaussianInteger::zero;
            expected.push(UnitaryMatrix::new([
                [d.clone(), z(), z()],
                [z(), e.clone(), z()],
                [z(), z(), d.clone()],
            ])?);
        }
    }
    for e in &expected {
        if !ds.contains(e) {
            return Err(fail("an expected diagonal is missing".into()));
        }
    }
    let j = UnitaryMatrix::j();
    for d in &ds {
        if !d.pow(4).is_identity() {
            return Err(fail("a diagonal has order > 4".into()));
        }
        if d.mul(&j) != j.mul(d) {
            return Err(fail("a diagonal does not commute with J".into()));
        }
    }
    Ok("8 diagonals, D^4 = I and DJ = JD exactly".into())
}

/// Criterion 2: 500 random words verify the unitary relation, the
/// transform identities (asserted at construction), and the generator
/// dagger identity.
fn criterion_generator_identities(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 2);
    let n = profile.scale(500);
    for k in 0..n {
        let w = corpus.word(12, 3, 3);
        let m = w.to_matrix(); // construction asserts the identities
        if !verify_unitary(m.entries()) {
            return Err(fail(format!("word {k} fails the unitary relation")));
        }
        let inv = m.inverse();
        if !verify_unitary(inv.entries()) || !m.mul(&inv).is_identity() {
            return Err(fail(format!("inverse of word {k} misbehaves")));
        }
        for g in w
            .leading
            .iter()
            .chain(w.body.iter())
        {
            if !dagger_word_identity_check(g) {
                return Err(fail(format!("dagger identity fails at word {k}")));
            }
        }
    }
    Ok(format!("{n} words and inverses verified exactly"))
}

/// Criterion 3: decompose_power4 recomposes to M^4 entrywise.
fn criterion_decompose_roundtrip(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 3);
    let cfg = DomainConfig::default();
    let n = profile.scale(100);
    for k in 0..n {
        let (_, m) = corpus.nontorsion_word_matrix(8);
        let word = decompose_power4(&m, &cfg)?;
        if word.to_matrix() != m.pow(4) {
            return Err(fail(format!("roundtrip mismatch at matrix {k}")));
        }
        // interior letters are nonzero by construction
        let interior = &word.body;
        if interior.len() >= 2 {
            for g in &interior[..interior.len() - 1] {
                if g.is_zero() {
                    return Err(fail(format!("interior zero letter at matrix {k}")));
                }
            }
        }
    }
    Ok(format!("{n} decompositions recompose to M^4 exactly"))
}

/// Criterion 4: the Hermitian pairing vanishes exactly iff the projective
/// points coincide.
fn criterion_relation_iff(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 4);
    let n = profile.scale(200);
    let mut equal_cases = 0usize;
    for k in 0..n {
        let h1 = corpus.rational_point(20, 7);
        let p1 = h1.to_projective();
        let (p2, expect_equal) = if corpus.gen_bool(0.5) {
            // the same point, rescaled
            let s = corpus.nonzero_scale(5);
            let scaled = crate::siegel::ProjectivePoint::new(
                p1.q().mul_rational(&s),
                p1.r().mul_rational(&s),
                p1.p().mul_rational(&s),
                &Decision::default(),
            )?;
            (scaled, true)
        } else {
            let h2 = corpus.rational_point(20, 7);
            let p2 = h2.to_projective();
            (p2, h2 == h1)
        };
        if expect_equal {
            equal_cases += 1;
        }
        let pairing_zero = p1.pairing(&p2).is_zero();
        let canonical_equal = p1.canonicalize() == p2.canonicalize();
        if pairing_zero != canonical_equal || canonical_equal != expect_equal {
            return Err(fail(format!("pairing iff fails at pair {k}")));
        }
    }
    Ok(format!(
        "{n} pairs, {equal_cases} equal, no false positives or negatives"
    ))
}

/// Criterion 5: euler matrices of random periodic sequences are unitary,
/// non-torsion, and fix their own fixed point exactly.
fn criterion_euler(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 5);
    let ctx = Decision::default();
    let n = profile.scale(50);
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < n {
        attempts += 1;
        if attempts > 60 * n {
            return Err(fail("corpus rejection rate too high".into()));
        }
        let seq = corpus.digit_sequence(3, 4);
        let m = match euler_matrix(&seq) {
            Ok(m) => m,
            Err(crate::error::Error::TorsionMatrix { .. }) => continue,
            Err(e) => return Err(e),
        };
        if !verify_unitary(m.entries()) {
            return Err(fail("euler matrix fails the unitary relation".into()));
        }
        if is_root_of_unity(&m).is_some() {
            return Err(fail("euler matrix is torsion after the guard".into()));
        }
        let fp = match fixed_point_of(&m, RootSelector::Auto, &ctx) {
            Ok(fp) => fp,
            Err(crate::error::Error::PointAtInfinity)
            | Err(crate::error::Error::SelectionError(_)) => continue,
            Err(e) => return Err(e),
        };
        if !colinearity_certificate(&m, &fp.point)? {
            return Err(fail("euler matrix does not fix its fixed point".into()));
        }
        produced += 1;
    }
    Ok(format!("{produced} euler matrices certified (of {attempts} samples)"))
}

/// Criterion 6: the constructed expansion of a fixed point converges below
/// 1e-8 by digit 40 at 512 bits, and its euler matrix fixes the point.
fn criterion_lagrange(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 6);
    let ctx = Decision::default();
    let cfg = DomainConfig::default();
    let cert = CertifyConfig::default();
    let n = profile.scale(20);
    let tol = Rat::pow10_neg(8);
    for k in 0..n {
        let (m, fp) = corpus.expansion_matrix(&ctx);
        let seq = lagrange_expansion(&m, &fp.point, &cfg, &cert)?;
        if !seq.is_periodic() {
            return Err(fail(format!("expansion {k} is not periodic")));
        }
        let reached = distance_below_by(&seq, &fp.point, &tol, 40, 512)?;
        if !reached {
            return Err(fail(format!(
                "expansion {k} does not reach 1e-8 by digit 40"
            )));
        }
        let rebuilt = euler_matrix(&seq)?;
        if !colinearity_certificate(&rebuilt, &fp.point)? {
            return Err(fail(format!("euler matrix of expansion {k} does not fix h")));
        }
    }
    Ok(format!("{n} expansions certified at 1e-8 by digit 40"))
}

/// True when some convergent with index <= n_max has certified distance to
/// h below tol at the given precision.
fn distance_below_by<S: Scalar>(
    seq: &DigitSequence,
    h: &crate::siegel::HeisenbergPoint<S>,
    tol: &Rat,
    n_max: usize,
    prec: u32,
) -> Result<bool> {
    let convs = convergents(seq, n_max);
    for conv in convs.iter().rev() {
        if conv.is_infinite() {
            continue;
        }
        let c = conv.to_planar()?;
        let w = h
            .v()
            .sub(&h.u().mul_rational(&c.u().conj()))?
            .add_rational(&c.v().conj());
        let ub = w.to_ball(prec)?.abs().sqrt(prec).hi().clone();
        if ub.cmp_rat(tol) == Ordering::Less {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Criterion 7: the algorithmic expansion of the same fixed points either
/// certifies a period or reports not-found; at least one success, no false
/// certificates.
fn criterion_periodicity(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 6); // same stream as criterion 6
    let ctx = Decision::default();
    let cfg = DomainConfig::default();
    let n = profile.scale(20);
    let max_steps = 500;
    let mut successes = 0usize;
    let mut not_found = 0usize;
    let mut terminated = 0usize;
    for k in 0..n {
        let (_, fp) = corpus.expansion_matrix(&ctx);
        match detect_period(&fp.point, max_steps, &cfg)? {
            PeriodOutcome::Periodic(seq) => {
                // a certificate must back every success
                let m = euler_matrix(&seq)?;
                if !colinearity_certificate(&m, &fp.point)? {
                    return Err(fail(format!("false periodicity certificate at point {k}")));
                }
                successes += 1;
            }
            PeriodOutcome::NotFound { .. } => not_found += 1,
            PeriodOutcome::Terminated(_) => terminated += 1,
        }
    }
    if successes == 0 {
        return Err(fail("no certified periodic expansion found".into()));
    }
    Ok(format!(
        "{successes} certified periods, {not_found} not-found, {terminated} terminated"
    ))
}

/// Criterion 8: rational points terminate and the last convergent
/// reproduces the input exactly.
fn criterion_rational_termination(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 8);
    let cfg = DomainConfig::default();
    let n = profile.scale(100);
    for k in 0..n {
        let h = corpus.rational_point(40, 11);
        let trace = expand(&h, 10_000, &cfg)?;
        if !trace.terminated {
            return Err(fail(format!("expansion of point {k} did not terminate")));
        }
        let seq = DigitSequence::terminating(trace.digits.clone());
        let convs = convergents(&seq, trace.digits.len() - 1);
        let last = convs.last().ok_or_else(|| fail("empty expansion".into()))?;
        if last.to_planar()? != h {
            return Err(fail(format!("final convergent differs at point {k}")));
        }
    }
    Ok(format!("{n} rational points reconstruct exactly"))
}

/// Criterion 9: reduced points satisfy the fundamental-domain norm bound.
fn criterion_reduction_bound(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 9);
    let cfg = DomainConfig::default();
    let n = profile.scale(500);
    for k in 0..n {
        let h = corpus.rational_point(60, 13);
        let (_, h0) = dirichlet_reduce(&h, &cfg)?;
        if h0.norm_cmp_rat(&Rat::one(), &cfg.decision)? != Ordering::Less {
            return Err(fail(format!("reduction bound fails at point {k}")));
        }
    }
    Ok(format!("{n} reductions satisfy |h0| < 1"))
}

/// Criterion 10: the orbit product identity and the fixed-point identity
/// hold exactly and within 2^-64 at 256 bits.
fn criterion_orbit_identities(seed: u64, profile: Profile) -> Result<String> {
    let mut corpus = Corpus::derive(seed, 10);
    let ctx = Decision::default();
    let n = profile.scale(50);
    let radius = Dyadic::pow2(-64);
    let mut k = 0usize;
    let mut attempts = 0usize;
    while k < n {
        attempts += 1;
        if attempts > 60 * n {
            return Err(fail("corpus rejection rate too high".into()));
        }
        let (word, m, fp) = corpus.word_with_fixed_point(3, &ctx);
        match qproduct_check(&word, &fp.point) {
            Ok(true) => {}
            Ok(false) => return Err(fail(format!("orbit product identity fails at pair {k}"))),
            Err(crate::error::Error::DegenerateOrbit { .. }) => continue,
            Err(e) => return Err(e),
        }
        let qres = qproduct_residual(&word, &fp.point)?;
        if qres.to_ball(256)?.mag_upper().cmp(&radius) != Ordering::Less {
            return Err(fail(format!("orbit product residual too wide at pair {k}")));
        }
        if !vrelation_check(&m, &fp.point)? {
            return Err(fail(format!("fixed-point identity fails at pair {k}")));
        }
        let vres = vrelation_residual(&m, &fp.point)?;
        if vres.to_ball(256)?.mag_upper().cmp(&radius) != Ordering::Less {
            return Err(fail(format!("fixed-point residual too wide at pair {k}")));
        }
        // the identities also survive one squaring
        if !vrelation_check(&m.pow(2), &fp.point)? {
            return Err(fail(format!("fixed-point identity fails for M^2 at pair {k}")));
        }
        k += 1;
    }
    Ok(format!("{n} identity pairs verified exactly and at 2^-64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_profile_runs_every_criterion() {
        for report in run_all(7, Profile::Quick) {
            assert!(report.pass, "criterion {}: {}", report.id, report.details);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_all(7, Profile::Quick);
        let b = run_all(7, Profile::Quick);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }
}
