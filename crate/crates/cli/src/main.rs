//! Command-line front end: JSON in, JSON out, deterministic.
//!
//! Exit codes: 0 success/certified, 2 not-found or ambiguous, 1
//! computation error, 64 usage error.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use siegelcf::cf::{
    convergents, detect_period, euler_matrix, expand, lagrange_expansion, qproduct_check,
    vrelation_check, CertifyConfig, DigitSequence, PeriodOutcome,
};
use siegelcf::error::Error as CoreError;
use siegelcf::gaussian::{Decision, GaussianInteger, Rat};
use siegelcf::lattice::{dirichlet_reduce, DomainConfig, TieBreak};
use siegelcf::numfield::{
    colinearity_certificate, fixed_point_of, AlgebraicPointJson, FieldElement, RootSelector,
};
use siegelcf::scalar::Scalar;
use siegelcf::selftest::{run_all, Profile};
use siegelcf::siegel::{HeisenbergPoint, IntegerPoint, QPoint};
use siegelcf::unitary::{decompose_power4, is_root_of_unity, verify_unitary, GeneratorWord, UnitaryMatrix};

#[derive(Parser)]
#[command(name = "siegelcf", version, about = "Continued fractions on the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Input JSON file; stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 128)]
    precision_start: u32,
    #[arg(long, global = true, default_value_t = 65536)]
    precision_cap: u32,
    /// Step bound for expansions and searches.
    #[arg(long, global = true, default_value_t = 200)]
    n_max: usize,
    /// Convergence tolerance, a decimal in (0, 1).
    #[arg(long, global = true, default_value = "0.00000001")]
    tolerance: String,
    /// Seed for the self-test corpus.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Boundary tie-break policy (only `lex` ships).
    #[arg(long, global = true, default_value = "lex")]
    tie_break: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Digit expansion of a point.
    Expand,
    /// Convergents of a digit sequence.
    Convergents,
    /// Exact periodicity search for an exact point.
    Period,
    /// Matrix of an eventually periodic sequence.
    Euler,
    /// Eventually periodic expansion of a fixed point of a matrix.
    Lagrange,
    /// Fixed-point certificates for a (matrix, point) pair.
    VerifyRelation,
    /// Check the defining relation for a raw 3x3 matrix.
    VerifyUnitary,
    /// Generator-word decomposition of M^4.
    Decompose,
    /// Root-of-unity test with order.
    Torsion,
    /// Nearest lattice point and Dirichlet reduction.
    Nearest,
    /// Orbit product identity check for a word and a point.
    Qcheck,
    /// Run the acceptance criteria on a seeded corpus.
    Selftest {
        /// Shrink the sampled criteria for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
    /// Per-step distance-to-limit rows for plotting.
    Trace,
}

/// A planar rational point or an algebraic point with a field spec.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointInput {
    Algebraic(AlgebraicPointJson),
    Planar(QPoint),
}

#[derive(Deserialize)]
struct ExpandInput {
    point: QPoint,
    steps: Option<usize>,
}

#[derive(Deserialize)]
struct ConvergentsInput {
    digits: DigitSequence,
    upto: Option<usize>,
}

#[derive(Deserialize)]
struct PeriodInput {
    point: PointInput,
    max_steps: Option<usize>,
}

#[derive(Deserialize)]
struct EulerInput {
    digits: DigitSequence,
}

#[derive(Deserialize)]
struct MatrixPointInput {
    matrix: UnitaryMatrix,
    point: PointInput,
}

#[derive(Deserialize)]
struct LagrangeInput {
    matrix: UnitaryMatrix,
    /// Fixed point; computed from the matrix when omitted.
    point: Option<PointInput>,
}

#[derive(Deserialize)]
struct MatrixInput {
    matrix: UnitaryMatrix,
}

#[derive(Deserialize)]
struct RawMatrixInput {
    matrix: Vec<String>,
}

#[derive(Deserialize)]
struct PointOnlyInput {
    point: QPoint,
}

#[derive(Deserialize)]
struct QcheckInput {
    word: GeneratorWord,
    point: PointInput,
}

#[derive(Deserialize)]
struct TraceInput {
    matrix: Option<UnitaryMatrix>,
    point: Option<PointInput>,
}

#[derive(Serialize)]
struct ConvergentJson {
    q: String,
    r: String,
    p: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    if cli.tie_break != "lex" {
        eprintln!("error: unsupported tie-break policy {:?}", cli.tie_break);
        return ExitCode::from(64);
    }
    let (doc, code) = dispatch(&cli);
    let rendered = serde_json::to_string_pretty(&doc).expect("serializable output");
    match &cli.output {
        None => {
            use std::io::Write;
            // ignore a closed pipe; the exit code still carries the result
            let _ = writeln!(std::io::stdout(), "{rendered}");
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered + "\n") {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    ExitCode::from(code)
}

fn dispatch(cli: &Cli) -> (serde_json::Value, u8) {
    match run(cli) {
        Ok((doc, code)) => (doc, code),
        Err(e) => {
            let code = match &e {
                CoreError::NotFound { .. } | CoreError::Indeterminate(_) => 2,
                CoreError::MalformedInput(_) => 64,
                _ => 1,
            };
            (
                json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }),
                code,
            )
        }
    }
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::DivisionByZero => "division-by-zero",
        CoreError::InversionAtOrigin => "inversion-at-origin",
        CoreError::PointAtInfinity => "point-at-infinity",
        CoreError::BackendMismatch => "backend-mismatch",
        CoreError::NonLatticePoint(_) => "non-lattice-point",
        CoreError::NotUnitary => "not-unitary",
        CoreError::ConjugationUnavailable => "conjugation-unavailable",
        CoreError::PrecisionExhausted { .. } => "precision-exhausted",
        CoreError::Indeterminate(_) => "indeterminate",
        CoreError::TorsionMatrix { .. } => "torsion-matrix",
        CoreError::DegenerateOrbit { .. } => "degenerate-orbit",
        CoreError::CertificationFailed(_) => "certification-failed",
        CoreError::SelectionError(_) => "selection-error",
        CoreError::NotFound { .. } => "not-found",
        CoreError::MalformedInput(_) => "malformed-input",
        CoreError::Internal(_) => "internal",
    }
}

fn read_input<T: serde::de::DeserializeOwned>(cli: &Cli) -> Result<T, CoreError> {
    let raw = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CoreError::MalformedInput(format!("cannot read input: {e}")))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CoreError::MalformedInput(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&raw).map_err(|e| CoreError::MalformedInput(format!("invalid JSON: {e}")))
}

fn decision(cli: &Cli) -> Decision {
    Decision::new(cli.precision_start, cli.precision_cap)
}

fn domain_config(cli: &Cli) -> DomainConfig {
    DomainConfig {
        decision: decision(cli),
        initial_radius: 2,
        tie_break: TieBreak::Lex,
    }
}

fn certify_config(cli: &Cli) -> Result<CertifyConfig, CoreError> {
    let tolerance: Rat = cli.tolerance.parse()?;
    if tolerance <= Rat::zero() || tolerance >= Rat::one() {
        return Err(CoreError::MalformedInput(
            "tolerance must lie in (0, 1)".into(),
        ));
    }
    Ok(CertifyConfig {
        tolerance,
        n_max: cli.n_max,
        precision: 512,
    })
}

fn convergent_rows(seq: &DigitSequence, upto: usize) -> Vec<ConvergentJson> {
    convergents(seq, upto)
        .iter()
        .map(|c| ConvergentJson {
            q: c.q.to_string(),
            r: c.r.to_string(),
            p: c.p.to_string(),
        })
        .collect()
}

fn run(cli: &Cli) -> Result<(serde_json::Value, u8), CoreError> {
    let cfg = domain_config(cli);
    match &cli.cmd {
        Cmd::Expand => {
            let input: ExpandInput = read_input(cli)?;
            let steps = input.steps.unwrap_or(cli.n_max);
            let trace = expand(&input.point, steps, &cfg)?;
            Ok((
                json!({
                    "digits": trace.digits,
                    "terminated": trace.terminated,
                    "iterates": trace.iterates,
                }),
                0,
            ))
        }
        Cmd::Convergents => {
            let input: ConvergentsInput = read_input(cli)?;
            let upto = input.upto.unwrap_or(cli.n_max);
            Ok((
                json!({ "convergents": convergent_rows(&input.digits, upto) }),
                0,
            ))
        }
        Cmd::Period => {
            let input: PeriodInput = read_input(cli)?;
            let max_steps = input.max_steps.unwrap_or(cli.n_max.max(1));
            let outcome = match input.point {
                PointInput::Planar(h) => detect_period(&h, max_steps, &cfg)?,
                PointInput::Algebraic(a) => {
                    let (_, h) = a.to_point(&cfg.decision)?;
                    detect_period(&h, max_steps, &cfg)?
                }
            };
            let (doc, code) = match outcome {
                PeriodOutcome::Periodic(seq) => (
                    json!({ "status": "periodic", "digits": seq, "steps": null }),
                    0,
                ),
                PeriodOutcome::Terminated(seq) => (
                    json!({ "status": "terminated", "digits": seq, "steps": null }),
                    0,
                ),
                PeriodOutcome::NotFound { steps } => (
                    json!({ "status": "not-found", "digits": null, "steps": steps }),
                    2,
                ),
            };
            Ok((doc, code))
        }
        Cmd::Euler => {
            let input: EulerInput = read_input(cli)?;
            let m = euler_matrix(&input.digits)?;
            Ok((json!({ "matrix": m }), 0))
        }
        Cmd::Lagrange => {
            let input: LagrangeInput = read_input(cli)?;
            let cert = certify_config(cli)?;
            let (seq, used_point) = match input.point {
                Some(PointInput::Planar(h)) => {
                    (lagrange_expansion(&input.matrix, &h, &cfg, &cert)?, None)
                }
                Some(PointInput::Algebraic(a)) => {
                    let (_, h) = a.to_point(&cfg.decision)?;
                    (lagrange_expansion(&input.matrix, &h, &cfg, &cert)?, None)
                }
                None => {
                    let fp = fixed_point_of(&input.matrix, RootSelector::Auto, &cfg.decision)?;
                    let seq = lagrange_expansion(&input.matrix, &fp.point, &cfg, &cert)?;
                    let pt = AlgebraicPointJson::from_point(&fp.field, &fp.point);
                    (seq, Some(pt))
                }
            };
            Ok((json!({ "digits": seq, "point": used_point }), 0))
        }
        Cmd::VerifyRelation => {
            let input: MatrixPointInput = read_input(cli)?;
            let (colinear, vrel) = match input.point {
                PointInput::Planar(h) => {
                    let c = colinearity_certificate(&input.matrix, &h)?;
                    let v = if c {
                        Some(vrelation_check(&input.matrix, &h)?)
                    } else {
                        None
                    };
                    (c, v)
                }
                PointInput::Algebraic(a) => {
                    let (_, h) = a.to_point(&cfg.decision)?;
                    let c = colinearity_certificate(&input.matrix, &h)?;
                    let v = if c {
                        Some(vrelation_check(&input.matrix, &h)?)
                    } else {
                        None
                    };
                    (c, v)
                }
            };
            Ok((json!({ "colinear": colinear, "vrelation": vrel }), 0))
        }
        Cmd::VerifyUnitary => {
            let input: RawMatrixInput = read_input(cli)?;
            if input.matrix.len() != 9 {
                return Err(CoreError::MalformedInput(
                    "matrix must have exactly 9 entries".into(),
                ));
            }
            let mut entries: [[GaussianInteger; 3]; 3] = Default::default();
            for (k, s) in input.matrix.iter().enumerate() {
                entries[k / 3][k % 3] = s.parse()?;
            }
            Ok((json!({ "unitary": verify_unitary(&entries) }), 0))
        }
        Cmd::Decompose => {
            let input: MatrixInput = read_input(cli)?;
            let word = decompose_power4(&input.matrix, &cfg)?;
            Ok((json!({ "word": word, "power": 4 }), 0))
        }
        Cmd::Torsion => {
            let input: MatrixInput = read_input(cli)?;
            let order = is_root_of_unity(&input.matrix);
            Ok((
                json!({ "torsion": order.is_some(), "order": order }),
                0,
            ))
        }
        Cmd::Nearest => {
            let input: PointOnlyInput = read_input(cli)?;
            let (gamma, reduced) = dirichlet_reduce(&input.point, &cfg)?;
            Ok((json!({ "gamma": gamma, "reduced": reduced }), 0))
        }
        Cmd::Qcheck => {
            let input: QcheckInput = read_input(cli)?;
            let holds = match input.point {
                PointInput::Planar(h) => qproduct_check(&input.word, &h)?,
                PointInput::Algebraic(a) => {
                    let (_, h) = a.to_point(&cfg.decision)?;
                    qproduct_check(&input.word, &h)?
                }
            };
            Ok((json!({ "holds": holds }), 0))
        }
        Cmd::Selftest { quick } => {
            let profile = if *quick { Profile::Quick } else { Profile::Full };
            let reports = run_all(cli.seed, profile);
            let passed = reports.iter().filter(|r| r.pass).count();
            let failed = reports.len() - passed;
            let code = if failed == 0 { 0 } else { 1 };
            Ok((
                json!({
                    "seed": cli.seed,
                    "profile": if *quick { "quick" } else { "full" },
                    "criteria": reports,
                    "passed": passed,
                    "failed": failed,
                }),
                code,
            ))
        }
        Cmd::Trace => {
            let input: TraceInput = read_input(cli)?;
            let rows = match (input.matrix, input.point) {
                (Some(m), None) => {
                    let fp = fixed_point_of(&m, RootSelector::Auto, &cfg.decision)?;
                    trace_rows(&fp.point, cli.n_max, &cfg)?
                }
                (None, Some(PointInput::Algebraic(a))) => {
                    let (_, h) = a.to_point(&cfg.decision)?;
                    trace_rows(&h, cli.n_max, &cfg)?
                }
                (None, Some(PointInput::Planar(h))) => trace_rows(&h, cli.n_max, &cfg)?,
                _ => {
                    return Err(CoreError::MalformedInput(
                        "trace takes exactly one of `matrix` or `point`".into(),
                    ))
                }
            };
            Ok((json!({ "rows": rows }), 0))
        }
    }
}

/// Per-step (n, upper bound of d(h, convergent_n)) pairs for the
/// algorithmic expansion of h.
fn trace_rows<S: Scalar>(
    h: &HeisenbergPoint<S>,
    n_max: usize,
    cfg: &DomainConfig,
) -> Result<Vec<(usize, String)>, CoreError> {
    let trace = expand(h, n_max, cfg)?;
    let mut rows = Vec::new();
    for (n, m) in trace.matrices.iter().enumerate() {
        let conv = convergent_of(m);
        let Some((cu, cv)) = conv else {
            rows.push((n, "inf".to_string()));
            continue;
        };
        let w = h
            .v()
            .sub(&h.u().mul_rational(&cu.conj()))?
            .add_rational(&cv.conj());
        let ub = w.to_ball(256)?.abs().sqrt(256).hi().to_decimal_approx(20);
        rows.push((n, ub));
    }
    Ok(rows)
}

fn convergent_of(
    m: &UnitaryMatrix,
) -> Option<(siegelcf::gaussian::GaussianRational, siegelcf::gaussian::GaussianRational)> {
    use siegelcf::gaussian::GaussianRational;
    let q = m.entry(0, 0);
    if q.is_zero() {
        return None;
    }
    let q = GaussianRational::from_integer(q.clone());
    let r = GaussianRational::from_integer(m.entry(1, 0).clone());
    let p = GaussianRational::from_integer(m.entry(2, 0).clone());
    Some((r.div(&q).ok()?, p.div(&q).ok()?))
}

// Silence a false unused warning: IntegerPoint and FieldElement appear in
// serde derives through the core types.
#[allow(dead_code)]
fn _type_anchor(_: Option<(IntegerPoint, FieldElement)>) {}
