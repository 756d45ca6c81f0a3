//! Seeded random trials of the determinant and divided-difference
//! identities. Each suite draws from its own ChaCha stream, so adding or
//! removing a suite never changes the draws of another.

use std::f64::consts::PI;

use chebconv::convexity::{identity_fid1_check, identity_fid_check};
use chebconv::determinant::{sylvester_check, Matrix};
use chebconv::divdiff::lemma3_check;
use chebconv::domain::Interval;
use chebconv::error::{Error, Result};
use chebconv::function::FunctionSpec;
use chebconv::induced::{build_induced, identity_id};
use chebconv::report::{relative_residual, ResidualReport};
use chebconv::scalar::{Backend, Field, Rational, Scalar};
use chebconv::system::{ChebyshevSystem, FunctionSystem};
use chebconv::systems::{polynomial_system, trig_odd_system};
use chebconv::tuple::PointTuple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::{BackendArg, Outcome, Status, Suite};

/// Smallest spacing between random float points.
const FLOAT_GAP: f64 = 0.05;

const SUITES: [Suite; 6] = [Suite::Sylvester, Suite::Id, Suite::Fid, Suite::Fid1, Suite::Lemma3, Suite::TrigCtg];

#[derive(Debug, Serialize)]
struct Trial {
    #[serde(skip_serializing_if = "Option::is_none")]
    system: Option<&'static str>,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    /// Largest absolute residual over the checks of this trial.
    residual: Scalar,
    relative: f64,
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    suite: Suite,
    backend: Backend,
    trials: usize,
    passed: usize,
    /// Float draws discarded because a denominator fell in the
    /// singularity band.
    redrawn: usize,
    /// Exact suites require a zero residual; float suites compare `relative`
    /// against this bound.
    tolerance: f64,
    max_relative_residual: f64,
    results: Vec<Trial>,
}

pub fn run(suite: Suite, trials: usize, seed: u64, backend: BackendArg) -> Result<Outcome> {
    let backend = match backend {
        BackendArg::Float => Backend::Float,
        BackendArg::Exact | BackendArg::Auto => Backend::Exact,
    };
    let chosen: Vec<Suite> = if suite == Suite::All { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for s in chosen {
        let stream = SUITES.iter().position(|x| *x == s).expect("listed suite") as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let report = match (s, backend) {
            (Suite::TrigCtg, _) => trig_ctg(trials, &mut rng)?,
            (_, Backend::Exact) => suite_in::<Rational>(s, trials, &mut rng)?,
            (_, Backend::Float) => suite_in::<f64>(s, trials, &mut rng)?,
        };
        reports.push(report);
    }
    let status = if reports.iter().all(|r| r.passed == r.trials) { Status::Pass } else { Status::Violation };
    let results: Value = serde_json::to_value(&reports).expect("suite reports serialize");
    Ok(Outcome { status, backend, results: serde_json::json!({ "seed": seed, "suites": results }) })
}

fn tolerance(suite: Suite) -> f64 {
    match suite {
        Suite::Sylvester => 1e-9,
        Suite::Lemma3 => 1e-8,
        Suite::TrigCtg => 1e-12,
        _ => 1e-8,
    }
}

fn passes<T: Field>(residual: &T, relative: f64, tol: f64) -> bool {
    match T::BACKEND {
        Backend::Exact => residual.is_zero(),
        Backend::Float => relative <= tol,
    }
}

/// A random rational `p/q` in `[lo, hi]` with `q <= 6`, or a uniform float.
fn random_value<T: Field>(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<T> {
    match T::BACKEND {
        Backend::Exact => {
            let q: i64 = rng.random_range(1..=6);
            let (a, b) = ((lo * q as f64).ceil() as i64, (hi * q as f64).floor() as i64);
            T::from_literal(&Scalar::ratio(rng.random_range(a..=b), q))
        }
        Backend::Float => T::from_literal(&Scalar::Float(rng.random_range(lo..hi))),
    }
}

/// `m` pairwise distinct points in `(lo, hi)`; float points keep
/// [`FLOAT_GAP`] apart.
fn random_points<T: Field>(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Result<Vec<T>> {
    let mut pts: Vec<T> = Vec::with_capacity(m);
    while pts.len() < m {
        let x: T = random_value(rng, lo, hi)?;
        let far = pts.iter().all(|p| match T::BACKEND {
            Backend::Exact => *p != x,
            Backend::Float => (p.to_f64() - x.to_f64()).abs() >= FLOAT_GAP,
        });
        if far && x.to_f64() > lo && x.to_f64() < hi {
            pts.push(x);
        }
    }
    Ok(pts)
}

/// A random combination whose part outside the span of the system is a
/// single term of fixed sign in the relevant derivative (a power `>= n`, or
/// `exp` / `x^2` against `(1, cos, sin)`), so the bordered determinants keep
/// away from zero. Exact draws add further arbitrary powers; float draws add
/// only terms from the span, which leave the determinants unchanged.
fn random_function<T: Field>(rng: &mut ChaCha8Rng, n: u32, trig: bool) -> FunctionSpec {
    let lead = match (trig, rng.random_bool(0.5)) {
        (true, true) => FunctionSpec::Exp,
        (true, false) => FunctionSpec::power(2),
        (false, _) => FunctionSpec::power(rng.random_range(n..=n + 2)),
    };
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    let mut terms = vec![(Scalar::int(sign * rng.random_range(1..=5)), lead)];
    for _ in 0..rng.random_range(0..=2) {
        let spec = match (T::BACKEND, trig) {
            (Backend::Exact, _) => FunctionSpec::power(rng.random_range(0..=n + 2)),
            (Backend::Float, false) => FunctionSpec::power(rng.random_range(0..n)),
            (Backend::Float, true) => match rng.random_range(0..3) {
                0 => FunctionSpec::power(0),
                1 => FunctionSpec::Cos { freq: 1 },
                _ => FunctionSpec::Sin { freq: 1 },
            },
        };
        terms.push((Scalar::int(rng.random_range(-5..=5)), spec));
    }
    FunctionSpec::affine(terms)
}

/// `(1, cos, sin)` on `(-π, 0)`.
fn trig_system() -> ChebyshevSystem {
    trig_odd_system(1, Interval::open(-PI, 0.0)).expect("static system")
}

/// On the float backend every other trial uses the trigonometric system.
fn pick_system<T: Field>(rng: &mut ChaCha8Rng, trial: usize, min_n: usize) -> Result<(&'static str, ChebyshevSystem, f64, f64)> {
    if T::BACKEND == Backend::Float && trial % 2 == 1 {
        return Ok(("trig-odd", trig_system(), -PI, 0.0));
    }
    let n = rng.random_range(min_n..=5);
    // positive float points keep the complete homogeneous factors of the
    // power determinants away from zero
    let lo = if T::BACKEND == Backend::Float { 0.0 } else { -3.0 };
    Ok(("poly", polynomial_system(n)?, lo, 3.0))
}

struct Worst<T> {
    residual: T,
    relative: f64,
    ok: bool,
}

impl<T: Field> Worst<T> {
    fn new() -> Self {
        Worst { residual: T::zero(), relative: 0.0, ok: true }
    }

    fn add(&mut self, r: &ResidualReport<T>, tol: f64) {
        self.add_raw(r.residual.clone(), r.relative(), tol);
    }

    fn add_raw(&mut self, residual: T, relative: f64, tol: f64) {
        self.ok &= passes(&residual, relative, tol);
        if residual > self.residual {
            self.residual = residual;
        }
        self.relative = self.relative.max(relative);
    }
}

type TrialOutcome<T> = (Option<&'static str>, usize, Option<usize>, Worst<T>);

/// Redraws allowed per float trial when a denominator falls inside the
/// singularity band.
const MAX_REDRAWS: usize = 100;

fn suite_in<T: Field>(suite: Suite, trials: usize, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let tol = tolerance(suite);
    let mut results = Vec::with_capacity(trials);
    let (mut passed, mut redrawn) = (0, 0);
    for trial in 0..trials {
        let mut attempt = 0;
        let (system, n, k, worst) = loop {
            match one_trial::<T>(suite, trial, rng, tol) {
                Err(Error::SingularDenominator { .. }) if T::BACKEND == Backend::Float && attempt < MAX_REDRAWS => {
                    attempt += 1;
                    redrawn += 1;
                }
                other => break other?,
            }
        };
        if worst.ok {
            passed += 1;
        }
        results.push(Trial { system, n, k, residual: worst.residual.to_scalar(), relative: worst.relative });
    }
    let max_relative_residual = results.iter().map(|t| t.relative).fold(0.0, f64::max);
    Ok(SuiteReport { suite, backend: T::BACKEND, trials, passed, redrawn, tolerance: tol, max_relative_residual, results })
}

fn one_trial<T: Field>(suite: Suite, trial: usize, rng: &mut ChaCha8Rng, tol: f64) -> Result<TrialOutcome<T>> {
    let mut worst = Worst::<T>::new();
    let (system, n, k) = match suite {
        Suite::Sylvester => {
            let n = match T::BACKEND {
                Backend::Exact => rng.random_range(2..=8),
                Backend::Float => rng.random_range(2..=6),
            };
            let entries = (0..n * n).map(|_| random_value::<T>(rng, -1.0, 1.0)).collect::<Result<Vec<_>>>()?;
            let entries = match T::BACKEND {
                // spread exact entries beyond [-1, 1]
                Backend::Exact => entries.into_iter().map(|x| x * T::from_i64(rng.random_range(1..=9))).collect(),
                Backend::Float => entries,
            };
            let a = Matrix::new(n, n, entries)?;
            for k in 1..n {
                let r = sylvester_check(&a, k)?;
                let rel = r.relative_residual();
                worst.add_raw(r.residual, rel, tol);
            }
            (None, n, None)
        }
        Suite::Id | Suite::Fid | Suite::Fid1 => {
            let (name, sys, lo, hi) = pick_system::<T>(rng, trial, 2)?;
            let n = sys.dimension();
            match suite {
                Suite::Id => {
                    let pts = PointTuple::distinct(random_points::<T>(rng, n, lo, hi)?)?;
                    for k in 1..n {
                        worst.add(&identity_id(&sys, k, &pts)?, tol);
                    }
                }
                Suite::Fid => {
                    let f = random_function::<T>(rng, n as u32, name != "poly");
                    let pts = PointTuple::distinct(random_points::<T>(rng, n + 1, lo, hi)?)?;
                    for k in 1..n {
                        worst.add(&identity_fid_check(&sys, k, &f, &pts)?, tol);
                    }
                }
                _ => {
                    let f = random_function::<T>(rng, n as u32, name != "poly");
                    let pts = PointTuple::distinct(random_points::<T>(rng, n + 1, lo, hi)?)?;
                    worst.add(&identity_fid1_check(&sys, &f, &pts)?, tol);
                }
            }
            (Some(name), n, None)
        }
        Suite::Lemma3 => {
            let n = rng.random_range(1..=8usize);
            let k = rng.random_range(1..=(n + 1).min(6));
            let (lo, hi) = match T::BACKEND {
                Backend::Exact => (-3.0, 3.0),
                Backend::Float => (1.0, 3.0),
            };
            let pts = PointTuple::distinct(random_points::<T>(rng, k, lo, hi)?)?;
            worst.add(&lemma3_check(n as u32, &pts)?, tol);
            (None, n, Some(k))
        }
        Suite::TrigCtg | Suite::All => unreachable!("handled by the caller"),
    };
    Ok((system, n, k, worst))
}

/// `(sin x - sin y) / (cos x - cos y) = -cot((x + y) / 2)` on `(-π, 0)`, and
/// the closed-form basis of the system induced by `(1, cos, sin)` at one
/// point against the generic construction. The residual is scaled by
/// `max(1, |lhs|, |rhs|)` since both sides pass through zero at `x + y = -π`.
fn trig_ctg(trials: usize, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let tol = tolerance(Suite::TrigCtg);
    let sys = trig_system();
    let scaled = |lhs: f64, rhs: f64| (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
    let mut results = Vec::with_capacity(trials);
    let mut passed = 0;
    for _ in 0..trials {
        let pts = random_points::<f64>(rng, 2, -PI, 0.0)?;
        let (x, y) = (pts[0], pts[1]);
        let quotient = (x.sin() - y.sin()) / (x.cos() - y.cos());
        let cot = -1.0 / ((x + y) / 2.0).tan();
        let mut worst = Worst::<f64>::new();
        worst.add_raw((quotient - cot).abs(), scaled(quotient, cot), tol);
        let induced = build_induced(&sys, &PointTuple::increasing(vec![x])?)?;
        let generic = induced.eval_basis(1, &y)?;
        let closed = FunctionSpec::NegCotHalf { x1: Scalar::Float(x) }.evaluate(&y)?;
        worst.add_raw((generic - closed).abs(), scaled(generic, closed), tol);
        // the first induced function is identically one
        let one = induced.eval_basis(0, &y)?;
        worst.add_raw((one - 1.0).abs(), relative_residual(&one, &1.0), tol);
        if worst.ok {
            passed += 1;
        }
        results.push(Trial { system: Some("trig-odd"), n: 3, k: Some(1), residual: Scalar::Float(worst.residual), relative: worst.relative });
    }
    let max_relative_residual = results.iter().map(|t| t.relative).fold(0.0, f64::max);
    Ok(SuiteReport { suite: Suite::TrigCtg, backend: Backend::Float, trials, passed, redrawn: 0, tolerance: tol, max_relative_residual, results })
}
