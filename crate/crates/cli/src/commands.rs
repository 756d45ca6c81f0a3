//! The grid-based subcommands. Each runs generically over a backend chosen
//! from the flags and the inputs.

use chebconv::convexity::{check_convex_direct, check_convex_induced, check_convex_interval, cross_mode_agreement, ConvexityVerdict};
use chebconv::determinant::is_positive_chebyshev;
use chebconv::divdiff::{classical_divdiff, omega_divdiff_with_tol};
use chebconv::error::{Error, Result};
use chebconv::function::FunctionSpec;
use chebconv::sampling::CheckConfig;
use chebconv::scalar::{Backend, Field, Rational, Scalar};
use chebconv::system::ChebyshevSystem;
use chebconv::systems::default_grid;
use chebconv::tuple::{literals_to, PointTuple};
use chebconv::variation::{check_theorem3, estimate_variation, Refinement};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{self, SystemInfo};
use crate::{BackendArg, Common, ModeArg, Outcome, Status};

/// Inputs shared by every grid-based command.
pub struct Setup {
    pub system: ChebyshevSystem,
    pub info: SystemInfo,
    /// User grid; `None` falls back to the function support or the
    /// default grid of the domain.
    pub grid: Option<Vec<Scalar>>,
    pub cfg: CheckConfig,
    pub backend: BackendArg,
}

impl Setup {
    pub fn new(common: &Common) -> Result<Self> {
        let cfg = common.check_config()?;
        let domain = common.domain.as_deref().map(input::parse_domain).transpose()?;
        let (system, info) = input::load_system(&common.system, domain, common.unsafe_domain_override)?;
        let grid = common.grid.as_deref().map(input::load_grid).transpose()?;
        Ok(Setup { system, info, grid, cfg, backend: common.backend })
    }

    /// Exact when forced, or under `auto` when the system, the functions and
    /// every user literal are rational.
    fn backend(&self, functions: &[&FunctionSpec], literals: &[&Scalar]) -> Backend {
        match self.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
            BackendArg::Auto => {
                let rational = self.system.is_rational()
                    && functions.iter().all(|f| f.is_rational())
                    && literals.iter().all(|s| s.backend() == Backend::Exact)
                    && self.grid.iter().flatten().all(|s| s.backend() == Backend::Exact);
                if rational {
                    Backend::Exact
                } else {
                    Backend::Float
                }
            }
        }
    }

    fn grid_for(&self, f: Option<&FunctionSpec>) -> Vec<Scalar> {
        if let Some(g) = &self.grid {
            return g.clone();
        }
        if let Some(support) = f.and_then(FunctionSpec::support) {
            return support;
        }
        default_grid(&self.system.domain).into_iter().map(Scalar::Float).collect()
    }

    fn grid<T: Field>(&self, f: Option<&FunctionSpec>) -> Result<Vec<T>> {
        literals_to(&self.grid_for(f))
    }
}

fn to_value<S: Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn outcome(status: Status, backend: Backend, results: Value) -> Outcome {
    Outcome { status, backend, results }
}

macro_rules! on_backend {
    ($backend:expr, $f:ident($($arg:expr),*)) => {
        match $backend {
            Backend::Exact => $f::<Rational>($($arg),*),
            Backend::Float => $f::<f64>($($arg),*),
        }
    };
}

pub fn chebcheck(s: &Setup, k: Option<usize>) -> Result<Outcome> {
    let backend = s.backend(&[], &[]);
    let (status, results) = on_backend!(backend, chebcheck_in(s, k))?;
    Ok(outcome(status, backend, results))
}

fn chebcheck_in<T: Field>(s: &Setup, k: Option<usize>) -> Result<(Status, Value)> {
    let grid: Vec<T> = s.grid(None)?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..=s.system.dimension()).collect(),
    };
    let mut status = Status::Pass;
    let mut reports = Vec::new();
    for k in ks {
        let r = is_positive_chebyshev(&s.system, k, &grid, &s.cfg)?;
        status = status.and(match &r.verdict {
            v if v.is_violated() => Status::Violation,
            v if v.is_positive() => Status::Pass,
            _ => Status::Inconclusive,
        });
        reports.push(r);
    }
    Ok((status, json!({ "system": to_value(&s.info), "grid_size": grid.len(), "prefixes": to_value(&reports) })))
}

pub fn divdiff(s: &Setup, function: &str, points: &str, k: Option<usize>, classical: bool) -> Result<Outcome> {
    let f = input::load_function(function)?;
    let pts = input::parse_point_list(points)?;
    let backend = s.backend(&[&f], &pts.iter().collect::<Vec<_>>());
    let results = on_backend!(backend, divdiff_in(s, &f, &pts, k, classical))?;
    Ok(outcome(Status::Pass, backend, results))
}

fn divdiff_in<T: Field>(s: &Setup, f: &FunctionSpec, pts: &[Scalar], k: Option<usize>, classical: bool) -> Result<Value> {
    let tuple = PointTuple::distinct(literals_to::<T>(pts)?)?;
    if let Some(x) = tuple.iter().find(|x| !s.system.domain.contains(*x)) {
        return Err(Error::EvaluationOutsideSupport { point: format!("{x:?}"), detail: "point outside the system domain".into() });
    }
    let k = k.unwrap_or(tuple.len());
    let dd = omega_divdiff_with_tol(&s.system, k, f, &tuple, s.cfg.rel_tol)?;
    let mut out = json!({ "system": to_value(&s.info), "divided_difference": to_value(&dd) });
    if classical {
        out["classical"] = to_value(&classical_divdiff(f, &tuple)?.to_scalar());
    }
    Ok(out)
}

fn verdict_status(v: &ConvexityVerdict) -> Status {
    if v.is_violated() {
        Status::Violation
    } else if v.is_indeterminate() {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

pub fn convexity(s: &Setup, function: &str, mode: ModeArg, k: Option<usize>, ell: Option<usize>) -> Result<Outcome> {
    let f = input::load_function(function)?;
    let backend = s.backend(&[&f], &[]);
    let (status, results) = on_backend!(backend, convexity_in(s, &f, mode, k, ell))?;
    Ok(outcome(status, backend, results))
}

fn convexity_in<T: Field>(s: &Setup, f: &FunctionSpec, mode: ModeArg, k: Option<usize>, ell: Option<usize>) -> Result<(Status, Value)> {
    let grid: Vec<T> = s.grid(Some(f))?;
    let n = s.system.dimension();
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    if mode != ModeArg::Direct && ks.is_empty() {
        return Err(Error::InvalidInput(format!("{mode:?} mode needs a system of dimension at least 2")));
    }
    let head = json!({ "system": to_value(&s.info), "grid_size": grid.len() });
    let verdicts = match mode {
        ModeArg::All => {
            let report = cross_mode_agreement(&s.system, f, &grid, &ks, &s.cfg)?;
            let status = if !report.agrees() || report.consensus.as_deref() == Some("violated") {
                Status::Violation
            } else if report.consensus.is_none() {
                Status::Inconclusive
            } else {
                Status::Pass
            };
            let mut out = head;
            out["agreement"] = to_value(&report);
            return Ok((status, out));
        }
        ModeArg::Direct => vec![check_convex_direct(&s.system, f, &grid, &s.cfg)?],
        ModeArg::Induced => ks.iter().map(|&k| check_convex_induced(&s.system, k, f, &grid, &s.cfg)).collect::<Result<_>>()?,
        ModeArg::Interval => {
            let mut v = Vec::new();
            for &k in &ks {
                let ells: Vec<usize> = match ell {
                    Some(l) => vec![l],
                    None => (0..=k).collect(),
                };
                for l in ells {
                    v.push(check_convex_interval(&s.system, k, l, f, &grid, &s.cfg)?);
                }
            }
            v
        }
    };
    let status = verdicts.iter().map(verdict_status).fold(Status::Pass, Status::and);
    let mut out = head;
    out["verdicts"] = to_value(&verdicts);
    Ok((status, out))
}

pub enum VariationTarget<'a> {
    Function(&'a str),
    Difference { g: &'a str, h: Option<&'a str> },
}

pub fn variation(
    s: &Setup,
    target: VariationTarget<'_>,
    a: &str,
    b: &str,
    anchors: Option<&str>,
    refinement: &Refinement,
) -> Result<Outcome> {
    let (a, b) = (input::parse_point(a)?, input::parse_point(b)?);
    let anchors = anchors.map(input::load_anchors).transpose()?;
    let mut literals = vec![&a, &b];
    if let Some(an) = &anchors {
        literals.extend(an.a.iter().chain(&an.b));
    }
    match target {
        VariationTarget::Function(f) => {
            let f = input::load_function(f)?;
            let backend = s.backend(&[&f], &literals);
            let results = on_backend!(backend, estimate_in(s, &f, &a, &b, refinement))?;
            Ok(outcome(Status::Pass, backend, results))
        }
        VariationTarget::Difference { g, h } => {
            let g = input::load_function(g)?;
            let h = h.map(input::load_function).transpose()?.unwrap_or_else(|| FunctionSpec::constant(Scalar::int(0)));
            let backend = s.backend(&[&g, &h], &literals);
            let anchors = anchors.map(|an| (an.a, an.b));
            let (status, results) = on_backend!(backend, bound_in(s, &g, &h, &a, &b, anchors.as_ref(), refinement))?;
            Ok(outcome(status, backend, results))
        }
    }
}

fn estimate_in<T: Field>(s: &Setup, f: &FunctionSpec, a: &Scalar, b: &Scalar, refinement: &Refinement) -> Result<Value> {
    let (a, b) = (T::from_literal(a)?, T::from_literal(b)?);
    let est = estimate_variation(&s.system, f, &a, &b, refinement)?;
    Ok(json!({ "system": to_value(&s.info), "estimate": to_value(&est) }))
}

/// Checks the bound for `g - h`. Convexity of `g` and `h` is a premise, so
/// it is checked first on the grid (or the coarsest partition of `[a, b]`);
/// a failed premise downgrades the result to inconclusive.
fn bound_in<T: Field>(
    s: &Setup,
    g: &FunctionSpec,
    h: &FunctionSpec,
    a: &Scalar,
    b: &Scalar,
    anchors: Option<&(Vec<Scalar>, Vec<Scalar>)>,
    refinement: &Refinement,
) -> Result<(Status, Value)> {
    let (a, b) = (T::from_literal(a)?, T::from_literal(b)?);
    let anchors = match anchors {
        Some((x, y)) => Some((literals_to::<T>(x)?, literals_to::<T>(y)?)),
        None => None,
    };
    let grid: Vec<T> = match &s.grid {
        Some(g) => literals_to(g)?,
        None => {
            let m = refinement.m0.max(s.system.dimension() + 1);
            let step = (b.clone() - a.clone()) / T::from_i64(m as i64);
            (0..=m).map(|i| a.clone() + step.clone() * T::from_i64(i as i64)).collect()
        }
    };
    let premise = [("g", g), ("h", h)]
        .into_iter()
        .map(|(name, f)| {
            let support = f.support();
            let grid: Vec<T> = match support {
                Some(pts) => literals_to(&pts)?,
                None => grid.clone(),
            };
            Ok((name, check_convex_direct(&s.system, f, &grid, &s.cfg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let premise_holds = premise.iter().all(|(_, v)| v.is_convex());
    let premise_json: Value = premise.iter().map(|(name, v)| (name.to_string(), to_value(v))).collect::<serde_json::Map<_, _>>().into();
    let mut out = json!({ "system": to_value(&s.info), "premise": premise_json });
    let status = match check_theorem3(&s.system, &s.system.domain, g, h, &a, &b, anchors, refinement) {
        Ok(report) => {
            out["bound_check"] = to_value(&report);
            if premise_holds {
                Status::Pass
            } else {
                Status::Inconclusive
            }
        }
        Err(Error::BoundViolated { estimate, bound, partition, a_anchor, b_anchor }) => {
            out["bound_violated"] = json!({
                "estimate": estimate,
                "bound": bound,
                "partition": partition,
                "a_anchor": a_anchor,
                "b_anchor": b_anchor,
            });
            if premise_holds {
                Status::Violation
            } else {
                Status::Inconclusive
            }
        }
        Err(e) => return Err(e),
    };
    Ok((status, out))
}
