//! Grid-relative convexity with respect to a Chebyshev system, decided
//! directly, through the induced system, or through the induced system
//! restricted to one gap of the base tuple.

use serde::Serialize;

use crate::determinant::{is_positive_chebyshev, phi, phi_banded, ChebyshevReport};
use crate::divdiff::divided_difference;
use crate::domain::{Domain, Interval};
use crate::error::{Error, Result};
use crate::function::{FunctionSpec, ScalarFunction};
use crate::induced::{bordered_identity, build_induced, IdentitySummary};
use crate::report::ResidualReport;
use crate::sampling::{index_tuples, prepare_grid, scan, CheckConfig, Scan};
use crate::scalar::{Field, Scalar};
use crate::system::{Bordered, ChebyshevSystem, FunctionSystem};
use crate::tuple::PointTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Direct,
    Induced { k: usize },
    Interval { k: usize, ell: usize },
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Direct => write!(f, "direct"),
            Mode::Induced { k } => write!(f, "induced(k={k})"),
            Mode::Interval { k, ell } => write!(f, "interval(k={k}, ell={ell})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    ConvexOnSample,
    /// `witness` replays to `value < 0` against the system induced by
    /// `base` (or against the original system when `base` is absent).
    Violated { base: Option<Vec<Scalar>>, witness: Vec<Scalar>, value: Scalar },
    /// Only values inside the negative tolerance band were seen.
    Indeterminate { base: Option<Vec<Scalar>>, witness: Vec<Scalar>, value: Scalar },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityVerdict {
    #[serde(flatten)]
    pub mode: Mode,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub tuples_checked: usize,
    pub bases_checked: usize,
    /// Bases whose restricted grid had too few points to test anything.
    pub skipped_bases: usize,
    pub exhaustive: bool,
    pub seed: u64,
}

impl ConvexityVerdict {
    pub fn is_convex(&self) -> bool {
        matches!(self.outcome, Outcome::ConvexOnSample)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self.outcome, Outcome::Violated { .. })
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self.outcome, Outcome::Indeterminate { .. })
    }
}

/// Values of a system and a function tabulated once on a sorted grid.
struct Table<T> {
    points: Vec<T>,
    /// `rows[i][p]`: basis function `i` (the function last) at `points[p]`.
    rows: Vec<Vec<T>>,
}

impl<T: Field> Table<T> {
    fn build<S: FunctionSystem<T>, F: ScalarFunction<T>>(system: &S, f: &F, points: Vec<T>) -> Result<Self> {
        let mut rows = Vec::with_capacity(system.dim() + 1);
        for i in 0..system.dim() {
            rows.push(points.iter().map(|x| system.eval_basis(i, x)).collect::<Result<Vec<T>>>()?);
        }
        rows.push(points.iter().map(|x| f.eval(x)).collect::<Result<Vec<T>>>()?);
        Ok(Table { points, rows })
    }

    fn index_of(&self, x: &T) -> Result<usize> {
        self.points
            .binary_search_by(|p| p.partial_cmp(x).expect("unordered point"))
            .map_err(|_| Error::EvaluationOutsideSupport { point: format!("{x:?}"), detail: "not a tabulated grid point".into() })
    }
}

impl<T: Field> FunctionSystem<T> for Table<T> {
    fn dim(&self) -> usize {
        self.rows.len()
    }
    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        Ok(self.rows[index][self.index_of(x)?].clone())
    }
    fn contains(&self, x: &T) -> bool {
        self.index_of(x).is_ok()
    }
}

/// Sign scan of `Φ_{(S, f)}` over strictly increasing tuples of `points`.
fn scan_bordered<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    points: Vec<T>,
    cfg: &CheckConfig,
) -> Result<Scan<T>> {
    let table = Table::build(system, f, points)?;
    let m = table.dim();
    let grid = table.points.clone();
    scan(&grid, m, cfg, |pts| phi_banded(&table, pts, cfg.rel_tol))
}

fn to_scalars<T: Field>(v: &[T]) -> Vec<Scalar> {
    v.iter().map(Field::to_scalar).collect()
}

fn need_grid(need: usize, got: usize) -> Result<()> {
    if got < need {
        return Err(Error::InsufficientGrid { need, got });
    }
    Ok(())
}

/// `Φ_{(ω, f)} >= 0` on the sampled strictly increasing `(n+1)`-tuples.
pub fn check_convex_direct<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ConvexityVerdict> {
    let n = system.dim();
    let grid = prepare_grid(system, grid, cfg)?;
    need_grid(n + 1, grid.len())?;
    let s = scan_bordered(system, f, grid, cfg)?;
    let outcome = if let Some((w, v)) = &s.negative {
        Outcome::Violated { base: None, witness: to_scalars(w), value: v.to_scalar() }
    } else if let Some((w, v)) = &s.band_negative {
        Outcome::Indeterminate { base: None, witness: to_scalars(w), value: v.to_scalar() }
    } else {
        Outcome::ConvexOnSample
    };
    Ok(ConvexityVerdict {
        mode: Mode::Direct,
        outcome,
        tuples_checked: s.checked,
        bases_checked: 0,
        skipped_bases: 0,
        exhaustive: s.exhaustive,
        seed: cfg.seed,
    })
}

/// Shared driver for the induced and interval modes. `ell = None` keeps the
/// whole punctured grid.
fn check_over_bases<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    k: usize,
    ell: Option<usize>,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ConvexityVerdict> {
    let n = system.dim();
    if k == 0 || k >= n {
        return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), got: k });
    }
    if let Some(l) = ell {
        if l > k {
            return Err(Error::IndexOutOfRange(format!("ell = {l} must satisfy 0 <= ell <= {k}")));
        }
    }
    let grid = prepare_grid(system, grid, cfg)?;
    need_grid(n + 1, grid.len())?;
    let (bases, mut exhaustive) = index_tuples(grid.len(), k, cfg.base_budget, cfg.seed);
    let mut out = ConvexityVerdict {
        mode: match ell {
            None => Mode::Induced { k },
            Some(ell) => Mode::Interval { k, ell },
        },
        outcome: Outcome::ConvexOnSample,
        tuples_checked: 0,
        bases_checked: 0,
        skipped_bases: 0,
        exhaustive,
        seed: cfg.seed,
    };
    let mut indeterminate = None;
    for idx in &bases {
        let base: Vec<T> = idx.iter().map(|&i| grid[i].clone()).collect();
        let rest: Vec<T> = grid
            .iter()
            .enumerate()
            .filter(|(i, x)| {
                !idx.contains(i)
                    && match ell {
                        None => true,
                        Some(0) => *x < &base[0],
                        Some(l) if l == k => *x > &base[k - 1],
                        Some(l) => *x > &base[l - 1] && *x < &base[l],
                    }
            })
            .map(|(_, x)| x.clone())
            .collect();
        if rest.len() < n - k + 1 {
            out.skipped_bases += 1;
            continue;
        }
        let pt = PointTuple::increasing(base.clone())?;
        let induced = build_induced(system, &pt)?.with_rel_tol(cfg.rel_tol);
        let derived = induced.derived(f);
        let s = scan_bordered(&induced, &derived, rest, cfg)?;
        out.bases_checked += 1;
        out.tuples_checked += s.checked;
        exhaustive &= s.exhaustive;
        if let Some((w, v)) = s.negative {
            out.outcome = Outcome::Violated { base: Some(to_scalars(&base)), witness: to_scalars(&w), value: v.to_scalar() };
            out.exhaustive = exhaustive;
            return Ok(out);
        }
        if indeterminate.is_none() {
            if let Some((w, v)) = s.band_negative {
                indeterminate = Some(Outcome::Indeterminate {
                    base: Some(to_scalars(&base)),
                    witness: to_scalars(&w),
                    value: v.to_scalar(),
                });
            }
        }
    }
    out.exhaustive = exhaustive;
    if let Some(o) = indeterminate {
        out.outcome = o;
    }
    Ok(out)
}

/// For each sampled base `x_1 < ... < x_k`, checks convexity of
/// `x -> [x_1..x_k, x; f]_{ω⟨k+1⟩}` with respect to the induced system on
/// the grid minus the base. Stops at the first violating base.
pub fn check_convex_induced<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    k: usize,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ConvexityVerdict> {
    check_over_bases(system, k, None, f, grid, cfg)
}

/// As [`check_convex_induced`], restricted to grid points left of `x_1`
/// (`ell = 0`), between `x_ell` and `x_{ell+1}`, or right of `x_k`
/// (`ell = k`). Bases leaving too few points there are skipped and counted.
pub fn check_convex_interval<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    k: usize,
    ell: usize,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ConvexityVerdict> {
    check_over_bases(system, k, Some(ell), f, grid, cfg)
}

/// `f` is strictly convex on the grid when `(ω, f)` is itself positive.
pub fn is_strictly_convex<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ChebyshevReport> {
    let n = system.dim();
    is_positive_chebyshev(&Bordered { system, k: n, extra: f }, n + 1, grid, cfg)
}

/// Both sides of
///
/// `Φ_{(ω,f)}(x_1..x_{n+1}) Φ_{ω⟨k⟩}(x_1..x_k)^(n-k) / prod_{j>k} Φ_{ω⟨k+1⟩}(x_1..x_k, x_j)`
/// `= det` of the induced divided differences of `ω_{k+1}, ..., ω_n, f`.
pub fn identity_fid_check<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    k: usize,
    f: &F,
    points: &PointTuple<T>,
) -> Result<ResidualReport<T>> {
    let n = system.dim();
    if k == 0 || k >= n {
        return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), got: k });
    }
    points.require_distinct()?;
    bordered_identity(&Bordered { system, k: n, extra: f }, k, points, crate::sampling::DEFAULT_REL_TOL)
}

/// The `k = n - 1` case evaluated from its collapsed form:
///
/// `Φ_{(ω,f)}(x) Φ_{ω⟨n-1⟩}(x_1..x_{n-1}) / (Φ_ω(.., x_n) Φ_ω(.., x_{n+1}))`
/// `= [x_1..x_{n-1}, x_{n+1}; f]_ω - [x_1..x_{n-1}, x_n; f]_ω`.
pub fn identity_fid1_check<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    points: &PointTuple<T>,
) -> Result<ResidualReport<T>> {
    let n = system.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: n });
    }
    if points.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: points.len() });
    }
    points.require_distinct()?;
    let head = &points[..n - 1];
    let with = |x: &T| {
        let mut v = head.to_vec();
        v.push(x.clone());
        v
    };
    let (at_n, at_n1) = (with(&points[n - 1]), with(&points[n]));
    let tol = crate::sampling::DEFAULT_REL_TOL;
    let dd_n1 = divided_difference(system, n, f, &at_n1, tol)?;
    let dd_n = divided_difference(system, n, f, &at_n, tol)?;
    let full = phi(&Bordered { system, k: n, extra: f }, n + 1, points)?;
    let lhs = full * phi(system, n - 1, head)? / (dd_n.denominator * dd_n1.denominator.clone());
    Ok(ResidualReport::new(lhs, dd_n1.value - dd_n.value))
}

/// Runs both identities over sampled `(n+1)`-tuples of a grid, the first `k`
/// points of each tuple serving as base.
pub fn identity_fid_sweep<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    k: usize,
    f: &F,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<IdentitySummary> {
    let n = system.dim();
    let grid = prepare_grid(system, grid, cfg)?;
    need_grid(n + 1, grid.len())?;
    let (tuples, _) = index_tuples(grid.len(), n + 1, cfg.budget, cfg.seed);
    let mut summary = IdentitySummary::new();
    for idx in tuples {
        let pts: Vec<T> = idx.iter().map(|&i| grid[i].clone()).collect();
        let t = PointTuple::distinct(pts)?;
        let r = identity_fid_check(system, k, f, &t)?;
        summary.record(&t, &r);
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub verdicts: Vec<ConvexityVerdict>,
    /// Modes whose decided verdict contradicts another decided verdict.
    pub disagreements: Vec<String>,
    /// `convex_on_sample` or `violated` when every decided mode agrees.
    pub consensus: Option<String>,
    pub indeterminate_modes: usize,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs the direct mode, the induced mode for every `k` and the interval
/// mode for every `(k, ell)`. Indeterminate verdicts are left out of the
/// comparison.
pub fn cross_mode_agreement<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    grid: &[T],
    ks: &[usize],
    cfg: &CheckConfig,
) -> Result<AgreementReport> {
    let mut verdicts = vec![check_convex_direct(system, f, grid, cfg)?];
    for &k in ks {
        verdicts.push(check_convex_induced(system, k, f, grid, cfg)?);
        for ell in 0..=k {
            verdicts.push(check_convex_interval(system, k, ell, f, grid, cfg)?);
        }
    }
    let decided: Vec<&ConvexityVerdict> = verdicts.iter().filter(|v| !v.is_indeterminate()).collect();
    let convex = decided.iter().filter(|v| v.is_convex()).count();
    let violated = decided.len() - convex;
    let (consensus, disagreements) = if decided.is_empty() {
        (None, Vec::new())
    } else if violated == 0 {
        (Some("convex_on_sample".to_string()), Vec::new())
    } else if convex == 0 {
        (Some("violated".to_string()), Vec::new())
    } else {
        // the minority side is listed
        let minority_convex = convex <= violated;
        let list = decided
            .iter()
            .filter(|v| v.is_convex() == minority_convex)
            .map(|v| v.mode.to_string())
            .collect();
        (None, list)
    };
    let indeterminate_modes = verdicts.len() - decided.len();
    Ok(AgreementReport { verdicts, disagreements, consensus, indeterminate_modes })
}

/// `(1, -cot((x_1 + .)/2))` on `(-π, 0)` minus `x_1`: the closed form of the
/// system induced by `(1, cos, sin)` at the single base point `x_1`.
pub fn trig_example_induced_system(x1: f64) -> Result<ChebyshevSystem> {
    let base = Interval::open(-std::f64::consts::PI, 0.0);
    let domain = Domain::punctured(base, vec![Scalar::Float(x1)])?;
    ChebyshevSystem::new(vec![FunctionSpec::power(0), FunctionSpec::NegCotHalf { x1: Scalar::Float(x1) }], domain)
}
