//! The divided-difference system induced by a fixed base tuple, its sign
//! bookkeeping, and the determinant identity relating it to the parent.

use serde::Serialize;

use crate::determinant::{is_positive_chebyshev, phi, ChebyshevReport, Matrix};
use crate::divdiff::divided_difference;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::report::ResidualReport;
use crate::sampling::{index_tuples, CheckConfig, DEFAULT_REL_TOL};
use crate::scalar::{Field, Scalar};
use crate::system::{BasisFunction, FunctionSystem};
use crate::tuple::{OrderingClass, PointTuple};

/// `x -> [x_1, ..., x_k, x; ω_j]_{ω⟨k+1⟩}` for `j = k+1..n`, an
/// `(n-k)`-dimensional system on the domain with the base points removed.
#[derive(Debug, Clone)]
pub struct InducedSystem<T, S> {
    parent: S,
    k: usize,
    base: Vec<T>,
    rel_tol: f64,
}

/// Builds the induced system for a strictly increasing base of length `k`,
/// `1 <= k < n`.
pub fn build_induced<T: Field, S: FunctionSystem<T>>(parent: S, base: &PointTuple<T>) -> Result<InducedSystem<T, S>> {
    let k = base.len();
    let n = parent.dim();
    if k == 0 || k >= n {
        return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), got: k });
    }
    let base = crate::tuple::validate_tuple(base.to_vec(), OrderingClass::StrictlyIncreasing)?.into_points();
    if let Some(x) = base.iter().find(|x| !parent.contains(x)) {
        return Err(Error::EvaluationOutsideSupport {
            point: format!("{x:?}"),
            detail: "base point outside the system domain".into(),
        });
    }
    Ok(InducedSystem { parent, k, base, rel_tol: DEFAULT_REL_TOL })
}

impl<T: Field, S: FunctionSystem<T>> InducedSystem<T, S> {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn parent(&self) -> &S {
        &self.parent
    }

    /// `[x_1, ..., x_k, x; f]_{ω⟨k+1⟩}` for an arbitrary `f`.
    pub fn derived<F: ScalarFunction<T>>(&self, f: F) -> InducedFunction<'_, T, S, F> {
        InducedFunction { induced: self, f }
    }

    fn divided<F: ScalarFunction<T>>(&self, f: &F, x: &T) -> Result<T> {
        if self.base.contains(x) {
            return Err(Error::EvaluationOutsideSupport {
                point: format!("{x:?}"),
                detail: "the induced system is undefined at its base points".into(),
            });
        }
        let mut pts = self.base.clone();
        pts.push(x.clone());
        Ok(divided_difference(&self.parent, self.k + 1, f, &pts, self.rel_tol)?.value)
    }
}

impl<T: Field, S: FunctionSystem<T>> FunctionSystem<T> for InducedSystem<T, S> {
    fn dim(&self) -> usize {
        self.parent.dim() - self.k
    }

    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange(format!("basis index {index} of induced system {}", self.dim())));
        }
        self.divided(&BasisFunction { system: &self.parent, index: self.k + index }, x)
    }

    fn contains(&self, x: &T) -> bool {
        self.parent.contains(x) && !self.base.contains(x)
    }
}

/// `x -> [x_1, ..., x_k, x; f]_{ω⟨k+1⟩}`
pub struct InducedFunction<'a, T, S, F> {
    induced: &'a InducedSystem<T, S>,
    f: F,
}

impl<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>> ScalarFunction<T> for InducedFunction<'_, T, S, F> {
    fn eval(&self, x: &T) -> Result<T> {
        self.induced.divided(&self.f, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignIndex {
    /// `max{i : x_i < x}`, or 0 when `x` lies left of the base.
    pub ell: usize,
    /// `(-1)^(k - ell)`
    pub predicted_sign: i8,
}

/// Position of `x` relative to a strictly increasing base and the sign it
/// forces on `Φ_{ω⟨k+1⟩}(x_1, ..., x_k, x)`.
pub fn sign_index<T: Field>(base: &[T], x: &T) -> Result<SignIndex> {
    if base.contains(x) {
        return Err(Error::DuplicatePoint(format!("{x:?}")));
    }
    let ell = base.iter().take_while(|b| *b < x).count();
    let predicted_sign = if (base.len() - ell).is_multiple_of(2) { 1 } else { -1 };
    Ok(SignIndex { ell, predicted_sign })
}

/// Both sides of the bordered identity
///
/// `Φ_W(x_1..x_m) Φ_{W⟨k⟩}(x_1..x_k)^(m-k-1) / prod_j Φ_{W⟨k+1⟩}(x_1..x_k, x_j)
///   = det [ [x_1..x_k, x_j; W_i]_{W⟨k+1⟩} ]_{i, j = k+1..m}`
///
/// for a system `W` of dimension `m = points.len()`.
pub(crate) fn bordered_identity<T: Field, S: FunctionSystem<T>>(
    system: &S,
    k: usize,
    points: &[T],
    rel_tol: f64,
) -> Result<ResidualReport<T>> {
    let m = system.dim();
    if points.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: points.len() });
    }
    if k == 0 || k >= m {
        return Err(Error::DimensionMismatch { expected: m.saturating_sub(1), got: k });
    }
    let base = &points[..k];
    let mut prod = T::one();
    for xj in &points[k..] {
        let mut pts = base.to_vec();
        pts.push(xj.clone());
        prod = prod * phi(system, k + 1, &pts)?;
    }
    if prod.is_zero() {
        return Err(Error::SingularDenominator {
            value: format!("{prod:?}"),
            points: points.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join(", "),
        });
    }
    let lhs = phi(system, m, points)? * phi(system, k, base)?.powi((m - k - 1) as u32) / prod;
    let size = m - k;
    let entries = Matrix::try_from_fn(size, size, |r, c| {
        let mut pts = base.to_vec();
        pts.push(points[k + c].clone());
        let f = BasisFunction { system, index: k + r };
        divided_difference(system, k + 1, &f, &pts, rel_tol).map(|d| d.value)
    })?;
    let rhs = T::determinant(&entries);
    Ok(ResidualReport::new(lhs, rhs))
}

/// The identity relating `Φ_ω(x_1..x_n)` to the determinant of the induced
/// divided differences, for a pairwise distinct `n`-tuple whose first `k`
/// points form the base.
pub fn identity_id<T: Field, S: FunctionSystem<T>>(system: &S, k: usize, points: &PointTuple<T>) -> Result<ResidualReport<T>> {
    points.require_distinct()?;
    bordered_identity(system, k, points, DEFAULT_REL_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub tuples_checked: usize,
    /// Tuples whose two sides agree exactly.
    pub exact_matches: usize,
    pub max_relative_residual: f64,
    /// The tuple attaining the maximum, base points first.
    pub worst: Option<Vec<Scalar>>,
}

impl IdentitySummary {
    pub(crate) fn new() -> Self {
        IdentitySummary { tuples_checked: 0, exact_matches: 0, max_relative_residual: 0.0, worst: None }
    }

    pub(crate) fn record<T: Field>(&mut self, points: &[T], r: &ResidualReport<T>) {
        self.tuples_checked += 1;
        if r.is_exact() {
            self.exact_matches += 1;
        }
        let rel = r.relative();
        if rel > self.max_relative_residual || (self.worst.is_none() && rel > 0.0) {
            self.max_relative_residual = rel;
            self.worst = Some(points.iter().map(Field::to_scalar).collect());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub k: usize,
    pub base: Vec<Scalar>,
    /// Positivity of the induced system on the punctured grid.
    pub induced: ChebyshevReport,
    pub identity: IdentitySummary,
}

impl Theorem1Report {
    pub fn passed(&self, rel_tol: f64) -> bool {
        self.induced.verdict.is_positive() && self.identity.max_relative_residual <= rel_tol
    }
}

/// Checks that the system induced by `base` is positive on the grid and
/// evaluates the identity on the same sampled tuples. Base points are
/// dropped from the grid.
pub fn verify_theorem1<T: Field, S: FunctionSystem<T>>(
    system: &S,
    base: &PointTuple<T>,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<Theorem1Report> {
    let induced = build_induced(system, base)?.with_rel_tol(cfg.rel_tol);
    let k = induced.k();
    let dim = induced.dim();
    let punctured: Vec<T> = grid.iter().filter(|x| !base.contains(x)).cloned().collect();
    let report = is_positive_chebyshev(&induced, dim, &punctured, cfg)?;
    let grid = crate::sampling::prepare_grid(&induced, &punctured, cfg)?;
    let (tuples, _) = index_tuples(grid.len(), dim, cfg.budget, cfg.seed);
    let mut identity = IdentitySummary::new();
    let mut pts: Vec<T> = Vec::with_capacity(k + dim);
    for idx in tuples {
        pts.clear();
        pts.extend(base.iter().cloned());
        pts.extend(idx.iter().map(|&i| grid[i].clone()));
        let r = bordered_identity(system, k, &pts, cfg.rel_tol)?;
        identity.record(&pts, &r);
    }
    Ok(Theorem1Report { k, base: base.to_scalars(), induced: report, identity })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignMismatch {
    pub base: Vec<Scalar>,
    pub x: Scalar,
    pub predicted_sign: i8,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignFormulaReport {
    pub k: usize,
    pub checked: usize,
    /// Pairs where the determinant fell in the float band.
    pub indeterminate: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<SignMismatch>,
    pub exhaustive: bool,
}

/// Compares `sign Φ_{ω⟨k+1⟩}(x_1..x_k, x)` against `(-1)^(k - ell)` for the
/// sampled strictly increasing bases of the grid and every other grid point.
pub fn verify_sign_formula<T: Field, S: FunctionSystem<T>>(
    system: &S,
    k: usize,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<SignFormulaReport> {
    if k == 0 || k >= system.dim() {
        return Err(Error::DimensionMismatch { expected: system.dim().saturating_sub(1), got: k });
    }
    let prefix = crate::system::Prefix { system, k: k + 1 };
    let grid = crate::sampling::prepare_grid(&prefix, grid, cfg)?;
    if grid.len() < k + 1 {
        return Err(Error::InsufficientGrid { need: k + 1, got: grid.len() });
    }
    let (bases, exhaustive) = index_tuples(grid.len(), k, cfg.base_budget, cfg.seed);
    let mut out = SignFormulaReport { k, checked: 0, indeterminate: 0, mismatches: 0, first_mismatch: None, exhaustive };
    let mut pts: Vec<T> = Vec::with_capacity(k + 1);
    for idx in &bases {
        let base: Vec<T> = idx.iter().map(|&i| grid[i].clone()).collect();
        for (i, x) in grid.iter().enumerate() {
            if idx.contains(&i) {
                continue;
            }
            let predicted = sign_index(&base, x)?.predicted_sign;
            pts.clear();
            pts.extend(base.iter().cloned());
            pts.push(x.clone());
            let (value, tol) = crate::determinant::phi_banded(&prefix, &pts, cfg.rel_tol)?;
            out.checked += 1;
            let actual = match crate::scalar::classify(&value, tol) {
                crate::scalar::SignClass::Positive => 1,
                crate::scalar::SignClass::Negative => -1,
                crate::scalar::SignClass::Zero => 0,
                crate::scalar::SignClass::Band => {
                    out.indeterminate += 1;
                    continue;
                }
            };
            if actual != predicted {
                out.mismatches += 1;
                if out.first_mismatch.is_none() {
                    out.first_mismatch = Some(SignMismatch {
                        base: base.iter().map(Field::to_scalar).collect(),
                        x: x.to_scalar(),
                        predicted_sign: predicted,
                        value: value.to_scalar(),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::induced_divdiff_expansion;
    use crate::domain::{Domain, Interval};
    use crate::function::FunctionSpec;
    use crate::scalar::{rat, Rational};
    use crate::system::ChebyshevSystem;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn poly(n: u32) -> ChebyshevSystem {
        ChebyshevSystem::new((0..n).map(FunctionSpec::power).collect(), Domain::real_line()).unwrap()
    }

    fn trig() -> ChebyshevSystem {
        ChebyshevSystem::new(
            vec![FunctionSpec::power(0), FunctionSpec::Cos { freq: 1 }, FunctionSpec::Sin { freq: 1 }],
            Domain::interval(Interval::open(-PI, 0.0)),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn last_induced_function_is_one() {
        let p = poly(4);
        let base = PointTuple::increasing(ints(&[-1, 2, 5])).unwrap();
        let ind = build_induced(&p, &base).unwrap();
        assert_eq!(ind.dim(), 1);
        for x in [-3, 0, 1, 7] {
            assert_eq!(ind.eval_basis(0, &rat(x, 1)).unwrap(), rat(1, 1));
        }
        assert!(ind.eval_basis(0, &rat(2, 1)).is_err());
        assert!(!ind.contains(&rat(5, 1)));
    }

    #[test]
    fn build_rejects_bad_bases() {
        let p = poly(3);
        let unordered = PointTuple::distinct(ints(&[2, 1])).unwrap();
        assert_eq!(build_induced(&p, &unordered).unwrap_err(), Error::OrderingViolation(0, 1));
        let full = PointTuple::increasing(ints(&[1, 2, 3])).unwrap();
        assert!(matches!(build_induced(&p, &full), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn trig_induced_basis_is_negative_cotangent() {
        let t = trig();
        for &x1 in &[-3.0, -2.2, -1.0, -0.3] {
            let base = PointTuple::increasing(vec![x1]).unwrap();
            let ind = build_induced(&t, &base).unwrap();
            let closed = FunctionSpec::NegCotHalf { x1: x1.into() };
            for i in 1..30 {
                let x = -PI * i as f64 / 30.0;
                if (x - x1).abs() < 1e-3 {
                    continue;
                }
                assert!((ind.eval_basis(0, &x).unwrap() - 1.0).abs() < 1e-12);
                let got = ind.eval_basis(1, &x).unwrap();
                let want: f64 = closed.evaluate(&x).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{x1} {x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn sign_index_examples() {
        let base = [1.0, 3.0];
        assert_eq!(sign_index(&base, &2.0).unwrap(), SignIndex { ell: 1, predicted_sign: -1 });
        assert_eq!(sign_index(&base, &4.0).unwrap(), SignIndex { ell: 2, predicted_sign: 1 });
        assert_eq!(sign_index(&base, &0.0).unwrap(), SignIndex { ell: 0, predicted_sign: 1 });
        assert!(matches!(sign_index(&base, &3.0), Err(Error::DuplicatePoint(_))));
        // Φ_{(p0,p1,p2)}(1,3,2) = (3-1)(2-1)(2-3) and Φ(1,3,0) = (3-1)(0-1)(0-3)
        assert_eq!(phi(&poly(3), 3, &ints(&[1, 3, 2])).unwrap(), rat(-2, 1));
        assert_eq!(phi(&poly(3), 3, &ints(&[1, 3, 0])).unwrap(), rat(6, 1));
    }

    #[test]
    fn sign_formula_on_small_grids() {
        let cfg = CheckConfig::default();
        let g: Vec<Rational> = ints(&[-3, -1, 0, 2, 3, 5, 6, 9]);
        for k in 1..5 {
            let r = verify_sign_formula(&poly(6), k, &g, &cfg).unwrap();
            assert!(r.exhaustive);
            assert_eq!(r.mismatches, 0, "{r:?}");
            assert_eq!(r.checked, crate::sampling::binomial(8, k) as usize * (8 - k));
        }
        let tg: Vec<f64> = (1..9).map(|i| -PI * i as f64 / 9.0).collect();
        for k in 1..3 {
            let r = verify_sign_formula(&trig(), k, &tg, &cfg).unwrap();
            assert_eq!((r.mismatches, r.indeterminate), (0, 0));
        }
    }

    #[test]
    fn induced_positivity_examples() {
        let cfg = CheckConfig::default();
        let base = PointTuple::increasing(ints(&[0])).unwrap();
        let r = verify_theorem1(&poly(3), &base, &ints(&[1, 2, 3, 4]), &cfg).unwrap();
        assert!(r.induced.verdict.is_positive());
        assert_eq!(r.identity.tuples_checked, 6);
        assert_eq!(r.identity.exact_matches, 6);
        assert!(r.passed(0.0));

        let tbase = PointTuple::increasing(vec![-3.0]).unwrap();
        let grid: Vec<f64> = (1..=8).map(|i| -PI * i as f64 / 9.0).collect();
        let r = verify_theorem1(&trig(), &tbase, &grid, &cfg).unwrap();
        assert!(r.induced.verdict.is_positive(), "{r:?}");
        assert!(r.identity.max_relative_residual < 1e-10);
    }

    #[test]
    fn base_points_are_dropped_from_the_grid() {
        let base = PointTuple::increasing(ints(&[1, 3])).unwrap();
        let r = verify_theorem1(&poly(4), &base, &ints(&[0, 1, 2, 3, 4]), &CheckConfig::default()).unwrap();
        assert_eq!(r.induced.tuples_checked, 3);
    }

    fn sorted_distinct(range: std::ops::Range<i64>, len: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::btree_set((range, 1i64..5), len).prop_filter_map("collision", move |s| {
            let mut v: Vec<Rational> = s.into_iter().map(|(p, q)| rat(p, q)).collect();
            v.sort();
            v.dedup();
            (v.len() == len).then_some(v)
        })
    }

    proptest! {
        #[test]
        fn polynomial_induced_matches_expansion(
            (k, extra) in (1usize..5, 1usize..3),
            pts in sorted_distinct(-20..20, 6),
        ) {
            let n = k + extra;
            let p = poly(n as u32);
            let base = PointTuple::increasing(pts[..k].to_vec()).unwrap();
            let ind = build_induced(&p, &base).unwrap();
            let x = &pts[5];
            for i in 0..ind.dim() {
                let want = induced_divdiff_expansion(&pts[..k], k + i, x).unwrap();
                prop_assert_eq!(ind.eval_basis(i, x).unwrap(), want);
            }
        }

        #[test]
        fn identity_id_is_exact_for_polynomials(
            n in 2usize..7,
            pts in sorted_distinct(-15..15, 6),
            shuffle in any::<u64>(),
        ) {
            let p = poly(n as u32);
            let mut pts = pts;
            pts.truncate(n);
            let rot = (shuffle as usize) % n;
            pts.rotate_left(rot);
            for k in 1..n {
                let mut base = pts[..k].to_vec();
                base.sort();
                let mut all = base;
                all.extend_from_slice(&pts[k..]);
                let t = PointTuple::distinct(all).unwrap();
                let r = identity_id(&p, k, &t).unwrap();
                prop_assert!(r.is_exact(), "{:?}", r);
            }
        }

        #[test]
        fn product_sign_matches_index_sum(
            (n, k) in (2usize..6).prop_flat_map(|n| (Just(n), 1..n)),
            pts in sorted_distinct(-12..12, 6),
            pick in any::<u64>(),
        ) {
            let p = poly(n as u32);
            let pts = &pts[..n];
            // choose which k of the n points form the base
            let mut chosen: Vec<usize> = (0..n).collect();
            let mut s = pick;
            for i in (1..n).rev() {
                chosen.swap(i, (s % (i as u64 + 1)) as usize);
                s /= i as u64 + 1;
            }
            let mut bi = chosen[..k].to_vec();
            bi.sort();
            let base: Vec<Rational> = bi.iter().map(|&i| pts[i].clone()).collect();
            let rest: Vec<Rational> = (0..n).filter(|i| !bi.contains(i)).map(|i| pts[i].clone()).collect();
            let mut prod = rat(1, 1);
            let mut ell_sum = 0;
            for x in &rest {
                let mut q = base.clone();
                q.push(x.clone());
                prod *= phi(&p, k + 1, &q).unwrap();
                ell_sum += sign_index(&base, x).unwrap().ell;
            }
            let expected = if ((n - k) * k + ell_sum) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(prod.signum_i8(), expected);
            let mut all = base;
            all.extend(rest);
            prop_assert_eq!(phi(&p, n, &all).unwrap().signum_i8(), expected);
        }
    }
}
