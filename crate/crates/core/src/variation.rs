//! Variation with respect to a Chebyshev system: sums of consecutive
//! divided-difference increments over partitions of `[a, b]`, lower-bound
//! estimation by refinement, and the upper bound available when the
//! function is a difference of two convex functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::divdiff::divided_difference;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::function::{FunctionSpec, ScalarFunction};
use crate::report::ResidualReport;
use crate::sampling::DEFAULT_REL_TOL;
use crate::scalar::{Field, Scalar};
use crate::system::FunctionSystem;
use crate::tuple::{validate_tuple, OrderingClass};

/// `a = x_0 < x_1 < ... < x_m = b`
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    points: Vec<T>,
}

impl<T: Field> Partition<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("a partition needs at least two points".into()));
        }
        let points = validate_tuple(points, OrderingClass::StrictlyIncreasing)?.into_points();
        Ok(Partition { points })
    }

    /// `x_i = a + (b - a) i / m`
    pub fn uniform(a: &T, b: &T, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("a uniform partition needs m >= 1".into()));
        }
        let width = b.clone() - a.clone();
        let mm = T::from_i64(m as i64);
        let mut points: Vec<T> = (0..m).map(|i| a.clone() + width.clone() * T::from_i64(i as i64) / mm.clone()).collect();
        points.push(b.clone());
        Self::new(points)
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Number of subintervals `m`.
    pub fn size(&self) -> usize {
        self.points.len() - 1
    }
}

/// `[x_i..x_{i+n-1}; f]_ω` for every window `i = 0..=m-n+1`.
fn window_differences<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    partition: &Partition<T>,
) -> Result<Vec<T>> {
    let n = system.dim();
    if partition.points.len() < n + 1 {
        return Err(Error::InsufficientGrid { need: n + 1, got: partition.points.len() });
    }
    partition
        .points
        .windows(n)
        .map(|w| divided_difference(system, n, f, w, DEFAULT_REL_TOL).map(|d| d.value))
        .collect()
}

/// `sum_{i=0}^{m-n} |[x_{i+1}..x_{i+n}; f]_ω - [x_i..x_{i+n-1}; f]_ω|`
pub fn variation_sum<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    partition: &Partition<T>,
) -> Result<T> {
    let d = window_differences(system, f, partition)?;
    Ok(d.windows(2).fold(T::zero(), |acc, w| acc + (w[1].clone() - w[0].clone()).abs()))
}

/// Compares the variation sum with the telescoped value
/// `[x_{m-n+1}..x_m; f]_ω - [x_0..x_{n-1}; f]_ω`; the two agree when every
/// increment is nonnegative, in particular for convex `f`.
pub fn telescoping_check<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>>(
    system: &S,
    f: &F,
    partition: &Partition<T>,
) -> Result<ResidualReport<T>> {
    let d = window_differences(system, f, partition)?;
    let sum = d.windows(2).fold(T::zero(), |acc, w| acc + (w[1].clone() - w[0].clone()).abs());
    let telescoped = d[d.len() - 1].clone() - d[0].clone();
    Ok(ResidualReport::new(sum, telescoped))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    /// Size of the first uniform partition.
    pub m0: usize,
    /// Largest uniform partition size; sizes double from `m0`.
    pub max_m: usize,
    /// Extra rounds on randomly jittered partitions of the largest size.
    pub perturb_rounds: usize,
    pub seed: u64,
}

impl Default for Refinement {
    fn default() -> Self {
        Refinement { m0: 10, max_m: 640, perturb_rounds: 0, seed: 0 }
    }
}

pub const CONVERGENCE_REL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundSum {
    /// Number of subintervals.
    pub m: usize,
    pub sum: Scalar,
    pub best: Scalar,
    pub perturbed: bool,
}

/// A lower bound for the variation: the largest sum seen over the tried
/// partitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationEstimate {
    pub partial_sums: Vec<RoundSum>,
    pub best: Scalar,
    pub bound: Option<Scalar>,
    /// Set when the last two uniform rounds differ by less than a relative
    /// `1e-6`.
    pub converged: bool,
    /// Partition attaining `best`.
    #[serde(skip)]
    pub best_partition: Vec<Scalar>,
}

fn check_interval<T: Field, S: FunctionSystem<T>>(system: &S, a: &T, b: &T) -> Result<()> {
    if a >= b {
        return Err(Error::InvalidInput(format!("need a < b, got a = {a:?}, b = {b:?}")));
    }
    for x in [a, b] {
        if !system.contains(x) {
            return Err(Error::EvaluationOutsideSupport {
                point: format!("{x:?}"),
                detail: "interval endpoint outside the system domain".into(),
            });
        }
    }
    Ok(())
}

/// Candidate partitions: uniform refinements (strided subsets of the table
/// for sampled functions) followed by seeded perturbations.
fn partitions<T: Field>(f: &FunctionSpec, a: &T, b: &T, n: usize, strategy: &Refinement) -> Result<Vec<(Partition<T>, bool)>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    if let Some(support) = f.support() {
        let mut table: Vec<T> = support.iter().map(T::from_literal).collect::<Result<_>>()?;
        table.retain(|x| x >= a && x <= b);
        table.sort_by(|x, y| x.partial_cmp(y).expect("unordered table"));
        table.dedup();
        if table.first() != Some(a) || table.last() != Some(b) {
            return Err(Error::EvaluationOutsideSupport {
                point: format!("{a:?} / {b:?}"),
                detail: "sampled function must be tabulated at both interval endpoints".into(),
            });
        }
        let last = table.len() - 1;
        let mut stride = 1usize;
        while last / (stride * 2) >= strategy.m0.max(n) {
            stride *= 2;
        }
        loop {
            let mut pts: Vec<T> = table.iter().step_by(stride).cloned().collect();
            if !last.is_multiple_of(stride) {
                pts.push(b.clone());
            }
            if pts.len() > n {
                out.push((Partition::new(pts)?, false));
            }
            if stride == 1 {
                break;
            }
            stride /= 2;
        }
        for _ in 0..strategy.perturb_rounds {
            let mut pts: Vec<T> = vec![a.clone()];
            pts.extend(table[1..last].iter().filter(|_| rng.random_bool(0.5)).cloned());
            pts.push(b.clone());
            if pts.len() > n {
                out.push((Partition::new(pts)?, true));
            }
        }
        return Ok(out);
    }
    let mut m = strategy.m0.max(n);
    let mut top = m;
    while m <= strategy.max_m.max(strategy.m0.max(n)) {
        out.push((Partition::uniform(a, b, m)?, false));
        top = m;
        m *= 2;
    }
    // interior points moved by less than half a cell keep their order
    const D: i64 = 1000;
    let width = b.clone() - a.clone();
    let denom = T::from_i64((top as i64) * D);
    for _ in 0..strategy.perturb_rounds {
        let mut pts = vec![a.clone()];
        for i in 1..top {
            let offset: i64 = rng.random_range(-(D / 2 - 1)..=(D / 2 - 1));
            let num = T::from_i64(i as i64 * D + offset);
            pts.push(a.clone() + width.clone() * num / denom.clone());
        }
        pts.push(b.clone());
        out.push((Partition::new(pts)?, true));
    }
    Ok(out)
}

/// Evaluates the variation sum over a refinement sequence and returns the
/// running maximum. The result is a lower bound of the supremum.
pub fn estimate_variation<T: Field, S: FunctionSystem<T>>(
    system: &S,
    f: &FunctionSpec,
    a: &T,
    b: &T,
    strategy: &Refinement,
) -> Result<VariationEstimate> {
    check_interval(system, a, b)?;
    let n = system.dim();
    let mut partial_sums = Vec::new();
    let mut best: Option<T> = None;
    let mut best_partition = Vec::new();
    let mut uniform: Vec<T> = Vec::new();
    for (p, perturbed) in partitions(f, a, b, n, strategy)? {
        let s = variation_sum(system, f, &p)?;
        if best.as_ref().is_none_or(|b| s > *b) {
            best = Some(s.clone());
            best_partition = p.points().iter().map(Field::to_scalar).collect();
        }
        let cur = best.clone().expect("set above");
        partial_sums.push(RoundSum { m: p.size(), sum: s.to_scalar(), best: cur.to_scalar(), perturbed });
        if !perturbed {
            uniform.push(s);
        }
    }
    let converged = match uniform.as_slice() {
        [.., prev, last] => {
            let diff = (last.clone() - prev.clone()).abs().to_f64();
            diff == 0.0 || diff <= CONVERGENCE_REL * last.abs().to_f64()
        }
        _ => false,
    };
    let best = best.ok_or(Error::InsufficientGrid { need: n + 1, got: 0 })?;
    Ok(VariationEstimate { partial_sums, best: best.to_scalar(), bound: None, converged, best_partition })
}

struct Sum<'a>(&'a FunctionSpec, &'a FunctionSpec);

impl<T: Field> ScalarFunction<T> for Sum<'_> {
    fn eval(&self, x: &T) -> Result<T> {
        Ok(self.0.evaluate(x)? + self.1.evaluate(x)?)
    }
}

fn check_anchors<T: Field, S: FunctionSystem<T>>(system: &S, a_anchor: &[T], b_anchor: &[T], a: &T, b: &T) -> Result<()> {
    let n = system.dim();
    for anchor in [a_anchor, b_anchor] {
        if anchor.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: anchor.len() });
        }
    }
    // a_1 < ... < a_n = a < b = b_1 < ... < b_n as one sequence
    let mut seq = a_anchor.to_vec();
    seq.extend(b_anchor.iter().cloned());
    validate_tuple(seq, OrderingClass::StrictlyIncreasing)?;
    if a_anchor[n - 1] != *a {
        return Err(Error::AnchorInfeasible(format!("a-anchor must end at a = {a:?}")));
    }
    if b_anchor[0] != *b {
        return Err(Error::AnchorInfeasible(format!("b-anchor must start at b = {b:?}")));
    }
    if let Some(x) = a_anchor.iter().chain(b_anchor).find(|x| !system.contains(x)) {
        return Err(Error::AnchorInfeasible(format!("anchor {x:?} outside the system domain")));
    }
    Ok(())
}

/// `[b_1..b_n; g+h]_ω - [a_1..a_n; g+h]_ω`
pub fn variation_bound<T: Field, S: FunctionSystem<T>>(
    system: &S,
    g: &FunctionSpec,
    h: &FunctionSpec,
    a_anchor: &[T],
    b_anchor: &[T],
) -> Result<T> {
    let n = system.dim();
    if a_anchor.len() != n || b_anchor.is_empty() {
        return Err(Error::DimensionMismatch { expected: n, got: a_anchor.len().min(b_anchor.len()) });
    }
    check_anchors(system, a_anchor, b_anchor, &a_anchor[n - 1], &b_anchor[0])?;
    let gh = Sum(g, h);
    let top = divided_difference(system, n, &gh, b_anchor, DEFAULT_REL_TOL)?.value;
    let bottom = divided_difference(system, n, &gh, a_anchor, DEFAULT_REL_TOL)?.value;
    Ok(top - bottom)
}

/// `n` points spaced `min(0.1, margin / n)` apart, ending at `a` and
/// starting at `b`, where the margin is the distance to the domain edge.
pub fn default_anchors<T: Field>(domain: &Domain, n: usize, a: &T, b: &T) -> Result<(Vec<T>, Vec<T>)> {
    let hull = domain
        .hull()
        .ok_or_else(|| Error::AnchorInfeasible("default anchors need an interval domain".into()))?;
    let margin_a = a.to_f64() - hull.lo_f64();
    let margin_b = hull.hi_f64() - b.to_f64();
    let spacing = |margin: f64, side: &str| -> Result<T> {
        if n > 1 && margin.is_nan() || n > 1 && margin <= 0.0 {
            return Err(Error::AnchorInfeasible(format!("no room for {n} anchors beyond the {side} endpoint")));
        }
        T::from_literal(&Scalar::Float(0.1f64.min(margin / n as f64)))
    };
    let (sa, sb) = (spacing(margin_a, "left")?, spacing(margin_b, "right")?);
    let a_anchor = (0..n).rev().map(|i| a.clone() - sa.clone() * T::from_i64(i as i64)).collect::<Vec<_>>();
    let b_anchor = (0..n).map(|i| b.clone() + sb.clone() * T::from_i64(i as i64)).collect::<Vec<_>>();
    if let Some(x) = a_anchor.iter().chain(&b_anchor).find(|x| !domain.contains(*x)) {
        return Err(Error::AnchorInfeasible(format!("anchor {x:?} falls outside the domain")));
    }
    Ok((a_anchor, b_anchor))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem3Report {
    pub estimate: VariationEstimate,
    pub bound: Scalar,
    /// `bound - best`
    pub margin: Scalar,
    pub a_anchor: Vec<Scalar>,
    pub b_anchor: Vec<Scalar>,
}

/// Estimates the variation of `f = g - h` on `[a, b]` and checks it against
/// the bound from the anchors. A violation is returned as a replayable
/// [`Error::BoundViolated`] certificate.
#[allow(clippy::too_many_arguments)]
pub fn check_theorem3<T: Field, S: FunctionSystem<T>>(
    system: &S,
    domain: &Domain,
    g: &FunctionSpec,
    h: &FunctionSpec,
    a: &T,
    b: &T,
    anchors: Option<(Vec<T>, Vec<T>)>,
    strategy: &Refinement,
) -> Result<Theorem3Report> {
    check_interval(system, a, b)?;
    let (a_anchor, b_anchor) = match anchors {
        Some(x) => x,
        None => default_anchors(domain, system.dim(), a, b)?,
    };
    check_anchors(system, &a_anchor, &b_anchor, a, b)?;
    let bound = variation_bound(system, g, h, &a_anchor, &b_anchor)?;
    let f = g.clone().minus(h.clone());
    let mut estimate = estimate_variation(system, &f, a, b, strategy)?;
    estimate.bound = Some(bound.to_scalar());
    let best: T = T::from_literal(&estimate.best)?;
    let margin = bound.clone() - best.clone();
    let slack = match T::BACKEND {
        crate::scalar::Backend::Exact => 0.0,
        crate::scalar::Backend::Float => 1e-9 * bound.abs().to_f64().max(1.0),
    };
    let scalars = |v: &[T]| v.iter().map(|x| format!("{}", x.to_scalar())).collect::<Vec<_>>();
    if margin.to_f64() < -slack || (slack == 0.0 && margin.signum_i8() < 0) {
        return Err(Error::BoundViolated {
            estimate: estimate.best.to_string(),
            bound: bound.to_scalar().to_string(),
            partition: estimate.best_partition.iter().map(|s| s.to_string()).collect(),
            a_anchor: scalars(&a_anchor),
            b_anchor: scalars(&b_anchor),
        });
    }
    Ok(Theorem3Report {
        estimate,
        bound: bound.to_scalar(),
        margin: margin.to_scalar(),
        a_anchor: a_anchor.iter().map(Field::to_scalar).collect(),
        b_anchor: b_anchor.iter().map(Field::to_scalar).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Interval;
    use crate::scalar::{rat, Rational};
    use crate::system::ChebyshevSystem;
    use proptest::prelude::*;

    fn poly(n: u32) -> ChebyshevSystem {
        ChebyshevSystem::new((0..n).map(FunctionSpec::power).collect(), Domain::real_line()).unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q)
    }

    #[test]
    fn uniform_partition_sum_of_square() {
        let p = poly(2);
        for m in [10usize, 20, 40] {
            let part = Partition::uniform(&r(0, 1), &r(1, 1), m).unwrap();
            let s = variation_sum(&p, &FunctionSpec::power(2), &part).unwrap();
            assert_eq!(s, r(2, 1) - r(2, m as i64));
        }
        let part = Partition::uniform(&0.0, &1.0, 10).unwrap();
        let s = variation_sum(&p, &FunctionSpec::power(2), &part).unwrap();
        assert!((s - 1.8).abs() < 1e-12);
    }

    #[test]
    fn basis_combinations_have_zero_variation() {
        let p = poly(3);
        let part = Partition::uniform(&r(-1, 1), &r(2, 1), 12).unwrap();
        assert_eq!(variation_sum(&p, &FunctionSpec::power(2), &part).unwrap(), r(0, 1));
        let affine = FunctionSpec::affine([(Scalar::int(3), FunctionSpec::power(0)), (Scalar::ratio(-2, 7), FunctionSpec::power(1))]);
        assert_eq!(variation_sum(&p, &affine, &part).unwrap(), r(0, 1));
        let too_small = Partition::uniform(&r(0, 1), &r(1, 1), 2).unwrap();
        assert!(matches!(variation_sum(&p, &affine, &too_small), Err(Error::InsufficientGrid { .. })));
    }

    #[test]
    fn estimates_increase_towards_two() {
        let est = estimate_variation(&poly(2), &FunctionSpec::power(2), &r(0, 1), &r(1, 1), &Refinement::default()).unwrap();
        let sums: Vec<Scalar> = est.partial_sums.iter().take(3).map(|s| s.sum.clone()).collect();
        assert_eq!(sums, vec![Scalar::ratio(9, 5), Scalar::ratio(19, 10), Scalar::ratio(39, 20)]);
        assert!(est.partial_sums.windows(2).all(|w| w[0].best.to_f64() <= w[1].best.to_f64()));
        assert_eq!(est.best, Scalar::ratio(639, 320));
        assert!(!est.converged);
    }

    #[test]
    fn zero_function_converges_to_zero() {
        let zero = FunctionSpec::constant(0);
        let est = estimate_variation(&poly(2), &zero, &0.0, &1.0, &Refinement::default()).unwrap();
        assert_eq!(est.best, Scalar::Float(0.0));
        assert!(est.converged);
    }

    #[test]
    fn sampled_jump_gives_finite_sums() {
        let xs: Vec<Scalar> = (0..=16).map(|i| Scalar::ratio(i, 16)).collect();
        let ys: Vec<Scalar> = (0..=16).map(|i| Scalar::int(if i < 8 { 0 } else { 5 })).collect();
        let f = FunctionSpec::sampled(xs, ys).unwrap();
        let strategy = Refinement { m0: 4, perturb_rounds: 3, ..Refinement::default() };
        let est = estimate_variation(&poly(2), &f, &r(0, 1), &r(1, 1), &strategy).unwrap();
        assert_eq!(est.partial_sums.iter().filter(|s| !s.perturbed).map(|s| s.m).collect::<Vec<_>>(), vec![4, 8, 16]);
        assert!(est.best.to_f64().is_finite() && est.best.to_f64() > 0.0);
        assert!(!est.converged);
        let off = estimate_variation(&poly(2), &f, &r(1, 32), &r(1, 1), &strategy);
        assert!(matches!(off, Err(Error::EvaluationOutsideSupport { .. })));
    }

    #[test]
    fn bound_examples() {
        let p = poly(2);
        let zero = FunctionSpec::constant(0);
        let (aa, bb) = (vec![r(-1, 2), r(0, 1)], vec![r(1, 1), r(3, 2)]);
        assert_eq!(variation_bound(&p, &FunctionSpec::power(2), &zero, &aa, &bb).unwrap(), r(3, 1));
        assert_eq!(variation_bound(&p, &zero, &zero, &aa, &bb).unwrap(), r(0, 1));
        assert_eq!(variation_bound(&p, &FunctionSpec::power(1), &zero, &aa, &bb).unwrap(), r(0, 1));
        let bad = vec![r(0, 1), r(-1, 2)];
        assert_eq!(variation_bound(&p, &zero, &zero, &bad, &bb).unwrap_err(), Error::OrderingViolation(0, 1));
    }

    #[test]
    fn default_anchor_spacing() {
        let (aa, bb) = default_anchors(&Domain::real_line(), 2, &r(0, 1), &r(1, 1)).unwrap();
        assert_eq!((aa, bb), (vec![r(-1, 10), r(0, 1)], vec![r(1, 1), r(11, 10)]));
        let narrow = Domain::interval(Interval::open(-0.1, 1.5));
        let (aa, _) = default_anchors(&narrow, 4, &0.0, &1.0).unwrap();
        assert!((aa[0] + 0.075).abs() < 1e-15 && aa[0] > -0.1);
        let tight = Domain::interval(Interval::open(0.0, 1.0));
        assert!(matches!(default_anchors(&tight, 2, &0.0, &0.5), Err(Error::AnchorInfeasible(_))));
    }

    #[test]
    fn bound_holds_for_convex_pairs() {
        let p = poly(2);
        let dom = Domain::real_line();
        let rep = check_theorem3(
            &p,
            &dom,
            &FunctionSpec::power(2),
            &FunctionSpec::constant(0),
            &r(0, 1),
            &r(1, 1),
            Some((vec![r(-1, 2), r(0, 1)], vec![r(1, 1), r(3, 2)])),
            &Refinement::default(),
        )
        .unwrap();
        assert_eq!(rep.bound, Scalar::int(3));
        assert!(rep.estimate.partial_sums.iter().all(|s| s.sum.to_f64() <= 3.0));
        let rep = check_theorem3(&p, &dom, &FunctionSpec::power(2), &FunctionSpec::power(4), &0.0, &1.0, None, &Refinement::default()).unwrap();
        assert!(rep.margin.to_f64() >= 0.0);
    }

    #[test]
    fn non_convex_inputs_can_violate_the_bound() {
        // -x^2 is not convex; the bound for g = -x^2, h = 0 is negative
        let p = poly(2);
        let err = check_theorem3(
            &p,
            &Domain::real_line(),
            &FunctionSpec::power(2).negated(),
            &FunctionSpec::constant(0),
            &r(0, 1),
            &r(1, 1),
            None,
            &Refinement::default(),
        )
        .unwrap_err();
        match err {
            Error::BoundViolated { partition, a_anchor, .. } => {
                assert_eq!(partition.first().map(String::as_str), Some("0"));
                assert_eq!(a_anchor, vec!["-1/10".to_string(), "0".to_string()]);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    proptest! {
        #[test]
        fn telescoping_is_exact_for_convex_powers(
            n in 1u32..4,
            extra in 0u32..3,
            m in 4usize..12,
            (lo, w) in (-5i64..5, 1i64..6),
        ) {
            let p = poly(n);
            let f = FunctionSpec::power(n + extra);
            let part = Partition::uniform(&r(lo, 1), &r(lo + w, 1), m).unwrap();
            // x^(n+j) is n-convex on the whole line only for even j or when the interval is positive
            prop_assume!(extra % 2 == 0 || lo >= 0);
            let rep = telescoping_check(&p, &f, &part).unwrap();
            prop_assert!(rep.is_exact(), "{:?}", rep);
        }

        #[test]
        fn adding_basis_combinations_keeps_variation(
            vals in proptest::collection::vec(-9i64..9, 9),
            c in proptest::collection::vec(-4i64..4, 3),
        ) {
            let p = poly(3);
            let xs: Vec<Scalar> = (0..9).map(|i| Scalar::ratio(i, 4)).collect();
            let f = FunctionSpec::sampled(xs.clone(), vals.iter().map(|&v| Scalar::int(v)).collect()).unwrap();
            let shifted = f.clone().plus(FunctionSpec::affine(c.iter().enumerate().map(|(i, &ci)| (Scalar::int(ci), FunctionSpec::power(i as u32)))));
            let part = Partition::new(xs.iter().map(|x| x.to_exact().unwrap()).collect()).unwrap();
            prop_assert_eq!(variation_sum(&p, &f, &part).unwrap(), variation_sum(&p, &shifted, &part).unwrap());
        }

        #[test]
        fn bound_dominates_estimate_for_positive_combinations(
            cg in proptest::collection::vec(0i64..5, 3),
            ch in proptest::collection::vec(0i64..5, 3),
            seed in any::<u64>(),
        ) {
            // even powers and exp are convex for the system (1, x)
            let convex = |c: &[i64]| FunctionSpec::affine([
                (Scalar::int(c[0]), FunctionSpec::power(2)),
                (Scalar::int(c[1]), FunctionSpec::power(4)),
                (Scalar::int(c[2]), FunctionSpec::Exp),
            ]);
            let strategy = Refinement { m0: 8, max_m: 64, perturb_rounds: 2, seed };
            let rep = check_theorem3(&poly(2), &Domain::real_line(), &convex(&cg), &convex(&ch), &-0.5, &1.0, None, &strategy).unwrap();
            prop_assert!(rep.margin.to_f64() >= -1e-9);
        }
    }
}
