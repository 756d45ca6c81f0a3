//! Generalized `ω`-divided differences, classical divided differences and
//! complete homogeneous symmetric polynomials.

use serde::Serialize;

use crate::determinant::phi_banded;
use crate::error::{Error, Result};
use crate::function::{FunctionSpec, ScalarFunction};
use crate::report::ResidualReport;
use crate::sampling::DEFAULT_REL_TOL;
use crate::scalar::{Backend, Field};
use crate::system::{check_prefix, Bordered, FunctionSystem, Prefix};
use crate::tuple::PointTuple;

/// `[x_1, ..., x_k; f]_{ω⟨k⟩}` with the determinants that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct DividedDifference<T: Field> {
    #[serde(serialize_with = "crate::report::ser")]
    pub value: T,
    /// `Φ_{(ω⟨k-1⟩, f)}`
    #[serde(serialize_with = "crate::report::ser")]
    pub numerator: T,
    /// `Φ_{ω⟨k⟩}`
    #[serde(serialize_with = "crate::report::ser")]
    pub denominator: T,
    /// `k - 1`
    pub order: usize,
    #[serde(serialize_with = "crate::report::ser_vec")]
    pub points: Vec<T>,
}

/// Works on raw slices; callers are responsible for distinctness.
pub(crate) fn divided_difference<T, S, F>(
    system: &S,
    k: usize,
    f: &F,
    points: &[T],
    rel_tol: f64,
) -> Result<DividedDifference<T>>
where
    T: Field,
    S: FunctionSystem<T>,
    F: ScalarFunction<T>,
{
    check_prefix(k, system.dim())?;
    if points.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: points.len() });
    }
    let (denominator, tol) = phi_banded(&Prefix { system, k }, points, rel_tol)?;
    let singular = match T::BACKEND {
        Backend::Exact => denominator.is_zero(),
        Backend::Float => denominator.to_f64().abs() <= tol,
    };
    if singular {
        return Err(Error::SingularDenominator {
            value: format!("{denominator:?}"),
            points: points.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join(", "),
        });
    }
    let (numerator, _) = phi_banded(&Bordered { system, k: k - 1, extra: f }, points, rel_tol)?;
    let value = numerator.clone() / denominator.clone();
    Ok(DividedDifference { value, numerator, denominator, order: k - 1, points: points.to_vec() })
}

/// `[x_1, ..., x_k; f]_{ω⟨k⟩} = Φ_{(ω⟨k-1⟩, f)} / Φ_{ω⟨k⟩}` on a pairwise
/// distinct tuple, using the default float singularity band.
pub fn omega_divdiff<T, S, F>(system: &S, k: usize, f: &F, points: &PointTuple<T>) -> Result<DividedDifference<T>>
where
    T: Field,
    S: FunctionSystem<T>,
    F: ScalarFunction<T>,
{
    omega_divdiff_with_tol(system, k, f, points, DEFAULT_REL_TOL)
}

pub fn omega_divdiff_with_tol<T, S, F>(
    system: &S,
    k: usize,
    f: &F,
    points: &PointTuple<T>,
    rel_tol: f64,
) -> Result<DividedDifference<T>>
where
    T: Field,
    S: FunctionSystem<T>,
    F: ScalarFunction<T>,
{
    points.require_distinct()?;
    divided_difference(system, k, f, points, rel_tol)
}

/// Newton's recursion on the sorted points.
pub(crate) fn classical_raw<T: Field, F: ScalarFunction<T>>(f: &F, points: &[T]) -> Result<T> {
    let mut xs = points.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("unordered point"));
    let mut table: Vec<T> = xs.iter().map(|x| f.eval(x)).collect::<Result<_>>()?;
    let m = xs.len();
    for level in 1..m {
        for i in 0..m - level {
            table[i] = (table[i + 1].clone() - table[i].clone()) / (xs[i + level].clone() - xs[i].clone());
        }
    }
    table
        .into_iter()
        .next()
        .ok_or(Error::DimensionMismatch { expected: 1, got: 0 })
}

/// `[x_1, ..., x_m; f]` by the recursion
/// `([x_2..x_m; f] - [x_1..x_{m-1}; f]) / (x_m - x_1)`.
pub fn classical_divdiff<T: Field, F: ScalarFunction<T>>(f: &F, points: &PointTuple<T>) -> Result<T> {
    points.require_distinct()?;
    classical_raw(f, points)
}

/// `P_ell(x_1, ..., x_k)`: the sum of all monomials of total degree `ell`.
pub fn complete_homogeneous<T: Field>(ell: usize, points: &[T]) -> T {
    if points.is_empty() {
        return if ell == 0 { T::one() } else { T::zero() };
    }
    // h[j] holds P_j of the variables consumed so far
    let mut h: Vec<T> = (0..=ell).map(|j| points[0].powi(j as u32)).collect();
    for x in &points[1..] {
        for j in 1..=ell {
            h[j] = h[j].clone() + x.clone() * h[j - 1].clone();
        }
    }
    h.pop().expect("ell + 1 entries")
}

/// Compares `[x_1..x_k; p_n]` against `P_{n-k+1}(x_1..x_k)`.
pub fn lemma3_check<T: Field>(n: u32, points: &PointTuple<T>) -> Result<ResidualReport<T>> {
    let k = points.len();
    if k == 0 || k > n as usize + 1 {
        return Err(Error::DimensionMismatch { expected: n as usize + 1, got: k });
    }
    let lhs = classical_divdiff(&FunctionSpec::power(n), points)?;
    let rhs = complete_homogeneous(n as usize + 1 - k, points);
    Ok(ResidualReport::new(lhs, rhs))
}

/// `[x_1, ..., x_k, x; p_j] = sum_{a=0}^{j-k} P_{j-k-a}(x_1..x_k) x^a`.
pub fn induced_divdiff_expansion<T: Field>(base: &[T], j: usize, x: &T) -> Result<T> {
    let k = base.len();
    if k > j {
        return Err(Error::DimensionMismatch { expected: j, got: k });
    }
    let top = j - k;
    let mut acc = T::zero();
    let mut xa = T::one();
    for a in 0..=top {
        acc = acc + complete_homogeneous(top - a, base) * xa.clone();
        xa = xa * x.clone();
    }
    Ok(acc)
}
