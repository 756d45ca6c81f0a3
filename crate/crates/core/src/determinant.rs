//! Determinants, the collocation determinant `Φ_ω`, Chebyshev positivity
//! on grids, and Sylvester's identity for bordered minors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{prepare_grid, scan, CheckConfig};
use crate::scalar::{Field, Rational, Scalar};
use crate::system::{check_prefix, FunctionSystem, Prefix};

/// Row-major dense matrix over one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries do not form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn try_from_fn<E>(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Result<T, E>) -> Result<Self, E> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Rows and columns are 0-based index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Field> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Product of the Euclidean row norms, an upper bound on `|det|`.
    pub fn hadamard_bound(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
            })
            .product()
    }
}

/// Determinant; exact matrices use fraction-free elimination.
pub fn det<T: Field>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquareMatrix { rows: m.rows, cols: m.cols });
    }
    Ok(T::determinant(m))
}

/// Bareiss elimination after clearing each row's denominators, so every
/// intermediate value is an integer minor of the scaled matrix.
pub(crate) fn bareiss_det(m: &Matrix<Rational>) -> Rational {
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = &m.data[i * n..(i + 1) * n];
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
            scale *= l;
            ints
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return <Rational as Zero>::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let last = a[n - 1][n - 1].clone();
    Rational::new(if negate { -last } else { last }, scale)
}

/// Gaussian elimination with partial (row) pivoting.
pub(crate) fn pivoted_det(m: &Matrix<f64>) -> f64 {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut acc = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .expect("non-empty pivot range");
        if a[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            acc = -acc;
        }
        let pivot = a[k * n + k];
        acc *= pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            if factor != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
    }
    acc
}

/// The `k x k` matrix with entry `(i, j) = ω_i(x_j)`.
pub fn collocation_matrix<T: Field, S: FunctionSystem<T>>(system: &S, points: &[T]) -> Result<Matrix<T>> {
    let k = points.len();
    if k != system.dim() {
        return Err(Error::DimensionMismatch { expected: system.dim(), got: k });
    }
    for x in points {
        if !system.contains(x) {
            return Err(Error::EvaluationOutsideSupport {
                point: format!("{x:?}"),
                detail: "point outside the system domain".into(),
            });
        }
    }
    Matrix::try_from_fn(k, k, |i, j| system.eval_basis(i, &points[j]))
}

/// `Φ_S(points)` for a system whose dimension equals `points.len()`,
/// together with the tolerance band `rel_tol * hadamard_bound`.
pub fn phi_banded<T: Field, S: FunctionSystem<T>>(system: &S, points: &[T], rel_tol: f64) -> Result<(T, f64)> {
    let m = collocation_matrix(system, points)?;
    let tol = rel_tol * m.hadamard_bound();
    Ok((T::determinant(&m), tol))
}

/// `Φ_{ω⟨k⟩}(x_1, ..., x_k)`.
pub fn phi<T: Field, S: FunctionSystem<T>>(system: &S, k: usize, points: &[T]) -> Result<T> {
    check_prefix(k, system.dim())?;
    if points.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: points.len() });
    }
    let m = collocation_matrix(&Prefix { system, k }, points)?;
    Ok(T::determinant(&m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    PositiveOnGrid,
    Violated { witness: Vec<Scalar>, value: Scalar },
    Indeterminate { witness: Vec<Scalar>, value: Scalar },
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::PositiveOnGrid)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn witness(&self) -> Option<&[Scalar]> {
        match self {
            Verdict::Violated { witness, .. } | Verdict::Indeterminate { witness, .. } => Some(witness),
            Verdict::PositiveOnGrid => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub k: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub tuples_checked: usize,
    pub exhaustive: bool,
    pub seed: u64,
}

fn witness_of<T: Field>(w: &(Vec<T>, T)) -> (Vec<Scalar>, Scalar) {
    (w.0.iter().map(Field::to_scalar).collect(), w.1.to_scalar())
}

/// Checks `Φ_{ω⟨k⟩} > 0` on strictly increasing `k`-tuples of the grid.
///
/// A vanishing determinant is reported ahead of a negative one because it
/// rules out a Chebyshev system of either sign; within a class the
/// lexicographically smallest tuple is the witness.
pub fn is_positive_chebyshev<T: Field, S: FunctionSystem<T>>(
    system: &S,
    k: usize,
    grid: &[T],
    cfg: &CheckConfig,
) -> Result<ChebyshevReport> {
    check_prefix(k, system.dim())?;
    let prefix = Prefix { system, k };
    let grid = prepare_grid(&prefix, grid, cfg)?;
    if grid.len() < k {
        return Err(Error::InsufficientGrid { need: k, got: grid.len() });
    }
    let s = scan(&grid, k, cfg, |pts| phi_banded(&prefix, pts, cfg.rel_tol))?;
    let verdict = if let Some(w) = s.zero.as_ref().or(s.negative.as_ref()) {
        let (witness, value) = witness_of(w);
        Verdict::Violated { witness, value }
    } else if let Some(w) = s.band_negative.as_ref().or(s.band_positive.as_ref()) {
        let (witness, value) = witness_of(w);
        Verdict::Indeterminate { witness, value }
    } else {
        Verdict::PositiveOnGrid
    };
    Ok(ChebyshevReport { k, verdict, tuples_checked: s.checked, exhaustive: s.exhaustive, seed: cfg.seed })
}

/// `det A|_{{1..k, i} x {1..k, j}}` with 1-based `k < i, j <= n`.
pub fn sylvester_minor<T: Field>(a: &Matrix<T>, k: usize, i: usize, j: usize) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(format!("k = {k} must satisfy 1 <= k <= {}", n - 1)));
    }
    if !(k < i && i <= n && k < j && j <= n) {
        return Err(Error::IndexOutOfRange(format!("(i, j) = ({i}, {j}) must lie in {}..={n}", k + 1)));
    }
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols = rows.clone();
    rows.push(i - 1);
    cols.push(j - 1);
    det(&a.submatrix(&rows, &cols))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct SylvesterReport<T: Field> {
    pub n: usize,
    pub k: usize,
    /// `det B_k`
    #[serde(serialize_with = "crate::report::ser")]
    pub lhs: T,
    /// `det(A_k)^(n-k-1) * det A`
    #[serde(serialize_with = "crate::report::ser")]
    pub rhs: T,
    #[serde(serialize_with = "crate::report::ser")]
    pub residual: T,
}

impl<T: Field> SylvesterReport<T> {
    pub fn relative_residual(&self) -> f64 {
        crate::report::relative_residual(&self.lhs, &self.rhs)
    }
}

/// Evaluates both sides of Sylvester's determinant identity. No division
/// is performed, so a singular leading block is handled like any other.
pub fn sylvester_check<T: Field>(a: &Matrix<T>, k: usize) -> Result<SylvesterReport<T>> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange(format!("k = {k} must satisfy 1 <= k <= {}", n.saturating_sub(1))));
    }
    let b = Matrix::try_from_fn(n - k, n - k, |r, c| sylvester_minor(a, k, k + 1 + r, k + 1 + c))?;
    let lhs = det(&b)?;
    let lead: Vec<usize> = (0..k).collect();
    let lead_det = det(&a.submatrix(&lead, &lead))?;
    let rhs = lead_det.powi((n - k - 1) as u32) * det(a)?;
    let residual = (lhs.clone() - rhs.clone()).abs();
    Ok(SylvesterReport { n, k, lhs, rhs, residual })
}
