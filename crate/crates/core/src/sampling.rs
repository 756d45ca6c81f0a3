//! Deterministic enumeration of strictly increasing tuples drawn from a
//! finite grid, shared by every grid-relative check.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{classify, Field, SignClass};
use crate::system::FunctionSystem;
use crate::tuple::DEFAULT_MIN_GAP;

pub const DEFAULT_TUPLE_BUDGET: usize = 200_000;
pub const DEFAULT_BASE_BUDGET: usize = 10_000;
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Knobs shared by all grid checks. Every verdict echoes the seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub seed: u64,
    /// Tuples enumerated exhaustively before switching to seeded sampling.
    pub budget: usize,
    /// Base tuples for the induced/interval convexity modes.
    pub base_budget: usize,
    /// Relative half-width of the float tolerance band.
    pub rel_tol: f64,
    pub min_gap: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            budget: DEFAULT_TUPLE_BUDGET,
            base_budget: DEFAULT_BASE_BUDGET,
            rel_tol: DEFAULT_REL_TOL,
            min_gap: DEFAULT_MIN_GAP,
        }
    }
}

impl CheckConfig {
    pub fn with_seed(seed: u64) -> Self {
        CheckConfig { seed, ..Self::default() }
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Index tuples `i_1 < ... < i_k` into a grid of size `n`: every tuple in
/// lexicographic order when `C(n, k) <= budget`, otherwise `budget` seeded
/// uniform draws, sorted and deduplicated. Returns `(tuples, exhaustive)`.
pub fn index_tuples(n: usize, k: usize, budget: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    let total = binomial(n, k);
    if total == 0 {
        return (Vec::new(), true);
    }
    if total <= budget as u128 {
        let mut out = Vec::with_capacity(total as usize);
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            // advance to the next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return (out, true);
                }
                i -= 1;
                if idx[i] < n - k + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<usize>> = (0..budget)
        .map(|_| {
            let mut v = index::sample(&mut rng, n, k).into_vec();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort();
    out.dedup();
    (out, false)
}

/// Sorts, deduplicates and validates a grid against a system's domain and
/// the float minimum gap.
pub fn prepare_grid<T: Field, S: FunctionSystem<T>>(system: &S, grid: &[T], cfg: &CheckConfig) -> Result<Vec<T>> {
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).expect("grid contains NaN"));
    g.dedup();
    if let Some(x) = g.iter().find(|x| !system.contains(x)) {
        return Err(Error::EvaluationOutsideSupport {
            point: format!("{x:?}"),
            detail: "grid point outside the system domain".into(),
        });
    }
    if T::BACKEND == crate::scalar::Backend::Float {
        for (i, w) in g.windows(2).enumerate() {
            if w[1].to_f64() - w[0].to_f64() < cfg.min_gap {
                return Err(Error::GapViolation(i, i + 1, cfg.min_gap));
            }
        }
    }
    Ok(g)
}

/// Lexicographically first witness per sign class.
#[derive(Debug, Clone)]
pub(crate) struct Scan<T> {
    pub checked: usize,
    pub exhaustive: bool,
    pub zero: Option<(Vec<T>, T)>,
    pub negative: Option<(Vec<T>, T)>,
    pub band_negative: Option<(Vec<T>, T)>,
    pub band_positive: Option<(Vec<T>, T)>,
}

/// Evaluates `value` on the sampled `k`-tuples of a sorted grid. The
/// callback returns the value and the tolerance band half-width for it.
pub(crate) fn scan<T: Field>(
    grid: &[T],
    k: usize,
    cfg: &CheckConfig,
    mut value: impl FnMut(&[T]) -> Result<(T, f64)>,
) -> Result<Scan<T>> {
    let (tuples, exhaustive) = index_tuples(grid.len(), k, cfg.budget, cfg.seed);
    let mut out = Scan {
        checked: 0,
        exhaustive,
        zero: None,
        negative: None,
        band_negative: None,
        band_positive: None,
    };
    let mut pts: Vec<T> = Vec::with_capacity(k);
    for idx in &tuples {
        pts.clear();
        pts.extend(idx.iter().map(|&i| grid[i].clone()));
        let (v, tol) = value(&pts)?;
        out.checked += 1;
        let slot = match classify(&v, tol) {
            SignClass::Positive => continue,
            SignClass::Zero => &mut out.zero,
            SignClass::Negative => &mut out.negative,
            SignClass::Band => {
                if v.signum_i8() < 0 {
                    &mut out.band_negative
                } else {
                    &mut out.band_positive
                }
            }
        };
        if slot.is_none() {
            *slot = Some((pts.clone(), v));
        }
    }
    Ok(out)
}
