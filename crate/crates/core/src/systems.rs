//! Builtin Chebyshev systems: polynomials, the two trigonometric families
//! and `(1, x^2)`, with grid-verified prefix positivity.

use std::f64::consts::PI;

use serde::Serialize;

use crate::determinant::is_positive_chebyshev;
use crate::domain::{Domain, Interval};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::sampling::CheckConfig;
use crate::scalar::{Rational, Scalar};
use crate::system::{ChebyshevSystem, ClaimedSign};

pub const CATALOG_IDS: [&str; 4] = ["poly", "trig-odd", "trig-even", "one-xsq"];

/// Points in the default positivity grid.
pub const DEFAULT_GRID_POINTS: usize = 12;

/// `(1, x, ..., x^(n-1))` on the real line.
pub fn polynomial_system(n: usize) -> Result<ChebyshevSystem> {
    if n == 0 {
        return Err(Error::InvalidInput("the polynomial system needs n >= 1".into()));
    }
    let basis = (0..n as u32).map(FunctionSpec::power).collect();
    Ok(ChebyshevSystem::new(basis, Domain::real_line())?.with_claimed_sign(ClaimedSign::Positive))
}

fn trig_basis(n: usize, with_one: bool) -> Vec<FunctionSpec> {
    let mut basis = Vec::with_capacity(2 * n + 1);
    if with_one {
        basis.push(FunctionSpec::power(0));
    }
    for j in 1..=n as i32 {
        basis.push(FunctionSpec::Cos { freq: j });
        basis.push(FunctionSpec::Sin { freq: j });
    }
    basis
}

fn check_length(interval: &Interval, max: f64) -> Result<()> {
    let length = interval.length();
    if length.is_nan() || length > max {
        return Err(Error::DomainTooLong { length, max });
    }
    Ok(())
}

/// `(1, cos x, sin x, ..., cos nx, sin nx)` on an interval of length at
/// most `2π`.
pub fn trig_odd_system(n: usize, interval: Interval) -> Result<ChebyshevSystem> {
    check_length(&interval, 2.0 * PI)?;
    Ok(ChebyshevSystem::new(trig_basis(n, true), Domain::interval(interval))?.with_claimed_sign(ClaimedSign::Positive))
}

/// `(cos x, sin x, ..., cos nx, sin nx)` on an interval of length at most
/// `π`.
pub fn trig_even_system(n: usize, interval: Interval) -> Result<ChebyshevSystem> {
    if n == 0 {
        return Err(Error::InvalidInput("the even trigonometric system needs n >= 1".into()));
    }
    check_length(&interval, PI)?;
    Ok(ChebyshevSystem::new(trig_basis(n, false), Domain::interval(interval))?.with_claimed_sign(ClaimedSign::Positive))
}

/// `(1, x^2)` on `(0, ∞)`.
pub fn one_xsq_system() -> ChebyshevSystem {
    ChebyshevSystem::new(vec![FunctionSpec::power(0), FunctionSpec::power(2)], Domain::interval(Interval::above(0)))
        .expect("static system")
        .with_claimed_sign(ClaimedSign::Positive)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemCatalogEntry {
    pub id: String,
    /// Constructor parameter: the dimension for `poly`, the highest
    /// frequency for the trigonometric systems, unused for `one-xsq`.
    pub n: usize,
    pub valid_domain: Domain,
    /// Largest `k` such that `ω⟨1⟩, ..., ω⟨k⟩` all pass the positivity
    /// check on the default grid of the system's domain.
    pub prefix_positive_upto: usize,
    pub domain_overridden: bool,
    pub system: ChebyshevSystem,
}

/// Twelve interior points of an interval (clipped to a window for
/// unbounded sides), or the points of a finite domain.
pub fn default_grid(domain: &Domain) -> Vec<f64> {
    let m = DEFAULT_GRID_POINTS;
    let iv = match domain {
        Domain::FiniteSet { points } => {
            let mut v: Vec<f64> = points.iter().map(Scalar::to_f64).collect();
            v.sort_by(f64::total_cmp);
            return v;
        }
        Domain::Interval(iv) | Domain::Punctured { base: iv, .. } => iv,
    };
    let (lo, hi) = (iv.lo_f64(), iv.hi_f64());
    let pts: Vec<f64> = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (1..=m).map(|i| lo + (hi - lo) * i as f64 / (m + 1) as f64).collect(),
        (true, false) => (1..=m).map(|i| lo + i as f64).collect(),
        (false, true) => (1..=m).rev().map(|i| hi - i as f64).collect(),
        // symmetric about zero
        (false, false) => (0..m).map(|i| i as f64 - (m as f64 - 1.0) / 2.0).collect(),
    };
    pts.into_iter().filter(|x| domain.contains(x)).collect()
}

/// Largest `k` such that every prefix up to `k` is positive on the default
/// grid. Rational systems are checked exactly.
pub fn verified_prefix_positivity(system: &ChebyshevSystem) -> Result<usize> {
    let grid = default_grid(&system.domain);
    let cfg = CheckConfig::default();
    let exact = system.is_rational();
    let mut upto = 0;
    for k in 1..=system.dimension() {
        if grid.len() < k {
            break;
        }
        let positive = if exact {
            let g: Vec<Rational> = grid.iter().map(|x| Scalar::Float(*x).to_exact()).collect::<Result<_>>()?;
            is_positive_chebyshev(system, k, &g, &cfg)?.verdict.is_positive()
        } else {
            is_positive_chebyshev(system, k, &grid, &cfg)?.verdict.is_positive()
        };
        if !positive {
            break;
        }
        upto = k;
    }
    Ok(upto)
}

/// Builds a catalog system. A domain outside the valid domain is accepted
/// only with `allow_unsafe`; the prefix count is then re-verified on the
/// override.
pub fn catalog_entry(id: &str, n: Option<usize>, domain: Option<Domain>, allow_unsafe: bool) -> Result<SystemCatalogEntry> {
    let interval_of = |d: &Option<Domain>, default: Interval| -> Result<Interval> {
        match d {
            None => Ok(default),
            Some(Domain::Interval(iv)) => Ok(iv.clone()),
            Some(other) => Err(Error::InvalidInput(format!("{id} needs an interval domain, got {other:?}"))),
        }
    };
    // the trigonometric constructors take the domain themselves
    let mut pending = domain;
    let (n, system) = match id {
        "poly" => {
            let n = n.unwrap_or(3);
            (n, polynomial_system(n)?)
        }
        "trig-odd" | "trig-even" => {
            let n = n.unwrap_or(1);
            let odd = id == "trig-odd";
            let default = if odd { Interval::open(-PI, 0.0) } else { Interval::open(-PI / 2.0, PI / 2.0) };
            let iv = interval_of(&pending.take(), default)?;
            let built = if odd { trig_odd_system(n, iv.clone()) } else { trig_even_system(n, iv.clone()) };
            match built {
                Ok(s) => (n, s),
                Err(Error::DomainTooLong { .. }) if allow_unsafe => {
                    let s = ChebyshevSystem::new(trig_basis(n, odd), Domain::interval(iv))?;
                    let entry_domain = s.domain.clone();
                    let upto = verified_prefix_positivity(&s)?;
                    return Ok(SystemCatalogEntry {
                        id: id.into(),
                        n,
                        valid_domain: entry_domain,
                        prefix_positive_upto: upto,
                        domain_overridden: true,
                        system: s,
                    });
                }
                Err(e) => return Err(e),
            }
        }
        "one-xsq" => (2, one_xsq_system()),
        other => return Err(Error::InvalidInput(format!("unknown system id {other:?}; expected one of {CATALOG_IDS:?}"))),
    };
    let valid_domain = system.domain.clone();
    let (system, overridden) = match pending {
        Some(d) => {
            d.validate()?;
            let inside = d.is_subset_of(&valid_domain);
            if !inside && !allow_unsafe {
                return Err(Error::UnsafeDomain);
            }
            (ChebyshevSystem { domain: d, ..system }, !inside)
        }
        None => (system, false),
    };
    let prefix_positive_upto = verified_prefix_positivity(&system)?;
    Ok(SystemCatalogEntry { id: id.into(), n, valid_domain, prefix_positive_upto, domain_overridden: overridden, system })
}
