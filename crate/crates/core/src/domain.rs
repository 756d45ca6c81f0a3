use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// An interval with optional (infinite) ends. Ends are open unless flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(default)]
    pub lo: Option<Scalar>,
    #[serde(default)]
    pub hi: Option<Scalar>,
    #[serde(default)]
    pub lo_closed: bool,
    #[serde(default)]
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: impl Into<Scalar>, hi: impl Into<Scalar>) -> Self {
        Interval { lo: Some(lo.into()), hi: Some(hi.into()), lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: impl Into<Scalar>, hi: impl Into<Scalar>) -> Self {
        Interval { lo: Some(lo.into()), hi: Some(hi.into()), lo_closed: true, hi_closed: true }
    }

    pub fn real_line() -> Self {
        Interval { lo: None, hi: None, lo_closed: false, hi_closed: false }
    }

    /// `]lo, +inf[`
    pub fn above(lo: impl Into<Scalar>) -> Self {
        Interval { lo: Some(lo.into()), hi: None, lo_closed: false, hi_closed: false }
    }

    pub fn contains<T: Field>(&self, x: &T) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) => match T::from_literal(lo) {
                Ok(lo) => {
                    if self.lo_closed {
                        *x >= lo
                    } else {
                        *x > lo
                    }
                }
                Err(_) => false,
            },
        };
        let below = match &self.hi {
            None => true,
            Some(hi) => match T::from_literal(hi) {
                Ok(hi) => {
                    if self.hi_closed {
                        *x <= hi
                    } else {
                        *x < hi
                    }
                }
                Err(_) => false,
            },
        };
        above && below
    }

    /// Length in f64, infinite when unbounded.
    pub fn length(&self) -> f64 {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => hi.to_f64() - lo.to_f64(),
            _ => f64::INFINITY,
        }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.as_ref().map_or(f64::NEG_INFINITY, Scalar::to_f64)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.as_ref().map_or(f64::INFINITY, Scalar::to_f64)
    }

    fn covers(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => {
                let (a, b) = (a.to_f64(), b.to_f64());
                a < b || (a == b && (self.lo_closed || !other.lo_closed))
            }
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => {
                let (a, b) = (a.to_f64(), b.to_f64());
                a > b || (a == b && (self.hi_closed || !other.hi_closed))
            }
        };
        lo_ok && hi_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Interval(Interval),
    FiniteSet { points: Vec<Scalar> },
    Punctured { base: Interval, excluded: Vec<Scalar> },
}

impl Domain {
    pub fn interval(iv: Interval) -> Self {
        Domain::Interval(iv)
    }

    pub fn real_line() -> Self {
        Domain::Interval(Interval::real_line())
    }

    /// A punctured interval; every excluded point must lie in `base`.
    pub fn punctured(base: Interval, excluded: Vec<Scalar>) -> Result<Self> {
        let d = Domain::Punctured { base, excluded };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Interval(_) => Ok(()),
            Domain::FiniteSet { points } => {
                for (i, p) in points.iter().enumerate() {
                    if points[..i].contains(p) {
                        return Err(Error::InvalidInput(format!("finite set repeats {p}")));
                    }
                }
                Ok(())
            }
            Domain::Punctured { base, excluded } => {
                for p in excluded {
                    if !base.contains(&p.to_f64()) {
                        return Err(Error::InvalidInput(format!("excluded point {p} lies outside the base interval")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn contains<T: Field>(&self, x: &T) -> bool {
        match self {
            Domain::Interval(iv) => iv.contains(x),
            Domain::FiniteSet { points } => points.iter().any(|p| T::from_literal(p).is_ok_and(|p| p == *x)),
            Domain::Punctured { base, excluded } => {
                base.contains(x) && !excluded.iter().any(|p| T::from_literal(p).is_ok_and(|p| p == *x))
            }
        }
    }

    /// The enclosing interval, if any.
    pub fn hull(&self) -> Option<&Interval> {
        match self {
            Domain::Interval(iv) | Domain::Punctured { base: iv, .. } => Some(iv),
            Domain::FiniteSet { .. } => None,
        }
    }

    /// Conservative subset test used to decide whether a domain override
    /// stays inside a catalog system's valid domain.
    pub fn is_subset_of(&self, other: &Domain) -> bool {
        match (self, other) {
            (Domain::FiniteSet { points }, _) => points.iter().all(|p| other.contains(&p.to_f64())),
            (Domain::Interval(a) | Domain::Punctured { base: a, .. }, Domain::Interval(b)) => b.covers(a),
            _ => false,
        }
    }
}
