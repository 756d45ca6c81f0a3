use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Field, Scalar};

/// Minimum spacing enforced between float-backend points by default.
pub const DEFAULT_MIN_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingClass {
    /// `x_1 < ... < x_n`
    StrictlyIncreasing,
    /// `x_i != x_j` for `i != j`
    PairwiseDistinct,
    Unconstrained,
}

/// A validated tuple of points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTuple<T> {
    points: Vec<T>,
    class: OrderingClass,
}

impl<T: Field> PointTuple<T> {
    /// Validates with the default float gap of [`DEFAULT_MIN_GAP`].
    pub fn new(points: Vec<T>, class: OrderingClass) -> Result<Self> {
        Self::with_min_gap(points, class, DEFAULT_MIN_GAP)
    }

    pub fn increasing(points: Vec<T>) -> Result<Self> {
        Self::new(points, OrderingClass::StrictlyIncreasing)
    }

    pub fn distinct(points: Vec<T>) -> Result<Self> {
        Self::new(points, OrderingClass::PairwiseDistinct)
    }

    /// The gap only applies to the float backend and only to ordered or
    /// distinct tuples.
    pub fn with_min_gap(points: Vec<T>, class: OrderingClass, min_gap: f64) -> Result<Self> {
        match class {
            OrderingClass::StrictlyIncreasing => {
                for (i, w) in points.windows(2).enumerate() {
                    if w[0] >= w[1] {
                        return Err(Error::OrderingViolation(i, i + 1));
                    }
                }
            }
            OrderingClass::PairwiseDistinct => {
                for i in 0..points.len() {
                    for j in i + 1..points.len() {
                        if points[i] == points[j] {
                            return Err(Error::OrderingViolation(i, j));
                        }
                    }
                }
            }
            OrderingClass::Unconstrained => return Ok(PointTuple { points, class }),
        }
        if T::BACKEND == Backend::Float && min_gap > 0.0 {
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if (points[i].to_f64() - points[j].to_f64()).abs() < min_gap {
                        return Err(Error::GapViolation(i, j, min_gap));
                    }
                }
            }
        }
        Ok(PointTuple { points, class })
    }

    pub fn class(&self) -> OrderingClass {
        self.class
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn into_points(self) -> Vec<T> {
        self.points
    }

    /// Re-validates an unconstrained tuple as pairwise distinct.
    pub fn require_distinct(&self) -> Result<()> {
        if self.class == OrderingClass::Unconstrained {
            PointTuple::with_min_gap(self.points.clone(), OrderingClass::PairwiseDistinct, 0.0)?;
        }
        Ok(())
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        self.points.iter().map(Field::to_scalar).collect()
    }
}

impl<T> Deref for PointTuple<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.points
    }
}

/// Validates raw points against an ordering class (default gap).
pub fn validate_tuple<T: Field>(points: Vec<T>, class: OrderingClass) -> Result<PointTuple<T>> {
    PointTuple::new(points, class)
}

pub fn literals_to<T: Field>(values: &[Scalar]) -> Result<Vec<T>> {
    values.iter().map(T::from_literal).collect()
}
