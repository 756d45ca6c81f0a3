//! Scalar functions: closed-form builtins and sampled tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar, Transcendental};

/// Anything that can be evaluated pointwise in a given backend.
pub trait ScalarFunction<T: Field> {
    fn eval(&self, x: &T) -> Result<T>;
}

impl<T: Field, F: ScalarFunction<T> + ?Sized> ScalarFunction<T> for &F {
    fn eval(&self, x: &T) -> Result<T> {
        (**self).eval(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: Scalar,
    pub spec: FunctionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `x^k`
    Power { k: u32 },
    /// `cos(freq * x)`
    Cos { freq: i32 },
    /// `sin(freq * x)`
    Sin { freq: i32 },
    Exp,
    Const { c: Scalar },
    Affine { terms: Vec<Term> },
    /// `-cot((x1 + x) / 2)`, the second basis function of the system
    /// induced by `(1, cos, sin)` at a single base point `x1`.
    NegCotHalf { x1: Scalar },
    Sampled { points: Vec<Scalar>, values: Vec<Scalar> },
}

impl FunctionSpec {
    pub fn power(k: u32) -> Self {
        FunctionSpec::Power { k }
    }

    pub fn constant(c: impl Into<Scalar>) -> Self {
        FunctionSpec::Const { c: c.into() }
    }

    /// `sum coef_i * spec_i`
    pub fn affine(terms: impl IntoIterator<Item = (Scalar, FunctionSpec)>) -> Self {
        FunctionSpec::Affine { terms: terms.into_iter().map(|(coef, spec)| Term { coef, spec }).collect() }
    }

    pub fn scaled(self, coef: impl Into<Scalar>) -> Self {
        FunctionSpec::affine([(coef.into(), self)])
    }

    pub fn negated(self) -> Self {
        self.scaled(Scalar::int(-1))
    }

    /// `self + other`
    pub fn plus(self, other: FunctionSpec) -> Self {
        FunctionSpec::affine([(Scalar::int(1), self), (Scalar::int(1), other)])
    }

    /// `self - other`
    pub fn minus(self, other: FunctionSpec) -> Self {
        FunctionSpec::affine([(Scalar::int(1), self), (Scalar::int(-1), other)])
    }

    pub fn sampled(points: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self> {
        let spec = FunctionSpec::Sampled { points, values };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks table invariants recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Sampled { points, values } => {
                if points.len() != values.len() {
                    return Err(Error::InvalidInput(format!(
                        "sampled table has {} points but {} values",
                        points.len(),
                        values.len()
                    )));
                }
                for i in 0..points.len() {
                    for j in i + 1..points.len() {
                        if points[i] == points[j] || points[i].to_f64() == points[j].to_f64() {
                            return Err(Error::OrderingViolation(i, j));
                        }
                    }
                }
                Ok(())
            }
            FunctionSpec::Affine { terms } => terms.iter().try_for_each(|t| t.spec.validate()),
            _ => Ok(()),
        }
    }

    /// Table points on which a sampled spec (or an affine combination
    /// containing sampled specs) can be evaluated. `None` means the spec
    /// evaluates everywhere.
    pub fn support(&self) -> Option<Vec<Scalar>> {
        match self {
            FunctionSpec::Sampled { points, .. } => Some(points.clone()),
            FunctionSpec::Affine { terms } => {
                let mut acc: Option<Vec<Scalar>> = None;
                for t in terms {
                    if let Some(s) = t.spec.support() {
                        acc = Some(match acc {
                            None => s,
                            Some(prev) => prev.into_iter().filter(|p| s.contains(p)).collect(),
                        });
                    }
                }
                acc
            }
            _ => None,
        }
    }

    /// True when every component evaluates exactly on rationals.
    pub fn is_rational(&self) -> bool {
        match self {
            FunctionSpec::Power { .. } | FunctionSpec::Const { .. } | FunctionSpec::Sampled { .. } => true,
            FunctionSpec::Affine { terms } => terms.iter().all(|t| t.spec.is_rational()),
            _ => false,
        }
    }

    pub fn evaluate<T: Field>(&self, x: &T) -> Result<T> {
        match self {
            FunctionSpec::Power { k } => Ok(x.powi(*k)),
            FunctionSpec::Cos { freq } => (T::from_i64(*freq as i64) * x.clone()).apply(Transcendental::Cos),
            FunctionSpec::Sin { freq } => (T::from_i64(*freq as i64) * x.clone()).apply(Transcendental::Sin),
            FunctionSpec::Exp => x.apply(Transcendental::Exp),
            FunctionSpec::Const { c } => T::from_literal(c),
            FunctionSpec::Affine { terms } => {
                let mut acc = T::zero();
                for t in terms {
                    acc = acc + T::from_literal(&t.coef)? * t.spec.evaluate(x)?;
                }
                Ok(acc)
            }
            FunctionSpec::NegCotHalf { x1 } => {
                let half = (T::from_literal(x1)? + x.clone()) / T::from_i64(2);
                half.apply(Transcendental::NegCot)
            }
            FunctionSpec::Sampled { points, values } => {
                for (p, v) in points.iter().zip(values) {
                    if T::from_literal(p)? == *x {
                        return T::from_literal(v);
                    }
                }
                Err(Error::EvaluationOutsideSupport {
                    point: format!("{:?}", x),
                    detail: "sampled function has no table entry here".into(),
                })
            }
        }
    }
}

impl<T: Field> ScalarFunction<T> for FunctionSpec {
    fn eval(&self, x: &T) -> Result<T> {
        self.evaluate(x)
    }
}

/// Pointwise evaluation of a function spec.
pub fn evaluate<T: Field>(f: &FunctionSpec, x: &T) -> Result<T> {
    f.evaluate(x)
}

/// Adapts a closure to [`ScalarFunction`].
pub struct FnFunction<F>(pub F);

impl<T: Field, F: Fn(&T) -> Result<T>> ScalarFunction<T> for FnFunction<F> {
    fn eval(&self, x: &T) -> Result<T> {
        (self.0)(x)
    }
}
