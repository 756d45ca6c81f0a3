//! Serialization helpers and the generic two-sided residual report.

use serde::{Serialize, Serializer};

use crate::scalar::Field;

pub(crate) fn ser<T: Field, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    v.to_scalar().serialize(s)
}

pub(crate) fn ser_vec<T: Field, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Field::to_scalar))
}

/// `|lhs - rhs| / max(|lhs|, |rhs|)`, zero when both sides vanish.
pub fn relative_residual<T: Field>(lhs: &T, rhs: &T) -> f64 {
    let diff = (lhs.clone() - rhs.clone()).abs().to_f64();
    let scale = lhs.abs().to_f64().max(rhs.abs().to_f64());
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        diff / scale
    }
}

/// Both sides of an identity and their difference. Raw values are kept so
/// the relative error can be judged against the magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct ResidualReport<T: Field> {
    #[serde(serialize_with = "ser")]
    pub lhs: T,
    #[serde(serialize_with = "ser")]
    pub rhs: T,
    #[serde(serialize_with = "ser")]
    pub residual: T,
}

impl<T: Field> ResidualReport<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        let residual = (lhs.clone() - rhs.clone()).abs();
        ResidualReport { lhs, rhs, residual }
    }

    pub fn relative(&self) -> f64 {
        relative_residual(&self.lhs, &self.rhs)
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}
