//! Systems of basis functions and the adaptors used to form prefixes
//! `ω⟨k⟩` and bordered systems `(ω⟨k⟩, f)`.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::function::{FunctionSpec, ScalarFunction};
use crate::scalar::Field;

/// An ordered tuple of basis functions over a domain.
///
/// Indices are 0-based: `eval_basis(0, x)` is `ω_1(x)`.
pub trait FunctionSystem<T: Field> {
    fn dim(&self) -> usize;
    fn eval_basis(&self, index: usize, x: &T) -> Result<T>;
    fn contains(&self, x: &T) -> bool;
}

impl<T: Field, S: FunctionSystem<T> + ?Sized> FunctionSystem<T> for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        (**self).eval_basis(index, x)
    }
    fn contains(&self, x: &T) -> bool {
        (**self).contains(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimedSign {
    Positive,
    #[default]
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSystem {
    pub basis: Vec<FunctionSpec>,
    pub domain: Domain,
    #[serde(default)]
    pub claimed_sign: ClaimedSign,
}

impl ChebyshevSystem {
    pub fn new(basis: Vec<FunctionSpec>, domain: Domain) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidInput("a system needs at least one basis function".into()));
        }
        for f in &basis {
            f.validate()?;
        }
        domain.validate()?;
        Ok(ChebyshevSystem { basis, domain, claimed_sign: ClaimedSign::Unverified })
    }

    pub fn with_claimed_sign(mut self, sign: ClaimedSign) -> Self {
        self.claimed_sign = sign;
        self
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `ω⟨k⟩` as an owned system.
    pub fn prefix(&self, k: usize) -> Result<ChebyshevSystem> {
        check_prefix(k, self.basis.len())?;
        Ok(ChebyshevSystem {
            basis: self.basis[..k].to_vec(),
            domain: self.domain.clone(),
            claimed_sign: self.claimed_sign,
        })
    }

    /// `(ω_1, ..., ω_n, f)`
    pub fn extended(&self, f: FunctionSpec) -> ChebyshevSystem {
        let mut basis = self.basis.clone();
        basis.push(f);
        ChebyshevSystem { basis, domain: self.domain.clone(), claimed_sign: ClaimedSign::Unverified }
    }

    pub fn is_rational(&self) -> bool {
        self.basis.iter().all(FunctionSpec::is_rational)
    }
}

impl<T: Field> FunctionSystem<T> for ChebyshevSystem {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        self.basis
            .get(index)
            .ok_or_else(|| Error::IndexOutOfRange(format!("basis index {index} of {}", self.basis.len())))?
            .evaluate(x)
    }

    fn contains(&self, x: &T) -> bool {
        self.domain.contains(x)
    }
}

pub(crate) fn check_prefix(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::DimensionMismatch { expected: n, got: k });
    }
    Ok(())
}

/// The first `k` functions of a system.
#[derive(Debug, Clone, Copy)]
pub struct Prefix<S> {
    pub system: S,
    pub k: usize,
}

impl<T: Field, S: FunctionSystem<T>> FunctionSystem<T> for Prefix<S> {
    fn dim(&self) -> usize {
        self.k
    }
    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        if index >= self.k {
            return Err(Error::IndexOutOfRange(format!("basis index {index} of prefix {}", self.k)));
        }
        self.system.eval_basis(index, x)
    }
    fn contains(&self, x: &T) -> bool {
        self.system.contains(x)
    }
}

/// `(ω_1, ..., ω_k, f)`; `k` may be zero, giving the 1-dimensional `(f)`.
#[derive(Debug, Clone, Copy)]
pub struct Bordered<S, F> {
    pub system: S,
    pub k: usize,
    pub extra: F,
}

impl<T: Field, S: FunctionSystem<T>, F: ScalarFunction<T>> FunctionSystem<T> for Bordered<S, F> {
    fn dim(&self) -> usize {
        self.k + 1
    }
    fn eval_basis(&self, index: usize, x: &T) -> Result<T> {
        if index < self.k {
            self.system.eval_basis(index, x)
        } else if index == self.k {
            self.extra.eval(x)
        } else {
            Err(Error::IndexOutOfRange(format!("basis index {index} of bordered system {}", self.k + 1)))
        }
    }
    fn contains(&self, x: &T) -> bool {
        self.system.contains(x)
    }
}

/// A single basis function `ω_{index+1}` viewed as a scalar function.
#[derive(Debug, Clone, Copy)]
pub struct BasisFunction<S> {
    pub system: S,
    pub index: usize,
}

impl<T: Field, S: FunctionSystem<T>> ScalarFunction<T> for BasisFunction<S> {
    fn eval(&self, x: &T) -> Result<T> {
        self.system.eval_basis(self.index, x)
    }
}
