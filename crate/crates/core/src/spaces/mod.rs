//! Concrete reproducing kernel spaces: Bergman, Hardy, Fock, Paley-Wiener
//! and weighted Besov-Sobolev spaces, with their kernels, reference
//! orthonormal bases, norms, and the hyperbolic geometry of the disk.

mod function;
pub mod geometry;
mod kernels;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use function::{Basis, FunctionRep, Sampler};
pub use geometry::{
    ball_bergman_distance, ball_mobius, bergman_distance, hyperbolic_ball_measure,
    hyperbolic_disk_geometry, kernel_norm_ratio, mobius,
};
pub(crate) use function::{horner, sinc_shift};
pub(crate) use kernels::bergman_normalized_disk;
pub use kernels::{
    basis_eval, basis_norm_factor, kernel_eval, normalized_kernel_eval, space_norm,
};

/// Radial weight `σ(z) = (1 - |z|^2)^t`, optionally scaled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialWeight {
    pub exponent: f64,
    pub scale: f64,
}

impl RadialWeight {
    pub fn power(exponent: f64) -> Self {
        Self {
            exponent,
            scale: 1.0,
        }
    }

    pub fn eval(&self, r2: f64) -> f64 {
        if self.exponent == 0.0 {
            self.scale
        } else {
            self.scale * (1.0 - r2).powf(self.exponent)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    /// Weighted Bergman space with weight `(1 - |z|^2)^t`, `t > -1`.
    Bergman { t: f64 },
    Hardy,
    /// Fock space with `φ(z) = alpha |z|^2`; the classical space has
    /// `alpha = π/2`.
    Fock { alpha: f64 },
    /// Functions with Fourier transform supported in `[-a, a]`.
    PaleyWiener { a: f64 },
    /// Derivative order `order` with radial weight on the disk.
    BesovSobolev { order: usize, weight: RadialWeight },
}

/// Immutable description of a function space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    kind: SpaceKind,
    dim: usize,
    p: f64,
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "ambient dimension must be >= 1"));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::param("p", format!("{p} < 1")));
        }
        match kind {
            SpaceKind::Bergman { t } if !(t > -1.0 && t.is_finite()) => {
                return Err(Error::param("t", format!("{t} <= -1")))
            }
            SpaceKind::Fock { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                return Err(Error::param("alpha", format!("{alpha} <= 0")))
            }
            SpaceKind::PaleyWiener { a } if !(a > 0.0 && a.is_finite()) => {
                return Err(Error::param("a", format!("{a} <= 0")))
            }
            SpaceKind::PaleyWiener { .. } if dim != 1 => {
                return Err(Error::param("dim", "Paley-Wiener spaces are one-dimensional"))
            }
            SpaceKind::BesovSobolev { weight, .. } if !(weight.scale > 0.0) => {
                return Err(Error::param("weight", "scale must be positive"))
            }
            _ => {}
        }
        Ok(Self { kind, dim, p })
    }

    /// Unweighted Bergman space `A^2` of the unit disk.
    pub fn bergman() -> Self {
        Self {
            kind: SpaceKind::Bergman { t: 0.0 },
            dim: 1,
            p: 2.0,
        }
    }

    pub fn hardy() -> Self {
        Self {
            kind: SpaceKind::Hardy,
            dim: 1,
            p: 2.0,
        }
    }

    /// Classical Bargmann-Fock space, `φ(z) = (π/2)|z|^2`.
    pub fn fock() -> Self {
        Self {
            kind: SpaceKind::Fock {
                alpha: std::f64::consts::FRAC_PI_2,
            },
            dim: 1,
            p: 2.0,
        }
    }

    pub fn paley_wiener(a: f64) -> Result<Self> {
        Self::new(SpaceKind::PaleyWiener { a }, 1, 2.0)
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.kind, self.dim, p)
    }

    pub fn with_dim(self, dim: usize) -> Result<Self> {
        Self::new(self.kind, dim, self.p)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SpaceKind::Bergman { .. } => "bergman",
            SpaceKind::Hardy => "hardy",
            SpaceKind::Fock { .. } => "fock",
            SpaceKind::PaleyWiener { .. } => "paley_wiener",
            SpaceKind::BesovSobolev { .. } => "besov_sobolev",
        }
    }

    pub(crate) fn require_dim1(&self, op: &str) -> Result<()> {
        if self.dim != 1 {
            return Err(Error::param(
                "dim",
                format!("{op} is implemented for n = 1 only"),
            ));
        }
        Ok(())
    }
}

/// Conjugate exponent `p' = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param("p", format!("need 1 < p < inf, got {p}")));
    }
    Ok(p / (p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_parameters() {
        assert!(SpaceSpec::new(SpaceKind::Bergman { t: -1.0 }, 1, 2.0).is_err());
        assert!(SpaceSpec::new(SpaceKind::Bergman { t: -0.5 }, 1, 2.0).is_ok());
        assert!(SpaceSpec::new(SpaceKind::Hardy, 1, 0.5).is_err());
        assert!(SpaceSpec::new(SpaceKind::Hardy, 0, 2.0).is_err());
        assert!(SpaceSpec::paley_wiener(0.0).is_err());
        assert!(SpaceSpec::new(SpaceKind::Fock { alpha: -1.0 }, 1, 2.0).is_err());
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert!((conjugate_exponent(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(conjugate_exponent(1.0).is_err());
    }
}
