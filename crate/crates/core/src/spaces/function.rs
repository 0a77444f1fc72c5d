use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SpaceKind, SpaceSpec};
use crate::error::{Error, Result};
use crate::numerics::QuadratureGrid;

/// Evaluation map `z -> f(z)`.
pub type Sampler = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Reference basis in which coefficient vectors are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Basis {
    /// Plain Taylor coefficients `f(z) = Σ c_j z^j`.
    Monomial,
    /// `e_j(z) = sqrt(Γ(j+t+2) / (j! Γ(t+2))) z^j`; `sqrt(j+1) z^j` at `t = 0`.
    Bergman { t: f64 },
    /// `e_j(z) = z^j`.
    Hardy,
    /// `e_j(z) = sqrt((2α)^{j+1} / (π j!)) z^j`.
    Fock { alpha: f64 },
    /// Shifted sincs `sqrt(2a) sinc(2a x - k_j)` with `k_j = 0, 1, -1, 2, -2, …`.
    PaleyWiener { a: f64 },
}

impl Basis {
    /// Orthonormal reference basis of a space. Besov-Sobolev spaces use
    /// monomials.
    pub fn for_space(space: &SpaceSpec) -> Self {
        match space.kind() {
            SpaceKind::Bergman { t } => Basis::Bergman { t },
            SpaceKind::Hardy => Basis::Hardy,
            SpaceKind::Fock { alpha } => Basis::Fock { alpha },
            SpaceKind::PaleyWiener { a } => Basis::PaleyWiener { a },
            SpaceKind::BesovSobolev { .. } => Basis::Monomial,
        }
    }

    /// Factor `n_j` with `e_j(z) = n_j z^j`; `None` for non-monomial bases.
    pub fn monomial_factor(&self, j: usize) -> Option<f64> {
        let jf = j as f64;
        Some(match *self {
            Basis::Monomial | Basis::Hardy => 1.0,
            Basis::Bergman { t: 0.0 } => (jf + 1.0).sqrt(),
            Basis::Bergman { t } => {
                (0.5 * (libm::lgamma(jf + t + 2.0) - libm::lgamma(jf + 1.0) - libm::lgamma(t + 2.0)))
                    .exp()
            }
            Basis::Fock { alpha } => {
                (0.5 * ((jf + 1.0) * (2.0 * alpha).ln() - PI.ln() - libm::lgamma(jf + 1.0))).exp()
            }
            Basis::PaleyWiener { .. } => return None,
        })
    }

    /// Value of the `j`-th basis element at `z`.
    pub fn eval(&self, j: usize, z: Complex64) -> Complex64 {
        match *self {
            Basis::PaleyWiener { a } => {
                let k = sinc_shift(j) as f64;
                (2.0 * a).sqrt() * sinc(2.0 * a * z - k)
            }
            _ => z.powu(j as u32) * self.monomial_factor(j).unwrap_or(1.0),
        }
    }
}

/// Zig-zag enumeration of the integers: 0, 1, -1, 2, -2, …
pub(crate) fn sinc_shift(j: usize) -> i64 {
    if j % 2 == 1 {
        (j as i64 + 1) / 2
    } else {
        -(j as i64 / 2)
    }
}

pub(crate) fn sinc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-8 {
        let pw = PI * w;
        Complex64::new(1.0, 0.0) - pw * pw / 6.0
    } else {
        (PI * w).sin() / (PI * w)
    }
}

#[derive(Clone)]
struct Coefficients {
    basis: Basis,
    values: Vec<Complex64>,
}

/// A function given by basis coefficients, by an evaluation map, or both.
///
/// Sampled functions may also carry derivative samplers; entry `k` of the
/// derivative list is `f^{(k+1)}`.
#[derive(Clone)]
pub struct FunctionRep {
    coeffs: Option<Coefficients>,
    sampler: Option<Sampler>,
    derivatives: Vec<Sampler>,
}

impl fmt::Debug for FunctionRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionRep")
            .field("basis", &self.coeffs.as_ref().map(|c| c.basis))
            .field("coeffs", &self.coeffs.as_ref().map(|c| &c.values))
            .field("sampled", &self.sampler.is_some())
            .field("derivatives", &self.derivatives.len())
            .finish()
    }
}

impl FunctionRep {
    pub fn from_coeffs(basis: Basis, values: Vec<Complex64>) -> Self {
        Self {
            coeffs: Some(Coefficients { basis, values }),
            sampler: None,
            derivatives: Vec::new(),
        }
    }

    /// Coefficients in the reference basis of `space`.
    pub fn in_space(space: &SpaceSpec, values: Vec<Complex64>) -> Self {
        Self::from_coeffs(Basis::for_space(space), values)
    }

    /// The `j`-th reference basis element of `space`.
    pub fn basis_element(space: &SpaceSpec, j: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); j + 1];
        v[j] = Complex64::new(1.0, 0.0);
        Self::in_space(space, v)
    }

    /// `f(z) = Σ c_j z^j`.
    pub fn polynomial(taylor: Vec<Complex64>) -> Self {
        Self::from_coeffs(Basis::Monomial, taylor)
    }

    pub fn monomial(m: usize) -> Self {
        Self::basis_element_of(Basis::Monomial, m)
    }

    pub fn basis_element_of(basis: Basis, j: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); j + 1];
        v[j] = Complex64::new(1.0, 0.0);
        Self::from_coeffs(basis, v)
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0)])
    }

    pub fn sampled<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            coeffs: None,
            sampler: Some(Arc::new(f)),
            derivatives: Vec::new(),
        }
    }

    /// Attaches an evaluation map to a coefficient representation.
    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = Some(sampler);
        self
    }

    pub fn with_derivatives(mut self, derivatives: Vec<Sampler>) -> Self {
        self.derivatives = derivatives;
        self
    }

    pub fn basis(&self) -> Option<Basis> {
        self.coeffs.as_ref().map(|c| c.basis)
    }

    pub fn coeffs(&self) -> Option<&[Complex64]> {
        self.coeffs.as_ref().map(|c| c.values.as_slice())
    }

    pub fn has_sampler(&self) -> bool {
        self.sampler.is_some()
    }

    /// Coefficients in the given basis, if this function is stored in it.
    pub fn coeffs_in(&self, basis: Basis) -> Option<&[Complex64]> {
        self.coeffs
            .as_ref()
            .filter(|c| c.basis == basis)
            .map(|c| c.values.as_slice())
    }

    /// Multiplies by a scalar.
    pub fn scaled(&self, c: Complex64) -> Self {
        let coeffs = self.coeffs.as_ref().map(|k| Coefficients {
            basis: k.basis,
            values: k.values.iter().map(|v| v * c).collect(),
        });
        let sampler = self.sampler.clone().map(|s| -> Sampler { Arc::new(move |z| c * s(z)) });
        let derivatives = self
            .derivatives
            .iter()
            .cloned()
            .map(|s| -> Sampler { Arc::new(move |z| c * s(z)) })
            .collect();
        Self {
            coeffs,
            sampler,
            derivatives,
        }
    }

    /// Taylor coefficients at 0, available for coefficient reps in a
    /// monomial-type basis.
    pub fn taylor(&self) -> Option<Vec<Complex64>> {
        let c = self.coeffs.as_ref()?;
        c.values
            .iter()
            .enumerate()
            .map(|(j, v)| c.basis.monomial_factor(j).map(|n| v * n))
            .collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if let Some(c) = &self.coeffs {
            if let Some(t) = self.taylor() {
                return horner(&t, z);
            }
            return c
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| v * c.basis.eval(j, z))
                .sum();
        }
        match &self.sampler {
            Some(s) => s(z),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `k`-th complex derivative at `z`: exact for Taylor coefficient reps,
    /// taken from the supplied derivative samplers otherwise.
    pub fn derivative(&self, k: usize, z: Complex64) -> Result<Complex64> {
        if k == 0 {
            return Ok(self.eval(z));
        }
        if let Some(t) = self.taylor() {
            return Ok(horner(&derivative_coeffs(&t, k), z));
        }
        self.derivatives
            .get(k - 1)
            .map(|s| s(z))
            .ok_or_else(|| {
                Error::param(
                    "derivatives",
                    format!("sampled function has no order-{k} derivative data"),
                )
            })
    }

    /// Largest discrepancy between the coefficient and sampler views on the
    /// grid nodes; `0` when only one view is present.
    pub fn consistency_gap(&self, grid: &QuadratureGrid) -> f64 {
        match (&self.coeffs, &self.sampler) {
            (Some(_), Some(s)) => grid
                .sample(|z| {
                    let mut only_coeffs = self.clone();
                    only_coeffs.sampler = None;
                    (only_coeffs.eval(z) - s(z)).norm()
                })
                .into_iter()
                .fold(0.0, f64::max),
            _ => 0.0,
        }
    }
}

pub(crate) fn horner(taylor: &[Complex64], z: Complex64) -> Complex64 {
    taylor
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Taylor coefficients of the `k`-th derivative.
pub(crate) fn derivative_coeffs(taylor: &[Complex64], k: usize) -> Vec<Complex64> {
    if k >= taylor.len() {
        return vec![Complex64::new(0.0, 0.0)];
    }
    (k..taylor.len())
        .map(|j| {
            let falling: f64 = ((j - k + 1)..=j).map(|m| m as f64).product();
            taylor[j] * falling
        })
        .collect()
}
