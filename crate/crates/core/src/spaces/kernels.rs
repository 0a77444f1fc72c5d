use std::f64::consts::PI;

use num_complex::Complex64;

use super::function::{Basis, FunctionRep};
use super::{conjugate_exponent, SpaceKind, SpaceSpec};
use crate::error::{Error, Result};
use crate::numerics::{Domain, Measure, QuadratureGrid};

fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|a| a.norm_sqr()).sum()
}

/// `base^{-s}` for `Re(base) > 0`: repeated multiplication for integer
/// `s`, principal power otherwise (no branch cut is crossed).
fn inv_power(base: Complex64, s: f64) -> Complex64 {
    if s.fract() == 0.0 && s.abs() < 64.0 {
        base.powi(-(s as i32))
    } else {
        (-s * base.ln()).exp()
    }
}

fn check_dims(space: &SpaceSpec, z: &[Complex64], w: &[Complex64]) -> Result<()> {
    if z.len() != space.dim() || w.len() != space.dim() {
        return Err(Error::param(
            "point",
            format!(
                "expected points in C^{}, got lengths {} and {}",
                space.dim(),
                z.len(),
                w.len()
            ),
        ));
    }
    Ok(())
}

/// Reproducing kernel `K(z, w) = K_w(z)`.
///
/// Bergman: `(1 - <z,w>)^{-(n+1+t)}` (normalized weighted volume);
/// Hardy: `(1 - <z,w>)^{-n}`; Fock: `(2α/π)^n e^{2α<z,w>}`;
/// Paley-Wiener: `sin(2πa(x-y)) / (π(x-y))`.
pub fn kernel_eval(space: &SpaceSpec, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    check_dims(space, z, w)?;
    let n = space.dim() as f64;
    match space.kind() {
        SpaceKind::Bergman { t } => {
            if norm_sqr(z) >= 1.0 || norm_sqr(w) >= 1.0 {
                return Err(Error::Domain(
                    "Bergman kernel needs |z|, |w| < 1".into(),
                ));
            }
            Ok(inv_power(Complex64::new(1.0, 0.0) - inner(z, w), n + 1.0 + t))
        }
        SpaceKind::Hardy => {
            let zw = inner(z, w);
            if norm_sqr(z) >= 1.0 || norm_sqr(w) > 1.0 || zw.norm() >= 1.0 {
                return Err(Error::Domain(
                    "Hardy kernel needs |z| < 1, |w| <= 1, |<z,w>| < 1".into(),
                ));
            }
            Ok(inv_power(Complex64::new(1.0, 0.0) - zw, n))
        }
        SpaceKind::Fock { alpha } => {
            let zw = inner(z, w);
            if !(zw.re.is_finite() && zw.im.is_finite()) {
                return Err(Error::Domain("Fock kernel needs finite points".into()));
            }
            Ok((2.0 * alpha / PI).powf(n) * (2.0 * alpha * zw).exp())
        }
        SpaceKind::PaleyWiener { a } => {
            if z[0].im != 0.0 || w[0].im != 0.0 {
                return Err(Error::Domain(
                    "Paley-Wiener kernel takes real arguments".into(),
                ));
            }
            Ok(Complex64::new(pw_kernel(a, z[0].re - w[0].re), 0.0))
        }
        SpaceKind::BesovSobolev { .. } => Err(Error::param(
            "space",
            "no closed-form kernel for weighted Besov-Sobolev spaces",
        )),
    }
}

pub(crate) fn pw_kernel(a: f64, d: f64) -> f64 {
    if d.abs() < 1e-12 {
        2.0 * a
    } else {
        (2.0 * PI * a * d).sin() / (PI * d)
    }
}

/// `p`-normalized kernel `k_w^{(p)}(z) = K(z,w) / K(w,w)^{1/p'}`; on the
/// Bergman ball this is `(1-|w|^2)^{(n+1)/p'} / (1 - <z,w>)^{n+1}`.
pub fn normalized_kernel_eval(
    space: &SpaceSpec,
    z: &[Complex64],
    w: &[Complex64],
    p: f64,
) -> Result<Complex64> {
    let q = conjugate_exponent(p)?;
    let k = kernel_eval(space, z, w)?;
    let diag = kernel_diag(space, w)?;
    Ok(k / diag.powf(1.0 / q))
}

/// `K(w, w) = ‖K_w‖^2`, computed from the closed form of the diagonal.
pub(crate) fn kernel_diag(space: &SpaceSpec, w: &[Complex64]) -> Result<f64> {
    let n = space.dim() as f64;
    let r2 = norm_sqr(w);
    match space.kind() {
        SpaceKind::Bergman { t } if r2 < 1.0 => Ok((1.0 - r2).powf(-(n + 1.0 + t))),
        SpaceKind::Hardy if r2 < 1.0 => Ok((1.0 - r2).powf(-n)),
        SpaceKind::Bergman { .. } | SpaceKind::Hardy => {
            Err(Error::Domain("kernel norm diverges on the boundary".into()))
        }
        SpaceKind::Fock { alpha } => Ok((2.0 * alpha / PI).powf(n) * (2.0 * alpha * r2).exp()),
        SpaceKind::PaleyWiener { a } => Ok(2.0 * a),
        SpaceKind::BesovSobolev { .. } => kernel_eval(space, w, w).map(|k| k.re),
    }
}

/// Scalar normalized Bergman kernel on the disk, `k_w^{(p)}(z)` with
/// exponent `(2+t)/p'`. Hot-path helper: no validation.
pub(crate) fn bergman_normalized_disk(z: Complex64, w: Complex64, t: f64, q: f64) -> Complex64 {
    let s = 2.0 + t;
    let base = Complex64::new(1.0, 0.0) - z * w.conj();
    (1.0 - w.norm_sqr()).powf(s / q) * inv_power(base, s)
}

/// Value of the `j`-th reference basis element at `z` (n = 1).
pub fn basis_eval(space: &SpaceSpec, j: usize, z: Complex64) -> Result<Complex64> {
    space.require_dim1("basis_eval")?;
    match space.kind() {
        SpaceKind::Bergman { .. } if z.norm() >= 1.0 => {
            Err(Error::Domain(format!("{z} is outside the unit disk")))
        }
        SpaceKind::Hardy if z.norm() > 1.0 + 1e-12 => {
            Err(Error::Domain(format!("{z} is outside the closed unit disk")))
        }
        SpaceKind::PaleyWiener { .. } if z.im != 0.0 => {
            Err(Error::Domain("Paley-Wiener basis takes real arguments".into()))
        }
        _ => Ok(Basis::for_space(space).eval(j, z)),
    }
}

/// `n_j` with `e_j = n_j z^j` for monomial-type bases.
pub fn basis_norm_factor(space: &SpaceSpec, j: usize) -> Option<f64> {
    Basis::for_space(space).monomial_factor(j)
}

fn grid_mismatch(space: &SpaceSpec, grid: &QuadratureGrid, need: &str) -> Error {
    Error::param(
        "grid",
        format!(
            "{} norm needs {need}, got {} ({:?})",
            space.name(),
            grid.id(),
            grid.measure()
        ),
    )
}

/// Quadrature approximation of the space norm of `f`.
///
/// Bergman uses a normalized-area grid on the unit disk, Hardy the circle
/// grid, Fock a Lebesgue grid covering the Gaussian mass, Paley-Wiener a
/// uniform lattice at or above the Nyquist rate.
pub fn space_norm(space: &SpaceSpec, f: &FunctionRep, grid: &QuadratureGrid) -> Result<f64> {
    space.require_dim1("space_norm")?;
    let p = space.p();
    let abs_p = move |v: Complex64| -> f64 {
        if p == 2.0 {
            v.norm_sqr()
        } else {
            v.norm().powf(p)
        }
    };
    let integral = match space.kind() {
        SpaceKind::Bergman { t } => {
            let full_disk = matches!(grid.domain(), Domain::Disk { radius, center } if radius == 1.0 && center == Complex64::new(0.0, 0.0));
            if grid.measure() != Measure::NormalizedArea || !full_disk {
                return Err(grid_mismatch(space, grid, "a normalized-area unit-disk grid"));
            }
            // dv_t = (t + 1)(1 - |z|^2)^t dv at n = 1
            grid.integrate_real(|z| {
                let w = if t == 0.0 {
                    1.0
                } else {
                    (t + 1.0) * (1.0 - z.norm_sqr()).powf(t)
                };
                abs_p(f.eval(z)) * w
            })?
        }
        SpaceKind::Hardy => {
            if grid.domain() != Domain::Circle {
                return Err(grid_mismatch(space, grid, "the boundary circle grid"));
            }
            grid.integrate_real(|z| abs_p(f.eval(z)))?
        }
        SpaceKind::Fock { alpha } => {
            if grid.measure() != Measure::Lebesgue || matches!(grid.domain(), Domain::Interval { .. }) {
                return Err(grid_mismatch(space, grid, "a planar Lebesgue grid"));
            }
            grid.integrate_real(|z| abs_p(f.eval(z) * (-alpha * z.norm_sqr()).exp()))?
        }
        SpaceKind::PaleyWiener { .. } => {
            if !matches!(grid.domain(), Domain::Interval { .. }) {
                return Err(grid_mismatch(space, grid, "a uniform lattice on the line"));
            }
            grid.integrate_real(|x| abs_p(f.eval(Complex64::new(x.re, 0.0))))?
        }
        SpaceKind::BesovSobolev { order, weight } => {
            let spec = crate::besov::BesovSpec::new(p, order, weight)?;
            return crate::besov::besov_norm(&spec, f, grid);
        }
    };
    Ok(integral.max(0.0).powf(1.0 / p))
}
