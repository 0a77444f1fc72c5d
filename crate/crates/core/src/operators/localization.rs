use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::TruncatedOperator;
use crate::error::{Error, Result};
use crate::numerics::par::pairwise_sum;
use crate::numerics::{gauss_jacobi_on, GridResolution};
use crate::spaces::geometry::mobius_unchecked;
use crate::spaces::{conjugate_exponent, hyperbolic_disk_geometry};

/// Off-diagonal integrals of `|<T k_z, k_w>| (‖K_z‖/‖K_w‖)^a dλ(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationValues {
    /// Whole disk, `T*`, `a = 1 - 2δ/(2p')`.
    pub rows: f64,
    /// Outside `D(0, R)`, `a = 1 - 2δ/(2p)`.
    pub columns: f64,
    /// Outside `D(z, R)`, `a = 1 - 2δ/(2p)`.
    pub complements: f64,
    pub delta: f64,
}

/// Taylor coefficients of `w ↦ (T k_z)(w)`, with `k_z` expanded in the
/// section's basis (coordinates `conj(e_j(z)) (1 - |z|^2)`).
fn image_of_kernel(t: &TruncatedOperator, z: Complex64) -> Vec<Complex64> {
    let s = 1.0 - z.norm_sqr();
    let mut pow = Complex64::new(1.0, 0.0);
    let coords: Vec<Complex64> = (0..=t.deg())
        .map(|j| {
            let v = pow * ((j + 1) as f64).sqrt() * s;
            pow *= z.conj();
            v
        })
        .collect();
    t.matrix()
        .apply(&coords)
        .iter()
        .enumerate()
        .map(|(j, c)| c * ((j + 1) as f64).sqrt())
        .collect()
}

fn horner(taylor: &[Complex64], w: Complex64) -> Complex64 {
    crate::spaces::horner(taylor, w)
}

/// `∫_{ρ0 <= |ζ| < 1} s(ζ) (1 - |ζ|^2)^alpha dv(ζ)` with Gauss-Jacobi in the
/// radius, so the endpoint singularity is integrated exactly.
fn singular_annulus<S>(rho0: f64, alpha: f64, res: GridResolution, s: S) -> Result<f64>
where
    S: Fn(Complex64) -> f64,
{
    let radial = gauss_jacobi_on(res.n_radial, rho0, 1.0, alpha)?;
    let n = res.n_angular;
    let mut terms = Vec::with_capacity(radial.len());
    for (r, w) in radial {
        // (1 - r^2)^alpha = (1 - r)^alpha (1 + r)^alpha; dv = 2 r dr dθ/2π
        let factor = w * (1.0 + r).powf(alpha) * 2.0 * r;
        let ring: Vec<f64> = (0..n)
            .map(|m| s(Complex64::from_polar(r, 2.0 * PI * (m as f64 + 0.5) / n as f64)))
            .collect();
        terms.push(factor * pairwise_sum(&ring) / n as f64);
    }
    let v = pairwise_sum(&terms);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            node: Complex64::new(rho0, 0.0),
            value: Complex64::new(v, 0.0),
        })
    }
}

/// Evaluates the three localization integrals at `z` for the section `T`.
/// `delta` defaults to `min(p, p')/2`.
pub fn localization_integrals(
    t: &TruncatedOperator,
    z: Complex64,
    p: f64,
    delta: Option<f64>,
    big_r: f64,
    res: GridResolution,
) -> Result<LocalizationValues> {
    let q = conjugate_exponent(p)?;
    let delta = delta.unwrap_or(0.5 * p.min(q));
    if !(delta > 0.0 && delta < p.min(q)) {
        return Err(Error::param(
            "delta",
            format!("need 0 < delta < min(p, p') = {}, got {delta}", p.min(q)),
        ));
    }
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::param("R", format!("{big_r} is not positive")));
    }
    if !(z.norm() <= 0.99) {
        return Err(Error::Domain(format!("|z| = {} exceeds 0.99", z.norm())));
    }
    let sz = 1.0 - z.norm_sqr();
    // n = 1: (‖K_z‖/‖K_w‖)^a = ((1-|w|^2)/(1-|z|^2))^a, |<T k_z, k_w>| = |(T k_z)(w)| (1-|w|^2)
    let exponent = |r: f64| 1.0 - 2.0 * delta / (2.0 * r);
    let a_rows = exponent(q);
    let a_cols = exponent(p);

    // w = φ_z(ζ): dλ is invariant, 1 - |w|^2 = (1-|z|^2)(1-|ζ|^2)/|1 - z̄ζ|^2
    let mobius_integral = |img: &[Complex64], a: f64, rho0: f64| {
        singular_annulus(rho0, a - 1.0, res, |zeta| {
            let d = (1.0 - z.conj() * zeta).norm_sqr();
            let w = mobius_unchecked(z, zeta);
            horner(img, w).norm() * sz / d.powf(1.0 + a)
        })
    };
    let rows_img = image_of_kernel(&t.adjoint(), z);
    let cols_img = image_of_kernel(t, z);
    let rows = mobius_integral(&rows_img, a_rows, 0.0)?;
    let complements = mobius_integral(&cols_img, a_cols, big_r.tanh())?;
    let columns = singular_annulus(big_r.tanh(), a_cols - 1.0, res, |w| {
        horner(&cols_img, w).norm() * sz.powf(-a_cols)
    })?;
    Ok(LocalizationValues {
        rows,
        columns,
        complements,
        delta,
    })
}

/// `sup_{w ∈ D(z, R)} |<T k_z, k_w>|` over a polar sample of the ball.
pub fn weak_berezin(t: &TruncatedOperator, z: Complex64, big_r: f64, res: GridResolution) -> Result<f64> {
    let (center, radius) = hyperbolic_disk_geometry(z, big_r)?;
    let img = image_of_kernel(t, z);
    let mut sup = horner(&img, z).norm() * (1.0 - z.norm_sqr());
    for i in 0..=res.n_radial {
        let rho = radius * i as f64 / res.n_radial as f64;
        for m in 0..res.n_angular {
            let w = center + Complex64::from_polar(rho, 2.0 * PI * m as f64 / res.n_angular as f64);
            let v = horner(&img, w).norm() * (1.0 - w.norm_sqr());
            sup = sup.max(v);
        }
    }
    Ok(sup)
}
