//! Möbius maps, the Bergman metric, and hyperbolic measure of Bergman
//! balls. Scalar functions work on the unit disk; `ball_*` variants take
//! points of the unit ball in `C^n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{GridResolution, Measure, QuadratureGrid};

fn in_disk(z: Complex64, what: &str) -> Result<()> {
    if z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {z} is not in the open unit disk")))
    }
}

/// `φ_a(w) = (a - w) / (1 - ā w)`: the involution of the disk swapping
/// `a` and `0`.
pub fn mobius(a: Complex64, w: Complex64) -> Result<Complex64> {
    in_disk(a, "a")?;
    in_disk(w, "w")?;
    Ok(mobius_unchecked(a, w))
}

#[inline]
pub(crate) fn mobius_unchecked(a: Complex64, w: Complex64) -> Complex64 {
    (a - w) / (1.0 - a.conj() * w)
}

/// `β(z, w) = ½ log((1 + |φ_z(w)|) / (1 - |φ_z(w)|)) = artanh |φ_z(w)|`.
pub fn bergman_distance(z: Complex64, w: Complex64) -> Result<f64> {
    in_disk(z, "z")?;
    in_disk(w, "w")?;
    Ok(bergman_distance_unchecked(z, w))
}

#[inline]
pub(crate) fn bergman_distance_unchecked(z: Complex64, w: Complex64) -> f64 {
    // |φ_z(w)|^2 = 1 - (1-|z|^2)(1-|w|^2)/|1 - z̄w|^2, stable near the diagonal
    let rho = mobius_unchecked(z, w).norm().min(1.0 - f64::EPSILON);
    rho.atanh()
}

fn ball_inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

fn in_ball(z: &[Complex64], what: &str) -> Result<f64> {
    let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    if r2 < 1.0 {
        Ok(r2)
    } else {
        Err(Error::Domain(format!("{what} is not in the open unit ball")))
    }
}

/// `φ_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>)` with `s_a = sqrt(1-|a|^2)`,
/// `P_a` the projection onto `span(a)` and `Q_a = I - P_a`.
pub fn ball_mobius(a: &[Complex64], z: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != z.len() || a.is_empty() {
        return Err(Error::param("point", "dimension mismatch"));
    }
    let a2 = in_ball(a, "a")?;
    in_ball(z, "z")?;
    let denom = Complex64::new(1.0, 0.0) - ball_inner(z, a);
    let s = (1.0 - a2).sqrt();
    let za = ball_inner(z, a);
    Ok((0..a.len())
        .map(|i| {
            let pz = if a2 > 0.0 { a[i] * (za / a2) } else { Complex64::new(0.0, 0.0) };
            let qz = z[i] - pz;
            (a[i] - pz - s * qz) / denom
        })
        .collect())
}

pub fn ball_bergman_distance(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    let phi = ball_mobius(z, w)?;
    let rho = phi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(rho.min(1.0 - f64::EPSILON).atanh())
}

/// Euclidean center and radius of the Bergman ball `D(z, r)` in the disk.
pub fn hyperbolic_disk_geometry(z: Complex64, r: f64) -> Result<(Complex64, f64)> {
    in_disk(z, "z")?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("r", format!("{r} is not positive")));
    }
    let big_r = r.tanh();
    let z2 = z.norm_sqr();
    let d = 1.0 - big_r * big_r * z2;
    Ok((z * ((1.0 - big_r * big_r) / d), big_r * (1.0 - z2) / d))
}

/// Quadrature value of `λ(D(z, r))` with `dλ = dv / (1 - |w|^2)^2`.
///
/// The Bergman ball is a Euclidean disk; the grid is centered on it and
/// integrates the smooth density, so accuracy is spectral in the grid size.
pub fn hyperbolic_ball_measure(z: Complex64, r: f64, resolution: GridResolution) -> Result<f64> {
    let (center, radius) = hyperbolic_disk_geometry(z, r)?;
    let grid = QuadratureGrid::disk_centered(
        resolution.n_radial,
        resolution.n_angular,
        center,
        radius,
        Measure::NormalizedArea,
    )?;
    grid.integrate_real(|w| {
        let s = 1.0 - w.norm_sqr();
        1.0 / (s * s)
    })
}

/// `‖K_z‖ / ‖K_w‖ = ((1-|w|^2) / (1-|z|^2))^{(n+1)/2}` for the Bergman space.
pub fn kernel_norm_ratio(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    let z2 = in_ball(z, "z")?;
    let w2 = in_ball(w, "w")?;
    let n = z.len() as f64;
    Ok(((1.0 - w2) / (1.0 - z2)).powf(0.5 * (n + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn mobius_examples() {
        assert!(mobius(c(0.5), c(0.5)).unwrap().norm() < 1e-16);
        assert_abs_diff_eq!(mobius(c(0.5), c(0.0)).unwrap().re, 0.5);
        assert_abs_diff_eq!(mobius(c(0.5), c(-0.5)).unwrap().re, 0.8, epsilon = 1e-15);
        assert!(mobius(c(1.0), c(0.0)).is_err());
        assert!(mobius(c(0.0), Complex64::new(0.0, -1.2)).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_abs_diff_eq!(
            bergman_distance(c(0.0), c(0.5)).unwrap(),
            0.5 * 3f64.ln(),
            epsilon = 1e-15
        );
        assert_eq!(bergman_distance(c(0.3), c(0.3)).unwrap(), 0.0);
        // two-step evaluation: q = 0.4 / (1 - 0.21)
        let q: f64 = 0.4 / 0.79;
        let expected = 0.5 * ((1.0 + q) / (1.0 - q)).ln();
        assert_abs_diff_eq!(bergman_distance(c(0.3), c(0.7)).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.557781, epsilon = 1e-6);
    }

    #[test]
    fn ball_versions_reduce_to_disk() {
        let a = Complex64::new(0.2, 0.5);
        let w = Complex64::new(-0.3, 0.1);
        let b = ball_mobius(&[a], &[w]).unwrap();
        assert!((b[0] - mobius(a, w).unwrap()).norm() < 1e-15);
        assert_abs_diff_eq!(
            ball_bergman_distance(&[a], &[w]).unwrap(),
            bergman_distance(a, w).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn ball_mobius_smoke_n2() {
        let a = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
        let z = [Complex64::new(0.1, -0.5), Complex64::new(0.25, 0.0)];
        let pa = ball_mobius(&a, &a).unwrap();
        assert!(pa.iter().all(|c| c.norm() < 1e-15));
        let back = ball_mobius(&a, &ball_mobius(&a, &z).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&z) {
            assert!((x - y).norm() < 1e-14);
        }
        let d1 = ball_bergman_distance(&a, &z).unwrap();
        let d2 = ball_bergman_distance(&z, &a).unwrap();
        assert_abs_diff_eq!(d1, d2, epsilon = 1e-13);
    }

    #[test]
    fn hyperbolic_ball_mass_is_center_independent() {
        let r = 0.5 * 3f64.ln();
        let res = GridResolution::new(64, 128);
        let at0 = hyperbolic_ball_measure(c(0.0), r, res).unwrap();
        assert_abs_diff_eq!(at0, 1.0 / 3.0, epsilon = 1e-6);
        let off = hyperbolic_ball_measure(c(0.4), r, res).unwrap();
        assert_abs_diff_eq!(off, at0, epsilon = 1e-4);
        assert!(hyperbolic_ball_measure(c(0.0), 1e-6, res).unwrap() < 1e-11);
    }

    #[test]
    fn ball_boundary_is_at_distance_r() {
        let z = Complex64::new(0.4, -0.3);
        let r = 1.3;
        let (center, radius) = hyperbolic_disk_geometry(z, r).unwrap();
        for k in 0..16 {
            let w = center + Complex64::from_polar(radius, k as f64 * 0.4);
            assert_abs_diff_eq!(bergman_distance(z, w).unwrap(), r, epsilon = 1e-10);
        }
    }

    #[test]
    fn kernel_norm_ratio_closed_form() {
        let v = kernel_norm_ratio(&[c(0.5)], &[c(0.0)]).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 0.75, epsilon = 1e-15);
    }
}
