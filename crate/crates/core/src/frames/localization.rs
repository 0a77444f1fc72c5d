use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::FrameSpec;
use crate::error::{Error, Result};
use crate::numerics::par::map_indexed;
use crate::numerics::{Measure, QuadratureGrid};
use crate::spaces::SpaceKind;

/// Weight `w`, sampled centers `y`, and radii `R` for the hypothesis checks
/// of the off-diagonal kernel decay criterion.
#[derive(Clone)]
pub struct LocalizationWeightSpec {
    weight: Option<Arc<dyn Fn(Complex64) -> f64 + Send + Sync>>,
    centers: Vec<Complex64>,
    radii: Vec<f64>,
}

impl fmt::Debug for LocalizationWeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalizationWeightSpec")
            .field("weight", &if self.weight.is_some() { "field" } else { "1" })
            .field("centers", &self.centers)
            .field("radii", &self.radii)
            .finish()
    }
}

impl LocalizationWeightSpec {
    /// `w ≡ 1`.
    pub fn unweighted(centers: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::param("centers", "no sample centers"));
        }
        if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::param("radii", "need at least one positive radius"));
        }
        Ok(Self {
            weight: None,
            centers,
            radii,
        })
    }

    pub fn with_weight<F>(mut self, w: F) -> Result<Self>
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        for &y in &self.centers {
            let v = w(y);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param("weight", format!("w({y}) = {v} is not positive")));
            }
        }
        self.weight = Some(Arc::new(w));
        Ok(self)
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    fn w(&self, x: Complex64) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w(x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationRow {
    pub radius: f64,
    /// `sup_y w(y)^{-1} ∫_{X \ B(y,R)} |<k_x,k_y>| w(x) dμ(x)`.
    pub tail_integral: f64,
    /// `max |<k_x,k_y>|` over sampled pairs with `d(x,y) >= R`.
    pub pair_decay: f64,
    /// `μ(F ∩ B(y,R))` for `|y - y₀| = size(F) + R`, `y₀ = 0`.
    pub far_overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub space: String,
    pub centers: usize,
    /// `sup_y w(y)^{-1} ∫_X |<k_x,k_y>| w(x) dμ(x)`.
    pub sup_integral: f64,
    pub rows: Vec<LocalizationRow>,
    /// Base point for the exhaustion overlap column.
    pub base_point: Complex64,
    pub exhaustion_size: f64,
    pub truncation_radius: f64,
}

/// `μ(D(0, s) ∩ D(y, R))` in Lebesgue area.
fn lens_area(s: f64, r: f64, d: f64) -> f64 {
    if d >= s + r {
        return 0.0;
    }
    if d <= (s - r).abs() {
        let m = s.min(r);
        return PI * m * m;
    }
    let a = ((d * d + s * s - r * r) / (2.0 * d * s)).clamp(-1.0, 1.0).acos();
    let b = ((d * d + r * r - s * s) / (2.0 * d * r)).clamp(-1.0, 1.0).acos();
    let k = (-d + s + r) * (d + s - r) * (d - s + r) * (d + s + r);
    s * s * a + r * r * b - 0.5 * k.max(0.0).sqrt()
}

/// Numeric values of the three off-diagonal hypotheses plus the exhaustion
/// overlap condition, for the Fock frame (`X = C`, `d` Euclidean).
pub fn frame_localization_check(
    frame: &FrameSpec,
    spec: &LocalizationWeightSpec,
) -> Result<LocalizationReport> {
    let alpha = match frame.space().kind() {
        SpaceKind::Fock { alpha } => alpha,
        _ => {
            return Err(Error::param(
                "frame",
                "the off-diagonal checks are implemented for the Fock frame",
            ))
        }
    };
    let res = frame.resolution();
    let density = 2.0 * alpha / PI;
    let modulus = |x: Complex64, y: Complex64| (-alpha * (x - y).norm_sqr()).exp();
    let r_max = spec.radii.iter().cloned().fold(0.0, f64::max);
    // beyond this the Gaussian is below e^{-60}
    let far = r_max + (60.0 / alpha).sqrt();

    let integral_at = |y: Complex64, inner: f64| -> Result<f64> {
        let grid = if inner == 0.0 {
            QuadratureGrid::disk_centered(res.n_radial, res.n_angular, y, far, Measure::Lebesgue)?
        } else {
            QuadratureGrid::annulus_centered(
                res.n_radial,
                res.n_angular,
                y,
                inner,
                far,
                Measure::Lebesgue,
            )?
        };
        let v = grid.integrate_real(|x| modulus(x, y) * spec.w(x) * density)?;
        Ok(v / spec.w(y))
    };

    let sups = map_indexed(spec.centers.len(), |k| integral_at(spec.centers[k], 0.0));
    let mut sup_integral = 0.0f64;
    for v in sups {
        sup_integral = sup_integral.max(v?);
    }

    let exhaustion_size = 1.0;
    let mut rows = Vec::with_capacity(spec.radii.len());
    for &r in &spec.radii {
        let tails = map_indexed(spec.centers.len(), |k| integral_at(spec.centers[k], r));
        let mut tail_integral = 0.0f64;
        for v in tails {
            tail_integral = tail_integral.max(v?);
        }
        let mut pair_decay = 0.0f64;
        for &y in &spec.centers {
            for i in 0..=16 {
                let rho = r + 4.0 * i as f64 / 16.0;
                for j in 0..32 {
                    let x = y + Complex64::from_polar(rho, 2.0 * PI * j as f64 / 32.0);
                    pair_decay = pair_decay.max(modulus(x, y));
                }
            }
            for &y2 in &spec.centers {
                if (y - y2).norm() >= r {
                    pair_decay = pair_decay.max(modulus(y, y2));
                }
            }
        }
        rows.push(LocalizationRow {
            radius: r,
            tail_integral,
            pair_decay,
            far_overlap: density * lens_area(exhaustion_size, r, exhaustion_size + r),
        });
    }
    Ok(LocalizationReport {
        space: frame.space().name().into(),
        centers: spec.centers.len(),
        sup_integral,
        rows,
        base_point: Complex64::new(0.0, 0.0),
        exhaustion_size,
        truncation_radius: far,
    })
}
