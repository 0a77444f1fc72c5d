//! Discrete approximation of `F(ξ) = ∫ f(x) e^{-2πixξ} dx` on a uniform grid.
//!
//! Samples sit at `x_k = origin + k h`; frequencies at
//! `ξ_m = (m - ⌊N/2⌋) / (N h)`. The transform is `h`-scaled so that
//! `h Σ|f|² = Δξ Σ|F|²` holds to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub values: Vec<Complex64>,
    pub freq_spacing: f64,
}

fn check(len: usize, spacing: f64) -> Result<()> {
    if len < 2 {
        return Err(Error::param("samples", format!("length {len} < 2")));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::param("spacing", format!("{spacing} is not positive")));
    }
    Ok(())
}

/// Centered-window DFT: samples are assumed to start at `-⌊N/2⌋ h`.
pub fn dft(samples: &[Complex64], spacing: f64) -> Result<Spectrum> {
    let origin = -((samples.len() / 2) as f64) * spacing;
    dft_with_origin(samples, spacing, origin)
}

pub fn dft_with_origin(samples: &[Complex64], spacing: f64, origin: f64) -> Result<Spectrum> {
    check(samples.len(), spacing)?;
    let n = samples.len();
    let half = n / 2;
    let dxi = 1.0 / (n as f64 * spacing);
    // Shift the output so index m carries frequency (m - half) dxi.
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(k, &f)| f * Complex64::from_polar(1.0, 2.0 * PI * (k * half) as f64 / n as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let frequencies: Vec<f64> = (0..n).map(|m| (m as f64 - half as f64) * dxi).collect();
    let values = buf
        .into_iter()
        .zip(&frequencies)
        .map(|(v, &xi)| v * spacing * Complex64::from_polar(1.0, -2.0 * PI * origin * xi))
        .collect();
    Ok(Spectrum {
        frequencies,
        values,
        freq_spacing: dxi,
    })
}

/// Inverse of [`dft_with_origin`]: recovers the samples.
pub fn idft_with_origin(spectrum: &Spectrum, spacing: f64, origin: f64) -> Result<Vec<Complex64>> {
    let n = spectrum.values.len();
    check(n, spacing)?;
    let half = n / 2;
    let mut buf: Vec<Complex64> = spectrum
        .values
        .iter()
        .zip(&spectrum.frequencies)
        .map(|(&v, &xi)| v / spacing * Complex64::from_polar(1.0, 2.0 * PI * origin * xi))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            v / n as f64 * Complex64::from_polar(1.0, -2.0 * PI * (k * half) as f64 / n as f64)
        })
        .collect())
}
