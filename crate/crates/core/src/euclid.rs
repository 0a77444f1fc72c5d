//! The classical criteria on `L²(ℝ)`: spatial and Fourier tails, the
//! translation modulus, short-time Fourier tails and Paley-Wiener tails.
//!
//! Signals are uniform samples `f(x_k)`, `x_k = origin + k h`. Integrals use
//! the midpoint rule with each sample owning the cell `[x_k - h/2, x_k + h/2]`;
//! a tail over `|x| > R` counts the part of each cell beyond `R`, so tails are
//! continuous in `R`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::dft_with_origin;
use crate::numerics::par::{map_indexed, pairwise_sum};

/// Default sampling window `[-20, 20)` with 4096 samples.
pub const DEFAULT_HALF_WIDTH: f64 = 20.0;
pub const DEFAULT_SAMPLES: usize = 4096;

/// `fourier_tail(f, a)` must stay below this for `f` to count as band-limited.
pub const BAND_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSignal {
    samples: Vec<Complex64>,
    spacing: f64,
    origin: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>, spacing: f64, origin: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("samples", "empty signal"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::param("spacing", format!("{spacing} is not positive")));
        }
        if !origin.is_finite() {
            return Err(Error::param("origin", format!("{origin} is not finite")));
        }
        if let Some(k) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite {
                node: Complex64::new(origin + k as f64 * spacing, 0.0),
                value: samples[k],
            });
        }
        Ok(Self {
            samples,
            spacing,
            origin,
        })
    }

    /// Samples `f` at `n` points `lo + k (hi - lo)/n`, `k < n`.
    pub fn from_fn<F>(lo: f64, hi: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        if !(hi > lo) || n < 2 {
            return Err(Error::param("window", format!("[{lo}, {hi}) with {n} samples")));
        }
        let h = (hi - lo) / n as f64;
        let samples = map_indexed(n, |k| f(lo + k as f64 * h));
        Self::new(samples, h, lo)
    }

    /// Samples `f` on the default window.
    pub fn on_default_window<F>(f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        Self::from_fn(-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH, DEFAULT_SAMPLES, f)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.spacing
    }

    /// First and last sample positions.
    pub fn window(&self) -> (f64, f64) {
        (self.origin, self.x(self.len() - 1))
    }

    pub fn norm_sq(&self) -> f64 {
        let v: Vec<f64> = self.samples.iter().map(|s| s.norm_sqr()).collect();
        pairwise_sum(&v) * self.spacing
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * c).collect(),
            ..self.clone()
        }
    }

    /// Linear interpolation, zero outside the sampled window.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let t = (x - self.origin) / self.spacing;
        if t < 0.0 || t > (self.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (t.floor() as usize).min(self.len().saturating_sub(2));
        let s = t - k as f64;
        if self.len() == 1 {
            return self.samples[0];
        }
        self.samples[k] * (1.0 - s) + self.samples[k + 1] * s
    }
}

/// Fraction of the cell `[x - half, x + half]` lying in `|t| > r`.
fn outside_fraction(x: f64, half: f64, r: f64) -> f64 {
    let inside = ((x + half).min(r) - (x - half).max(-r)).max(0.0);
    1.0 - inside / (2.0 * half)
}

fn tail_of(points: impl Iterator<Item = (f64, f64)>, cell: f64, r: f64) -> f64 {
    let terms: Vec<f64> = points
        .map(|(x, m)| m * outside_fraction(x, 0.5 * cell, r))
        .collect();
    pairwise_sum(&terms) * cell
}

fn check_radius(r: f64, lo: f64, hi: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::param("R", format!("{r} is negative")));
    }
    if r > lo.abs().max(hi.abs()) {
        return Err(Error::Window {
            requested: r,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `∫_{|x| > R} |f|^2 dx`.
pub fn l2_tail(f: &SampledSignal, r: f64) -> Result<f64> {
    let (lo, hi) = f.window();
    check_radius(r, lo, hi)?;
    Ok(tail_of(
        f.samples.iter().enumerate().map(|(k, s)| (f.x(k), s.norm_sqr())),
        f.spacing,
        r,
    ))
}

/// `‖f(· - h) - f‖^2` for `h` a multiple of the spacing; the signal is zero
/// outside its window.
pub fn translation_modulus(f: &SampledSignal, h: f64) -> Result<f64> {
    let steps = h / f.spacing;
    let shift = steps.round();
    if !(steps.is_finite() && (steps - shift).abs() <= 1e-9 * steps.abs().max(1.0)) {
        return Err(Error::param(
            "h",
            format!("{h} is not a multiple of the spacing {}", f.spacing),
        ));
    }
    let s = shift as i64;
    let n = f.len() as i64;
    let zero = Complex64::new(0.0, 0.0);
    let at = |k: i64| if (0..n).contains(&k) { f.samples[k as usize] } else { zero };
    // the difference is supported on the union of the window and its shift
    let (a, b) = (s.min(0), n + s.max(0));
    let terms: Vec<f64> = (a..b).map(|k| (at(k - s) - at(k)).norm_sqr()).collect();
    Ok(pairwise_sum(&terms) * f.spacing)
}

/// `∫_{|ξ| > R} |f̂(ξ)|^2 dξ` with `f̂(ξ) = ∫ f(x) e^{-2πixξ} dx` from the DFT.
pub fn fourier_tail(f: &SampledSignal, r: f64) -> Result<f64> {
    let spec = dft_with_origin(&f.samples, f.spacing, f.origin)?;
    let lo = spec.frequencies[0];
    let hi = *spec.frequencies.last().unwrap_or(&lo);
    check_radius(r, lo, hi)?;
    Ok(tail_of(
        spec.frequencies
            .iter()
            .zip(&spec.values)
            .map(|(&xi, v)| (xi, v.norm_sqr())),
        spec.freq_spacing,
        r,
    ))
}

/// `∫ |f̂|^2` from the DFT; equals [`SampledSignal::norm_sq`] up to rounding.
pub fn spectral_mass(f: &SampledSignal) -> Result<f64> {
    let spec = dft_with_origin(&f.samples, f.spacing, f.origin)?;
    let v: Vec<f64> = spec.values.iter().map(|s| s.norm_sqr()).collect();
    Ok(pairwise_sum(&v) * spec.freq_spacing)
}

/// `∫_{|x| > R} |f|^2` for `f` band-limited to `[-a, a]`.
pub fn pw_tail(f: &SampledSignal, a: f64, r: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::param("a", format!("{a} is not positive")));
    }
    let band = fourier_tail(f, a)?;
    if band > BAND_TOLERANCE {
        return Err(Error::Precondition(format!(
            "signal is not band-limited to [-{a}, {a}]: spectral mass {band:e} outside"
        )));
    }
    l2_tail(f, r)
}

/// Uniform axis `lo, lo + step, …, hi` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo && lo.is_finite() && hi.is_finite()) || n < 2 {
            return Err(Error::param("axis", format!("[{lo}, {hi}] with {n} points")));
        }
        Ok(Self { lo, hi, n })
    }

    /// Symmetric axis `[-half, half]` with the given step.
    pub fn symmetric(half: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && half > 0.0) {
            return Err(Error::param("axis", format!("half-width {half}, step {step}")));
        }
        let cells = (2.0 * half / step).round() as usize;
        Self::new(-half, half, cells + 1)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step()
    }
}

/// Window function `φ` of the short-time Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub enum StftWindow {
    /// `2^{1/4} e^{-πx^2}`, unit norm.
    Gaussian,
    /// Linearly interpolated samples.
    Sampled(SampledSignal),
}

/// Beyond this distance the Gaussian window is below `1e-40`.
const GAUSSIAN_REACH: f64 = 5.5;

pub fn gaussian(x: f64) -> f64 {
    2f64.powf(0.25) * (-PI * x * x).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StftField {
    pub a: Axis,
    pub b: Axis,
    /// Row-major in `a`: `values[i * b.n + j] = S_φ f(a_i, b_j)`.
    pub values: Vec<Complex64>,
    pub window_norm_sq: f64,
    pub warnings: Vec<String>,
}

impl StftField {
    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.b.n + j]
    }

    /// Trapezoidal mass of `|S_φ f|^2` over the grid.
    pub fn total_mass(&self) -> f64 {
        self.mass_where(|_, _| 1.0)
    }

    fn mass_where<W: Fn(f64, f64) -> f64>(&self, weight: W) -> f64 {
        let (da, db) = (self.a.step(), self.b.step());
        let terms: Vec<f64> = (0..self.a.n)
            .flat_map(|i| (0..self.b.n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let ta = if i == 0 || i + 1 == self.a.n { 0.5 } else { 1.0 };
                let tb = if j == 0 || j + 1 == self.b.n { 0.5 } else { 1.0 };
                ta * tb * weight(self.a.point(i), self.b.point(j)) * self.value(i, j).norm_sqr()
            })
            .collect();
        pairwise_sum(&terms) * da * db
    }
}

/// `S_φ f(a, b) = ∫ f(x) conj(φ(x - a)) e^{-2πibx} dx` on the grid, one
/// quadrature per point. An unnormalized sampled window is rescaled to unit
/// norm and the rescaling is recorded in `warnings`.
pub fn stft_field(f: &SampledSignal, window: &StftWindow, a: Axis, b: Axis) -> Result<StftField> {
    let mut warnings = Vec::new();
    let (phi, reach): (Box<dyn Fn(f64) -> f64 + Sync + Send>, f64) = match window {
        StftWindow::Gaussian => (Box::new(gaussian), GAUSSIAN_REACH),
        StftWindow::Sampled(w) => {
            if w.samples.iter().any(|s| s.im != 0.0) {
                return Err(Error::param("window", "sampled window must be real"));
            }
            let norm_sq = w.norm_sq();
            if !(norm_sq > 0.0) {
                return Err(Error::param("window", "zero window"));
            }
            let w = if (norm_sq - 1.0).abs() > 1e-8 {
                warnings.push(format!("window norm^2 {norm_sq:e} rescaled to 1"));
                w.scaled(Complex64::new(norm_sq.sqrt().recip(), 0.0))
            } else {
                w.clone()
            };
            let (lo, hi) = w.window();
            (Box::new(move |x| w.interpolate(x).re), lo.abs().max(hi.abs()))
        }
    };
    let h = f.spacing;
    let n = f.len();
    let values = map_indexed(a.n * b.n, |idx| {
        let (ai, bj) = (a.point(idx / b.n), b.point(idx % b.n));
        let k0 = (((ai - reach - f.origin) / h).floor().max(0.0) as usize).min(n);
        let k1 = (((ai + reach - f.origin) / h).ceil().max(0.0) as usize + 1).min(n);
        let mut re = Vec::with_capacity(k1.saturating_sub(k0));
        let mut im = Vec::with_capacity(k1.saturating_sub(k0));
        for k in k0..k1 {
            let x = f.x(k);
            let v = f.samples[k] * phi(x - ai) * Complex64::from_polar(1.0, -2.0 * PI * bj * x);
            re.push(v.re);
            im.push(v.im);
        }
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * h
    });
    Ok(StftField {
        a,
        b,
        values,
        window_norm_sq: 1.0,
        warnings,
    })
}

/// Mass of `|S_φ f|^2` outside the square `[-R, R]^2`.
pub fn stft_tail(field: &StftField, r: f64) -> Result<f64> {
    let reach = field
        .a
        .lo
        .abs()
        .min(field.a.hi.abs())
        .min(field.b.lo.abs())
        .min(field.b.hi.abs());
    if !(r >= 0.0) {
        return Err(Error::param("R", format!("{r} is negative")));
    }
    if r > reach {
        return Err(Error::Window {
            requested: r,
            lo: -reach,
            hi: reach,
        });
    }
    let inside = |t: f64| match t.abs().partial_cmp(&r) {
        Some(std::cmp::Ordering::Less) => 1.0,
        Some(std::cmp::Ordering::Equal) => 0.5,
        _ => 0.0,
    };
    Ok(field.mass_where(|a, b| 1.0 - inside(a) * inside(b)))
}

/// Suprema over a family of the spatial and Fourier tails at each radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyTails {
    pub radii: Vec<f64>,
    pub spatial: Vec<f64>,
    pub fourier: Vec<f64>,
    /// Index of the member attaining each Fourier supremum.
    pub fourier_argmax: Vec<usize>,
}

pub fn family_tails(family: &[SampledSignal], radii: &[f64]) -> Result<FamilyTails> {
    if family.is_empty() {
        return Err(Error::param("family", "empty family"));
    }
    let rows = map_indexed(family.len(), |m| -> Result<(Vec<f64>, Vec<f64>)> {
        let s = radii.iter().map(|&r| l2_tail(&family[m], r)).collect::<Result<_>>()?;
        let f = radii.iter().map(|&r| fourier_tail(&family[m], r)).collect::<Result<_>>()?;
        Ok((s, f))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut out = FamilyTails {
        radii: radii.to_vec(),
        spatial: vec![0.0; radii.len()],
        fourier: vec![0.0; radii.len()],
        fourier_argmax: vec![0; radii.len()],
    };
    for (m, (s, f)) in rows.iter().enumerate() {
        for i in 0..radii.len() {
            out.spatial[i] = out.spatial[i].max(s[i]);
            if f[i] > out.fourier[i] {
                out.fourier[i] = f[i];
                out.fourier_argmax[i] = m;
            }
        }
    }
    Ok(out)
}

/// Unit-norm Gaussian families on the default window.
pub mod presets {
    use super::*;

    /// `φ(x - t)` for each shift `t`.
    pub fn translated_gaussians(shifts: &[f64]) -> Result<Vec<SampledSignal>> {
        shifts
            .iter()
            .map(|&t| SampledSignal::on_default_window(move |x| Complex64::new(gaussian(x - t), 0.0)))
            .collect()
    }

    /// `e^{2πikx} φ(x)` for `k = 0..=kmax`.
    pub fn modulated_gaussians(kmax: usize) -> Result<Vec<SampledSignal>> {
        (0..=kmax)
            .map(|k| {
                SampledSignal::on_default_window(move |x| {
                    Complex64::from_polar(gaussian(x), 2.0 * PI * k as f64 * x)
                })
            })
            .collect()
    }

    /// `sinc(x/4)^4` with `sinc t = sin(πt)/(πt)`; its spectrum is a cubic
    /// B-spline supported in `[-1/2, 1/2]`. Sampled on `[-64, 64)`.
    pub fn sinc_kernel() -> Result<SampledSignal> {
        SampledSignal::from_fn(-64.0, 64.0, 8192, |x| {
            let t = 0.25 * x;
            let s = if t == 0.0 { 1.0 } else { (PI * t).sin() / (PI * t) };
            Complex64::new(s.powi(4), 0.0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre_on;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn plain_gaussian() -> SampledSignal {
        SampledSignal::on_default_window(|x| c((-PI * x * x).exp())).unwrap()
    }

    // ∫_lo^hi g by composite Gauss-Legendre.
    fn oracle<G: Fn(f64) -> f64>(lo: f64, hi: f64, g: G) -> f64 {
        let panels = 200;
        let w = (hi - lo) / panels as f64;
        (0..panels)
            .flat_map(|p| gauss_legendre_on(16, lo + p as f64 * w, lo + (p + 1) as f64 * w))
            .map(|(x, wt)| wt * g(x))
            .sum()
    }

    #[test]
    fn l2_tail_examples() {
        let g = plain_gaussian();
        let expected = 2.0 * oracle(1.0, 20.0, |x| (-2.0 * PI * x * x).exp());
        assert!((l2_tail(&g, 1.0).unwrap() - expected).abs() < 1e-5);
        assert!((l2_tail(&g, 0.0).unwrap() - g.norm_sq()).abs() < 1e-15);
        let boxed = SampledSignal::on_default_window(|x| c(if x.abs() <= 1.0 { 1.0 } else { 0.0 })).unwrap();
        assert_eq!(l2_tail(&boxed, 2.0).unwrap(), 0.0);
        assert!(matches!(l2_tail(&g, 25.0), Err(Error::Window { .. })));
    }

    #[test]
    fn translation_modulus_examples() {
        let g = plain_gaussian();
        let h = g.spacing();
        assert_eq!(translation_modulus(&g, 0.0).unwrap(), 0.0);
        let big = translation_modulus(&g, 1024.0 * h).unwrap();
        let small = translation_modulus(&g, 1.0 * h).unwrap();
        assert!(big <= 4.0 * g.norm_sq());
        // 10 h vs h: quadratic smallness
        let ten = translation_modulus(&g, 10.0 * h).unwrap();
        assert!(ten >= 50.0 * small, "{ten} vs {small}");
        assert!(translation_modulus(&g, 0.5 * h).is_err());
        // a shift past the whole window gives 2‖f‖^2
        let far = translation_modulus(&g, 8192.0 * h).unwrap();
        assert!((far - 2.0 * g.norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn fourier_tail_examples() {
        let g = plain_gaussian();
        assert!((fourier_tail(&g, 1.0).unwrap() - l2_tail(&g, 1.0).unwrap()).abs() < 1e-5);
        let m = SampledSignal::on_default_window(|x| {
            Complex64::from_polar((-PI * x * x).exp(), 2.0 * PI * 20.0 * x)
        })
        .unwrap();
        assert!(fourier_tail(&m, 10.0).unwrap() >= 0.99 * m.norm_sq());
        let s = presets::sinc_kernel().unwrap();
        assert!(fourier_tail(&s, 0.6).unwrap() <= 1e-8);
        assert!(fourier_tail(&g, 1e6).is_err());
    }

    #[test]
    fn plancherel() {
        let s = SampledSignal::from_fn(-3.0, 5.0, 1000, |x| Complex64::new(x.sin(), (2.0 * x).cos() * 0.3))
            .unwrap();
        assert!((spectral_mass(&s).unwrap() - s.norm_sq()).abs() <= 1e-10 * s.norm_sq());
    }

    fn default_axes() -> (Axis, Axis) {
        (Axis::symmetric(6.0, 0.25).unwrap(), Axis::symmetric(6.0, 0.25).unwrap())
    }

    fn normalized_gaussian() -> SampledSignal {
        SampledSignal::on_default_window(|x| c(gaussian(x))).unwrap()
    }

    #[test]
    fn stft_of_gaussian() {
        let (a, b) = default_axes();
        let f = normalized_gaussian();
        let field = stft_field(&f, &StftWindow::Gaussian, a, b).unwrap();
        for i in (0..a.n).step_by(5) {
            for j in (0..b.n).step_by(5) {
                let (x, y) = (a.point(i), b.point(j));
                let expected = (-PI * (x * x + y * y)).exp();
                assert!((field.value(i, j).norm_sqr() - expected).abs() < 1e-6);
            }
        }
        assert!((field.total_mass() - f.norm_sq()).abs() < 1e-6);
        assert!(stft_tail(&field, 0.0).unwrap() - field.total_mass() < 1e-15);
        let box_mass = oracle(-2.0, 2.0, |x| (-PI * x * x).exp()).powi(2);
        assert!((stft_tail(&field, 2.0).unwrap() - (1.0 - box_mass)).abs() < 1e-4);
        assert!(stft_tail(&field, 7.0).is_err());
        let zero = SampledSignal::on_default_window(|_| c(0.0)).unwrap();
        let z = stft_field(&zero, &StftWindow::Gaussian, a, b).unwrap();
        assert!(z.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn stft_time_shift_covariance() {
        let (a, b) = default_axes();
        let f = normalized_gaussian();
        let g = SampledSignal::on_default_window(|x| {
            Complex64::new(gaussian(x - 1.25), 0.0) * Complex64::from_polar(1.0, 0.7 * x)
        })
        .unwrap();
        let f = SampledSignal::new(
            f.samples().iter().enumerate().map(|(k, v)| v * Complex64::from_polar(1.0, 0.7 * f.x(k))).collect(),
            f.spacing(),
            f.origin(),
        )
        .unwrap();
        let ff = stft_field(&f, &StftWindow::Gaussian, a, b).unwrap();
        let gf = stft_field(&g, &StftWindow::Gaussian, a, b).unwrap();
        for i in 0..a.n - 5 {
            for j in 0..b.n {
                assert!((gf.value(i + 5, j).norm() - ff.value(i, j).norm()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sampled_window_is_normalized() {
        let (a, b) = (Axis::symmetric(3.0, 0.5).unwrap(), Axis::symmetric(3.0, 0.5).unwrap());
        let w = SampledSignal::from_fn(-6.0, 6.0, 4096, |x| c(3.0 * gaussian(x))).unwrap();
        let f = normalized_gaussian();
        let sampled = stft_field(&f, &StftWindow::Sampled(w), a, b).unwrap();
        let exact = stft_field(&f, &StftWindow::Gaussian, a, b).unwrap();
        assert_eq!(sampled.warnings.len(), 1);
        for (x, y) in sampled.values.iter().zip(&exact.values) {
            assert!((x - y).norm() < 1e-4);
        }
    }

    #[test]
    fn modulated_family_escapes_any_box() {
        let family = presets::modulated_gaussians(20).unwrap();
        let a = Axis::symmetric(6.0, 0.25).unwrap();
        let b = Axis::symmetric(26.0, 0.25).unwrap();
        let tails: Vec<f64> = [0, 20]
            .iter()
            .map(|&k| stft_tail(&stft_field(&family[k], &StftWindow::Gaussian, a, b).unwrap(), 5.0).unwrap())
            .collect();
        assert!(tails[0] < 1e-6);
        assert!(tails[1] >= 0.9);
    }

    #[test]
    fn pw_tail_examples() {
        let s = presets::sinc_kernel().unwrap();
        let t20 = pw_tail(&s, 0.5, 20.0).unwrap();
        let t40 = pw_tail(&s, 0.5, 40.0).unwrap();
        assert!(t20 <= 0.04 * s.norm_sq() && t40 < t20);
        let far = SampledSignal::from_fn(-64.0, 64.0, 8192, |x| {
            let t = 0.25 * (x - 50.0);
            let v = if t == 0.0 { 1.0 } else { (PI * t).sin() / (PI * t) };
            c(v.powi(4))
        })
        .unwrap();
        assert!(pw_tail(&far, 0.5, 5.0).unwrap() > 0.99 * far.norm_sq());
        let g = normalized_gaussian();
        assert!(matches!(pw_tail(&g, 0.5, 5.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn family_dichotomy() {
        let shifts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let tr = family_tails(&presets::translated_gaussians(&shifts).unwrap(), &[10.0]).unwrap();
        assert!(tr.spatial[0] < 1e-6 && tr.fourier[0] < 1e-6);
        let md = family_tails(&presets::modulated_gaussians(20).unwrap(), &[10.0]).unwrap();
        assert!(md.fourier[0] > 0.9);
        assert!(md.fourier_argmax[0] >= 11);
        assert!(family_tails(&[], &[1.0]).is_err());
    }
}
