//! Finite sections of Toeplitz and little Hankel operators, Berezin
//! transforms, off-diagonal localization integrals, singular-value tails
//! and VMOA moduli, assembled into compactness reports.
//!
//! Toeplitz sections act on the Bergman space of the disk in the basis
//! `e_j = √(j+1) z^j`; Hankel sections act on the Hardy space in the basis
//! `ζ^j`.

mod hankel;
mod localization;
mod report;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::par::{map_indexed, pairwise_sum_complex};
use crate::numerics::{gauss_legendre_on, singular_values, DenseComplexMatrix, GridResolution, Measure, QuadratureGrid};
use crate::spaces::geometry::mobius_unchecked;
use crate::spaces::SpaceSpec;

pub use hankel::{hankel_matrix, hankel_oracle, vmo_modulus, BoundaryGrid};
pub use localization::{localization_integrals, weak_berezin, LocalizationValues};
pub use report::{
    compactness_report, BerezinSource, DiagnosticReport, LocalizationSample, OperatorKind,
    ReportParams, Verdict,
};

/// Largest supported section degree.
pub const MAX_DEGREE: usize = 256;

type Field = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A symbol: a function on the disk (Toeplitz) or the circle (Hankel),
/// optionally with its Taylor/Fourier coefficients `ĝ(k)`, `k >= 0`.
#[derive(Clone)]
pub struct SymbolField {
    label: String,
    field: Field,
    fourier: Option<Vec<Complex64>>,
}

impl fmt::Debug for SymbolField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolField")
            .field("label", &self.label)
            .field("fourier", &self.fourier)
            .finish()
    }
}

impl SymbolField {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            field: Arc::new(f),
            fourier: None,
        }
    }

    pub fn real<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, move |z| Complex64::new(f(z), 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("{c}"), move |_| c)
    }

    /// `g(w) = Σ_k ĝ(k) w^k`.
    pub fn from_fourier(coeffs: Vec<Complex64>) -> Self {
        let c = coeffs.clone();
        let mut s = Self::new("fourier", move |w| crate::spaces::horner(&c, w));
        s.fourier = Some(coeffs);
        s
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn fourier(&self) -> Option<&[Complex64]> {
        self.fourier.as_deref()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.field)(z)
    }

    /// `g + c`.
    pub fn shifted(&self, c: Complex64) -> Self {
        let f = self.field.clone();
        let fourier = self.fourier.clone().map(|mut v| {
            if v.is_empty() {
                v.push(c);
            } else {
                v[0] += c;
            }
            v
        });
        Self {
            label: format!("{} + {c}", self.label),
            field: Arc::new(move |z| f(z) + c),
            fourier,
        }
    }

    /// `w ↦ g(e^{iθ} w)`.
    pub fn rotated(&self, theta: f64) -> Self {
        let f = self.field.clone();
        let rot = Complex64::from_polar(1.0, theta);
        let fourier = self.fourier.clone().map(|v| {
            v.iter()
                .enumerate()
                .map(|(k, c)| c * rot.powu(k as u32))
                .collect()
        });
        Self {
            label: format!("{} rotated by {theta}", self.label),
            field: Arc::new(move |z| f(rot * z)),
            fourier,
        }
    }
}

/// A finite section `(<T e_j, e_i>)_{i,j <= deg}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedOperator {
    matrix: DenseComplexMatrix,
    space: SpaceSpec,
    deg: usize,
    grid_id: String,
    label: String,
}

impl TruncatedOperator {
    pub fn from_matrix(
        space: SpaceSpec,
        matrix: DenseComplexMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rows() == 0 {
            return Err(Error::param("matrix", "need a nonempty square matrix"));
        }
        matrix.check_finite()?;
        Ok(Self {
            deg: matrix.rows() - 1,
            matrix,
            space,
            grid_id: "exact".into(),
            label: label.into(),
        })
    }

    pub fn identity(deg: usize) -> Self {
        Self::from_matrix(SpaceSpec::bergman(), DenseComplexMatrix::identity(deg + 1), "identity")
            .expect("identity is finite")
    }

    pub fn zero(deg: usize) -> Self {
        Self::from_matrix(
            SpaceSpec::bergman(),
            DenseComplexMatrix::zeros(deg + 1, deg + 1),
            "zero",
        )
        .expect("zero is finite")
    }

    pub fn matrix(&self) -> &DenseComplexMatrix {
        &self.matrix
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn grid_id(&self) -> &str {
        &self.grid_id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            label: format!("({})*", self.label),
            ..self.clone()
        }
    }

    /// Section of the product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.deg != other.deg || self.space != other.space {
            return Err(Error::param("operator", "sections of different spaces or degrees"));
        }
        Ok(Self {
            matrix: self.matrix.mul(&other.matrix)?,
            space: self.space,
            deg: self.deg,
            grid_id: join_ids(&self.grid_id, &other.grid_id),
            label: format!("({})({})", self.label, other.label),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.deg != other.deg || self.space != other.space {
            return Err(Error::param("operator", "sections of different spaces or degrees"));
        }
        let entries = self
            .matrix
            .entries()
            .iter()
            .zip(other.matrix.entries())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            matrix: DenseComplexMatrix::from_row_major(self.deg + 1, self.deg + 1, entries)?,
            space: self.space,
            deg: self.deg,
            grid_id: join_ids(&self.grid_id, &other.grid_id),
            label: format!("{} + {}", self.label, other.label),
        })
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let entries = self.matrix.entries().iter().map(|a| a * c).collect();
        Self {
            matrix: DenseComplexMatrix::from_row_major(self.deg + 1, self.deg + 1, entries)
                .expect("same shape"),
            label: format!("{c}·{}", self.label),
            ..self.clone()
        }
    }
}

fn join_ids(a: &str, b: &str) -> String {
    if a == b {
        a.to_string()
    } else {
        format!("{a}|{b}")
    }
}

/// `<u e_j, e_i>` over `dv`, `i, j <= deg`.
///
/// Radial Gauss-Legendre times the equispaced angular rule: each radius
/// contributes the angular Fourier coefficients of `u`, so the rule is exact
/// for symbols polynomial in `(z, z̄)` of total degree below
/// `min(2 n_radial - 2 deg - 1, n_angular - 2 deg)`.
pub fn toeplitz_matrix(
    u: &SymbolField,
    deg: usize,
    resolution: GridResolution,
) -> Result<TruncatedOperator> {
    if deg > MAX_DEGREE {
        return Err(Error::param("deg", format!("{deg} > {MAX_DEGREE}")));
    }
    let GridResolution { n_radial, n_angular } = resolution;
    if n_angular < 2 * deg + 1 {
        return Err(Error::param(
            "n_angular",
            format!("{n_angular} angles alias frequencies of a degree-{deg} section"),
        ));
    }
    if n_radial < 2 {
        return Err(Error::param("n_radial", format!("{n_radial} < 2")));
    }
    let radial = gauss_legendre_on(n_radial, 0.0, 1.0);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_angular);
    // coefficient rows c_k(d) = (1/N) Σ_m u(r_k e^{iθ_m}) e^{i d θ_m}
    let rows = map_indexed(radial.len(), |k| -> Result<Vec<Complex64>> {
        let r = radial[k].0;
        let mut buf: Vec<Complex64> = (0..n_angular)
            .map(|m| u.eval(Complex64::from_polar(r, 2.0 * PI * m as f64 / n_angular as f64)))
            .collect();
        if let Some(m) = buf.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite {
                node: Complex64::from_polar(r, 2.0 * PI * m as f64 / n_angular as f64),
                value: buf[m],
            });
        }
        fft.process(&mut buf);
        let scale = 1.0 / n_angular as f64;
        Ok((0..=2 * deg)
            .map(|idx| {
                let d = idx as i64 - deg as i64;
                buf[(-d).rem_euclid(n_angular as i64) as usize] * scale
            })
            .collect())
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    // 2 w_k r_k^{i+j+1}
    let powers: Vec<Vec<f64>> = radial
        .iter()
        .map(|&(r, w)| {
            let mut p = Vec::with_capacity(2 * deg + 1);
            let mut acc = 2.0 * w * r;
            for _ in 0..=2 * deg {
                p.push(acc);
                acc *= r;
            }
            p
        })
        .collect();
    let n = deg + 1;
    let matrix = DenseComplexMatrix::from_fn(n, n, |i, j| {
        let d = j + deg - i;
        let terms: Vec<Complex64> = (0..radial.len())
            .map(|k| rows[k][d] * powers[k][i + j])
            .collect();
        pairwise_sum_complex(&terms) * (((i + 1) * (j + 1)) as f64).sqrt()
    });
    matrix.check_finite()?;
    Ok(TruncatedOperator {
        matrix,
        space: SpaceSpec::bergman(),
        deg,
        grid_id: format!("polar_fft(GL{n_radial}x{n_angular})"),
        label: format!("T[{}]", u.label),
    })
}

const BEREZIN_RADIUS_LIMIT: f64 = 0.995;

/// `∫ u |k_z|^2 dv = ∫ u∘φ_z dv`, the second form on a fixed disk grid.
pub fn berezin_symbol(u: &SymbolField, z: Complex64, resolution: GridResolution) -> Result<Complex64> {
    if !(z.norm() <= BEREZIN_RADIUS_LIMIT) {
        return Err(Error::Domain(format!(
            "|z| = {} exceeds {BEREZIN_RADIUS_LIMIT}",
            z.norm()
        )));
    }
    let grid = QuadratureGrid::disk(
        resolution.n_radial,
        resolution.n_angular,
        1.0,
        Measure::NormalizedArea,
    )?;
    grid.integrate(|zeta| u.eval(mobius_unchecked(z, zeta)))
}

/// Berezin transform of a finite section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionBerezin {
    pub value: Complex64,
    /// `1 - Σ_{j <= deg} |e_j(z)|^2 / K(z,z)`: kernel mass the section misses.
    pub truncation_remainder: f64,
    /// `|z| > 1 - 3/deg`.
    pub truncation_warning: bool,
}

/// Coordinates of the section's normalized kernel at `z`: `conj(e_j(z))`
/// scaled to unit norm in the span of `e_0..e_deg`.
pub(crate) fn section_kernel(deg: usize, z: Complex64) -> (Vec<Complex64>, f64) {
    let mut a = Vec::with_capacity(deg + 1);
    let zc = z.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut mass = 0.0;
    for j in 0..=deg {
        let v = pow * ((j + 1) as f64).sqrt();
        mass += v.norm_sqr();
        a.push(v);
        pow *= zc;
    }
    let norm = mass.sqrt();
    for v in &mut a {
        *v /= norm;
    }
    let full = 1.0 / (1.0 - z.norm_sqr()).powi(2);
    (a, (1.0 - mass / full).max(0.0))
}

/// `<T k_z, k_z>` with `k_z` the normalized kernel of the section's span.
pub fn berezin_operator(t: &TruncatedOperator, z: Complex64) -> Result<SectionBerezin> {
    if !(z.norm_sqr() < 1.0) {
        return Err(Error::Domain(format!("{z} is not in the open unit disk")));
    }
    let (a, remainder) = section_kernel(t.deg, z);
    let ta = t.matrix.apply(&a);
    let terms: Vec<Complex64> = ta.iter().zip(&a).map(|(x, y)| x * y.conj()).collect();
    let deg = t.deg.max(1) as f64;
    Ok(SectionBerezin {
        value: pairwise_sum_complex(&terms),
        truncation_remainder: remainder,
        truncation_warning: z.norm() > 1.0 - 3.0 / deg,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub radius: f64,
    /// `max_θ |B(r e^{iθ})|` over the sampled angles.
    pub max_abs: f64,
    pub min_abs: f64,
}

pub const PROFILE_ANGLES: usize = 64;

/// Per-radius extremes of `|B|` over 64 equispaced angles.
pub fn berezin_boundary_profile(
    source: &BerezinSource,
    radii: &[f64],
    resolution: GridResolution,
) -> Result<Vec<ProfilePoint>> {
    if radii.is_empty() {
        return Err(Error::param("radii", "no radii"));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("radii", "radii must be ascending in (0, 1)"));
    }
    let values = map_indexed(radii.len() * PROFILE_ANGLES, |k| {
        let (ri, ai) = (k / PROFILE_ANGLES, k % PROFILE_ANGLES);
        let z = Complex64::from_polar(radii[ri], 2.0 * PI * ai as f64 / PROFILE_ANGLES as f64);
        match source {
            BerezinSource::Symbol(u) => berezin_symbol(u, z, resolution).map(|v| v.norm()),
            BerezinSource::Section(t) => berezin_operator(t, z).map(|v| v.value.norm()),
        }
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(radii
        .iter()
        .enumerate()
        .map(|(i, &radius)| {
            let row = &values[i * PROFILE_ANGLES..(i + 1) * PROFILE_ANGLES];
            ProfilePoint {
                radius,
                max_abs: row.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                min_abs: row.iter().cloned().fold(f64::INFINITY, f64::min),
            }
        })
        .collect())
}

/// `σ_k` of the section (0-based, descending).
pub fn essential_surrogate(t: &TruncatedOperator, k: usize) -> Result<f64> {
    if k > t.deg {
        return Err(Error::param("k", format!("{k} > deg = {}", t.deg)));
    }
    Ok(singular_values(&t.matrix)?[k])
}
