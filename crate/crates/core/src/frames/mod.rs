//! Continuous Parseval frames built from normalized reproducing kernels,
//! their tail-mass functionals over exhaustions, and the quadratic form
//! `<T_F f - f, f>` of the frame localization operators.
//!
//! Frame coefficients use the reproducing identity
//! `<f, k_x^{(p')}> = f(x) K(x,x)^{-1/p}`, and index-space integrals are
//! written against a finite reference measure times the frame density
//! `dμ/dν`, so quadrature never touches an infinite-measure grid.

mod capacity;
mod exhaustion;
mod localization;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::par::map_indexed;
use crate::numerics::{gauss_legendre_on, Domain, GridResolution, Measure, QuadratureGrid};
use crate::spaces::{space_norm, Basis, FunctionRep, SpaceKind, SpaceSpec};

pub use capacity::{umbrella_capacity, CapacityBound, ShellCells};
pub use exhaustion::{Exhaustion, Region, ScheduleKind};
pub use localization::{
    frame_localization_check, LocalizationReport, LocalizationRow, LocalizationWeightSpec,
};

/// Which index space a frame lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDomain {
    /// Unit disk with the invariant measure `dλ` (weighted by `t + 1`).
    Ball,
    /// The plane with `dV_φ`.
    Plane,
    /// The real line with `2a dx`.
    Line,
    /// The unit circle with normalized arclength.
    Circle,
}

/// A continuous Parseval frame of normalized reproducing kernels, with
/// the exponent `p` of the `L^p(X, μ)` frame (`p = 2` is the Hilbert case).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    space: SpaceSpec,
    p: f64,
    resolution: GridResolution,
    /// Radius beyond which the plane is dropped (Fock).
    plane_truncation: f64,
    /// Half-width of the sampled window on the line (Paley-Wiener).
    line_window: f64,
}

/// Outer radius of the disk grid used for `Everything` on the ball.
const BALL_EDGE: f64 = 1.0;

impl FrameSpec {
    pub fn new(space: SpaceSpec) -> Result<Self> {
        space.require_dim1("frames")?;
        if let SpaceKind::BesovSobolev { .. } = space.kind() {
            return Err(Error::param(
                "space",
                "Besov-Sobolev spaces use the derivative criterion, not a kernel frame",
            ));
        }
        Ok(Self {
            space,
            p: 2.0,
            resolution: GridResolution::DEFAULT,
            plane_truncation: 6.0,
            line_window: 200.0,
        })
    }

    pub fn bergman() -> Self {
        Self::new(SpaceSpec::bergman()).expect("valid")
    }

    pub fn fock() -> Self {
        Self::new(SpaceSpec::fock()).expect("valid")
    }

    pub fn hardy_boundary() -> Self {
        Self::new(SpaceSpec::hardy()).expect("valid")
    }

    pub fn paley_wiener(a: f64) -> Result<Self> {
        Self::new(SpaceSpec::paley_wiener(a)?)
    }

    /// `L^p` frame exponent; `p != 2` is available for the Bergman frame
    /// `{k^{(p)}, k^{(p')}}` only.
    pub fn with_p(mut self, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::param("p", format!("need 1 < p < inf, got {p}")));
        }
        if p != 2.0 && !matches!(self.space.kind(), SpaceKind::Bergman { .. }) {
            return Err(Error::param("p", "p-frames are implemented for Bergman spaces"));
        }
        self.p = p;
        Ok(self)
    }

    pub fn with_resolution(mut self, resolution: GridResolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_plane_truncation(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::param("plane_truncation", format!("{radius} <= 0")));
        }
        self.plane_truncation = radius;
        Ok(self)
    }

    pub fn with_line_window(mut self, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::param("line_window", format!("{half_width} <= 0")));
        }
        self.line_window = half_width;
        Ok(self)
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn resolution(&self) -> GridResolution {
        self.resolution
    }

    pub fn plane_truncation(&self) -> f64 {
        self.plane_truncation
    }

    pub fn index_domain(&self) -> IndexDomain {
        match self.space.kind() {
            SpaceKind::Bergman { .. } => IndexDomain::Ball,
            SpaceKind::Fock { .. } => IndexDomain::Plane,
            SpaceKind::PaleyWiener { .. } => IndexDomain::Line,
            SpaceKind::Hardy => IndexDomain::Circle,
            SpaceKind::BesovSobolev { .. } => unreachable!("rejected in FrameSpec::new"),
        }
    }

    pub fn basis(&self) -> Basis {
        Basis::for_space(&self.space)
    }

    fn check_index_point(&self, x: Complex64) -> Result<()> {
        let ok = match self.index_domain() {
            IndexDomain::Ball => x.norm_sqr() < 1.0,
            IndexDomain::Plane => x.re.is_finite() && x.im.is_finite(),
            IndexDomain::Line => x.im == 0.0 && x.re.is_finite(),
            IndexDomain::Circle => (x.norm() - 1.0).abs() < 1e-12,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{x} is not in the index space of the {} frame",
                self.space.name()
            )))
        }
    }

    /// `K(x, x)^{-1/p}`: the factor turning `f(x)` into `<f, k_x^{(p')}>`.
    fn coefficient_factor(&self, x: Complex64) -> f64 {
        let p = self.p;
        match self.space.kind() {
            SpaceKind::Bergman { t } => {
                let u = 1.0 - x.norm_sqr();
                if p == 2.0 && t == 0.0 {
                    u
                } else {
                    u.powf((2.0 + t) / p)
                }
            }
            SpaceKind::Fock { alpha } => {
                (-((2.0 * alpha / PI).ln() + 2.0 * alpha * x.norm_sqr()) / p).exp()
            }
            SpaceKind::PaleyWiener { a } => (2.0 * a).powf(-1.0 / p),
            SpaceKind::Hardy | SpaceKind::BesovSobolev { .. } => 1.0,
        }
    }

    /// `dμ/dν` against the reference measure of the index grids:
    /// normalized area on the ball, Lebesgue on the plane and line,
    /// normalized arclength on the circle.
    fn density(&self, x: Complex64) -> f64 {
        match self.space.kind() {
            SpaceKind::Bergman { t } => {
                let u = 1.0 - x.norm_sqr();
                (t + 1.0) / (u * u)
            }
            SpaceKind::Fock { alpha } => 2.0 * alpha / PI,
            SpaceKind::PaleyWiener { a } => 2.0 * a,
            SpaceKind::Hardy | SpaceKind::BesovSobolev { .. } => 1.0,
        }
    }

    /// `<f, k_x>` by the reproducing identity (valid for any `f` in the
    /// space, sampled or not).
    fn coefficient_fast(&self, f: &FunctionRep, x: Complex64) -> Complex64 {
        f.eval(x) * self.coefficient_factor(x)
    }

    /// `|<f, k_x>|^p dμ/dν` at `x`.
    fn tail_integrand(&self, f: &FunctionRep, x: Complex64) -> f64 {
        let c = self.coefficient_fast(f, x);
        let m = if self.p == 2.0 {
            c.norm_sqr()
        } else {
            c.norm().powf(self.p)
        };
        m * self.density(x)
    }

    /// Quadrature grid over `X \ region` (reference measure), `None` when
    /// the complement is empty.
    pub fn complement_grid(&self, region: Region) -> Result<Option<QuadratureGrid>> {
        let GridResolution { n_radial, n_angular } = self.resolution;
        Ok(match (self.index_domain(), region) {
            (_, Region::Everything) => None,
            (IndexDomain::Ball, Region::Radius(r)) if r >= BALL_EDGE => None,
            (IndexDomain::Ball, Region::Radius(r)) => Some(QuadratureGrid::annulus(
                n_radial,
                n_angular,
                r,
                BALL_EDGE,
                Measure::NormalizedArea,
            )?),
            (IndexDomain::Plane, Region::Radius(r)) if r >= self.plane_truncation => None,
            (IndexDomain::Plane, Region::Radius(r)) => Some(QuadratureGrid::annulus(
                n_radial,
                n_angular,
                r,
                self.plane_truncation,
                Measure::Lebesgue,
            )?),
            (IndexDomain::Plane, Region::Square(s)) => {
                square_complement(n_radial, s, self.plane_truncation)?
            }
            (IndexDomain::Line, Region::Radius(r)) if r >= self.line_window => None,
            (IndexDomain::Line, Region::Radius(r)) => {
                let a = self.pw_band();
                Some(line_panels(&[(-self.line_window, -r), (r, self.line_window)], a)?)
            }
            (IndexDomain::Circle, Region::Radius(theta)) if theta >= PI => None,
            (IndexDomain::Circle, Region::Radius(theta)) => Some(arc_grid(
                n_angular.max(8),
                &[(-PI, -theta), (theta, PI)],
            )?),
            (domain, region) => {
                return Err(Error::param(
                    "region",
                    format!("{region:?} is not a region of the {domain:?} index space"),
                ))
            }
        })
    }

    /// Quadrature grid over a region itself.
    pub fn region_grid(&self, region: Region) -> Result<QuadratureGrid> {
        let GridResolution { n_radial, n_angular } = self.resolution;
        match (self.index_domain(), region) {
            (IndexDomain::Ball, Region::Everything) => {
                QuadratureGrid::disk(n_radial, n_angular, BALL_EDGE, Measure::NormalizedArea)
            }
            (IndexDomain::Ball, Region::Radius(r)) => {
                QuadratureGrid::disk(n_radial, n_angular, r.min(BALL_EDGE), Measure::NormalizedArea)
            }
            (IndexDomain::Plane, Region::Everything) => {
                QuadratureGrid::disk(n_radial, n_angular, self.plane_truncation, Measure::Lebesgue)
            }
            (IndexDomain::Plane, Region::Radius(r)) => QuadratureGrid::disk(
                n_radial,
                n_angular,
                r.min(self.plane_truncation),
                Measure::Lebesgue,
            ),
            (IndexDomain::Plane, Region::Square(s)) => {
                QuadratureGrid::plane_box(n_radial, s.min(self.plane_truncation))
            }
            (IndexDomain::Line, Region::Everything) => {
                line_panels(&[(-self.line_window, self.line_window)], self.pw_band())
            }
            (IndexDomain::Line, Region::Radius(r)) => {
                let r = r.min(self.line_window);
                line_panels(&[(-r, r)], self.pw_band())
            }
            (IndexDomain::Circle, Region::Everything) => QuadratureGrid::circle(n_angular.max(8)),
            (IndexDomain::Circle, Region::Radius(theta)) => {
                let theta = theta.min(PI);
                arc_grid(n_angular.max(8), &[(-theta, theta)])
            }
            (domain, region) => Err(Error::param(
                "region",
                format!("{region:?} is not a region of the {domain:?} index space"),
            )),
        }
    }

    fn pw_band(&self) -> f64 {
        match self.space.kind() {
            SpaceKind::PaleyWiener { a } => a,
            _ => 1.0,
        }
    }
}

/// Gauss-Legendre panels of width `1/(8a)` (four times the Nyquist rate)
/// with 8 nodes each, covering the given intervals.
fn line_panels(intervals: &[(f64, f64)], a: f64) -> Result<QuadratureGrid> {
    let width = 1.0 / (8.0 * a);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for &(lo, hi) in intervals {
        if hi <= lo {
            continue;
        }
        let panels = ((hi - lo) / width).ceil().max(1.0) as usize;
        let h = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a0 = lo + h * k as f64;
            for (x, w) in gauss_legendre_on(8, a0, a0 + h) {
                nodes.push(Complex64::new(x, 0.0));
                weights.push(w);
            }
        }
    }
    let (lo, hi) = (intervals[0].0, intervals[intervals.len() - 1].1);
    QuadratureGrid::from_parts(
        nodes,
        weights,
        Domain::Interval { a: lo, b: hi },
        Measure::Lebesgue,
        format!("line_panels([{lo},{hi}],{})", intervals.len()),
    )
}

fn arc_grid(n: usize, arcs: &[(f64, f64)]) -> Result<QuadratureGrid> {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for &(lo, hi) in arcs {
        if hi <= lo {
            continue;
        }
        for (theta, w) in gauss_legendre_on(n, lo, hi) {
            nodes.push(Complex64::from_polar(1.0, theta));
            weights.push(w / (2.0 * PI));
        }
    }
    QuadratureGrid::from_parts(
        nodes,
        weights,
        Domain::Circle,
        Measure::Arclength,
        format!("arcs({n},{})", arcs.len()),
    )
}

/// `[-T, T]^2 \ [-s, s]^2` as four rectangles.
fn square_complement(n: usize, s: f64, t: f64) -> Result<Option<QuadratureGrid>> {
    if s >= t {
        return Ok(None);
    }
    let rects = [
        ((s, t), (-t, t)),
        ((-t, -s), (-t, t)),
        ((-s, s), (s, t)),
        ((-s, s), (-t, -s)),
    ];
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for ((x0, x1), (y0, y1)) in rects {
        let xs = gauss_legendre_on(n, x0, x1);
        let ys = gauss_legendre_on(n, y0, y1);
        for &(x, wx) in &xs {
            for &(y, wy) in &ys {
                nodes.push(Complex64::new(x, y));
                weights.push(wx * wy);
            }
        }
    }
    QuadratureGrid::from_parts(
        nodes,
        weights,
        Domain::PlaneBox { half_width: t },
        Measure::Lebesgue,
        format!("square_complement(s={s},t={t},{n})"),
    )
    .map(Some)
}

/// `<f, k_x>`: closed form `f(x) K(x,x)^{-1/p}` for coefficient reps,
/// quadrature of `f · conj(k_x)` over the space's own grid for sampled
/// reps (Bergman, Hardy and Fock).
pub fn frame_coeff(frame: &FrameSpec, f: &FunctionRep, x: Complex64) -> Result<Complex64> {
    frame.check_index_point(x)?;
    if f.coeffs().is_some() {
        return Ok(frame.coefficient_fast(f, x));
    }
    let GridResolution { n_radial, n_angular } = frame.resolution;
    let q = frame.p / (frame.p - 1.0);
    match frame.space.kind() {
        SpaceKind::Bergman { t } => {
            let grid = QuadratureGrid::disk(n_radial, n_angular, 1.0, Measure::NormalizedArea)?;
            grid.integrate(|z| {
                let w = if t == 0.0 {
                    1.0
                } else {
                    (t + 1.0) * (1.0 - z.norm_sqr()).powf(t)
                };
                f.eval(z) * crate::spaces::bergman_normalized_disk(z, x, t, q).conj() * w
            })
        }
        SpaceKind::Hardy => Ok(f.eval(x)),
        SpaceKind::Fock { alpha } => {
            let grid = QuadratureGrid::disk(
                n_radial,
                n_angular,
                frame.plane_truncation + x.norm(),
                Measure::Lebesgue,
            )?;
            let norm = ((2.0 * alpha / PI) * (2.0 * alpha * x.norm_sqr()).exp()).powf(1.0 / frame.p);
            grid.integrate(|z| {
                let k = (2.0 * alpha / PI) * (2.0 * alpha * z * x.conj()).exp() / norm;
                f.eval(z) * k.conj() * (-2.0 * alpha * z.norm_sqr()).exp()
            })
        }
        _ => Ok(frame.coefficient_fast(f, x)),
    }
}

/// `∫_{X \ region} |<f, k_x>|^p dμ(x)`.
pub fn tail_mass_region(frame: &FrameSpec, f: &FunctionRep, region: Region) -> Result<f64> {
    match frame.complement_grid(region)? {
        None => Ok(0.0),
        Some(grid) => grid.integrate_real(|x| frame.tail_integrand(f, x)),
    }
}

/// Tail mass outside level `level` of an exhaustion.
pub fn tail_mass(
    frame: &FrameSpec,
    f: &FunctionRep,
    exhaustion: &Exhaustion,
    level: usize,
) -> Result<f64> {
    tail_mass_region(frame, f, exhaustion.region(level)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// `∫_{F} |<f, k_x>|^2 dμ` over the truncated index grid.
    pub integrated: f64,
    /// Mass beyond the truncation: closed form for coefficient reps in the
    /// frame's basis (leading far-field term on the line), quadrature
    /// otherwise.
    pub remainder: f64,
    pub remainder_closed_form: bool,
    pub norm_sq: f64,
    /// `|integrated + remainder - ‖f‖^2|`.
    pub defect: f64,
}

/// Parseval defect of `f`, integrating the index space up to `cutoff`
/// (radius on the ball and plane, half-width on the line, angle on the
/// circle).
pub fn parseval_defect(frame: &FrameSpec, f: &FunctionRep, cutoff: f64) -> Result<ParsevalReport> {
    if frame.p != 2.0 {
        return Err(Error::param("p", "Parseval identity is the p = 2 case"));
    }
    let region = Region::Radius(cutoff);
    let grid = frame.region_grid(region)?;
    let integrated = grid.integrate_real(|x| frame.tail_integrand(f, x))?;
    let basis_coeffs = f.coeffs_in(frame.basis());
    let closed = match (basis_coeffs, frame.space.kind()) {
        (Some(c), SpaceKind::Bergman { t: 0.0 }) => Some(
            c.iter()
                .enumerate()
                .map(|(j, v)| v.norm_sqr() * (1.0 - cutoff.min(1.0).powi(2 * j as i32 + 2)))
                .sum::<f64>(),
        ),
        (Some(c), SpaceKind::Fock { alpha }) => {
            let x = 2.0 * alpha * cutoff * cutoff;
            Some(
                c.iter()
                    .enumerate()
                    .map(|(j, v)| v.norm_sqr() * upper_gamma_regularized(j + 1, x))
                    .sum::<f64>(),
            )
        }
        _ => None,
    };
    let (remainder, closed) = match (closed, basis_coeffs, frame.space.kind()) {
        (Some(v), _, _) => (v, true),
        (None, Some(c), SpaceKind::PaleyWiener { a }) => {
            // far field: f(x) ~ √(2a) sin(2πax) S / (2πax), S = Σ (-1)^k c_k
            let s: Complex64 = c
                .iter()
                .enumerate()
                .map(|(j, v)| if crate::spaces::sinc_shift(j) % 2 == 0 { *v } else { -*v })
                .sum();
            let window = cutoff.max(frame.line_window);
            let far = s.norm_sqr() / (2.0 * a * PI * PI * window);
            (tail_mass_region(frame, f, region)? + far, true)
        }
        _ => (tail_mass_region(frame, f, region)?, false),
    };
    let norm_sq = match basis_coeffs {
        Some(c) => c.iter().map(|v| v.norm_sqr()).sum(),
        None => {
            let grid = norm_grid(frame)?;
            space_norm(&frame.space, f, &grid)?.powi(2)
        }
    };
    Ok(ParsevalReport {
        integrated,
        remainder,
        remainder_closed_form: closed,
        norm_sq,
        defect: (integrated + remainder - norm_sq).abs(),
    })
}

fn norm_grid(frame: &FrameSpec) -> Result<QuadratureGrid> {
    let GridResolution { n_radial, n_angular } = frame.resolution;
    match frame.index_domain() {
        IndexDomain::Ball => QuadratureGrid::disk(n_radial, n_angular, 1.0, Measure::NormalizedArea),
        IndexDomain::Plane => {
            QuadratureGrid::disk(n_radial, n_angular, frame.plane_truncation, Measure::Lebesgue)
        }
        IndexDomain::Circle => QuadratureGrid::circle(n_angular.max(8)),
        IndexDomain::Line => {
            // Nyquist lattice: exact for band-limited functions.
            let a = frame.pw_band();
            let h = 1.0 / (2.0 * a);
            let n = (2.0 * frame.line_window / h).round() as usize;
            QuadratureGrid::lattice(n, -(n as f64) * h / 2.0, n as f64 * h / 2.0)
        }
    }
}

/// `Γ(s, x) / Γ(s)` for integer `s >= 1`: `e^{-x} Σ_{k<s} x^k / k!`.
fn upper_gamma_regularized(s: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..s {
        term *= x / k as f64;
        sum += term;
    }
    (-x).exp() * sum
}

/// Per-level supremum of tail masses over a finite family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProfile {
    /// Schedule parameter for each level (radius, half-width, or δ).
    pub parameters: Vec<f64>,
    /// `q_n = max_f tail(f, n)`.
    pub values: Vec<f64>,
    /// Index of the family member attaining each `q_n`.
    pub argmax: Vec<usize>,
    pub family_size: usize,
    pub grid_id: String,
}

impl TailProfile {
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

/// `q_n = max_{f ∈ family} tail_mass(f, n)` for `n = 1..=depth`.
pub fn family_tail_profile(
    frame: &FrameSpec,
    family: &[FunctionRep],
    exhaustion: &Exhaustion,
    depth: usize,
) -> Result<TailProfile> {
    if family.is_empty() {
        return Err(Error::param("family", "empty family"));
    }
    let exhaustion = exhaustion.truncated(depth)?;
    let grids = (1..=depth)
        .map(|n| frame.complement_grid(exhaustion.region(n)?))
        .collect::<Result<Vec<_>>>()?;
    let cells = map_indexed(depth * family.len(), |k| {
        let (level, member) = (k / family.len(), k % family.len());
        match &grids[level] {
            None => Ok(0.0),
            Some(g) => {
                let f = &family[member];
                let vals = g.nodes().iter().map(|&x| frame.tail_integrand(f, x));
                let terms: Vec<f64> = vals.zip(g.weights()).map(|(v, w)| v * w).collect();
                if let Some(bad) = terms.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        node: g.nodes()[bad],
                        value: Complex64::new(terms[bad], 0.0),
                    });
                }
                Ok(crate::numerics::par::pairwise_sum(&terms))
            }
        }
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(depth);
    let mut argmax = Vec::with_capacity(depth);
    for level in 0..depth {
        let row = &cells[level * family.len()..(level + 1) * family.len()];
        let mut best = (0usize, row[0]);
        for (i, &v) in row.iter().enumerate().skip(1) {
            if v > best.1 {
                best = (i, v);
            }
        }
        argmax.push(best.0);
        values.push(best.1);
    }
    let grid_id = grids
        .iter()
        .flatten()
        .next()
        .map(|g| g.id().to_string())
        .unwrap_or_else(|| "empty".into());
    Ok(TailProfile {
        parameters: exhaustion.sizes().to_vec(),
        values,
        argmax,
        family_size: family.len(),
        grid_id,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TailVerdict {
    /// Some level has `q_n <= eps`; `level` is the first (1-based).
    PrecompactEvidence { level: usize },
    NotDecayed,
}

/// Threshold scan of a tail profile.
pub fn compactness_verdict(profile: &TailProfile, eps: f64) -> Result<TailVerdict> {
    if profile.values.is_empty() {
        return Err(Error::param("profile", "empty profile"));
    }
    if !(eps >= 0.0) {
        return Err(Error::param("eps", format!("{eps} is negative")));
    }
    Ok(match profile.values.iter().position(|&q| q <= eps) {
        Some(i) => TailVerdict::PrecompactEvidence { level: i + 1 },
        None => TailVerdict::NotDecayed,
    })
}

/// `<T_F f - f, f>` with `T_F f = ∫_F <f, k_x> k_x dμ`, assembled in the
/// reference basis: `(T_F f)_i = ∫_F <f, k_x> conj(<e_i, k_x>) dμ`.
/// Requires a coefficient rep in the frame's basis.
pub fn mazur_form_region(frame: &FrameSpec, f: &FunctionRep, region: Region) -> Result<Complex64> {
    if frame.p != 2.0 {
        return Err(Error::param("p", "the localization operator form needs p = 2"));
    }
    let basis = frame.basis();
    let coeffs = f.coeffs_in(basis).ok_or_else(|| {
        Error::param(
            "f",
            "mazur_form needs coefficients in the frame's reference basis",
        )
    })?;
    let grid = frame.region_grid(region)?;
    let support: Vec<usize> = (0..coeffs.len())
        .filter(|&i| coeffs[i] != Complex64::new(0.0, 0.0))
        .collect();
    // T_F f is only paired with f, so components outside supp(c) drop out.
    let components = map_indexed(support.len(), |k| {
        let i = support[k];
        grid.integrate(|x| {
            let fx = frame.coefficient_fast(f, x);
            let ex = basis.eval(i, x) * frame.coefficient_factor(x);
            fx * ex.conj() * frame.density(x)
        })
    });
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, comp) in components.into_iter().enumerate() {
        let i = support[k];
        acc += (comp? - coeffs[i]) * coeffs[i].conj();
    }
    Ok(acc)
}

pub fn mazur_form(
    frame: &FrameSpec,
    f: &FunctionRep,
    exhaustion: &Exhaustion,
    level: usize,
) -> Result<Complex64> {
    mazur_form_region(frame, f, exhaustion.region(level)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small() -> GridResolution {
        GridResolution::new(48, 64)
    }

    #[test]
    fn bergman_coefficients() {
        let frame = FrameSpec::bergman();
        let s = frame.space;
        let e0 = FunctionRep::basis_element(&s, 0);
        let e1 = FunctionRep::basis_element(&s, 1);
        let c = |v: f64| Complex64::new(v, 0.0);
        assert_eq!(frame_coeff(&frame, &e0, c(0.0)).unwrap(), c(1.0));
        assert_eq!(frame_coeff(&frame, &e1, c(0.0)).unwrap(), c(0.0));
        let v = frame_coeff(&frame, &e1, c(0.5)).unwrap();
        assert_abs_diff_eq!(v.re, 0.75 * 2f64.sqrt() * 0.5, epsilon = 1e-15);
        assert!(frame_coeff(&frame, &e1, c(1.0)).is_err());
    }

    #[test]
    fn sampled_coefficients_use_quadrature() {
        let frame = FrameSpec::bergman().with_resolution(small());
        let f = FunctionRep::sampled(|z| 2f64.sqrt() * z);
        let x = Complex64::new(0.3, -0.4);
        let q = frame_coeff(&frame, &f, x).unwrap();
        let exact = (1.0 - x.norm_sqr()) * 2f64.sqrt() * x;
        assert!((q - exact).norm() < 1e-10, "{q} vs {exact}");

        let fock = FrameSpec::fock().with_resolution(GridResolution::new(96, 96));
        let f = FunctionRep::sampled(|z| z * z);
        let x = Complex64::new(0.5, 0.25);
        let q = frame_coeff(&fock, &f, x).unwrap();
        let exact = x * x * (-std::f64::consts::FRAC_PI_2 * x.norm_sqr()).exp();
        assert!((q - exact).norm() < 1e-9, "{q} vs {exact}");
    }

    #[test]
    fn bergman_tails_closed_form() {
        let frame = FrameSpec::bergman().with_resolution(small());
        let s = frame.space;
        let e0 = FunctionRep::basis_element(&s, 0);
        let e5 = FunctionRep::basis_element(&s, 5);
        assert_abs_diff_eq!(
            tail_mass_region(&frame, &e0, Region::Radius(0.5)).unwrap(),
            0.75,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            tail_mass_region(&frame, &e5, Region::Radius(0.9)).unwrap(),
            1.0 - 0.9f64.powi(12),
            epsilon = 1e-12
        );
        assert_eq!(tail_mass_region(&frame, &e5, Region::Everything).unwrap(), 0.0);
        assert!(tail_mass_region(&frame, &e5, Region::Square(0.5)).is_err());
    }

    #[test]
    fn p_frame_tails() {
        // ∫_{|z|>R} |z^j|^p dv = (1 - R^{pj+2}) / (pj/2 + 1)
        let frame = FrameSpec::bergman().with_resolution(small()).with_p(3.0).unwrap();
        let f = FunctionRep::monomial(2);
        let r: f64 = 0.6;
        let expected = (1.0 - r.powf(8.0)) / 4.0;
        assert_abs_diff_eq!(
            tail_mass_region(&frame, &f, Region::Radius(r)).unwrap(),
            expected,
            epsilon = 1e-10
        );
        assert!(FrameSpec::fock().with_p(3.0).is_err());
    }

    #[test]
    fn parseval_defects() {
        let frame = FrameSpec::bergman().with_resolution(small());
        let e3 = FunctionRep::basis_element(&frame.space, 3);
        let r = parseval_defect(&frame, &e3, 0.999).unwrap();
        assert!(r.remainder_closed_form);
        assert!(r.defect <= 1e-6, "{r:?}");
        assert_eq!(parseval_defect(&frame, &FunctionRep::zero(), 0.999).unwrap().defect, 0.0);

        let fock = FrameSpec::fock().with_resolution(GridResolution::new(128, 64));
        let e2 = FunctionRep::basis_element(&fock.space, 2);
        let r = parseval_defect(&fock, &e2, 6.0).unwrap();
        assert!(r.defect <= 1e-8, "{r:?}");

        // sampled rep: quadrature remainder and quadrature norm
        let f = FunctionRep::sampled(|z| 3f64.sqrt() * z * z);
        let r = parseval_defect(&frame, &f, 0.95).unwrap();
        assert!(!r.remainder_closed_form);
        assert!(r.defect <= 1e-8, "{r:?}");
    }

    #[test]
    fn hardy_and_pw_frames() {
        let hardy = FrameSpec::hardy_boundary().with_resolution(GridResolution::new(8, 64));
        let f = FunctionRep::monomial(3);
        let r = parseval_defect(&hardy, &f, PI).unwrap();
        assert!(r.defect < 1e-12, "{r:?}");
        let tail = tail_mass_region(&hardy, &f, Region::Radius(PI / 2.0)).unwrap();
        assert_abs_diff_eq!(tail, 0.5, epsilon = 1e-12);

        let pw = FrameSpec::paley_wiener(0.5).unwrap();
        let e0 = FunctionRep::basis_element(pw.space(), 0);
        let r = parseval_defect(&pw, &e0, 200.0).unwrap();
        // sinc^2 mass beyond |x| = 200 is about 1 / (π^2 · 100)
        assert!(r.remainder > 5e-4 && r.defect < 1e-6, "{r:?}");
    }

    #[test]
    fn fock_square_exhaustion() {
        let fock = FrameSpec::fock().with_resolution(GridResolution::new(96, 64));
        let e0 = FunctionRep::basis_element(fock.space(), 0);
        // e_0 e^{-π|z|^2/2}: mass outside [-s,s]^2 is 1 - erf(√π s)^2
        let s = 0.5;
        let inside = libm::erf(PI.sqrt() * s).powi(2);
        assert_abs_diff_eq!(
            tail_mass_region(&fock, &e0, Region::Square(s)).unwrap(),
            1.0 - inside,
            epsilon = 1e-10
        );
    }

    #[test]
    fn profiles_and_verdicts() {
        let frame = FrameSpec::bergman().with_resolution(small());
        let e0 = FunctionRep::basis_element(&frame.space, 0);
        let p = family_tail_profile(&frame, &[e0], &Exhaustion::ball(8).unwrap(), 8).unwrap();
        for (n, q) in p.values.iter().enumerate() {
            let r = 1.0 - 0.5f64.powi(n as i32 + 1);
            assert_abs_diff_eq!(*q, 1.0 - r * r, epsilon = 1e-12);
        }
        assert!(p.is_nonincreasing(0.0));
        assert!(family_tail_profile(&frame, &[], &Exhaustion::ball(8).unwrap(), 8).is_err());
        let z = family_tail_profile(&frame, &[FunctionRep::zero()], &Exhaustion::ball(3).unwrap(), 3)
            .unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));

        let profile = TailProfile {
            parameters: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            values: vec![0.75, 0.43, 0.23, 0.12, 0.06],
            argmax: vec![0; 5],
            family_size: 1,
            grid_id: "test".into(),
        };
        assert_eq!(
            compactness_verdict(&profile, 0.1).unwrap(),
            TailVerdict::PrecompactEvidence { level: 5 }
        );
        assert_eq!(compactness_verdict(&profile, 0.01).unwrap(), TailVerdict::NotDecayed);
        assert_eq!(compactness_verdict(&profile, 0.0).unwrap(), TailVerdict::NotDecayed);
        assert!(compactness_verdict(&profile, -1.0).is_err());
    }

    #[test]
    fn mazur_examples() {
        let frame = FrameSpec::bergman().with_resolution(small());
        let e0 = FunctionRep::basis_element(&frame.space, 0);
        let v = mazur_form_region(&frame, &e0, Region::Radius(0.5)).unwrap();
        assert_abs_diff_eq!(v.re, -0.75, epsilon = 1e-12);
        assert!(v.im.abs() < 1e-14);
        let v = mazur_form_region(&frame, &e0, Region::Everything).unwrap();
        assert!(v.norm() < 1e-12);
        assert_eq!(
            mazur_form_region(&frame, &FunctionRep::zero().scaled(Complex64::new(0.0, 0.0)), Region::Radius(0.5))
                .map_err(|_| ())
                .unwrap_or(Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        assert!(mazur_form_region(&frame, &FunctionRep::sampled(|z| z), Region::Radius(0.5)).is_err());
    }

    #[test]
    fn upper_gamma() {
        assert_abs_diff_eq!(upper_gamma_regularized(1, 2.0), (-2.0f64).exp(), epsilon = 1e-16);
        assert_abs_diff_eq!(upper_gamma_regularized(3, 0.0), 1.0, epsilon = 1e-16);
    }
}
