//! Tensor-product quadrature grids on disks, annuli, intervals, boxes and
//! the unit circle.
//!
//! Planar nodes are stored as complex numbers; interval nodes are stored
//! on the real axis. The radial factor of a polar grid is Gauss-Legendre
//! on `[r0, r1]` with the Jacobian of the tagged measure folded into the
//! weights, and the angular factor is the equispaced rule.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{GaussJacobi, GaussLegendre};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::par::{map_indexed, pairwise_sum, pairwise_sum_complex};
use crate::error::{Error, Result};

/// Reference measure integrated by a grid's weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Area measure normalized so the unit disk has mass 1.
    NormalizedArea,
    /// Plain Lebesgue measure (area in the plane, length on an interval).
    Lebesgue,
    /// Arclength on the unit circle normalized to total mass 1.
    Arclength,
    /// `dv(z) / (1 - |z|^2)^2`, the invariant measure of the unit disk.
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Disk { center: Complex64, radius: f64 },
    Annulus { center: Complex64, inner: f64, outer: f64 },
    Interval { a: f64, b: f64 },
    PlaneBox { half_width: f64 },
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    domain: Domain,
    measure: Measure,
    id: String,
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let degree = NonZeroUsize::new(n).expect("caller checked n >= 1");
    GaussLegendre::new(degree)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (x, w))
        .collect()
}

/// Gauss-Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Gauss-Jacobi rule for `∫_a^b g(x) (b - x)^alpha dx`, `alpha > -1`.
pub fn gauss_jacobi_on(n: usize, a: f64, b: f64, alpha: f64) -> Result<Vec<(f64, f64)>> {
    let degree = NonZeroUsize::new(n).ok_or_else(|| Error::param("n", "need at least one node"))?;
    let exponent = alpha
        .try_into()
        .map_err(|_| Error::param("alpha", format!("{alpha} is not finite and above -1")))?;
    let rule = GaussJacobi::new(degree, exponent, 0.0.try_into().expect("0 > -1"));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let scale = half.powf(alpha + 1.0);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, scale * w))
        .collect())
}

fn radial_density(measure: Measure, r: f64) -> Result<f64> {
    // Weight per unit radius and per unit of normalized angle (dθ / 2π).
    Ok(match measure {
        Measure::NormalizedArea => 2.0 * r,
        Measure::Lebesgue => 2.0 * PI * r,
        Measure::Hyperbolic => {
            let s = 1.0 - r * r;
            2.0 * r / (s * s)
        }
        Measure::Arclength => {
            return Err(Error::param(
                "measure",
                "arclength is only defined on the circle grid",
            ))
        }
    })
}

fn check_polar_sizes(n_radial: usize, n_angular: usize) -> Result<()> {
    if n_radial < 2 {
        return Err(Error::param("n_radial", format!("{n_radial} < 2")));
    }
    if n_angular < 4 {
        return Err(Error::param("n_angular", format!("{n_angular} < 4")));
    }
    Ok(())
}

impl QuadratureGrid {
    /// Polar tensor grid on the disk `{|z| <= radius}` centered at 0.
    pub fn disk(n_radial: usize, n_angular: usize, radius: f64, measure: Measure) -> Result<Self> {
        Self::annulus(n_radial, n_angular, 0.0, radius, measure).map(|mut g| {
            g.domain = Domain::Disk {
                center: Complex64::new(0.0, 0.0),
                radius,
            };
            g.id = format!("disk(r={radius},{n_radial}x{n_angular},{measure:?})");
            g
        })
    }

    /// Polar tensor grid on `{inner <= |z| <= outer}`.
    pub fn annulus(
        n_radial: usize,
        n_angular: usize,
        inner: f64,
        outer: f64,
        measure: Measure,
    ) -> Result<Self> {
        check_polar_sizes(n_radial, n_angular)?;
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::param(
                "radius",
                format!("need 0 <= inner < outer, got [{inner}, {outer}]"),
            ));
        }
        if measure != Measure::Lebesgue && outer > 1.0 {
            return Err(Error::param(
                "radius",
                format!("{outer} exceeds the unit disk"),
            ));
        }
        if measure == Measure::Hyperbolic && outer >= 1.0 {
            return Err(Error::DivergentMeasure);
        }
        let radial = gauss_legendre_on(n_radial, inner, outer);
        let mut nodes = Vec::with_capacity(n_radial * n_angular);
        let mut weights = Vec::with_capacity(n_radial * n_angular);
        let dtheta = 2.0 * PI / n_angular as f64;
        for &(r, w) in &radial {
            let wr = w * radial_density(measure, r)? / n_angular as f64;
            for k in 0..n_angular {
                nodes.push(Complex64::from_polar(r, dtheta * k as f64));
                weights.push(wr);
            }
        }
        Ok(Self {
            nodes,
            weights,
            domain: Domain::Annulus {
                center: Complex64::new(0.0, 0.0),
                inner,
                outer,
            },
            measure,
            id: format!("annulus({inner},{outer},{n_radial}x{n_angular},{measure:?})"),
        })
    }

    /// Polar grid on the disk of the given center and radius integrating
    /// area measure (normalized or Lebesgue). Used for off-center regions.
    pub fn disk_centered(
        n_radial: usize,
        n_angular: usize,
        center: Complex64,
        radius: f64,
        measure: Measure,
    ) -> Result<Self> {
        Self::annulus_centered(n_radial, n_angular, center, 0.0, radius, measure).map(|mut g| {
            g.domain = Domain::Disk { center, radius };
            g
        })
    }

    pub fn annulus_centered(
        n_radial: usize,
        n_angular: usize,
        center: Complex64,
        inner: f64,
        outer: f64,
        measure: Measure,
    ) -> Result<Self> {
        if !matches!(measure, Measure::NormalizedArea | Measure::Lebesgue) {
            return Err(Error::param(
                "measure",
                "off-center grids support area measures only",
            ));
        }
        check_polar_sizes(n_radial, n_angular)?;
        if !(inner >= 0.0 && outer > inner) {
            return Err(Error::param(
                "radius",
                format!("need 0 <= inner < outer, got [{inner}, {outer}]"),
            ));
        }
        let radial = gauss_legendre_on(n_radial, inner, outer);
        let dtheta = 2.0 * PI / n_angular as f64;
        let mut nodes = Vec::with_capacity(n_radial * n_angular);
        let mut weights = Vec::with_capacity(n_radial * n_angular);
        for &(r, w) in &radial {
            let wr = w * radial_density(measure, r)? / n_angular as f64;
            for k in 0..n_angular {
                nodes.push(center + Complex64::from_polar(r, dtheta * k as f64));
                weights.push(wr);
            }
        }
        Ok(Self {
            nodes,
            weights,
            domain: Domain::Annulus {
                center,
                inner,
                outer,
            },
            measure,
            id: format!(
                "annulus(c={},{inner},{outer},{n_radial}x{n_angular},{measure:?})",
                center
            ),
        })
    }

    /// `n` equispaced points on the unit circle with weight `1/n` each.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::param("n", format!("{n} < 4")));
        }
        let dtheta = 2.0 * PI / n as f64;
        Ok(Self {
            nodes: (0..n)
                .map(|k| Complex64::from_polar(1.0, dtheta * k as f64))
                .collect(),
            weights: vec![1.0 / n as f64; n],
            domain: Domain::Circle,
            measure: Measure::Arclength,
            id: format!("circle({n})"),
        })
    }

    /// Gauss-Legendre rule on `[a, b]` for Lebesgue measure.
    pub fn interval(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n", format!("{n} < 2")));
        }
        if !(b > a) {
            return Err(Error::param("interval", format!("[{a}, {b}] is empty")));
        }
        let (nodes, weights) = gauss_legendre_on(n, a, b)
            .into_iter()
            .map(|(x, w)| (Complex64::new(x, 0.0), w))
            .unzip();
        Ok(Self {
            nodes,
            weights,
            domain: Domain::Interval { a, b },
            measure: Measure::Lebesgue,
            id: format!("interval([{a},{b}],{n})"),
        })
    }

    /// Uniform lattice `a + k h`, `k = 0..n`, with `h = (b - a) / n` and
    /// weight `h`. Exact for band-limited integrands sampled above Nyquist.
    pub fn lattice(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n", format!("{n} < 2")));
        }
        if !(b > a) {
            return Err(Error::param("interval", format!("[{a}, {b}] is empty")));
        }
        let h = (b - a) / n as f64;
        Ok(Self {
            nodes: (0..n).map(|k| Complex64::new(a + h * k as f64, 0.0)).collect(),
            weights: vec![h; n],
            domain: Domain::Interval { a, b },
            measure: Measure::Lebesgue,
            id: format!("lattice([{a},{b}],{n})"),
        })
    }

    /// Grid from explicit nodes and weights (composite rules).
    pub fn from_parts(
        nodes: Vec<Complex64>,
        weights: Vec<f64>,
        domain: Domain,
        measure: Measure,
        id: impl Into<String>,
    ) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::param("weights", "length differs from nodes"));
        }
        if nodes.is_empty() {
            return Err(Error::param("nodes", "empty grid"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param("weights", "weights must be finite and nonnegative"));
        }
        Ok(Self {
            nodes,
            weights,
            domain,
            measure,
            id: id.into(),
        })
    }

    /// Tensor Gauss-Legendre grid on the square `[-R, R]^2`.
    pub fn plane_box(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n", format!("{n} < 2")));
        }
        if !(half_width > 0.0) {
            return Err(Error::param("half_width", format!("{half_width} <= 0")));
        }
        let rule = gauss_legendre_on(n, -half_width, half_width);
        let mut nodes = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for &(x, wx) in &rule {
            for &(y, wy) in &rule {
                nodes.push(Complex64::new(x, y));
                weights.push(wx * wy);
            }
        }
        Ok(Self {
            nodes,
            weights,
            domain: Domain::PlaneBox { half_width },
            measure: Measure::Lebesgue,
            id: format!("box({half_width},{n}x{n})"),
        })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    /// Short identifier recorded in reports.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Total mass of the tagged domain under the tagged measure.
    pub fn reference_mass(&self) -> f64 {
        let area = |r0: f64, r1: f64| match self.measure {
            Measure::NormalizedArea => r1 * r1 - r0 * r0,
            Measure::Lebesgue => PI * (r1 * r1 - r0 * r0),
            Measure::Hyperbolic => r1 * r1 / (1.0 - r1 * r1) - r0 * r0 / (1.0 - r0 * r0),
            Measure::Arclength => f64::NAN,
        };
        match self.domain {
            Domain::Disk { radius, .. } => area(0.0, radius),
            Domain::Annulus { inner, outer, .. } => area(inner, outer),
            Domain::Interval { a, b } => b - a,
            Domain::PlaneBox { half_width } => 4.0 * half_width * half_width,
            Domain::Circle => 1.0,
        }
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// `sum_i w_i f(z_i)`. Fails on the first non-finite field value.
    pub fn integrate<F>(&self, field: F) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64 + Sync + Send,
    {
        let terms = map_indexed(self.len(), |i| {
            let z = self.nodes[i];
            let v = field(z);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v * self.weights[i])
            } else {
                Err(Error::NonFinite { node: z, value: v })
            }
        });
        let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum_complex(&terms))
    }

    /// Real-valued variant of [`integrate`](Self::integrate).
    pub fn integrate_real<F>(&self, field: F) -> Result<f64>
    where
        F: Fn(Complex64) -> f64 + Sync + Send,
    {
        let terms = map_indexed(self.len(), |i| {
            let z = self.nodes[i];
            let v = field(z);
            if v.is_finite() {
                Ok(v * self.weights[i])
            } else {
                Err(Error::NonFinite {
                    node: z,
                    value: Complex64::new(v, 0.0),
                })
            }
        });
        let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&terms))
    }

    /// Evaluates a field at every node, in node order.
    pub fn sample<T, F>(&self, field: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Complex64) -> T + Sync + Send,
    {
        map_indexed(self.len(), |i| field(self.nodes[i]))
    }
}

/// Grid sizes for polar grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridResolution {
    pub n_radial: usize,
    pub n_angular: usize,
}

impl GridResolution {
    pub const DEFAULT: GridResolution = GridResolution {
        n_radial: 256,
        n_angular: 512,
    };

    pub fn new(n_radial: usize, n_angular: usize) -> Self {
        Self {
            n_radial,
            n_angular,
        }
    }
}

impl Default for GridResolution {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jacobi_handles_endpoint_singularity() {
        // ∫_0^1 (1 - x)^{-1/2} dx = 2, ∫_0^1 x (1 - x)^{-1/2} dx = 4/3
        let rule = gauss_jacobi_on(8, 0.0, 1.0, -0.5).unwrap();
        let s0: f64 = rule.iter().map(|p| p.1).sum();
        let s1: f64 = rule.iter().map(|p| p.0 * p.1).sum();
        assert!((s0 - 2.0).abs() < 1e-13);
        assert!((s1 - 4.0 / 3.0).abs() < 1e-13);
        assert!(gauss_jacobi_on(8, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn disk_weights_sum_to_normalized_area() {
        let g = QuadratureGrid::disk(64, 128, 1.0, Measure::NormalizedArea).unwrap();
        assert_abs_diff_eq!(g.total_weight(), 1.0, epsilon = 1e-12);
        let g = QuadratureGrid::disk(64, 128, 0.5, Measure::NormalizedArea).unwrap();
        assert_abs_diff_eq!(g.total_weight(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn hyperbolic_disk_mass() {
        let g = QuadratureGrid::disk(64, 128, 0.9, Measure::Hyperbolic).unwrap();
        // closed form R^2 / (1 - R^2)
        assert_abs_diff_eq!(g.total_weight(), 0.81 / 0.19, epsilon = 1e-6);
        assert_abs_diff_eq!(g.total_weight(), g.reference_mass(), epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_sizes_and_divergent_measure() {
        assert!(matches!(
            QuadratureGrid::disk(1, 128, 1.0, Measure::NormalizedArea),
            Err(Error::Parameter { .. })
        ));
        assert!(matches!(
            QuadratureGrid::disk(8, 3, 1.0, Measure::NormalizedArea),
            Err(Error::Parameter { .. })
        ));
        assert_eq!(
            QuadratureGrid::disk(8, 8, 1.0, Measure::Hyperbolic),
            Err(Error::DivergentMeasure)
        );
        assert!(QuadratureGrid::circle(3).is_err());
    }

    #[test]
    fn circle_rules() {
        let g = QuadratureGrid::circle(128).unwrap();
        assert_eq!(g.integrate(|_| Complex64::new(1.0, 0.0)).unwrap().re, 1.0);
        assert!(g.integrate(|w| w).unwrap().norm() < 1e-15);
        let g = QuadratureGrid::circle(512).unwrap();
        let v = g
            .integrate(|w| Complex64::new((1.0 - 0.5 * w.conj()).norm_sqr().recip(), 0.0))
            .unwrap();
        // Poisson kernel at a = 0.5: 1 / (1 - |a|^2)
        assert_abs_diff_eq!(v.re, 4.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn disk_moments() {
        let g = QuadratureGrid::disk(64, 128, 1.0, Measure::NormalizedArea).unwrap();
        let v = g.integrate(|z| Complex64::new(z.norm_sqr(), 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-12);
        assert!(g.integrate(|z| z).unwrap().norm() < 1e-14);
    }

    #[test]
    fn non_finite_field_reports_node() {
        let g = QuadratureGrid::disk(4, 8, 1.0, Measure::NormalizedArea).unwrap();
        let err = g
            .integrate(|z| if z.re > 0.5 { Complex64::new(f64::NAN, 0.0) } else { z })
            .unwrap_err();
        match err {
            Error::NonFinite { node, .. } => assert!(node.re > 0.5),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn centered_disk_area() {
        let g = QuadratureGrid::disk_centered(
            16,
            32,
            Complex64::new(0.3, -0.2),
            0.4,
            Measure::NormalizedArea,
        )
        .unwrap();
        assert_abs_diff_eq!(g.total_weight(), 0.16, epsilon = 1e-13);
        let c = g.integrate(|z| z).unwrap() / g.total_weight();
        assert_abs_diff_eq!(c.re, 0.3, epsilon = 1e-13);
        assert_abs_diff_eq!(c.im, -0.2, epsilon = 1e-13);
    }

    #[test]
    fn lattice_and_box_mass() {
        assert_abs_diff_eq!(
            QuadratureGrid::lattice(100, -2.0, 3.0).unwrap().total_weight(),
            5.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            QuadratureGrid::plane_box(20, 1.5).unwrap().total_weight(),
            9.0,
            epsilon = 1e-12
        );
    }
}
