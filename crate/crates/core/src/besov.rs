//! Weighted Besov-Sobolev norms and boundary tails on the unit disk.
//!
//! Weights are densities against normalized area measure `dv`, so the
//! constant weight `1` is `1/V(D)` against Lebesgue volume. The tail over
//! `D \ D_δ` uses `D_δ = {|z| < 1 - δ}`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::TailProfile;
use crate::numerics::par::{map_indexed, pairwise_sum};
use crate::numerics::{gauss_legendre_on, Domain, GridResolution, Measure, QuadratureGrid};
use crate::spaces::{FunctionRep, RadialWeight};

#[derive(Clone)]
pub enum BesovWeight {
    Radial(RadialWeight),
    /// Arbitrary positive density `σ(z)` against `dv`.
    Field(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
}

impl fmt::Debug for BesovWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BesovWeight::Radial(w) => write!(f, "Radial({w:?})"),
            BesovWeight::Field(_) => write!(f, "Field(..)"),
        }
    }
}

impl BesovWeight {
    /// Evaluates at `z`, with `u = 1 - |z|^2` passed separately so radial
    /// powers stay accurate next to the boundary.
    fn eval(&self, z: Complex64, u: f64) -> f64 {
        match self {
            BesovWeight::Radial(w) => {
                if w.exponent == 0.0 {
                    w.scale
                } else {
                    w.scale * u.powf(w.exponent)
                }
            }
            BesovWeight::Field(f) => f(z),
        }
    }

    fn is_radial(&self) -> bool {
        matches!(self, BesovWeight::Radial(_))
    }
}

/// Weight presets for the classical spaces.
pub mod presets {
    use super::RadialWeight;

    /// Normalized volume, `σ ≡ 1/V(D)` (weight 1 against `dv`).
    pub fn normalized() -> RadialWeight {
        RadialWeight::power(0.0)
    }

    /// Radial Bergman weight `(1 - |z|^2)^t`.
    pub fn radial_bergman(t: f64) -> RadialWeight {
        RadialWeight::power(t)
    }

    /// Hardy space: `(1 - |w|^2)^{2J - 1}`.
    pub fn hardy(order: usize) -> RadialWeight {
        RadialWeight::power(2.0 * order as f64 - 1.0)
    }

    /// Besov/Dirichlet space: `(1 - |w|^2)^{pJ - (n + 1)}`.
    pub fn dirichlet(p: f64, order: usize, n: usize) -> RadialWeight {
        RadialWeight::power(p * order as f64 - (n as f64 + 1.0))
    }
}

#[derive(Debug, Clone)]
pub struct BesovSpec {
    p: f64,
    order: usize,
    weight: BesovWeight,
    base_point: Complex64,
}

impl BesovSpec {
    pub fn new(p: f64, order: usize, weight: RadialWeight) -> Result<Self> {
        Self::with_weight(p, order, BesovWeight::Radial(weight))
    }

    pub fn with_weight(p: f64, order: usize, weight: BesovWeight) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::param("p", format!("{p} < 1")));
        }
        if let BesovWeight::Radial(w) = &weight {
            if !(w.scale > 0.0) || !w.exponent.is_finite() {
                return Err(Error::param("weight", format!("{w:?} is not a positive weight")));
            }
        }
        Ok(Self {
            p,
            order,
            weight,
            base_point: Complex64::new(0.0, 0.0),
        })
    }

    pub fn with_base_point(mut self, z0: Complex64) -> Result<Self> {
        if z0.norm() >= 1.0 {
            return Err(Error::Domain(format!("base point {z0} outside the disk")));
        }
        self.base_point = z0;
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> &BesovWeight {
        &self.weight
    }

    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    fn abs_p(&self, v: Complex64) -> f64 {
        if self.p == 2.0 {
            v.norm_sqr()
        } else {
            v.norm().powf(self.p)
        }
    }

    /// `Σ_{k<J} |f^{(k)}(z₀)|^p`.
    pub fn point_terms(&self, f: &FunctionRep) -> Result<f64> {
        (0..self.order)
            .map(|k| f.derivative(k, self.base_point).map(|v| self.abs_p(v)))
            .sum()
    }

    fn check_derivative_data(&self, f: &FunctionRep) -> Result<()> {
        f.derivative(self.order, self.base_point).map(|_| ())
    }

    fn integrand<'a>(&'a self, f: &'a FunctionRep) -> impl Fn(Complex64) -> f64 + Sync + Send + 'a {
        move |z| {
            let d = f.derivative(self.order, z).unwrap_or(Complex64::new(f64::NAN, 0.0));
            self.abs_p(d) * self.weight.eval(z, 1.0 - z.norm_sqr())
        }
    }
}

fn require_unit_disk(grid: &QuadratureGrid) -> Result<()> {
    let ok = grid.measure() == Measure::NormalizedArea
        && matches!(grid.domain(), Domain::Disk { center, radius } if radius == 1.0 && center == Complex64::new(0.0, 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::param(
            "grid",
            format!("Besov norms need a normalized-area unit-disk grid, got {}", grid.id()),
        ))
    }
}

/// `(Σ_{k<J}|f^{(k)}(z₀)|^p + ∫|f^{(J)}|^p σ dv)^{1/p}`.
pub fn besov_norm(spec: &BesovSpec, f: &FunctionRep, grid: &QuadratureGrid) -> Result<f64> {
    require_unit_disk(grid)?;
    spec.check_derivative_data(f)?;
    let integral = grid.integrate_real(spec.integrand(f))?;
    Ok((spec.point_terms(f)? + integral).max(0.0).powf(1.0 / spec.p))
}

/// `∫_{1-δ < |z| < 1} |f^{(J)}|^p σ dv`.
pub fn besov_tail(
    spec: &BesovSpec,
    f: &FunctionRep,
    delta: f64,
    resolution: GridResolution,
) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("need 0 < delta < 1, got {delta}")));
    }
    spec.check_derivative_data(f)?;
    let grid = QuadratureGrid::annulus(
        resolution.n_radial,
        resolution.n_angular,
        1.0 - delta,
        1.0,
        Measure::NormalizedArea,
    )?;
    grid.integrate_real(spec.integrand(f))
}

/// Sup over the family of [`besov_tail`] along a δ schedule. Levels are
/// ordered as given; a decreasing δ schedule gives a nonincreasing
/// profile.
pub fn family_besov_profile(
    spec: &BesovSpec,
    family: &[FunctionRep],
    deltas: &[f64],
    resolution: GridResolution,
) -> Result<TailProfile> {
    if family.is_empty() {
        return Err(Error::param("family", "empty family"));
    }
    if deltas.is_empty() {
        return Err(Error::param("deltas", "empty schedule"));
    }
    let cells = map_indexed(family.len() * deltas.len(), |k| {
        let (level, member) = (k / family.len(), k % family.len());
        besov_tail(spec, &family[member], deltas[level], resolution)
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(deltas.len());
    let mut argmax = Vec::with_capacity(deltas.len());
    for level in 0..deltas.len() {
        let row = &cells[level * family.len()..(level + 1) * family.len()];
        let (i, v) = row
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        values.push(v);
        argmax.push(i);
    }
    Ok(TailProfile {
        parameters: deltas.to_vec(),
        values,
        argmax,
        family_size: family.len(),
        grid_id: format!(
            "annulus(1-delta,1,{}x{},NormalizedArea)",
            resolution.n_radial, resolution.n_angular
        ),
    })
}

/// Dyadically graded integral of `g` over the unit disk against `dv`,
/// in the variable `u = 1 - |z|^2`. Returns the geometric-tail
/// extrapolated sum and whether the pieces decay.
fn graded_disk_integral<G>(g: &G, depth: usize, per_piece: usize, n_angular: usize) -> (f64, bool)
where
    G: Fn(Complex64, f64) -> f64 + Sync + Send,
{
    let pieces = map_indexed(depth, |k| {
        let hi = 0.5f64.powi(k as i32);
        let lo = if k + 1 == depth && depth == 1 { 0.0 } else { 0.5 * hi };
        let mut acc = Vec::with_capacity(per_piece * n_angular);
        for (u, w) in gauss_legendre_on(per_piece, lo, hi) {
            let r = (1.0 - u).sqrt();
            for a in 0..n_angular {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / n_angular as f64;
                acc.push(w * g(Complex64::from_polar(r, theta), u) / n_angular as f64);
            }
        }
        pairwise_sum(&acc)
    });
    let partial = pairwise_sum(&pieces);
    let n = pieces.len();
    if n < 2 {
        return (partial, true);
    }
    let (a, b) = (pieces[n - 2], pieces[n - 1]);
    if b == 0.0 {
        return (partial, true);
    }
    let ratio = b / a;
    if ratio.is_finite() && ratio > 0.0 && ratio < 0.999 {
        (partial + b * ratio / (1.0 - ratio), true)
    } else {
        (partial, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BpAdmissibility {
    /// `∫σ dv`, or the last partial sum when divergent.
    pub sigma_integral: f64,
    /// `∫σ^{-1/(p-1)} dv`, or the last partial sum when divergent.
    pub dual_integral: f64,
    pub sigma_converged: bool,
    pub dual_converged: bool,
    /// Both integrals finite. Necessary for `σ ∈ B_p`, not sufficient.
    pub admissible_hint: bool,
}

const GRADED_DEPTH: usize = 24;

fn converged_integral<G>(g: G, n_angular: usize) -> (f64, bool)
where
    G: Fn(Complex64, f64) -> f64 + Sync + Send,
{
    let (coarse, ok1) = graded_disk_integral(&g, GRADED_DEPTH, 16, n_angular);
    let (fine, ok2) = graded_disk_integral(&g, 2 * GRADED_DEPTH, 32, 2 * n_angular);
    let agree = (fine - coarse).abs() <= 1e-6 * fine.abs().max(1.0);
    (fine, ok1 && ok2 && agree && fine.is_finite())
}

/// Integrability of `σ` and of `σ^{-1/(p-1)}` on the disk, each checked
/// for convergence across two refinements of a boundary-graded grid.
pub fn bp_admissibility(p: f64, weight: &BesovWeight) -> Result<BpAdmissibility> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param("p", format!("need p > 1, got {p}")));
    }
    let n_angular = if weight.is_radial() { 4 } else { 64 };
    let (sigma_integral, sigma_converged) =
        converged_integral(|z, u| weight.eval(z, u), n_angular);
    let e = -1.0 / (p - 1.0);
    let (dual_integral, dual_converged) =
        converged_integral(|z, u| weight.eval(z, u).powf(e), n_angular);
    Ok(BpAdmissibility {
        sigma_integral,
        dual_integral,
        sigma_converged,
        dual_converged,
        admissible_hint: sigma_converged && dual_converged,
    })
}

/// Smallest `C` with `max_{|z| <= radius} |f(z)|^2 <= C ∫|f|^2 σ dv` over
/// polynomials of degree `<= degree` (`p = 2`, `J = 0`): the maximum of the
/// diagonal of the reproducing kernel of that polynomial subspace, taken
/// over a polar sample of the compact disk.
pub fn evaluation_constant(
    spec: &BesovSpec,
    radius: f64,
    degree: usize,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if spec.p != 2.0 || spec.order != 0 {
        return Err(Error::param(
            "spec",
            "evaluation constant is computed for p = 2, J = 0",
        ));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::param("radius", format!("{radius} not in (0, 1)")));
    }
    require_unit_disk(grid)?;
    let d = degree + 1;
    let gram = DMatrix::<Complex64>::from_fn(d, d, |i, j| {
        grid.integrate(|z| {
            z.powu(i as u32).conj()
                * z.powu(j as u32)
                * spec.weight.eval(z, 1.0 - z.norm_sqr())
        })
        .unwrap_or(Complex64::new(f64::NAN, 0.0))
    });
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Resolution("weighted Gram matrix is not positive definite".into()))?;
    // |z|^j is maximal on the outer circle, as is the kernel diagonal.
    let samples = 256;
    let vals = map_indexed(samples, |a| {
        let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * a as f64 / samples as f64);
        let v = nalgebra::DVector::<Complex64>::from_fn(d, |j, _| z.powu(j as u32).conj());
        let x = chol.solve(&v);
        v.dotc(&x).re
    });
    Ok(vals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn disk() -> QuadratureGrid {
        QuadratureGrid::disk(64, 64, 1.0, Measure::NormalizedArea).unwrap()
    }

    #[test]
    fn normalized_j0_norm_of_bergman_basis() {
        let spec = BesovSpec::new(2.0, 0, presets::normalized()).unwrap();
        let f = FunctionRep::basis_element_of(crate::spaces::Basis::Bergman { t: 0.0 }, 3);
        assert_abs_diff_eq!(besov_norm(&spec, &f, &disk()).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn constants_have_point_term_only() {
        for p in [1.0, 2.0, 3.5] {
            let spec = BesovSpec::new(p, 1, presets::hardy(1)).unwrap();
            let f = FunctionRep::polynomial(vec![Complex64::new(-1.5, 2.0)]);
            assert_abs_diff_eq!(besov_norm(&spec, &f, &disk()).unwrap(), 2.5, epsilon = 1e-12);
            assert_eq!(
                besov_tail(&spec, &f, 0.3, GridResolution::new(16, 16)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn hardy_preset_monomials() {
        let spec = BesovSpec::new(2.0, 1, presets::hardy(1)).unwrap();
        for m in [1usize, 4, 30] {
            let v = besov_norm(&spec, &FunctionRep::monomial(m), &disk()).unwrap();
            let mf = m as f64;
            assert_abs_diff_eq!(v, (mf / (mf + 1.0)).sqrt(), epsilon = 1e-8);
        }
    }

    #[test]
    fn tail_closed_forms() {
        let res = GridResolution::new(32, 32);
        let spec = BesovSpec::new(2.0, 0, presets::normalized()).unwrap();
        let e0 = FunctionRep::basis_element_of(crate::spaces::Basis::Bergman { t: 0.0 }, 0);
        assert_abs_diff_eq!(besov_tail(&spec, &e0, 0.5, res).unwrap(), 0.75, epsilon = 1e-8);
        let dirichlet = BesovSpec::new(2.0, 1, presets::dirichlet(2.0, 1, 1)).unwrap();
        let z = FunctionRep::monomial(1);
        assert_abs_diff_eq!(besov_tail(&dirichlet, &z, 0.5, res).unwrap(), 0.75, epsilon = 1e-8);
        assert!(besov_tail(&spec, &e0, 1.0, res).is_err());
        assert!(besov_tail(&spec, &e0, 0.0, res).is_err());
    }

    #[test]
    fn sampled_reps_need_derivatives() {
        let spec = BesovSpec::new(2.0, 1, presets::hardy(1)).unwrap();
        let f = FunctionRep::sampled(|z| z * z);
        assert!(matches!(
            besov_norm(&spec, &f, &disk()),
            Err(Error::Parameter { name: "derivatives", .. })
        ));
        let f = f.with_derivatives(vec![Arc::new(|z| 2.0 * z)]);
        let v = besov_norm(&spec, &f, &disk()).unwrap();
        assert_abs_diff_eq!(v, (2.0f64 / 3.0).sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn admissibility_examples() {
        let a = bp_admissibility(2.0, &BesovWeight::Radial(RadialWeight::power(0.0))).unwrap();
        assert_abs_diff_eq!(a.sigma_integral, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(a.dual_integral, 1.0, epsilon = 1e-10);
        assert!(a.admissible_hint);
        let a = bp_admissibility(2.0, &BesovWeight::Radial(RadialWeight::power(0.5))).unwrap();
        assert_abs_diff_eq!(a.dual_integral, 2.0, epsilon = 1e-8);
        assert!(a.admissible_hint);
        let a = bp_admissibility(2.0, &BesovWeight::Radial(RadialWeight::power(1.5))).unwrap();
        assert!(a.sigma_converged);
        assert!(!a.dual_converged);
        assert!(!a.admissible_hint);
        // borderline: (1-r^2)^{-1} is not integrable
        let a = bp_admissibility(2.0, &BesovWeight::Radial(RadialWeight::power(1.0))).unwrap();
        assert!(!a.admissible_hint);
    }

    #[test]
    fn field_weight_matches_radial() {
        let field = BesovWeight::Field(Arc::new(|z: Complex64| (1.0 - z.norm_sqr()).powf(0.5)));
        let a = bp_admissibility(3.0, &field).unwrap();
        let b = bp_admissibility(3.0, &BesovWeight::Radial(RadialWeight::power(0.5))).unwrap();
        assert_abs_diff_eq!(a.sigma_integral, b.sigma_integral, epsilon = 1e-8);
        assert!(a.admissible_hint && b.admissible_hint);
    }

    #[test]
    fn evaluation_constant_for_normalized_weight() {
        let spec = BesovSpec::new(2.0, 0, presets::normalized()).unwrap();
        // polynomial Bergman kernel diagonal at |z| = r: Σ_{j<=N} (j+1) r^{2j}
        let r: f64 = 0.5;
        let expected: f64 = (0..=10).map(|j| (j as f64 + 1.0) * r.powi(2 * j)).sum();
        let c = evaluation_constant(&spec, r, 10, &disk()).unwrap();
        assert_abs_diff_eq!(c, expected, epsilon = 1e-9);
    }
}
