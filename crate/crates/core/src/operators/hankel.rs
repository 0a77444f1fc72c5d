use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{SymbolField, TruncatedOperator, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre_on;
use crate::numerics::par::map_indexed;
use crate::numerics::DenseComplexMatrix;
use crate::spaces::SpaceSpec;

/// `n` equispaced points `e^{2πi m/n}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    pub n: usize,
}

impl BoundaryGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::param("n", format!("{n} < 4 boundary points")));
        }
        Ok(Self { n })
    }

    pub fn node(&self, m: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * m as f64 / self.n as f64)
    }

    pub fn id(&self) -> String {
        format!("circle({})", self.n)
    }
}

/// `ĝ(i + j)` from the coefficient list, zero beyond it.
pub fn hankel_oracle(coeffs: &[Complex64], deg: usize) -> DenseComplexMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let n = deg + 1;
    let mut m = DenseComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = coeffs.get(i + j).copied().unwrap_or(zero);
        }
    }
    m
}

/// `<H_g ζ^j, ζ^i> = ∫ g ζ̄^{i+j} ds` by the boundary rule.
///
/// `H_g f = S(g f̄)` is conjugate-linear; the section is the matrix of the
/// linear map on conjugated coefficients, `H_g(Σ c_j ζ^j) = Σ conj(c_j) H_g ζ^j`.
pub fn hankel_matrix(g: &SymbolField, deg: usize, grid: BoundaryGrid) -> Result<TruncatedOperator> {
    if deg > MAX_DEGREE {
        return Err(Error::param("deg", format!("{deg} > {MAX_DEGREE}")));
    }
    if grid.n < 4 * deg.max(1) {
        return Err(Error::param(
            "boundary_grid",
            format!("{} points alias a degree-{deg} section; need at least {}", grid.n, 4 * deg.max(1)),
        ));
    }
    let mut buf: Vec<Complex64> = (0..grid.n).map(|m| g.eval(grid.node(m))).collect();
    if let Some(m) = buf.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite {
            node: grid.node(m),
            value: buf[m],
        });
    }
    FftPlanner::<f64>::new()
        .plan_fft_forward(grid.n)
        .process(&mut buf);
    let scale = 1.0 / grid.n as f64;
    let ghat: Vec<Complex64> = buf[..=2 * deg].iter().map(|v| v * scale).collect();
    let mut op = TruncatedOperator::from_matrix(
        SpaceSpec::hardy(),
        hankel_oracle(&ghat, deg),
        format!("H[{}]", g.label()),
    )?;
    op.grid_id = grid.id();
    Ok(op)
}

const ARC_NODES: usize = 32;

/// `sup_ζ |Q|^{-1} ∫_Q |g - g_Q|^2 ds` over the grid points `ζ`, with
/// `Q(ζ, r) = {w : |1 - ζ w̄| < r^2}` (an arc of half-angle `2 asin(r²/2)`).
pub fn vmo_modulus(g: &SymbolField, r: f64, grid: BoundaryGrid) -> Result<f64> {
    if !(r > 0.0 && r < 2f64.sqrt()) {
        return Err(Error::param("r", format!("need 0 < r < √2, got {r}")));
    }
    let half = 2.0 * (0.5 * r * r).asin();
    if half < PI / grid.n as f64 {
        return Err(Error::Resolution(format!(
            "arc half-angle {half:e} is below the grid spacing of {} points",
            grid.n
        )));
    }
    let rule = gauss_legendre_on(ARC_NODES, -half, half);
    let total: f64 = rule.iter().map(|p| p.1).sum();
    let values = map_indexed(grid.n, |m| {
        let phi = 2.0 * PI * m as f64 / grid.n as f64;
        let samples: Vec<(Complex64, f64)> = rule
            .iter()
            .map(|&(t, w)| (g.eval(Complex64::from_polar(1.0, phi + t)), w))
            .collect();
        let mean: Complex64 = samples.iter().map(|(v, w)| v * *w).sum::<Complex64>() / total;
        samples
            .iter()
            .map(|(v, w)| (v - mean).norm_sqr() * w)
            .sum::<f64>()
            / total
    });
    let mut sup = 0.0f64;
    for (m, v) in values.into_iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                node: grid.node(m),
                value: Complex64::new(v, 0.0),
            });
        }
        sup = sup.max(v);
    }
    Ok(sup)
}
