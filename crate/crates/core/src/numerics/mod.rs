//! Quadrature grids, dense spectral decomposition, and discrete Fourier
//! transforms shared by every other module.

pub mod fourier;
pub mod linalg;
pub mod par;
pub mod quadrature;

pub use fourier::{dft, dft_with_origin, idft_with_origin, Spectrum};
pub use linalg::{singular_values, DenseComplexMatrix};
pub use quadrature::{gauss_jacobi_on, gauss_legendre_on, Domain, GridResolution, Measure, QuadratureGrid};

use num_complex::Complex64;

use crate::error::Result;

/// Disk grid; free-function form of [`QuadratureGrid::disk`].
pub fn build_disk_grid(
    n_radial: usize,
    n_angular: usize,
    radius: f64,
    measure: Measure,
) -> Result<QuadratureGrid> {
    QuadratureGrid::disk(n_radial, n_angular, radius, measure)
}

pub fn build_circle_grid(n: usize) -> Result<QuadratureGrid> {
    QuadratureGrid::circle(n)
}

pub fn integrate<F>(grid: &QuadratureGrid, field: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync + Send,
{
    grid.integrate(field)
}
