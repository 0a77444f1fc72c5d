use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{Exhaustion, FrameSpec, IndexDomain, Region};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre_on;
use crate::numerics::par::{map_indexed, pairwise_sum};

/// Net cardinality bound for separated families under a common majorant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityBound {
    /// `log10` of the bound (the bound itself is often astronomically large).
    pub log10_bound: f64,
    /// The bound, when it fits in a `u128`.
    pub exact: Option<u128>,
    /// Exhaustion level `n*` whose complement carries less than `(δ/4)^2`.
    pub level: usize,
    pub cells: usize,
    pub tail_mass: f64,
    pub threshold: f64,
    /// Side of the coordinate squares of the net.
    pub side: f64,
}

/// Subdivisions per exhaustion shell: `radial` pieces across the shell and
/// `angular` pieces around it (rectangles and arcs use `radial` pieces).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShellCells {
    pub radial: usize,
    pub angular: usize,
}

impl Default for ShellCells {
    fn default() -> Self {
        Self {
            radial: 2,
            angular: 8,
        }
    }
}

struct Cell {
    /// Nodes and weights (already multiplied by the frame density) of a
    /// small product rule on the cell.
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
}

impl Cell {
    fn mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }
}

const CELL_RULE: usize = 6;

fn polar_cell(frame: &FrameSpec, r0: f64, r1: f64, t0: f64, t1: f64, area: f64) -> Cell {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (r, wr) in gauss_legendre_on(CELL_RULE, r0, r1) {
        for (t, wt) in gauss_legendre_on(CELL_RULE, t0, t1) {
            let x = Complex64::from_polar(r, t);
            nodes.push(x);
            // `area` converts r dr dθ to the reference measure
            weights.push(wr * wt * r * area * frame.density(x));
        }
    }
    Cell { nodes, weights }
}

fn rect_cell(frame: &FrameSpec, x0: f64, x1: f64, y0: f64, y1: f64) -> Cell {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (x, wx) in gauss_legendre_on(CELL_RULE, x0, x1) {
        for (y, wy) in gauss_legendre_on(CELL_RULE, y0, y1) {
            let z = Complex64::new(x, y);
            nodes.push(z);
            weights.push(wx * wy * frame.density(z));
        }
    }
    Cell { nodes, weights }
}

fn segment_cell(frame: &FrameSpec, a: f64, b: f64, on_circle: bool) -> Cell {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (s, w) in gauss_legendre_on(CELL_RULE, a, b) {
        let (x, w) = if on_circle {
            (Complex64::from_polar(1.0, s), w / (2.0 * PI))
        } else {
            (Complex64::new(s, 0.0), w)
        };
        nodes.push(x);
        weights.push(w * frame.density(x));
    }
    Cell { nodes, weights }
}

fn split(a: f64, b: f64, k: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = (b - a) / k as f64;
    (0..k).map(move |i| (a + h * i as f64, a + h * (i + 1) as f64))
}

/// Cells of the shell `F_level \ F_{level-1}`.
fn shell_cells(frame: &FrameSpec, inner: f64, outer: f64, region: Region, sc: ShellCells) -> Vec<Cell> {
    let mut out = Vec::new();
    match (frame.index_domain(), region) {
        (IndexDomain::Ball | IndexDomain::Plane, Region::Radius(_)) => {
            // normalized area is r dr dθ / π; Lebesgue is r dr dθ
            let area = if frame.index_domain() == IndexDomain::Ball { 1.0 / PI } else { 1.0 };
            for (r0, r1) in split(inner, outer, sc.radial) {
                for (t0, t1) in split(0.0, 2.0 * PI, sc.angular) {
                    out.push(polar_cell(frame, r0, r1, t0, t1, area));
                }
            }
        }
        (IndexDomain::Plane, Region::Square(_)) => {
            let (s, t) = (inner, outer);
            let k = sc.radial.max(1);
            if s == 0.0 {
                for (x0, x1) in split(-t, t, k) {
                    for (y0, y1) in split(-t, t, k) {
                        out.push(rect_cell(frame, x0, x1, y0, y1));
                    }
                }
            } else {
                let rects = [
                    ((s, t), (-t, t)),
                    ((-t, -s), (-t, t)),
                    ((-s, s), (s, t)),
                    ((-s, s), (-t, -s)),
                ];
                for ((x0, x1), (y0, y1)) in rects {
                    for (a0, a1) in split(x0, x1, k) {
                        for (b0, b1) in split(y0, y1, k) {
                            out.push(rect_cell(frame, a0, a1, b0, b1));
                        }
                    }
                }
            }
        }
        (IndexDomain::Line | IndexDomain::Circle, Region::Radius(_)) => {
            let circle = frame.index_domain() == IndexDomain::Circle;
            let k = sc.radial.max(1);
            if inner == 0.0 {
                for (a, b) in split(-outer, outer, 2 * k) {
                    out.push(segment_cell(frame, a, b, circle));
                }
            } else {
                for (a, b) in split(-outer, -inner, k).chain(split(inner, outer, k)) {
                    out.push(segment_cell(frame, a, b, circle));
                }
            }
        }
        _ => {}
    }
    out
}

/// Upper bound on the size of any `δ`-separated family whose frame
/// coefficients satisfy `|<f, k_x>| <= U(x)`.
///
/// Picks the first level `n*` with `∫_{X \ F_{n*}} U^2 dμ < (δ/4)^2`,
/// partitions `F_{n*}` into cells nested across levels, and counts the
/// coordinate squares of side `ε/√(2M)` needed to cover the product of
/// disks of radii `max_cell U · √μ(cell)`.
pub fn umbrella_capacity<U>(
    frame: &FrameSpec,
    umbrella: U,
    delta: f64,
    exhaustion: &Exhaustion,
    eps_net: f64,
    cells: ShellCells,
) -> Result<CapacityBound>
where
    U: Fn(Complex64) -> f64 + Sync,
{
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", format!("{delta} is not positive")));
    }
    if !(eps_net > 0.0 && eps_net < delta / 2.0) {
        return Err(Error::param(
            "eps_net",
            format!("need 0 < eps_net < delta/2 = {}, got {eps_net}", delta / 2.0),
        ));
    }
    if cells.radial == 0 || cells.angular == 0 {
        return Err(Error::param("cells", "need at least one cell per shell"));
    }
    if frame.p() != 2.0 {
        return Err(Error::param("p", "capacity bounds use the Hilbert frame"));
    }
    let sq = |x: Complex64| {
        let u = umbrella(x);
        u * u
    };
    let negative = |x: Complex64| umbrella(x) < 0.0;
    let whole = frame.region_grid(Region::Everything)?;
    if whole.nodes().iter().any(|&x| negative(x)) {
        return Err(Error::Precondition("umbrella takes negative values".into()));
    }
    let total = whole.integrate_real(|x| sq(x) * frame.density(x)).map_err(|_| {
        Error::Precondition("umbrella is not square-integrable on the index grid".into())
    })?;
    if !total.is_finite() {
        return Err(Error::Precondition("umbrella is not square-integrable".into()));
    }

    let threshold = (delta / 4.0).powi(2);
    let mut chosen = None;
    for level in 1..=exhaustion.depth() {
        let tail = match frame.complement_grid(exhaustion.region(level)?)? {
            None => 0.0,
            Some(g) => g.integrate_real(|x| sq(x) * frame.density(x))?,
        };
        if tail < threshold {
            chosen = Some((level, tail));
            break;
        }
    }
    let (level, tail_mass) = chosen.ok_or_else(|| {
        Error::Inconclusive(format!(
            "umbrella tail stays above (delta/4)^2 = {threshold:e} through level {}",
            exhaustion.depth()
        ))
    })?;

    let mut all_cells = Vec::new();
    let mut inner = 0.0;
    for n in 1..=level {
        let region = exhaustion.region(n)?;
        let outer = match region {
            Region::Radius(r) | Region::Square(r) => r,
            Region::Everything => unreachable!("exhaustion levels are bounded"),
        };
        if frame.index_domain() == IndexDomain::Ball && outer >= 1.0 {
            return Err(Error::param("exhaustion", "ball radii must be below 1"));
        }
        let outer = match frame.index_domain() {
            IndexDomain::Circle => outer.min(PI),
            IndexDomain::Plane => outer.min(frame.plane_truncation()),
            _ => outer,
        };
        if outer > inner {
            all_cells.extend(shell_cells(frame, inner, outer, region, cells));
        }
        inner = outer;
    }
    let m = all_cells.len().max(1);
    let side = eps_net / (2.0 * m as f64).sqrt();
    let radii = map_indexed(all_cells.len(), |i| {
        let c = &all_cells[i];
        let peak = c.nodes.iter().map(|&x| umbrella(x)).fold(0.0, f64::max);
        peak * c.mass().sqrt()
    });
    let mut log10_bound = 0.0;
    let mut exact: Option<u128> = Some(1);
    for rho in radii {
        if !rho.is_finite() {
            return Err(Error::Precondition("umbrella is not finite on F_n".into()));
        }
        let per_axis = (2.0 * rho / side).ceil().max(1.0);
        log10_bound += 2.0 * per_axis.log10();
        exact = exact.and_then(|e| {
            if per_axis > 1e18 {
                return None;
            }
            let k = per_axis as u128;
            e.checked_mul(k).and_then(|e| e.checked_mul(k))
        });
    }
    Ok(CapacityBound {
        log10_bound,
        exact,
        level,
        cells: all_cells.len(),
        tail_mass,
        threshold,
        side,
    })
}
