use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Disks `{|z| <= R_n}` (intervals `[-R_n, R_n]` on the line, arcs on
    /// the circle).
    EuclideanRadius,
    /// Bergman balls `D(0, n r₀)`, i.e. Euclidean disks of radius `tanh(n r₀)`.
    HyperbolicRadius,
    /// Squares `[-R_n, R_n]^2` in the plane.
    Box,
}

/// A region of a frame's index space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "snake_case")]
pub enum Region {
    /// `{|x| <= r}`: a disk, or `[-r, r]` on the line, or the arc
    /// `{|arg ζ| <= r}` on the circle.
    Radius(f64),
    /// `[-r, r]^2` in the plane.
    Square(f64),
    /// The whole index space.
    Everything,
}

/// Nested schedule `F_1 ⊆ F_2 ⊆ …`; level `n` (1-based) is `F_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    kind: ScheduleKind,
    sizes: Vec<f64>,
}

impl Exhaustion {
    pub fn new(kind: ScheduleKind, sizes: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::param("depth", "exhaustion needs at least one level"));
        }
        if sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::param("sizes", "sizes must be positive and finite"));
        }
        if sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("sizes", "sizes must be strictly increasing"));
        }
        Ok(Self { kind, sizes })
    }

    /// `R_n = 1 - 2^{-n}`, `n = 1..=depth`: the default for the disk.
    pub fn ball(depth: usize) -> Result<Self> {
        Self::new(
            ScheduleKind::EuclideanRadius,
            (1..=depth).map(|n| 1.0 - 0.5f64.powi(n as i32)).collect(),
        )
    }

    /// `D(0, n r₀)` for `n = 1..=depth`.
    pub fn hyperbolic(r0: f64, depth: usize) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::param("r0", format!("{r0} <= 0")));
        }
        let sizes: Vec<f64> = (1..=depth).map(|n| (n as f64 * r0).tanh()).collect();
        if sizes.iter().any(|&r| r >= 1.0) {
            return Err(Error::param(
                "depth",
                "hyperbolic radii saturate to the boundary in double precision",
            ));
        }
        Self::new(ScheduleKind::HyperbolicRadius, sizes)
    }

    /// `R_n = n` disks (plane) or intervals (line).
    pub fn linear(depth: usize) -> Result<Self> {
        Self::new(
            ScheduleKind::EuclideanRadius,
            (1..=depth).map(|n| n as f64).collect(),
        )
    }

    /// `[-n, n]^2` squares.
    pub fn boxes(depth: usize) -> Result<Self> {
        Self::new(ScheduleKind::Box, (1..=depth).map(|n| n as f64).collect())
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    /// Region `F_level`, `level` in `1..=depth`.
    pub fn region(&self, level: usize) -> Result<Region> {
        if level == 0 || level > self.sizes.len() {
            return Err(Error::param(
                "level",
                format!("level {level} outside 1..={}", self.sizes.len()),
            ));
        }
        let s = self.sizes[level - 1];
        Ok(match self.kind {
            ScheduleKind::Box => Region::Square(s),
            _ => Region::Radius(s),
        })
    }

    /// First `depth` levels.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.sizes.len() {
            return Err(Error::param(
                "depth",
                format!("depth {depth} outside 1..={}", self.sizes.len()),
            ));
        }
        Ok(Self {
            kind: self.kind,
            sizes: self.sizes[..depth].to_vec(),
        })
    }
}
