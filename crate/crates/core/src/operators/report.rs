use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    berezin_boundary_profile, hankel_matrix, localization_integrals, toeplitz_matrix, vmo_modulus,
    weak_berezin, BoundaryGrid, ProfilePoint, SymbolField, TruncatedOperator,
};
use crate::error::{Error, Result};
use crate::numerics::par::map_indexed;
use crate::numerics::{singular_values, GridResolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Toeplitz,
    Hankel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CompactEvidence,
    NoncompactEvidence,
    Inconclusive,
}

/// What a Berezin profile is computed from.
#[derive(Debug, Clone)]
pub enum BerezinSource {
    /// `∫ u∘φ_z dv` directly from the symbol.
    Symbol(SymbolField),
    /// `<T k_z, k_z>` from a finite section.
    Section(TruncatedOperator),
}

/// Sample of centers `z` (equispaced radii in `[0, max_radius]` times
/// equispaced angles) for the suprema in the localization integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationSample {
    pub radii: usize,
    pub angles: usize,
    /// Hyperbolic radii `R` of the excluded balls.
    pub ball_radii: Vec<f64>,
    pub resolution: GridResolution,
}

impl Default for LocalizationSample {
    fn default() -> Self {
        Self {
            radii: 64,
            angles: 32,
            ball_radii: vec![1.0, 2.0, 3.0],
            resolution: GridResolution::new(32, 32),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub deg: usize,
    /// Grid for Toeplitz assembly and Berezin quadrature.
    pub resolution: GridResolution,
    pub profile_radii: Vec<f64>,
    /// Radius at which the Berezin verdict is read.
    pub verdict_radius: f64,
    pub compact_below: f64,
    pub noncompact_above: f64,
    pub p: f64,
    pub delta: Option<f64>,
    pub localization: Option<LocalizationSample>,
    /// Points of the boundary grid for Hankel sections and VMOA moduli.
    pub boundary_points: usize,
    pub vmo_radii: Vec<f64>,
    /// Compact evidence when `modulus(r_min) <= ratio · modulus(r_max)`.
    pub vmo_compact_ratio: f64,
    /// Noncompact evidence when `modulus(r_min) >= ratio · modulus(r_max)`.
    pub vmo_noncompact_ratio: f64,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self {
            deg: 64,
            resolution: GridResolution::new(128, 256),
            profile_radii: vec![0.5, 0.7, 0.9, 0.95, 0.99],
            verdict_radius: 0.99,
            compact_below: 0.1,
            noncompact_above: 0.5,
            p: 2.0,
            delta: None,
            localization: None,
            boundary_points: 2048,
            vmo_radii: vec![0.4, 0.2, 0.1, 0.05],
            vmo_compact_ratio: 0.01,
            vmo_noncompact_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerezinSection {
    pub grid_id: String,
    pub route: String,
    pub points: Vec<ProfilePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularValues {
    pub grid_id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationEntry {
    pub ball_radius: f64,
    pub columns_sup: f64,
    pub complements_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationTable {
    pub grid_id: String,
    pub p: f64,
    pub delta: f64,
    pub sample_radii: usize,
    pub sample_angles: usize,
    pub max_center_radius: f64,
    pub rows_sup: f64,
    pub entries: Vec<LocalizationEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakBerezinPoint {
    pub radius: f64,
    pub ball_radius: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VmoPoint {
    pub r: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VmoSchedule {
    pub grid_id: String,
    pub points: Vec<VmoPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub kind: OperatorKind,
    pub symbol: String,
    pub deg: usize,
    pub convention: String,
    pub evidence: String,
    pub section_grid_id: String,
    pub berezin: Option<BerezinSection>,
    pub singular_values: SingularValues,
    pub localization: Option<LocalizationTable>,
    pub weak_berezin: Vec<WeakBerezinPoint>,
    pub vmo: Option<VmoSchedule>,
    pub verdict: Verdict,
    pub verdict_basis: String,
    pub params: ReportParams,
}

const EVIDENCE: &str = "finite-truncation evidence, not a proof";

fn three_way(value: f64, compact_below: f64, noncompact_above: f64) -> Verdict {
    if value < compact_below {
        Verdict::CompactEvidence
    } else if value > noncompact_above {
        Verdict::NoncompactEvidence
    } else {
        Verdict::Inconclusive
    }
}

fn localization_table(t: &TruncatedOperator, params: &ReportParams, sample: &LocalizationSample) -> Result<LocalizationTable> {
    if sample.radii == 0 || sample.angles == 0 || sample.ball_radii.is_empty() {
        return Err(Error::param("localization", "empty center sample"));
    }
    let max_center_radius = (1.0 - 3.0 / t.deg().max(4) as f64).min(0.99);
    let centers: Vec<Complex64> = (0..sample.radii)
        .flat_map(|i| {
            let r = max_center_radius * i as f64 / (sample.radii.max(2) - 1) as f64;
            (0..sample.angles).map(move |k| {
                Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / sample.angles as f64)
            })
        })
        .collect();
    let per_center = map_indexed(centers.len() * sample.ball_radii.len(), |k| {
        let (c, b) = (k / sample.ball_radii.len(), k % sample.ball_radii.len());
        localization_integrals(t, centers[c], params.p, params.delta, sample.ball_radii[b], sample.resolution)
    });
    let per_center = per_center.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows_sup = 0.0f64;
    let mut entries: Vec<LocalizationEntry> = sample
        .ball_radii
        .iter()
        .map(|&ball_radius| LocalizationEntry {
            ball_radius,
            columns_sup: 0.0,
            complements_sup: 0.0,
        })
        .collect();
    let mut delta = 0.0;
    for (k, v) in per_center.iter().enumerate() {
        let e = &mut entries[k % sample.ball_radii.len()];
        e.columns_sup = e.columns_sup.max(v.columns);
        e.complements_sup = e.complements_sup.max(v.complements);
        rows_sup = rows_sup.max(v.rows);
        delta = v.delta;
    }
    Ok(LocalizationTable {
        grid_id: format!(
            "gauss_jacobi({}x{})",
            sample.resolution.n_radial, sample.resolution.n_angular
        ),
        p: params.p,
        delta,
        sample_radii: sample.radii,
        sample_angles: sample.angles,
        max_center_radius,
        rows_sup,
        entries,
    })
}

/// Berezin profile, singular values and localization table (Toeplitz) or
/// VMOA schedule (Hankel), with a three-way verdict.
pub fn compactness_report(
    kind: OperatorKind,
    symbol: &SymbolField,
    params: &ReportParams,
) -> Result<DiagnosticReport> {
    match kind {
        OperatorKind::Toeplitz => toeplitz_report(symbol, params),
        OperatorKind::Hankel => hankel_report(symbol, params),
    }
}

fn toeplitz_report(u: &SymbolField, params: &ReportParams) -> Result<DiagnosticReport> {
    let t = toeplitz_matrix(u, params.deg, params.resolution)?;
    let mut radii = params.profile_radii.clone();
    if !radii.contains(&params.verdict_radius) {
        radii.push(params.verdict_radius);
        radii.sort_by(|a, b| a.total_cmp(b));
    }
    let points = berezin_boundary_profile(&BerezinSource::Symbol(u.clone()), &radii, params.resolution)?;
    let at_verdict = points
        .iter()
        .find(|p| p.radius == params.verdict_radius)
        .map(|p| p.max_abs)
        .expect("verdict radius is in the profile");
    let sv = singular_values(t.matrix())?;
    let localization = params
        .localization
        .as_ref()
        .map(|s| localization_table(&t, params, s))
        .transpose()?;
    let weak = radii
        .iter()
        .filter(|&&r| r <= 1.0 - 3.0 / params.deg.max(4) as f64)
        .map(|&r| {
            weak_berezin(&t, Complex64::new(r, 0.0), 1.0, GridResolution::new(8, 32)).map(|value| {
                WeakBerezinPoint {
                    radius: r,
                    ball_radius: 1.0,
                    value,
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = three_way(at_verdict, params.compact_below, params.noncompact_above);
    Ok(DiagnosticReport {
        kind: OperatorKind::Toeplitz,
        symbol: u.label().to_string(),
        deg: params.deg,
        convention: "T_u f = P(u f) on the Bergman space of the disk; matrix entries <u e_j, e_i> with e_j = sqrt(j+1) z^j".into(),
        evidence: EVIDENCE.into(),
        section_grid_id: t.grid_id().to_string(),
        berezin: Some(BerezinSection {
            grid_id: format!(
                "disk(GL{}x{}) via mobius change of variables",
                params.resolution.n_radial, params.resolution.n_angular
            ),
            route: "symbol".into(),
            points,
        }),
        singular_values: SingularValues {
            grid_id: t.grid_id().to_string(),
            values: sv,
        },
        localization,
        weak_berezin: weak,
        vmo: None,
        verdict,
        verdict_basis: format!(
            "max |Berezin| at r = {} is {:.6e}; compact below {}, noncompact above {}",
            params.verdict_radius, at_verdict, params.compact_below, params.noncompact_above
        ),
        params: params.clone(),
    })
}

fn hankel_report(g: &SymbolField, params: &ReportParams) -> Result<DiagnosticReport> {
    let grid = BoundaryGrid::new(params.boundary_points.max(4 * params.deg))?;
    let h = hankel_matrix(g, params.deg, grid)?;
    let sv = singular_values(h.matrix())?;
    if params.vmo_radii.len() < 2 {
        return Err(Error::param("vmo_radii", "need at least two radii"));
    }
    let points = params
        .vmo_radii
        .iter()
        .map(|&r| vmo_modulus(g, r, grid).map(|modulus| VmoPoint { r, modulus }))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = {
        let mut sorted: Vec<&VmoPoint> = points.iter().collect();
        sorted.sort_by(|a, b| a.r.total_cmp(&b.r));
        (sorted[0].modulus, sorted[sorted.len() - 1].modulus)
    };
    // scale-free: compare the smallest-arc oscillation to the largest
    let ratio = if hi <= 1e-300 { 0.0 } else { lo / hi };
    let verdict = if ratio <= params.vmo_compact_ratio {
        Verdict::CompactEvidence
    } else if ratio >= params.vmo_noncompact_ratio {
        Verdict::NoncompactEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(DiagnosticReport {
        kind: OperatorKind::Hankel,
        symbol: g.label().to_string(),
        deg: params.deg,
        convention: "H_g f = S(g conj(f)) on the Hardy space of the disk is conjugate-linear; the matrix (entries g^(i+j)) acts on conjugated coefficients".into(),
        evidence: EVIDENCE.into(),
        section_grid_id: h.grid_id().to_string(),
        berezin: None,
        singular_values: SingularValues {
            grid_id: h.grid_id().to_string(),
            values: sv,
        },
        localization: None,
        weak_berezin: Vec::new(),
        vmo: Some(VmoSchedule {
            grid_id: grid.id(),
            points,
        }),
        verdict,
        verdict_basis: format!(
            "VMOA modulus ratio (smallest r / largest r) = {ratio:.6e}; compact at or below {}, noncompact at or above {}",
            params.vmo_compact_ratio, params.vmo_noncompact_ratio
        ),
        params: params.clone(),
    })
}
