use std::f64::consts::PI;

use kolmo_core::besov::{bp_admissibility, family_besov_profile, presets, BesovSpec, BesovWeight};
use kolmo_core::euclid::{
    self, family_tails, stft_field, stft_tail, translation_modulus, Axis, SampledSignal, StftWindow,
};
use kolmo_core::frames::{
    compactness_verdict, family_tail_profile, umbrella_capacity, Exhaustion, FrameSpec, ScheduleKind,
    ShellCells, TailVerdict,
};
use kolmo_core::numerics::par::map_slice;
use kolmo_core::numerics::GridResolution;
use kolmo_core::operators::{
    compactness_report, LocalizationSample, OperatorKind, ReportParams, SymbolField, Verdict,
};
use kolmo_core::spaces::{FunctionRep, SpaceSpec};
use kolmo_core::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{fill, FamilySection, FrameSection, RunConfig};
use crate::error::{CliError, CoreContext};
use crate::symbol;

/// A CSV side file: `<command>-<suffix>.csv`.
pub struct CsvTable {
    pub suffix: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(suffix: &'static str, header: &[&'static str]) -> Self {
        Self {
            suffix,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }
}

pub struct CommandOutput {
    /// Resolved configuration sections used by the command.
    pub config: Value,
    pub result: Value,
    pub tables: Vec<CsvTable>,
    /// The verdict fell between its thresholds.
    pub inconclusive: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("{field}: must be positive, got {v}")))
    }
}

fn at_least_one(field: &str, v: usize) -> Result<usize, CliError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(CliError::config(format!("{field}: must be at least 1")))
    }
}

fn space_of(name: &str, a: f64) -> Result<SpaceSpec, CliError> {
    match name {
        "bergman" => Ok(SpaceSpec::bergman()),
        "fock" => Ok(SpaceSpec::fock()),
        "hardy" => Ok(SpaceSpec::hardy()),
        "paley-wiener" => SpaceSpec::paley_wiener(a).field("frame.a"),
        other => Err(CliError::config(format!(
            "frame.space: unknown space '{other}' (bergman, fock, hardy, paley-wiener)"
        ))),
    }
}

fn resolve_frame(s: &mut FrameSection) -> Result<(FrameSpec, Exhaustion), CliError> {
    let name = fill(&mut s.space, "bergman".into()).clone();
    let a = *fill(&mut s.a, 0.5);
    let space = space_of(&name, a)?;
    let default_schedule = match name.as_str() {
        "bergman" => "ball",
        "hardy" => "arcs",
        _ => "linear",
    };
    let schedule = fill(&mut s.schedule, default_schedule.into()).clone();
    let depth = at_least_one("frame.depth", *fill(&mut s.depth, if name == "fock" { 5 } else { 20 }))?;
    let p = *fill(&mut s.p, 2.0);
    let res = GridResolution::new(
        at_least_one("frame.n_radial", *fill(&mut s.n_radial, 256))?,
        at_least_one("frame.n_angular", *fill(&mut s.n_angular, 512))?,
    );
    fill(&mut s.eps, 1e-3);
    let frame = FrameSpec::new(space)
        .field("frame.space")?
        .with_p(p)
        .field("frame.p")?
        .with_resolution(res);
    let exhaustion = match schedule.as_str() {
        "ball" => Exhaustion::ball(depth),
        "hyperbolic" => Exhaustion::hyperbolic(*fill(&mut s.r0, 0.5), depth),
        "linear" => Exhaustion::linear(depth),
        "boxes" => Exhaustion::boxes(depth),
        "arcs" => Exhaustion::new(
            ScheduleKind::EuclideanRadius,
            (1..=depth).map(|n| PI * (1.0 - 0.5f64.powi(n as i32))).collect(),
        ),
        other => {
            return Err(CliError::config(format!(
                "frame.schedule: unknown schedule '{other}' (ball, hyperbolic, linear, boxes, arcs)"
            )))
        }
    }
    .field("frame.schedule")?;
    Ok((frame, exhaustion))
}

fn parse_range(spec: &str) -> Option<(usize, usize)> {
    let (a, b) = spec.split_once("..")?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn resolve_family(s: &FamilySection, space: &SpaceSpec) -> Result<Vec<FunctionRep>, CliError> {
    let family: Vec<FunctionRep> = match (&s.preset, &s.coefficients) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "family: set either family.preset or family.coefficients, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "family: no family given (family.preset or family.coefficients)",
            ))
        }
        (Some(p), None) => {
            let (kind, range) = p
                .split_once(':')
                .ok_or_else(|| CliError::config(format!("family.preset: expected KIND:A..B, got '{p}'")))?;
            let (lo, hi) = parse_range(range)
                .ok_or_else(|| CliError::config(format!("family.preset: bad range '{range}'")))?;
            match kind {
                "monomials" => (lo..=hi).map(FunctionRep::monomial).collect(),
                "basis" => (lo..=hi).map(|j| FunctionRep::basis_element(space, j)).collect(),
                other => {
                    return Err(CliError::config(format!(
                        "family.preset: unknown kind '{other}' (monomials, basis)"
                    )))
                }
            }
        }
        (None, Some(vectors)) => vectors
            .iter()
            .map(|v| FunctionRep::in_space(space, v.iter().map(|c| c.value()).collect()))
            .collect(),
    };
    if family.is_empty() {
        return Err(CliError::config("family: the family is empty"));
    }
    if let Some(v) = &s.coefficients {
        if v.iter().any(|c| c.is_empty()) {
            return Err(CliError::config("family.coefficients: empty coefficient vector"));
        }
    }
    Ok(family)
}

pub fn frame_tails(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let (frame, exhaustion) = resolve_frame(&mut cfg.frame)?;
    let family = resolve_family(&cfg.family, frame.space())?;
    let depth = exhaustion.depth();
    let eps = cfg.frame.eps.unwrap_or(1e-3);
    let profile = family_tail_profile(&frame, &family, &exhaustion, depth).field("frame")?;
    let verdict = compactness_verdict(&profile, eps).field("frame.eps")?;
    let mut csv = CsvTable::new("profile", &["level", "parameter", "q"]);
    for (i, (&s, &q)) in profile.parameters.iter().zip(&profile.values).enumerate() {
        csv.push(&[(i + 1) as f64, s, q]);
    }
    Ok(CommandOutput {
        config: json!({ "frame": cfg.frame, "family": cfg.family }),
        result: json!({
            "space": frame.space().name(),
            "p": frame.p(),
            "schedule": exhaustion.kind(),
            "profile": profile,
            "eps": eps,
            "verdict": verdict,
        }),
        tables: vec![csv],
        inconclusive: verdict == TailVerdict::NotDecayed,
    })
}

/// Samples the symbol on the closed disk: the origin, 64 interior radii and
/// the unit circle, 32 angles each.
fn check_bounded(expr: &symbol::Expr) -> Result<(), CliError> {
    let mut nodes = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=65 {
        let r = (i as f64 / 65.0).min(1.0);
        for k in 0..32 {
            nodes.push(Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / 32.0));
        }
    }
    match nodes.iter().map(|&w| (w, expr.eval(w))).find(|(_, v)| !v.is_finite()) {
        None => Ok(()),
        Some((w, v)) => Err(CliError::Numeric(format!(
            "toeplitz.symbol: unbounded sample {v} at z = {w}"
        ))),
    }
}

pub fn toeplitz(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let s = &mut cfg.toeplitz;
    let src = s
        .symbol
        .clone()
        .ok_or_else(|| CliError::config("toeplitz.symbol: no symbol given"))?;
    let expr = symbol::parse(&src).map_err(|e| CliError::config(format!("toeplitz.symbol: {e}")))?;
    let defaults = ReportParams::default();
    let deg = *fill(&mut s.deg, defaults.deg);
    let res = GridResolution::new(
        at_least_one("toeplitz.n_radial", *fill(&mut s.n_radial, defaults.resolution.n_radial))?,
        at_least_one("toeplitz.n_angular", *fill(&mut s.n_angular, defaults.resolution.n_angular))?,
    );
    let localization = if *fill(&mut s.localization, true) {
        Some(LocalizationSample {
            radii: at_least_one("toeplitz.localization_radii", *fill(&mut s.localization_radii, 8))?,
            angles: at_least_one("toeplitz.localization_angles", *fill(&mut s.localization_angles, 8))?,
            ball_radii: fill(&mut s.ball_radii, vec![1.0, 2.0, 3.0]).clone(),
            resolution: GridResolution::new(24, 24),
        })
    } else {
        None
    };
    let params = ReportParams {
        deg,
        resolution: res,
        profile_radii: fill(&mut s.profile_radii, defaults.profile_radii.clone()).clone(),
        verdict_radius: *fill(&mut s.verdict_radius, defaults.verdict_radius),
        compact_below: *fill(&mut s.compact_below, defaults.compact_below),
        noncompact_above: *fill(&mut s.noncompact_above, defaults.noncompact_above),
        p: *fill(&mut s.p, defaults.p),
        delta: s.delta,
        localization,
        ..defaults
    };
    check_bounded(&expr)?;
    let u = SymbolField::new(src.clone(), move |w| expr.eval(w));
    let report = compactness_report(OperatorKind::Toeplitz, &u, &params).field("toeplitz")?;
    let mut tables = Vec::new();
    if let Some(b) = &report.berezin {
        let mut t = CsvTable::new("berezin", &["radius", "max_abs", "min_abs"]);
        for p in &b.points {
            t.push(&[p.radius, p.max_abs, p.min_abs]);
        }
        tables.push(t);
    }
    tables.push(singular_value_table(&report.singular_values.values));
    if let Some(loc) = &report.localization {
        let mut t = CsvTable::new("localization", &["ball_radius", "columns_sup", "complements_sup"]);
        for e in &loc.entries {
            t.push(&[e.ball_radius, e.columns_sup, e.complements_sup]);
        }
        tables.push(t);
    }
    Ok(CommandOutput {
        config: json!({ "toeplitz": cfg.toeplitz }),
        inconclusive: report.verdict == Verdict::Inconclusive,
        result: to_value(&report),
        tables,
    })
}

fn singular_value_table(values: &[f64]) -> CsvTable {
    let mut t = CsvTable::new("singular-values", &["index", "sigma"]);
    for (i, &s) in values.iter().enumerate() {
        t.push(&[i as f64, s]);
    }
    t
}

/// Singular values above this count toward the numerical rank.
const RANK_TOLERANCE: f64 = 1e-10;

pub fn hankel(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let s = &mut cfg.hankel;
    let coeffs: Vec<Complex64> = s
        .fourier
        .as_ref()
        .ok_or_else(|| CliError::config("hankel.fourier: no Fourier coefficients given"))?
        .iter()
        .map(|c| c.value())
        .collect();
    if coeffs.is_empty() {
        return Err(CliError::config("hankel.fourier: empty coefficient list"));
    }
    let defaults = ReportParams::default();
    let params = ReportParams {
        deg: *fill(&mut s.deg, 16),
        boundary_points: *fill(&mut s.boundary_points, defaults.boundary_points),
        vmo_radii: fill(&mut s.vmo_radii, defaults.vmo_radii.clone()).clone(),
        vmo_compact_ratio: *fill(&mut s.compact_ratio, defaults.vmo_compact_ratio),
        vmo_noncompact_ratio: *fill(&mut s.noncompact_ratio, defaults.vmo_noncompact_ratio),
        ..defaults
    };
    let g = SymbolField::from_fourier(coeffs);
    let report = compactness_report(OperatorKind::Hankel, &g, &params).field("hankel")?;
    let rank = report
        .singular_values
        .values
        .iter()
        .filter(|&&v| v > RANK_TOLERANCE)
        .count();
    let mut tables = vec![singular_value_table(&report.singular_values.values)];
    if let Some(v) = &report.vmo {
        let mut t = CsvTable::new("vmo", &["r", "modulus"]);
        for p in &v.points {
            t.push(&[p.r, p.modulus]);
        }
        tables.push(t);
    }
    let mut result = to_value(&report);
    result["numerical_rank"] = json!(rank);
    result["rank_tolerance"] = json!(RANK_TOLERANCE);
    Ok(CommandOutput {
        config: json!({ "hankel": cfg.hankel }),
        inconclusive: report.verdict == Verdict::Inconclusive,
        result,
        tables,
    })
}

pub fn besov(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let s = &mut cfg.besov;
    let name = fill(&mut s.preset, "hardy".into()).clone();
    let order = *fill(&mut s.order, 1);
    let p = positive("besov.p", *fill(&mut s.p, 2.0))?;
    let weight = match name.as_str() {
        "hardy" => presets::hardy(order),
        "dirichlet" => presets::dirichlet(p, order, 1),
        "bergman" => presets::radial_bergman(*fill(&mut s.t, 0.0)),
        "normalized" => presets::normalized(),
        other => {
            return Err(CliError::config(format!(
                "besov.preset: unknown preset '{other}' (hardy, dirichlet, bergman, normalized)"
            )))
        }
    };
    let depth = at_least_one("besov.depth", *fill(&mut s.depth, 10))?;
    let res = GridResolution::new(
        at_least_one("besov.n_radial", *fill(&mut s.n_radial, 64))?,
        at_least_one("besov.n_angular", *fill(&mut s.n_angular, 128))?,
    );
    let spec = BesovSpec::new(p, order, weight).field("besov")?;
    let family = resolve_family(&cfg.family, &SpaceSpec::bergman())?;
    let deltas: Vec<f64> = (1..=depth).map(|n| 0.5f64.powi(n as i32)).collect();
    let profile = family_besov_profile(&spec, &family, &deltas, res).field("besov")?;
    let admissibility = if p > 1.0 {
        Some(bp_admissibility(p, &BesovWeight::Radial(weight)).field("besov.p")?)
    } else {
        None
    };
    let mut csv = CsvTable::new("profile", &["level", "delta", "q"]);
    for (i, (&d, &q)) in profile.parameters.iter().zip(&profile.values).enumerate() {
        csv.push(&[(i + 1) as f64, d, q]);
    }
    Ok(CommandOutput {
        config: json!({ "besov": cfg.besov, "family": cfg.family }),
        result: json!({
            "weight_exponent": weight.exponent,
            "profile": profile,
            "admissibility": admissibility,
        }),
        tables: vec![csv],
        inconclusive: false,
    })
}

#[derive(Serialize)]
struct StftTails {
    a_axis: Axis,
    b_axis: Axis,
    radii: Vec<f64>,
    sup_tails: Vec<f64>,
    total_mass_sup_defect: f64,
}

pub fn l2(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let s = &mut cfg.l2;
    let name = fill(&mut s.preset, "modulated-gaussians".into()).clone();
    let kmax = *fill(&mut s.kmax, 20);
    let family: Vec<SampledSignal> = match name.as_str() {
        "modulated-gaussians" => euclid::presets::modulated_gaussians(kmax).field("l2.kmax")?,
        "translated-gaussians" => {
            let count = at_least_one("l2.count", *fill(&mut s.count, 11))?;
            let shifts: Vec<f64> = (0..count)
                .map(|i| if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 })
                .collect();
            euclid::presets::translated_gaussians(&shifts).field("l2.count")?
        }
        other => {
            return Err(CliError::config(format!(
                "l2.preset: unknown preset '{other}' (modulated-gaussians, translated-gaussians)"
            )))
        }
    };
    let radii = fill(&mut s.radii, vec![1.0, 2.0, 5.0, 10.0]).clone();
    let tails = family_tails(&family, &radii).field("l2.radii")?;
    let spacing = family[0].spacing();
    let shifts: Vec<f64> = (0..9).map(|k| spacing * (1u64 << k) as f64).collect();
    let moduli = map_slice(&shifts, |&h| {
        family
            .iter()
            .map(|f| translation_modulus(f, h))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
    })
    .into_iter()
    .collect::<kolmo_core::Result<Vec<f64>>>()
    .field("l2")?;
    let stft = if *fill(&mut s.stft, false) {
        let freq_reach = match name.as_str() {
            "modulated-gaussians" => kmax as f64 + 6.0,
            _ => 6.0,
        };
        let a = Axis::symmetric(7.0, 0.25).field("l2")?;
        let b = Axis::symmetric(freq_reach, 0.25).field("l2")?;
        let r: Vec<f64> = radii.iter().copied().filter(|&r| r <= 7.0).collect();
        let mut sup = vec![0.0f64; r.len()];
        let mut defect = 0.0f64;
        for f in &family {
            let field = stft_field(f, &StftWindow::Gaussian, a, b).field("l2")?;
            defect = defect.max((field.total_mass() - f.norm_sq()).abs());
            for (i, &ri) in r.iter().enumerate() {
                sup[i] = sup[i].max(stft_tail(&field, ri).field("l2.radii")?);
            }
        }
        Some(StftTails {
            a_axis: a,
            b_axis: b,
            radii: r,
            sup_tails: sup,
            total_mass_sup_defect: defect,
        })
    } else {
        None
    };
    let mut t = CsvTable::new("tails", &["radius", "spatial_sup", "fourier_sup"]);
    for (i, r) in radii.iter().enumerate() {
        t.push(&[*r, tails.spatial[i], tails.fourier[i]]);
    }
    let mut m = CsvTable::new("modulus", &["h", "translation_modulus_sup"]);
    for (h, v) in shifts.iter().zip(&moduli) {
        m.push(&[*h, *v]);
    }
    Ok(CommandOutput {
        config: json!({ "l2": cfg.l2 }),
        result: json!({
            "family_size": family.len(),
            "window": family[0].window(),
            "samples": family[0].len(),
            "tails": tails,
            "translation_modulus": { "h": shifts, "sup": moduli },
            "stft": stft,
        }),
        tables: vec![t, m],
        inconclusive: false,
    })
}

fn umbrella_fn(spec: &str) -> Result<Box<dyn Fn(Complex64) -> f64 + Sync>, CliError> {
    let bad = || CliError::config(format!("umbrella.umbrella: cannot parse '{spec}'"));
    if spec == "zero" {
        return Ok(Box::new(|_| 0.0));
    }
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    let nums = crate::config::parse_list("umbrella.umbrella", args)?;
    let [c, s] = nums[..] else { return Err(bad()) };
    if c < 0.0 {
        return Err(CliError::config("umbrella.umbrella: amplitude must be nonnegative"));
    }
    match kind {
        "power" => Ok(Box::new(move |x: Complex64| c * (1.0 - x.norm_sqr()).max(0.0).powf(s))),
        "gaussian" => Ok(Box::new(move |x: Complex64| c * (-s * x.norm_sqr()).exp())),
        _ => Err(bad()),
    }
}

pub fn umbrella(cfg: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let (frame, exhaustion) = resolve_frame(&mut cfg.frame)?;
    let s = &mut cfg.umbrella;
    let u = umbrella_fn(fill(&mut s.umbrella, "zero".into()))?;
    let delta = positive("umbrella.delta", *fill(&mut s.delta, 0.5))?;
    let eps_net = *fill(&mut s.eps_net, delta / 4.0);
    let cells = ShellCells {
        radial: *fill(&mut s.radial_cells, ShellCells::default().radial),
        angular: *fill(&mut s.angular_cells, ShellCells::default().angular),
    };
    let bound = umbrella_capacity(&frame, u, delta, &exhaustion, eps_net, cells).field("umbrella")?;
    let mut result = to_value(&bound);
    // u128 does not fit a JSON number portably
    result["exact"] = match bound.exact {
        Some(v) => json!(v.to_string()),
        None => Value::Null,
    };
    Ok(CommandOutput {
        config: json!({ "frame": cfg.frame, "umbrella": cfg.umbrella }),
        result,
        tables: Vec::new(),
        inconclusive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text).unwrap()
    }

    #[test]
    fn frame_tails_monomials() {
        let mut c = cfg("[family]\npreset = \"monomials:0..10\"\n[frame]\nn_radial = 64\nn_angular = 64\n");
        let out = frame_tails(&mut c).unwrap();
        assert_eq!(out.tables[0].rows.len(), 20);
        let q: Vec<f64> = out.result["profile"]["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert!(q.windows(2).all(|w| w[1] < w[0]));
        // ‖z^m‖^2 = 1/(m+1), so tail(z^m, R) = (1 - R^{2m+2})/(m+1)
        for (n, &qn) in q.iter().enumerate().take(5) {
            let r = 1.0 - 0.5f64.powi(n as i32 + 1);
            let want = (0..=10)
                .map(|m| (1.0 - r.powi(2 * m + 2)) / (m as f64 + 1.0))
                .fold(0.0, f64::max);
            assert!((qn - want).abs() < 1e-8, "level {}: {qn} vs {want}", n + 1);
        }
    }

    #[test]
    fn frame_tails_config_errors() {
        let mut c = cfg("[family]\ncoefficients = []\n");
        assert_eq!(frame_tails(&mut c).err().unwrap().exit_code(), 2);
        let mut c = cfg("[family]\npreset = \"basis:0..3\"\n[frame]\ndepth = 0\n");
        let e = frame_tails(&mut c).err().unwrap();
        assert!(e.to_string().contains("frame.depth"), "{e}");
        let mut c = cfg("[family]\npreset = \"basis:0..3\"\n[frame]\nspace = \"sobolev\"\n");
        assert_eq!(frame_tails(&mut c).err().unwrap().exit_code(), 2);
    }

    #[test]
    fn umbrella_presets() {
        assert_eq!(umbrella_fn("zero").unwrap()(Complex64::new(0.5, 0.0)), 0.0);
        assert!((umbrella_fn("power:2,1").unwrap()(Complex64::new(0.5, 0.0)) - 1.5).abs() < 1e-15);
        assert!(umbrella_fn("power:2").is_err());
        assert!(umbrella_fn("spline:1,1").is_err());
    }
}
