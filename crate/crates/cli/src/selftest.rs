//! Oracle suite behind `kolmo-lab selftest`. Every check compares a
//! library computation with a closed form or an independent route and
//! prints one line; the output is deterministic for a fixed seed.

use std::f64::consts::PI;

use kolmo_core::besov::{besov_tail, bp_admissibility, family_besov_profile, presets, BesovSpec, BesovWeight};
use kolmo_core::euclid::{self, family_tails, spectral_mass, stft_field, Axis, SampledSignal, StftWindow};
use kolmo_core::frames::{mazur_form, tail_mass, umbrella_capacity, Exhaustion, FrameSpec, ScheduleKind, ShellCells};
use kolmo_core::numerics::{GridResolution, Measure, QuadratureGrid};
use kolmo_core::operators::{
    berezin_operator, berezin_symbol, compactness_report, hankel_matrix, hankel_oracle, toeplitz_matrix,
    BoundaryGrid, OperatorKind, ReportParams, SymbolField, Verdict,
};
use kolmo_core::spaces::{kernel_eval, FunctionRep, SpaceSpec};
use kolmo_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

type Outcome = kolmo_core::Result<Check>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> Vec<Complex64> {
    (0..=deg)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn reproducing(rng: &mut ChaCha8Rng) -> Outcome {
    let space = SpaceSpec::bergman();
    let grid = QuadratureGrid::disk(128, 256, 1.0, Measure::NormalizedArea)?;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let deg = rng.random_range(0..=10);
        let f = FunctionRep::polynomial(random_poly(rng, deg));
        let w = Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..2.0 * PI));
        let ip = grid.integrate(|z| f.eval(z) * kernel_eval(&space, &[z], &[w]).unwrap_or(c(f64::NAN)).conj())?;
        worst = worst.max((ip - f.eval(w)).norm());
    }
    Ok(Check::new("reproducing-property", worst <= 1e-8, format!("max error {worst:.3e} <= 1e-8")))
}

fn frame_tails() -> Outcome {
    let frame = FrameSpec::bergman();
    let space = SpaceSpec::bergman();
    let ex = Exhaustion::new(ScheduleKind::EuclideanRadius, vec![0.5, 0.9, 0.99])?;
    let mut worst = 0.0f64;
    for j in 0..=20 {
        let f = FunctionRep::basis_element(&space, j);
        for (level, r) in [0.5f64, 0.9, 0.99].iter().enumerate() {
            let t = tail_mass(&frame, &f, &ex, level + 1)?;
            worst = worst.max((t - (1.0 - r.powi(2 * j as i32 + 2))).abs());
        }
    }
    Ok(Check::new("frame-tail-closed-form", worst <= 1e-8, format!("max error {worst:.3e} <= 1e-8")))
}

fn mazur(rng: &mut ChaCha8Rng) -> Outcome {
    let frame = FrameSpec::bergman().with_resolution(GridResolution::new(96, 128));
    let space = SpaceSpec::bergman();
    let ex = Exhaustion::ball(8)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let deg = rng.random_range(0..=6);
        let f = FunctionRep::in_space(&space, random_poly(rng, deg));
        for level in 1..=8 {
            let m = mazur_form(&frame, &f, &ex, level)?;
            let t = tail_mass(&frame, &f, &ex, level)?;
            worst = worst.max((m + c(t)).norm());
        }
    }
    Ok(Check::new("mazur-identity", worst <= 1e-6, format!("max |form + tail| {worst:.3e} <= 1e-6")))
}

fn toeplitz_oracles() -> Outcome {
    let res = GridResolution::new(64, 128);
    let id = toeplitz_matrix(&SymbolField::constant(c(1.0)), 20, res)?;
    let e1 = id.matrix().max_abs_diff(&kolmo_core::numerics::DenseComplexMatrix::identity(21));
    let t = toeplitz_matrix(&SymbolField::real("|w|^2", |w| w.norm_sqr()), 20, res)?;
    let mut e2 = 0.0f64;
    for i in 0..=20 {
        for j in 0..=20 {
            let want = if i == j { (j as f64 + 1.0) / (j as f64 + 2.0) } else { 0.0 };
            e2 = e2.max((t.matrix()[(i, j)] - c(want)).norm());
        }
    }
    Ok(Check::new(
        "toeplitz-oracles",
        e1 <= 1e-12 && e2 <= 1e-10,
        format!("identity {e1:.3e} <= 1e-12, |w|^2 diagonal {e2:.3e} <= 1e-10"),
    ))
}

fn berezin_dual_route(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut terms = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=(3 - a) {
                terms.push((a, b, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            }
        }
        let l1: f64 = terms.iter().map(|t| t.2.norm()).sum();
        let u = SymbolField::new("poly", move |w| {
            terms.iter().map(|&(a, b, k)| k / l1 * w.powu(a) * w.conj().powu(b)).sum()
        });
        let t = toeplitz_matrix(&u, 64, GridResolution::new(128, 256))?;
        for k in 0..8 {
            let z = Complex64::from_polar(0.8, k as f64 * PI / 4.0);
            let a = berezin_operator(&t, z)?.value;
            let b = berezin_symbol(&u, z, GridResolution::new(96, 192))?;
            worst = worst.max((a - b).norm());
        }
    }
    let one = toeplitz_matrix(&SymbolField::constant(c(1.0)), 64, GridResolution::new(64, 256))?;
    let b1 = (berezin_operator(&one, Complex64::new(0.6, 0.3))?.value - c(1.0)).norm();
    Ok(Check::new(
        "berezin-dual-route",
        worst <= 1e-6 && b1 <= 1e-10,
        format!("|z| = 0.8, deg 64: {worst:.3e} <= 1e-6; u = 1: {b1:.3e} <= 1e-10"),
    ))
}

fn dichotomy() -> Outcome {
    let params = ReportParams {
        resolution: GridResolution::new(96, 192),
        ..ReportParams::default()
    };
    let vanishing = compactness_report(
        OperatorKind::Toeplitz,
        &SymbolField::real("1-|w|^2", |w| 1.0 - w.norm_sqr()),
        &params,
    )?;
    let one = compactness_report(OperatorKind::Toeplitz, &SymbolField::constant(c(1.0)), &params)?;
    let ok = vanishing.verdict == Verdict::CompactEvidence
        && vanishing.singular_values.values[32] < 0.1
        && one.verdict == Verdict::NoncompactEvidence
        && one.singular_values.values.iter().all(|&s| s >= 0.99);
    Ok(Check::new(
        "compactness-dichotomy",
        ok,
        format!(
            "1-|w|^2: {:?}, sigma_32 = {:.3e}; 1: {:?}",
            vanishing.verdict, vanishing.singular_values.values[32], one.verdict
        ),
    ))
}

fn hankel_check() -> Outcome {
    let coeffs: Vec<Complex64> = (0..=32).map(|k| Complex64::new(1.0 / (k as f64 + 1.0), (k as f64).cos() * 0.1)).collect();
    let g = SymbolField::from_fourier(coeffs.clone());
    let h = hankel_matrix(&g, 16, BoundaryGrid::new(256)?)?;
    let err = h.matrix().max_abs_diff(&hankel_oracle(&coeffs, 16));
    let w2 = hankel_matrix(&SymbolField::from_fourier(vec![c(0.0), c(0.0), c(1.0)]), 16, BoundaryGrid::new(256)?)?;
    let rank = kolmo_core::numerics::singular_values(w2.matrix())?
        .iter()
        .filter(|&&s| s > 1e-10)
        .count();
    Ok(Check::new(
        "hankel-oracle",
        err <= 1e-8 && rank == 3,
        format!("matrix error {err:.3e} <= 1e-8, rank of w^2 section {rank} = 3"),
    ))
}

fn hardy_norm() -> Outcome {
    let spec = BesovSpec::new(2.0, 1, presets::hardy(1))?;
    let grid = QuadratureGrid::disk(64, 128, 1.0, Measure::NormalizedArea)?;
    let mut worst = 0.0f64;
    for m in 1..=30 {
        let n = kolmo_core::besov::besov_norm(&spec, &FunctionRep::monomial(m), &grid)?;
        worst = worst.max((n * n - m as f64 / (m as f64 + 1.0)).abs());
    }
    Ok(Check::new("hardy-derivative-norm", worst <= 1e-8, format!("max error {worst:.3e} <= 1e-8")))
}

fn classical_dichotomy() -> Outcome {
    let shifts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let tr = family_tails(&euclid::presets::translated_gaussians(&shifts)?, &[10.0])?;
    let md = family_tails(&euclid::presets::modulated_gaussians(20)?, &[10.0])?;
    let ok = tr.spatial[0] < 1e-6 && tr.fourier[0] < 1e-6 && md.fourier[0] > 0.9;
    Ok(Check::new(
        "translation-modulation-dichotomy",
        ok,
        format!(
            "translated: spatial {:.3e}, fourier {:.3e} < 1e-6; modulated fourier {:.6} > 0.9",
            tr.spatial[0], tr.fourier[0], md.fourier[0]
        ),
    ))
}

fn moyal(rng: &mut ChaCha8Rng) -> Outcome {
    let f = SampledSignal::on_default_window(|x| Complex64::new(euclid::gaussian(x - 0.5), 0.0) * Complex64::from_polar(1.0, 3.0 * x))?;
    let axis = Axis::symmetric(6.0, 0.25)?;
    let field = stft_field(&f, &StftWindow::Gaussian, axis, axis)?;
    let moyal = (field.total_mass() - f.norm_sq()).abs();
    let samples: Vec<Complex64> = (0..512)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let s = SampledSignal::new(samples, 0.05, -12.8)?;
    let planch = (spectral_mass(&s)? - s.norm_sq()).abs();
    Ok(Check::new(
        "moyal-plancherel",
        moyal <= 1e-6 && planch <= 1e-10,
        format!("Moyal {moyal:.3e} <= 1e-6, Plancherel {planch:.3e} <= 1e-10"),
    ))
}

fn umbrella(rng: &mut ChaCha8Rng) -> Outcome {
    let frame = FrameSpec::bergman().with_resolution(GridResolution::new(64, 64));
    let ex = Exhaustion::ball(16)?;
    let cells = ShellCells::default();
    let zero = umbrella_capacity(&frame, |_| 0.0, 0.5, &ex, 0.1, cells)?;
    let mut monotone = true;
    for _ in 0..5 {
        let amp = rng.random_range(0.2..1.0);
        let s = rng.random_range(1.0..3.0);
        let u = move |x: Complex64| amp * (1.0 - x.norm_sqr()).max(0.0).powf(s);
        let base = umbrella_capacity(&frame, u, 0.5, &ex, 0.1, cells)?;
        let shrunk = umbrella_capacity(&frame, move |x| 0.5 * u(x), 0.5, &ex, 0.1, cells)?;
        let wider = umbrella_capacity(&frame, u, 0.8, &ex, 0.1, cells)?;
        monotone &= shrunk.log10_bound <= base.log10_bound && wider.log10_bound <= base.log10_bound;
    }
    Ok(Check::new(
        "umbrella-capacity",
        zero.exact == Some(1) && monotone,
        format!("zero umbrella bound {:?}, monotone {monotone}", zero.exact),
    ))
}

fn besov_tails() -> Outcome {
    let res = GridResolution::new(64, 64);
    let hardy = BesovSpec::new(2.0, 1, presets::hardy(1))?;
    let family: Vec<FunctionRep> = (0..=10).map(FunctionRep::monomial).collect();
    let deltas: Vec<f64> = (1..=8).map(|n| 0.5f64.powi(n)).collect();
    let profile = family_besov_profile(&hardy, &family, &deltas, res)?;
    let monotone = profile.is_nonincreasing(0.0);
    let normalized = BesovSpec::new(2.0, 0, presets::normalized())?;
    let frame = FrameSpec::bergman();
    let space = SpaceSpec::bergman();
    let mut worst = 0.0f64;
    for j in 0..=5 {
        let f = FunctionRep::basis_element(&space, j);
        for &d in &[0.5, 0.1] {
            let ex = Exhaustion::new(ScheduleKind::EuclideanRadius, vec![1.0 - d])?;
            let b = besov_tail(&normalized, &f, d, res)?;
            worst = worst.max((b - tail_mass(&frame, &f, &ex, 1)?).abs());
        }
    }
    let bad = bp_admissibility(2.0, &BesovWeight::Radial(presets::radial_bergman(1.5)))?;
    let good = bp_admissibility(2.0, &BesovWeight::Radial(presets::radial_bergman(0.5)))?;
    let ok = monotone && worst <= 1e-8 && !bad.admissible_hint && good.admissible_hint;
    Ok(Check::new(
        "besov-tails",
        ok,
        format!(
            "monotone {monotone}, J=0 vs frame {worst:.3e} <= 1e-8, t=1.5 admissible {}, t=0.5 admissible {}",
            bad.admissible_hint, good.admissible_hint
        ),
    ))
}

/// Runs every check. A library error inside a check is reported as a
/// failure of that check.
pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results: Vec<(&'static str, Outcome)> = vec![
        ("reproducing-property", reproducing(&mut rng)),
        ("frame-tail-closed-form", frame_tails()),
        ("mazur-identity", mazur(&mut rng)),
        ("toeplitz-oracles", toeplitz_oracles()),
        ("berezin-dual-route", berezin_dual_route(&mut rng)),
        ("compactness-dichotomy", dichotomy()),
        ("hankel-oracle", hankel_check()),
        ("hardy-derivative-norm", hardy_norm()),
        ("translation-modulation-dichotomy", classical_dichotomy()),
        ("moyal-plancherel", moyal(&mut rng)),
        ("umbrella-capacity", umbrella(&mut rng)),
        ("besov-tails", besov_tails()),
    ];
    results
        .into_iter()
        .map(|(name, r)| r.unwrap_or_else(|e| Check::new(name, false, format!("error: {e}"))))
        .collect()
}
