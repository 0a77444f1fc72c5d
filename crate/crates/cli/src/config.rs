//! Run configuration: a TOML file with one table per concern. Every key is
//! optional; command-line flags override file values, and defaults fill
//! the rest before the command runs. The resolved sections are echoed
//! into each report.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A complex coefficient. Reads `{ re, im }` or a bare real number;
/// always written as `{ "re": …, "im": … }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "CoefInput")]
pub struct Coef {
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefInput {
    Real(f64),
    Complex {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl From<CoefInput> for Coef {
    fn from(c: CoefInput) -> Self {
        match c {
            CoefInput::Real(re) => Coef { re, im: 0.0 },
            CoefInput::Complex { re, im } => Coef { re, im },
        }
    }
}

impl Coef {
    pub fn real(re: f64) -> Self {
        Coef { re, im: 0.0 }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub output: OutputSection,
    pub frame: FrameSection,
    pub family: FamilySection,
    pub toeplitz: ToeplitzSection,
    pub hankel: HankelSection,
    pub besov: BesovSection,
    pub l2: L2Section,
    pub umbrella: UmbrellaSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_timestamp: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSection {
    /// `bergman`, `fock`, `hardy` or `paley-wiener`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    /// Paley-Wiener band `[-a, a]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_radial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_angular: Option<usize>,
    /// `ball`, `hyperbolic`, `linear`, `boxes` or `arcs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Step of the hyperbolic schedule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    /// Verdict threshold on `q_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySection {
    /// `monomials:A..B` (raw `z^m`) or `basis:A..B` (the frame's reference
    /// basis), ranges inclusive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Coefficient vectors in the frame's reference basis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Vec<Coef>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToeplitzSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_radial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_angular: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compact_below: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noncompact_above: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization_radii: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization_angles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball_radii: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HankelSection {
    /// Fourier coefficients `ĝ(0), ĝ(1), …` of the symbol.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fourier: Option<Vec<Coef>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vmo_radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compact_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noncompact_ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesovSection {
    /// `hardy`, `dirichlet`, `bergman` or `normalized`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Exponent of the `bergman` preset `(1 - |z|^2)^t`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Levels `δ_n = 2^{-n}`, `n = 1..=depth`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_radial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_angular: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct L2Section {
    /// `modulated-gaussians` or `translated-gaussians`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    /// Number of shifts in `[0, 1]` for the translated family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stft: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UmbrellaSection {
    /// `zero`, `power:C,S` (`C (1-|x|^2)^S`) or `gaussian:C,S` (`C e^{-S|x|^2}`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub umbrella: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_net: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_cells: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Sets `slot` from the flag when one was given.
pub fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

/// Fills `slot` with `value` when neither file nor flag set it.
pub fn fill<T>(slot: &mut Option<T>, value: T) -> &T {
    slot.get_or_insert(value)
}

/// Comma-separated numbers, as used by `--radii` and `--fourier`.
pub fn parse_list(field: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::config(format!("{field}: '{t}' is not a number")))
        })
        .collect()
}
