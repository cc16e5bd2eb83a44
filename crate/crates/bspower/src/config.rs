//! Run configuration.
//!
//! Values are layered: built-in defaults, then a TOML file (`--config` or the
//! `BSPOWER_CONFIG` environment variable), then command-line flags. Sections
//! of the file are `[channel]`, `[powermodel.*]`, `[harness]` and `[output]`;
//! unknown keys are rejected.

use std::path::{Path, PathBuf};

use bspower_core::channel::Scenario;
use bspower_core::harness::{Family, Scheme, SchemePower};
use bspower_core::powermodel::{
    AffineParams, BasebandRow, ComponentParams, EfficiencyCurve, LossCurve, ParameterizedParams,
    PiecewiseLinear,
};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::rates::{RateGrid, Spacing};

/// Environment variable holding the default configuration path.
pub const CONFIG_ENV: &str = "BSPOWER_CONFIG";

/// Named single-sector affine parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AffinePreset {
    /// LTE macro sector, one transmit antenna (186 W idle, 107 W sleep).
    #[default]
    Macro,
    /// Deep sleep mode, shallow slope (170 W idle, 10 W sleep).
    DeepSleep,
    /// Consumption dominated by transmit power (1 W idle, 1 W sleep).
    TransmitDominated,
}

impl AffinePreset {
    /// Per-sector parameters of the preset.
    pub fn params(self) -> AffineParams {
        match self {
            AffinePreset::Macro => AffineParams::macro_sector(1).expect("preset"),
            AffinePreset::DeepSleep => AffineParams::deep_sleep_sector(),
            AffinePreset::TransmitDominated => AffineParams::transmit_dominated_sector(),
        }
    }
}

/// Output encoding of sweep results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// One header line and one row per (rate, scheme).
    #[default]
    Csv,
    /// Array of records with the CSV column names as keys.
    Json,
}

/// Overrides of affine coefficients.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AffineOverride {
    /// Idle power (W).
    pub idle_w: Option<f64>,
    /// Slope.
    pub slope: Option<f64>,
    /// Sleep power (W).
    pub sleep_w: Option<f64>,
    /// Maximum RF output (W).
    pub max_tx_power_w: Option<f64>,
}

impl AffineOverride {
    fn apply(&self, base: AffineParams) -> AffineParams {
        AffineParams {
            idle_w: self.idle_w.unwrap_or(base.idle_w),
            slope: self.slope.unwrap_or(base.slope),
            sleep_w: self.sleep_w.unwrap_or(base.sleep_w),
            max_tx_power_w: self.max_tx_power_w.unwrap_or(base.max_tx_power_w),
            sectors: base.sectors,
        }
    }
}

/// `[powermodel.affine]`: the single-sector model of the TDMA sweeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AffineSection {
    /// Starting parameter set.
    pub preset: AffinePreset,
    /// Idle power replacing the preset's (W).
    pub idle_w: Option<f64>,
    /// Slope replacing the preset's.
    pub slope: Option<f64>,
    /// Sleep power replacing the preset's (W).
    pub sleep_w: Option<f64>,
    /// Maximum RF output replacing the preset's (W).
    pub max_tx_power_w: Option<f64>,
}

impl AffineSection {
    /// Preset with the overrides applied.
    pub fn params(&self) -> AffineParams {
        AffineOverride {
            idle_w: self.idle_w,
            slope: self.slope,
            sleep_w: self.sleep_w,
            max_tx_power_w: self.max_tx_power_w,
        }
        .apply(self.preset.params())
    }
}

/// `[powermodel.ofdma]`: per-sector models for one and two transmit antennas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmaSection {
    /// One antenna.
    pub one: AffineOverride,
    /// Two antennas.
    pub two: AffineOverride,
}

/// `[powermodel.component]`: overrides of the component model. Curves are
/// given as `[[x, y], ...]` point lists and interpolated linearly.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComponentSection {
    /// Sectors per site.
    pub sectors: Option<u32>,
    /// Maximum RF output per sector (W).
    pub max_tx_power_w: Option<f64>,
    /// Feeder loss.
    pub feeder_loss: Option<f64>,
    /// PA bias power while active (W).
    pub pa_idle_w: Option<f64>,
    /// PA power in sleep mode (W).
    pub pa_sleep_w: Option<f64>,
    /// RF power per chain (W).
    pub rf_per_chain_w: Option<f64>,
    /// Cooling overhead.
    pub cooling_loss: Option<f64>,
    /// Rated DC-DC output (W).
    pub dc_max_output_w: Option<f64>,
    /// Rated AC-DC output (W).
    pub ac_max_output_w: Option<f64>,
    /// PA efficiency versus per-PA output power (W).
    pub pa_efficiency: Option<Vec<[f64; 2]>>,
    /// DC-DC loss versus rated-to-actual output ratio.
    pub dc_loss: Option<Vec<[f64; 2]>>,
    /// AC-DC loss versus rated-to-actual output ratio.
    pub ac_loss: Option<Vec<[f64; 2]>>,
    /// Baseband rows replacing the default table.
    pub baseband: Option<Vec<BasebandRow>>,
}

fn table(key: &str, points: &[[f64; 2]]) -> Result<PiecewiseLinear> {
    Ok(PiecewiseLinear::new(
        key,
        points.iter().map(|p| (p[0], p[1])).collect(),
    )?)
}

impl ComponentSection {
    /// Applies the overrides to the default component model.
    pub fn resolve(&self) -> Result<ComponentParams> {
        let base = ComponentParams::default();
        let params = ComponentParams {
            sectors: self.sectors.unwrap_or(base.sectors),
            max_tx_power_w: self.max_tx_power_w.unwrap_or(base.max_tx_power_w),
            feeder_loss: self.feeder_loss.unwrap_or(base.feeder_loss),
            pa_efficiency: match &self.pa_efficiency {
                Some(points) => EfficiencyCurve::Table(table("pa_efficiency", points)?),
                None => base.pa_efficiency,
            },
            pa_idle_w: self.pa_idle_w.unwrap_or(base.pa_idle_w),
            pa_sleep_w: self.pa_sleep_w.unwrap_or(base.pa_sleep_w),
            rf_per_chain_w: self.rf_per_chain_w.unwrap_or(base.rf_per_chain_w),
            baseband: self.baseband.clone().unwrap_or(base.baseband),
            dc_loss: match &self.dc_loss {
                Some(points) => LossCurve::Table(table("dc_loss", points)?),
                None => base.dc_loss,
            },
            ac_loss: match &self.ac_loss {
                Some(points) => LossCurve::Table(table("ac_loss", points)?),
                None => base.ac_loss,
            },
            cooling_loss: self.cooling_loss.unwrap_or(base.cooling_loss),
            dc_max_output_w: self.dc_max_output_w.or(base.dc_max_output_w),
            ac_max_output_w: self.ac_max_output_w.or(base.ac_max_output_w),
        };
        params.validate()?;
        Ok(params)
    }
}

/// `[powermodel]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerModelSection {
    /// TDMA sweep model.
    pub affine: AffineSection,
    /// OFDMA models per antenna count.
    pub ofdma: OfdmaSection,
    /// Parameterized model.
    pub parameterized: ParameterizedParams,
    /// Component model.
    pub component: ComponentSection,
}

/// `[harness]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessSection {
    /// Monte Carlo trials per rate point.
    pub trials: usize,
    /// Master seed; random (and logged) when absent.
    pub seed: Option<u64>,
    /// Worker threads; all cores when absent.
    pub workers: Option<usize>,
    /// Per-user target rates.
    pub rates: RateGrid,
    /// Spacing of the rate grid.
    pub spacing: Spacing,
    /// Schemes of the `compare` subcommand.
    pub schemes: Option<Vec<Scheme>>,
}

impl Default for HarnessSection {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: None,
            workers: None,
            rates: RateGrid::default(),
            spacing: Spacing::Linear,
            schemes: None,
        }
    }
}

/// `[output]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Destination file; standard output when absent.
    pub path: Option<PathBuf>,
    /// Encoding.
    pub format: Format,
}

/// Contents of a configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Scenario.
    pub channel: Scenario,
    /// Power models.
    pub powermodel: PowerModelSection,
    /// Monte Carlo settings.
    pub harness: HarnessSection,
    /// Result destination.
    pub output: OutputSection,
}

impl FileConfig {
    /// Parses TOML text. `path` is only used in diagnostics.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|err| AppError::ConfigFile {
            path: path.to_path_buf(),
            message: err.to_string(),
        })
    }

    /// Reads and parses a TOML file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| AppError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }
}

/// Where the master seed came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    /// `--seed`.
    Flag,
    /// `[harness] seed`.
    File,
    /// Drawn from the operating system.
    Random,
}

/// Fully resolved and validated parameters of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Scenario.
    pub scenario: Scenario,
    /// Affine models used by the sweeps.
    pub power: ResolvedPower,
    /// Parameterized model.
    pub parameterized: ParameterizedParams,
    /// Component model.
    pub component: ComponentParams,
    /// Trials per rate point.
    pub trials: usize,
    /// Master seed.
    pub seed: u64,
    /// Origin of `seed`.
    pub seed_source: SeedSource,
    /// Worker threads.
    pub workers: usize,
    /// Rate grid.
    pub rates: RateGrid,
    /// Grid spacing.
    pub spacing: Spacing,
    /// Schemes configured in the file, if any.
    pub schemes: Option<Vec<Scheme>>,
    /// Result destination.
    pub output: OutputSection,
}

/// Affine models of both families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedPower {
    /// Single-sector TDMA model.
    pub tdma: AffineParams,
    /// Single-sector OFDMA models for one and two antennas.
    pub ofdma: [AffineParams; 2],
}

impl ResolvedPower {
    /// Models in the form used by the evaluators.
    pub fn scheme_power(&self) -> SchemePower {
        SchemePower {
            tdma: self.tdma,
            ofdma: self.ofdma,
        }
    }
}

/// Values given on the command line; `None` leaves the file or default value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Master seed.
    pub seed: Option<u64>,
    /// Worker threads.
    pub workers: Option<usize>,
    /// Trials per rate point.
    pub trials: Option<usize>,
    /// Rate grid.
    pub rates: Option<RateGrid>,
    /// Grid spacing.
    pub spacing: Option<Spacing>,
    /// TDMA preset, replacing the file's `[powermodel.affine]`.
    pub preset: Option<AffinePreset>,
    /// Result path.
    pub out: Option<PathBuf>,
    /// Result encoding.
    pub format: Option<Format>,
}

impl RunConfig {
    /// Layers `overrides` over `file` and validates the result.
    pub fn resolve(file: FileConfig, overrides: &Overrides) -> Result<Self> {
        let scenario = file.channel;
        scenario
            .validate()
            .map_err(|e| AppError::from(e).in_section("channel"))?;

        let affine = match overrides.preset {
            Some(preset) => preset.params(),
            None => file.powermodel.affine.params(),
        };
        affine
            .validate()
            .map_err(|e| AppError::from(e).in_section("powermodel.affine"))?;
        let defaults = SchemePower::default();
        let ofdma = [
            file.powermodel.ofdma.one.apply(defaults.ofdma[0]),
            file.powermodel.ofdma.two.apply(defaults.ofdma[1]),
        ];
        for (name, model) in ["one", "two"].iter().zip(&ofdma) {
            model
                .validate()
                .map_err(|e| AppError::from(e).in_section(&format!("powermodel.ofdma.{name}")))?;
        }
        let parameterized = file.powermodel.parameterized;
        parameterized
            .validate()
            .map_err(|e| AppError::from(e).in_section("powermodel.parameterized"))?;
        let component = file
            .powermodel
            .component
            .resolve()
            .map_err(|e| e.in_section("powermodel.component"))?;

        let harness = file.harness;
        let trials = overrides.trials.unwrap_or(harness.trials);
        if trials == 0 {
            return Err(AppError::config("harness.trials", "must be at least 1"));
        }
        let workers = match overrides.workers.or(harness.workers) {
            Some(0) => return Err(AppError::config("harness.workers", "must be at least 1")),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let rates = overrides.rates.unwrap_or(harness.rates);
        rates
            .validate()
            .map_err(|reason| AppError::config("harness.rates", reason))?;
        let (seed, seed_source) = match (overrides.seed, harness.seed) {
            (Some(seed), _) => (seed, SeedSource::Flag),
            (None, Some(seed)) => (seed, SeedSource::File),
            (None, None) => (rand::random(), SeedSource::Random),
        };
        let mut output = file.output;
        if let Some(path) = &overrides.out {
            output.path = Some(path.clone());
        }
        if let Some(format) = overrides.format {
            output.format = format;
        }
        Ok(Self {
            scenario,
            power: ResolvedPower {
                tdma: affine,
                ofdma,
            },
            parameterized,
            component,
            trials,
            seed,
            seed_source,
            workers,
            rates,
            spacing: overrides.spacing.unwrap_or(harness.spacing),
            schemes: harness.schemes,
            output,
        })
    }

    /// Rate points of the sweep.
    pub fn rate_points(&self) -> Vec<f64> {
        self.rates.points(self.spacing)
    }
}

/// Picks the family for `schemes`, checking that every scheme runs on it.
pub fn family_for(schemes: &[Scheme], requested: Option<Family>) -> Result<Family> {
    if schemes.is_empty() {
        return Err(AppError::config(
            "schemes",
            "at least one scheme is required",
        ));
    }
    let family = requested.unwrap_or(if schemes.contains(&Scheme::Raps) {
        Family::Ofdma
    } else {
        Family::Tdma
    });
    if let Some(bad) = schemes.iter().find(|s| !s.supports(family)) {
        let name = match family {
            Family::Tdma => "tdma",
            Family::Ofdma => "ofdma",
        };
        return Err(AppError::config(
            "schemes",
            format!("`{bad}` does not run on the {name} family"),
        ));
    }
    Ok(family)
}
