use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::diagnostics::BudgetOptions;
use crate::error::{Error, Result};
use crate::integrate::StepperConfig;
use crate::models::PhysParams;
use crate::spectral::GridSpec;

pub const FAMILIES: [&str; 2] = ["taylor-green-mhd", "random-bandlimited"];

/// How the density perturbation amplitude depends on the volume viscosity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityScaling {
    /// `a₀` has amplitude `amplitude · density_scale`.
    Fixed,
    /// `a₀` has amplitude `amplitude · density_scale / κ`, which keeps
    /// `κ‖a₀‖` fixed across a sweep.
    InverseKappa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataConfig {
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_density")]
    pub density: DensityScaling,
    #[serde(default = "default_one")]
    pub density_scale: f64,
    /// Weight of the gradient part added to `u₀` (0 keeps `u₀ = U₀`).
    #[serde(default)]
    pub compressive_fraction: f64,
}

fn default_family() -> String {
    FAMILIES[0].to_string()
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_density() -> DensityScaling {
    DensityScaling::InverseKappa
}

fn default_one() -> f64 {
    1.0
}

impl Default for InitialDataConfig {
    fn default() -> Self {
        InitialDataConfig {
            family: default_family(),
            amplitude: default_amplitude(),
            seed: 0,
            density: default_density(),
            density_scale: 1.0,
            compressive_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Gnuplot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    /// No files are written when absent.
    #[serde(default)]
    pub directory: Option<PathBuf>,
    /// Steps between checkpoints; 0 writes only the final one.
    #[serde(default)]
    pub checkpoint_stride: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Gnuplot]
}

impl Default for OutputsConfig {
    fn default() -> Self {
        OutputsConfig {
            directory: None,
            checkpoint_stride: 0,
            formats: default_formats(),
        }
    }
}

impl OutputsConfig {
    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

fn default_stepper() -> StepperConfig {
    StepperConfig::new(0.01, 1.0)
}

/// Everything a single coupled run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub params: PhysParams,
    #[serde(default = "default_stepper")]
    pub stepper: StepperConfig,
    #[serde(default)]
    pub initial_data: InitialDataConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
    #[serde(default)]
    pub budget: BudgetOptions,
}

impl RunConfig {
    pub fn new(grid: GridSpec, params: PhysParams) -> Self {
        RunConfig {
            grid,
            params,
            stepper: default_stepper(),
            initial_data: InitialDataConfig::default(),
            outputs: OutputsConfig::default(),
            budget: BudgetOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate().map_err(|e| prefix("grid", e))?;
        self.grid.require_2d().map_err(|e| prefix("grid.d", e))?;
        self.params.validate().map_err(|e| prefix("params", e))?;
        self.stepper.validate()?;
        if self.stepper.cfl > 1.0 {
            return Err(Error::param("stepper.cfl", "must not exceed 1"));
        }
        if self.stepper.t_end <= 0.0 {
            return Err(Error::param("stepper.t_end", "must be positive"));
        }
        let init = &self.initial_data;
        if !FAMILIES.contains(&init.family.as_str()) {
            return Err(Error::UnknownFamily(init.family.clone()));
        }
        if !(init.amplitude >= 0.0 && init.amplitude.is_finite()) {
            return Err(Error::param(
                "initial_data.amplitude",
                "must be non-negative and finite",
            ));
        }
        if !(init.density_scale >= 0.0 && init.density_scale.is_finite()) {
            return Err(Error::param(
                "initial_data.density_scale",
                "must be non-negative and finite",
            ));
        }
        if !(init.compressive_fraction >= 0.0 && init.compressive_fraction.is_finite()) {
            return Err(Error::param(
                "initial_data.compressive_fraction",
                "must be non-negative and finite",
            ));
        }
        self.budget.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn prefix(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => Error::InvalidParameter {
            field: format!("{section}.{field}"),
            reason,
        },
        Error::InvalidGrid(reason) => Error::InvalidParameter {
            field: section.to_string(),
            reason,
        },
        Error::UnsupportedDimension(d) => Error::InvalidParameter {
            field: section.to_string(),
            reason: format!("only d = 2 is supported, got {d}"),
        },
        other => other,
    }
}

/// A κ-sweep: the base run repeated for each volume viscosity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    /// Values of `κ = λ + 2μ`; `λ` is derived per member.
    pub kappa_values: Vec<f64>,
    /// Maximum number of concurrent members; defaults to available cores.
    #[serde(default)]
    pub parallelism: Option<usize>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.kappa_values.len() < 3 {
            return Err(Error::param("kappa_values", "need at least 3 values"));
        }
        if self
            .kappa_values
            .iter()
            .any(|k| !(*k > 0.0 && k.is_finite()))
        {
            return Err(Error::param("kappa_values", "all values must be positive"));
        }
        if self.kappa_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("kappa_values", "must be strictly increasing"));
        }
        if self.parallelism == Some(0) {
            return Err(Error::param("parallelism", "must be at least 1"));
        }
        for &k in &self.kappa_values {
            let mut p = self.base.params;
            p.set_kappa(k);
            p.validate().map_err(|e| prefix("kappa_values", e))?;
        }
        Ok(())
    }

    /// Member configuration for `kappa_values[i]`.
    pub fn member(&self, i: usize) -> RunConfig {
        let mut c = self.base.clone();
        c.params.set_kappa(self.kappa_values[i]);
        if let Some(dir) = &self.base.outputs.directory {
            c.outputs.directory = Some(dir.join(format!("kappa_{i:02}")));
        }
        c
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Config(format!(
            "{origin}: line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let c: RunConfig = parse(text, "config")?;
    c.validate()?;
    Ok(c)
}

/// Reads and validates a run configuration.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let c: RunConfig = parse(&read(path)?, &path.display().to_string())?;
    c.validate()?;
    Ok(c)
}

pub fn parse_sweep_config(text: &str) -> Result<SweepConfig> {
    let c: SweepConfig = parse(text, "sweep config")?;
    c.validate()?;
    Ok(c)
}

pub fn load_sweep_config(path: impl AsRef<Path>) -> Result<SweepConfig> {
    let path = path.as_ref();
    let c: SweepConfig = parse(&read(path)?, &path.display().to_string())?;
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"grid": {"n": 32}, "params": {"mu": 0.5, "lambda": 9.0, "nu": 0.5}}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.stepper.cfl, 0.4);
        assert_eq!(c.initial_data.family, "taylor-green-mhd");
        assert_eq!(c.budget.c_universal, 1.0);
        assert!(c.outputs.directory.is_none());
    }

    #[test]
    fn round_trip_is_identical() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(parse_config(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn negative_viscosity_names_parabolicity() {
        let text = MINIMAL.replace("\"mu\": 0.5", "\"mu\": -1");
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(
            e.contains("strong parabolicity") && e.contains("params.mu"),
            "{e}"
        );
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let text = "{\n \"grid\": {\"n\": 32},\n \"params\": {\"mu\": 0.5, \"lambda\": 9.0, \"nu\": 0.5},\n \"colour\": 1\n}";
        let e = parse_config(text).unwrap_err().to_string();
        assert!(e.contains("line 4") && e.contains("colour"), "{e}");
    }

    #[test]
    fn sweep_rejects_repeated_kappa() {
        let text = format!(r#"{{"base": {MINIMAL}, "kappa_values": [10, 10, 100]}}"#);
        assert!(parse_sweep_config(&text).is_err());
    }
}
