use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use wavequbit::{AdmissibilityQuadrature, FrequencyGrid, ScaleWeighting, WaveletKind};

use crate::error::CliError;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub wavelet: WaveletKind,
    pub weighting: ScaleWeighting,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_count: usize,
    pub stride: usize,
    pub admissibility: AdmissibilityQuadrature,
    /// Zero threshold for the Bell conditions, relative to `max |U_ij|`.
    pub tol_bell: f64,
    pub tol_sep: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            wavelet: WaveletKind::MexicanHat,
            weighting: ScaleWeighting::Unitary,
            omega_min: 2.5,
            omega_max: 40.0,
            omega_count: 96,
            stride: 4,
            admissibility: AdmissibilityQuadrature::default(),
            tol_bell: 1e-10,
            tol_sep: 1e-10,
            out_dir: PathBuf::from("."),
        }
    }
}

/// Values given on the command line; `None` leaves the file/default value.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub wavelet: Option<WaveletKind>,
    pub weighting: Option<ScaleWeighting>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_count: Option<usize>,
    pub stride: Option<usize>,
    pub tol_bell: Option<f64>,
    pub tol_sep: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_file(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = flags.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        take!(wavelet, weighting, omega_min, omega_max, omega_count, stride, tol_bell, tol_sep, out_dir);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies a flat `key = value` file.
    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        for (key, value) in &table {
            let float = || {
                value
                    .as_float()
                    .or_else(|| value.as_integer().map(|i| i as f64))
                    .ok_or_else(|| format!("`{key}` must be a number"))
            };
            let count = || {
                value
                    .as_integer()
                    .and_then(|i| usize::try_from(i).ok())
                    .ok_or_else(|| format!("`{key}` must be a non-negative integer"))
            };
            let string = || {
                value
                    .as_str()
                    .ok_or_else(|| format!("`{key}` must be a string"))
            };
            match key.replace('-', "_").as_str() {
                "wavelet" => self.wavelet = string()?.parse()?,
                "weighting" => self.weighting = string()?.parse()?,
                "omega_min" => self.omega_min = float()?,
                "omega_max" => self.omega_max = float()?,
                "omega_count" => self.omega_count = count()?,
                "stride" => self.stride = count()?,
                "tol_bell" => self.tol_bell = float()?,
                "tol_sep" => self.tol_sep = float()?,
                "xi_min" => self.admissibility.xi_min = float()?,
                "xi_max" => self.admissibility.xi_max = float()?,
                "xi_n" => self.admissibility.n = count()?,
                "out_dir" => self.out_dir = PathBuf::from(string()?),
                other => return Err(format!("unknown config key `{other}`")),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.omega_min > 0.0 && self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(CliError::usage(format!(
                "frequency band needs 0 < omega-min < omega-max, got [{}, {}]",
                self.omega_min, self.omega_max
            )));
        }
        if self.omega_count < 8 {
            return Err(CliError::usage(format!(
                "omega-count must be at least 8, got {}",
                self.omega_count
            )));
        }
        if self.stride < 1 {
            return Err(CliError::usage("stride must be at least 1"));
        }
        if !(self.tol_bell >= 0.0 && self.tol_sep >= 0.0) {
            return Err(CliError::usage("tolerances must be non-negative"));
        }
        Ok(())
    }

    pub fn frequency_grid(&self) -> Result<FrequencyGrid, CliError> {
        Ok(FrequencyGrid::log_spaced(
            self.omega_min,
            self.omega_max,
            self.omega_count,
        )?)
    }

    pub fn output_path(&self, name: &Path) -> PathBuf {
        if name.is_absolute() {
            name.to_path_buf()
        } else {
            self.out_dir.join(name)
        }
    }

    /// The effective configuration as `key = value` lines.
    pub fn to_meta(&self, command: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = \"{command}\"");
        let _ = writeln!(s, "wavelet = \"{}\"", self.wavelet);
        let _ = writeln!(s, "weighting = \"{}\"", self.weighting.name());
        let _ = writeln!(s, "omega_min = {:e}", self.omega_min);
        let _ = writeln!(s, "omega_max = {:e}", self.omega_max);
        let _ = writeln!(s, "omega_count = {}", self.omega_count);
        let _ = writeln!(s, "stride = {}", self.stride);
        let _ = writeln!(s, "xi_min = {:e}", self.admissibility.xi_min);
        let _ = writeln!(s, "xi_max = {:e}", self.admissibility.xi_max);
        let _ = writeln!(s, "xi_n = {}", self.admissibility.n);
        let _ = writeln!(s, "tol_bell = {:e}", self.tol_bell);
        let _ = writeln!(s, "tol_sep = {:e}", self.tol_sep);
        s
    }
}
