//! Flat `key: value` run configuration.
//!
//! Units are part of each key name. Frequencies (`*_hz`) are ordinary
//! frequencies and become angular rates here; lengths are given in mm
//! (wavelength in nm) and become cm. Unknown or repeated keys are errors.
//!
//! ```text
//! # 7.5 cm cell
//! cell_length_mm: 75
//! gamma_cb_hz: 1e3
//! profile_detunings_hz: -50e3, 0, 50e3
//! ```

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{invalid, PrismError, Result};
use crate::experiment::Scene;
use crate::physics::{ControlField, Detuning, MediumParams};
use crate::wave::{Grid1D, ProbeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Chi,
    Sweep,
    Profile,
    Trace,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Chi => "chi",
            Command::Sweep => "sweep",
            Command::Profile => "profile",
            Command::Trace => "trace",
        })
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "chi" => Ok(Command::Chi),
            "sweep" => Ok(Command::Sweep),
            "profile" => Ok(Command::Profile),
            "trace" => Ok(Command::Trace),
            other => Err(format!("unknown command `{other}`")),
        }
    }
}

/// Effective run configuration, held in the units of the config keys.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda_nm: f64,
    pub density_cm3: f64,
    pub gamma_hz: f64,
    pub gamma_r_hz: f64,
    pub gamma_cb_hz: f64,
    pub cell_length_mm: f64,
    /// Peak control Rabi frequency Ω₀/2π.
    pub rabi_peak_hz: f64,
    pub control_waist_mm: f64,
    pub control_center_mm: f64,
    /// Full width at half maximum of the probe intensity.
    pub probe_fwhm_mm: f64,
    /// `None` places the probe at control_center + control_waist/√2.
    pub probe_offset_mm: Option<f64>,
    pub detector_distance_mm: f64,
    pub grid_points: usize,
    pub grid_span_mm: f64,
    pub n_slices: usize,
    pub ray_steps: usize,
    pub sweep_min_hz: f64,
    pub sweep_max_hz: f64,
    pub sweep_points: usize,
    pub reference_detuning_hz: f64,
    pub dispersion_step_hz: f64,
    pub trace_detuning_hz: f64,
    pub profile_detunings_hz: Vec<f64>,
    pub command: Option<Command>,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda_nm: 795.0,
            density_cm3: 3e11,
            gamma_hz: 300e6,
            gamma_r_hz: 5.75e6,
            gamma_cb_hz: 1e3,
            cell_length_mm: 75.0,
            rabi_peak_hz: 10e6,
            control_waist_mm: 32.0,
            control_center_mm: 0.0,
            probe_fwhm_mm: 0.7,
            probe_offset_mm: None,
            detector_distance_mm: 2300.0,
            grid_points: 4096,
            grid_span_mm: 16.0,
            n_slices: 200,
            ray_steps: 10_000,
            sweep_min_hz: -20e6,
            sweep_max_hz: 20e6,
            sweep_points: 101,
            reference_detuning_hz: 0.0,
            dispersion_step_hz: 100.0,
            trace_detuning_hz: 50e3,
            profile_detunings_hz: vec![-50e3, 0.0, 50e3],
            command: None,
            out: None,
        }
    }
}

fn hz(v: f64) -> f64 {
    2.0 * PI * v
}

fn mm(v: f64) -> f64 {
    v / 10.0
}

/// 1/e² intensity radius of a Gaussian with the given intensity FWHM.
pub fn waist_from_fwhm(fwhm: f64) -> f64 {
    fwhm / (2.0 * 2f64.ln()).sqrt()
}

impl RunConfig {
    pub fn scene(&self) -> Result<Scene> {
        let medium = MediumParams {
            lambda_ab: self.lambda_nm / 1e7,
            density: self.density_cm3,
            gamma: hz(self.gamma_hz),
            gamma_r: hz(self.gamma_r_hz),
            gamma_cb: hz(self.gamma_cb_hz),
            cell_length: mm(self.cell_length_mm),
        };
        let control = ControlField {
            omega_peak: hz(self.rabi_peak_hz),
            waist: mm(self.control_waist_mm),
            center: mm(self.control_center_mm),
        };
        let offset = match self.probe_offset_mm {
            Some(v) => mm(v),
            None => control.center + control.waist / 2f64.sqrt(),
        };
        let probe = ProbeSpec {
            waist: waist_from_fwhm(mm(self.probe_fwhm_mm)),
            offset,
            detuning: Detuning(0.0),
        };
        if !(probe.waist.is_finite() && probe.waist > 0.0) {
            return Err(invalid("probe_fwhm_mm", "must be finite and > 0"));
        }
        let grid = Grid1D::centered(offset, self.grid_points, mm(self.grid_span_mm))?;
        grid.check_for_waist(probe.waist)?;
        let scene = Scene {
            medium,
            control,
            probe,
            detector_distance: mm(self.detector_distance_mm),
            grid,
            n_slices: self.n_slices,
            ray_steps: self.ray_steps,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        self.scene()?;
        if self.n_slices < crate::wave::MIN_SLICES {
            return Err(invalid("n_slices", format!("must be >= {}", crate::wave::MIN_SLICES)));
        }
        if self.ray_steps < crate::ray::MIN_RAY_STEPS {
            return Err(invalid("ray_steps", format!("must be >= {}", crate::ray::MIN_RAY_STEPS)));
        }
        if self.sweep_points < 3 {
            return Err(invalid("sweep_points", "must be >= 3"));
        }
        if !(self.sweep_min_hz < self.sweep_max_hz) {
            return Err(invalid("sweep_min_hz", "must be below sweep_max_hz"));
        }
        if !(self.dispersion_step_hz > 0.0) {
            return Err(invalid("dispersion_step_hz", "must be > 0"));
        }
        Ok(())
    }

    pub fn sweep_bounds(&self) -> (Detuning, Detuning) {
        (
            Detuning::from_hz(self.sweep_min_hz),
            Detuning::from_hz(self.sweep_max_hz),
        )
    }

    /// Serialises every key in documented order; parsing the result gives
    /// back an identical config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k}: {v}");
        };
        put("lambda_nm", &self.lambda_nm);
        put("density_cm3", &self.density_cm3);
        put("gamma_hz", &self.gamma_hz);
        put("gamma_r_hz", &self.gamma_r_hz);
        put("gamma_cb_hz", &self.gamma_cb_hz);
        put("cell_length_mm", &self.cell_length_mm);
        put("rabi_peak_hz", &self.rabi_peak_hz);
        put("control_waist_mm", &self.control_waist_mm);
        put("control_center_mm", &self.control_center_mm);
        put("probe_fwhm_mm", &self.probe_fwhm_mm);
        if let Some(v) = self.probe_offset_mm {
            put("probe_offset_mm", &v);
        }
        put("detector_distance_mm", &self.detector_distance_mm);
        put("grid_points", &self.grid_points);
        put("grid_span_mm", &self.grid_span_mm);
        put("n_slices", &self.n_slices);
        put("ray_steps", &self.ray_steps);
        put("sweep_min_hz", &self.sweep_min_hz);
        put("sweep_max_hz", &self.sweep_max_hz);
        put("sweep_points", &self.sweep_points);
        put("reference_detuning_hz", &self.reference_detuning_hz);
        put("dispersion_step_hz", &self.dispersion_step_hz);
        put("trace_detuning_hz", &self.trace_detuning_hz);
        let list = self
            .profile_detunings_hz
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        put("profile_detunings_hz", &list);
        if let Some(c) = self.command {
            put("command", &c);
        }
        if let Some(o) = &self.out {
            put("out", o);
        }
        s
    }
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| PrismError::Config {
        line,
        message: format!("key `{key}`: cannot parse `{value}` as a number"),
    })
}

/// Parses a config document and merges it over the defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once(':').ok_or_else(|| PrismError::Config {
            line,
            message: format!("expected `key: value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|k| k == key) {
            return Err(PrismError::Config {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        seen.push(key.to_string());
        let f = |v: &str| number::<f64>(line, key, v);
        let u = |v: &str| number::<usize>(line, key, v);
        match key {
            "lambda_nm" => cfg.lambda_nm = f(value)?,
            "density_cm3" => cfg.density_cm3 = f(value)?,
            "gamma_hz" => cfg.gamma_hz = f(value)?,
            "gamma_r_hz" => cfg.gamma_r_hz = f(value)?,
            "gamma_cb_hz" => cfg.gamma_cb_hz = f(value)?,
            "cell_length_mm" => cfg.cell_length_mm = f(value)?,
            "rabi_peak_hz" => cfg.rabi_peak_hz = f(value)?,
            "control_waist_mm" => cfg.control_waist_mm = f(value)?,
            "control_center_mm" => cfg.control_center_mm = f(value)?,
            "probe_fwhm_mm" => cfg.probe_fwhm_mm = f(value)?,
            "probe_offset_mm" => cfg.probe_offset_mm = Some(f(value)?),
            "detector_distance_mm" => cfg.detector_distance_mm = f(value)?,
            "grid_points" => cfg.grid_points = u(value)?,
            "grid_span_mm" => cfg.grid_span_mm = f(value)?,
            "n_slices" => cfg.n_slices = u(value)?,
            "ray_steps" => cfg.ray_steps = u(value)?,
            "sweep_min_hz" => cfg.sweep_min_hz = f(value)?,
            "sweep_max_hz" => cfg.sweep_max_hz = f(value)?,
            "sweep_points" => cfg.sweep_points = u(value)?,
            "reference_detuning_hz" => cfg.reference_detuning_hz = f(value)?,
            "dispersion_step_hz" => cfg.dispersion_step_hz = f(value)?,
            "trace_detuning_hz" => cfg.trace_detuning_hz = f(value)?,
            "profile_detunings_hz" => {
                cfg.profile_detunings_hz = value
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(f)
                    .collect::<Result<_>>()?
            }
            "command" => {
                cfg.command = Some(value.parse().map_err(|message| PrismError::Config {
                    line,
                    message,
                })?)
            }
            "out" => cfg.out = Some(value.to_string()),
            other => {
                return Err(PrismError::Config {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
