//! CSV writers behind the `chi`, `sweep`, `profile` and `trace` subcommands.
//!
//! Output is UTF-8 with LF line endings and a mandatory header row; every
//! float is printed with nine significant digits.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::config::RunConfig;
use crate::error::{PrismError, Result};
use crate::experiment::{
    angular_dispersion, detuning_sweep, probe_fields, spectral_resolution, SweepRow,
};
use crate::physics::{complex_chi, index_minus_one, Detuning};
use crate::ray::{trace_ray, Trajectory};

pub const CHI_HEADER: &str = "detuning_hz,re_chi,im_chi,re_n_minus_1,im_n";
pub const SWEEP_HEADER: &str =
    "detuning_hz,theta_ray_rad,theta_wave_rad,transmission,far_centroid_mm,far_width_mm,flags";
pub const SUMMARY_HEADER: &str =
    "reference_detuning_hz,dtheta_dlambda_per_nm,resolution,glass_ratio,flags";
pub const PROFILE_HEADER: &str = "series,detuning_hz,x_mm,intensity";
pub const TRACE_HEADER: &str = "z_cm,x_mm,angle_rad";

/// Nine significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.8e}")
}

fn io_err(e: io::Error) -> PrismError {
    PrismError::Io(e.to_string())
}

/// Complex susceptibility and index at the probe position over the sweep range.
pub fn cmd_chi<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<()> {
    let scene = cfg.scene()?;
    let omega = scene.effective_rabi();
    let (lo, hi) = cfg.sweep_bounds();
    writeln!(out, "{CHI_HEADER}").map_err(io_err)?;
    for d in crate::experiment::sweep_detunings(lo, hi, cfg.sweep_points) {
        let chi = complex_chi(d, omega, &scene.medium)?;
        let dn = index_minus_one(chi)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(d.hz()),
            fmt_f64(chi.re),
            fmt_f64(chi.im),
            fmt_f64(dn.re),
            fmt_f64(dn.im)
        )
        .map_err(io_err)?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: &mut W) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}").map_err(io_err)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.detuning / (2.0 * PI)),
            fmt_f64(r.theta_ray),
            fmt_f64(r.theta_wave),
            fmt_f64(r.transmission),
            fmt_f64(r.far_centroid * 10.0),
            fmt_f64(r.far_width * 10.0),
            r.flags
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Figures of merit reported next to a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub reference_detuning_hz: f64,
    /// rad/nm, signed.
    pub dtheta_dlambda_per_nm: f64,
    /// λ/δλ, or NaN when the spots cannot be separated.
    pub resolution: f64,
    pub glass_ratio: f64,
    pub noise_floor: bool,
    pub unresolvable: bool,
    pub flagged: bool,
}

impl Summary {
    pub fn flags(&self) -> String {
        let mut parts = Vec::new();
        if self.noise_floor {
            parts.push("noise_floor");
        }
        if self.unresolvable {
            parts.push("unresolvable");
        }
        if self.flagged {
            parts.push("row_flags");
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join(";")
        }
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{SUMMARY_HEADER}").map_err(io_err)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(self.reference_detuning_hz),
            fmt_f64(self.dtheta_dlambda_per_nm),
            fmt_f64(self.resolution),
            fmt_f64(self.glass_ratio),
            self.flags()
        )
        .map_err(io_err)
    }

    pub fn human(&self) -> String {
        format!(
            "angular dispersion dθ/dλ = {:.3e} rad/nm ({:.2e}× a glass prism)\n\
             spectral resolution λ/δλ = {:.3e}\nflags: {}",
            self.dtheta_dlambda_per_nm,
            self.glass_ratio,
            self.resolution,
            self.flags()
        )
    }
}

pub fn summarize(cfg: &RunConfig) -> Result<Summary> {
    let scene = cfg.scene()?;
    let d_ref = Detuning::from_hz(cfg.reference_detuning_hz);
    let disp = angular_dispersion(&scene, d_ref, 2.0 * PI * cfg.dispersion_step_hz)?;
    let bound = 2.0 * PI * (cfg.sweep_max_hz - cfg.sweep_min_hz);
    let (resolution, unresolvable) = match spectral_resolution(&scene, d_ref, bound) {
        Ok(r) => (r, false),
        Err(PrismError::Unresolvable { .. }) => (f64::NAN, true),
        Err(e) => return Err(e),
    };
    Ok(Summary {
        reference_detuning_hz: cfg.reference_detuning_hz,
        dtheta_dlambda_per_nm: disp.per_nm,
        resolution,
        glass_ratio: disp.glass_ratio(),
        noise_floor: disp.below_noise_floor,
        unresolvable,
        flagged: disp.flags.any(),
    })
}

/// Detuning sweep CSV; the returned summary is written separately by the caller.
pub fn cmd_sweep<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<Summary> {
    let scene = cfg.scene()?;
    let (lo, hi) = cfg.sweep_bounds();
    let rows = detuning_sweep(&scene, lo, hi, cfg.sweep_points)?;
    write_sweep(&rows, out)?;
    summarize(cfg)
}

/// Input-plane and far-field intensity profiles.
///
/// With `raw = false` each series is scaled to unit peak. With `raw = true`
/// intensities are power per cm for a unit-power input, so a far-field series
/// integrates (over x in cm) to the cell transmission.
pub fn cmd_profile<W: Write>(
    cfg: &RunConfig,
    detunings_hz: &[f64],
    raw: bool,
    out: &mut W,
) -> Result<()> {
    let scene = cfg.scene()?;
    let fields = crate::parallel::map_ordered(Default::default(), detunings_hz, |&hz| {
        probe_fields(&scene, Detuning::from_hz(hz))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    writeln!(out, "{PROFILE_HEADER}").map_err(io_err)?;
    let mut series = |name: &str, hz: f64, intensity: Vec<f64>| -> Result<()> {
        let scale = if raw {
            1.0
        } else {
            let peak = intensity.iter().cloned().fold(0.0, f64::max);
            if peak > 0.0 {
                1.0 / peak
            } else {
                1.0
            }
        };
        for (i, v) in intensity.iter().enumerate() {
            writeln!(
                out,
                "{name},{},{},{}",
                fmt_f64(hz),
                fmt_f64(scene.grid.x(i) * 10.0),
                fmt_f64(v * scale)
            )
            .map_err(io_err)?;
        }
        Ok(())
    };
    if let Some(first) = fields.first() {
        series("input", 0.0, first.input.intensity())?;
    }
    for (hz, f) in detunings_hz.iter().zip(&fields) {
        series("far", *hz, f.far.intensity())?;
    }
    Ok(())
}

pub fn write_trajectory<W: Write>(t: &Trajectory, out: &mut W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}").map_err(io_err)?;
    for s in &t.states {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(s.z),
            fmt_f64(s.x * 10.0),
            fmt_f64(s.angle)
        )
        .map_err(io_err)?;
    }
    if t.paraxial_violation {
        writeln!(out, "# warning: paraxial angle limit exceeded").map_err(io_err)?;
    }
    Ok(())
}

/// Ray trajectory through the cell at one detuning.
pub fn cmd_trace<W: Write>(cfg: &RunConfig, detuning_hz: f64, out: &mut W) -> Result<Trajectory> {
    let scene = cfg.scene()?;
    let t = trace_ray(
        Detuning::from_hz(detuning_hz),
        scene.probe.offset,
        0.0,
        &scene.medium,
        &scene.control,
        scene.ray_steps,
    );
    write_trajectory(&t, out)?;
    Ok(t)
}
