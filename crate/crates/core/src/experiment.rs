//! Scene assembly and the measurement campaign: detuning sweeps, left/right
//! probe placement, far-field spots, angular dispersion and spectral
//! resolution.

use std::f64::consts::PI;
use std::fmt;

use crate::config::RunConfig;
use crate::error::{invalid, PrismError, Result};
use crate::parallel::{self, Execution};
use crate::physics::{ControlField, Detuning, MediumParams, SPEED_OF_LIGHT_CM_PER_S};
use crate::ray::trace_ray;
use crate::wave::{
    beam_width, centroid, make_gaussian_probe, propagate_free_flagged,
    propagate_through_flagged, Grid1D, ProbeSpec, TransverseField,
};
use crate::physics::DrivenMedium;

/// Angular dispersion of a glass prism, used as the comparison baseline (rad/nm).
pub const GLASS_PRISM_DISPERSION_PER_NM: f64 = 1e-4;

/// Angles below this are indistinguishable from round-off (rad).
pub const THETA_NOISE_FLOOR: f64 = 1e-12;

/// Default finite-difference step for dθ/dδω (rad/s).
pub const DEFAULT_DISPERSION_STEP: f64 = 2.0 * PI * 100.0;

/// Everything needed to simulate one probe passing through the cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scene {
    pub medium: MediumParams,
    pub control: ControlField,
    pub probe: ProbeSpec,
    /// Free-space path from the cell exit to the detector (cm).
    pub detector_distance: f64,
    pub grid: Grid1D,
    pub n_slices: usize,
    pub ray_steps: usize,
}

/// The experimental scene: 7.5 cm cell, N = 3·10¹¹ cm⁻³, 0.7 mm probe,
/// detector at 2.3 m.
pub fn default_scene() -> Scene {
    RunConfig::default()
        .scene()
        .expect("built-in defaults are valid")
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        self.medium.validate()?;
        self.control.validate()?;
        self.grid.validate()?;
        if !(self.detector_distance.is_finite() && self.detector_distance >= 0.0) {
            return Err(invalid(
                "detector_distance",
                format!("must be finite and >= 0, got {}", self.detector_distance),
            ));
        }
        let reach = 2.0 * self.control.waist;
        if (self.probe.offset - self.control.center).abs() > reach {
            return Err(invalid(
                "probe offset",
                format!(
                    "{} cm is more than two control waists from the control axis",
                    self.probe.offset
                ),
            ));
        }
        Ok(())
    }

    /// Moves the probe, carrying the grid along with it.
    pub fn with_probe_offset(&self, offset: f64) -> Scene {
        let shift = offset - self.probe.offset;
        let mut s = *self;
        s.probe.offset = offset;
        s.grid.x0 += shift;
        s
    }

    /// The scene reflected about the control-beam axis.
    pub fn mirrored(&self) -> Scene {
        let c = self.control.center;
        let mut s = *self;
        s.probe.offset = 2.0 * c - self.probe.offset;
        s.grid = self.grid.mirrored(c);
        s
    }

    /// Rabi frequency at the probe launch offset.
    pub fn effective_rabi(&self) -> f64 {
        self.control.rabi_at(self.probe.offset)
    }

    /// √(Ω_eff² − γ_cb²): outer zeros of Re χ at the probe position.
    pub fn outer_zero_prediction(&self) -> f64 {
        let om = self.effective_rabi();
        (om * om - self.medium.gamma_cb.powi(2)).max(0.0).sqrt()
    }

    pub fn driven(&self, d: Detuning) -> DrivenMedium {
        DrivenMedium {
            detuning: d,
            medium: self.medium,
            control: self.control,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowFlags {
    pub paraxial: bool,
    pub guard_band: bool,
}

impl RowFlags {
    pub fn any(&self) -> bool {
        self.paraxial || self.guard_band
    }

    pub fn merge(&mut self, other: RowFlags) {
        self.paraxial |= other.paraxial;
        self.guard_band |= other.guard_band;
    }
}

impl fmt::Display for RowFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.paraxial, self.guard_band) {
            (false, false) => f.write_str("ok"),
            (true, false) => f.write_str("paraxial"),
            (false, true) => f.write_str("guard_band"),
            (true, true) => f.write_str("paraxial;guard_band"),
        }
    }
}

/// One detuning point of the simulated experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// rad/s
    pub detuning: f64,
    /// Ray exit angle (rad).
    pub theta_ray: f64,
    /// Far-field centroid displacement over the detector distance (rad).
    pub theta_wave: f64,
    /// Power transmitted through the cell.
    pub transmission: f64,
    /// cm
    pub far_centroid: f64,
    /// cm
    pub far_width: f64,
    pub flags: RowFlags,
}

/// Probe fields at the cell entrance, the cell exit and the detector.
#[derive(Debug, Clone)]
pub struct ProbeFields {
    pub input: TransverseField,
    pub exit: TransverseField,
    pub far: TransverseField,
    pub guard_band: bool,
}

pub fn probe_fields(scene: &Scene, d: Detuning) -> Result<ProbeFields> {
    let probe = ProbeSpec {
        detuning: d,
        ..scene.probe
    };
    let input = make_gaussian_probe(&probe, &scene.grid, scene.medium.lambda_ab)?;
    let (exit, g1) = propagate_through_flagged(
        &input,
        &scene.driven(d),
        scene.medium.cell_length,
        scene.n_slices,
    )?;
    let (far, g2) = propagate_free_flagged(&exit, scene.detector_distance)?;
    Ok(ProbeFields {
        input,
        exit,
        far,
        guard_band: g1 || g2,
    })
}

/// Ray and wave simulation of a single detuning.
pub fn run_point(scene: &Scene, d: Detuning) -> Result<SweepRow> {
    scene.validate()?;
    if !(scene.detector_distance > 0.0) {
        return Err(invalid(
            "detector_distance",
            "must be > 0 to define a far-field angle",
        ));
    }
    let ray = trace_ray(
        d,
        scene.probe.offset,
        0.0,
        &scene.medium,
        &scene.control,
        scene.ray_steps,
    );
    let fields = probe_fields(scene, d)?;
    let exit_centroid = centroid(&fields.exit)?;
    let far_centroid = centroid(&fields.far)?;
    let transmission = fields.exit.power() / fields.input.power();
    Ok(SweepRow {
        detuning: d.value(),
        theta_ray: ray.exit_angle(),
        theta_wave: (far_centroid - exit_centroid) / scene.detector_distance,
        transmission,
        far_centroid,
        far_width: beam_width(&fields.far)?,
        flags: RowFlags {
            paraxial: ray.paraxial_violation,
            guard_band: fields.guard_band,
        },
    })
}

/// `n_points` detunings evenly spaced over [d_min, d_max]; symmetric bounds
/// give exactly symmetric values, including an exact zero for odd counts.
pub fn sweep_detunings(d_min: Detuning, d_max: Detuning, n_points: usize) -> Vec<Detuning> {
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let (a, b) = ((n_points - 1 - i) as f64, i as f64);
            Detuning((a * d_min.0 + b * d_max.0) / last)
        })
        .collect()
}

pub fn detuning_sweep(
    scene: &Scene,
    d_min: Detuning,
    d_max: Detuning,
    n_points: usize,
) -> Result<Vec<SweepRow>> {
    detuning_sweep_with(scene, d_min, d_max, n_points, Execution::default())
}

pub fn detuning_sweep_with(
    scene: &Scene,
    d_min: Detuning,
    d_max: Detuning,
    n_points: usize,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if n_points < 3 {
        return Err(invalid("points", format!("need at least 3, got {n_points}")));
    }
    if !(d_min.0 < d_max.0) {
        return Err(invalid(
            "sweep bounds",
            format!("min {} must be below max {}", d_min.0, d_max.0),
        ));
    }
    scene.validate()?;
    let detunings = sweep_detunings(d_min, d_max, n_points);
    parallel::map_ordered(exec, &detunings, |&d| run_point(scene, d))
        .into_iter()
        .collect()
}

/// Linearly interpolated zero crossings of `ys(xs)`. Exact zeros count once.
pub fn zero_crossings(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&x, &y) in xs.iter().zip(ys) {
        if y == 0.0 {
            out.push(x);
            last = None;
            continue;
        }
        if let Some((px, py)) = last {
            if py.signum() != y.signum() {
                out.push(px - py * (x - px) / (y - py));
            }
        }
        last = Some((x, y));
    }
    out
}

/// Angular dispersion of the wave deflection around a reference detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    /// dθ/dδω (rad per rad/s).
    pub dtheta_domega: f64,
    /// dθ/dλ (rad/nm), signed.
    pub per_nm: f64,
    /// Both sampled angles were below [`THETA_NOISE_FLOOR`].
    pub below_noise_floor: bool,
    pub flags: RowFlags,
}

impl Dispersion {
    /// Ratio to the glass-prism reference.
    pub fn glass_ratio(&self) -> f64 {
        self.per_nm.abs() / GLASS_PRISM_DISPERSION_PER_NM
    }
}

/// Central difference of θ_wave over δω = d_ref ± h, converted to rad/nm with
/// dλ = −(λ²/2πc) dω.
pub fn angular_dispersion(scene: &Scene, d_ref: Detuning, h: f64) -> Result<Dispersion> {
    angular_dispersion_with(scene, d_ref, h, Execution::default())
}

pub fn angular_dispersion_with(
    scene: &Scene,
    d_ref: Detuning,
    h: f64,
    exec: Execution,
) -> Result<Dispersion> {
    if !(h.is_finite() && h > 0.0) {
        return Err(invalid("dispersion step", format!("must be > 0, got {h}")));
    }
    let (plus, minus) = parallel::join(
        exec,
        || run_point(scene, Detuning(d_ref.0 + h)),
        || run_point(scene, Detuning(d_ref.0 - h)),
    );
    let (plus, minus) = (plus?, minus?);
    let dtheta_domega = (plus.theta_wave - minus.theta_wave) / (2.0 * h);
    let lambda = scene.medium.lambda_ab;
    let domega_dlambda_cm = -2.0 * PI * SPEED_OF_LIGHT_CM_PER_S / (lambda * lambda);
    let mut flags = plus.flags;
    flags.merge(minus.flags);
    Ok(Dispersion {
        dtheta_domega,
        per_nm: dtheta_domega * domega_dlambda_cm * 1e-7,
        below_noise_floor: plus.theta_wave.abs().max(minus.theta_wave.abs()) < THETA_NOISE_FLOOR,
        flags,
    })
}

/// R = ω/δω for the smallest detuning split δω whose far-field spots, at
/// d_ref ± δω/2, are separated by at least their mean width.
///
/// The split is doubled from 2π·1 Hz until resolved, then bisected; exceeding
/// `bound` (rad/s) reports [`PrismError::Unresolvable`].
pub fn spectral_resolution(scene: &Scene, d_ref: Detuning, bound: f64) -> Result<f64> {
    spectral_resolution_with(scene, d_ref, bound, Execution::default())
}

pub fn spectral_resolution_with(
    scene: &Scene,
    d_ref: Detuning,
    bound: f64,
    exec: Execution,
) -> Result<f64> {
    let resolved = |split: f64| -> Result<bool> {
        let (a, b) = parallel::join(
            exec,
            || run_point(scene, Detuning(d_ref.0 + 0.5 * split)),
            || run_point(scene, Detuning(d_ref.0 - 0.5 * split)),
        );
        let (a, b) = (a?, b?);
        let separation = (a.far_centroid - b.far_centroid).abs();
        Ok(separation >= 0.5 * (a.far_width + b.far_width))
    };

    let mut lo = 0.0;
    let mut hi = 2.0 * PI;
    while !resolved(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > bound {
            return Err(PrismError::Unresolvable { bound });
        }
    }
    while hi - lo > 1e-4 * hi {
        let mid = 0.5 * (lo + hi);
        if resolved(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(scene.medium.angular_frequency() / hi)
}
