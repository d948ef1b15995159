//! Scalar paraxial wave propagation on a uniform 1-D transverse grid.
//!
//! Free space uses the exact angular-spectrum transfer function with the
//! carrier e^{ikz} factored out. The cell is crossed with symmetric split
//! steps: half a diffraction step, a thin complex phase screen
//! exp(i k₀ (n(x) − 1) dz), half a diffraction step.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{PrismError, Result};
use crate::physics::{ControlField, Detuning, DrivenMedium, IndexField, MediumParams};

pub const MIN_GRID_POINTS: usize = 512;
pub const MIN_SLICES: usize = 50;
/// Fraction of the grid at each edge that must stay dark.
pub const GUARD_FRACTION: f64 = 0.05;
/// Largest edge amplitude, relative to the peak, tolerated in the guard band.
pub const GUARD_LIMIT: f64 = 1e-6;

/// Uniform transverse sampling: `x_i = x0 + i dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_points: usize,
    pub dx: f64,
    pub x0: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, dx: f64, x0: f64) -> Result<Self> {
        let g = Grid1D { n_points, dx, x0 };
        g.validate()?;
        Ok(g)
    }

    /// Grid of `n_points` samples spanning `span`, placed symmetrically about `center`.
    pub fn centered(center: f64, n_points: usize, span: f64) -> Result<Self> {
        let dx = span / n_points as f64;
        Grid1D::new(n_points, dx, center - 0.5 * (n_points as f64 - 1.0) * dx)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_points.is_power_of_two() || self.n_points < MIN_GRID_POINTS {
            return Err(PrismError::Grid(format!(
                "n_points must be a power of two >= {MIN_GRID_POINTS}, got {}",
                self.n_points
            )));
        }
        if !(self.dx.is_finite() && self.dx > 0.0) || !self.x0.is_finite() {
            return Err(PrismError::Grid(format!(
                "dx must be finite and > 0 (dx = {}, x0 = {})",
                self.dx, self.x0
            )));
        }
        Ok(())
    }

    /// Checks the resolution and extent needed by a beam of 1/e² radius `waist`.
    pub fn check_for_waist(&self, waist: f64) -> Result<()> {
        if self.width() < 8.0 * waist {
            return Err(PrismError::Grid(format!(
                "grid width {} cm is below 8 probe waists ({} cm)",
                self.width(),
                8.0 * waist
            )));
        }
        if self.dx > waist / 16.0 {
            return Err(PrismError::Grid(format!(
                "dx = {} cm exceeds waist/16 = {} cm",
                self.dx,
                waist / 16.0
            )));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    pub fn width(&self) -> f64 {
        self.n_points as f64 * self.dx
    }

    pub fn center(&self) -> f64 {
        self.x0 + 0.5 * (self.n_points as f64 - 1.0) * self.dx
    }

    /// Grid mirrored about `c`; node order is reversed.
    pub fn mirrored(&self, c: f64) -> Grid1D {
        Grid1D {
            x0: 2.0 * c - self.x(self.n_points - 1),
            ..*self
        }
    }
}

/// Probe beam description: Gaussian amplitude exp(−(x − offset)²/waist²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    /// 1/e² intensity radius (cm).
    pub waist: f64,
    /// Transverse launch position (cm).
    pub offset: f64,
    pub detuning: Detuning,
}

/// Complex scalar envelope sampled on a [`Grid1D`] at fixed z.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseField {
    pub grid: Grid1D,
    pub amplitude: Vec<Complex64>,
    /// Vacuum wavelength (cm).
    pub wavelength: f64,
    /// Longitudinal position (cm).
    pub z: f64,
}

impl TransverseField {
    /// Σ|a|² dx.
    pub fn power(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Largest amplitude inside the guard bands relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        edge_ratio(&self.amplitude)
    }

    pub fn check_guard_band(&self) -> Result<()> {
        let edge = self.edge_ratio();
        if edge < GUARD_LIMIT {
            Ok(())
        } else {
            Err(PrismError::GuardBand {
                edge,
                limit: GUARD_LIMIT,
            })
        }
    }
}

fn edge_ratio(amp: &[Complex64]) -> f64 {
    let n = amp.len();
    let band = ((GUARD_FRACTION * n as f64).ceil() as usize).max(1);
    let peak = amp.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let edge = amp[..band]
        .iter()
        .chain(&amp[n - band..])
        .map(|a| a.norm())
        .fold(0.0, f64::max);
    edge / peak
}

/// Unit-power Gaussian probe with flat phase at z = 0.
pub fn make_gaussian_probe(
    spec: &ProbeSpec,
    grid: &Grid1D,
    wavelength: f64,
) -> Result<TransverseField> {
    grid.validate()?;
    if !(spec.waist.is_finite() && spec.waist > 0.0) {
        return Err(PrismError::InvalidParameter {
            field: "probe waist",
            reason: format!("must be finite and > 0, got {}", spec.waist),
        });
    }
    grid.check_for_waist(spec.waist)?;
    if (spec.offset - grid.center()).abs() > 0.25 * grid.width() {
        return Err(PrismError::Grid(format!(
            "probe offset {} cm lies outside the central half of the grid",
            spec.offset
        )));
    }
    let mut amplitude: Vec<Complex64> = (0..grid.n_points)
        .map(|i| {
            let u = (grid.x(i) - spec.offset) / spec.waist;
            Complex64::new((-u * u).exp(), 0.0)
        })
        .collect();
    let power: f64 = amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dx;
    let scale = power.sqrt().recip();
    amplitude.iter_mut().for_each(|a| *a *= scale);
    let field = TransverseField {
        grid: *grid,
        amplitude,
        wavelength,
        z: 0.0,
    };
    field.check_guard_band()?;
    Ok(field)
}

/// FFT plans and the longitudinal wavenumber shift kz − k for one grid.
///
/// Plans are shared and immutable; every call brings its own scratch buffer.
struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kz_shift: Vec<Complex64>,
}

impl Spectral {
    fn new(grid: &Grid1D, wavelength: f64) -> Self {
        let n = grid.n_points;
        let mut planner = FftPlanner::new();
        let k = 2.0 * PI / wavelength;
        let dk = 2.0 * PI / (n as f64 * grid.dx);
        let kz_shift = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                let kx = m * dk;
                let kx2 = kx * kx;
                if kx2 <= k * k {
                    // √(k² − kx²) − k without cancellation
                    Complex64::new(-kx2 / (k + (k * k - kx2).sqrt()), 0.0)
                } else {
                    Complex64::new(-k, (kx2 - k * k).sqrt())
                }
            })
            .collect();
        Spectral {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            kz_shift,
        }
    }

    /// exp(i (kz − k) dz) with the 1/n inverse-transform normalisation folded in.
    fn kernel(&self, dz: f64) -> Vec<Complex64> {
        let norm = 1.0 / self.kz_shift.len() as f64;
        self.kz_shift
            .iter()
            .map(|&s| (Complex64::i() * s * dz).exp() * norm)
            .collect()
    }

    fn scratch(&self) -> Vec<Complex64> {
        let len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        vec![Complex64::new(0.0, 0.0); len]
    }

    fn apply(&self, amp: &mut [Complex64], kernel: &[Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(amp, scratch);
        amp.iter_mut().zip(kernel).for_each(|(a, h)| *a *= h);
        self.inverse.process_with_scratch(amp, scratch);
    }
}

/// Free-space propagation; the boolean reports a guard-band violation.
pub(crate) fn propagate_free_flagged(
    f: &TransverseField,
    distance: f64,
) -> Result<(TransverseField, bool)> {
    if !(distance.is_finite() && distance >= 0.0) {
        return Err(PrismError::InvalidParameter {
            field: "distance",
            reason: format!("must be finite and >= 0, got {distance}"),
        });
    }
    let mut out = f.clone();
    if distance > 0.0 {
        let spectral = Spectral::new(&f.grid, f.wavelength);
        let kernel = spectral.kernel(distance);
        let mut scratch = spectral.scratch();
        spectral.apply(&mut out.amplitude, &kernel, &mut scratch);
        out.z += distance;
    }
    let violated = out.edge_ratio() >= GUARD_LIMIT;
    Ok((out, violated))
}

/// Angular-spectrum propagation over `distance` (cm) of free space.
pub fn propagate_free(f: &TransverseField, distance: f64) -> Result<TransverseField> {
    let (out, _) = propagate_free_flagged(f, distance)?;
    out.check_guard_band()?;
    Ok(out)
}

/// Split-step propagation through `length` of the given index landscape.
pub(crate) fn propagate_through_flagged<F: IndexField + ?Sized>(
    f: &TransverseField,
    field: &F,
    length: f64,
    n_slices: usize,
) -> Result<(TransverseField, bool)> {
    if n_slices < MIN_SLICES {
        return Err(PrismError::InvalidParameter {
            field: "n_slices",
            reason: format!("must be >= {MIN_SLICES}, got {n_slices}"),
        });
    }
    let dz = length / n_slices as f64;
    let k0 = f.wavenumber();
    let screen = (0..f.grid.n_points)
        .map(|i| {
            let dn = field.index_minus_one(f.grid.x(i))?;
            Ok((Complex64::i() * k0 * dn * dz).exp())
        })
        .collect::<Result<Vec<_>>>()?;

    let spectral = Spectral::new(&f.grid, f.wavelength);
    let half = spectral.kernel(0.5 * dz);
    let full = spectral.kernel(dz);
    let mut scratch = spectral.scratch();
    let mut out = f.clone();
    let amp = &mut out.amplitude;
    let mut violated = false;

    // Adjacent half steps of consecutive slices are fused into one full step.
    spectral.apply(amp, &half, &mut scratch);
    for slice in 0..n_slices {
        amp.iter_mut().zip(&screen).for_each(|(a, s)| *a *= s);
        let kernel = if slice + 1 == n_slices { &half } else { &full };
        spectral.apply(amp, kernel, &mut scratch);
        violated |= edge_ratio(amp) >= GUARD_LIMIT;
    }
    out.z += length;
    Ok((out, violated))
}

/// Split-step propagation of the probe through the driven cell.
pub fn propagate_medium(
    f: &TransverseField,
    d: Detuning,
    medium: &MediumParams,
    control: &ControlField,
    n_slices: usize,
) -> Result<TransverseField> {
    let field = DrivenMedium {
        detuning: d,
        medium: *medium,
        control: *control,
    };
    propagate_through(f, &field, medium.cell_length, n_slices)
}

/// Split-step propagation through an arbitrary index landscape.
pub fn propagate_through<F: IndexField + ?Sized>(
    f: &TransverseField,
    field: &F,
    length: f64,
    n_slices: usize,
) -> Result<TransverseField> {
    let (out, violated) = propagate_through_flagged(f, field, length, n_slices)?;
    if violated {
        return Err(PrismError::GuardBand {
            edge: out.edge_ratio(),
            limit: GUARD_LIMIT,
        });
    }
    Ok(out)
}

/// Intensity-weighted mean position (cm).
pub fn centroid(f: &TransverseField) -> Result<f64> {
    let (total, first) = moments(f, f.grid.center())?;
    Ok(f.grid.center() + first / total)
}

/// Twice the intensity-weighted standard deviation (cm); equals the 1/e²
/// radius for a Gaussian.
pub fn beam_width(f: &TransverseField) -> Result<f64> {
    let c = centroid(f)?;
    let (total, _) = moments(f, c)?;
    let second: f64 = f
        .amplitude
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let u = f.grid.x(i) - c;
            u * u * a.norm_sqr()
        })
        .sum();
    Ok(2.0 * (second / total).sqrt())
}

fn moments(f: &TransverseField, origin: f64) -> Result<(f64, f64)> {
    let mut total = 0.0;
    let mut first = 0.0;
    for (i, a) in f.amplitude.iter().enumerate() {
        let w = a.norm_sqr();
        total += w;
        first += (f.grid.x(i) - origin) * w;
    }
    if !(total > 0.0) {
        return Err(PrismError::ZeroPower);
    }
    Ok((total, first))
}

/// Output power over input power.
pub fn transmission(input: &TransverseField, output: &TransverseField) -> Result<f64> {
    if input.grid != output.grid {
        return Err(PrismError::GridMismatch);
    }
    let p_in = input.power();
    if !(p_in > 0.0) {
        return Err(PrismError::ZeroPower);
    }
    Ok(output.power() / p_in)
}
