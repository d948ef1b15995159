//! Paraxial ray propagation through the gradient-index slab.
//!
//! In the paraxial limit of the eikonal equation with n ≈ 1 a ray obeys
//! d²x/dz² = ∂(Re n)/∂x. Absorption is not tracked along rays.

use crate::physics::{
    grad_index, ControlField, Detuning, DrivenMedium, IndexField, MediumParams,
};

/// Largest |dx/dz| treated as paraxial.
pub const PARAXIAL_LIMIT: f64 = 0.5;

pub const DEFAULT_RAY_STEPS: usize = 10_000;

pub const MIN_RAY_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    /// Transverse position (cm).
    pub x: f64,
    /// Slope dx/dz (rad).
    pub angle: f64,
    /// Longitudinal position (cm).
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<RayState>,
    /// Set when |angle| reached [`PARAXIAL_LIMIT`] anywhere along the path.
    pub paraxial_violation: bool,
}

impl Trajectory {
    pub fn exit_angle(&self) -> f64 {
        exit_angle(self)
    }
}

/// θ ≈ L ∂(Re n)/∂x evaluated at the launch offset.
pub fn deflection_estimate(
    d: Detuning,
    x0: f64,
    medium: &MediumParams,
    control: &ControlField,
) -> f64 {
    medium.cell_length * grad_index(d, x0, medium, control)
}

/// Traces a ray launched at `x0` with slope `theta0` through the driven cell.
///
/// `n_steps` is raised to [`MIN_RAY_STEPS`] if smaller.
pub fn trace_ray(
    d: Detuning,
    x0: f64,
    theta0: f64,
    medium: &MediumParams,
    control: &ControlField,
    n_steps: usize,
) -> Trajectory {
    let field = DrivenMedium {
        detuning: d,
        medium: *medium,
        control: *control,
    };
    trace_ray_in(&field, x0, theta0, medium.cell_length, n_steps)
}

/// Fixed-step RK4 integration of x'' = ∂(Re n)/∂x over [0, length].
pub fn trace_ray_in<F: IndexField + ?Sized>(
    field: &F,
    x0: f64,
    theta0: f64,
    length: f64,
    n_steps: usize,
) -> Trajectory {
    let n_steps = n_steps.max(MIN_RAY_STEPS);
    let h = length / n_steps as f64;
    let mut states = Vec::with_capacity(n_steps + 1);
    let (mut x, mut p) = (x0, theta0);
    let mut paraxial_violation = p.abs() >= PARAXIAL_LIMIT;
    states.push(RayState {
        x,
        angle: p,
        z: 0.0,
    });
    for step in 1..=n_steps {
        let k1x = p;
        let k1p = field.gradient(x);
        let k2x = p + 0.5 * h * k1p;
        let k2p = field.gradient(x + 0.5 * h * k1x);
        let k3x = p + 0.5 * h * k2p;
        let k3p = field.gradient(x + 0.5 * h * k2x);
        let k4x = p + h * k3p;
        let k4p = field.gradient(x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        paraxial_violation |= !(p.abs() < PARAXIAL_LIMIT);
        states.push(RayState {
            x,
            angle: p,
            // z from the step index keeps the spacing exactly uniform
            z: length * step as f64 / n_steps as f64,
        });
    }
    Trajectory {
        states,
        paraxial_violation,
    }
}

/// dx/dz of the final state.
///
/// # Panics
/// If the trajectory is empty.
pub fn exit_angle(t: &Trajectory) -> f64 {
    t.states.last().expect("empty trajectory").angle
}
