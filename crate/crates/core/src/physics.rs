//! Susceptibility of a Λ medium driven by a coherent control field, and the
//! refractive-index landscape it imprints on a probe beam.
//!
//! All quantities are in Gaussian units: lengths in cm, densities in cm⁻³,
//! rates and detunings in rad/s. The real part of the susceptibility is
//!
//! ```text
//! Re χ = η γ_r δω (Ω² − γ_cb² − δω²) / [(Ω² + γ_cb γ − δω²)² + δω² (γ_cb + γ)²]
//! ```
//!
//! with η = 3λ³N/16π², and the full complex response is
//! χ = η γ_r (δω + iγ_cb) / [Ω² + (γ − iδω)(γ_cb − iδω)], whose real part is
//! the expression above.

use std::f64::consts::PI;
use std::ops::Neg;

use num_complex::Complex64;

use crate::error::{invalid, PrismError, Result};

pub const SPEED_OF_LIGHT_CM_PER_S: f64 = 2.997_924_58e10;

/// Atomic vapor constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Resonance wavelength λ of the probe transition (cm).
    pub lambda_ab: f64,
    /// Vapor number density N (cm⁻³). Zero describes an empty cell.
    pub density: f64,
    /// Optical coherence relaxation rate γ (rad/s), Doppler-inclusive.
    pub gamma: f64,
    /// Radiative rate γ_r (rad/s) in the susceptibility prefactor.
    pub gamma_r: f64,
    /// Ground-state (spin) coherence relaxation rate γ_cb (rad/s).
    pub gamma_cb: f64,
    /// Medium length L (cm).
    pub cell_length: f64,
}

impl MediumParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_ab", self.lambda_ab),
            ("gamma", self.gamma),
            ("gamma_r", self.gamma_r),
            ("gamma_cb", self.gamma_cb),
            ("cell_length", self.cell_length),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.density.is_finite() && self.density >= 0.0) {
            return Err(invalid(
                "density",
                format!("must be finite and >= 0, got {}", self.density),
            ));
        }
        if self.gamma_cb > self.gamma {
            return Err(invalid(
                "gamma_cb",
                format!(
                    "spin coherence rate {} exceeds optical rate {}",
                    self.gamma_cb, self.gamma
                ),
            ));
        }
        if !(1e-5..=1e-3).contains(&self.lambda_ab) {
            return Err(invalid(
                "lambda_ab",
                format!("{} cm is outside the optical band [1e-5, 1e-3] cm", self.lambda_ab),
            ));
        }
        Ok(())
    }

    /// Vacuum wavenumber 2π/λ (cm⁻¹).
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.lambda_ab
    }

    /// Angular frequency of the resonance, 2πc/λ (rad/s).
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT_CM_PER_S / self.lambda_ab
    }
}

/// Transverse Gaussian profile of the control-field Rabi frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlField {
    /// Peak Rabi frequency Ω₀ (rad/s). Zero switches the control off.
    pub omega_peak: f64,
    /// 1/e² intensity radius (cm).
    pub waist: f64,
    /// Transverse position of the beam axis (cm).
    pub center: f64,
}

impl ControlField {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_peak.is_finite() && self.omega_peak >= 0.0) {
            return Err(invalid(
                "omega_peak",
                format!("must be finite and >= 0, got {}", self.omega_peak),
            ));
        }
        if !(self.waist.is_finite() && self.waist > 0.0) {
            return Err(invalid(
                "control waist",
                format!("must be finite and > 0, got {}", self.waist),
            ));
        }
        if !self.center.is_finite() {
            return Err(invalid("control center", "must be finite"));
        }
        Ok(())
    }

    /// Rabi frequency Ω(x) = Ω₀ exp(−(x − center)²/waist²).
    pub fn rabi_at(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.waist;
        self.omega_peak * (-u * u).exp()
    }

    /// dΩ/dx.
    pub fn rabi_slope(&self, x: f64) -> f64 {
        -2.0 * (x - self.center) / (self.waist * self.waist) * self.rabi_at(x)
    }
}

/// Two-photon detuning δω = ω − ω_ab in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Detuning(pub f64);

impl Detuning {
    pub fn from_hz(hz: f64) -> Self {
        Detuning(2.0 * PI * hz)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 / (2.0 * PI)
    }
}

impl Neg for Detuning {
    type Output = Detuning;
    fn neg(self) -> Detuning {
        Detuning(-self.0)
    }
}

/// Complex linear susceptibility. `im ≥ 0` for a passive medium.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Susceptibility {
    pub re: f64,
    pub im: f64,
}

impl Susceptibility {
    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for Susceptibility {
    fn from(c: Complex64) -> Self {
        Susceptibility { re: c.re, im: c.im }
    }
}

/// η = 3λ³N/16π² (dimensionless for λ in cm, N in cm⁻³).
pub fn eta(medium: &MediumParams) -> f64 {
    3.0 * medium.lambda_ab.powi(3) * medium.density / (16.0 * PI * PI)
}

fn check_degenerate(d: Detuning, omega: f64, medium: &MediumParams) -> Result<()> {
    if d.0 == 0.0 && omega == 0.0 && medium.gamma * medium.gamma_cb == 0.0 {
        return Err(PrismError::DegenerateInput);
    }
    Ok(())
}

/// Re χ in the printed closed form.
pub fn re_chi(d: Detuning, omega: f64, medium: &MediumParams) -> Result<f64> {
    check_degenerate(d, omega, medium)?;
    Ok(chi_parts(d.0, omega, medium).0)
}

/// (Re χ, Im χ) with |denominator|² expanded into real terms. The imaginary
/// numerator γ_cb Ω² + γ γ_cb² + γ δω² is a sum of non-negative terms, so no
/// cancellation occurs there; complex division would lose accuracy in Re χ
/// near its zeros.
fn chi_parts(dw: f64, omega: f64, medium: &MediumParams) -> (f64, f64) {
    let (g, gcb) = (medium.gamma, medium.gamma_cb);
    let om2 = omega * omega;
    let a = om2 + gcb * g - dw * dw;
    let b = dw * (gcb + g);
    let den = a * a + b * b;
    let scale = eta(medium) * medium.gamma_r;
    let re = scale * dw * (om2 - gcb * gcb - dw * dw) / den;
    let im = scale * (gcb * om2 + g * gcb * gcb + g * dw * dw) / den;
    (re, im)
}

fn chi_denominator(dw: f64, omega: f64, medium: &MediumParams) -> Complex64 {
    let i = Complex64::i();
    omega * omega + (medium.gamma - i * dw) * (medium.gamma_cb - i * dw)
}

/// Complex susceptibility η γ_r (δω + iγ_cb) / [Ω² + (γ − iδω)(γ_cb − iδω)].
pub fn complex_chi(d: Detuning, omega: f64, medium: &MediumParams) -> Result<Susceptibility> {
    check_degenerate(d, omega, medium)?;
    let (re, im) = chi_parts(d.0, omega, medium);
    Ok(Susceptibility { re, im })
}

/// ∂χ/∂Ω at fixed detuning.
pub fn chi_rabi_derivative(d: Detuning, omega: f64, medium: &MediumParams) -> Result<Complex64> {
    let chi = complex_chi(d, omega, medium)?.as_complex();
    Ok(-2.0 * omega * chi / chi_denominator(d.0, omega, medium))
}

fn check_physical(chi: Susceptibility) -> Result<Complex64> {
    let arg = 1.0 + 4.0 * PI * chi.re;
    if !(arg > 0.0) {
        return Err(PrismError::NonPhysicalIndex(arg));
    }
    Ok(chi.as_complex())
}

/// n = √(1 + 4πχ), principal branch.
pub fn refractive_index(chi: Susceptibility) -> Result<Complex64> {
    let c = check_physical(chi)?;
    Ok((1.0 + 4.0 * PI * c).sqrt())
}

/// n − 1 evaluated as 4πχ/(n + 1), which stays accurate when |χ| ≪ 1.
pub fn index_minus_one(chi: Susceptibility) -> Result<Complex64> {
    let c = check_physical(chi)?;
    let n = (1.0 + 4.0 * PI * c).sqrt();
    Ok(4.0 * PI * c / (n + 1.0))
}

/// Pointwise n(x) across a uniform, strictly increasing grid.
pub fn index_profile(
    d: Detuning,
    grid_x: &[f64],
    medium: &MediumParams,
    control: &ControlField,
) -> Result<Vec<Complex64>> {
    check_uniform(grid_x)?;
    grid_x
        .iter()
        .map(|&x| refractive_index(complex_chi(d, control.rabi_at(x), medium)?))
        .collect()
}

fn check_uniform(grid_x: &[f64]) -> Result<()> {
    if grid_x.len() < 2 {
        return Ok(());
    }
    let step = grid_x[1] - grid_x[0];
    if !(step > 0.0) {
        return Err(PrismError::Grid("grid must be strictly increasing".into()));
    }
    let span = (grid_x[grid_x.len() - 1] - grid_x[0]).abs().max(step);
    for w in grid_x.windows(2) {
        let s = w[1] - w[0];
        if !(s > 0.0) || (s - step).abs() > 1e-9 * span {
            return Err(PrismError::Grid("grid must be uniform and strictly increasing".into()));
        }
    }
    Ok(())
}

/// ∂(Re n)/∂x by the chain rule through Ω(x).
///
/// Inputs are assumed valid; a non-physical index yields NaN.
pub fn grad_index(d: Detuning, x: f64, medium: &MediumParams, control: &ControlField) -> f64 {
    let omega = control.rabi_at(x);
    let slope = control.rabi_slope(x);
    if slope == 0.0 {
        return 0.0;
    }
    let inner = || -> Result<f64> {
        let chi = complex_chi(d, omega, medium)?;
        let n = refractive_index(chi)?;
        let dchi = chi_rabi_derivative(d, omega, medium)?;
        Ok((2.0 * PI / n * dchi * slope).re)
    };
    inner().unwrap_or(f64::NAN)
}

/// Central finite difference of Re(n − 1) with step waist/10⁴.
pub fn grad_index_fd(d: Detuning, x: f64, medium: &MediumParams, control: &ControlField) -> f64 {
    let h = control.waist * 1e-4;
    let re_n1 = |x: f64| {
        complex_chi(d, control.rabi_at(x), medium)
            .and_then(index_minus_one)
            .map(|v| v.re)
            .unwrap_or(f64::NAN)
    };
    (re_n1(x + h) - re_n1(x - h)) / (2.0 * h)
}

/// A transverse refractive-index landscape seen by rays and waves.
pub trait IndexField: Sync {
    /// Complex n(x) − 1.
    fn index_minus_one(&self, x: f64) -> Result<Complex64>;
    /// ∂(Re n)/∂x.
    fn gradient(&self, x: f64) -> f64;
}

/// The driven vapor at a fixed two-photon detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenMedium {
    pub detuning: Detuning,
    pub medium: MediumParams,
    pub control: ControlField,
}

impl IndexField for DrivenMedium {
    fn index_minus_one(&self, x: f64) -> Result<Complex64> {
        index_minus_one(complex_chi(
            self.detuning,
            self.control.rabi_at(x),
            &self.medium,
        )?)
    }

    fn gradient(&self, x: f64) -> f64 {
        grad_index(self.detuning, x, &self.medium, &self.control)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = 2.0 * PI;

    fn medium() -> MediumParams {
        MediumParams {
            lambda_ab: 7.95e-5,
            density: 1e13,
            gamma: TWO_PI * 300e6,
            gamma_r: TWO_PI * 5.75e6,
            gamma_cb: TWO_PI * 1e3,
            cell_length: 10.0,
        }
    }

    fn control() -> ControlField {
        ControlField {
            omega_peak: TWO_PI * 1e6,
            waist: 0.05,
            center: 0.0,
        }
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn eta_matches_hand_values() {
        // 3 * (7.95e-5)^3 * N / (16 pi^2), evaluated by hand.
        let mut m = medium();
        assert!(close(eta(&m), 9.5456e-2, 1e-3));
        m.density = 3e11;
        assert!(close(eta(&m), 2.8637e-3, 1e-3));
        m.density = 0.0;
        assert_eq!(eta(&m), 0.0);
    }

    #[test]
    fn re_chi_zeros() {
        let m = medium();
        let om = TWO_PI * 1e6;
        assert_eq!(re_chi(Detuning(0.0), om, &m).unwrap(), 0.0);
        let root = (om * om - m.gamma_cb * m.gamma_cb).sqrt();
        let scale = re_chi(Detuning(0.5 * root), om, &m).unwrap().abs();
        for d in [root, -root] {
            assert!(re_chi(Detuning(d), om, &m).unwrap().abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn re_chi_reference_point() {
        // Hand evaluation of the closed form gives 3.08e-4; the quoted
        // reference is 5e-4 within a factor of two.
        let v = re_chi(Detuning(TWO_PI * 1e3), TWO_PI * 1e6, &medium()).unwrap();
        assert!(close(v, 3.0835e-4, 1e-3), "{v}");
        assert!(v > 2.5e-4 && v < 1e-3);
    }

    #[test]
    fn complex_chi_on_resonance() {
        let m = medium();
        let om = TWO_PI * 1e6;
        let chi = complex_chi(Detuning(0.0), om, &m).unwrap();
        assert_eq!(chi.re, 0.0);
        let expected = eta(&m) * m.gamma_r * m.gamma_cb / (om * om + m.gamma * m.gamma_cb);
        assert!(close(chi.im, expected, 1e-13));

        let bare = complex_chi(Detuning(0.0), 0.0, &m).unwrap();
        assert_eq!(bare.re, 0.0);
        assert!(close(bare.im, eta(&m) * m.gamma_r / m.gamma, 1e-13));
    }

    #[test]
    fn degenerate_input_rejected() {
        let mut m = medium();
        m.gamma = 0.0;
        m.gamma_cb = 0.0;
        assert_eq!(
            re_chi(Detuning(0.0), 0.0, &m),
            Err(PrismError::DegenerateInput)
        );
        assert!(complex_chi(Detuning(0.0), 0.0, &m).is_err());
    }

    #[test]
    fn refractive_index_values() {
        let vac = refractive_index(Susceptibility::default()).unwrap();
        assert_eq!(vac, Complex64::new(1.0, 0.0));
        let n = refractive_index(Susceptibility { re: 1e-4, im: 0.0 }).unwrap();
        assert!((n.re - 1.000628).abs() < 1e-6);
        let n = refractive_index(Susceptibility { re: 0.0, im: 1e-4 }).unwrap();
        assert!((n.im - 6.28e-4).abs() < 1e-6);
        // second-order agreement with 1 + 2πχ
        let chi = Susceptibility { re: 3e-6, im: 2e-6 };
        let lin = 1.0 + 2.0 * PI * chi.as_complex();
        assert!((refractive_index(chi).unwrap() - lin).norm() < 1e-9);
        assert!(
            (index_minus_one(chi).unwrap() - (refractive_index(chi).unwrap() - 1.0)).norm() < 1e-15
        );
    }

    #[test]
    fn non_physical_index() {
        let chi = Susceptibility {
            re: -1.0 / (4.0 * PI),
            im: 0.0,
        };
        assert!(matches!(
            refractive_index(chi),
            Err(PrismError::NonPhysicalIndex(_))
        ));
    }

    #[test]
    fn rabi_profile() {
        let c = ControlField {
            omega_peak: 3.0,
            waist: 0.2,
            center: 0.1,
        };
        assert_eq!(c.rabi_at(0.1), 3.0);
        assert!(close(c.rabi_at(0.3), 3.0 / std::f64::consts::E, 1e-15));
        assert_eq!(c.rabi_at(1e3), 0.0);
        assert_eq!(c.rabi_at(-1e3), 0.0);
    }

    #[test]
    fn index_profile_cases() {
        let m = medium();
        let c = control();
        let xs: Vec<f64> = (0..201).map(|i| -0.1 + 0.001 * i as f64).collect();

        // On resonance Re χ = 0, so Re n − 1 is only the O((Im χ)²) remainder
        // of the square root: Re √(1 + iε) = √((1 + √(1 + ε²))/2).
        let res = index_profile(Detuning(0.0), &xs, &m, &c).unwrap();
        for (&x, n) in xs.iter().zip(&res) {
            let chi = complex_chi(Detuning(0.0), c.rabi_at(x), &m).unwrap();
            assert_eq!(chi.re, 0.0);
            let eps = 4.0 * PI * chi.im;
            let expected = ((1.0 + (1.0 + eps * eps).sqrt()) / 2.0).sqrt();
            assert!((n.re - expected).abs() < 1e-14);
            assert!((n.re - 1.0).abs() < eps * eps);
        }

        let off = ControlField {
            omega_peak: 0.0,
            ..c
        };
        let flat = index_profile(Detuning(TWO_PI * 1e3), &xs, &m, &off).unwrap();
        assert!(flat.iter().all(|&n| n == flat[0]));

        let prof = index_profile(Detuning(TWO_PI * 2e3), &xs, &m, &c).unwrap();
        for i in 0..xs.len() {
            let j = xs.len() - 1 - i;
            assert!((prof[i] - prof[j]).norm() < 1e-12);
        }

        let bad = [0.0, 0.1, 0.15];
        assert!(index_profile(Detuning(1.0), &bad, &m, &c).is_err());
        let bad = [0.0, -0.1, -0.2];
        assert!(index_profile(Detuning(1.0), &bad, &m, &c).is_err());
    }

    #[test]
    fn gradient_cases() {
        let m = medium();
        let c = control();
        let d = Detuning(TWO_PI * 1e3);
        assert_eq!(grad_index(d, c.center, &m, &c), 0.0);
        // Dilute vapor: the O((Im χ)²) remainder is far below any dispersive gradient.
        let dilute = MediumParams {
            density: 3e11,
            ..m
        };
        let strong = ControlField {
            omega_peak: TWO_PI * 10e6,
            ..c
        };
        for x in [-0.04, 0.01, 0.03] {
            assert!(grad_index(Detuning(0.0), x, &dilute, &strong).abs() < 1e-9);
            assert!(grad_index(d, x, &dilute, &strong).abs() > 1e-6);
        }
        let a = 0.02;
        let gp = grad_index(d, c.center + a, &m, &c);
        let gm = grad_index(d, c.center - a, &m, &c);
        assert!(gp != 0.0);
        assert_eq!(gp.signum(), -gm.signum());
        assert!(close(gp, -gm, 1e-12));
    }

    #[test]
    fn gradient_analytic_matches_finite_difference() {
        let m = medium();
        let c = control();
        for khz in [0.3, 1.0, 5.0, 40.0, 300.0] {
            for x in [0.01, 0.02, 0.035, -0.045] {
                let d = Detuning(TWO_PI * khz * 1e3);
                let a = grad_index(d, x, &m, &c);
                let f = grad_index_fd(d, x, &m, &c);
                assert!(close(a, f, 1e-6), "{khz} kHz x={x}: {a} vs {f}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(medium().validate().is_ok());
        let mut m = medium();
        m.gamma_cb = 2.0 * m.gamma;
        assert!(m.validate().is_err());
        let mut m = medium();
        m.lambda_ab = 1e-2;
        assert!(m.validate().is_err());
        let mut m = medium();
        m.cell_length = 0.0;
        assert!(m.validate().is_err());
        let mut c = control();
        c.waist = -1.0;
        assert!(c.validate().is_err());
    }
}
