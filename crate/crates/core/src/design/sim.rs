//! Sawtooth absorber motion and its slow invariant manifold.
//!
//! Everything here is parameterized by the contact phase `psi`, the phase lag
//! between the absorber sawtooth and the harmonic motion of the host at the
//! contact point.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `rho = (2/pi) (1 - r) / (1 + r)`.
#[inline]
pub fn rho(modal_cor: f64) -> f64 {
    2.0 / PI * (1.0 - modal_cor) / (1.0 + modal_cor)
}

/// Contact-phase range `(psi_min, psi_max)` of the stable two-impacts-per-period branch.
pub fn psi_bounds(modal_cor: f64) -> (f64, f64) {
    let rho = rho(modal_cor);
    let rho2 = rho * rho;
    (rho.atan(), (-rho2 / (1.0 + rho2)).acos())
}

/// Clearance over contact-point amplitude, `g / (phi_c a) = sin(psi)/rho - cos(psi)`.
#[inline]
pub fn clearance_ratio(psi: f64, modal_cor: f64) -> f64 {
    let (s, c) = psi.sin_cos();
    s / rho(modal_cor) - c
}

/// Same relation in the `(pi/2) (1 + r)/(1 - r)` form that appears in the
/// frequency response equation.
#[inline]
pub fn clearance_ratio_expanded(psi: f64, modal_cor: f64) -> f64 {
    let (s, c) = psi.sin_cos();
    0.5 * PI * (1.0 + modal_cor) / (1.0 - modal_cor) * s - c
}

/// Absorber amplitude over contact-point amplitude, `q_a / (phi_c a) = sin(psi)/rho`.
#[inline]
pub fn absorber_amplitude_ratio(psi: f64, modal_cor: f64) -> f64 {
    psi.sin() / rho(modal_cor)
}

/// `(rho q_a)^2 + (q_a - g)^2 - (phi_c a)^2`, zero on the manifold.
pub fn sim_residual(rho: f64, absorber_amplitude: f64, clearance: f64, contact_amplitude: f64) -> f64 {
    (rho * absorber_amplitude).powi(2) + (absorber_amplitude - clearance).powi(2) - contact_amplitude.powi(2)
}

/// Pre-impact relative velocity `v_c = W phi_c a (2 / (1 - r)) sin(psi)`.
pub fn pre_impact_velocity(
    excitation_frequency: f64,
    contact_amplitude: f64,
    modal_cor: f64,
    psi: f64,
) -> Result<f64> {
    let v_c = excitation_frequency * contact_amplitude * 2.0 / (1.0 - modal_cor) * psi.sin();
    if v_c > 0.0 && v_c.is_finite() {
        Ok(v_c)
    } else {
        Err(Error::NonPositiveVelocity { v_c })
    }
}
