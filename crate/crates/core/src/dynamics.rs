//! Equations of motion of the modal host coupled to the impact absorber.
//!
//! State layout: `[q_1..q_n, q_1'..q_n', q_a, q_a']` with mass-normalized
//! modal coordinates `q_k` and the absorber displacement `q_a` measured from
//! the cavity center.

use crate::beam::{ForcingLayout, ModalModel};
use crate::contact::{contact_potential, ContactSetup};
use crate::integrator::OdeSystem;

/// Host seen by the absorber.
#[derive(Debug, Clone, Copy)]
pub enum Host<'a> {
    /// Truncated modal beam model.
    Flexible(&'a ModalModel),
    /// Immovable wall; only the absorber and the Hertz spring remain.
    Clamped,
}

impl<'a> From<&'a ModalModel> for Host<'a> {
    fn from(model: &'a ModalModel) -> Self {
        Host::Flexible(model)
    }
}

/// Harmonic point force on the host.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excitation {
    pub layout: ForcingLayout,
    /// Angular frequency, rad/s.
    pub frequency: f64,
}

/// Right-hand side of the coupled host/absorber equations.
#[derive(Debug, Clone)]
pub struct VibroImpactSystem {
    n: usize,
    omega_sq: Vec<f64>,
    two_d_omega: Vec<f64>,
    contact_shapes: Vec<f64>,
    force_shapes: Vec<f64>,
    absorber_mass: f64,
    clearance: f64,
    hertz_constant: f64,
    force_amplitude: f64,
    excitation_frequency: f64,
}

impl VibroImpactSystem {
    /// Unforced system.
    pub fn free(host: Host<'_>, contact: &ContactSetup) -> Self {
        Self::new(host, contact, None)
    }

    pub fn new(host: Host<'_>, contact: &ContactSetup, excitation: Option<&Excitation>) -> Self {
        let (omega_sq, two_d_omega, contact_shapes, force_shapes) = match host {
            Host::Flexible(model) => {
                let w = model.natural_frequencies();
                let d = model.damping_ratios();
                let contact_x = excitation
                    .map(|e| e.layout.contact_location)
                    .unwrap_or(model.beam().length);
                let force_shapes = match excitation {
                    Some(e) => model.shapes_at(e.layout.force_location),
                    None => vec![0.0; w.len()],
                };
                (
                    w.iter().map(|w| w * w).collect(),
                    w.iter().zip(d).map(|(w, d)| 2.0 * d * w).collect(),
                    model.shapes_at(contact_x),
                    force_shapes,
                )
            }
            Host::Clamped => (vec![], vec![], vec![], vec![]),
        };
        Self {
            n: omega_sq.len(),
            omega_sq,
            two_d_omega,
            contact_shapes,
            force_shapes,
            absorber_mass: contact.absorber_mass,
            clearance: contact.clearance,
            hertz_constant: contact.hertz_constant,
            force_amplitude: excitation.map_or(0.0, |e| e.layout.force_amplitude),
            excitation_frequency: excitation.map_or(0.0, |e| e.frequency),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.n
    }

    pub fn set_excitation_frequency(&mut self, frequency: f64) {
        self.excitation_frequency = frequency;
    }

    pub fn excitation_frequency(&self) -> f64 {
        self.excitation_frequency
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    /// Mode shapes at the contact point (the vector `phi^T w` per mode).
    pub fn contact_shapes(&self) -> &[f64] {
        &self.contact_shapes
    }

    /// Index of the absorber displacement in the state vector.
    pub fn absorber_index(&self) -> usize {
        2 * self.n
    }

    /// Relative displacement `delta = w^T q_s - q_a`.
    #[inline]
    pub fn delta(&self, y: &[f64]) -> f64 {
        let mut host = 0.0;
        for k in 0..self.n {
            host += self.contact_shapes[k] * y[k];
        }
        host - y[2 * self.n]
    }

    /// Time derivative of `delta`.
    #[inline]
    pub fn delta_rate(&self, y: &[f64]) -> f64 {
        let mut host = 0.0;
        for k in 0..self.n {
            host += self.contact_shapes[k] * y[self.n + k];
        }
        host - y[2 * self.n + 1]
    }

    #[inline]
    pub fn contact_force(&self, y: &[f64]) -> f64 {
        crate::contact::contact_force(self.delta(y), self.clearance, self.hertz_constant)
    }

    /// Total mechanical energy: modal, absorber kinetic and Hertz potential.
    pub fn energy(&self, y: &[f64]) -> f64 {
        let n = self.n;
        let modal: f64 = (0..n)
            .map(|k| 0.5 * (y[n + k] * y[n + k] + self.omega_sq[k] * y[k] * y[k]))
            .sum();
        let absorber = 0.5 * self.absorber_mass * y[2 * n + 1].powi(2);
        modal + absorber + contact_potential(self.delta(y), self.clearance, self.hertz_constant)
    }

    /// Force amplitude `F` of the harmonic excitation, N.
    pub fn force_amplitude(&self) -> f64 {
        self.force_amplitude
    }

    /// Right-hand side for a given instantaneous excitation force `drive`.
    #[inline]
    pub fn derivative_with_drive(&self, drive: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.n;
        let f_c = self.contact_force(y);
        for k in 0..n {
            let q = y[k];
            let v = y[n + k];
            dy[k] = v;
            dy[n + k] = -self.two_d_omega[k] * v - self.omega_sq[k] * q - self.contact_shapes[k] * f_c
                + self.force_shapes[k] * drive;
        }
        dy[2 * n] = y[2 * n + 1];
        dy[2 * n + 1] = f_c / self.absorber_mass;
    }

    /// Largest linear response amplitude of any modal coordinate without absorber.
    pub fn linear_reference_amplitude(&self) -> f64 {
        (0..self.n)
            .map(|k| (self.force_shapes[k] * self.force_amplitude).abs() / (self.two_d_omega[k] * self.omega_sq[k].sqrt()))
            .fold(0.0, f64::max)
    }
}

impl OdeSystem for VibroImpactSystem {
    fn dim(&self) -> usize {
        2 * self.n + 2
    }

    #[inline]
    fn derivative(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let drive = if self.force_amplitude != 0.0 {
            self.force_amplitude * (self.excitation_frequency * t).cos()
        } else {
            0.0
        };
        self.derivative_with_drive(drive, y, dy);
    }
}
