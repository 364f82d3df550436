//! Assembly of a complete physical configuration: beam model, spherical
//! absorber at the free end, point force along the beam.

use crate::beam::{assemble_modal_model, excitation_amplitude_from_fatigue, BeamSpec, ForcingLayout, ModalModel};
use crate::contact::{hertz_constant, sphere_from_mass_ratio, sphere_mass, ContactSetup, Elastic};
use crate::error::{invalid, Result};

/// How the absorber is sized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AbsorberSize {
    /// Absorber mass over beam mass.
    MassRatio(f64),
    /// Sphere radius, m.
    Radius(f64),
}

/// How the excitation level is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForceLevel {
    /// Peak bending stress of the resonant response without absorber equals
    /// the fatigue strength.
    Fatigue,
    /// Fixed amplitude, N.
    Amplitude(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetupSpec {
    pub beam: BeamSpec,
    pub modes: usize,
    /// Modal damping ratio, equal for all modes.
    pub damping: f64,
    pub absorber: AbsorberSize,
    /// Force location as a fraction of the beam length.
    pub force_fraction: f64,
    pub force: ForceLevel,
}

impl SetupSpec {
    /// Nominal beam, 12 modes, force at a third of the length with fatigue-based level.
    pub fn benchmark(mass_ratio: f64, damping: f64) -> Self {
        Self {
            beam: BeamSpec::table1(),
            modes: 12,
            damping,
            absorber: AbsorberSize::MassRatio(mass_ratio),
            force_fraction: 1.0 / 3.0,
            force: ForceLevel::Fatigue,
        }
    }
}

/// Beam model, absorber and forcing, with the clearance expressed through
/// `g / (phi_c a_no)`.
#[derive(Debug, Clone)]
pub struct PhysicalSetup {
    pub model: ModalModel,
    pub contact: ContactSetup,
    pub layout: ForcingLayout,
}

impl PhysicalSetup {
    /// Absorber made of the beam material, contacting a planar wall of the same
    /// material; the initial clearance is `phi_c a_no`.
    pub fn new(spec: &SetupSpec) -> Result<Self> {
        spec.beam.validate()?;
        if !(spec.force_fraction > 0.0 && spec.force_fraction <= 1.0) {
            return Err(invalid("force_fraction", format!("must lie in (0, 1], got {}", spec.force_fraction)));
        }
        let model = assemble_modal_model(&spec.beam, spec.modes, spec.damping)?;
        let beam_mass = spec.beam.mass();
        let (radius, mass) = match spec.absorber {
            AbsorberSize::MassRatio(l) => sphere_from_mass_ratio(beam_mass, l, spec.beam.density)?,
            AbsorberSize::Radius(r) => {
                if !(r > 0.0) {
                    return Err(invalid("absorber_radius", format!("must be positive, got {r}")));
                }
                (r, sphere_mass(r, spec.beam.density))
            }
        };
        let material = Elastic { youngs_modulus: spec.beam.youngs_modulus, poisson: spec.beam.poisson };
        let mut layout = ForcingLayout::benchmark(&spec.beam, spec.force_fraction, 1.0);
        layout.force_amplitude = match spec.force {
            ForceLevel::Fatigue => excitation_amplitude_from_fatigue(&model, &layout)?,
            ForceLevel::Amplitude(f) if f > 0.0 => f,
            ForceLevel::Amplitude(f) => return Err(invalid("force_amplitude", format!("must be positive, got {f}"))),
        };
        let phi_c = model.shape_at(layout.contact_location, 0);
        let a_no = model.resonant_amplitude_without_absorber(&layout);
        let contact = ContactSetup {
            absorber_radius: radius,
            absorber_mass: mass,
            hertz_constant: hertz_constant(radius, material, material),
            clearance: phi_c * a_no,
            contact_shape_value: phi_c,
            mass_ratio: mass / beam_mass,
        };
        contact.validate()?;
        Ok(Self { model, contact, layout })
    }

    /// Modal resonant amplitude of mode 1 without absorber, sqrt(kg) m.
    pub fn resonant_amplitude_without_absorber(&self) -> f64 {
        self.model.resonant_amplitude_without_absorber(&self.layout)
    }

    /// `phi_c a_no`, the clearance unit, m.
    pub fn clearance_scale(&self) -> f64 {
        self.contact.contact_shape_value * self.resonant_amplitude_without_absorber()
    }

    pub fn with_normalized_clearance(&self, normalized_clearance: f64) -> Self {
        Self { contact: self.contact.with_clearance(normalized_clearance * self.clearance_scale()), ..self.clone() }
    }

    /// Modal mass ratio `mu = m_a phi_c^2`.
    pub fn modal_mass_ratio(&self) -> f64 {
        self.contact.absorber_mass * self.contact.contact_shape_value.powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_setup() {
        let s = PhysicalSetup::new(&SetupSpec::benchmark(0.01, 0.0204)).unwrap();
        assert_eq!(s.model.mode_count(), 12);
        assert!((s.contact.mass_ratio - 0.01).abs() < 1e-12);
        assert!((s.contact.hertz_constant / 1e10 - 1.0).abs() < 0.01);
        // clearance starts at phi_c a_no
        assert!((s.contact.clearance - s.clearance_scale()).abs() < 1e-18);
        let t = s.with_normalized_clearance(2.0);
        assert!((t.contact.clearance / s.contact.clearance - 2.0).abs() < 1e-12);
        // mu = 4 lambda for a tip absorber
        assert!((s.modal_mass_ratio() - 0.04).abs() < 1e-4);
    }

    #[test]
    fn radius_and_fixed_force() {
        let spec = SetupSpec {
            absorber: AbsorberSize::Radius(4e-3),
            force: ForceLevel::Amplitude(10.0),
            ..SetupSpec::benchmark(0.01, 0.02)
        };
        let s = PhysicalSetup::new(&spec).unwrap();
        assert_eq!(s.layout.force_amplitude, 10.0);
        assert!((s.contact.absorber_radius - 4e-3).abs() < 1e-18);
        let bad = SetupSpec { absorber: AbsorberSize::Radius(0.0), ..spec };
        assert!(PhysicalSetup::new(&bad).is_err());
    }
}
