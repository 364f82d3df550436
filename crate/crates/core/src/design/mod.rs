//! Semi-analytical design theory: slow invariant manifold, frequency
//! response in terms of the contact phase, closed-form efficacy curve and the
//! optimum design point.

pub mod efficacy;
pub mod quartic;
pub mod response;
pub mod sim;

pub use efficacy::{design_point, efficacy_curve, optimum_design, DesignCurve, DesignPoint, Optimum, PsiGrid};
pub use quartic::{positive_real_roots, quartic_coefficients, PositiveRoots, Quartic};
pub use response::{frequency_response, frequency_response_on, FrequencyResponse, PsiPoint, ResponseBranch};
pub use sim::{clearance_ratio, pre_impact_velocity, psi_bounds, rho, sim_residual};

use crate::beam::{ForcingLayout, ModalModel};
use crate::contact::ContactSetup;
use crate::error::{invalid, Result};
use crate::impact::PulseParams;

/// The four dimensionless groups the design problem reduces to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessDesign {
    pub damping_ratio: f64,
    /// Modal mass ratio `mu = m_a phi_c^2` times the pulse factor `Gamma`.
    pub mu_gamma: f64,
    pub modal_cor: f64,
    /// `f_ex phi_c / (omega^2 g)`; zero when only normalized results are wanted.
    pub forcing_ratio: f64,
}

impl DimensionlessDesign {
    pub fn new(damping_ratio: f64, mu_gamma: f64, modal_cor: f64) -> Result<Self> {
        let design = Self { damping_ratio, mu_gamma, modal_cor, forcing_ratio: 0.0 };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.damping_ratio > 0.0 && self.damping_ratio < std::f64::consts::FRAC_1_SQRT_2) {
            return Err(invalid("damping_ratio", format!("must lie in (0, 1/sqrt(2)), got {}", self.damping_ratio)));
        }
        if !(self.mu_gamma >= 0.0 && self.mu_gamma.is_finite()) {
            return Err(invalid("mu_gamma", format!("must be non-negative, got {}", self.mu_gamma)));
        }
        if !(0.0..1.0).contains(&self.modal_cor) {
            return Err(invalid("modal_cor", format!("must lie in [0, 1), got {}", self.modal_cor)));
        }
        if !(self.forcing_ratio >= 0.0 && self.forcing_ratio.is_finite()) {
            return Err(invalid("forcing_ratio", format!("must be non-negative, got {}", self.forcing_ratio)));
        }
        Ok(())
    }

    pub fn with_forcing_ratio(self, forcing_ratio: f64) -> Self {
        Self { forcing_ratio, ..self }
    }

    /// Sets the forcing ratio from `g / (phi_c a_no)`, using `a_no = f_ex / (2 D omega^2)`.
    pub fn with_normalized_clearance(self, normalized_clearance: f64) -> Self {
        self.with_forcing_ratio(2.0 * self.damping_ratio / normalized_clearance)
    }

    /// `g / (phi_c a_no)` implied by the forcing ratio.
    pub fn normalized_clearance(&self) -> f64 {
        2.0 * self.damping_ratio / self.forcing_ratio
    }

    pub fn rho(&self) -> f64 {
        sim::rho(self.modal_cor)
    }

    pub fn psi_bounds(&self) -> (f64, f64) {
        sim::psi_bounds(self.modal_cor)
    }
}

/// Dimensionless groups of a physical configuration.
///
/// `mu = m_a phi_c^2` with `phi_c` the resonant mode at the contact point, and
/// the forcing ratio uses `f_ex = phi_1(x_f) F`. The resonant mode is mode 1.
pub fn dimensionless_from_physical(
    model: &ModalModel,
    contact: &ContactSetup,
    pulse: &PulseParams,
    damping_ratio: f64,
    layout: &ForcingLayout,
) -> Result<DimensionlessDesign> {
    contact.validate()?;
    let phi_c = contact.contact_shape_value;
    let mu = contact.absorber_mass * phi_c * phi_c;
    let omega = model.natural_frequencies()[0];
    let f_ex = model.shape_at(layout.force_location, 0) * layout.force_amplitude;
    let design = DimensionlessDesign {
        damping_ratio,
        mu_gamma: mu * pulse.gamma,
        modal_cor: pulse.modal_cor,
        forcing_ratio: (f_ex * phi_c / (omega * omega * contact.clearance)).abs(),
    };
    design.validate()?;
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{assemble_modal_model, BeamSpec};

    fn setup() -> (ModalModel, ContactSetup, ForcingLayout) {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 4, 0.02).unwrap();
        let layout = ForcingLayout::benchmark(&beam, 1.0 / 3.0, 30.0);
        let contact = ContactSetup {
            absorber_radius: 4.2e-3,
            absorber_mass: 2.457e-3,
            hertz_constant: 1e10,
            clearance: 1e-3,
            contact_shape_value: model.shape_at(beam.length, 0),
            mass_ratio: 0.01,
        };
        (model, contact, layout)
    }

    #[test]
    fn modal_mass_ratio_and_forcing() {
        let (model, contact, layout) = setup();
        let pulse = PulseParams::new(0.7, 1.0, 1.0).unwrap();
        let d = dimensionless_from_physical(&model, &contact, &pulse, 0.02, &layout).unwrap();
        let phi_c = model.shape_at(model.beam().length, 0);
        // tip value of a mass-normalized cantilever mode is 2/sqrt(m_s)
        assert!((phi_c - 2.0 / model.beam_mass().sqrt()).abs() < 1e-6 * phi_c);
        assert!((d.mu_gamma / (contact.absorber_mass * phi_c * phi_c * pulse.gamma) - 1.0).abs() < 1e-14);
        let w = model.natural_frequencies()[0];
        let f_ex = model.shape_at(model.beam().length / 3.0, 0) * 30.0;
        assert!((d.forcing_ratio - f_ex * phi_c / (w * w * 1e-3)).abs() < 1e-12 * d.forcing_ratio);

        let heavier = ContactSetup { absorber_mass: 2.0 * contact.absorber_mass, ..contact };
        let d2 = dimensionless_from_physical(&model, &heavier, &pulse, 0.02, &layout).unwrap();
        assert!((d2.mu_gamma / d.mu_gamma - 2.0).abs() < 1e-14);
    }

    #[test]
    fn normalized_clearance_round_trip() {
        let d = DimensionlessDesign::new(0.05, 0.043, 0.71).unwrap().with_normalized_clearance(2.6);
        assert!((d.normalized_clearance() - 2.6).abs() < 1e-14);
        // consistency with the physical definition
        let (model, contact, layout) = setup();
        let pulse = PulseParams::new(0.7, 1.0, 1.0).unwrap();
        let phys = dimensionless_from_physical(&model, &contact, &pulse, 0.02, &layout).unwrap();
        let a_no = model.resonant_amplitude_without_absorber(&layout);
        let gn = contact.clearance / (contact.contact_shape_value * a_no);
        assert!((phys.normalized_clearance() / gn - 1.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_designs() {
        assert!(DimensionlessDesign::new(0.0, 0.01, 0.5).is_err());
        assert!(DimensionlessDesign::new(0.8, 0.01, 0.5).is_err());
        assert!(DimensionlessDesign::new(0.05, -0.01, 0.5).is_err());
        assert!(DimensionlessDesign::new(0.05, 0.01, 1.0).is_err());
    }
}
