//! Hertzian unilateral contact and the corrected Hunter-Reed force pulse.

use crate::error::{invalid, Error, Result};
use crate::quadrature::sine_power_integral;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Contact-duration constant of the Hunter-Reed pulse, kept at its printed value.
pub const HUNTER_REED_DURATION: f64 = 2.94;

/// Absorber geometry and contact parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSetup {
    /// m.
    pub absorber_radius: f64,
    /// kg.
    pub absorber_mass: f64,
    /// N/m^(3/2).
    pub hertz_constant: f64,
    /// Distance from cavity center to either wall, m.
    pub clearance: f64,
    /// Resonant mode shape at the contact point, 1/sqrt(kg). Must be positive.
    pub contact_shape_value: f64,
    /// Absorber mass over beam mass.
    pub mass_ratio: f64,
}

impl ContactSetup {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("absorber_radius", self.absorber_radius),
            ("absorber_mass", self.absorber_mass),
            ("hertz_constant", self.hertz_constant),
            ("clearance", self.clearance),
            ("contact_shape_value", self.contact_shape_value),
        ] {
            if !(v > 0.0) {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Same setup with another clearance.
    pub fn with_clearance(&self, clearance: f64) -> Self {
        Self { clearance, ..*self }
    }

    /// Force the absorber exerts on the host for relative displacement `delta`.
    #[inline]
    pub fn force(&self, delta: f64) -> f64 {
        contact_force(delta, self.clearance, self.hertz_constant)
    }
}

/// Isotropic elastic material of one contact partner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elastic {
    pub youngs_modulus: f64,
    pub poisson: f64,
}

/// Hertz constant for a sphere of radius `radius` pressed against a plane.
pub fn hertz_constant(radius: f64, absorber: Elastic, host: Elastic) -> f64 {
    let compliance = (1.0 - absorber.poisson.powi(2)) / absorber.youngs_modulus
        + (1.0 - host.poisson.powi(2)) / host.youngs_modulus;
    4.0 / 3.0 * radius.sqrt() / compliance
}

/// Piecewise Hertz law with a symmetric gap `[-g, g]`.
#[inline]
pub fn contact_force(delta: f64, clearance: f64, hertz_constant: f64) -> f64 {
    if delta > clearance {
        let p = delta - clearance;
        hertz_constant * p * p.sqrt()
    } else if delta < -clearance {
        let p = -delta - clearance;
        -hertz_constant * p * p.sqrt()
    } else {
        0.0
    }
}

/// Elastic energy stored in the Hertz spring, the potential of [`contact_force`].
#[inline]
pub fn contact_potential(delta: f64, clearance: f64, hertz_constant: f64) -> f64 {
    let p = (delta.abs() - clearance).max(0.0);
    0.4 * hertz_constant * p * p * p.sqrt()
}

/// `∫_0^1 sin^{3/2}(pi tau) dtau`, computed once.
pub fn pulse_shape_integral() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| sine_power_integral(1.5))
}

/// Peak force, contact duration and compression scale of one impact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulsePrediction {
    /// s.
    pub contact_duration: f64,
    /// N.
    pub peak_force: f64,
    /// Max compression of the uncorrected pulse, m.
    pub compression_scale: f64,
}

/// `((5/4) (m_a / k_H) v_c^2)^(2/5)`.
pub fn compression_scale(absorber_mass: f64, hertz_constant: f64, v_c: f64) -> f64 {
    (1.25 * absorber_mass / hertz_constant * v_c * v_c).powf(0.4)
}

/// Corrected Hunter-Reed pulse of a sphere hitting the host with velocity `v_c`.
pub fn hunter_reed(
    absorber_mass: f64,
    hertz_constant: f64,
    v_c: f64,
    alpha_tilde: f64,
    tc_tilde: f64,
) -> Result<PulsePrediction> {
    if !(v_c > 0.0) {
        return Err(Error::NonPositiveVelocity { v_c });
    }
    let alpha0 = compression_scale(absorber_mass, hertz_constant, v_c);
    let compression = alpha0 * alpha_tilde;
    Ok(PulsePrediction {
        contact_duration: HUNTER_REED_DURATION * compression * tc_tilde / v_c,
        peak_force: hertz_constant * compression * compression.sqrt(),
        compression_scale: alpha0,
    })
}

/// Solid sphere of density `density` whose mass is `mass_ratio * beam_mass`.
/// Returns `(radius, mass)`.
pub fn sphere_from_mass_ratio(beam_mass: f64, mass_ratio: f64, density: f64) -> Result<(f64, f64)> {
    if !(mass_ratio > 0.0) {
        return Err(invalid("mass_ratio", format!("must be positive, got {mass_ratio}")));
    }
    let mass = mass_ratio * beam_mass;
    let radius = (3.0 * mass / (4.0 * PI * density)).cbrt();
    Ok((radius, mass))
}

/// Sphere mass from its radius.
pub fn sphere_mass(radius: f64, density: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3) * density
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const STEEL: Elastic = Elastic { youngs_modulus: 210e9, poisson: 0.3 };

    #[test]
    fn identical_materials() {
        let r: f64 = 4e-3;
        let k = hertz_constant(r, STEEL, STEEL);
        let expected = 2.0 / 3.0 * r.sqrt() * 210e9 / (1.0 - 0.09);
        assert!((k / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rigid_host_limit() {
        let r: f64 = 4e-3;
        let rigid = Elastic { youngs_modulus: f64::INFINITY, poisson: 0.3 };
        let k = hertz_constant(r, STEEL, rigid);
        assert!((k / (4.0 / 3.0 * r.sqrt() * 210e9 / 0.91) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn benchmark_sphere_and_hertz_constant() {
        let (r, m) = sphere_from_mass_ratio(0.2457, 0.01, 7800.0).unwrap();
        assert!((m - 2.457e-3).abs() < 1e-15);
        assert!((r - 4.22e-3).abs() < 5e-6, "R_a = {r}");
        let k = hertz_constant(r, STEEL, STEEL);
        assert!((k / 1.0e10 - 1.0).abs() < 0.01, "k_H = {k}");
        assert!((sphere_mass(r, 7800.0) / m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_scaling() {
        let (r1, _) = sphere_from_mass_ratio(1.0, 0.01, 7800.0).unwrap();
        let (r2, _) = sphere_from_mass_ratio(1.0, 0.02, 7800.0).unwrap();
        assert!((r2 / r1 - 2f64.cbrt()).abs() < 1e-14);
        let (r3, _) = sphere_from_mass_ratio(1.0, 1e-6, 7800.0).unwrap();
        assert!(r3 < r1);
        assert!(sphere_from_mass_ratio(1.0, 0.0, 7800.0).is_err());
    }

    #[test]
    fn force_law_boundaries() {
        let (g, k) = (1e-3, 1e10);
        assert_eq!(contact_force(0.0, g, k), 0.0);
        assert_eq!(contact_force(g, g, k), 0.0);
        assert_eq!(contact_force(-g, g, k), 0.0);
        let eps = 1e-6;
        let f = contact_force(g + eps, g, k);
        assert!((f / (k * eps.powf(1.5)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pulse_integral_matches_beta_function() {
        // B(5/4, 1/2) / pi, with Gamma(5/4), Gamma(1/2) = sqrt(pi), Gamma(7/4)
        let gamma_5_4 = 0.906_402_477_055_477;
        let gamma_7_4 = 0.919_062_526_848_883;
        let oracle = gamma_5_4 * PI.sqrt() / gamma_7_4 / PI;
        assert!((pulse_shape_integral() - oracle).abs() < 1e-9);
        assert!((pulse_shape_integral() - 0.556_418).abs() < 1e-6);
    }

    #[test]
    fn original_hunter_reed_pulse() {
        let (m, k, v) = (2.457e-3, 1e10, 1.0);
        let p = hunter_reed(m, k, v, 1.0, 1.0).unwrap();
        let a0 = (1.25 * m / k).powf(0.4);
        assert!((p.compression_scale / a0 - 1.0).abs() < 1e-14);
        assert!((p.contact_duration / (2.94 * a0) - 1.0).abs() < 1e-14);
        assert!((p.peak_force / (k * a0.powf(1.5)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_positive_velocity_is_rejected() {
        assert!(matches!(hunter_reed(1.0, 1.0, 0.0, 1.0, 1.0), Err(Error::NonPositiveVelocity { .. })));
        assert!(hunter_reed(1.0, 1.0, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hertz_spring_is_conservative_on_closed_loop() {
        let (g, k) = (1e-4, 1e10);
        // loop delta: 0 -> 3g -> -3g -> 0 along a sine path, midpoint rule on f d(delta)
        let n = 400_000;
        let path = |s: f64| 3.0 * g * (2.0 * PI * s).sin();
        let mut work = 0.0;
        for i in 0..n {
            let (s0, s1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (d0, d1) = (path(s0), path(s1));
            work += contact_force(0.5 * (d0 + d1), g, k) * (d1 - d0);
        }
        let peak = contact_potential(3.0 * g, g, k);
        assert!(work.abs() < 1e-9 * peak, "work = {work}, peak = {peak}");
    }

    proptest! {
        #[test]
        fn force_is_odd(delta in -1e-2f64..1e-2, g in 1e-6f64..1e-3) {
            let k = 1e10;
            prop_assert_eq!(contact_force(-delta, g, k), -contact_force(delta, g, k));
        }

        #[test]
        fn pulse_scaling_with_velocity(v in 0.01f64..50.0) {
            let (m, k) = (2.457e-3, 1e10);
            let p1 = hunter_reed(m, k, v, 1.1, 0.9).unwrap();
            let p2 = hunter_reed(m, k, 2.0 * v, 1.1, 0.9).unwrap();
            prop_assert!((p2.peak_force / p1.peak_force - 2f64.powf(1.2)).abs() < 1e-12);
            prop_assert!((p2.contact_duration / p1.contact_duration - 2f64.powf(-0.2)).abs() < 1e-12);
        }

        #[test]
        fn potential_derivative_is_force(delta in -1e-3f64..1e-3) {
            let (g, k) = (2e-4, 1e10);
            let h = 1e-9;
            let fd = (contact_potential(delta + h, g, k) - contact_potential(delta - h, g, k)) / (2.0 * h);
            let f = contact_force(delta, g, k);
            prop_assert!((fd - f).abs() <= 1e-4 * f.abs().max(1.0));
        }
    }
}
