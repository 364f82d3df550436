//! One representative impact resolved in time, and the pulse parameters
//! (modal coefficient of restitution and Hunter-Reed correction factors)
//! extracted from it.

use crate::beam::{ForcingLayout, ModalModel};
use crate::contact::{compression_scale, hunter_reed, pulse_shape_integral, ContactSetup, HUNTER_REED_DURATION};
use crate::design::{optimum_design, pre_impact_velocity, DimensionlessDesign, Optimum};
use crate::dynamics::{Host, VibroImpactSystem};
use crate::error::{invalid, Error, Result};
use crate::integrator::{BogackiShampine, OdeSystem};
use std::f64::consts::{FRAC_PI_4, PI};
use std::io::{self, Write};

/// Step-size rules of the single-impact simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactOptions {
    /// Samples per period of the highest retained mode.
    pub points_per_mode_period: f64,
    /// Samples per Hunter-Reed contact duration estimate.
    pub points_per_pulse: f64,
    /// Give up after this many contact duration estimates.
    pub time_cap_factor: f64,
}

impl Default for ImpactOptions {
    fn default() -> Self {
        Self { points_per_mode_period: 15.0, points_per_pulse: 50.0, time_cap_factor: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpactSample {
    pub t: f64,
    pub delta: f64,
    /// Contact force on the host, N.
    pub force: f64,
    pub absorber_velocity: f64,
    pub modal_velocities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpactRecord {
    /// From contact closure to release; the last sample sits at the release time.
    pub samples: Vec<ImpactSample>,
    pub impact_velocity: f64,
    pub contact_duration: f64,
    /// Magnitude of the largest contact force, N.
    pub peak_force: f64,
    pub post_impact_absorber_velocity: f64,
    /// Mode-1 modal velocity at release; zero for a clamped host.
    pub post_impact_modal_velocity: f64,
    pub time_step: f64,
}

impl ImpactRecord {
    /// RMS deviation of the normalized pulse from `sin^{3/2}(pi t / T_c)`.
    pub fn pulse_shape_deviation(&self) -> f64 {
        let sum: f64 = self
            .samples
            .iter()
            .map(|s| {
                let shape = (PI * s.t / self.contact_duration).sin().max(0.0).powf(1.5);
                (s.force.abs() / self.peak_force - shape).powi(2)
            })
            .sum();
        (sum / self.samples.len() as f64).sqrt()
    }

    /// Writes the `(t, f_c)` pulse as CSV.
    pub fn write_pulse_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t_s,force_on_host_n")?;
        for s in &self.samples {
            writeln!(out, "{:.12e},{:.12e}", s.t, s.force)?;
        }
        Ok(())
    }
}

/// Simulates one impact with the default step rules.
pub fn simulate_single_impact(host: Host<'_>, contact: &ContactSetup, v_c: f64) -> Result<ImpactRecord> {
    simulate_single_impact_with(host, contact, v_c, &ImpactOptions::default())
}

/// Host at rest, absorber at the lower wall moving towards it with `v_c`.
/// Integration stops when the contact opens with the absorber moving away.
pub fn simulate_single_impact_with(
    host: Host<'_>,
    contact: &ContactSetup,
    v_c: f64,
    options: &ImpactOptions,
) -> Result<ImpactRecord> {
    contact.validate()?;
    if let Host::Flexible(model) = host {
        if model.mode_count() == 0 {
            return Err(invalid("mode_count", "at least one mode is required"));
        }
    }
    let estimate = hunter_reed(contact.absorber_mass, contact.hertz_constant, v_c, 1.0, 1.0)?.contact_duration;
    let mut h = estimate / options.points_per_pulse;
    if let Host::Flexible(model) = host {
        let w_max = model.natural_frequencies().iter().copied().fold(0.0, f64::max);
        h = h.min(2.0 * PI / w_max / options.points_per_mode_period);
    }
    let cap = options.time_cap_factor * estimate;

    let sys = VibroImpactSystem::free(host, contact);
    let n = sys.mode_count();
    let ia = sys.absorber_index();
    let g = contact.clearance;
    let penetration = |y: &[f64]| -sys.delta(y) - g;
    let sample = |t: f64, y: &[f64]| ImpactSample {
        t,
        delta: sys.delta(y),
        force: sys.contact_force(y),
        absorber_velocity: y[ia + 1],
        modal_velocities: y[n..2 * n].to_vec(),
    };

    let mut stepper = BogackiShampine::new(sys.dim());
    let mut y = vec![0.0; sys.dim()];
    y[ia] = g;
    y[ia + 1] = v_c;
    let mut next = y.clone();
    let mut samples = vec![sample(0.0, &y)];
    let mut peak = (0.0f64, 0usize);
    let mut t = 0.0;
    let mut step = 0u64;

    let (t_release, y_release) = loop {
        stepper.step_into(&sys, t, h, &y, &mut next);
        let t_next = (step + 1) as f64 * h;
        let (p0, p1) = (penetration(&y), penetration(&next));
        if p0 > 0.0 && p1 <= 0.0 {
            // refine the gap crossing inside the step
            let (mut lo, mut hi) = (0.0, h);
            let mut trial = next.clone();
            while hi - lo > 1e-12 * estimate {
                let mid = 0.5 * (lo + hi);
                stepper.step_into(&sys, t, mid, &y, &mut trial);
                if penetration(&trial) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            stepper.step_into(&sys, t, hi, &y, &mut trial);
            if trial[ia + 1] <= 0.0 {
                break (t + hi, trial);
            }
        }
        std::mem::swap(&mut y, &mut next);
        step += 1;
        t = t_next;
        let p = penetration(&y);
        if p > peak.0 {
            peak = (p, samples.len());
        }
        samples.push(sample(t, &y));
        if t > cap {
            return Err(Error::ContactNeverOpened { cap, estimate });
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { time: t, norm: f64::INFINITY });
        }
    };
    samples.push(sample(t_release, &y_release));

    // peak compression from a cubic Hermite fit around the largest sample
    let mut max_p = peak.0;
    if peak.1 > 0 && peak.1 + 1 < samples.len() {
        for j in [peak.1 - 1, peak.1] {
            let (a, b) = (&samples[j], &samples[j + 1]);
            let pen = |s: &ImpactSample| -s.delta - g;
            let rate = |s: &ImpactSample| {
                let host: f64 = s.modal_velocities.iter().zip(sys.contact_shapes()).map(|(v, w)| v * w).sum();
                s.absorber_velocity - host
            };
            max_p = max_p.max(hermite_max(b.t - a.t, pen(a), pen(b), rate(a), rate(b)));
        }
    }
    let peak_force = contact.hertz_constant * max_p * max_p.sqrt();

    Ok(ImpactRecord {
        impact_velocity: v_c,
        contact_duration: t_release,
        peak_force,
        post_impact_absorber_velocity: y_release[ia + 1],
        post_impact_modal_velocity: if n > 0 { y_release[n] } else { 0.0 },
        time_step: h,
        samples,
    })
}

/// Maximum over `[0, h]` of the cubic Hermite interpolant with end values
/// `p0, p1` and end slopes `d0, d1`.
fn hermite_max(h: f64, p0: f64, p1: f64, d0: f64, d1: f64) -> f64 {
    // p(s) = p0 + d0 h s + c2 s^2 + c3 s^3 on s in [0, 1]
    let (m0, m1) = (d0 * h, d1 * h);
    let c2 = 3.0 * (p1 - p0) - 2.0 * m0 - m1;
    let c3 = 2.0 * (p0 - p1) + m0 + m1;
    let eval = |s: f64| p0 + s * (m0 + s * (c2 + s * c3));
    let mut best = p0.max(p1);
    // p'(s) = m0 + 2 c2 s + 3 c3 s^2
    let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, m0);
    let mut roots = Vec::with_capacity(2);
    if qa.abs() < 1e-300 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb + sq) / (2.0 * qa));
            roots.push((-qb - sq) / (2.0 * qa));
        }
    }
    for s in roots {
        if (0.0..=1.0).contains(&s) {
            best = best.max(eval(s));
        }
    }
    best
}

/// Hunter-Reed pulse corrections and modal coefficient of restitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    pub modal_cor: f64,
    pub alpha_tilde: f64,
    pub tc_tilde: f64,
    /// `(2/pi) 2.94 (5/4) T_c~ alpha~^{5/2} ∫_0^1 sin^{3/2}(pi tau) dtau`.
    pub gamma: f64,
}

impl PulseParams {
    pub fn new(modal_cor: f64, alpha_tilde: f64, tc_tilde: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&modal_cor) {
            return Err(Error::NonphysicalRestitution { r: modal_cor });
        }
        for (name, v) in [("alpha_tilde", alpha_tilde), ("tc_tilde", tc_tilde)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(Self { modal_cor, alpha_tilde, tc_tilde, gamma: pulse_gamma(alpha_tilde, tc_tilde) })
    }

    /// Relative change of `(r, alpha~, T_c~)` with respect to `other`, largest component.
    pub fn max_relative_change(&self, other: &PulseParams) -> f64 {
        [
            (self.modal_cor, other.modal_cor),
            (self.alpha_tilde, other.alpha_tilde),
            (self.tc_tilde, other.tc_tilde),
        ]
        .iter()
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max)
    }
}

/// Pulse factor `Gamma` of the averaged contact force.
pub fn pulse_gamma(alpha_tilde: f64, tc_tilde: f64) -> f64 {
    2.0 / PI * HUNTER_REED_DURATION * 1.25 * tc_tilde * alpha_tilde.powf(2.5) * pulse_shape_integral()
}

/// Fits the corrected Hunter-Reed pulse to a simulated impact.
///
/// `alpha~ = (f_c/k_H)^{2/3} / alpha_0`, `T_c~ = T_c v_c / (2.94 alpha_0 alpha~)` and
/// `r = |q_a'(T_c) - phi_c q_1'(T_c)| / v_c`, keeping only the resonant mode.
pub fn extract_pulse_params(record: &ImpactRecord, contact: &ContactSetup) -> Result<PulseParams> {
    let v_c = record.impact_velocity;
    let alpha0 = compression_scale(contact.absorber_mass, contact.hertz_constant, v_c);
    let alpha_tilde = (record.peak_force / contact.hertz_constant).powf(2.0 / 3.0) / alpha0;
    let tc_tilde = record.contact_duration * v_c / (HUNTER_REED_DURATION * alpha0 * alpha_tilde);
    let relative = record.post_impact_absorber_velocity - contact.contact_shape_value * record.post_impact_modal_velocity;
    PulseParams::new(relative.abs() / v_c, alpha_tilde, tc_tilde)
}

/// Result of the two-step calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// Velocity from the `r = 0` seed.
    pub seed_velocity: f64,
    /// Step (i) velocity, recomputed with the seed's `r`.
    pub initial_velocity: f64,
    pub initial: PulseParams,
    /// Optimum found with the step (i) parameters.
    pub optimum: Optimum,
    pub optimum_velocity: f64,
    /// Parameters from the single re-iteration at `optimum_velocity`.
    pub refined: PulseParams,
}

impl Calibration {
    pub fn relative_change(&self) -> f64 {
        self.refined.max_relative_change(&self.initial)
    }
}

/// Two-step calibration of the pulse parameters for the resonant mode.
///
/// Step (i) simulates an impact at the velocity of a host vibrating with its
/// resonant amplitude without absorber, `g = phi_c a`, `psi = pi/4`. Step (ii)
/// designs the optimum with those parameters, and the impact is simulated
/// once more at the optimum's pre-impact velocity.
pub fn calibrate(model: &ModalModel, contact: &ContactSetup, layout: &ForcingLayout) -> Result<Calibration> {
    calibrate_with(model, contact, layout, &ImpactOptions::default())
}

pub fn calibrate_with(
    model: &ModalModel,
    contact: &ContactSetup,
    layout: &ForcingLayout,
    options: &ImpactOptions,
) -> Result<Calibration> {
    let omega = model.natural_frequencies()[0];
    let damping = model.damping_ratios()[0];
    let phi_c = contact.contact_shape_value;
    let a_no = model.resonant_amplitude_without_absorber(layout);
    let run = |v: f64| -> Result<PulseParams> {
        let record = simulate_single_impact_with(Host::Flexible(model), contact, v, options)?;
        extract_pulse_params(&record, contact)
    };

    let seed_velocity = pre_impact_velocity(omega, phi_c * a_no, 0.0, FRAC_PI_4)?;
    let seed = run(seed_velocity)?;
    let initial_velocity = pre_impact_velocity(omega, phi_c * a_no, seed.modal_cor, FRAC_PI_4)?;
    let initial = run(initial_velocity)?;

    let mu = contact.absorber_mass * phi_c * phi_c;
    let design = DimensionlessDesign::new(damping, mu * initial.gamma, initial.modal_cor)?;
    let optimum = optimum_design(&design);
    let p = optimum.point;
    let optimum_velocity = pre_impact_velocity(
        p.frequency_ratio * omega,
        phi_c * p.amplitude_ratio * a_no,
        initial.modal_cor,
        p.psi,
    )?;
    let refined = run(optimum_velocity)?;
    Ok(Calibration { seed_velocity, initial_velocity, initial, optimum, optimum_velocity, refined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{assemble_modal_model, BeamSpec};

    fn clamped_contact() -> ContactSetup {
        ContactSetup {
            absorber_radius: 4.2e-3,
            absorber_mass: 2.457e-3,
            hertz_constant: 1.0e10,
            clearance: 1e-3,
            contact_shape_value: 1.0,
            mass_ratio: 0.01,
        }
    }

    #[test]
    fn gamma_of_uncorrected_pulse() {
        let g = pulse_gamma(1.0, 1.0);
        assert!((g - 2.0 / PI * 2.94 * 1.25 * 0.556_417_9).abs() < 1e-6);
        assert!((g - 1.3018).abs() < 1e-4);
        let p = PulseParams::new(0.5, 1.1, 0.9).unwrap();
        assert!((p.gamma - pulse_gamma(p.alpha_tilde, p.tc_tilde)).abs() < 1e-12);
    }

    #[test]
    fn pulse_params_validation() {
        assert!(matches!(PulseParams::new(1.0, 1.0, 1.0), Err(Error::NonphysicalRestitution { .. })));
        assert!(PulseParams::new(-0.1, 1.0, 1.0).is_err());
        assert!(PulseParams::new(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn hermite_peak_of_parabola() {
        // p(t) = 1 - (t - 0.4)^2 on [0, 1]
        let m = hermite_max(1.0, 1.0 - 0.16, 1.0 - 0.36, 0.8, -1.2);
        assert!((m - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clamped_host_matches_single_mass_pulse() {
        let contact = clamped_contact();
        let v = 0.5;
        let rec = simulate_single_impact(Host::Clamped, &contact, v).unwrap();
        let a0 = compression_scale(contact.absorber_mass, contact.hertz_constant, v);
        assert!((rec.contact_duration / (2.94 * a0 / v) - 1.0).abs() < 0.01);
        assert!((rec.peak_force / (contact.hertz_constant * a0.powf(1.5)) - 1.0).abs() < 0.01);
        let p = extract_pulse_params(&rec, &contact).unwrap();
        assert!(p.modal_cor < 1.0 && p.modal_cor > 0.99);
        assert!(rec.pulse_shape_deviation() < 0.05);
    }

    #[test]
    fn deterministic_records() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 4, 0.01).unwrap();
        let contact = ContactSetup { contact_shape_value: model.shape_at(beam.length, 0), ..clamped_contact() };
        let a = simulate_single_impact(Host::Flexible(&model), &contact, 0.3).unwrap();
        let b = simulate_single_impact(Host::Flexible(&model), &contact, 0.3).unwrap();
        assert_eq!(a, b);
        assert!(a.samples.len() > 10);
        let last = a.samples.last().unwrap();
        assert!(last.force.abs() < 1e-9 * a.peak_force);
    }

    #[test]
    fn time_cap_is_enforced() {
        let contact = clamped_contact();
        let opts = ImpactOptions { time_cap_factor: 0.5, ..ImpactOptions::default() };
        let err = simulate_single_impact_with(Host::Clamped, &contact, 0.5, &opts).unwrap_err();
        assert!(matches!(err, Error::ContactNeverOpened { .. }));
    }

    #[test]
    fn pulse_csv() {
        let rec = simulate_single_impact(Host::Clamped, &clamped_contact(), 0.5).unwrap();
        let mut buf = Vec::new();
        rec.write_pulse_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), rec.samples.len() + 1);
    }
}
