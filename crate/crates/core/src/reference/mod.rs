//! Direct time integration of the full vibro-impact system and the
//! stepped-sine protocol used to validate the semi-analytical design.

mod impacts;
mod steady;
mod sweep;

pub use impacts::{detect_impacts, Impact};
pub use steady::{
    contact_phase_of, steady_state_metrics, summarize_periods, PeriodSummary, SteadyStateMetrics,
    SMR_VARIATION_THRESHOLD,
};
pub use sweep::{efficacy_scan, stepped_sine_sweep, EfficacyPoint, SimConfig};

use crate::beam::{ForcingLayout, ModalModel};
use crate::contact::ContactSetup;
use crate::dynamics::{Excitation, Host, VibroImpactSystem};
use crate::error::{invalid, Error, Result};
use crate::integrator::{BogackiShampine, OdeSystem};
use std::f64::consts::PI;
use std::io::{self, Write};

/// A trajectory whose norm exceeds this multiple of the reference amplitude has diverged.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    /// Samples per period of the highest retained mode.
    pub points_per_mode_period: f64,
    /// Keep every `decimation`-th state.
    pub decimation: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { points_per_mode_period: 15.0, decimation: 1 }
    }
}

/// Fixed step for a model: the highest-mode rule, shortened so that a whole
/// number of steps fits into one forcing period when `frequency > 0`.
/// Returns the step and the steps per forcing period.
pub fn time_step(model: &ModalModel, frequency: f64, points_per_mode_period: f64) -> (f64, Option<usize>) {
    let w_max = model.natural_frequencies().iter().copied().fold(0.0, f64::max);
    let h_max = 2.0 * PI / w_max / points_per_mode_period;
    if frequency > 0.0 {
        let period = 2.0 * PI / frequency;
        let steps = (period / h_max).ceil() as usize;
        (period / steps as f64, Some(steps))
    } else {
        (h_max, None)
    }
}

/// Sampled states of a simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Row-major, `dim` values per sample.
    pub states: Vec<f64>,
    pub dim: usize,
    pub mode_count: usize,
    /// Integrator step (not the sample spacing when decimated).
    pub time_step: f64,
    pub contact_shapes: Vec<f64>,
    pub clearance: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    /// `(delta, delta')` of a state.
    pub fn relative_motion(&self, y: &[f64]) -> (f64, f64) {
        let n = self.mode_count;
        let (mut d, mut v) = (0.0, 0.0);
        for k in 0..n {
            d += self.contact_shapes[k] * y[k];
            v += self.contact_shapes[k] * y[n + k];
        }
        (d - y[2 * n], v - y[2 * n + 1])
    }

    /// CSV with time, modal displacements, absorber displacement and `delta`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.mode_count;
        write!(out, "t_s")?;
        for k in 1..=n {
            write!(out, ",q{k}_sqrtkg_m")?;
        }
        writeln!(out, ",qa_m,delta_m")?;
        for i in 0..self.len() {
            let y = self.state(i);
            write!(out, "{:.12e}", self.times[i])?;
            for v in &y[..n] {
                write!(out, ",{v:.12e}")?;
            }
            writeln!(out, ",{:.12e},{:.12e}", y[2 * n], self.relative_motion(y).0)?;
        }
        Ok(())
    }
}

/// Integrates the coupled system from `y0` over `duration` with a fixed step.
///
/// `forcing = None` gives the unforced system. Use `f64::INFINITY` as the
/// clearance to disable contact.
pub fn integrate(
    model: &ModalModel,
    contact: &ContactSetup,
    forcing: Option<&ForcingLayout>,
    frequency: f64,
    y0: &[f64],
    duration: f64,
    options: &IntegrateOptions,
) -> Result<Trajectory> {
    if forcing.is_some() && !(frequency > 0.0) {
        return Err(invalid("frequency", format!("must be positive, got {frequency}")));
    }
    if options.decimation == 0 {
        return Err(invalid("decimation", "must be at least 1"));
    }
    let excitation = forcing.map(|layout| Excitation { layout: *layout, frequency });
    let sys = VibroImpactSystem::new(Host::Flexible(model), contact, excitation.as_ref());
    let dim = sys.dim();
    if y0.len() != dim {
        return Err(invalid("initial_state", format!("expected {dim} values, got {}", y0.len())));
    }
    let (h, _) = time_step(model, if forcing.is_some() { frequency } else { 0.0 }, options.points_per_mode_period);
    let steps = (duration / h).round() as usize;
    let reference = sys
        .linear_reference_amplitude()
        .max(y0.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
        .max(if contact.clearance.is_finite() { contact.clearance } else { 0.0 });

    let mut stepper = BogackiShampine::new(dim);
    let mut y = y0.to_vec();
    let mut times = Vec::with_capacity(steps / options.decimation + 1);
    let mut states = Vec::with_capacity((steps / options.decimation + 1) * dim);
    times.push(0.0);
    states.extend_from_slice(&y);
    for i in 0..steps {
        let t = i as f64 * h;
        stepper.step(&sys, t, h, &mut y);
        if (i + 1) % options.decimation == 0 {
            times.push(t + h);
            states.extend_from_slice(&y);
        }
        if i % 256 == 0 {
            check_divergence(&y, reference, t + h)?;
        }
    }
    Ok(Trajectory {
        times,
        states,
        dim,
        mode_count: sys.mode_count(),
        time_step: h,
        contact_shapes: sys.contact_shapes().to_vec(),
        clearance: contact.clearance,
    })
}

pub(crate) fn check_divergence(y: &[f64], reference: f64, time: f64) -> Result<()> {
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence { time, norm: f64::INFINITY });
    }
    let norm = y.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if reference > 0.0 && norm > DIVERGENCE_FACTOR * reference {
        return Err(Error::Divergence { time, norm });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{assemble_modal_model, BeamSpec};

    fn setup(modes: usize, damping: f64) -> (ModalModel, ContactSetup) {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, modes, damping).unwrap();
        let contact = ContactSetup {
            absorber_radius: 4.2e-3,
            absorber_mass: 2.457e-3,
            hertz_constant: 1e10,
            clearance: f64::INFINITY,
            contact_shape_value: model.shape_at(beam.length, 0),
            mass_ratio: 0.01,
        };
        (model, contact)
    }

    #[test]
    fn step_divides_forcing_period() {
        let (model, _) = setup(12, 0.02);
        let w = model.natural_frequencies()[0];
        let (h, steps) = time_step(&model, w, 15.0);
        let steps = steps.unwrap();
        assert!((h * steps as f64 - 2.0 * PI / w).abs() < 1e-15);
        let w_max = model.natural_frequencies()[11];
        assert!(h <= 2.0 * PI / w_max / 15.0);
    }

    #[test]
    fn free_decay_follows_modal_damping() {
        let (model, contact) = setup(2, 0.02);
        let mut y0 = vec![0.0; 6];
        y0[0] = 1e-3;
        let w = model.natural_frequencies()[0];
        let period = 2.0 * PI / w;
        let traj = integrate(&model, &contact, None, 0.0, &y0, 50.0 * period, &IntegrateOptions::default()).unwrap();
        // envelope from the last sample near a full period
        let i = traj.len() - 1;
        let t = traj.times[i];
        let y = traj.state(i);
        let wd = w * (1.0 - 0.02f64 * 0.02).sqrt();
        // exact amplitude of the underdamped solution
        let exact = 1e-3 * (-0.02 * w * t).exp() * ((wd * t).cos() + 0.02 * w / wd * (wd * t).sin());
        assert!((y[0] - exact).abs() < 0.01 * 1e-3 * (-0.02 * w * t).exp());
    }

    #[test]
    fn decimation_and_csv() {
        let (model, contact) = setup(2, 0.02);
        let y0 = vec![1e-4, 0.0, 0.0, 0.0, 0.0, 0.0];
        let opts = IntegrateOptions { decimation: 10, ..Default::default() };
        let full = integrate(&model, &contact, None, 0.0, &y0, 1e-3, &IntegrateOptions::default()).unwrap();
        let dec = integrate(&model, &contact, None, 0.0, &y0, 1e-3, &opts).unwrap();
        assert_eq!(dec.len(), (full.len() - 1) / 10 + 1);
        assert_eq!(dec.state(1), full.state(10));
        let mut buf = Vec::new();
        dec.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t_s,q1_sqrtkg_m,q2_sqrtkg_m,qa_m,delta_m"));
    }

    #[test]
    fn no_contact_no_impacts() {
        let (model, contact) = setup(2, 0.02);
        let y0 = vec![1e-2, 0.0, 0.0, 0.0, 0.0, 0.0];
        let traj = integrate(&model, &contact, None, 0.0, &y0, 0.05, &IntegrateOptions::default()).unwrap();
        assert!(detect_impacts(&traj, &contact).is_empty());
    }

    #[test]
    fn bad_inputs() {
        let (model, contact) = setup(2, 0.02);
        let layout = ForcingLayout::benchmark(model.beam(), 1.0 / 3.0, 1.0);
        let y0 = vec![0.0; 6];
        let opts = IntegrateOptions::default();
        assert!(integrate(&model, &contact, Some(&layout), 0.0, &y0, 1e-3, &opts).is_err());
        assert!(integrate(&model, &contact, None, 0.0, &y0[..4], 1e-3, &opts).is_err());
    }
}
