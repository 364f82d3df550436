use super::impacts::{Impact, ImpactDetector};
use super::steady::{contact_phase_of, steady_state_metrics, PeriodSummary, SteadyStateMetrics, SMR_VARIATION_THRESHOLD};
use super::{check_divergence, time_step};
use crate::beam::{ForcingLayout, ModalModel};
use crate::contact::ContactSetup;
use crate::dynamics::{Excitation, Host, VibroImpactSystem};
use crate::error::{invalid, Result};
use crate::integrator::{BogackiShampine, OdeSystem, STAGE_OFFSETS};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Stepped-sine protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Ascending excitation frequency ratios `Omega / omega_1`.
    pub frequency_ratios: Vec<f64>,
    pub periods_per_batch: usize,
    /// Relative change of consecutive batch-mean amplitudes regarded as settled.
    pub stabilization_tolerance: f64,
    pub points_per_mode_period: f64,
    /// Upper limit on simulated periods per frequency level.
    pub max_periods: usize,
    /// Batches dropped before convergence is judged.
    pub discarded_batches: usize,
    pub smr_threshold: f64,
    /// Start with the absorber resting against a wall rather than centered.
    /// A centered absorber is never reached when `g` exceeds the linear
    /// response at the contact point.
    pub absorber_at_wall: bool,
}

impl SimConfig {
    /// 20 levels in `0.9..=1.07`, batches of 100 periods, 1% tolerance.
    pub fn benchmark() -> Self {
        Self {
            frequency_ratios: Self::equidistant(0.9, 1.07, 20),
            periods_per_batch: 100,
            stabilization_tolerance: 0.01,
            points_per_mode_period: 15.0,
            max_periods: 1000,
            discarded_batches: 1,
            smr_threshold: SMR_VARIATION_THRESHOLD,
            absorber_at_wall: true,
        }
    }

    pub fn equidistant(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.frequency_ratios.is_empty() || self.frequency_ratios.iter().any(|&e| !(e > 0.0)) {
            return Err(invalid("frequency_ratios", "need at least one positive value"));
        }
        if self.frequency_ratios.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("frequency_ratios", "must be ascending"));
        }
        if self.periods_per_batch == 0 {
            return Err(invalid("periods_per_batch", "must be at least 1"));
        }
        if !(self.stabilization_tolerance > 0.0) {
            return Err(invalid("stabilization_tolerance", "must be positive"));
        }
        if !(self.points_per_mode_period > 0.0) {
            return Err(invalid("points_per_mode_period", "must be positive"));
        }
        if self.max_periods < (self.discarded_batches + 2) * self.periods_per_batch {
            return Err(invalid("max_periods", "must cover the discarded batches plus two"));
        }
        Ok(())
    }
}

/// Integrates whole forcing periods with tabulated excitation values.
struct PeriodRunner {
    sys: VibroImpactSystem,
    stepper: BogackiShampine,
    y: Vec<f64>,
    steps: usize,
    h: f64,
    frequency: f64,
    /// Force at the three stage times of each step.
    drive: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    detector: ImpactDetector,
    phi_c: f64,
    step_index: u64,
    previous_phase: f64,
    pending: Vec<Impact>,
    reference: f64,
    points_per_mode_period: f64,
}

impl PeriodRunner {
    fn new(model: &ModalModel, contact: &ContactSetup, layout: &ForcingLayout, points_per_mode_period: f64) -> Self {
        let omega = model.natural_frequencies()[0];
        let excitation = Excitation { layout: *layout, frequency: omega };
        let sys = VibroImpactSystem::new(Host::Flexible(model), contact, Some(&excitation));
        let dim = sys.dim();
        let reference = sys.linear_reference_amplitude().max(if contact.clearance.is_finite() { contact.clearance } else { 0.0 });
        Self {
            stepper: BogackiShampine::new(dim),
            y: vec![0.0; dim],
            steps: 0,
            h: 0.0,
            frequency: 0.0,
            drive: vec![],
            cos: vec![],
            sin: vec![],
            detector: ImpactDetector::new(contact.clearance),
            phi_c: contact.contact_shape_value,
            step_index: 0,
            previous_phase: 0.0,
            pending: vec![],
            reference,
            points_per_mode_period,
            sys,
        }
    }

    fn set_frequency(&mut self, model: &ModalModel, frequency: f64) {
        let (h, steps) = time_step(model, frequency, self.points_per_mode_period);
        let steps = steps.expect("forced system");
        let f = self.sys.force_amplitude();
        self.sys.set_excitation_frequency(frequency);
        self.h = h;
        self.steps = steps;
        self.frequency = frequency;
        let angle = |x: f64| 2.0 * PI * x / steps as f64;
        self.drive = (0..steps)
            .flat_map(|j| STAGE_OFFSETS.map(|s| f * angle(j as f64 + s).cos()))
            .collect();
        self.cos = (0..steps).map(|j| angle(j as f64).cos()).collect();
        self.sin = (0..steps).map(|j| angle(j as f64).sin()).collect();
        self.step_index = 0;
        self.pending.clear();
        self.detector.reset();
        self.feed_detector();
    }

    #[inline]
    fn feed_detector(&mut self) {
        let n = self.sys.mode_count();
        let delta = self.sys.delta(&self.y);
        let rate = self.sys.delta_rate(&self.y);
        let modal = self.y[2 * n + 1] - self.phi_c * self.y[n];
        let t = self.step_index as f64 * self.h;
        if let Some(imp) = self.detector.feed(t, delta, rate, modal) {
            self.pending.push(imp);
        }
    }

    fn run_period(&mut self) -> Result<PeriodSummary> {
        let (mut re, mut im) = (0.0, 0.0);
        let first_step = self.step_index;
        for j in 0..self.steps {
            let q = self.y[0];
            re += q * self.cos[j];
            im -= q * self.sin[j];
            let (sys, drive) = (&self.sys, &self.drive[3 * j..3 * j + 3]);
            self.stepper
                .step_with(self.h, &mut self.y, |s, y, dy| sys.derivative_with_drive(drive[s], y, dy));
            self.step_index += 1;
            self.feed_detector();
        }
        check_divergence(&self.y, self.reference, self.step_index as f64 * self.h)?;

        let scale = 2.0 / self.steps as f64;
        let (re, im) = (re * scale, im * scale);
        let phase = im.atan2(re);
        let period_start = first_step as f64 * self.h;
        let mut summary = PeriodSummary { amplitude: re.hypot(im), phase, contact_phases: vec![], modal_cors: vec![] };
        for imp in self.pending.drain(..) {
            let theta = if imp.start >= period_start { phase } else { self.previous_phase };
            summary.contact_phases.push(contact_phase_of(imp.start, self.frequency, theta));
            summary.modal_cors.push(imp.modal_cor);
        }
        self.previous_phase = phase;
        Ok(summary)
    }
}

/// Stepped-sine sweep over `config.frequency_ratios`; the final state of one
/// level is the initial state of the next. Starts from rest with the
/// absorber at rest (see [`SimConfig::absorber_at_wall`]).
pub fn stepped_sine_sweep(
    model: &ModalModel,
    contact: &ContactSetup,
    layout: &ForcingLayout,
    config: &SimConfig,
) -> Result<Vec<SteadyStateMetrics>> {
    config.validate()?;
    let omega = model.natural_frequencies()[0];
    let mut runner = PeriodRunner::new(model, contact, layout, config.points_per_mode_period);
    let batch = config.periods_per_batch;
    let mut out = Vec::with_capacity(config.frequency_ratios.len());
    if config.absorber_at_wall && contact.clearance.is_finite() {
        let a = runner.sys.absorber_index();
        runner.y[a] = contact.clearance;
    }
    for &eta in &config.frequency_ratios {
        runner.set_frequency(model, eta * omega);
        let mut kept: Vec<PeriodSummary> = Vec::with_capacity(2 * batch);
        let mut previous_mean: Option<f64> = None;
        let mut batches = 0usize;
        let mut periods = 0usize;
        let converged = loop {
            let mut sum = 0.0;
            for _ in 0..batch {
                let p = runner.run_period()?;
                sum += p.amplitude;
                if kept.len() == 2 * batch {
                    kept.remove(0);
                }
                kept.push(p);
            }
            periods += batch;
            batches += 1;
            let mean = sum / batch as f64;
            if batches > config.discarded_batches {
                if let Some(prev) = previous_mean {
                    if (mean - prev).abs() < config.stabilization_tolerance * prev {
                        break true;
                    }
                }
                previous_mean = Some(mean);
            }
            if periods + batch > config.max_periods {
                break false;
            }
        };
        let mut metrics = steady_state_metrics(eta, &kept, config.smr_threshold);
        metrics.converged = converged;
        metrics.periods = periods;
        out.push(metrics);
    }
    Ok(out)
}

/// Resonant response of the reference simulation at one clearance.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficacyPoint {
    /// `g / (phi_c a_no)`.
    pub normalized_clearance: f64,
    /// m.
    pub clearance: f64,
    /// Level with the largest mean amplitude.
    pub resonant: SteadyStateMetrics,
    /// Mean resonant amplitude over `a_no`.
    pub amplitude_ratio: f64,
    /// Largest per-period amplitude at the resonant level over `a_no`.
    pub max_amplitude_ratio: f64,
    pub sweep: Vec<SteadyStateMetrics>,
}

/// Runs a sweep for each normalized clearance `g / (phi_c a_no)` (in parallel)
/// and extracts the resonant response.
pub fn efficacy_scan(
    model: &ModalModel,
    contact: &ContactSetup,
    layout: &ForcingLayout,
    normalized_clearances: &[f64],
    config: &SimConfig,
) -> Result<Vec<EfficacyPoint>> {
    if normalized_clearances.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("normalized_clearances", "must be ascending"));
    }
    let a_no = model.resonant_amplitude_without_absorber(layout);
    let scale = contact.contact_shape_value * a_no;
    normalized_clearances
        .par_iter()
        .map(|&gn| {
            let setup = contact.with_clearance(gn * scale);
            let sweep = stepped_sine_sweep(model, &setup, layout, config)?;
            let resonant = *sweep
                .iter()
                .max_by(|a, b| a.mean_amplitude.total_cmp(&b.mean_amplitude))
                .expect("validated non-empty sweep");
            Ok(EfficacyPoint {
                normalized_clearance: gn,
                clearance: setup.clearance,
                amplitude_ratio: resonant.mean_amplitude / a_no,
                max_amplitude_ratio: resonant.max_amplitude / a_no,
                resonant,
                sweep,
            })
        })
        .collect()
}
