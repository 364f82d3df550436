use super::{Impact, Trajectory};
use std::f64::consts::PI;

/// Fundamental-harmonic content of the mode-1 coordinate over one forcing
/// period, with the impacts that closed during that period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodSummary {
    /// `|c|` with `q_1 ~ |c| cos(Omega t + phase)`.
    pub amplitude: f64,
    pub phase: f64,
    /// Contact phase of each impact in `[0, pi)`.
    pub contact_phases: Vec<f64>,
    pub modal_cors: Vec<f64>,
}

impl PeriodSummary {
    pub fn impact_count(&self) -> usize {
        self.contact_phases.len()
    }
}

/// Averages over the periods of one frequency level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateMetrics {
    pub frequency_ratio: f64,
    /// Mean per-period modal amplitude of mode 1, sqrt(kg) m.
    pub mean_amplitude: f64,
    pub max_amplitude: f64,
    /// Coefficient of variation of the per-period amplitude.
    pub amplitude_variation: f64,
    pub impacts_per_period: f64,
    /// Circular mean in `[0, pi)`; NaN without impacts.
    pub mean_contact_phase: f64,
    /// NaN without impacts.
    pub mean_modal_cor: f64,
    pub is_strongly_modulated: bool,
    /// Batch means settled within tolerance before the period limit.
    pub converged: bool,
    pub periods: usize,
}

/// Strongly modulated when the per-period amplitude varies by more than this
/// (coefficient of variation).
pub const SMR_VARIATION_THRESHOLD: f64 = 0.10;

/// Contact phase of an impact starting at `t`, for a host response
/// `cos(Omega t + phase)`, folded into `[0, pi)` so both walls count alike.
#[inline]
pub fn contact_phase_of(t: f64, frequency: f64, phase: f64) -> f64 {
    (frequency * t + phase).rem_euclid(PI)
}

/// Metrics over `periods`. `converged` and `periods` are left for the caller
/// to overwrite when the summary comes from a sweep.
pub fn steady_state_metrics(frequency_ratio: f64, periods: &[PeriodSummary], smr_threshold: f64) -> SteadyStateMetrics {
    let count = periods.len().max(1) as f64;
    let amps: Vec<f64> = periods.iter().map(|p| p.amplitude).collect();
    let mean = amps.iter().sum::<f64>() / count;
    let max = amps.iter().copied().fold(0.0, f64::max);
    let var = amps.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / count;
    let cv = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };

    let impacts: usize = periods.iter().map(PeriodSummary::impact_count).sum();
    let (mut cs, mut sn) = (0.0, 0.0);
    let mut cor_sum = 0.0;
    let mut cor_count = 0usize;
    for p in periods {
        for &psi in &p.contact_phases {
            cs += (2.0 * psi).cos();
            sn += (2.0 * psi).sin();
        }
        for &r in p.modal_cors.iter().filter(|r| r.is_finite()) {
            cor_sum += r;
            cor_count += 1;
        }
    }
    let mean_contact_phase = if impacts > 0 { (0.5 * sn.atan2(cs)).rem_euclid(PI) } else { f64::NAN };
    SteadyStateMetrics {
        frequency_ratio,
        mean_amplitude: mean,
        max_amplitude: max,
        amplitude_variation: cv,
        impacts_per_period: impacts as f64 / count,
        mean_contact_phase,
        mean_modal_cor: if cor_count > 0 { cor_sum / cor_count as f64 } else { f64::NAN },
        is_strongly_modulated: cv > smr_threshold,
        converged: true,
        periods: periods.len(),
    }
}

/// Splits a trajectory into forcing periods and summarizes each one.
///
/// The trajectory must be undecimated, start at a period boundary and use a
/// step that divides the forcing period; incomplete trailing periods are dropped.
pub fn summarize_periods(trajectory: &Trajectory, frequency: f64, impacts: &[Impact]) -> Vec<PeriodSummary> {
    let h = trajectory.time_step;
    let t0 = trajectory.times.first().copied().unwrap_or(0.0);
    let steps = (2.0 * PI / (frequency * h)).round() as usize;
    let count = trajectory.len().saturating_sub(1) / steps.max(1);
    let mut out: Vec<PeriodSummary> = (0..count)
        .map(|p| {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..steps {
                let i = p * steps + j;
                let (s, c) = (frequency * (trajectory.times[i] - t0)).sin_cos();
                let q = trajectory.state(i)[0];
                re += q * c;
                im -= q * s;
            }
            let scale = 2.0 / steps as f64;
            let (re, im) = (re * scale, im * scale);
            PeriodSummary { amplitude: re.hypot(im), phase: im.atan2(re), contact_phases: vec![], modal_cors: vec![] }
        })
        .collect();
    let period = steps as f64 * h;
    for imp in impacts {
        let p = ((imp.start - t0) / period).floor();
        if p >= 0.0 && (p as usize) < out.len() {
            let summary = &mut out[p as usize];
            summary.contact_phases.push(contact_phase_of(imp.start - t0, frequency, summary.phase));
            summary.modal_cors.push(imp.modal_cor);
        }
    }
    out
}
