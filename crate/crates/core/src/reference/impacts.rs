use super::Trajectory;
use crate::contact::ContactSetup;

/// One contact interval of a simulated response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impact {
    /// Contact closure time, s.
    pub start: f64,
    /// Release time, s.
    pub end: f64,
    /// `|delta'|` at closure, m/s.
    pub impact_velocity: f64,
    /// Ratio of the mode-1 relative velocities `|q_a' - phi_c q_1'|` after and before.
    pub modal_cor: f64,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    gap: f64,
    rate: f64,
    modal_rate: f64,
}

/// Streaming contact detector. Closure and release times are linearly
/// interpolated between samples.
#[derive(Debug, Clone)]
pub(crate) struct ImpactDetector {
    clearance: f64,
    prev: Option<Sample>,
    onset: Option<(f64, f64, f64)>,
}

impl ImpactDetector {
    pub(crate) fn new(clearance: f64) -> Self {
        Self { clearance, prev: None, onset: None }
    }

    pub(crate) fn reset(&mut self) {
        self.prev = None;
        self.onset = None;
    }

    /// `modal_rate` is `q_a' - phi_c q_1'`.
    #[inline]
    pub(crate) fn feed(&mut self, t: f64, delta: f64, delta_rate: f64, modal_rate: f64) -> Option<Impact> {
        let cur = Sample { t, gap: delta.abs() - self.clearance, rate: delta_rate, modal_rate };
        let prev = self.prev.replace(cur)?;
        let closing = prev.gap <= 0.0 && cur.gap > 0.0;
        let opening = prev.gap > 0.0 && cur.gap <= 0.0;
        if !closing && !opening {
            return None;
        }
        let s = prev.gap / (prev.gap - cur.gap);
        let lerp = |a: f64, b: f64| a + s * (b - a);
        let t_cross = lerp(prev.t, cur.t);
        let modal = lerp(prev.modal_rate, cur.modal_rate);
        if closing {
            self.onset = Some((t_cross, lerp(prev.rate, cur.rate).abs(), modal.abs()));
            None
        } else {
            let (start, impact_velocity, before) = self.onset.take()?;
            Some(Impact { start, end: t_cross, impact_velocity, modal_cor: modal.abs() / before })
        }
    }
}

/// Contact intervals of a trajectory. An interval already open at the first
/// sample or still open at the last one is not reported.
pub fn detect_impacts(trajectory: &Trajectory, contact: &ContactSetup) -> Vec<Impact> {
    let mut detector = ImpactDetector::new(trajectory.clearance);
    let n = trajectory.mode_count;
    let phi_c = contact.contact_shape_value;
    (0..trajectory.len())
        .filter_map(|i| {
            let y = trajectory.state(i);
            let (delta, rate) = trajectory.relative_motion(y);
            let modal = y[2 * n + 1] - if n > 0 { phi_c * y[n] } else { 0.0 };
            detector.feed(trajectory.times[i], delta, rate, modal)
        })
        .collect()
}
