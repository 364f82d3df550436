//! Fixed-step third-order Bogacki-Shampine integration.

/// First-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn derivative(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Time offsets of the three stages, in units of the step size.
pub const STAGE_OFFSETS: [f64; 3] = [0.0, 0.5, 0.75];

const B1: f64 = 2.0 / 9.0;
const B2: f64 = 1.0 / 3.0;
const B3: f64 = 4.0 / 9.0;

/// Bogacki-Shampine tableau, the scheme behind MATLAB's `ode3`.
///
/// Three derivative evaluations per step; scratch buffers are owned by the
/// stepper so that stepping allocates nothing.
#[derive(Debug, Clone)]
pub struct BogackiShampine {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    stage: Vec<f64>,
}

impl BogackiShampine {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    /// Advances `y` from `t` to `t + h` in place.
    pub fn step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, h: f64, y: &mut [f64]) {
        self.step_with(h, y, |s, y, dy| sys.derivative(t + STAGE_OFFSETS[s] * h, y, dy));
    }

    /// One step of size `h` from `y`, written to `out`; `y` is left untouched.
    pub fn step_into<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, h: f64, y: &[f64], out: &mut [f64]) {
        self.stages(h, y, |s, y, dy| sys.derivative(t + STAGE_OFFSETS[s] * h, y, dy));
        for i in 0..y.len() {
            out[i] = y[i] + h * (B1 * self.k1[i] + B2 * self.k2[i] + B3 * self.k3[i]);
        }
    }

    /// Like [`step`](Self::step), with the right-hand side given as a closure
    /// that receives the stage index (see [`STAGE_OFFSETS`]) instead of a time.
    #[inline]
    pub fn step_with<F: FnMut(usize, &[f64], &mut [f64])>(&mut self, h: f64, y: &mut [f64], f: F) {
        self.stages(h, y, f);
        for i in 0..y.len() {
            y[i] += h * (B1 * self.k1[i] + B2 * self.k2[i] + B3 * self.k3[i]);
        }
    }

    #[inline]
    fn stages<F: FnMut(usize, &[f64], &mut [f64])>(&mut self, h: f64, y: &[f64], mut f: F) {
        f(0, y, &mut self.k1);
        for i in 0..y.len() {
            self.stage[i] = y[i] + 0.5 * h * self.k1[i];
        }
        f(1, &self.stage, &mut self.k2);
        for i in 0..y.len() {
            self.stage[i] = y[i] + 0.75 * h * self.k2[i];
        }
        f(2, &self.stage, &mut self.k3);
    }
}
