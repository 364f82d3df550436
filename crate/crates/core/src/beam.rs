//! Modally truncated Euler-Bernoulli cantilever.
//!
//! Mode shapes are evaluated in closed form and mass-normalized, so that the
//! host equations of motion decouple into
//! `q_k'' + 2 D_k w_k q_k' + w_k^2 q_k = phi_k(x_c) (-f_c) + phi_k(x_f) F cos(W t)`.
//! The exponential form used below keeps every term bounded for large
//! wavenumbers where `cosh` and `sinh` would overflow or cancel.

use crate::error::{invalid, Error, Result};
use crate::quadrature::GaussLegendre;
use std::f64::consts::PI;

/// Geometry, material and fatigue data of a uniform rectangular cantilever.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    /// Length in m.
    pub length: f64,
    /// Height (bending direction) in m.
    pub height: f64,
    /// Width in m.
    pub width: f64,
    /// Density in kg/m^3.
    pub density: f64,
    /// Young's modulus in Pa.
    pub youngs_modulus: f64,
    pub poisson: f64,
    /// Fatigue strength against bending in Pa.
    pub fatigue_bending_strength: f64,
}

impl BeamSpec {
    /// Nominal steel benchmark beam.
    pub fn table1() -> Self {
        Self {
            length: 0.21,
            height: 0.01,
            width: 0.015,
            density: 7800.0,
            youngs_modulus: 210e9,
            poisson: 0.3,
            fatigue_bending_strength: 255e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("length", self.length),
            ("height", self.height),
            ("width", self.width),
            ("density", self.density),
            ("youngs_modulus", self.youngs_modulus),
            ("fatigue_bending_strength", self.fatigue_bending_strength),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.poisson > 0.0 && self.poisson < 0.5) {
            return Err(invalid("poisson", format!("must lie in (0, 0.5), got {}", self.poisson)));
        }
        Ok(())
    }

    pub fn cross_section_area(&self) -> f64 {
        self.height * self.width
    }

    pub fn second_moment_of_area(&self) -> f64 {
        self.width * self.height.powi(3) / 12.0
    }

    /// Mass per unit length, rho_s * h * b.
    pub fn mass_per_length(&self) -> f64 {
        self.density * self.cross_section_area()
    }

    /// Total beam mass m_s = rho_s * h * b * l.
    pub fn mass(&self) -> f64 {
        self.mass_per_length() * self.length
    }
}

/// Where the harmonic force acts, how strong it is, and where the absorber sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingLayout {
    /// m, measured from the clamp.
    pub force_location: f64,
    /// N.
    pub force_amplitude: f64,
    /// m, measured from the clamp.
    pub contact_location: f64,
}

impl ForcingLayout {
    /// Force at `fraction * l`, contact at the free end.
    pub fn benchmark(beam: &BeamSpec, fraction: f64, force_amplitude: f64) -> Self {
        Self {
            force_location: fraction * beam.length,
            force_amplitude,
            contact_location: beam.length,
        }
    }
}

/// First `n` roots of `cos(x) cosh(x) = -1`, ascending.
///
/// The roots are found on the equivalent scaled equation
/// `cos(x) + 1/cosh(x) = 0`, which has one sign change per interval
/// `((k-1) pi, k pi)` and stays well conditioned for large `k`.
pub fn solve_mode_wavenumbers(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("mode_count", "at least one mode is required"));
    }
    let f = |x: f64| x.cos() + 1.0 / x.cosh();
    (1..=n)
        .map(|k| {
            let mut lo = (k - 1) as f64 * PI;
            let mut hi = k as f64 * PI;
            let (mut flo, fhi) = (f(lo), f(hi));
            if flo * fhi > 0.0 {
                return Err(Error::RootBracketing { mode: k });
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    return Ok(mid);
                }
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect()
}

/// One clamped-free bending mode, `phi(x) = scale * Phi(beta x)`.
#[derive(Debug, Clone, Copy)]
struct Mode {
    /// Wavenumber beta in 1/m.
    beta: f64,
    /// Coefficient of exp(beta x - beta l).
    growing: f64,
    /// Coefficient of exp(-beta x).
    decaying: f64,
    sigma: f64,
    rl: f64,
    /// Mass-normalization factor including the sign convention.
    scale: f64,
}

impl Mode {
    fn new(rl: f64, length: f64) -> Self {
        let e1 = (-rl).exp();
        let den = 1.0 - e1 * e1 + 2.0 * e1 * rl.sin();
        let sigma = (1.0 + e1 * e1 + 2.0 * e1 * rl.cos()) / den;
        Self {
            beta: rl / length,
            growing: (rl.sin() - rl.cos() - e1) / den,
            decaying: 0.5 * (1.0 + sigma),
            sigma,
            rl,
            scale: 1.0,
        }
    }

    /// d^order Phi / dz^order at z = beta x, without the beta^order factor.
    fn unscaled(&self, x: f64, order: u8) -> f64 {
        let z = self.beta * x;
        let g = self.growing * (z - self.rl).exp();
        let d = self.decaying * (-z).exp();
        let (s, c) = z.sin_cos();
        match order {
            0 => g + d - c + self.sigma * s,
            1 => g - d + s + self.sigma * c,
            2 => g + d + c - self.sigma * s,
            _ => g - d - s - self.sigma * c,
        }
    }

    fn eval(&self, x: f64, order: u8) -> f64 {
        self.scale * self.beta.powi(order as i32) * self.unscaled(x, order)
    }
}

/// Mass-normalized modal model of the cantilever.
#[derive(Debug, Clone)]
pub struct ModalModel {
    beam: BeamSpec,
    modes: Vec<Mode>,
    frequencies: Vec<f64>,
    damping: Vec<f64>,
}

/// Number of Gauss panels and nodes per panel used for mass normalization.
const NORM_PANELS: usize = 200;
const NORM_NODES: usize = 10;

/// Builds the `n`-mode model with equal damping ratio in every mode.
pub fn assemble_modal_model(beam: &BeamSpec, n: usize, damping: f64) -> Result<ModalModel> {
    beam.validate()?;
    if !(damping > 0.0 && damping < std::f64::consts::FRAC_1_SQRT_2) {
        return Err(invalid("damping", format!("must lie in (0, 1/sqrt 2), got {damping}")));
    }
    let roots = solve_mode_wavenumbers(n)?;
    let stiffness = (beam.youngs_modulus * beam.second_moment_of_area() / beam.mass_per_length()).sqrt();
    let l = beam.length;
    let rule = GaussLegendre::new(NORM_NODES);
    let mut modes = Vec::with_capacity(n);
    let mut frequencies = Vec::with_capacity(n);
    for &rl in &roots {
        let mut mode = Mode::new(rl, l);
        let integral = rule.integrate_composite(0.0, l, NORM_PANELS, |x| mode.unscaled(x, 0).powi(2));
        let tip_sign = mode.unscaled(l, 0).signum();
        mode.scale = tip_sign / (beam.mass_per_length() * integral).sqrt();
        modes.push(mode);
        frequencies.push(rl * rl * stiffness / (l * l));
    }
    Ok(ModalModel {
        beam: *beam,
        modes,
        frequencies,
        damping: vec![damping; n],
    })
}

impl ModalModel {
    pub fn beam(&self) -> &BeamSpec {
        &self.beam
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Natural angular frequencies in rad/s, ascending.
    pub fn natural_frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn damping_ratios(&self) -> &[f64] {
        &self.damping
    }

    /// Dimensionless wavenumbers beta_k l.
    pub fn wavenumbers(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.rl).collect()
    }

    /// Mass-normalized deflection of mode `k` (zero-based) at `x`, in 1/sqrt(kg).
    pub fn shape_at(&self, x: f64, k: usize) -> f64 {
        self.modes[k].eval(x, 0)
    }

    /// Slope of mode `k` at `x`.
    pub fn slope_at(&self, x: f64, k: usize) -> f64 {
        self.modes[k].eval(x, 1)
    }

    /// Curvature of mode `k` at `x`, in 1/(m sqrt(kg)).
    pub fn curvature_at(&self, x: f64, k: usize) -> f64 {
        self.modes[k].eval(x, 2)
    }

    /// All mode shapes evaluated at one point.
    pub fn shapes_at(&self, x: f64) -> Vec<f64> {
        (0..self.mode_count()).map(|k| self.shape_at(x, k)).collect()
    }

    pub fn beam_mass(&self) -> f64 {
        self.beam.mass()
    }

    /// Resonant modal amplitude of mode 1 without absorber, phi_1(x_f) F / (2 D w^2).
    pub fn resonant_amplitude_without_absorber(&self, layout: &ForcingLayout) -> f64 {
        let w = self.frequencies[0];
        self.shape_at(layout.force_location, 0) * layout.force_amplitude / (2.0 * self.damping[0] * w * w)
    }

    /// Copy of the model with a different (uniform) damping ratio.
    pub fn with_damping(&self, damping: f64) -> Result<Self> {
        if !(damping >= 0.0 && damping < std::f64::consts::FRAC_1_SQRT_2) {
            return Err(invalid("damping", format!("must lie in [0, 1/sqrt 2), got {damping}")));
        }
        let mut out = self.clone();
        out.damping.iter_mut().for_each(|d| *d = damping);
        Ok(out)
    }
}

/// Grid used to locate the peak bending stress along the beam.
pub const STRESS_GRID_POINTS: usize = 2001;

/// Force amplitude for which the resonant response of mode 1 without absorber
/// just reaches the fatigue bending strength.
pub fn excitation_amplitude_from_fatigue(model: &ModalModel, layout: &ForcingLayout) -> Result<f64> {
    let beam = model.beam();
    let l = beam.length;
    if !(layout.force_location > 0.0 && layout.force_location <= l) {
        return Err(invalid("force_location", format!("must lie in (0, l], got {}", layout.force_location)));
    }
    let phi_f = model.shape_at(layout.force_location, 0);
    if phi_f.abs() < 1e-9 * model.shape_at(l, 0).abs() {
        return Err(Error::DegenerateForcing { value: phi_f });
    }
    let peak_curvature = (0..STRESS_GRID_POINTS)
        .map(|i| {
            let x = l * i as f64 / (STRESS_GRID_POINTS - 1) as f64;
            model.curvature_at(x, 0).abs()
        })
        .fold(0.0, f64::max);
    let allowed_amplitude =
        beam.fatigue_bending_strength / (beam.youngs_modulus * 0.5 * beam.height * peak_curvature);
    let w = model.natural_frequencies()[0];
    let d = model.damping_ratios()[0];
    Ok((allowed_amplitude * 2.0 * d * w * w / phi_f).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the unscaled characteristic equation.
    fn bisect_oracle(lo: f64, hi: f64) -> f64 {
        let f = |x: f64| x.cos() * x.cosh() + 1.0;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (f(a) > 0.0) {
                a = m
            } else {
                b = m
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn first_roots_match_bisection_oracle() {
        let roots = solve_mode_wavenumbers(2).unwrap();
        let r1 = bisect_oracle(1.0, 3.0);
        let r2 = bisect_oracle(4.0, 5.0);
        assert!((roots[0] - r1).abs() < 1e-12);
        assert!((roots[1] - r2).abs() < 1e-12);
        assert!((roots[0] - 1.87510).abs() < 1e-5);
        assert!((roots[1] - 4.69409).abs() < 1e-5);
        for r in &roots {
            assert!((r.cos() * r.cosh() + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn high_roots_approach_asymptote() {
        let roots = solve_mode_wavenumbers(50).unwrap();
        for (i, r) in roots.iter().enumerate().skip(5) {
            let k = (i + 1) as f64;
            assert!((r - (2.0 * k - 1.0) * PI / 2.0).abs() < 1e-6, "k = {k}");
        }
        assert!(roots.windows(2).all(|w| w[1] > w[0]));
        for r in &roots {
            assert!((r.cos() + 1.0 / r.cosh()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_modes_is_rejected() {
        assert!(solve_mode_wavenumbers(0).is_err());
    }

    #[test]
    fn table1_fundamental_frequency_and_mass() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 12, 0.02).unwrap();
        let w1 = model.natural_frequencies()[0];
        assert!((w1 - 1.194e3).abs() < 1.0, "w1 = {w1}");
        assert!((w1 / (2.0 * PI) - 190.0).abs() < 0.5);
        assert!((model.beam_mass() - 0.2457).abs() < 1e-10);
        assert_eq!(model.natural_frequencies().len(), 12);
        assert!(model.natural_frequencies().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mass_normalization_and_orthogonality() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 12, 0.02).unwrap();
        // independent check on a plain midpoint grid
        let n = 20_000;
        let dx = beam.length / n as f64;
        for j in 0..12 {
            for k in j..12 {
                let s: f64 = (0..n)
                    .map(|i| {
                        let x = (i as f64 + 0.5) * dx;
                        model.shape_at(x, j) * model.shape_at(x, k)
                    })
                    .sum::<f64>()
                    * dx
                    * beam.mass_per_length();
                if j == k {
                    assert!((s - 1.0).abs() < 1e-6, "norm of mode {j}: {s}");
                } else {
                    assert!(s.abs() < 1e-6, "cross term {j},{k}: {s}");
                }
            }
        }
    }

    #[test]
    fn clamped_end_conditions_and_tip_value() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 12, 0.02).unwrap();
        let tip = 2.0 / beam.mass().sqrt();
        for k in 0..12 {
            assert!(model.shape_at(0.0, k).abs() < 1e-12);
            assert!(model.slope_at(0.0, k).abs() < 1e-9 * model.slope_at(beam.length, k).abs().max(1.0));
            // classical tip value of the unit-mean-square cantilever mode is 2
            assert!((model.shape_at(beam.length, k) - tip).abs() < 1e-8);
            // free end: zero moment
            let scale = model.curvature_at(0.0, k).abs();
            assert!(model.curvature_at(beam.length, k).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn frequency_ratio_is_geometry_independent() {
        let mut beam = BeamSpec::table1();
        for scale in [0.5, 1.0, 3.0] {
            beam.length = 0.21 * scale;
            beam.height = 0.01 / scale;
            let model = assemble_modal_model(&beam, 2, 0.01).unwrap();
            let w = model.natural_frequencies();
            assert!((w[1] / w[0] / 6.267 - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn invalid_beams_are_rejected() {
        let mut beam = BeamSpec::table1();
        beam.poisson = 0.6;
        assert!(assemble_modal_model(&beam, 3, 0.01).is_err());
        let beam = BeamSpec::table1();
        assert!(assemble_modal_model(&beam, 3, 0.8).is_err());
        assert!(assemble_modal_model(&beam, 0, 0.01).is_err());
    }

    #[test]
    fn fatigue_forcing_scales_linearly() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 12, 0.0204).unwrap();
        let layout = ForcingLayout::benchmark(&beam, 1.0 / 3.0, 0.0);
        let f = excitation_amplitude_from_fatigue(&model, &layout).unwrap();

        let mut strong = beam;
        strong.fatigue_bending_strength *= 2.0;
        let model2 = assemble_modal_model(&strong, 12, 0.0204).unwrap();
        let f2 = excitation_amplitude_from_fatigue(&model2, &layout).unwrap();
        assert!((f2 / f - 2.0).abs() < 1e-12);

        let model3 = model.with_damping(2.0 * 0.0204).unwrap();
        let f3 = excitation_amplitude_from_fatigue(&model3, &layout).unwrap();
        assert!((f3 / f - 2.0).abs() < 1e-12);

        // root stress at the resonant amplitude equals the fatigue strength
        let layout = ForcingLayout { force_amplitude: f, ..layout };
        let a = model.resonant_amplitude_without_absorber(&layout);
        let stress = beam.youngs_modulus * 0.5 * beam.height * model.curvature_at(0.0, 0).abs() * a;
        assert!((stress / beam.fatigue_bending_strength - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fatigue_forcing_golden_value() {
        // Hand evaluation: phi_1''(0) = 2 beta_1^2 / sqrt(m_s), peak stress at the clamp.
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 12, 0.0204).unwrap();
        let layout = ForcingLayout::benchmark(&beam, 1.0 / 3.0, 0.0);
        let f = excitation_amplitude_from_fatigue(&model, &layout).unwrap();
        let b1 = 1.875_104_068_711_961 / beam.length;
        let curv = 2.0 * b1 * b1 / beam.mass().sqrt();
        let a = 255e6 / (210e9 * 0.005 * curv);
        let w1 = model.natural_frequencies()[0];
        let expected = a * 2.0 * 0.0204 * w1 * w1 / model.shape_at(0.07, 0);
        assert!((f / expected - 1.0).abs() < 1e-9, "F = {f}, expected {expected}");
        assert!((f - 65.7686).abs() < 1e-3, "F = {f}");
    }

    #[test]
    fn forcing_at_node_is_degenerate() {
        let beam = BeamSpec::table1();
        let model = assemble_modal_model(&beam, 2, 0.02).unwrap();
        let layout = ForcingLayout { force_location: 1e-12, force_amplitude: 0.0, contact_location: beam.length };
        assert!(matches!(
            excitation_amplitude_from_fatigue(&model, &layout),
            Err(Error::DegenerateForcing { .. })
        ));
    }
}
