//! Closed-form resonant amplitude vs. clearance and the optimum design point.

use super::quartic::quartic_coefficients;
use super::sim::clearance_ratio_expanded;
use super::DimensionlessDesign;
use rayon::prelude::*;
use std::io::{self, Write};

/// Default number of contact-phase samples.
pub const DEFAULT_GRID_POINTS: usize = 1000;

/// Contact-phase samples inside `(psi_min, psi_max]`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiGrid(Vec<f64>);

impl PsiGrid {
    /// `n` points crowded towards `psi_min`, where the amplitude diverges.
    /// `psi_min` itself is excluded, `psi_max` is the last point.
    pub fn log_dense(modal_cor: f64, n: usize) -> Self {
        let (lo, hi) = super::sim::psi_bounds(modal_cor);
        let k: f64 = 5.0;
        let denom = k.exp_m1();
        Self(
            (1..=n)
                .map(|i| {
                    let u = i as f64 / n as f64;
                    if i == n {
                        hi
                    } else {
                        lo + (hi - lo) * (k * u).exp_m1() / denom
                    }
                })
                .collect(),
        )
    }

    /// `n` evenly spaced points in `(psi_min, psi_max]`.
    pub fn uniform(modal_cor: f64, n: usize) -> Self {
        let (lo, hi) = super::sim::psi_bounds(modal_cor);
        Self((1..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
    }

    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.total_cmp(b));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Resonance at one contact phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    pub psi: f64,
    /// `g / (phi_c a_no)`.
    pub normalized_clearance: f64,
    /// `a_res / a_no`.
    pub amplitude_ratio: f64,
    /// `Omega / omega` at resonance.
    pub frequency_ratio: f64,
}

/// Resonant amplitude and clearance for which `psi` is the resonant contact phase.
pub fn design_point(design: &DimensionlessDesign, psi: f64) -> DesignPoint {
    let p = quartic_coefficients(psi, design);
    let den = p.resonance_denominator();
    let two_d = 2.0 * design.damping_ratio;
    DesignPoint {
        psi,
        normalized_clearance: two_d * clearance_ratio_expanded(psi, design.modal_cor) / den,
        amplitude_ratio: two_d / den,
        frequency_ratio: p.double_root_frequency().unwrap_or(f64::NAN),
    }
}

/// Turning point of the efficacy curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub point: DesignPoint,
    /// Grid index of the best sample before refinement.
    pub grid_index: usize,
    /// No interior maximum of the clearance was found; `point` is a grid end.
    pub at_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignCurve {
    pub points: Vec<DesignPoint>,
    /// Points `0..=turning_index` form the maximum-amplitude branch.
    pub turning_index: usize,
    pub optimum: Optimum,
}

impl DesignCurve {
    pub fn maximum_branch(&self) -> &[DesignPoint] {
        &self.points[..=self.turning_index]
    }

    pub fn minimum_branch(&self) -> &[DesignPoint] {
        &self.points[self.turning_index..]
    }

    /// Resonant amplitude ratio on the maximum branch at a given normalized
    /// clearance, by linear interpolation. `None` beyond the turning point.
    pub fn amplitude_at(&self, normalized_clearance: f64) -> Option<f64> {
        let branch = self.maximum_branch();
        if normalized_clearance > self.optimum.point.normalized_clearance {
            return None;
        }
        let first = branch.first()?;
        if normalized_clearance <= first.normalized_clearance {
            return Some(first.amplitude_ratio);
        }
        for w in branch.windows(2) {
            let (a, b) = (w[0], w[1]);
            if normalized_clearance <= b.normalized_clearance {
                let t = (normalized_clearance - a.normalized_clearance) / (b.normalized_clearance - a.normalized_clearance);
                return Some(a.amplitude_ratio + t * (b.amplitude_ratio - a.amplitude_ratio));
            }
        }
        Some(self.optimum.point.amplitude_ratio)
    }

    /// CSV with columns `psi, eta, norm_clearance, norm_amplitude, branch_id, is_isola`.
    /// Branch 0 is the maximum-amplitude branch, 1 the minimum-amplitude branch.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "psi,eta,norm_clearance,norm_amplitude,branch_id,is_isola")?;
        for (i, p) in self.points.iter().enumerate() {
            let branch = usize::from(i > self.turning_index);
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e},{:.12e},{},false",
                p.psi, p.frequency_ratio, p.normalized_clearance, p.amplitude_ratio, branch
            )?;
        }
        Ok(())
    }
}

/// Closed-form efficacy curve on `grid`. The forcing ratio of `design` is ignored.
pub fn efficacy_curve(design: &DimensionlessDesign, grid: &PsiGrid) -> DesignCurve {
    let design = design.with_forcing_ratio(0.0);
    let points: Vec<DesignPoint> = grid.values().par_iter().map(|&psi| design_point(&design, psi)).collect();
    let optimum = refine_optimum(&design, &points);
    DesignCurve { points, turning_index: optimum.grid_index, optimum }
}

/// Optimum design: largest clearance on the maximum-amplitude branch, found on
/// the default grid and refined by golden-section search.
pub fn optimum_design(design: &DimensionlessDesign) -> Optimum {
    let grid = PsiGrid::log_dense(design.modal_cor, DEFAULT_GRID_POINTS);
    efficacy_curve(design, &grid).optimum
}

fn refine_optimum(design: &DimensionlessDesign, points: &[DesignPoint]) -> Optimum {
    let idx = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.normalized_clearance.is_finite())
        .max_by(|a, b| a.1.normalized_clearance.total_cmp(&b.1.normalized_clearance))
        .map_or(0, |(i, _)| i);
    if idx == 0 || idx + 1 >= points.len() {
        return Optimum { point: points[idx], grid_index: idx, at_boundary: true };
    }
    let psi = golden_max(
        |psi| design_point(design, psi).normalized_clearance,
        points[idx - 1].psi,
        points[idx + 1].psi,
        1e-10,
    );
    let refined = design_point(design, psi);
    let point = if refined.normalized_clearance >= points[idx].normalized_clearance {
        refined
    } else {
        points[idx]
    };
    Optimum { point, grid_index: idx, at_boundary: false }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
