//! Frequency response of the host with absorber, traced along the contact phase.
//!
//! For each contact phase the quartic gives zero, one or two frequency ratios.
//! Where the minimum of `P` over positive `eta` touches zero, the two roots
//! merge; these points close a branch. A branch closed at both ends is an
//! isolated branch (isola).

use super::efficacy::{PsiGrid, DEFAULT_GRID_POINTS};
use super::quartic::{positive_real_roots, quartic_coefficients, Quartic};
use super::sim::{absorber_amplitude_ratio, clearance_ratio_expanded};
use super::DimensionlessDesign;
use num_complex::Complex64;
use std::io::{self, Write};

/// Minimum number of samples on a branch found between two grid points.
const MIN_BRANCH_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiPoint {
    pub contact_phase: f64,
    /// `phi_c a / g`.
    pub normalized_amplitude: f64,
    /// `q_a / (phi_c a)`.
    pub absorber_amplitude_ratio: f64,
    /// `Omega / omega`.
    pub frequency_ratio: f64,
    /// Phase of the excitation relative to the host response.
    pub excitation_phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseBranch {
    pub id: usize,
    /// Ordered along the curve: lower-frequency side by increasing phase,
    /// then the upper-frequency side by decreasing phase.
    pub points: Vec<PsiPoint>,
    /// Branch closes at its low-phase (high-amplitude) end.
    pub closed_low: bool,
    /// Branch closes at its high-phase (low-amplitude) end.
    pub closed_high: bool,
}

impl ResponseBranch {
    pub fn is_isola(&self) -> bool {
        self.closed_low && self.closed_high
    }

    /// Point of largest amplitude.
    pub fn peak(&self) -> Option<PsiPoint> {
        self.points
            .iter()
            .copied()
            .max_by(|a, b| a.normalized_amplitude.total_cmp(&b.normalized_amplitude))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub design: DimensionlessDesign,
    /// `g / (phi_c a_no)`.
    pub normalized_clearance: f64,
    pub branches: Vec<ResponseBranch>,
}

impl FrequencyResponse {
    pub fn has_isola(&self) -> bool {
        self.branches.iter().any(ResponseBranch::is_isola)
    }

    /// `a / a_no` of a point on this response.
    pub fn amplitude_ratio(&self, point: &PsiPoint) -> f64 {
        point.normalized_amplitude * self.normalized_clearance
    }

    /// Largest `a / a_no` over all branches.
    pub fn peak_amplitude_ratio(&self) -> Option<f64> {
        self.branches
            .iter()
            .filter_map(ResponseBranch::peak)
            .map(|p| self.amplitude_ratio(&p))
            .max_by(f64::total_cmp)
    }

    /// CSV with columns `psi, eta, norm_clearance, norm_amplitude, branch_id, is_isola`,
    /// where `norm_amplitude` is `a / a_no`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "psi,eta,norm_clearance,norm_amplitude,branch_id,is_isola")?;
        for b in &self.branches {
            for p in &b.points {
                writeln!(
                    out,
                    "{:.12e},{:.12e},{:.12e},{:.12e},{},{}",
                    p.contact_phase,
                    p.frequency_ratio,
                    self.normalized_clearance,
                    self.amplitude_ratio(p),
                    b.id,
                    b.is_isola()
                )?;
            }
        }
        Ok(())
    }
}

/// Complex residual of the frequency response equation at a point.
pub fn response_residual(design: &DimensionlessDesign, point: &PsiPoint) -> f64 {
    let lhs = response_lhs(design, point.contact_phase, point.frequency_ratio);
    let rhs = design.forcing_ratio
        * clearance_ratio_expanded(point.contact_phase, design.modal_cor)
        * Complex64::from_polar(1.0, -point.excitation_phase);
    (lhs - rhs).norm()
}

fn response_lhs(design: &DimensionlessDesign, psi: f64, eta: f64) -> Complex64 {
    let kappa = 2.0 * design.mu_gamma / (1.0 - design.modal_cor);
    let coupling = kappa * psi.sin() * Complex64::from_polar(1.0, -psi);
    1.0 - eta * eta * (1.0 + coupling) + Complex64::new(0.0, 2.0 * design.damping_ratio * eta)
}

fn make_point(design: &DimensionlessDesign, psi: f64, eta: f64) -> PsiPoint {
    PsiPoint {
        contact_phase: psi,
        normalized_amplitude: 1.0 / clearance_ratio_expanded(psi, design.modal_cor),
        absorber_amplitude_ratio: absorber_amplitude_ratio(psi, design.modal_cor),
        frequency_ratio: eta,
        excitation_phase: -response_lhs(design, psi, eta).arg(),
    }
}

/// Minimum of `P` over `eta > 0` and where it is attained.
fn quartic_minimum(p: &Quartic) -> (f64, f64) {
    match p.double_root_frequency() {
        Some(eta) => (p.eval(eta), eta),
        None => (p.e, 0.0),
    }
}

/// Frequency response at normalized clearance `g / (phi_c a_no)` on the default grid.
pub fn frequency_response(design: &DimensionlessDesign, normalized_clearance: f64) -> FrequencyResponse {
    let grid = PsiGrid::log_dense(design.modal_cor, DEFAULT_GRID_POINTS);
    frequency_response_on(design, normalized_clearance, &grid)
}

pub fn frequency_response_on(design: &DimensionlessDesign, normalized_clearance: f64, grid: &PsiGrid) -> FrequencyResponse {
    let design = design.with_normalized_clearance(normalized_clearance);
    let psi = grid.values();
    let gap = |x: f64| quartic_minimum(&quartic_coefficients(x, &design)).0;
    let m: Vec<f64> = psi.iter().map(|&x| gap(x)).collect();
    let n = psi.len();

    // intervals of contact phase with solutions: (lo, hi, closed_lo, closed_hi)
    let mut intervals: Vec<(f64, f64, bool, bool)> = Vec::new();
    let mut i = 0;
    while i < n {
        if m[i] <= 0.0 {
            let start = i;
            while i + 1 < n && m[i + 1] <= 0.0 {
                i += 1;
            }
            let (lo, closed_lo) = if start > 0 {
                (bisect_boundary(&gap, psi[start - 1], psi[start]), true)
            } else {
                (psi[0], false)
            };
            let (hi, closed_hi) = if i + 1 < n {
                (bisect_boundary(&gap, psi[i + 1], psi[i]), true)
            } else {
                (psi[n - 1], false)
            };
            intervals.push((lo, hi, closed_lo, closed_hi));
        } else if i > 0 && i + 1 < n && m[i] <= m[i - 1] && m[i] <= m[i + 1] {
            // a small isola may hide between grid points
            let (x, mx) = golden_min(&gap, psi[i - 1], psi[i + 1]);
            if mx <= 0.0 {
                let lo = bisect_boundary(&gap, psi[i - 1], x);
                let hi = bisect_boundary(&gap, psi[i + 1], x);
                intervals.push((lo, hi, true, true));
            }
        }
        i += 1;
    }
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));

    let branches = intervals
        .into_iter()
        .enumerate()
        .map(|(id, (lo, hi, closed_low, closed_high))| {
            let mut samples: Vec<f64> = psi.iter().copied().filter(|&x| x > lo && x < hi).collect();
            if samples.len() < MIN_BRANCH_SAMPLES {
                samples.extend((1..MIN_BRANCH_SAMPLES).map(|k| lo + (hi - lo) * k as f64 / MIN_BRANCH_SAMPLES as f64));
                samples.sort_by(f64::total_cmp);
                samples.dedup();
            }
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            let ends = |x: f64, out: &mut Vec<PsiPoint>| {
                let (_, eta) = quartic_minimum(&quartic_coefficients(x, &design));
                out.push(make_point(&design, x, eta));
            };
            if closed_low {
                ends(lo, &mut lower);
            }
            let interior = std::iter::once(lo).filter(|_| !closed_low).chain(samples).chain(std::iter::once(hi).filter(|_| !closed_high));
            for x in interior {
                let p = quartic_coefficients(x, &design);
                let (_, eta_c) = quartic_minimum(&p);
                for &eta in positive_real_roots(&p).as_slice() {
                    let point = make_point(&design, x, eta);
                    if eta <= eta_c {
                        lower.push(point);
                    } else {
                        upper.push(point);
                    }
                }
            }
            if closed_high {
                ends(hi, &mut lower);
            }
            upper.reverse();
            lower.extend(upper);
            ResponseBranch { id, points: lower, closed_low, closed_high }
        })
        .filter(|b| !b.points.is_empty())
        .collect();

    FrequencyResponse { design, normalized_clearance, branches }
}

/// Boundary between `outside` (no solution) and `inside` (solutions).
fn bisect_boundary<F: Fn(f64) -> f64>(gap: &F, mut outside: f64, mut inside: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        if gap(mid) <= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-14 * b.abs() || fc.min(fd) <= 0.0 {
            break;
        }
        if fc < fd {
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
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::efficacy::optimum_design;

    fn fig6() -> DimensionlessDesign {
        DimensionlessDesign::new(0.05, 0.043, 0.71).unwrap()
    }

    #[test]
    fn isola_appears_at_larger_clearance() {
        let with = frequency_response(&fig6(), 2.6);
        assert!(with.has_isola());
        let without = frequency_response(&fig6(), 2.0);
        assert!(!without.has_isola());
        assert_eq!(without.branches.len(), 1);
        assert!(without.branches[0].closed_low);
    }

    #[test]
    fn points_satisfy_response_equation() {
        for gn in [0.5, 2.0, 2.6] {
            let resp = frequency_response(&fig6(), gn);
            for b in &resp.branches {
                for p in &b.points {
                    assert!(response_residual(&resp.design, p) < 1e-9, "gn {gn}, psi {}", p.contact_phase);
                    let cr = clearance_ratio_expanded(p.contact_phase, 0.71);
                    assert!((p.normalized_amplitude * cr - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn nothing_beyond_optimum() {
        let opt = optimum_design(&fig6()).point;
        let resp = frequency_response(&fig6(), opt.normalized_clearance * 1.01);
        assert!(resp.branches.is_empty(), "{:?}", resp.branches.len());
    }

    #[test]
    fn peak_agrees_with_closed_form_resonance() {
        let design = fig6();
        for gn in [0.5, 1.0, 2.0] {
            let resp = frequency_response(&design, gn);
            let curve = crate::design::efficacy_curve(&design, &PsiGrid::log_dense(0.71, 4000));
            let expected = curve.amplitude_at(gn).unwrap();
            let peak = resp.peak_amplitude_ratio().unwrap();
            assert!((peak / expected - 1.0).abs() < 1e-3, "gn {gn}: {peak} vs {expected}");
        }
    }

    #[test]
    fn tiny_isola_near_optimum() {
        let design = fig6();
        let opt = optimum_design(&design).point;
        let resp = frequency_response(&design, opt.normalized_clearance * (1.0 - 1e-13));
        assert!(resp.has_isola());
        let peak = resp.peak_amplitude_ratio().unwrap();
        assert!((peak / opt.amplitude_ratio - 1.0).abs() < 1e-6, "{peak} vs {}", opt.amplitude_ratio);
    }

    #[test]
    fn csv_rows() {
        let resp = frequency_response(&fig6(), 2.0);
        let mut buf = Vec::new();
        resp.write_csv(&mut buf).unwrap();
        let rows = String::from_utf8(buf).unwrap().lines().count();
        let points: usize = resp.branches.iter().map(|b| b.points.len()).sum();
        assert_eq!(rows, points + 1);
    }
}
