//! Quartic `P(eta) = A eta^4 + B eta^3 + C eta^2 + E` relating the frequency
//! ratio to the contact phase, and its double-root (resonance) condition.

use super::sim::clearance_ratio_expanded;
use super::DimensionlessDesign;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
}

impl Quartic {
    #[inline]
    pub fn eval(&self, eta: f64) -> f64 {
        let eta2 = eta * eta;
        ((self.a * eta + self.b) * eta + self.c) * eta2 + self.e
    }

    #[inline]
    pub fn derivative(&self, eta: f64) -> f64 {
        ((4.0 * self.a * eta + 3.0 * self.b) * eta + 2.0 * self.c) * eta
    }

    /// Scale used for the root acceptance test.
    pub fn scale(&self) -> f64 {
        self.a.abs().max(self.e.abs())
    }

    /// Positive stationary point `eta_1` of `P`, if any.
    ///
    /// Equivalent to `(3B/8A)(-1 + sqrt(Q))` with `Q = 1 - 32AC/(9B^2)`, written
    /// so that it stays accurate as `B -> 0`.
    pub fn double_root_frequency(&self) -> Option<f64> {
        let disc = 9.0 * self.b * self.b - 32.0 * self.a * self.c;
        if self.c >= 0.0 || disc < 0.0 {
            return None;
        }
        Some(-4.0 * self.c / (3.0 * self.b + disc.sqrt()))
    }

    /// The constant `E` for which `eta_1` is a double root, i.e. `-G` in
    /// `E = -(27 B^4 / 512 A^3) (Q^{3/2} - 1 - (3/2) q - (3/8) q^2)`.
    pub fn double_root_constant(&self) -> f64 {
        -resonance_bracket(self.a, self.b, self.c)
    }

    /// `sqrt(G + 1)`, the common denominator of the closed-form resonance.
    pub fn resonance_denominator(&self) -> f64 {
        (resonance_bracket(self.a, self.b, self.c) + 1.0).sqrt()
    }
}

/// `G = (27 B^4 / 512 A^3) (Q^{3/2} - 1 - (3/2) q - (3/8) q^2)` with
/// `q = Q - 1 = 32 A |C| / (9 B^2)`, for `C < 0`.
///
/// The printed form is `0 * inf` at `B = 0`. With `t = sqrt(Q) - 1` the
/// bracket collapses exactly to `-t^3 (1/2 + 3t/8)`; scaling by
/// `w = q^{-1/2} = 3B / sqrt(32 A |C|)` and `u = t / sqrt(q) = 1/(w + sqrt(w^2 + 1))`
/// gives `G = (2 C^2 / 3A) h` with `h = -u^3 (w/2 + 3u/8)`, free of
/// cancellation for every `B >= 0` and equal to `-C^2/(4A)` at `B = 0`.
pub fn resonance_bracket(a: f64, b: f64, c: f64) -> f64 {
    if c >= 0.0 {
        return f64::NAN;
    }
    let w = 3.0 * b / (32.0 * a * c.abs()).sqrt();
    let u = 1.0 / (w + w.hypot(1.0));
    let h = -u * u * u * (0.5 * w + 0.375 * u);
    2.0 * c * c / (3.0 * a) * h
}

/// Coefficients at contact phase `psi`.
pub fn quartic_coefficients(psi: f64, design: &DimensionlessDesign) -> Quartic {
    let d = design.damping_ratio;
    let kappa = 2.0 * design.mu_gamma / (1.0 - design.modal_cor);
    let (s, c) = psi.sin_cos();
    let re = 1.0 + kappa * s * c;
    let im = kappa * s * s;
    let cr = clearance_ratio_expanded(psi, design.modal_cor);
    let forcing = design.forcing_ratio * cr;
    Quartic {
        a: re * re + im * im,
        b: 4.0 * d * im,
        c: -2.0 * re + 4.0 * d * d,
        e: 1.0 - forcing * forcing,
    }
}

/// Up to two positive real roots, ascending.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PositiveRoots {
    values: [f64; 2],
    count: usize,
}

impl PositiveRoots {
    fn push(&mut self, eta: f64) {
        if self.count < 2 {
            self.values[self.count] = eta;
            self.count += 1;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.count]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn first(&self) -> Option<f64> {
        self.as_slice().first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.as_slice().last().copied()
    }
}

/// Positive real roots of `P` with `A > 0`.
///
/// The positive axis is split at the stationary points of `P`; `P` is
/// monotone on each piece, so every sign change brackets exactly one root,
/// which is then found by bisection. A stationary point where `|P|` is at
/// rounding level counts as a double root and is returned once.
pub fn positive_real_roots(p: &Quartic) -> PositiveRoots {
    let mut out = PositiveRoots::default();
    let tiny = 8.0 * f64::EPSILON * (p.a.abs() + p.b.abs() + p.c.abs() + p.e.abs());

    // stationary points: 4A eta^2 + 3B eta + 2C = 0
    let mut knots = [0.0f64; 4];
    let mut n = 1;
    let (qa, qb, qc) = (4.0 * p.a, 3.0 * p.b, 2.0 * p.c);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let t = -0.5 * (qb + qb.signum() * sq);
        let mut crit = [t / qa, if t != 0.0 { qc / t } else { -qb / qa }];
        crit.sort_by(|x, y| x.total_cmp(y));
        for x in crit {
            if x > knots[n - 1] && x.is_finite() {
                knots[n] = x;
                n += 1;
            }
        }
    }
    let upper = 1.0 + (p.b.abs().max(p.c.abs()).max(p.e.abs()) / p.a).max(1.0);
    knots[n] = upper.max(knots[n - 1] * 2.0);
    n += 1;

    let touches = |i: usize| i > 0 && i + 1 < n && p.eval(knots[i]).abs() <= tiny;
    for w in 1..n {
        let (lo, hi) = (knots[w - 1], knots[w]);
        let (flo, fhi) = (p.eval(lo), p.eval(hi));
        if !touches(w - 1) && !touches(w) && flo * fhi < 0.0 {
            out.push(bisect(p, lo, hi, flo));
        }
        if touches(w) {
            out.push(hi);
        }
    }
    out
}

fn bisect(p: &Quartic, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (p.eval(mid) < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint with the smaller residual
    if p.eval(lo).abs() <= p.eval(hi).abs() {
        lo
    } else {
        hi
    }
}
