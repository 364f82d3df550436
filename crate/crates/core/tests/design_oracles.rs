use nalgebra::Matrix4;
use proptest::prelude::*;
use vines_core::design::{
    design_point, frequency_response, optimum_design, positive_real_roots, pre_impact_velocity, psi_bounds,
    quartic_coefficients, DimensionlessDesign, Quartic,
};

fn companion_positive_roots(p: &Quartic) -> Vec<f64> {
    let m = Matrix4::new(
        -p.b / p.a, -p.c / p.a, 0.0, -p.e / p.a,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
    );
    let mut roots: Vec<f64> = m
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.re > 0.0 && z.im.abs() < 1e-9)
        .map(|z| z.re)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    // E between the double-root value and 1 keeps the roots simple and well separated
    #[test]
    fn roots_match_companion_matrix(
        r in 0.0..0.95f64,
        d in 0.001..0.1f64,
        mg in 1e-4..0.2f64,
        t in 0.0..1.0f64,
        s in 0.05..0.95f64,
    ) {
        let (lo, hi) = psi_bounds(r);
        let design = DimensionlessDesign::new(d, mg, r).unwrap();
        let p = quartic_coefficients(lo + t * (hi - lo), &design);
        let e_double = p.double_root_constant();
        let p = Quartic { e: e_double + s * (1.0 - e_double), ..p };
        let ours = positive_real_roots(&p);
        let oracle = companion_positive_roots(&p);
        prop_assert_eq!(ours.len(), oracle.len());
        for (a, b) in ours.as_slice().iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-8 * b.max(1.0), "{} vs {}", a, b);
        }
    }

    // closed-form resonance equals the peak of the frequency response traced point by point
    #[test]
    fn closed_form_matches_traced_peak(
        r in 0.3..0.8f64,
        d in 0.01..0.05f64,
        mg in 0.01..0.1f64,
        frac in 0.3..0.9f64,
    ) {
        let design = DimensionlessDesign::new(d, mg, r).unwrap();
        let gn = frac * optimum_design(&design).point.normalized_clearance;
        let response = frequency_response(&design, gn);
        let traced = response.peak_amplitude_ratio().unwrap();
        let curve_amp = vines_core::design::efficacy_curve(&design, &vines_core::design::PsiGrid::log_dense(r, 2000))
            .amplitude_at(gn)
            .unwrap();
        prop_assert!((traced / curve_amp - 1.0).abs() < 2e-3, "traced {} closed form {}", traced, curve_amp);
    }
}

#[test]
fn resonance_velocity_grows_with_restitution() {
    let (w, amp, psi) = (1000.0, 1e-3, 1.0);
    let v0 = pre_impact_velocity(w, amp, 0.0, psi).unwrap();
    let v5 = pre_impact_velocity(w, amp, 0.5, psi).unwrap();
    assert!((v5 / v0 - 2.0).abs() < 1e-12);
    assert!(pre_impact_velocity(w, amp, 0.5, 0.0).is_err());
}

#[test]
fn optimum_is_the_largest_clearance() {
    let design = DimensionlessDesign::new(0.0204, 0.04, 0.6).unwrap();
    let opt = optimum_design(&design).point;
    let (lo, hi) = psi_bounds(0.6);
    for i in 1..500 {
        let psi = lo + (hi - lo) * i as f64 / 500.0;
        assert!(design_point(&design, psi).normalized_clearance <= opt.normalized_clearance * (1.0 + 1e-12));
    }
}
