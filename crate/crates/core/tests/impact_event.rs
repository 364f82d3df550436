use vines_core::impact::{simulate_single_impact, simulate_single_impact_with, ImpactOptions};
use vines_core::reference::{detect_impacts, integrate, IntegrateOptions};
use vines_core::{extract_pulse_params, Host, PhysicalSetup, SetupSpec};

fn benchmark(lambda: f64, modes: usize) -> PhysicalSetup {
    PhysicalSetup::new(&SetupSpec { modes, ..SetupSpec::benchmark(lambda, 0.0204) }).unwrap()
}

fn impulse_balance(host: Host<'_>, setup: &PhysicalSetup, v_c: f64) -> f64 {
    let opts = ImpactOptions { points_per_pulse: 5000.0, ..ImpactOptions::default() };
    let rec = simulate_single_impact_with(host, &setup.contact, v_c, &opts).unwrap();
    let impulse: f64 = rec.samples.windows(2).map(|w| 0.5 * (w[0].force + w[1].force).abs() * (w[1].t - w[0].t)).sum();
    let momentum = setup.contact.absorber_mass * (v_c - rec.post_impact_absorber_velocity);
    (impulse / momentum - 1.0).abs()
}

#[test]
fn impulse_equals_absorber_momentum_change() {
    let setup = benchmark(0.01, 4);
    assert!(impulse_balance(Host::Clamped, &setup, 1.0) < 1e-6);
    assert!(impulse_balance(Host::Flexible(&setup.model), &setup, 1.0) < 1e-6);
}

#[test]
fn modal_restitution_is_physical_for_benchmark_hosts() {
    for lambda in [0.005, 0.01, 0.02] {
        for modes in [12, 16] {
            let setup = benchmark(lambda, modes);
            for v in [0.5, 2.0, 5.0] {
                let rec = simulate_single_impact(Host::Flexible(&setup.model), &setup.contact, v).unwrap();
                let p = extract_pulse_params(&rec, &setup.contact).unwrap();
                assert!((0.0..1.0).contains(&p.modal_cor), "lambda {lambda}, {modes} modes, v {v}: r = {}", p.modal_cor);
            }
        }
    }
}

#[test]
fn rigid_host_restitution_is_velocity_invariant() {
    let setup = benchmark(0.01, 1);
    let r = |v: f64| {
        let rec = simulate_single_impact(Host::Clamped, &setup.contact, v).unwrap();
        extract_pulse_params(&rec, &setup.contact).unwrap()
    };
    let (slow, fast) = (r(0.1), r(10.0));
    assert!((slow.modal_cor - fast.modal_cor).abs() < 1e-3);
    assert!((slow.alpha_tilde - fast.alpha_tilde).abs() < 1e-3);
    assert!((slow.tc_tilde - fast.tc_tilde).abs() < 1e-3);
}

#[test]
fn flexible_host_lowers_the_peak_force() {
    let setup = benchmark(0.01, 12);
    let rigid = simulate_single_impact(Host::Clamped, &setup.contact, 2.0).unwrap();
    let flexible = simulate_single_impact(Host::Flexible(&setup.model), &setup.contact, 2.0).unwrap();
    assert!(flexible.peak_force < rigid.peak_force);
    let p = extract_pulse_params(&flexible, &setup.contact).unwrap();
    assert!(p.alpha_tilde < 1.0 && p.tc_tilde > 1.0);
    assert!(flexible.pulse_shape_deviation() < 0.1);
}

#[test]
fn reference_simulation_reproduces_contact_duration() {
    let setup = benchmark(0.01, 12);
    let v_c = 1.0;
    let rec = simulate_single_impact(Host::Flexible(&setup.model), &setup.contact, v_c).unwrap();

    let n = setup.model.mode_count();
    let mut y0 = vec![0.0; 2 * n + 2];
    y0[2 * n] = setup.contact.clearance;
    y0[2 * n + 1] = v_c;
    let traj = integrate(&setup.model, &setup.contact, None, 0.0, &y0, 3.0 * rec.contact_duration, &IntegrateOptions::default())
        .unwrap();
    let impacts = detect_impacts(&traj, &setup.contact);
    let first = impacts.first().expect("the contact releases");
    assert!(first.start.abs() <= traj.time_step);
    assert!(((first.end - first.start) - rec.contact_duration).abs() <= traj.time_step);
}
