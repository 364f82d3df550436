use crate::config::{ConfigError, Manifest, RunConfig};
use serde::Serialize;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use thiserror::Error;
use vines_core::design::{efficacy_curve, frequency_response, DesignCurve, DimensionlessDesign, PsiGrid};
use vines_core::impact::simulate_single_impact;
use vines_core::reference::{efficacy_scan, EfficacyPoint};
use vines_core::{calibrate, dimensionless_from_physical, Calibration, Host, PhysicalSetup, PulseParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] vines_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Numerical(vines_core::Error::InvalidParameter { .. }) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Output directory plus the resolved configuration of one run.
pub struct Run {
    pub config: RunConfig,
    pub out: PathBuf,
    pub setup: PhysicalSetup,
}

impl Run {
    pub fn new(config: RunConfig, out: Option<PathBuf>) -> Result<Self> {
        let spec = config.setup_spec()?;
        let setup = PhysicalSetup::new(&spec)?;
        let out = out.unwrap_or_else(|| config.output.clone());
        let config = RunConfig { output: out.clone(), ..config.resolved()? };
        Ok(Self { config, out, setup })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        File::create(&path).map(BufWriter::new).map_err(|source| CliError::Io { path, source })
    }

    fn write_with(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<()> {
        let mut w = self.create(name)?;
        f(&mut w).and_then(|_| w.flush()).map_err(|source| CliError::Io { path: self.path(name), source })
    }

    fn write_toml<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let text = toml::to_string(value).expect("plain data serializes");
        self.write_with(name, |w| w.write_all(text.as_bytes()))
    }

    /// Creates the output directory and records the manifest.
    pub fn start(&self, command: &str) -> Result<()> {
        std::fs::create_dir_all(&self.out).map_err(|source| CliError::Io { path: self.out.clone(), source })?;
        let manifest = Manifest {
            toolkit_version: vines_core::VERSION.to_string(),
            command: command.to_string(),
            config: self.config.clone(),
        };
        self.write_toml("manifest.toml", &manifest)
    }

    fn a_no(&self) -> f64 {
        self.setup.resonant_amplitude_without_absorber()
    }
}

#[derive(Serialize)]
struct SetupSummary {
    beam_mass_kg: f64,
    absorber_radius_m: f64,
    absorber_mass_kg: f64,
    mass_ratio: f64,
    hertz_constant_n_per_m1_5: f64,
    force_location_m: f64,
    force_amplitude_n: f64,
    contact_shape_per_sqrtkg: f64,
    /// Modal amplitude of mode 1 at resonance without absorber.
    a_no_sqrtkg_m: f64,
    /// `phi_c a_no`, the clearance unit.
    clearance_scale_m: f64,
    modal_mass_ratio: f64,
}

pub fn modes(run: &Run) -> Result<()> {
    let s = &run.setup;
    let model = &s.model;
    let xc = s.layout.contact_location;
    let xf = s.layout.force_location;
    run.write_with("modes.csv", |w| {
        writeln!(w, "mode,beta_l,omega_rad_s,frequency_hz,damping_ratio,phi_contact_per_sqrtkg,phi_force_per_sqrtkg")?;
        let beta = model.wavenumbers();
        for k in 0..model.mode_count() {
            let omega = model.natural_frequencies()[k];
            writeln!(
                w,
                "{},{:.12e},{:.12e},{:.12e},{:.6e},{:.12e},{:.12e}",
                k + 1,
                beta[k],
                omega,
                omega / (2.0 * PI),
                model.damping_ratios()[k],
                model.shape_at(xc, k),
                model.shape_at(xf, k)
            )?;
        }
        Ok(())
    })?;
    run.write_toml(
        "setup.toml",
        &SetupSummary {
            beam_mass_kg: model.beam_mass(),
            absorber_radius_m: s.contact.absorber_radius,
            absorber_mass_kg: s.contact.absorber_mass,
            mass_ratio: s.contact.mass_ratio,
            hertz_constant_n_per_m1_5: s.contact.hertz_constant,
            force_location_m: xf,
            force_amplitude_n: s.layout.force_amplitude,
            contact_shape_per_sqrtkg: s.contact.contact_shape_value,
            a_no_sqrtkg_m: run.a_no(),
            clearance_scale_m: s.clearance_scale(),
            modal_mass_ratio: s.modal_mass_ratio(),
        },
    )
}

#[derive(Serialize)]
struct ParamsOut {
    modal_cor: f64,
    alpha_tilde: f64,
    tc_tilde: f64,
    gamma: f64,
}

impl From<PulseParams> for ParamsOut {
    fn from(p: PulseParams) -> Self {
        Self { modal_cor: p.modal_cor, alpha_tilde: p.alpha_tilde, tc_tilde: p.tc_tilde, gamma: p.gamma }
    }
}

#[derive(Serialize)]
struct CalibrationOut {
    seed_velocity_m_s: f64,
    initial_velocity_m_s: f64,
    optimum_velocity_m_s: f64,
    /// Largest relative change of `(r, alpha~, T_c~)` in the re-iteration.
    relative_change: f64,
    initial: ParamsOut,
    refined: ParamsOut,
}

pub fn calibrate_step(run: &Run) -> Result<Calibration> {
    let s = &run.setup;
    Ok(calibrate(&s.model, &s.contact, &s.layout)?)
}

pub fn calibration(run: &Run) -> Result<Calibration> {
    let cal = calibrate_step(run)?;
    run.write_toml(
        "calibration.toml",
        &CalibrationOut {
            seed_velocity_m_s: cal.seed_velocity,
            initial_velocity_m_s: cal.initial_velocity,
            optimum_velocity_m_s: cal.optimum_velocity,
            relative_change: cal.relative_change(),
            initial: cal.initial.into(),
            refined: cal.refined.into(),
        },
    )?;
    let s = &run.setup;
    let record = simulate_single_impact(Host::Flexible(&s.model), &s.contact, cal.optimum_velocity)?;
    run.write_with("pulse.csv", |w| record.write_pulse_csv(w))?;
    Ok(cal)
}

/// Prediction from the calibrated pulse parameters.
pub struct Prediction {
    pub design: DimensionlessDesign,
    pub curve: DesignCurve,
}

#[derive(Serialize)]
struct DesignOut {
    damping_ratio: f64,
    mu_gamma: f64,
    modal_cor: f64,
    /// `f_ex phi_c / (omega^2 g)` at the optimum clearance.
    forcing_ratio: f64,
    optimum_normalized_clearance: f64,
    optimum_clearance_m: f64,
    amplitude_ratio: f64,
    amplitude_sqrtkg_m: f64,
    contact_amplitude_m: f64,
    frequency_ratio: f64,
    contact_phase_rad: f64,
    optimum_at_grid_boundary: bool,
    /// Close to, but not equal to, `2/pi`.
    gamma_over_one_plus_r: f64,
    two_over_pi: f64,
}

pub fn predict(run: &Run, cal: &Calibration) -> Result<Prediction> {
    let s = &run.setup;
    let p = cal.refined;
    let design = DimensionlessDesign::new(s.model.damping_ratios()[0], s.modal_mass_ratio() * p.gamma, p.modal_cor)?;
    let curve = efficacy_curve(&design, &PsiGrid::log_dense(p.modal_cor, vines_core::design::efficacy::DEFAULT_GRID_POINTS));
    Ok(Prediction { design, curve })
}

fn response_name(prefix: &str, gn: f64) -> String {
    format!("{prefix}_g{gn:.4}.csv")
}

pub fn design(run: &Run) -> Result<Prediction> {
    let cal = calibration(run)?;
    let pred = predict(run, &cal)?;
    let s = &run.setup;
    let opt = pred.curve.optimum;
    let scale = s.clearance_scale();
    let at_optimum = s.with_normalized_clearance(opt.point.normalized_clearance);
    let full = dimensionless_from_physical(
        &s.model,
        &at_optimum.contact,
        &cal.refined,
        pred.design.damping_ratio,
        &s.layout,
    )?;
    run.write_with("efficacy.csv", |w| pred.curve.write_csv(w))?;
    run.write_toml(
        "design.toml",
        &DesignOut {
            damping_ratio: full.damping_ratio,
            mu_gamma: full.mu_gamma,
            modal_cor: full.modal_cor,
            forcing_ratio: full.forcing_ratio,
            optimum_normalized_clearance: opt.point.normalized_clearance,
            optimum_clearance_m: opt.point.normalized_clearance * scale,
            amplitude_ratio: opt.point.amplitude_ratio,
            amplitude_sqrtkg_m: opt.point.amplitude_ratio * run.a_no(),
            contact_amplitude_m: opt.point.amplitude_ratio * scale,
            frequency_ratio: opt.point.frequency_ratio,
            contact_phase_rad: opt.point.psi,
            optimum_at_grid_boundary: opt.at_boundary,
            gamma_over_one_plus_r: cal.refined.gamma / (1.0 + cal.refined.modal_cor),
            two_over_pi: 2.0 / PI,
        },
    )?;
    if let Some(values) = &run.config.clearances.values {
        for &gn in values {
            let response = frequency_response(&pred.design, gn);
            run.write_with(&response_name("response", gn), |w| response.write_csv(w))?;
        }
    }
    Ok(pred)
}

const SWEEP_HEADER: &str = "norm_clearance,eta,mean_amplitude_ratio,max_amplitude_ratio,amplitude_cv,\
impacts_per_period,contact_phase_rad,modal_cor,strongly_modulated,converged,periods";

fn write_metrics<W: Write>(w: &mut W, gn: f64, a_no: f64, m: &vines_core::reference::SteadyStateMetrics) -> io::Result<()> {
    writeln!(
        w,
        "{gn:.6},{:.6},{:.8e},{:.8e},{:.6e},{:.4},{:.6},{:.6},{},{},{}",
        m.frequency_ratio,
        m.mean_amplitude / a_no,
        m.max_amplitude / a_no,
        m.amplitude_variation,
        m.impacts_per_period,
        m.mean_contact_phase,
        m.mean_modal_cor,
        m.is_strongly_modulated,
        m.converged,
        m.periods
    )
}

fn scan(run: &Run, pred: &Prediction) -> Result<(Vec<f64>, Vec<EfficacyPoint>)> {
    let s = &run.setup;
    let grid = run.config.clearances.resolve(pred.curve.optimum.point.normalized_clearance);
    let points = efficacy_scan(&s.model, &s.contact, &s.layout, &grid, &run.config.sim_config())?;
    let a_no = run.a_no();
    run.write_with("reference_sweep.csv", |w| {
        writeln!(w, "{SWEEP_HEADER}")?;
        for p in &points {
            for m in &p.sweep {
                write_metrics(w, p.normalized_clearance, a_no, m)?;
            }
        }
        Ok(())
    })?;
    run.write_with("reference_efficacy.csv", |w| {
        writeln!(w, "{SWEEP_HEADER}")?;
        for p in &points {
            write_metrics(w, p.normalized_clearance, a_no, &p.resonant)?;
        }
        Ok(())
    })?;
    Ok((grid, points))
}

pub fn sweep(run: &Run) -> Result<()> {
    let cal = calibrate_step(run)?;
    let pred = predict(run, &cal)?;
    scan(run, &pred).map(|_| ())
}

#[derive(Serialize)]
struct ValidationOut {
    predicted_optimum_normalized_clearance: f64,
    predicted_amplitude_ratio: f64,
    reference_best_normalized_clearance: f64,
    reference_best_amplitude_ratio: f64,
    reference_best_strongly_modulated: bool,
    optimum_relative_deviation: f64,
}

pub fn validate(run: &Run) -> Result<()> {
    let pred = design(run)?;
    let (_, points) = scan(run, &pred)?;
    run.write_with("validation.csv", |w| {
        writeln!(
            w,
            "norm_clearance,predicted_amplitude_ratio,reference_mean_amplitude_ratio,reference_max_amplitude_ratio,\
             impacts_per_period,strongly_modulated"
        )?;
        for p in &points {
            let predicted = pred.curve.amplitude_at(p.normalized_clearance).map_or(String::new(), |a| format!("{a:.8e}"));
            writeln!(
                w,
                "{:.6},{predicted},{:.8e},{:.8e},{:.4},{}",
                p.normalized_clearance,
                p.amplitude_ratio,
                p.max_amplitude_ratio,
                p.resonant.impacts_per_period,
                p.resonant.is_strongly_modulated
            )?;
        }
        Ok(())
    })?;
    let a_no = run.a_no();
    run.write_with("frequency_responses.csv", |w| {
        writeln!(w, "source,norm_clearance,eta,amplitude_ratio,branch_id")?;
        for p in &points {
            let response = frequency_response(&pred.design, p.normalized_clearance);
            for b in &response.branches {
                for q in &b.points {
                    writeln!(
                        w,
                        "predicted,{:.6},{:.8e},{:.8e},{}",
                        p.normalized_clearance,
                        q.frequency_ratio,
                        response.amplitude_ratio(q),
                        b.id
                    )?;
                }
            }
            for m in &p.sweep {
                writeln!(w, "reference,{:.6},{:.8e},{:.8e},", p.normalized_clearance, m.frequency_ratio, m.mean_amplitude / a_no)?;
            }
        }
        Ok(())
    })?;
    let best = points.iter().min_by(|a, b| a.amplitude_ratio.total_cmp(&b.amplitude_ratio));
    if let Some(best) = best {
        let opt = pred.curve.optimum.point;
        run.write_toml(
            "validation.toml",
            &ValidationOut {
                predicted_optimum_normalized_clearance: opt.normalized_clearance,
                predicted_amplitude_ratio: opt.amplitude_ratio,
                reference_best_normalized_clearance: best.normalized_clearance,
                reference_best_amplitude_ratio: best.amplitude_ratio,
                reference_best_strongly_modulated: best.resonant.is_strongly_modulated,
                optimum_relative_deviation: best.normalized_clearance / opt.normalized_clearance - 1.0,
            },
        )?;
    }
    Ok(())
}
