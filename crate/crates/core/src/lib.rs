//! Design of impact absorbers (vibro-impact nonlinear energy sinks) attached
//! to flexible host structures.
//!
//! The crate covers the whole chain: cantilever modal model, Hertzian contact,
//! a high-resolution single-impact simulation that calibrates the pulse
//! parameters, the semi-analytical design theory built on the slow invariant
//! manifold, and a direct time-domain reference simulation for validation.

pub mod beam;
pub mod contact;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod impact;
pub mod integrator;
pub mod quadrature;
pub mod reference;
pub mod setup;

pub use beam::{assemble_modal_model, excitation_amplitude_from_fatigue, BeamSpec, ForcingLayout, ModalModel};
pub use contact::{hertz_constant, ContactSetup, Elastic};
pub use design::{dimensionless_from_physical, DimensionlessDesign};
pub use dynamics::Host;
pub use error::{Error, Result};
pub use setup::{AbsorberSize, ForceLevel, PhysicalSetup, SetupSpec};
pub use impact::{calibrate, extract_pulse_params, simulate_single_impact, Calibration, ImpactRecord, PulseParams};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
