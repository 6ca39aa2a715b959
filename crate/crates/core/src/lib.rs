//! Double-exponential Sinc collocation for radial Schrödinger eigenvalues.
//!
//! The radial problem `−u″ + V(x)u = Eu` on `(0, ∞)` with
//! `V(x) = Σ aⱼ xʲ`, `j = −2..n`, is mapped to the real line by a
//! double-exponential change of variables, discretised with Sinc collocation
//! and reduced to a dense symmetric eigenproblem. A dilation `x → τx` of the
//! potential (the scaling factor) can be used to speed up convergence.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below cover the usual double-precision case.
//!
//! ```
//! use descm::{BuiltinPotential, StudyConfig64};
//!
//! let cfg = StudyConfig64::builtin(BuiltinPotential::V5);
//! let spectrum = cfg.solve_at(40).unwrap();
//! assert!((spectrum.unscaled_eigenvalues()[0] - 5.0).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod error;
pub mod maps;
pub mod potential;
pub mod scalar;
pub mod solver;

pub use analysis::{
    count_convergent, emit_csv, format_significant, n_range, relative_error, relative_error_approximation, run_study, tau_sweep,
    write_csv, ConvergenceRecord, StudyConfig, TauCount, DEFAULT_THRESHOLD,
};
pub use error::{Error, Result};
pub use maps::{decay_profile, ConformalMap, DecayProfile, MapDerivatives, MapParams, RateMode};
pub use potential::{unscale_eigenvalue, AsymptoticData, BuiltinPotential, Potential, ScaledPotential};
pub use scalar::Real;
pub use solver::{
    assemble, delta2, lambert_w, mesh_size, sinc_basis, solve, symmetric_eigen, CollocationSystem, ConditionMeasure,
    Matrix, SolveOptions, SpectrumResult,
};

pub type Potential64 = Potential<f64>;
pub type ScaledPotential64 = ScaledPotential<f64>;
pub type ConformalMap64 = ConformalMap<f64>;
pub type MapParams64 = MapParams<f64>;
pub type DecayProfile64 = DecayProfile<f64>;
pub type CollocationSystem64 = CollocationSystem<f64>;
pub type SpectrumResult64 = SpectrumResult<f64>;
pub type StudyConfig64 = StudyConfig<f64>;
pub type ConvergenceRecord64 = ConvergenceRecord<f64>;

pub type Potential32 = Potential<f32>;
pub type ConformalMap32 = ConformalMap<f32>;
pub type StudyConfig32 = StudyConfig<f32>;
