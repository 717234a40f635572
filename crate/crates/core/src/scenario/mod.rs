//! Scenario files and the runners behind the command-line tool.
//!
//! Runners return artifacts in memory so that every emitted number can be
//! recomputed from the library.

mod config;
mod output;
mod run;

pub use config::{
    EvolveSpec, Expectation, JacobiSpec, Method, ObservableSpec, Picture, PointSpec, PositivitySpec, RegionSpec,
    Scenario, SpinOrbitSpec, StateSpec, TimeSpec, UniquenessSpec,
};
pub use output::{sha256_hex, Artifact, Check, CsvTable, Manifest, ManifestEntry, RunOutput};
pub use run::{run, run_evolve, run_jacobi, run_positivity, run_spin_orbit, run_uniqueness, Command};
