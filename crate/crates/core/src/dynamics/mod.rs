//! Time evolution in both pictures: truncated Lie series, the spin-orbit closed forms,
//! expectation values and conservation tables.

mod conservation;
mod density;
mod rotation;
mod series;
mod spin_orbit;

pub use conservation::{conservation_report, expectation, EvolutionReport};
pub use density::{DensityField, NORMALIZATION_TOL};
pub use rotation::{axis_angle, check_regular, cross_matrix, RotationField, DEFAULT_EPS_L};
pub use series::{
    heisenberg_series, lie_series_heisenberg, lie_series_schrodinger, schrodinger_series, stepped,
    sum_point_terms, LieSeries, SeriesResult, SeriesValue, TruncationEstimate, REMAINDER_WARN,
};
pub use spin_orbit::{
    heisenberg_coefficients, integrated_inverse_rotation, schrodinger_coefficients, spin_orbit_closed_form,
    spin_orbit_closed_form_l_only, spin_orbit_hamiltonian, spin_orbit_schrodinger_closed_form,
    spin_orbit_schrodinger_l_only, HeisenbergPoint, SchrodingerPoint, SpinOrbitHeisenberg, SpinOrbitSchrodinger,
};
