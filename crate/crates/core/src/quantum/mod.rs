//! Random pure states, reduced density matrices, subsystem distances and
//! Monte Carlo estimators.

mod density;
mod estimator;
mod rng;
mod state;

pub use density::{
    difference_eigenvalues, difference_spectrum, reduced_density_matrix, schatten_distance,
    schatten_from_spectrum, trace_distance, DensityOperator,
};
pub use estimator::{
    moment_estimator, schatten_distance_sample, trace_distance_sample, Ensemble, Stats,
};
pub use rng::RngStream;
pub use state::{
    sample_charge_eigenstate, sample_page_state, ChargeAssignment, PureState, MAX_SAMPLED_QUBITS,
};
