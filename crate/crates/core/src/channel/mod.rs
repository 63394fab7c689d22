//! Measurements as kernel transformations of probability densities and
//! currents, with the resulting uncertainty indicators and entropy errors.

mod classical;
mod pipeline;
mod quantum;
mod report;

pub use classical::{
    classical_error_indicators, classical_transform, distribution_entropy, make_gaussian_kernel,
    ClassicalDistribution, DEFAULT_MAX_ORDER, MAX_ORDER,
};
pub use pipeline::{gaussian_packet_pipeline, oscillator_pipeline, packet_grid, ChannelRun};
pub use quantum::{estimators_from_density_current, quantum_error_report, quantum_transform, QuantumChannel};
pub use report::{ErrorReport, Indicator};
