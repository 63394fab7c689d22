//! The state catalog: declarative specifications, samplers on grids,
//! density/current extraction and the closed forms known for each state.

mod closed_form;
mod sample;
mod spec;
pub mod special;

pub use closed_form::closed_form_card;
pub use sample::{density_and_current, natural_grid, sample, GridSize, LINE_HALF_WIDTH};
pub use spec::{StateSpec, MAX_ROTOR_L};
