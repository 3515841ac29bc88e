//! Deviation-state dynamics, acquisition and spectra.

mod acquisition;
mod experiment;
mod state;

pub use acquisition::{acquire_fid, fid_lines, spectrum, Acquisition, FidSignal, Line, Spectrum};
pub use experiment::{
    excite, run_sequence, run_theta_series, theta_sequence, ThetaPoint, OBSERVED_SPIN,
};
pub use state::{prepare_initial, DeviationState, STATE_TOL};
