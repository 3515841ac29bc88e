//! Transcoding, compilation and simulation of diagonal many-body spin
//! Hamiltonians on weakly coupled NMR spin systems.
//!
//! * [`pauli`]: product-operator algebra and its dense realization.
//! * [`eigenmap`]: eigenenergy ⇄ σ_z-product coefficient transcoding.
//! * [`compiler`]: σ_z-product propagators → pulses and coupling delays.
//! * [`dynamics`]: deviation-state evolution, gradients, FID and spectra.
//!
//! Units: ħ = 1, Hamiltonian coefficients in rad/s, couplings in Hz.
//! Spin indices are zero-based in the API and one-based in text formats.

pub mod compiler;
pub mod dense;
pub mod dynamics;
pub mod eigenmap;
pub mod error;
pub mod format;
pub mod pauli;

pub use error::{Error, Result};
