use super::sequence::{DelayMode, Event, PulseSequence};
use super::synth::TargetHamiltonian;
use super::system::SpinSystem;
use crate::dense::DenseUnitary;
use crate::eigenmap::xi_from_alpha;
use crate::error::{Error, Result};

/// How coupling delays evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Only the named coupling acts during a coupling delay.
    #[default]
    Ideal,
    /// The full internal Hamiltonian (offsets and every coupling) acts.
    Realistic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "realistic" => Ok(Mode::Realistic),
            other => Err(Error::InvalidEvent(format!("unknown mode {other:?}"))),
        }
    }
}

/// Product of all events, first event rightmost. Pulses are ideal and
/// instantaneous; gradients are not unitary and are rejected.
pub fn sequence_unitary(seq: &PulseSequence, sys: &SpinSystem, mode: Mode) -> Result<DenseUnitary> {
    seq.check_against(sys)?;
    let mut u = DenseUnitary::identity(sys.n())?;
    let full = sys.internal_energies();
    let mut phases = vec![0.0; full.len()];
    for e in seq.events() {
        match e {
            Event::Pulse(p) => {
                let a = p.local_matrix();
                for &s in &p.spins {
                    u.apply_local(s, &a);
                }
            }
            Event::Delay { duration, mode: dm } => {
                let energies = match (*dm, mode) {
                    (DelayMode::Coupling(i, j), Mode::Ideal) => sys.coupling_energies(i, j),
                    _ => full.clone(),
                };
                for (ph, w) in phases.iter_mut().zip(&energies) {
                    *ph = w * duration;
                }
                u.apply_phases(&phases);
            }
            Event::Gradient => return Err(Error::GradientInUnitary),
        }
    }
    Ok(u)
}

/// `diag(exp(−i ξ_k T))` for the target's eigenenergies ξ.
pub fn target_unitary(target: &TargetHamiltonian) -> Result<DenseUnitary> {
    let xi = xi_from_alpha(&target.coefficients()?);
    let phases: Vec<f64> = xi.values().iter().map(|x| x * target.time()).collect();
    DenseUnitary::from_phases(target.n(), &phases)
}

/// Phase-insensitive distance between the sequence and the target propagator.
pub fn verify_compilation(
    seq: &PulseSequence,
    sys: &SpinSystem,
    target: &TargetHamiltonian,
    mode: Mode,
) -> Result<f64> {
    let u = sequence_unitary(seq, sys, mode)?;
    u.phase_distance(&target_unitary(target)?)
}
