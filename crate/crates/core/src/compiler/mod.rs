//! σ_z-product propagators → pulse sequences on a coupled spin system.

mod refocus;
mod route;
mod sequence;
mod synth;
mod system;
mod verify;

pub use refocus::refocus;
pub use route::{relay_route, RoutingTree};
pub use sequence::{wrap_angle, Axis, DelayMode, Event, Pulse, PulseSequence};
pub use synth::{
    compile_hamiltonian, compile_zchain, compile_zzz3, coupling_delay, TargetHamiltonian,
    TargetTerm,
};
pub use system::SpinSystem;
pub use verify::{sequence_unitary, target_unitary, verify_compilation, Mode};
