use std::f64::consts::PI;

use num_complex::Complex64;

use super::system::SpinSystem;
use crate::dense::{Local2, ONE, ZERO};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Rotation axis of an ideal spin-selective pulse. `Z` pulses stand for
/// ideal z-rotations (phase shifts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
    MinusX,
    MinusY,
    MinusZ,
}

impl Axis {
    pub fn pauli(self) -> (Pauli, f64) {
        match self {
            Axis::X => (Pauli::X, 1.0),
            Axis::Y => (Pauli::Y, 1.0),
            Axis::Z => (Pauli::Z, 1.0),
            Axis::MinusX => (Pauli::X, -1.0),
            Axis::MinusY => (Pauli::Y, -1.0),
            Axis::MinusZ => (Pauli::Z, -1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::MinusX => "-x",
            Axis::MinusY => "-y",
            Axis::MinusZ => "-z",
        }
    }

    pub fn from_label(s: &str) -> Option<Axis> {
        Some(match s {
            "x" | "+x" => Axis::X,
            "y" | "+y" => Axis::Y,
            "z" | "+z" => Axis::Z,
            "-x" => Axis::MinusX,
            "-y" => Axis::MinusY,
            "-z" => Axis::MinusZ,
            _ => return None,
        })
    }
}

/// Maps any angle into (−2π, 2π]; rotations are 4π-periodic.
pub fn wrap_angle(beta: f64) -> f64 {
    let w = beta.rem_euclid(4.0 * PI);
    if w > 2.0 * PI {
        w - 4.0 * PI
    } else {
        w
    }
}

/// `exp(−i(β/2)·σ_axis)` applied to each listed spin.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    pub spins: Vec<usize>,
    pub axis: Axis,
    pub angle: f64,
}

impl Pulse {
    pub fn new(spins: Vec<usize>, axis: Axis, angle: f64) -> Self {
        Self { spins, axis, angle }
    }

    pub fn on(spin: usize, axis: Axis, angle: f64) -> Self {
        Self::new(vec![spin], axis, angle)
    }

    /// The single-spin rotation applied to each spin in `spins`.
    pub fn local_matrix(&self) -> Local2 {
        let (p, sign) = self.axis.pauli();
        let (s, c) = (0.5 * self.angle).sin_cos();
        let sigma = p.matrix();
        let f = Complex64::new(0.0, -s * sign);
        let mut out = [[ZERO; 2]; 2];
        for r in 0..2 {
            for col in 0..2 {
                let id = if r == col { ONE * c } else { ZERO };
                out[r][col] = id + f * sigma[r][col];
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayMode {
    /// Ideal mode evolves only `(π J_ij/2) σ_z^i σ_z^j`.
    Coupling(usize, usize),
    /// Evolves the full internal Hamiltonian in either mode.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Pulse(Pulse),
    Delay { duration: f64, mode: DelayMode },
    Gradient,
}

impl Event {
    pub fn delay(duration: f64, i: usize, j: usize) -> Self {
        Event::Delay {
            duration,
            mode: DelayMode::Coupling(i, j),
        }
    }

    pub fn is_delay(&self) -> bool {
        matches!(self, Event::Delay { .. })
    }
}

/// Ordered pulses, delays and gradients; the first event acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    n: usize,
    events: Vec<Event>,
}

impl PulseSequence {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            events: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    fn check_spin(&self, spin: usize) -> Result<()> {
        if spin >= self.n {
            return Err(Error::SpinOutOfRange { spin, n: self.n });
        }
        Ok(())
    }

    /// Appends `e` after checking durations, angles and spin indices.
    pub fn push(&mut self, e: Event) -> Result<()> {
        match &e {
            Event::Pulse(p) => {
                if p.spins.is_empty() {
                    return Err(Error::InvalidEvent("pulse without spins".into()));
                }
                for (k, &s) in p.spins.iter().enumerate() {
                    self.check_spin(s)?;
                    if p.spins[..k].contains(&s) {
                        return Err(Error::DuplicateSpin { spin: s });
                    }
                }
                if !(p.angle > -2.0 * PI && p.angle <= 2.0 * PI) {
                    return Err(Error::InvalidEvent(format!(
                        "pulse angle {} outside (-2pi, 2pi]",
                        p.angle
                    )));
                }
            }
            Event::Delay { duration, mode } => {
                if !(duration.is_finite() && *duration >= 0.0) {
                    return Err(Error::InvalidEvent(format!(
                        "delay duration {duration} is negative or non-finite"
                    )));
                }
                if let DelayMode::Coupling(i, j) = *mode {
                    self.check_spin(i)?;
                    self.check_spin(j)?;
                    if i == j {
                        return Err(Error::DuplicateSpin { spin: i });
                    }
                }
            }
            Event::Gradient => {}
        }
        self.events.push(e);
        Ok(())
    }

    pub fn extend(&mut self, other: &PulseSequence) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        self.events.extend(other.events.iter().cloned());
        Ok(())
    }

    /// Ideal-coupling delays must name an edge of `sys`.
    pub fn check_against(&self, sys: &SpinSystem) -> Result<()> {
        if sys.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: sys.n(),
                right: self.n,
            });
        }
        for e in &self.events {
            if let Event::Delay {
                mode: DelayMode::Coupling(i, j),
                ..
            } = *e
            {
                if !sys.has_edge(i, j) {
                    return Err(Error::MissingCoupling { a: i, b: j });
                }
            }
        }
        Ok(())
    }

    pub fn delay_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_delay()).count()
    }

    pub fn pulse_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Pulse(_)))
            .count()
    }

    pub fn total_delay(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                Event::Delay { duration, .. } => *duration,
                _ => 0.0,
            })
            .sum()
    }
}
