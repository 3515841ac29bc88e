//! σ_z-product propagators → single-spin pulses and two-spin coupling delays.
//!
//! A product `Z_S` is grown from a two-spin coupling by conjugation. The
//! building block is the hop `(a, b)`: pulses on `b` around one `1/(2J_ab)`
//! delay, realizing a unitary `A` with `A Z_b A† = Z_a Z_b` that leaves
//! `Z_a` and all other spins alone:
//!
//! ```text
//! before:  [π/2]₋ₓ  [π]₋ᵧ  1/(2J_ab)  [π/2]ᵧ      (= A†, up to phase)
//! after:   [π/2]ᵧ   1/(2J_ab)  [π/2]ₓ             (= A)
//! ```
//!
//! For the three-spin chain this is exactly the textbook σzσzσz sequence.
//! Relay spins (on the route but outside `S`) are removed again by a second
//! hop in the reverse direction.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::route::RoutingTree;
use super::sequence::{wrap_angle, Axis, Event, Pulse, PulseSequence};
use super::system::SpinSystem;
use crate::eigenmap::CoefficientVector;
use crate::error::{Error, Result};
use crate::pauli::OperatorSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetTerm {
    /// bit `i` set ⇔ σ_z on spin `i`
    pub mask: usize,
    /// effective coupling, Hz; the term is `(π J_eff / 2) Z_mask`
    pub j_eff: f64,
}

/// A diagonal Hamiltonian `Σ (π J_eff/2) Z_mask` to be simulated for time `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetHamiltonian {
    n: usize,
    terms: Vec<TargetTerm>,
    time: f64,
}

impl TargetHamiltonian {
    pub fn new(n: usize, time: f64) -> Self {
        Self {
            n,
            terms: Vec::new(),
            time,
        }
    }

    /// `exp(−i(π/2) J_eff T Z_i Z_j Z_k)`.
    pub fn three_body(n: usize, spins: [usize; 3], j_eff: f64, time: f64) -> Result<Self> {
        let mut t = Self::new(n, time);
        t.add_term(&spins, j_eff)?;
        Ok(t)
    }

    /// Adds `(π J_eff/2)·Π_{s∈spins} σ_z^s`, merging with an existing term.
    pub fn add_term(&mut self, spins: &[usize], j_eff: f64) -> Result<()> {
        let mut mask = 0usize;
        for &s in spins {
            if s >= self.n {
                return Err(Error::SpinOutOfRange { spin: s, n: self.n });
            }
            if mask >> s & 1 == 1 {
                return Err(Error::DuplicateSpin { spin: s });
            }
            mask |= 1 << s;
        }
        self.add_mask(mask, j_eff);
        Ok(())
    }

    fn add_mask(&mut self, mask: usize, j_eff: f64) {
        match self.terms.iter_mut().find(|t| t.mask == mask) {
            Some(t) => t.j_eff += j_eff,
            None => self.terms.push(TargetTerm { mask, j_eff }),
        }
    }

    /// From σ_z-product coefficients α (rad/s): `J_eff = 2α/π`.
    pub fn from_coefficients(alpha: &CoefficientVector, time: f64) -> Self {
        let mut t = Self::new(alpha.n(), time);
        for (mask, &a) in alpha.values().iter().enumerate() {
            if a != 0.0 {
                t.add_mask(mask, 2.0 * a / PI);
            }
        }
        t
    }

    /// Rejects any term with an X or Y factor or a complex coefficient.
    pub fn from_operator_sum(op: &OperatorSum, time: f64) -> Result<Self> {
        let mut t = Self::new(op.n(), time);
        for term in op.terms() {
            if !term.is_diagonal() || term.coeff().im != 0.0 {
                return Err(Error::NonDiagonal {
                    term: term.to_string(),
                });
            }
            t.add_mask(term.z_mask(), 2.0 * term.coeff().re / PI);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn terms(&self) -> &[TargetTerm] {
        &self.terms
    }

    /// α_mask = π J_eff / 2 (rad/s).
    pub fn coefficients(&self) -> Result<CoefficientVector> {
        let mut a = CoefficientVector::zeros(self.n)?;
        for t in &self.terms {
            a.values_mut()[t.mask] += 0.5 * PI * t.j_eff;
        }
        Ok(a)
    }

    /// θ = π J_eff T, the rotation the term contributes as `exp(−i(θ/2) Z_mask)`.
    pub fn theta(&self, term: &TargetTerm) -> f64 {
        PI * term.j_eff * self.time
    }
}

/// Nonnegative duration `t` with `π J t / 2 ≡ angle (mod 2π)` on a coupling of
/// `j_hz`, so that the ideal delay applies `exp(−i·angle·Z_a Z_b)` exactly.
pub fn coupling_delay(angle: f64, j_hz: f64) -> f64 {
    let period = 4.0 / j_hz.abs();
    (2.0 * angle / (PI * j_hz)).rem_euclid(period)
}

fn hop_delay(sys: &SpinSystem, a: usize, b: usize) -> Event {
    Event::delay(coupling_delay(FRAC_PI_4, sys.coupling(a, b)), a, b)
}

fn hop_before(sys: &SpinSystem, a: usize, b: usize, out: &mut Vec<Event>) {
    out.push(Event::Pulse(Pulse::on(b, Axis::MinusX, FRAC_PI_2)));
    out.push(Event::Pulse(Pulse::on(b, Axis::MinusY, PI)));
    out.push(hop_delay(sys, a, b));
    out.push(Event::Pulse(Pulse::on(b, Axis::Y, FRAC_PI_2)));
}

fn hop_after(sys: &SpinSystem, a: usize, b: usize, out: &mut Vec<Event>) {
    out.push(Event::Pulse(Pulse::on(b, Axis::Y, FRAC_PI_2)));
    out.push(hop_delay(sys, a, b));
    out.push(Event::Pulse(Pulse::on(b, Axis::X, FRAC_PI_2)));
}

/// Hops in the order they conjugate the central operator, innermost first.
/// Starting from `{root}`, hop `(a, b)` toggles `a` while `b` is present.
fn hop_order(tree: &RoutingTree) -> Vec<(usize, usize)> {
    fn visit(tree: &RoutingTree, v: usize, ops: &mut Vec<(usize, usize)>) {
        let children = tree.children_of(v);
        for &c in children {
            ops.push((c, v));
        }
        if !tree.is_member(v) {
            ops.push((v, children[0]));
        }
        for &c in children {
            visit(tree, c, ops);
        }
    }
    let mut ops = Vec::new();
    visit(tree, tree.root, &mut ops);
    ops
}

/// Events realizing `exp(−i(θ/2)·Z_S)` over the tree's members.
fn synthesize(sys: &SpinSystem, tree: &RoutingTree, theta: f64) -> Vec<Event> {
    let ops = hop_order(tree);
    let Some((&(c1, root), rest)) = ops.split_first() else {
        return vec![Event::Pulse(Pulse::on(
            tree.root,
            Axis::Z,
            wrap_angle(theta),
        ))];
    };
    let mut out = Vec::with_capacity(1 + 7 * rest.len());
    for &(a, b) in rest.iter().rev() {
        hop_before(sys, a, b, &mut out);
    }
    out.push(Event::delay(
        coupling_delay(0.5 * theta, sys.coupling(c1, root)),
        c1,
        root,
    ));
    for &(a, b) in rest {
        hop_after(sys, a, b, &mut out);
    }
    out
}

fn into_sequence(n: usize, events: Vec<Event>) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new(n);
    for e in events {
        seq.push(e)?;
    }
    Ok(seq)
}

/// `exp(−i(π/2) J_eff T σ_z^i σ_z^j σ_z^k)` with `j` coupled to both `i` and `k`.
pub fn compile_zzz3(
    sys: &SpinSystem,
    i: usize,
    j: usize,
    k: usize,
    j_eff: f64,
    time: f64,
) -> Result<PulseSequence> {
    compile_zchain(sys, &[i, j, k], j_eff, time)
}

/// `exp(−i(θ/2) Z_{s1}…Z_{sm})`, θ = π J_eff T, over a chain of adjacent spins.
/// Uses `2m − 3` delays for `m ≥ 2`.
pub fn compile_zchain(
    sys: &SpinSystem,
    spins: &[usize],
    j_eff: f64,
    time: f64,
) -> Result<PulseSequence> {
    let tree = RoutingTree::path(sys, spins)?;
    into_sequence(sys.n(), synthesize(sys, &tree, PI * j_eff * time))
}

/// Concatenates one block per nonzero term; the terms commute, so the
/// product is exact. Terms whose spins are not adjacent are routed through
/// relay spins.
pub fn compile_hamiltonian(sys: &SpinSystem, target: &TargetHamiltonian) -> Result<PulseSequence> {
    if target.n() != sys.n() {
        return Err(Error::DimensionMismatch {
            left: sys.n(),
            right: target.n(),
        });
    }
    let mut terms: Vec<_> = target.terms().to_vec();
    terms.sort_by_key(|t| t.mask);
    let mut events = Vec::new();
    for t in terms {
        let theta = target.theta(&t);
        // the identity term is a global phase
        if t.mask == 0 || theta == 0.0 {
            continue;
        }
        let tree = RoutingTree::spanning(sys, t.mask)?;
        events.extend(synthesize(sys, &tree, theta));
    }
    into_sequence(sys.n(), events)
}
