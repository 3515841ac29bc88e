use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::compiler::{Axis, DelayMode, Event, Mode, Pulse, PulseSequence, SpinSystem};
use crate::dense::{
    self, adjoint, apply_local_left, apply_local_right, check_spins, local_adjoint, CMatrix, ZERO,
};
use crate::error::{Error, Result};
use crate::pauli::{i_pow, OperatorSum, PauliTerm};

/// Tolerance on Hermiticity and trace when a state is constructed.
pub const STATE_TOL: f64 = 1e-12;

/// Traceless Hermitian deviation density matrix, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationState {
    n: usize,
    rho: CMatrix,
}

impl DeviationState {
    /// Checks Hermiticity and tracelessness to [`STATE_TOL`] (relative to the norm).
    pub fn from_matrix(n: usize, rho: CMatrix) -> Result<Self> {
        check_spins(n)?;
        let d = dense::dim(n);
        if rho.dim() != (d, d) {
            return Err(Error::LengthMismatch {
                len: rho.nrows(),
                n,
            });
        }
        let s = Self { n, rho };
        let scale = s.norm().max(1.0);
        if dense::frobenius(&(&s.rho - &adjoint(&s.rho))) > STATE_TOL * scale * (d as f64).sqrt() {
            return Err(Error::NonHermitian);
        }
        let trace = s.trace();
        if trace.norm() > STATE_TOL * scale * d as f64 {
            return Err(Error::NonTraceless {
                trace: trace.norm(),
            });
        }
        Ok(s)
    }

    pub fn from_operator_sum(op: &OperatorSum) -> Result<Self> {
        Self::from_matrix(op.n(), op.to_dense()?)
    }

    pub fn from_term(term: &PauliTerm) -> Result<Self> {
        Self::from_matrix(term.n(), term.to_dense()?)
    }

    /// Pauli decomposition, dropping coefficients with magnitude ≤ `tol`.
    pub fn to_operator_sum(&self, tol: f64) -> OperatorSum {
        OperatorSum::from_dense(self.n, &self.rho, tol).expect("validated size")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.diag().sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        dense::frobenius(&(&self.rho - &adjoint(&self.rho)))
    }

    /// `‖ρ‖_F / √2ⁿ`, so a single Pauli string has norm 1.
    pub fn norm(&self) -> f64 {
        dense::frobenius(&self.rho) / (self.rho.nrows() as f64).sqrt()
    }

    /// `‖ρ − σ‖_F / √2ⁿ`.
    pub fn distance(&self, other: &DeviationState) -> Result<f64> {
        self.same_n(other.n)?;
        Ok(dense::frobenius(&(&self.rho - &other.rho)) / (self.rho.nrows() as f64).sqrt())
    }

    fn same_n(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self {
            n: self.n,
            rho: self.rho.mapv(|z| z * w),
        }
    }

    pub fn plus(&self, other: &DeviationState) -> Result<Self> {
        self.same_n(other.n)?;
        Ok(Self {
            n: self.n,
            rho: &self.rho + &other.rho,
        })
    }

    /// `Re Tr(ρ P) / 2ⁿ`: the coefficient of `P` when `P` is a bare Pauli string.
    pub fn expectation(&self, p: &PauliTerm) -> Result<f64> {
        self.same_n(p.n())?;
        let (x, z) = (p.x_mask(), p.z_mask());
        let base = p.coeff() * i_pow((x & z).count_ones() as u8);
        // ⟨c|ρP|c⟩ = base · (−1)^{z·c} · ρ[c, c⊕x]
        let tr: Complex64 = (0..self.rho.nrows())
            .map(|c| {
                let v = self.rho[[c, c ^ x]];
                if (z & c).count_ones() % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        Ok((base * tr).re / self.rho.nrows() as f64)
    }

    /// Ideal z-gradient: keeps `|r⟩⟨c|` only where the coherence order
    /// `popcount(c) − popcount(r)` vanishes.
    pub fn gradient_crush(&self) -> Self {
        let mut rho = self.rho.clone();
        for ((r, c), v) in rho.indexed_iter_mut() {
            if r.count_ones() != c.count_ones() {
                *v = ZERO;
            }
        }
        Self { n: self.n, rho }
    }

    /// `ρ ↦ UρU†` for an ideal pulse.
    pub fn apply_pulse(&self, pulse: &Pulse) -> Result<Self> {
        let a = pulse.local_matrix();
        let a_dag = local_adjoint(&a);
        let mut rho = self.rho.clone();
        for &s in &pulse.spins {
            if s >= self.n {
                return Err(Error::SpinOutOfRange { spin: s, n: self.n });
            }
            apply_local_left(&mut rho, s, &a);
            apply_local_right(&mut rho, s, &a_dag);
        }
        Ok(Self { n: self.n, rho })
    }

    /// Free evolution for `t` seconds under a diagonal Hamiltonian: one
    /// coupling term or the full internal Hamiltonian.
    pub fn evolve(&self, sys: &SpinSystem, t: f64, mode: DelayMode) -> Result<Self> {
        self.same_n(sys.n())?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidEvent(format!(
                "evolution time {t} is negative or non-finite"
            )));
        }
        let energies = match mode {
            DelayMode::Coupling(i, j) => {
                sys.check_spin(i)?;
                sys.check_spin(j)?;
                sys.coupling_energies(i, j)
            }
            DelayMode::Full => sys.internal_energies(),
        };
        Ok(self.evolve_diagonal(&energies, t))
    }

    /// `ρ_rc ↦ ρ_rc · exp(−i(E_r − E_c)t)`.
    pub(crate) fn evolve_diagonal(&self, energies: &[f64], t: f64) -> Self {
        let mut rho = self.rho.clone();
        for ((r, c), v) in rho.indexed_iter_mut() {
            if *v != ZERO {
                *v *= Complex64::from_polar(1.0, -(energies[r] - energies[c]) * t);
            }
        }
        Self { n: self.n, rho }
    }

    /// Folds the events in time order; in realistic mode coupling delays
    /// evolve the full internal Hamiltonian.
    pub fn apply_sequence(
        &self,
        seq: &PulseSequence,
        sys: &SpinSystem,
        mode: Mode,
    ) -> Result<Self> {
        self.same_n(seq.n())?;
        seq.check_against(sys)?;
        let mut s = self.clone();
        for e in seq.events() {
            s = match e {
                Event::Pulse(p) => s.apply_pulse(p)?,
                Event::Delay { duration, mode: dm } => {
                    let dm = match mode {
                        Mode::Ideal => *dm,
                        Mode::Realistic => DelayMode::Full,
                    };
                    s.evolve(sys, *duration, dm)?
                }
                Event::Gradient => s.gradient_crush(),
            };
        }
        Ok(s)
    }
}

/// `Σ σ_z`, then `[π/2]_y` on every spin except `keep`, then a gradient:
/// only `σ_z^keep` survives.
pub fn prepare_initial(sys: &SpinSystem, keep: usize) -> Result<DeviationState> {
    let n = sys.n();
    sys.check_spin(keep)?;
    let mut op = OperatorSum::new(n);
    for i in 0..n {
        op.push(&PauliTerm::z_product(n, 1 << i))?;
    }
    let mut s = DeviationState::from_operator_sum(&op)?;
    let others: Vec<usize> = (0..n).filter(|&i| i != keep).collect();
    if !others.is_empty() {
        s = s.apply_pulse(&Pulse::new(others, Axis::Y, FRAC_PI_2))?;
    }
    Ok(s.gradient_crush())
}
