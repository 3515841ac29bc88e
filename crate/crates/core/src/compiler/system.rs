use std::f64::consts::PI;

use crate::dense::{check_spins, dim};
use crate::error::{Error, Result};

/// A weakly coupled spin system:
/// `H = Σ_i (ω_i/2) σ_z^i + Σ_{i<j} (π J_ij/2) σ_z^i σ_z^j` with ħ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    names: Vec<String>,
    /// rad/s
    offsets: Vec<f64>,
    /// Hz, symmetric n×n, zero diagonal
    couplings: Vec<f64>,
    /// Hz; an edge exists iff |J| > threshold
    threshold: f64,
}

impl SpinSystem {
    pub fn new(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(Self {
            names: (1..=n).map(|i| i.to_string()).collect(),
            offsets: vec![0.0; n],
            couplings: vec![0.0; n * n],
            threshold: 0.0,
        })
    }

    /// ¹³C-labelled alanine: C′ (1), Cα (2), Cβ (3), transmitter on Cα.
    pub fn alanine() -> Self {
        let mut s = Self::new(3).expect("3 spins");
        s.names = vec!["C'".into(), "CA".into(), "CB".into()];
        s.offsets = [12_580.0, 0.0, -3_443.0]
            .iter()
            .map(|hz| 2.0 * PI * hz)
            .collect();
        s.set_coupling(0, 1, 54.2).unwrap();
        s.set_coupling(1, 2, 35.1).unwrap();
        s.set_coupling(0, 2, 1.2).unwrap();
        s
    }

    /// Nearest-neighbour chain with uniform coupling and zero offsets.
    pub fn linear_chain(n: usize, j_hz: f64) -> Result<Self> {
        let mut s = Self::new(n)?;
        for i in 1..n {
            s.set_coupling(i - 1, i, j_hz)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn check_spin(&self, spin: usize) -> Result<()> {
        if spin >= self.n() {
            return Err(Error::SpinOutOfRange { spin, n: self.n() });
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn set_name(&mut self, spin: usize, name: impl Into<String>) -> Result<()> {
        self.check_spin(spin)?;
        self.names[spin] = name.into();
        Ok(())
    }

    /// Offset in rad/s.
    pub fn offset(&self, spin: usize) -> f64 {
        self.offsets[spin]
    }

    pub fn offset_hz(&self, spin: usize) -> f64 {
        self.offsets[spin] / (2.0 * PI)
    }

    pub fn set_offset_hz(&mut self, spin: usize, hz: f64) -> Result<()> {
        self.check_spin(spin)?;
        self.offsets[spin] = 2.0 * PI * hz;
        Ok(())
    }

    /// J_ij in Hz.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n() + j]
    }

    pub fn set_coupling(&mut self, i: usize, j: usize, hz: f64) -> Result<()> {
        self.check_spin(i)?;
        self.check_spin(j)?;
        if i == j {
            return Err(Error::DuplicateSpin { spin: i });
        }
        let n = self.n();
        self.couplings[i * n + j] = hz;
        self.couplings[j * n + i] = hz;
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn set_threshold(&mut self, hz: f64) {
        self.threshold = hz.abs();
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && i < self.n() && j < self.n() && self.coupling(i, j).abs() > self.threshold
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.has_edge(i, j))
    }

    /// Coupled pairs (i < j) with nonzero J, regardless of the routing threshold.
    pub fn coupled_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.coupling(i, j) != 0.0)
    }

    /// Diagonal of the internal Hamiltonian (rad/s) with every offset shifted
    /// by `-reference` rad/s.
    pub fn internal_energies_in_frame(&self, reference: f64) -> Vec<f64> {
        let n = self.n();
        let z = |k: usize, i: usize| if k >> i & 1 == 0 { 1.0 } else { -1.0 };
        (0..dim(n))
            .map(|k| {
                let zeeman: f64 = (0..n)
                    .map(|i| 0.5 * (self.offsets[i] - reference) * z(k, i))
                    .sum();
                let scalar: f64 = self
                    .coupled_pairs()
                    .map(|(i, j)| 0.5 * PI * self.coupling(i, j) * z(k, i) * z(k, j))
                    .sum();
                zeeman + scalar
            })
            .collect()
    }

    /// Diagonal of the internal Hamiltonian (rad/s).
    pub fn internal_energies(&self) -> Vec<f64> {
        self.internal_energies_in_frame(0.0)
    }

    /// Diagonal of `(π J_ij / 2) σ_z^i σ_z^j` (rad/s).
    pub fn coupling_energies(&self, i: usize, j: usize) -> Vec<f64> {
        let w = 0.5 * PI * self.coupling(i, j);
        (0..dim(self.n()))
            .map(|k| {
                if ((k >> i) ^ (k >> j)) & 1 == 0 {
                    w
                } else {
                    -w
                }
            })
            .collect()
    }
}
