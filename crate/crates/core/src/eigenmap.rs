//! Eigenenergies ⇄ σ_z-product coefficients of a diagonal Hamiltonian.
//!
//! Simulated eigenstate `k` maps to the Zeeman state `|k⟩`, where bit `i` of
//! `k` is η for spin `i` and ε = 1 − 2η is the σ_z eigenvalue. A diagonal
//! Hamiltonian is then both `Σ_k ξ_k |k⟩⟨k|` and `Σ_j α_j Z^(j)` with `Z^(j)`
//! the product of σ_z over the spins set in mask `j`, related by
//! `ξ = M α` and `α = 2⁻ⁿ Mᵀ ξ` with `M_kj = Π_i (ε_i^k)^(η_i^j)`.

use crate::error::{Error, Result};
use crate::pauli::{OperatorSum, PauliTerm};

/// Largest spin count accepted for vector transcoding.
pub const MAX_TRANSCODE_SPINS: usize = 20;

/// Largest spin count for which the explicit ±1 matrix is built.
pub const MAX_MATRIX_SPINS: usize = 12;

fn check_n(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoSpins);
    }
    if n > cap {
        return Err(Error::TooManySpins { n, cap });
    }
    Ok(())
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k >= 1usize << n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(())
}

/// Binary digits η₁…ηₙ of `k`, spin 1 first.
pub fn eta_of(k: usize, n: usize) -> Result<Vec<u8>> {
    check_n(n, MAX_TRANSCODE_SPINS)?;
    check_index(k, n)?;
    Ok((0..n).map(|i| (k >> i & 1) as u8).collect())
}

/// Spin signs ε₁…εₙ of basis state `k`: +1 where the bit is 0, −1 where 1.
pub fn eps_of(k: usize, n: usize) -> Result<Vec<i8>> {
    Ok(eta_of(k, n)?.into_iter().map(|e| 1 - 2 * e as i8).collect())
}

/// `k = Σ ηᵢ 2^(i−1)`.
pub fn index_of(eta: &[u8]) -> usize {
    eta.iter()
        .enumerate()
        .fold(0, |k, (i, &e)| k | ((e as usize & 1) << i))
}

/// Eigenenergies ξ_k (rad/s) indexed by basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyVector {
    n: usize,
    xi: Vec<f64>,
}

/// σ_z-product coefficients α_j (rad/s) indexed by spin mask; `alpha[0]`
/// is the identity component.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    n: usize,
    alpha: Vec<f64>,
}

fn validate(n: usize, v: &[f64]) -> Result<()> {
    check_n(n, MAX_TRANSCODE_SPINS)?;
    if v.len() != 1usize << n {
        return Err(Error::LengthMismatch { len: v.len(), n });
    }
    if let Some(index) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

impl EnergyVector {
    pub fn new(n: usize, xi: Vec<f64>) -> Result<Self> {
        validate(n, &xi)?;
        Ok(Self { n, xi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.xi
    }
}

impl CoefficientVector {
    pub fn new(n: usize, alpha: Vec<f64>) -> Result<Self> {
        validate(n, &alpha)?;
        Ok(Self { n, alpha })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; 1 << n.min(MAX_TRANSCODE_SPINS)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.alpha
    }

    /// `Σ_j α_j Z^(j)` as a Pauli sum, omitting zero coefficients.
    pub fn to_operator_sum(&self) -> OperatorSum {
        let mut s = OperatorSum::new(self.n);
        for (mask, &a) in self.alpha.iter().enumerate().filter(|(_, &a)| a != 0.0) {
            s.push(&PauliTerm::z_product(self.n, mask).with_coeff(a))
                .expect("matching spin count");
        }
        s
    }
}

/// The ±1 matrix `M_kj = Π_i (ε_i^k)^(η_i^j)`, stored as integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, k: usize, j: usize) -> i8 {
        self.entries[k * self.size() + j]
    }

    pub fn row(&self, k: usize) -> &[i8] {
        let d = self.size();
        &self.entries[k * d..(k + 1) * d]
    }

    /// `M·Mᵀ` in exact integer arithmetic.
    pub fn gram(&self) -> Vec<i64> {
        let d = self.size();
        let mut g = vec![0i64; d * d];
        for k in 0..d {
            for l in 0..d {
                g[k * d + l] = self
                    .row(k)
                    .iter()
                    .zip(self.row(l))
                    .map(|(&a, &b)| (a as i64) * (b as i64))
                    .sum();
            }
        }
        g
    }

    /// `M·v`, straight from the stored entries.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.size())
            .map(|k| self.row(k).iter().zip(v).map(|(&m, &x)| m as f64 * x).sum())
            .collect()
    }
}

pub fn build_m(n: usize) -> Result<HadamardMatrix> {
    check_n(n, MAX_MATRIX_SPINS)?;
    let d = 1usize << n;
    let mut entries = Vec::with_capacity(d * d);
    for k in 0..d {
        let eps = eps_of(k, n)?;
        for j in 0..d {
            let eta = eta_of(j, n)?;
            let m = eps
                .iter()
                .zip(&eta)
                .fold(1i8, |acc, (&e, &h)| if h == 1 { acc * e } else { acc });
            entries.push(m);
        }
    }
    Ok(HadamardMatrix { n, entries })
}

/// In-place unnormalized Walsh–Hadamard transform in natural order, which is
/// multiplication by the symmetric matrix `M`.
fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `ξ = M α`.
pub fn xi_from_alpha(a: &CoefficientVector) -> EnergyVector {
    let mut xi = a.alpha.clone();
    walsh_hadamard(&mut xi);
    EnergyVector { n: a.n, xi }
}

/// `α = 2⁻ⁿ Mᵀ ξ`.
pub fn alpha_from_xi(e: &EnergyVector) -> CoefficientVector {
    let mut alpha = e.xi.clone();
    walsh_hadamard(&mut alpha);
    let scale = 1.0 / (1u64 << e.n) as f64;
    alpha.iter_mut().for_each(|a| *a *= scale);
    CoefficientVector { n: e.n, alpha }
}

/// The idempotent `E_k = Π_i (1 + ε_i^k σ_z^i)/2`, the projector on `|k⟩`.
pub fn projector_ek(k: usize, n: usize) -> Result<OperatorSum> {
    let eps = eps_of(k, n)?;
    let mut acc = OperatorSum::from_terms(n, [&PauliTerm::identity(n)])?;
    for (i, &e) in eps.iter().enumerate() {
        let mut factor = OperatorSum::new(n);
        factor.push(&PauliTerm::identity(n).with_coeff(0.5))?;
        factor.push(&PauliTerm::z_product(n, 1 << i).with_coeff(0.5 * e as f64))?;
        acc = acc.times(&factor)?;
    }
    Ok(acc.pruned(0.0))
}
