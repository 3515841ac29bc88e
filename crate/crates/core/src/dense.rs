//! Dense 2ⁿ×2ⁿ matrices: the ground-truth realization of every operator.
//!
//! Spin `i` (zero-based) is bit `i` of the basis index, so spin 0 is the
//! least-significant position of the Kronecker product.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest spin count realized densely (1024×1024 complex entries).
pub const MAX_SPINS: usize = 10;

/// Tolerance on ‖U†U − 1‖_F accepted by [`DenseUnitary::from_matrix`].
pub const UNITARITY_TOL: f64 = 1e-12;

pub type CMatrix = Array2<Complex64>;

/// A single-spin 2×2 operator in the {|0⟩ = up, |1⟩ = down} basis.
pub type Local2 = [[Complex64; 2]; 2];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn dim(n: usize) -> usize {
    1usize << n
}

pub(crate) fn check_spins(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoSpins);
    }
    if n > MAX_SPINS {
        return Err(Error::TooManySpins { n, cap: MAX_SPINS });
    }
    Ok(())
}

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(dim(n), ONE)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// `min_φ ‖u − e^{iφ} v‖_F / √dim`, with φ = arg Tr(v†u).
///
/// The difference is formed explicitly; the closed form
/// `sqrt(2d − 2|Tr v†u|)` loses all precision below ~1e-8.
pub fn phase_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    assert_eq!(u.dim(), v.dim(), "phase_distance on mismatched shapes");
    let overlap: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| b.conj() * a).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    let sq: f64 = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum();
    (sq / u.nrows() as f64).sqrt()
}

/// `m ← A_spin · m`, with `A` acting on one spin.
pub fn apply_local_left(m: &mut CMatrix, spin: usize, a: &Local2) {
    let bit = 1usize << spin;
    let d = m.nrows();
    for r0 in (0..d).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        for c in 0..m.ncols() {
            let x0 = m[[r0, c]];
            let x1 = m[[r1, c]];
            m[[r0, c]] = a[0][0] * x0 + a[0][1] * x1;
            m[[r1, c]] = a[1][0] * x0 + a[1][1] * x1;
        }
    }
}

/// `m ← m · B_spin`, with `B` acting on one spin.
pub fn apply_local_right(m: &mut CMatrix, spin: usize, b: &Local2) {
    let bit = 1usize << spin;
    let d = m.ncols();
    for c0 in (0..d).filter(|c| c & bit == 0) {
        let c1 = c0 | bit;
        for r in 0..m.nrows() {
            let x0 = m[[r, c0]];
            let x1 = m[[r, c1]];
            m[[r, c0]] = x0 * b[0][0] + x1 * b[1][0];
            m[[r, c1]] = x0 * b[0][1] + x1 * b[1][1];
        }
    }
}

pub(crate) fn local_adjoint(a: &Local2) -> Local2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// A 2ⁿ×2ⁿ unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    n: usize,
    m: CMatrix,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(Self { n, m: identity(n) })
    }

    /// Wraps `m`, rejecting it unless ‖m†m − 1‖_F ≤ [`UNITARITY_TOL`].
    pub fn from_matrix(n: usize, m: CMatrix) -> Result<Self> {
        check_spins(n)?;
        let d = dim(n);
        if m.dim() != (d, d) {
            return Err(Error::LengthMismatch { len: m.nrows(), n });
        }
        let u = Self { n, m };
        let residual = u.unitarity_residual();
        if residual > UNITARITY_TOL {
            return Err(Error::NonUnitary { residual });
        }
        Ok(u)
    }

    pub(crate) fn from_matrix_unchecked(n: usize, m: CMatrix) -> Self {
        Self { n, m }
    }

    /// `diag(exp(−i·phases[k]))`.
    pub fn from_phases(n: usize, phases: &[f64]) -> Result<Self> {
        check_spins(n)?;
        if phases.len() != dim(n) {
            return Err(Error::LengthMismatch {
                len: phases.len(),
                n,
            });
        }
        let diag = phases.iter().map(|p| Complex64::from_polar(1.0, -p));
        Ok(Self {
            n,
            m: Array2::from_diag(&ndarray::Array1::from_iter(diag)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            m: adjoint(&self.m),
        }
    }

    /// `later · self`: the unitary for applying `self` first, then `later`.
    pub fn then(&self, later: &DenseUnitary) -> Result<Self> {
        if later.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: later.n,
            });
        }
        Ok(Self {
            n: self.n,
            m: later.m.dot(&self.m),
        })
    }

    pub fn unitarity_residual(&self) -> f64 {
        let p = adjoint(&self.m).dot(&self.m) - identity(self.n);
        frobenius(&p)
    }

    pub fn phase_distance(&self, other: &DenseUnitary) -> Result<f64> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(phase_distance(&self.m, &other.m))
    }

    pub(crate) fn apply_local(&mut self, spin: usize, a: &Local2) {
        apply_local_left(&mut self.m, spin, a);
    }

    /// Left-multiplies by `diag(exp(−i·phases[k]))`.
    pub(crate) fn apply_phases(&mut self, phases: &[f64]) {
        for (mut row, &p) in self.m.rows_mut().into_iter().zip(phases) {
            let f = Complex64::from_polar(1.0, -p);
            row.mapv_inplace(|z| z * f);
        }
    }
}
