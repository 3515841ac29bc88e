//! Product operators: tensor products of single-spin Pauli factors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use crate::dense::{self, check_spins, CMatrix, DenseUnitary, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Single-spin Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// `self · other = i^k · result`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub(crate) fn matrix(self) -> dense::Local2 {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// A complex coefficient times a Pauli string, one factor per spin.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    factors: Vec<Pauli>,
    coeff: Complex64,
}

impl PauliTerm {
    pub fn new(factors: Vec<Pauli>, coeff: Complex64) -> Self {
        Self { factors, coeff }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n], ONE)
    }

    /// A single factor on `spin` (zero-based), identity elsewhere.
    pub fn single(n: usize, spin: usize, p: Pauli) -> Result<Self> {
        Self::sparse(n, &[(spin, p)])
    }

    /// Factors given as `(spin, pauli)` pairs; unlisted spins are identity.
    pub fn sparse(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut f = vec![Pauli::I; n];
        for &(spin, p) in factors {
            if spin >= n {
                return Err(Error::SpinOutOfRange { spin, n });
            }
            f[spin] = p;
        }
        Ok(Self::new(f, ONE))
    }

    /// σ_z on every spin whose bit is set in `mask`.
    pub fn z_product(n: usize, mask: usize) -> Self {
        let f = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Pauli::Z
                } else {
                    Pauli::I
                }
            })
            .collect();
        Self::new(f, ONE)
    }

    pub fn with_coeff(mut self, coeff: impl Into<Complex64>) -> Self {
        self.coeff = coeff.into();
        self
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn x_mask(&self) -> usize {
        mask_of(&self.factors, Pauli::x_bit)
    }

    pub fn z_mask(&self) -> usize {
        mask_of(&self.factors, Pauli::z_bit)
    }

    pub fn is_diagonal(&self) -> bool {
        self.x_mask() == 0
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeff.im.abs() <= tol
    }

    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        pauli_multiply(self, other)
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        check_spins(self.n())?;
        let d = dense::dim(self.n());
        let mut m = Array2::from_elem((d, d), ZERO);
        let (x, z) = (self.x_mask(), self.z_mask());
        let base = self.coeff * i_pow((x & z).count_ones() as u8);
        for c in 0..d {
            let sign = if (z & c).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[[c ^ x, c]] = base * sign;
        }
        Ok(m)
    }
}

fn mask_of(factors: &[Pauli], bit: fn(Pauli) -> bool) -> usize {
    factors
        .iter()
        .enumerate()
        .filter(|(_, &p)| bit(p))
        .fold(0, |m, (i, _)| m | 1 << i)
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)*", self.coeff.re, self.coeff.im)?;
        for p in &self.factors {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// Parses a label such as `"ZYZ"`; the first character is spin 1.
impl FromStr for PauliTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .trim()
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::parse(1, format!("bad Pauli '{c}'"))))
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::NoSpins);
        }
        Ok(Self::new(factors, ONE))
    }
}

/// Product of two Pauli terms, with the phase tracked as a power of i.
pub fn pauli_multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let mut k = 0u8;
    let factors = a
        .factors
        .iter()
        .zip(&b.factors)
        .map(|(&p, &q)| {
            let (dk, r) = p.mul(q);
            k += dk;
            r
        })
        .collect();
    Ok(PauliTerm::new(factors, a.coeff * b.coeff * i_pow(k % 4)))
}

/// `cos θ·1 − i sin θ·P` for a term whose coefficient is ±1.
pub fn exp_pauli(p: &PauliTerm, theta: f64) -> Result<DenseUnitary> {
    let c = p.coeff();
    if c.im.abs() > 1e-12 || (c.re.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::NonInvolutory {
            coeff: format!("{c}"),
        });
    }
    let mut m = p.to_dense()?;
    m.mapv_inplace(|z| z * Complex64::new(0.0, -theta.sin()));
    for k in 0..m.nrows() {
        m[[k, k]] += theta.cos();
    }
    Ok(DenseUnitary::from_matrix_unchecked(p.n(), m))
}

/// Raising/lowering decomposition of one spin factor, σ± = (X ± iY)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ladder {
    I,
    Z,
    Plus,
    Minus,
}

impl Ladder {
    fn order(self) -> i32 {
        match self {
            Ladder::Plus => 1,
            Ladder::Minus => -1,
            _ => 0,
        }
    }

    fn pauli_expansion(self) -> &'static [(Pauli, Complex64)] {
        const HALF: Complex64 = Complex64::new(0.5, 0.0);
        const HALF_I: Complex64 = Complex64::new(0.0, 0.5);
        const NEG_HALF_I: Complex64 = Complex64::new(0.0, -0.5);
        match self {
            Ladder::I => &[(Pauli::I, ONE)],
            Ladder::Z => &[(Pauli::Z, ONE)],
            Ladder::Plus => &[(Pauli::X, HALF), (Pauli::Y, HALF_I)],
            Ladder::Minus => &[(Pauli::X, HALF), (Pauli::Y, NEG_HALF_I)],
        }
    }
}

/// One ladder-operator string of a coherence decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceComponent {
    pub order: i32,
    pub weight: Complex64,
    pub ladders: Vec<Ladder>,
}

impl CoherenceComponent {
    /// Expands the ladder string back into Pauli terms.
    pub fn to_operator_sum(&self) -> OperatorSum {
        let n = self.ladders.len();
        let mut acc = vec![(Vec::with_capacity(n), self.weight)];
        for l in &self.ladders {
            acc = acc
                .into_iter()
                .flat_map(|(f, w)| {
                    l.pauli_expansion().iter().map(move |&(p, c)| {
                        let mut f = f.clone();
                        f.push(p);
                        (f, w * c)
                    })
                })
                .collect();
        }
        let mut sum = OperatorSum::new(n);
        for (f, w) in acc {
            sum.add_unchecked(f, w);
        }
        sum
    }
}

/// Splits every X/Y factor into raising and lowering parts:
/// X = σ₊ + σ₋, Y = −iσ₊ + iσ₋. Weights re-sum to the original term.
pub fn coherence_orders(p: &PauliTerm) -> Vec<CoherenceComponent> {
    let mut out = vec![CoherenceComponent {
        order: 0,
        weight: p.coeff(),
        ladders: Vec::with_capacity(p.n()),
    }];
    for &f in p.factors() {
        let choices: &[(Ladder, Complex64)] = match f {
            Pauli::I => &[(Ladder::I, ONE)],
            Pauli::Z => &[(Ladder::Z, ONE)],
            Pauli::X => &[(Ladder::Plus, ONE), (Ladder::Minus, ONE)],
            Pauli::Y => &[
                (Ladder::Plus, Complex64::new(0.0, -1.0)),
                (Ladder::Minus, I),
            ],
        };
        out = out
            .into_iter()
            .flat_map(|c| {
                choices.iter().map(move |&(l, w)| {
                    let mut ladders = c.ladders.clone();
                    ladders.push(l);
                    CoherenceComponent {
                        order: c.order + l.order(),
                        weight: c.weight * w,
                        ladders,
                    }
                })
            })
            .collect();
    }
    out
}

/// A canonical sum of Pauli terms over a shared spin count; each factor
/// string appears at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    n: usize,
    terms: BTreeMap<Vec<Pauli>, Complex64>,
}

impl OperatorSum {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<'a>(
        n: usize,
        terms: impl IntoIterator<Item = &'a PauliTerm>,
    ) -> Result<Self> {
        let mut s = Self::new(n);
        for t in terms {
            s.push(t)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: &PauliTerm) -> Result<()> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: t.n(),
            });
        }
        self.add_unchecked(t.factors.clone(), t.coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, factors: Vec<Pauli>, c: Complex64) {
        let e = self.terms.entry(factors).or_insert(ZERO);
        *e += c;
    }

    pub fn coefficient(&self, factors: &[Pauli]) -> Complex64 {
        self.terms.get(factors).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms
            .iter()
            .map(|(f, &c)| PauliTerm::new(f.clone(), c))
    }

    /// Drops entries with |coeff| ≤ tol.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        self.terms.values_mut().for_each(|c| *c *= s);
        self
    }

    pub fn plus(&self, other: &OperatorSum) -> Result<OperatorSum> {
        let mut out = self.clone();
        for t in other.terms() {
            out.push(&t)?;
        }
        Ok(out)
    }

    pub fn times(&self, other: &OperatorSum) -> Result<OperatorSum> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = OperatorSum::new(self.n);
        for a in self.terms() {
            for b in other.terms() {
                out.push(&pauli_multiply(&a, &b)?)?;
            }
        }
        Ok(out)
    }

    /// Every Pauli string is Hermitian, so the sum is iff all coefficients are real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        check_spins(self.n)?;
        let d = dense::dim(self.n);
        let mut m = Array2::from_elem((d, d), ZERO);
        for t in self.terms() {
            m += &t.to_dense()?;
        }
        Ok(m)
    }

    /// Pauli decomposition `Σ_P Tr(P·m)/2ⁿ · P`, dropping |coeff| ≤ tol.
    pub fn from_dense(n: usize, m: &CMatrix, tol: f64) -> Result<Self> {
        check_spins(n)?;
        let d = dense::dim(n);
        if m.dim() != (d, d) {
            return Err(Error::LengthMismatch { len: m.nrows(), n });
        }
        let mut out = Self::new(n);
        for x in 0..d {
            for z in 0..d {
                // Tr(P m) = Σ_c P[c^x, c]·m[c, c^x]
                let phase = i_pow((x & z).count_ones() as u8);
                let mut tr = ZERO;
                for c in 0..d {
                    let sign = if (z & c).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    tr += m[[c, c ^ x]] * sign;
                }
                let coeff = tr * phase / d as f64;
                if coeff.norm() > tol {
                    let factors = (0..n)
                        .map(|i| match (x >> i & 1, z >> i & 1) {
                            (0, 0) => Pauli::I,
                            (1, 0) => Pauli::X,
                            (1, 1) => Pauli::Y,
                            _ => Pauli::Z,
                        })
                        .collect();
                    out.add_unchecked(factors, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Keeps only the coherence components of net order `order`.
    pub fn coherence_filtered(&self, order: i32) -> OperatorSum {
        let mut out = OperatorSum::new(self.n);
        for t in self.terms() {
            for c in coherence_orders(&t)
                .into_iter()
                .filter(|c| c.order == order)
            {
                for u in c.to_operator_sum().terms() {
                    out.add_unchecked(u.factors, u.coeff);
                }
            }
        }
        out.pruned(0.0)
    }
}
