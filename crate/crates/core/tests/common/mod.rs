#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;
use spinsim::pauli::{Pauli, PauliTerm};

pub type CMatrix = Array2<Complex64>;

/// `exp(a)` by scaling and squaring with a Taylor kernel; no structure of
/// `a` is assumed.
pub fn expm(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let norm1 = (0..d)
        .map(|c| a.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm1 / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let scaled = a.mapv(|z| z / f64::powi(2.0, s));
    let mut term = Array2::<Complex64>::eye(d);
    let mut sum = term.clone();
    for k in 1..=24 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    sum
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn random_term(rng: &mut StdRng, n: usize) -> PauliTerm {
    let f = (0..n)
        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])
        .collect();
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    PauliTerm::new(f, Complex64::new(sign, 0.0))
}
