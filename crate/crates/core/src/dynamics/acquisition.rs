use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::state::DeviationState;
use crate::compiler::SpinSystem;
use crate::dense::ZERO;
use crate::error::{Error, Result};

/// Sampling parameters of one acquisition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Acquisition {
    /// power of two
    pub npoints: usize,
    /// seconds
    pub dwell: f64,
    /// Hz; exponential apodization `exp(−π·lw·t)`, 0 disables it
    pub linewidth: f64,
}

impl Default for Acquisition {
    fn default() -> Self {
        Self {
            npoints: 4096,
            dwell: 1e-3,
            linewidth: 1.0,
        }
    }
}

impl Acquisition {
    pub fn validate(&self) -> Result<()> {
        if self.npoints == 0 || !self.npoints.is_power_of_two() {
            return Err(Error::Sampling(format!(
                "point count {} is not a power of two",
                self.npoints
            )));
        }
        if !(self.dwell.is_finite() && self.dwell > 0.0) {
            return Err(Error::Sampling(format!(
                "dwell {} must be positive",
                self.dwell
            )));
        }
        if !(self.linewidth.is_finite() && self.linewidth >= 0.0) {
            return Err(Error::Sampling(format!(
                "linewidth {} must be nonnegative",
                self.linewidth
            )));
        }
        Ok(())
    }

    /// Hz.
    pub fn spectral_width(&self) -> f64 {
        1.0 / self.dwell
    }

    /// Hz per spectrum point.
    pub fn resolution(&self) -> f64 {
        1.0 / (self.npoints as f64 * self.dwell)
    }
}

/// One transition of the observed spin: `s(t) ∋ amplitude · exp(2πi·freq·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    /// Hz, in the rotating frame of the observed spin
    pub freq: f64,
    pub amplitude: Complex64,
}

/// The observable transitions of `observe` in `state`, under the full
/// internal Hamiltonian in the observed spin's rotating frame.
///
/// With `O = σ_x + iσ_y = 2|0⟩⟨1|` on the observed spin, `Tr(ρ(t)O)/2ⁿ`
/// collects `2ρ_rc/2ⁿ · exp(i(E_c − E_r)t)` over `r = c | bit`.
pub fn fid_lines(state: &DeviationState, sys: &SpinSystem, observe: usize) -> Result<Vec<Line>> {
    if state.n() != sys.n() {
        return Err(Error::DimensionMismatch {
            left: sys.n(),
            right: state.n(),
        });
    }
    sys.check_spin(observe)?;
    let e = sys.internal_energies_in_frame(sys.offset(observe));
    let bit = 1usize << observe;
    let rho = state.matrix();
    let scale = 2.0 / rho.nrows() as f64;
    Ok((0..rho.nrows())
        .filter(|c| c & bit == 0)
        .map(|c| {
            let r = c | bit;
            Line {
                freq: (e[c] - e[r]) / (2.0 * PI),
                amplitude: rho[[r, c]] * scale,
            }
        })
        .collect())
}

/// Uniformly sampled complex free-induction decay.
#[derive(Debug, Clone, PartialEq)]
pub struct FidSignal {
    dwell: f64,
    samples: Vec<Complex64>,
    observe: usize,
}

impl FidSignal {
    pub fn new(dwell: f64, samples: Vec<Complex64>, observe: usize) -> Result<Self> {
        Acquisition {
            npoints: samples.len(),
            dwell,
            linewidth: 0.0,
        }
        .validate()?;
        Ok(Self {
            dwell,
            samples,
            observe,
        })
    }

    pub fn dwell(&self) -> f64 {
        self.dwell
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn observe(&self) -> usize {
        self.observe
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(|m| m as f64 * self.dwell)
    }
}

/// Samples `Tr(ρ(t)(σ_x + iσ_y))/2ⁿ` on the observed spin, apodized.
pub fn acquire_fid(
    state: &DeviationState,
    sys: &SpinSystem,
    observe: usize,
    acq: &Acquisition,
) -> Result<FidSignal> {
    acq.validate()?;
    let lines: Vec<Line> = fid_lines(state, sys, observe)?
        .into_iter()
        .filter(|l| l.amplitude != ZERO)
        .collect();
    let samples = (0..acq.npoints)
        .map(|m| {
            let t = m as f64 * acq.dwell;
            let s: Complex64 = lines
                .iter()
                .map(|l| l.amplitude * Complex64::from_polar(1.0, 2.0 * PI * l.freq * t))
                .sum();
            s * (-PI * acq.linewidth * t).exp()
        })
        .collect();
    FidSignal::new(acq.dwell, samples, observe)
}

/// Discrete spectrum on a centred frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    freqs: Vec<f64>,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Hz between points.
    pub fn bin_width(&self) -> f64 {
        self.freqs.get(1).map_or(0.0, |f| f - self.freqs[0])
    }

    /// `Σ_k S_k`, which equals `N·s(0)` for an unnormalized transform.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Sum of the points within `half_width` Hz of `center`.
    pub fn line_integral(&self, center: f64, half_width: f64) -> Complex64 {
        self.freqs
            .iter()
            .zip(&self.values)
            .filter(|(f, _)| (*f - center).abs() <= half_width)
            .map(|(_, v)| v)
            .sum()
    }

    /// Frequency of the point with the largest magnitude.
    pub fn peak(&self) -> f64 {
        let k = (0..self.values.len())
            .max_by(|&a, &b| self.values[a].norm().total_cmp(&self.values[b].norm()))
            .unwrap_or(0);
        self.freqs[k]
    }

    /// Root-mean-square pointwise difference.
    pub fn rms_distance(&self, other: &Spectrum) -> Result<f64> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                len: other.len(),
                n: self.len(),
            });
        }
        let sq: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sq / self.len().max(1) as f64).sqrt())
    }
}

/// Unnormalized forward FFT, shifted so 0 Hz sits at index `N/2`.
/// `S_k = Σ_m s_m exp(−2πi·km/N)`, so `Σ|S|² = N·Σ|s|²`.
pub fn spectrum(fid: &FidSignal) -> Spectrum {
    let n = fid.len();
    let mut buf = fid.samples.clone();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);
    buf.rotate_right(n / 2);
    let df = 1.0 / (n as f64 * fid.dwell);
    let freqs = (0..n).map(|k| (k as f64 - (n / 2) as f64) * df).collect();
    Spectrum { freqs, values: buf }
}
