use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::acquisition::{acquire_fid, spectrum, Acquisition, FidSignal, Spectrum};
use super::state::{prepare_initial, DeviationState};
use crate::compiler::{compile_zzz3, refocus, Axis, Mode, Pulse, PulseSequence, SpinSystem};
use crate::error::{Error, Result};

/// The observed and kept spin (the middle of the three-spin chain).
pub const OBSERVED_SPIN: usize = 1;

/// One point of a θ series.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPoint {
    pub theta: f64,
    pub state: DeviationState,
    pub fid: FidSignal,
    pub spectrum: Spectrum,
}

/// `σ_x` on the observed spin: prepare, crush, then `[π/2]_y`.
pub fn excite(sys: &SpinSystem) -> Result<DeviationState> {
    if sys.n() < 3 {
        return Err(Error::SpinOutOfRange {
            spin: 2,
            n: sys.n(),
        });
    }
    prepare_initial(sys, OBSERVED_SPIN)?.apply_pulse(&Pulse::on(OBSERVED_SPIN, Axis::Y, FRAC_PI_2))
}

/// Three-body sequence on spins 1–2–3 with `π J_eff T = θ`, where `J_eff`
/// is the 2–3 coupling. Realistic mode gets Walsh-echo refocused delays.
pub fn theta_sequence(sys: &SpinSystem, theta: f64, mode: Mode) -> Result<PulseSequence> {
    sys.check_spin(2)?;
    let j_eff = sys.coupling(1, 2);
    if j_eff == 0.0 {
        return Err(Error::MissingCoupling { a: 1, b: 2 });
    }
    let seq = compile_zzz3(sys, 0, 1, 2, j_eff, theta / (PI * j_eff))?;
    match mode {
        Mode::Ideal => Ok(seq),
        Mode::Realistic => refocus(&seq),
    }
}

/// Applies `seq` to the excited state and records the observed spin.
pub fn run_sequence(
    sys: &SpinSystem,
    seq: &PulseSequence,
    mode: Mode,
    acq: &Acquisition,
) -> Result<(DeviationState, FidSignal, Spectrum)> {
    let state = excite(sys)?.apply_sequence(seq, sys, mode)?;
    let fid = acquire_fid(&state, sys, OBSERVED_SPIN, acq)?;
    let sp = spectrum(&fid);
    Ok((state, fid, sp))
}

/// Spectra of the observed spin after the three-body evolution, one per θ.
/// Points are independent and computed in parallel; the result order
/// follows `thetas`.
pub fn run_theta_series(
    sys: &SpinSystem,
    thetas: &[f64],
    mode: Mode,
    acq: &Acquisition,
) -> Result<Vec<ThetaPoint>> {
    acq.validate()?;
    thetas
        .par_iter()
        .map(|&theta| {
            let seq = theta_sequence(sys, theta, mode)?;
            let (state, fid, spectrum) = run_sequence(sys, &seq, mode, acq)?;
            Ok(ThetaPoint {
                theta,
                state,
                fid,
                spectrum,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliTerm;

    fn quartet(sys: &SpinSystem) -> [f64; 4] {
        let (a, b) = (sys.coupling(0, 1), sys.coupling(1, 2));
        [-(a + b) / 2.0, -(a - b) / 2.0, (a - b) / 2.0, (a + b) / 2.0]
    }

    #[test]
    fn excitation_gives_transverse_observed_spin() {
        let sys = SpinSystem::alanine();
        let s = excite(&sys).unwrap();
        let x = DeviationState::from_term(&"IXI".parse::<PauliTerm>().unwrap()).unwrap();
        assert!(s.distance(&x).unwrap() < 1e-15);
    }

    #[test]
    fn series_cycle() {
        let sys = SpinSystem::alanine();
        let acq = Acquisition::default();
        let thetas = [0.0, FRAC_PI_2, PI, 2.0 * PI];
        let pts = run_theta_series(&sys, &thetas, Mode::Ideal, &acq).unwrap();
        let w = 8.0;
        let signs = |p: &ThetaPoint| quartet(&sys).map(|f| p.spectrum.line_integral(f, w));
        assert!(signs(&pts[0]).iter().all(|l| l.re > 0.0));
        assert!(signs(&pts[2]).iter().all(|l| l.re < 0.0));
        let anti = signs(&pts[1]);
        let pattern: Vec<bool> = anti.iter().map(|l| l.im > 0.0).collect();
        assert_eq!(pattern, [true, false, false, true]);
        let i0 = pts[0].spectrum.integral().re;
        assert!(pts[1].spectrum.integral().re.abs() <= 1e-6 * i0);
        assert!(pts[3].spectrum.rms_distance(&pts[0].spectrum).unwrap() <= 1e-6);
    }

    #[test]
    fn parallel_series_is_deterministic() {
        let sys = SpinSystem::alanine();
        let acq = Acquisition {
            npoints: 256,
            ..Acquisition::default()
        };
        let thetas: Vec<f64> = (0..12).map(|k| k as f64 * 0.4).collect();
        let a = run_theta_series(&sys, &thetas, Mode::Ideal, &acq).unwrap();
        let b: Vec<ThetaPoint> = thetas
            .iter()
            .map(|&t| {
                run_theta_series(&sys, &[t], Mode::Ideal, &acq)
                    .unwrap()
                    .remove(0)
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn realistic_refocused_series_matches_ideal() {
        let sys = SpinSystem::alanine();
        let acq = Acquisition {
            npoints: 256,
            ..Acquisition::default()
        };
        let ideal = run_theta_series(&sys, &[1.1], Mode::Ideal, &acq).unwrap();
        let real = run_theta_series(&sys, &[1.1], Mode::Realistic, &acq).unwrap();
        assert!(ideal[0].state.distance(&real[0].state).unwrap() < 1e-9);
    }

    #[test]
    fn needs_three_spins() {
        let sys = SpinSystem::linear_chain(2, 10.0).unwrap();
        assert!(run_theta_series(&sys, &[0.0], Mode::Ideal, &Acquisition::default()).is_err());
    }
}
