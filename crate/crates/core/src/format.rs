//! Line-oriented text formats for vectors, spin systems, targets, pulse
//! sequences and sampled data.
//!
//! Blank lines and `#` comments are ignored everywhere. Spins are
//! one-based in every file. Numbers are written with 12 significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::compiler::{
    Axis, DelayMode, Event, Pulse, PulseSequence, SpinSystem, TargetHamiltonian,
};
use crate::dynamics::{FidSignal, Spectrum};
use crate::eigenmap::{CoefficientVector, EnergyVector};
use crate::error::{Error, Result};

/// 12 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    // normalise −0 so identical values always print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Non-empty, comment-stripped lines with their one-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    })
}

fn num<T: FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{s}'")))
}

fn finite(line: usize, what: &str, s: &str) -> Result<f64> {
    let x: f64 = num(line, what, s)?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("{what} '{s}' is not finite")));
    }
    Ok(x)
}

/// One-based spin label → zero-based index.
fn spin(line: usize, s: &str, n: usize) -> Result<usize> {
    let k: usize = num(line, "spin", s)?;
    if k == 0 || k > n {
        return Err(Error::parse(line, format!("spin {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

fn spin_list(line: usize, s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',').map(|t| spin(line, t.trim(), n)).collect()
}

fn fields<const N: usize>(line: usize, l: &str, usage: &str) -> Result<[String; N]> {
    let v: Vec<String> = l.split_whitespace().map(str::to_owned).collect();
    v.try_into()
        .map_err(|_| Error::parse(line, format!("expected '{usage}'")))
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

/// `n=<spins>`.
fn header_n(line: usize, l: &str) -> Result<usize> {
    let v = l
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(line, "expected header 'n=<spins>'"))?;
    num(line, "spin count", v)
}

/// Either side of the eigenenergy/coefficient transcoding.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagonalVector {
    Xi(EnergyVector),
    Alpha(CoefficientVector),
}

impl DiagonalVector {
    pub fn kind(&self) -> &'static str {
        match self {
            DiagonalVector::Xi(_) => "xi",
            DiagonalVector::Alpha(_) => "alpha",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            DiagonalVector::Xi(v) => v.n(),
            DiagonalVector::Alpha(v) => v.n(),
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            DiagonalVector::Xi(v) => v.values(),
            DiagonalVector::Alpha(v) => v.values(),
        }
    }

    /// The other representation.
    pub fn converted(&self) -> DiagonalVector {
        match self {
            DiagonalVector::Xi(v) => DiagonalVector::Alpha(crate::eigenmap::alpha_from_xi(v)),
            DiagonalVector::Alpha(v) => DiagonalVector::Xi(crate::eigenmap::xi_from_alpha(v)),
        }
    }
}

/// Header `n=<spins> kind=<xi|alpha>` followed by `2ⁿ` values in index order.
pub fn parse_vector(text: &str) -> Result<DiagonalVector> {
    let mut it = lines(text);
    let (hl, header) = it
        .next()
        .ok_or_else(|| Error::parse(1, "empty vector file"))?;
    let [a, b] = fields::<2>(hl, header, "n=<spins> kind=<xi|alpha>")?;
    let n = header_n(hl, &a)?;
    let kind = b
        .strip_prefix("kind=")
        .ok_or_else(|| Error::parse(hl, "expected 'kind=<xi|alpha>'"))?
        .to_owned();
    if kind != "xi" && kind != "alpha" {
        return Err(Error::parse(hl, format!("unknown kind '{kind}'")));
    }
    let mut values = Vec::new();
    let mut last = hl;
    for (ln, l) in it {
        values.push(finite(ln, "value", l)?);
        last = ln;
    }
    let v = match kind.as_str() {
        "xi" => EnergyVector::new(n, values).map(DiagonalVector::Xi),
        _ => CoefficientVector::new(n, values).map(DiagonalVector::Alpha),
    };
    v.map_err(at_line(last))
}

pub fn write_vector(v: &DiagonalVector) -> String {
    let mut s = format!("n={} kind={}\n", v.n(), v.kind());
    for &x in v.values() {
        s.push_str(&fmt_num(x));
        s.push('\n');
    }
    s
}

/// `spin <i> <name> <offset_hz>`, `J <i> <j> <hz>` and `threshold <hz>`.
/// Spins must be numbered 1..n without gaps.
pub fn parse_spin_system(text: &str) -> Result<SpinSystem> {
    let mut spins: Vec<(usize, usize, String, f64)> = Vec::new();
    let mut couplings = Vec::new();
    let mut threshold = None;
    for (ln, l) in lines(text) {
        let key = l.split_whitespace().next().unwrap_or("");
        match key {
            "spin" => {
                let [_, i, name, off] = fields::<4>(ln, l, "spin <i> <name> <offset_hz>")?;
                let i: usize = num(ln, "spin", &i)?;
                spins.push((ln, i, name, finite(ln, "offset", &off)?));
            }
            "J" => {
                let [_, i, j, hz] = fields::<4>(ln, l, "J <i> <j> <hz>")?;
                couplings.push((ln, i, j, finite(ln, "coupling", &hz)?));
            }
            "threshold" => {
                let [_, hz] = fields::<2>(ln, l, "threshold <hz>")?;
                if threshold
                    .replace((ln, finite(ln, "threshold", &hz)?))
                    .is_some()
                {
                    return Err(Error::parse(ln, "threshold given twice"));
                }
            }
            other => return Err(Error::parse(ln, format!("unknown key '{other}'"))),
        }
    }
    let n = spins.len();
    if n == 0 {
        return Err(Error::parse(1, "no spins declared"));
    }
    let mut sys = SpinSystem::new(n).map_err(at_line(spins[n - 1].0))?;
    let mut seen = vec![false; n];
    for (ln, i, name, off) in spins {
        if i == 0 || i > n {
            return Err(Error::parse(ln, format!("spin {i} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[i - 1], true) {
            return Err(Error::parse(ln, format!("spin {i} declared twice")));
        }
        sys.set_name(i - 1, name).map_err(at_line(ln))?;
        sys.set_offset_hz(i - 1, off).map_err(at_line(ln))?;
    }
    let mut seen_pair = std::collections::BTreeSet::new();
    for (ln, i, j, hz) in couplings {
        let (a, b) = (spin(ln, &i, n)?, spin(ln, &j, n)?);
        if !seen_pair.insert((a.min(b), a.max(b))) {
            return Err(Error::parse(ln, format!("coupling {i}-{j} given twice")));
        }
        sys.set_coupling(a, b, hz).map_err(at_line(ln))?;
    }
    if let Some((_, t)) = threshold {
        sys.set_threshold(t);
    }
    Ok(sys)
}

pub fn write_spin_system(sys: &SpinSystem) -> String {
    let mut s = String::new();
    for i in 0..sys.n() {
        let _ = writeln!(
            s,
            "spin {} {} {}",
            i + 1,
            sys.names()[i],
            fmt_num(sys.offset_hz(i))
        );
    }
    for (i, j) in sys.coupled_pairs() {
        let _ = writeln!(s, "J {} {} {}", i + 1, j + 1, fmt_num(sys.coupling(i, j)));
    }
    if sys.threshold() != 0.0 {
        let _ = writeln!(s, "threshold {}", fmt_num(sys.threshold()));
    }
    s
}

/// `time <seconds>` once, then any number of `term <spins> <j_eff_hz>`
/// lines, each adding `(π J_eff/2)·Π σ_z` over the comma-separated spins.
pub fn parse_target(text: &str, n: usize) -> Result<TargetHamiltonian> {
    let mut time = None;
    let mut terms = Vec::new();
    for (ln, l) in lines(text) {
        let key = l.split_whitespace().next().unwrap_or("");
        match key {
            "time" => {
                let [_, t] = fields::<2>(ln, l, "time <seconds>")?;
                if time.replace(finite(ln, "time", &t)?).is_some() {
                    return Err(Error::parse(ln, "time given twice"));
                }
            }
            "term" => {
                let [_, spins, j] = fields::<3>(ln, l, "term <spins> <j_eff_hz>")?;
                terms.push((ln, spin_list(ln, &spins, n)?, finite(ln, "coupling", &j)?));
            }
            other => return Err(Error::parse(ln, format!("unknown key '{other}'"))),
        }
    }
    let time = time.ok_or_else(|| Error::parse(1, "missing 'time <seconds>'"))?;
    let mut t = TargetHamiltonian::new(n, time);
    for (ln, spins, j) in terms {
        t.add_term(&spins, j).map_err(at_line(ln))?;
    }
    Ok(t)
}

pub fn write_target(t: &TargetHamiltonian) -> String {
    let mut s = format!("time {}\n", fmt_num(t.time()));
    for term in t.terms() {
        let spins: Vec<String> = (0..t.n())
            .filter(|i| term.mask >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        let _ = writeln!(s, "term {} {}", spins.join(","), fmt_num(term.j_eff));
    }
    s
}

/// Header `n=<spins>`, then `P <spins> <axis> <angle>`,
/// `D <seconds> <i> <j>`, `D <seconds> FULL` or `G`.
pub fn parse_sequence(text: &str) -> Result<PulseSequence> {
    let mut it = lines(text);
    let (hl, header) = it
        .next()
        .ok_or_else(|| Error::parse(1, "empty sequence file"))?;
    let n = header_n(hl, header)?;
    if n == 0 {
        return Err(Error::parse(hl, "spin count must be at least 1"));
    }
    let mut seq = PulseSequence::new(n);
    for (ln, l) in it {
        let key = l.split_whitespace().next().unwrap_or("");
        let event = match key {
            "P" => {
                let [_, spins, axis, angle] = fields::<4>(ln, l, "P <spins> <axis> <angle>")?;
                let axis = Axis::from_label(&axis)
                    .ok_or_else(|| Error::parse(ln, format!("unknown axis '{axis}'")))?;
                Event::Pulse(Pulse::new(
                    spin_list(ln, &spins, n)?,
                    axis,
                    finite(ln, "angle", &angle)?,
                ))
            }
            "D" => {
                let v: Vec<&str> = l.split_whitespace().collect();
                match v.as_slice() {
                    [_, t, "FULL"] => Event::Delay {
                        duration: finite(ln, "duration", t)?,
                        mode: DelayMode::Full,
                    },
                    [_, t, i, j] => {
                        Event::delay(finite(ln, "duration", t)?, spin(ln, i, n)?, spin(ln, j, n)?)
                    }
                    _ => return Err(Error::parse(ln, "expected 'D <seconds> <i> <j>|FULL'")),
                }
            }
            "G" if l == "G" => Event::Gradient,
            _ => return Err(Error::parse(ln, format!("unknown event '{l}'"))),
        };
        seq.push(event).map_err(at_line(ln))?;
    }
    Ok(seq)
}

pub fn write_sequence(seq: &PulseSequence) -> String {
    let mut s = format!("n={}\n", seq.n());
    for e in seq.events() {
        match e {
            Event::Pulse(p) => {
                let spins: Vec<String> = p.spins.iter().map(|i| (i + 1).to_string()).collect();
                let _ = writeln!(
                    s,
                    "P {} {} {}",
                    spins.join(","),
                    p.axis.label(),
                    fmt_num(p.angle)
                );
            }
            Event::Delay {
                duration,
                mode: DelayMode::Coupling(i, j),
            } => {
                let _ = writeln!(s, "D {} {} {}", fmt_num(*duration), i + 1, j + 1);
            }
            Event::Delay {
                duration,
                mode: DelayMode::Full,
            } => {
                let _ = writeln!(s, "D {} FULL", fmt_num(*duration));
            }
            Event::Gradient => s.push_str("G\n"),
        }
    }
    s
}

/// `freq_hz,real,imag`.
pub fn spectrum_csv(sp: &Spectrum) -> String {
    let mut s = String::from("freq_hz,real,imag\n");
    for (f, v) in sp.freqs().iter().zip(sp.values()) {
        let _ = writeln!(s, "{},{},{}", fmt_num(*f), fmt_num(v.re), fmt_num(v.im));
    }
    s
}

/// `t_s,real,imag`.
pub fn fid_csv(fid: &FidSignal) -> String {
    let mut s = String::from("t_s,real,imag\n");
    for (t, v) in fid.times().zip(fid.samples()) {
        let _ = writeln!(s, "{},{},{}", fmt_num(t), fmt_num(v.re), fmt_num(v.im));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_zzz3;
    use std::f64::consts::PI;

    fn parse_err(r: Result<impl std::fmt::Debug>) -> (usize, String) {
        match r {
            Err(Error::Parse { line, message }) => (line, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(-0.0), "0.00000000000e0");
        assert_eq!(fmt_num(54.2), "5.42000000000e1");
        assert_eq!(fmt_num(PI / 2.0), "1.57079632679e0");
    }

    #[test]
    fn vector_round_trip() {
        let text = "n=2 kind=alpha\n0\n1.5\n# comment\n\n-2\n0.25\n";
        let v = parse_vector(text).unwrap();
        assert_eq!(v.values(), &[0.0, 1.5, -2.0, 0.25]);
        assert_eq!(parse_vector(&write_vector(&v)).unwrap(), v);
    }

    #[test]
    fn vector_errors_carry_line_numbers() {
        assert_eq!(parse_err(parse_vector("n=2 kind=beta\n")).0, 1);
        assert_eq!(parse_err(parse_vector("n=1 kind=xi\n1\nfoo\n")).0, 3);
        let (line, msg) = parse_err(parse_vector("n=2 kind=xi\n1\n2\n3\n"));
        assert_eq!(line, 4);
        assert!(msg.contains("length"), "{msg}");
        assert_eq!(parse_err(parse_vector("kind=xi n=2\n")).0, 1);
        assert_eq!(parse_err(parse_vector("n=1 kind=xi\n1\ninf\n")).0, 3);
    }

    #[test]
    fn spin_system_round_trip() {
        let mut sys = SpinSystem::alanine();
        sys.set_threshold(2.0);
        let text = write_spin_system(&sys);
        assert_eq!(parse_spin_system(&text).unwrap(), sys);
    }

    #[test]
    fn spin_system_errors() {
        assert_eq!(parse_err(parse_spin_system("spin 1 A 0\nfoo 1\n")).0, 2);
        assert_eq!(
            parse_err(parse_spin_system("spin 1 A 0\nspin 1 B 0\n")).0,
            2
        );
        assert_eq!(
            parse_err(parse_spin_system("spin 1 A 0\nspin 3 B 0\n")).0,
            2
        );
        assert_eq!(
            parse_err(parse_spin_system("spin 1 A 0\nspin 2 B 0\nJ 1 3 5\n")).0,
            3
        );
        assert_eq!(
            parse_err(parse_spin_system("spin 1 A 0\nspin 2 B 0\nJ 1 1 5\n")).0,
            3
        );
        assert_eq!(parse_err(parse_spin_system("spin 1 A x\n")).0, 1);
        assert_eq!(parse_err(parse_spin_system("# nothing\n")).0, 1);
    }

    #[test]
    fn target_round_trip_and_errors() {
        let mut t = TargetHamiltonian::new(3, 0.0125);
        t.add_term(&[0, 1, 2], 35.1).unwrap();
        t.add_term(&[1], -3.0).unwrap();
        assert_eq!(parse_target(&write_target(&t), 3).unwrap(), t);
        assert_eq!(parse_err(parse_target("term 1,2 5\n", 3)).0, 1);
        assert_eq!(parse_err(parse_target("time 1\nterm 1,4 5\n", 3)).0, 2);
        assert_eq!(parse_err(parse_target("time 1\nterm 1,1 5\n", 3)).0, 2);
        assert_eq!(parse_err(parse_target("time 1\nbogus\n", 3)).0, 2);
    }

    #[test]
    fn sequence_round_trip() {
        let sys = SpinSystem::alanine();
        let mut seq = compile_zzz3(&sys, 0, 1, 2, 35.1, 0.01).unwrap();
        seq.push(Event::Gradient).unwrap();
        seq.push(Event::Delay {
            duration: 0.5,
            mode: DelayMode::Full,
        })
        .unwrap();
        seq.push(Event::Pulse(Pulse::new(vec![0, 2], Axis::MinusZ, -1.0)))
            .unwrap();
        let text = write_sequence(&seq);
        let back = parse_sequence(&text).unwrap();
        assert_eq!(write_sequence(&back), text);
        assert_eq!(back.len(), seq.len());
    }

    #[test]
    fn sequence_errors() {
        assert_eq!(parse_err(parse_sequence("P 1 x 1\n")).0, 1);
        assert_eq!(parse_err(parse_sequence("n=2\nP 1 q 1\n")).0, 2);
        assert_eq!(parse_err(parse_sequence("n=2\nD 1 1\n")).0, 2);
        assert_eq!(parse_err(parse_sequence("n=2\nD -1 1 2\n")).0, 2);
        assert_eq!(parse_err(parse_sequence("n=2\nG\nP 3 x 1\n")).0, 3);
        assert_eq!(parse_err(parse_sequence("n=2\nP 1 x 9\n")).0, 2);
        assert_eq!(parse_err(parse_sequence("n=2\nG G\n")).0, 2);
    }
}
