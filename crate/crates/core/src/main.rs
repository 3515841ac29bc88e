use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spinsim::compiler::{self, Mode, PulseSequence, SpinSystem, TargetHamiltonian};
use spinsim::dynamics::{self, Acquisition};
use spinsim::format::{self, fmt_num};
use spinsim::Error;

#[derive(Parser)]
#[command(
    name = "spinsim",
    version,
    about = "Compile and simulate diagonal spin Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ideal,
    Realistic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Realistic => Mode::Realistic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transcode an eigenenergy (xi) file into coefficients (alpha) or back.
    Convert {
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a target Hamiltonian into a pulse sequence and verify it.
    Compile {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value = "ideal")]
        mode: ModeArg,
        /// Directory for sequence.txt and report.txt; stdout/stderr when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check a sequence file against a target Hamiltonian.
    Verify {
        sequence: PathBuf,
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value = "ideal")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Simulate the spin-2 spectrum after a three-body evolution or a given sequence.
    Simulate {
        #[arg(long)]
        sys: PathBuf,
        /// Comma-separated angles such as `0,pi/2,3pi/2`, or `start:stop:count`.
        #[arg(
            long,
            conflicts_with = "sequence",
            required_unless_present = "sequence"
        )]
        theta: Option<String>,
        /// Sequence file applied after excitation instead of a θ series.
        sequence: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "ideal")]
        mode: ModeArg,
        /// FID points (power of two).
        #[arg(long, default_value_t = 4096)]
        points: usize,
        /// Dwell time in seconds.
        #[arg(long, default_value_t = 1e-3)]
        dwell: f64,
        /// Exponential line broadening in Hz.
        #[arg(long, default_value_t = 1.0)]
        lw: f64,
    },
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::Unroutable { .. } | Error::MissingCoupling { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

/// Parse failures are reported with the file name in front.
fn parsed<T>(path: &Path, r: spinsim::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    };
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", dir.display()),
    })
}

fn load_system(path: &Path) -> Result<SpinSystem, Failure> {
    parsed(path, format::parse_spin_system(&read(path)?))
}

fn load_target(path: &Path, n: usize) -> Result<TargetHamiltonian, Failure> {
    parsed(path, format::parse_target(&read(path)?, n))
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(usage(format!(
            "tolerance {tol} must be finite and nonnegative"
        )));
    }
    Ok(())
}

fn report(seq: &PulseSequence, mode: Mode, distance: f64, tol: f64) -> String {
    let mut s = String::new();
    let mode = match mode {
        Mode::Ideal => "ideal",
        Mode::Realistic => "realistic",
    };
    let _ = writeln!(s, "mode {mode}");
    let _ = writeln!(s, "distance {}", fmt_num(distance));
    let _ = writeln!(s, "tolerance {}", fmt_num(tol));
    let _ = writeln!(
        s,
        "status {}",
        if distance <= tol { "pass" } else { "fail" }
    );
    let _ = writeln!(s, "events {}", seq.len());
    let _ = writeln!(s, "pulses {}", seq.pulse_count());
    let _ = writeln!(s, "delays {}", seq.delay_count());
    let _ = writeln!(s, "total_delay_s {}", fmt_num(seq.total_delay()));
    s
}

fn above_tolerance(distance: f64, tol: f64) -> Result<(), Failure> {
    if distance > tol {
        return Err(Failure {
            code: 3,
            message: format!(
                "distance {} exceeds tolerance {}",
                fmt_num(distance),
                fmt_num(tol)
            ),
        });
    }
    Ok(())
}

/// One angle: a number, or a multiple/fraction of `pi` such as `-3pi/4`, `2*pi`, `pi*0.5`.
fn parse_angle(s: &str) -> Option<f64> {
    let s: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let Some((pre, post)) = s.split_once("pi") else {
        return s.parse().ok().filter(|x: &f64| x.is_finite());
    };
    let pre = pre.strip_suffix('*').unwrap_or(pre);
    let coeff: f64 = match pre {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse().ok()?,
    };
    let factor: f64 = if post.is_empty() {
        1.0
    } else if let Some(d) = post.strip_prefix('/') {
        1.0 / d.parse::<f64>().ok()?
    } else {
        post.strip_prefix('*')?.parse().ok()?
    };
    Some(coeff * PI * factor).filter(|x| x.is_finite())
}

fn parse_thetas(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = |t: &str| usage(format!("invalid angle '{t}'"));
    let parts: Vec<&str> = s.split(':').collect();
    if let [a, b, k] = parts.as_slice() {
        let (a, b) = (
            parse_angle(a).ok_or_else(|| bad(a))?,
            parse_angle(b).ok_or_else(|| bad(b))?,
        );
        let k: usize = k.trim().parse().map_err(|_| bad(k))?;
        return match k {
            0 => Err(usage("angle range needs at least one point")),
            1 => Ok(vec![a]),
            _ => Ok((0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect()),
        };
    }
    s.split(',')
        .map(|t| parse_angle(t).ok_or_else(|| bad(t)))
        .collect()
}

fn convert(input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let v = parsed(input, format::parse_vector(&read(input)?))?;
    let text = format::write_vector(&v.converted());
    match out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn compile(
    sys_path: &Path,
    target_path: &Path,
    mode: Mode,
    out: Option<&Path>,
    tol: f64,
) -> Result<(), Failure> {
    check_tol(tol)?;
    let sys = load_system(sys_path)?;
    let target = load_target(target_path, sys.n())?;
    let mut seq = compiler::compile_hamiltonian(&sys, &target)?;
    if mode == Mode::Realistic {
        seq = compiler::refocus(&seq)?;
    }
    let distance = compiler::verify_compilation(&seq, &sys, &target, mode)?;
    let text = format::write_sequence(&seq);
    let rep = report(&seq, mode, distance, tol);
    match out {
        Some(dir) => {
            ensure_dir(dir)?;
            write_atomic(&dir.join("sequence.txt"), &text)?;
            write_atomic(&dir.join("report.txt"), &rep)?;
        }
        None => {
            print!("{text}");
            eprint!("{rep}");
        }
    }
    above_tolerance(distance, tol)
}

fn verify(
    seq_path: &Path,
    sys_path: &Path,
    target_path: &Path,
    mode: Mode,
    tol: f64,
) -> Result<(), Failure> {
    check_tol(tol)?;
    let sys = load_system(sys_path)?;
    let target = load_target(target_path, sys.n())?;
    let seq = parsed(seq_path, format::parse_sequence(&read(seq_path)?))?;
    let distance = compiler::verify_compilation(&seq, &sys, &target, mode)?;
    print!("{}", report(&seq, mode, distance, tol));
    above_tolerance(distance, tol)
}

struct SimulateArgs<'a> {
    sys: &'a Path,
    theta: Option<&'a str>,
    sequence: Option<&'a Path>,
    out: &'a Path,
    mode: Mode,
    acq: Acquisition,
}

fn simulate(a: SimulateArgs<'_>) -> Result<(), Failure> {
    a.acq.validate().map_err(|e| usage(e.to_string()))?;
    let sys = load_system(a.sys)?;
    match (a.theta, a.sequence) {
        (Some(list), _) => {
            let thetas = parse_thetas(list)?;
            let points = dynamics::run_theta_series(&sys, &thetas, a.mode, &a.acq)?;
            ensure_dir(a.out)?;
            let mut index = String::from("index,theta_rad\n");
            for (k, p) in points.iter().enumerate() {
                let _ = writeln!(index, "{k},{}", fmt_num(p.theta));
                write_atomic(
                    &a.out.join(format!("spectrum_{k:03}.csv")),
                    &format::spectrum_csv(&p.spectrum),
                )?;
                write_atomic(
                    &a.out.join(format!("fid_{k:03}.csv")),
                    &format::fid_csv(&p.fid),
                )?;
            }
            write_atomic(&a.out.join("thetas.csv"), &index)
        }
        (None, Some(path)) => {
            let seq = parsed(path, format::parse_sequence(&read(path)?))?;
            let (_, fid, sp) = dynamics::run_sequence(&sys, &seq, a.mode, &a.acq)?;
            ensure_dir(a.out)?;
            write_atomic(&a.out.join("spectrum.csv"), &format::spectrum_csv(&sp))?;
            write_atomic(&a.out.join("fid.csv"), &format::fid_csv(&fid))
        }
        (None, None) => Err(usage("either --theta or a sequence file is required")),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Convert { input, out } => convert(&input, out.as_deref()),
        Command::Compile {
            sys,
            target,
            mode,
            out,
            tol,
        } => compile(&sys, &target, mode.into(), out.as_deref(), tol),
        Command::Verify {
            sequence,
            sys,
            target,
            mode,
            tol,
        } => verify(&sequence, &sys, &target, mode.into(), tol),
        Command::Simulate {
            sys,
            theta,
            sequence,
            out,
            mode,
            points,
            dwell,
            lw,
        } => simulate(SimulateArgs {
            sys: &sys,
            theta: theta.as_deref(),
            sequence: sequence.as_deref(),
            out: &out,
            mode: mode.into(),
            acq: Acquisition {
                npoints: points,
                dwell,
                linewidth: lw,
            },
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spinsim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
