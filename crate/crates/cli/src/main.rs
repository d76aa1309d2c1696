//! Command-line front end: configuration ingestion, dispatch to the synthesis
//! library, and deterministic structured output (JSON reports, trajectory CSV).
//!
//! Exit codes: 1 = schema/usage error, 2 = solver failure, 3 = verification
//! (fidelity or equivalence) failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use weylsteer::bangbang::{synthesize_bangbang, HamiltonianPair};
use weylsteer::bloch::euler_zxz;
use weylsteer::pulse1q::{
    design_resonant_perpendicular, design_resonant_rotframe, design_tilted, rotframe_propagator,
    rwa_propagator_perp, rwa_propagator_tilted, schedule_simultaneous_seeded, PulseProgram1Q,
    PulseSegment,
};
use weylsteer::qmath::{gate_fidelity, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use weylsteer::steer2q::{
    plan_isotropic_equal, plan_isotropic_ratio, plan_nonlocal_polyline, plan_weak_cnot,
    simulate_plan, solve_yy_gate, weyl_trajectory, HamiltonianSpec, PlanSegment, SteeringPlan,
    YyTarget,
};
use weylsteer::weyl::{
    canonical_gate, invariants_from_unitary, is_locally_equivalent, weyl_coordinates,
    CouplingMatrix, WeylPoint,
};
use weylsteer::EulerZxz;

const EXIT_SCHEMA: i32 = 1;
const EXIT_SOLVER: i32 = 2;
const EXIT_VERIFY: i32 = 3;

struct Failure {
    code: i32,
    msg: String,
}

type CResult<T> = std::result::Result<T, Failure>;

fn schema(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_SCHEMA, msg: msg.into() }
}

fn verify_fail(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_VERIFY, msg: msg.into() }
}

impl From<weylsteer::Error> for Failure {
    fn from(e: weylsteer::Error) -> Failure {
        let code = match e {
            weylsteer::Error::SolverFailure(_) => EXIT_SOLVER,
            weylsteer::Error::FidelityShortfall { .. } => EXIT_VERIFY,
            _ => EXIT_SCHEMA,
        };
        Failure { code, msg: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "weylsteer", version, about = "Gate synthesis by Bloch-sphere and Weyl-chamber steering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a single-qubit pulse program for a target gate.
    Design1q(Design1qArgs),
    /// Schedule two simultaneous single-qubit programs of equal duration.
    Schedule2local(Schedule2localArgs),
    /// Synthesize a Bang-Bang switching sequence for a single-qubit target.
    Bangbang(BangbangArgs),
    /// Print the local-invariant triple (G1_re, G1_im, G2) of a two-qubit gate.
    Invariants(GateInputArgs),
    /// Print the Weyl-chamber coordinates (c1, c2, c3) of a two-qubit gate.
    Weyl(GateInputArgs),
    /// Test two two-qubit gates for local equivalence.
    Equiv(EquivArgs),
    /// Sample a Hamiltonian flow's chamber trajectory to CSV.
    Traj(ConfigOutArgs),
    /// Run a two-qubit steering strategy from a config file.
    Steer2q(ConfigOutArgs),
    /// Schema-check a config file without running it.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// Named gate (1q: identity, x, y, z, s, hadamard; 2q: cnot, swap, b)
    #[arg(long)]
    gate: Option<String>,
    /// Euler ZXZ angles "theta,phi,gamma"
    #[arg(long)]
    euler: Option<String>,
    /// Matrix file (dimension header, then whitespace-separated re,im pairs row-major)
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Frame {
    Perp,
    Rotframe,
    Tilted,
}

#[derive(Args)]
struct Design1qArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Qubit level splitting (angular frequency)
    #[arg(long)]
    omega0: f64,
    /// Drive amplitude
    #[arg(long)]
    amplitude: f64,
    #[arg(long, value_enum, default_value = "perp")]
    frame: Frame,
    /// Drive tilt angle from the z axis (tilted frame only), radians
    #[arg(long, default_value_t = PI / 3.0)]
    zeta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Schedule2localArgs {
    /// Target for qubit 1, as Euler angles "theta,phi,gamma" or a gate name
    #[arg(long)]
    target1: String,
    /// Target for qubit 2
    #[arg(long)]
    target2: String,
    #[arg(long)]
    omega0_1: f64,
    #[arg(long)]
    omega0_2: f64,
    /// Shared amplitude ceiling
    #[arg(long)]
    amplitude: f64,
    /// Optimizer seed (WEYLSTEER_SEED overrides)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BangbangArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Matrix file for the first (drift) Hamiltonian, must equal a*sz with a > 0
    #[arg(long)]
    h1: PathBuf,
    /// Matrix file for the second Hamiltonian
    #[arg(long)]
    h2: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GateInputArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EquivArgs {
    /// First gate: name or matrix file path
    #[arg(long)]
    a: String,
    /// Second gate: name or matrix file path
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ConfigOutArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file (CSV for traj, JSON report for steer2q)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: PathBuf,
}

// ---------------------------------------------------------------------------
// config schema

#[derive(Deserialize)]
#[serde(untagged)]
enum CouplingCfg {
    Diagonal([f64; 3]),
    Matrix([[f64; 3]; 3]),
}

impl CouplingCfg {
    fn build(&self) -> CResult<CouplingMatrix> {
        Ok(match self {
            CouplingCfg::Diagonal([x, y, z]) => CouplingMatrix::diagonal(*x, *y, *z)?,
            CouplingCfg::Matrix(m) => CouplingMatrix::new(*m)?,
        })
    }
}

#[derive(Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum RunConfig {
    Traj(TrajConfig),
    Steer2q(SteerConfig),
}

#[derive(Deserialize)]
struct TrajConfig {
    #[serde(default)]
    g1: [f64; 3],
    #[serde(default)]
    g2: [f64; 3],
    coupling: CouplingCfg,
    t_max: f64,
    samples: usize,
    /// +1 samples e^{-iHt}, -1 samples e^{+iHt}
    #[serde(default = "default_sign")]
    sign: f64,
}

fn default_sign() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
enum SteerConfig {
    IsotropicEqual { g: [f64; 3], j: f64 },
    IsotropicRatio { g2: [f64; 3], j: f64, m: u32 },
    YyB { j: f64 },
    YyCnot { j: f64 },
    WeakCnot { j: [f64; 3], template: ([f64; 3], [f64; 3]), m: u32 },
    Polyline { target: [f64; 3], j: [f64; 3] },
}

fn load_config(path: &Path) -> CResult<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| schema(format!("config schema error in {}: {e}", path.display())))?;
    if let RunConfig::Traj(t) = &cfg {
        if t.samples < 1 {
            return Err(schema("traj config needs samples >= 1"));
        }
        if !(t.t_max > 0.0) {
            return Err(schema("traj config needs t_max > 0"));
        }
        if t.sign != 1.0 && t.sign != -1.0 {
            return Err(schema("traj config sign must be +1 or -1"));
        }
        t.coupling.build()?;
    }
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// formatting and IO

/// 12 significant digits, plain decimal, trailing zeros trimmed.
fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (11 - exp).clamp(0, 17) as usize;
    let s = format!("{x:.prec$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Round to the printed precision so JSON reports carry the same digits.
fn sig12(x: f64) -> f64 {
    fmt12(x).parse().unwrap_or(x)
}

fn write_atomic(path: &Path, contents: &str) -> CResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| schema(format!("output path {} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!("{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents).map_err(|e| schema(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| schema(format!("cannot move {} into place: {e}", tmp.display())))
}

fn emit(report: &serde_json::Value, out: Option<&PathBuf>) -> CResult<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(report).expect("report serializes"));
    if let Some(path) = out {
        write_atomic(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn read_matrix(path: &Path) -> CResult<UnitaryMatrix> {
    let m = read_complex_matrix(path)?;
    UnitaryMatrix::new(m).map_err(|e| schema(format!("{}: {e}", path.display())))
}

fn read_complex_matrix(path: &Path) -> CResult<ComplexMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read matrix file {}: {e}", path.display())))?;
    let mut nums = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty());
    let dim: usize = nums
        .next()
        .ok_or_else(|| schema(format!("{}: empty matrix file", path.display())))?
        .parse()
        .map_err(|_| schema(format!("{}: first token must be the dimension", path.display())))?;
    if dim != 2 && dim != 4 {
        return Err(schema(format!("{}: dimension must be 2 or 4, got {dim}", path.display())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim * dim {
        let re: f64 = nums
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| schema(format!("{}: bad or missing entry {i}", path.display())))?;
        let im: f64 = nums
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| schema(format!("{}: bad or missing entry {i}", path.display())))?;
        entries.push(C64::new(re, im));
    }
    if nums.next().is_some() {
        return Err(schema(format!("{}: trailing data after {dim}x{dim} entries", path.display())));
    }
    ComplexMatrix::from_rows(dim, &entries).map_err(|e| schema(format!("{}: {e}", path.display())))
}

fn named_gate(name: &str) -> CResult<UnitaryMatrix> {
    let s = 1.0 / 2.0_f64.sqrt();
    let rows2 = |v: [(f64, f64); 4]| {
        let entries: Vec<C64> = v.iter().map(|&(re, im)| C64::new(re, im)).collect();
        UnitaryMatrix::new(ComplexMatrix::from_rows(2, &entries).unwrap()).unwrap()
    };
    Ok(match name.to_ascii_lowercase().as_str() {
        "identity" | "id" => UnitaryMatrix::identity(2),
        "x" => rows2([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        "y" => rows2([(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
        "z" => rows2([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]),
        "s" => rows2([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0)]),
        "hadamard" | "h" => rows2([(s, 0.0), (s, 0.0), (s, 0.0), (-s, 0.0)]),
        "cnot" => permutation4(&[0, 1, 3, 2]),
        "swap" => permutation4(&[0, 2, 1, 3]),
        "b" => canonical_gate([PI / 2.0, PI / 4.0, 0.0]),
        other => return Err(schema(format!("unknown gate name '{other}'"))),
    })
}

fn permutation4(cols: &[usize; 4]) -> UnitaryMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for (row, &col) in cols.iter().enumerate() {
        m[(row, col)] = C64::new(1.0, 0.0);
    }
    UnitaryMatrix::new(m).unwrap()
}

fn parse_triple(text: &str, what: &str) -> CResult<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| schema(format!("{what} must be three comma-separated numbers, got '{text}'")))?;
    if parts.len() != 3 {
        return Err(schema(format!("{what} must have three components, got {}", parts.len())));
    }
    Ok([parts[0], parts[1], parts[2]])
}

impl TargetArgs {
    fn resolve(&self, dim: usize) -> CResult<UnitaryMatrix> {
        let picks =
            self.gate.is_some() as u8 + self.euler.is_some() as u8 + self.matrix.is_some() as u8;
        if picks != 1 {
            return Err(schema("specify exactly one of --gate, --euler, --matrix"));
        }
        let u = if let Some(name) = &self.gate {
            named_gate(name)?
        } else if let Some(angles) = &self.euler {
            let [theta, phi, gamma] = parse_triple(angles, "--euler")?;
            EulerZxz { theta, phi, gamma }.reconstruct()
        } else {
            read_matrix(self.matrix.as_ref().unwrap())?
        };
        if u.dim() != dim {
            return Err(schema(format!("target must be {dim}x{dim}, got {0}x{0}", u.dim())));
        }
        Ok(u)
    }
}

fn resolve_gate_or_path(text: &str, dim: usize) -> CResult<UnitaryMatrix> {
    let u = if Path::new(text).exists() {
        read_matrix(Path::new(text))?
    } else {
        named_gate(text)?
    };
    if u.dim() != dim {
        return Err(schema(format!("gate must be {dim}x{dim}, got {0}x{0}", u.dim())));
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// subcommand runners

fn program_report(p: &PulseProgram1Q, fidelity: f64) -> serde_json::Value {
    let (kinds, durations): (Vec<&str>, Vec<f64>) = p
        .segments
        .iter()
        .map(|s| match s {
            PulseSegment::Driven(t) => ("driven", sig12(*t)),
            PulseSegment::FreeZ(t) => ("free_z", sig12(*t)),
        })
        .unzip();
    serde_json::json!({
        "segments": kinds,
        "durations": durations,
        "parameters": {
            "omega0": sig12(p.spec.omega0),
            "amplitude": sig12(p.spec.amplitude),
            "omega": sig12(p.spec.omega),
            "delta": sig12(p.spec.delta),
            "zeta": sig12(p.spec.zeta),
            "total_time": sig12(p.total_time()),
        },
        "global_phase": [sig12(p.global_phase.re), sig12(p.global_phase.im)],
        "fidelity": sig12(fidelity),
    })
}

fn run_design1q(args: &Design1qArgs) -> CResult<()> {
    let target = args.target.resolve(2)?;
    let e = euler_zxz(&target);
    let (p, u) = match args.frame {
        Frame::Perp => {
            let p = design_resonant_perpendicular(&e, args.omega0, args.amplitude)?;
            let u = rwa_propagator_perp(&p.spec, p.t_f(), p.t_z())?;
            (p, u)
        }
        Frame::Rotframe => {
            let p = design_resonant_rotframe(&e, args.omega0, args.amplitude)?;
            let u = rotframe_propagator(&p.spec, p.t_f(), p.t_z())?;
            (p, u)
        }
        Frame::Tilted => {
            let p = design_tilted(&e, args.omega0, args.amplitude, args.zeta)?;
            let u = rwa_propagator_tilted(&p.spec, p.t_f(), p.t_z())?;
            (p, u)
        }
    };
    let fidelity = gate_fidelity(&u, &target)?;
    if fidelity < 1.0 - 1e-9 {
        return Err(verify_fail(format!("designed pulse verification failed: fidelity {fidelity}")));
    }
    let mut report = program_report(&p, fidelity);
    report["command"] = "design1q".into();
    emit(&report, args.out.as_ref())
}

fn parse_1q_target(text: &str) -> CResult<EulerZxz> {
    if text.contains(',') {
        let [theta, phi, gamma] = parse_triple(text, "target")?;
        Ok(EulerZxz { theta, phi, gamma })
    } else {
        Ok(euler_zxz(&named_gate(text).and_then(|u| {
            if u.dim() == 2 {
                Ok(u)
            } else {
                Err(schema("schedule2local targets must be single-qubit"))
            }
        })?))
    }
}

fn run_schedule2local(args: &Schedule2localArgs) -> CResult<()> {
    let t1 = parse_1q_target(&args.target1)?;
    let t2 = parse_1q_target(&args.target2)?;
    let seed = match std::env::var("WEYLSTEER_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| schema(format!("WEYLSTEER_SEED must be an integer, got '{v}'")))?,
        Err(_) => args.seed,
    };
    let s = schedule_simultaneous_seeded(&t1, &t2, args.omega0_1, args.omega0_2, args.amplitude, seed)?;
    let u1 = rwa_propagator_perp(&s.program1.spec, s.program1.t_f(), s.program1.t_z())?;
    let fid1 = gate_fidelity(&u1, &t1.reconstruct())?;
    if fid1 < 1.0 - 1e-9 || s.fidelity2 < 1.0 - 1e-6 {
        return Err(verify_fail(format!(
            "schedule verification failed: fidelity1 {fid1}, fidelity2 {}",
            s.fidelity2
        )));
    }
    let report = serde_json::json!({
        "command": "schedule2local",
        "seed": seed,
        "total_time": sig12(s.program1.total_time()),
        "program1": program_report(&s.program1, fid1),
        "program2": program_report(&s.program2, s.fidelity2),
    });
    emit(&report, args.out.as_ref())
}

fn run_bangbang(args: &BangbangArgs) -> CResult<()> {
    let target = args.target.resolve(2)?;
    let h1 = HermitianMatrix::new(read_complex_matrix(&args.h1)?)
        .map_err(|e| schema(format!("{}: {e}", args.h1.display())))?;
    let h2 = HermitianMatrix::new(read_complex_matrix(&args.h2)?)
        .map_err(|e| schema(format!("{}: {e}", args.h2.display())))?;
    let pair = HamiltonianPair::new(h1, h2)?;
    let seq = synthesize_bangbang(&target, &pair)?;
    let fidelity = gate_fidelity(&seq.propagator(&pair), &target)?;
    if fidelity < 1.0 - 1e-9 {
        return Err(verify_fail(format!("switching sequence verification failed: fidelity {fidelity}")));
    }
    let report = serde_json::json!({
        "command": "bangbang",
        "segments": seq.durations.len(),
        "durations": seq.durations.iter().map(|&t| sig12(t)).collect::<Vec<_>>(),
        "parameters": { "trailing_z": sig12(seq.trailing_z) },
        "global_phase": [sig12(seq.global_phase.re), sig12(seq.global_phase.im)],
        "fidelity": sig12(fidelity),
    });
    emit(&report, args.out.as_ref())
}

fn run_invariants(args: &GateInputArgs) -> CResult<()> {
    let u = args.target.resolve(4)?;
    let inv = invariants_from_unitary(&u)?;
    let line = format!(
        "{}, {}, {}",
        fmt12(inv.makhlin[0]),
        fmt12(inv.makhlin[1]),
        fmt12(inv.makhlin[2])
    );
    if let Some(path) = &args.out {
        write_atomic(path, &format!("{line}\n"))?;
    }
    println!("{line}");
    Ok(())
}

fn run_weyl(args: &GateInputArgs) -> CResult<()> {
    let u = args.target.resolve(4)?;
    let c = weyl_coordinates(&u)?.as_array();
    let line = format!("{}, {}, {}", fmt12(c[0]), fmt12(c[1]), fmt12(c[2]));
    if let Some(path) = &args.out {
        write_atomic(path, &format!("{line}\n"))?;
    }
    println!("{line}");
    Ok(())
}

fn run_equiv(args: &EquivArgs) -> CResult<()> {
    let a = resolve_gate_or_path(&args.a, 4)?;
    let b = resolve_gate_or_path(&args.b, 4)?;
    let ia = invariants_from_unitary(&a)?.makhlin;
    let ib = invariants_from_unitary(&b)?.makhlin;
    let resid = (0..3).map(|i| (ia[i] - ib[i]).abs()).fold(0.0, f64::max);
    if is_locally_equivalent(&a, &b, args.tol)? {
        println!("equivalent (invariant residual {})", fmt12(resid));
        Ok(())
    } else {
        Err(verify_fail(format!(
            "not locally equivalent: invariant residual {} exceeds tolerance {}",
            fmt12(resid),
            fmt12(args.tol)
        )))
    }
}

fn run_traj(cfg: &TrajConfig, out: Option<&PathBuf>) -> CResult<()> {
    let out = out.ok_or_else(|| schema("traj requires --out for the CSV file"))?;
    let spec = HamiltonianSpec::new(cfg.g1, cfg.g2, cfg.coupling.build()?)?;
    let grid: Vec<f64> = (0..=cfg.samples)
        .map(|i| cfg.t_max * i as f64 / cfg.samples as f64)
        .collect();
    let traj = weyl_trajectory(&spec, &grid, cfg.sign)?;
    let mut csv = String::from("t,c1,c2,c3,G1_re,G1_im,G2\n");
    for s in &traj.samples {
        let c = s.point.as_array();
        let g = s.invariants.makhlin;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt12(s.t),
            fmt12(c[0]),
            fmt12(c[1]),
            fmt12(c[2]),
            fmt12(g[0]),
            fmt12(g[1]),
            fmt12(g[2])
        ));
    }
    write_atomic(out, &csv)?;
    let last = traj.samples.last().expect("nonempty grid").point.as_array();
    println!(
        "wrote {} samples to {}; endpoint c/pi = [{}, {}, {}]",
        traj.samples.len(),
        out.display(),
        fmt12(last[0] / PI),
        fmt12(last[1] / PI),
        fmt12(last[2] / PI)
    );
    Ok(())
}

fn plan_report(strategy: &str, plan: &SteeringPlan, simulated: [f64; 3], fidelity: f64) -> serde_json::Value {
    let segments: Vec<serde_json::Value> = plan
        .segments
        .iter()
        .map(|s| match s {
            PlanSegment::Evolve { duration, sign, .. } => serde_json::json!({
                "type": "evolve", "duration": sig12(*duration), "sign": sign,
            }),
            PlanSegment::Local { .. } => serde_json::json!({ "type": "local" }),
        })
        .collect();
    let durations: Vec<f64> = plan
        .segments
        .iter()
        .filter_map(|s| match s {
            PlanSegment::Evolve { duration, .. } => Some(sig12(*duration)),
            PlanSegment::Local { .. } => None,
        })
        .collect();
    let params: serde_json::Map<String, serde_json::Value> = plan
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), sig12(*v).into()))
        .collect();
    serde_json::json!({
        "command": "steer2q",
        "strategy": strategy,
        "segments": segments,
        "durations": durations,
        "parameters": params,
        "predicted_endpoint": plan.predicted_endpoint.as_array().map(sig12),
        "simulated_endpoint": simulated.map(sig12),
        "fidelity": sig12(fidelity),
    })
}

fn run_steer2q(cfg: &SteerConfig, out: Option<&PathBuf>) -> CResult<()> {
    let (strategy, plan) = match cfg {
        SteerConfig::IsotropicEqual { g, j } => ("isotropic-equal", plan_isotropic_equal(*g, *j)?),
        SteerConfig::IsotropicRatio { g2, j, m } => {
            ("isotropic-ratio", plan_isotropic_ratio(*g2, *j, *m)?)
        }
        SteerConfig::YyB { j } => ("yy-b", solve_yy_gate(YyTarget::B, *j)?),
        SteerConfig::YyCnot { j } => ("yy-cnot", solve_yy_gate(YyTarget::Cnot, *j)?),
        SteerConfig::WeakCnot { j, template, m } => ("weak-cnot", plan_weak_cnot(*j, *template, *m)?),
        SteerConfig::Polyline { target, j } => {
            let p = WeylPoint { c1: target[0], c2: target[1], c3: target[2] };
            ("polyline", plan_nonlocal_polyline(p, *j)?)
        }
    };
    let u = simulate_plan(&plan)?;
    let simulated = weyl_coordinates(&u)?.as_array();
    let want = canonical_gate(plan.target_class.as_array());
    let ia = invariants_from_unitary(&u)?.makhlin;
    let ib = invariants_from_unitary(&want)?.makhlin;
    let resid = (0..3).map(|i| (ia[i] - ib[i]).abs()).fold(0.0, f64::max);
    let fidelity = 1.0 - resid;
    // weak-coupling plans land deliberately near (not on) the class; allow
    // the looser 5e-4*pi-per-coordinate window they are designed for
    let tol = if matches!(cfg, SteerConfig::WeakCnot { .. }) { 5e-3 } else { 1e-6 };
    if !is_locally_equivalent(&u, &want, tol)? {
        return Err(verify_fail(format!(
            "simulated endpoint not equivalent to target class: invariant residual {}",
            fmt12(resid)
        )));
    }
    emit(&plan_report(strategy, &plan, simulated, fidelity), out)
}

fn run_validate(args: &ValidateArgs) -> CResult<()> {
    let cfg = load_config(&args.config)?;
    let kind = match cfg {
        RunConfig::Traj(_) => "traj",
        RunConfig::Steer2q(_) => "steer2q",
    };
    println!("config ok ({kind})");
    Ok(())
}

fn run(cli: Cli) -> CResult<()> {
    match &cli.command {
        Command::Design1q(a) => run_design1q(a),
        Command::Schedule2local(a) => run_schedule2local(a),
        Command::Bangbang(a) => run_bangbang(a),
        Command::Invariants(a) => run_invariants(a),
        Command::Weyl(a) => run_weyl(a),
        Command::Equiv(a) => run_equiv(a),
        Command::Traj(a) => match load_config(&a.config)? {
            RunConfig::Traj(cfg) => run_traj(&cfg, a.out.as_ref()),
            RunConfig::Steer2q(_) => Err(schema("config has command 'steer2q'; run `weylsteer steer2q`")),
        },
        Command::Steer2q(a) => match load_config(&a.config)? {
            RunConfig::Steer2q(cfg) => run_steer2q(&cfg, a.out.as_ref()),
            RunConfig::Traj(_) => Err(schema("config has command 'traj'; run `weylsteer traj`")),
        },
        Command::Validate(a) => run_validate(a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through its own error path with code 0
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(EXIT_SCHEMA);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    if let Err(f) = run(cli) {
        eprintln!("error: {}", f.msg);
        std::process::exit(f.code);
    }
}
