//! Steering strategies in the Weyl chamber: trajectory sampling, isotropic
//! plans, anisotropic YY (single-axis coupling) gate solvers, weak-coupling
//! approximations, and purely nonlocal polyline planning.

use crate::qmath::{self, hermitian_eig, kron, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use crate::weyl::{
    invariants_from_unitary, invariants_from_weyl, weyl_coordinates, CouplingMatrix,
    InvariantTriple, WeylPoint,
};
use crate::{Error, Result};
use std::f64::consts::PI;

const SQRT2_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Full two-qubit Hamiltonian H = g1.s x I + I x g2.s + sum J_{ab} sa.sb.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub g1: [f64; 3],
    pub g2: [f64; 3],
    pub coupling: CouplingMatrix,
}

impl HamiltonianSpec {
    pub fn new(g1: [f64; 3], g2: [f64; 3], coupling: CouplingMatrix) -> Result<Self> {
        if g1.iter().chain(g2.iter()).all(|x| x.is_finite()) {
            Ok(HamiltonianSpec { g1, g2, coupling })
        } else {
            Err(Error::NonFiniteEntries)
        }
    }

    pub fn isotropic(g1: [f64; 3], g2: [f64; 3], j: f64) -> Result<Self> {
        Self::new(g1, g2, CouplingMatrix::diagonal(j, j, j)?)
    }

    pub fn hamiltonian(&self) -> HermitianMatrix {
        let paulis = [qmath::pauli_x(), qmath::pauli_y(), qmath::pauli_z()];
        let id = ComplexMatrix::identity(2);
        let mut m = self.coupling.hamiltonian().matrix().clone();
        for a in 0..3 {
            if self.g1[a] != 0.0 {
                m = m.add(&kron(&paulis[a], &id).scale(C64::new(self.g1[a], 0.0)));
            }
            if self.g2[a] != 0.0 {
                m = m.add(&kron(&id, &paulis[a]).scale(C64::new(self.g2[a], 0.0)));
            }
        }
        HermitianMatrix::new(m).expect("real Pauli combinations are Hermitian")
    }
}

/// One sampled point of a chamber trajectory.
#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub point: WeylPoint,
    pub invariants: InvariantTriple,
}

/// Sampled image of U(t) = e^{-i sign H t} in the Weyl chamber.
#[derive(Clone, Debug)]
pub struct WeylTrajectory {
    pub samples: Vec<TrajectorySample>,
    pub sign: f64,
}

/// Propagator e^{-i sign H t} from a precomputed eigendecomposition.
fn propagator_from_eig(w: &[f64], v: &ComplexMatrix, t: f64, sign: f64) -> UnitaryMatrix {
    let n = w.len();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[(i, k)] * (-qmath::I * sign * w[k] * t).exp() * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    UnitaryMatrix::new(out).expect("eigendecomposition produced non-unitary exponential")
}

/// Sample the chamber trajectory of the flow; sign = +1 for e^{-iHt},
/// sign = -1 for e^{+iHt}.
pub fn weyl_trajectory(spec: &HamiltonianSpec, t_grid: &[f64], sign: f64) -> Result<WeylTrajectory> {
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("time grid must be nonempty".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
    }
    let (w, v) = hermitian_eig(&spec.hamiltonian());
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let u = propagator_from_eig(&w, &v, t, sign);
        samples.push(TrajectorySample {
            t,
            point: weyl_coordinates(&u)?,
            invariants: invariants_from_unitary(&u)?,
        });
    }
    Ok(WeylTrajectory { samples, sign })
}

/// One step of a steering plan: continuous evolution or an instantaneous
/// local gate.
#[derive(Clone, Debug)]
pub enum PlanSegment {
    Evolve { spec: HamiltonianSpec, duration: f64, sign: f64 },
    Local { gate: UnitaryMatrix },
}

/// Piecewise steering recipe; segments act in listed order (first = earliest).
#[derive(Clone, Debug)]
pub struct SteeringPlan {
    pub segments: Vec<PlanSegment>,
    pub predicted_endpoint: WeylPoint,
    pub target_class: WeylPoint,
    pub params: Vec<(&'static str, f64)>,
}

impl SteeringPlan {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

/// Compose the plan into its total unitary.
pub fn simulate_plan(plan: &SteeringPlan) -> Result<UnitaryMatrix> {
    let mut u = UnitaryMatrix::identity(4);
    for seg in &plan.segments {
        u = match seg {
            PlanSegment::Evolve { spec, duration, sign } => {
                if *duration < 0.0 {
                    return Err(Error::NegativeDuration(*duration));
                }
                qmath::expm_hermitian(&spec.hamiltonian(), sign * duration).mul(&u)
            }
            PlanSegment::Local { gate } => gate.mul(&u),
        };
    }
    Ok(u)
}

const CNOT_CLASS: WeylPoint = WeylPoint { c1: PI / 2.0, c2: 0.0, c3: 0.0 };
const B_CLASS: WeylPoint = WeylPoint { c1: PI / 2.0, c2: PI / 4.0, c3: 0.0 };

/// Strategy 1 (equal local fields): with g1 = g2 the local part commutes with
/// the isotropic coupling, so two coupling windows of pi/(8J) with a sz flip
/// on qubit 1 in between land exactly on the CNOT class regardless of g.
pub fn plan_isotropic_equal(g: [f64; 3], j: f64) -> Result<SteeringPlan> {
    if j.abs() < 1e-12 {
        return Err(Error::InvalidInput("isotropic strength J must be nonzero".into()));
    }
    let spec = HamiltonianSpec::isotropic(g, g, j)?;
    let tau = PI / (8.0 * j);
    let flip = UnitaryMatrix::new(kron(&qmath::pauli_z(), &ComplexMatrix::identity(2)))?;
    Ok(SteeringPlan {
        segments: vec![
            PlanSegment::Evolve { spec, duration: tau, sign: -1.0 },
            PlanSegment::Local { gate: flip },
            PlanSegment::Evolve { spec, duration: tau, sign: -1.0 },
        ],
        predicted_endpoint: CNOT_CLASS,
        target_class: CNOT_CLASS,
        params: vec![("tau", tau), ("total_coupling_time", PI / (4.0 * j))],
    })
}

/// Strategy 2 (proportional fields g1 = lambda g2): a single always-on window
/// of duration t = pi/(4J) reaches the CNOT class when the precession rate
/// omega closes an integer number m of loops, which pins lambda.
pub fn plan_isotropic_ratio(g2: [f64; 3], j: f64, m: u32) -> Result<SteeringPlan> {
    let g2n = (g2[0] * g2[0] + g2[1] * g2[1] + g2[2] * g2[2]).sqrt();
    if j <= 0.0 || g2n < 1e-12 || m == 0 {
        return Err(Error::InvalidInput(
            "isotropic ratio strategy needs J > 0, g2 != 0, m >= 1".into(),
        ));
    }
    let root = (16.0 * m as f64 * m as f64 - 4.0).sqrt() * j / g2n;
    let lambda = 1.0 - root;
    let lambda_high = 1.0 + root;
    let omega = ((lambda - 1.0) * (lambda - 1.0) * g2n * g2n + 4.0 * j * j).sqrt();
    let t = PI / (4.0 * j);
    let g1 = [lambda * g2[0], lambda * g2[1], lambda * g2[2]];
    let spec = HamiltonianSpec::isotropic(g1, g2, j)?;
    Ok(SteeringPlan {
        segments: vec![PlanSegment::Evolve { spec, duration: t, sign: -1.0 }],
        predicted_endpoint: CNOT_CLASS,
        target_class: CNOT_CLASS,
        params: vec![
            ("lambda", lambda),
            ("lambda_high", lambda_high),
            ("omega", omega),
            ("t", t),
            ("m", m as f64),
        ],
    })
}

/// Local invariants of the single-axis (YY) model at time t, with
/// f1, f2 the sum and difference of the two local field magnitudes.
pub fn yy_invariants(f1: f64, f2: f64, j: f64, t: f64) -> InvariantTriple {
    let w1 = f1 * f1 + j * j;
    let w2 = f2 * f2 + j * j;
    let x = (w2.sqrt() * t).cos();
    let y = (w1.sqrt() * t).cos();
    let j2 = j * j;
    let j4 = j2 * j2;
    let d = w1 * w2;
    let g1 = (w1 * j2 * x * x + w2 * j2 * y * y + f1 * f1 * f2 * f2 - j4) / d;
    let g3 = (3.0 * f1 * f1 * f2 * f2 - j2 * (f1 * f1 + f2 * f2)
        + j4 * (8.0 * x * x * y * y + 3.0)
        + 4.0 * j2 * y * y * (f2 * f2 - j2)
        + 4.0 * j2 * x * x * (f1 * f1 - j2))
        / d;
    // this g1 is already on the Makhlin scale (identity -> 1); the chamber
    // form carries the factor of 4 and G1 = (g1 + i*0)^2
    InvariantTriple { chamber: [4.0 * g1, 0.0, g3], makhlin: [g1 * g1, 0.0, g3] }
}

/// Gates solvable in one YY window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YyTarget {
    B,
    Cnot,
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        }
    }
    if fa < fb {
        a
    } else {
        b
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if (flo <= 0.0) == (f(mid) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve the B / CNOT transcendental condition pairs in units J = 1, then
/// rescale. Returns the field split g1 = [r1, 0, 0], g2 = [r2, 0, 0] with
/// r1 + r2 = f1 and r1 - r2 = f2.
pub fn solve_yy_gate(target: YyTarget, j: f64) -> Result<SteeringPlan> {
    if j <= 0.0 {
        return Err(Error::InvalidInput("YY coupling J must be positive".into()));
    }
    let (f1, f2, t, class) = match target {
        YyTarget::Cnot => {
            // cos(2 sqrt(f^2+1) t) = -f^2 for both f's: the minimum common
            // time is the interior minimum of the first-revival branch
            // t(f) = (2 pi + arccos(-f^2)) / (2 sqrt(f^2+1)), where the two
            // roots coalesce at f1 = f2.
            let tau = |f: f64| (2.0 * PI + (-f * f).acos()) / (2.0 * (f * f + 1.0).sqrt());
            let f = golden_min(0.3, 1.0, tau);
            (f, f, tau(f), CNOT_CLASS)
        }
        YyTarget::B => {
            // cos(2 sqrt(f1^2+1) t) = -f1^2 +- (sqrt2/2)(f1^2+1)
            // cos(2 sqrt(f2^2+1) t) = -f2^2 -+ (sqrt2/2)(f2^2+1)
            // Scan f2 (both branch assignments, several revivals), pin t from
            // the f2 equation, then bisect the f1 equation.
            let mut best: Option<(f64, f64, f64)> = None;
            for s in [1.0f64, -1.0] {
                let rhs1 = |f: f64| -f * f + s * SQRT2_HALF * (f * f + 1.0);
                let rhs2 = |f: f64| -f * f - s * SQRT2_HALF * (f * f + 1.0);
                let mut f2 = 0.0;
                while f2 <= 3.0 {
                    let r2 = rhs2(f2);
                    if r2.abs() <= 1.0 {
                        let w2 = 2.0 * (f2 * f2 + 1.0).sqrt();
                        for k in 0..4 {
                            for pm in [1.0f64, -1.0] {
                                let t = (2.0 * PI * k as f64 + pm * r2.acos()) / w2;
                                if t <= 1e-9 || best.map_or(false, |(_, _, bt)| t >= bt) {
                                    continue;
                                }
                                // roots of cos(2 sqrt(f1^2+1) t) - rhs1(f1)
                                let h = |f: f64| {
                                    (2.0 * (f * f + 1.0).sqrt() * t).cos() - rhs1(f)
                                };
                                let mut prev = h(0.0);
                                let mut f = 0.005;
                                while f <= 3.0 {
                                    let cur = h(f);
                                    if prev == 0.0 || prev * cur < 0.0 {
                                        let f1 = bisect(f - 0.005, f, h);
                                        if best.map_or(true, |(_, _, bt)| t < bt) {
                                            best = Some((f1, f2, t));
                                        }
                                        break;
                                    }
                                    prev = cur;
                                    f += 0.005;
                                }
                            }
                        }
                    }
                    f2 += 0.005;
                }
            }
            let (f1, f2, t) = best.ok_or_else(|| {
                Error::SolverFailure("no (f1, f2, t) satisfies the B-gate conditions".into())
            })?;
            (f1, f2, t, B_CLASS)
        }
    };
    let (f1, f2, t) = (j * f1, j * f2, t / j);
    let inv = yy_invariants(f1, f2, j, t);
    let want = invariants_from_weyl(class.as_array());
    let resid = (0..3)
        .map(|i| (inv.chamber[i] - want.chamber[i]).abs())
        .fold(0.0, f64::max);
    if resid > 1e-6 {
        return Err(Error::SolverFailure(format!(
            "YY solver residual {resid:.3e} on chamber invariants"
        )));
    }
    let (r1, r2) = ((f1 + f2) / 2.0, (f1 - f2) / 2.0);
    let spec = HamiltonianSpec::new(
        [r1, 0.0, 0.0],
        [r2, 0.0, 0.0],
        CouplingMatrix::new([[0.0; 3], [0.0, j, 0.0], [0.0; 3]])?,
    )?;
    Ok(SteeringPlan {
        segments: vec![PlanSegment::Evolve { spec, duration: t, sign: -1.0 }],
        predicted_endpoint: class,
        target_class: class,
        params: vec![("f1", f1), ("f2", f2), ("t", t), ("residual", resid)],
    })
}

/// Straight-line chamber direction of the weak-Ising flow for equal-norm
/// local fields, per unit Jz t / |g|^2.
pub fn approx_straightline_ising(g1: [f64; 3], g2: [f64; 3]) -> Result<[f64; 3]> {
    let n1 = (g1[0] * g1[0] + g1[1] * g1[1] + g1[2] * g1[2]).sqrt();
    let n2 = (g2[0] * g2[0] + g2[1] * g2[1] + g2[2] * g2[2]).sqrt();
    if (n1 - n2).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "straight-line approximation needs equal field norms, got {n1} vs {n2}"
        )));
    }
    let rho = (g1[0] * g1[0] + g1[1] * g1[1]).sqrt() * (g2[0] * g2[0] + g2[1] * g2[1]).sqrt();
    let zz = 2.0 * g1[2] * g2[2];
    Ok(if zz >= rho { [zz, rho, rho] } else { [rho, rho, zz] })
}

/// Weak-coupling CNOT: scale the template field pair so the projected
/// coupling advances c1 by pi/2 in the same time that the field-magnitude
/// difference completes m half-revolutions.
pub fn plan_weak_cnot(
    j: [f64; 3],
    template: ([f64; 3], [f64; 3]),
    m: u32,
) -> Result<SteeringPlan> {
    let (d1, d2) = template;
    let n1 = (d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2]).sqrt();
    let n2 = (d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]).sqrt();
    if n1 < 1e-12 || n2 < 1e-12 {
        return Err(Error::InvalidInput("template fields must be nonzero".into()));
    }
    let k = (j[0] * d1[0] * d2[0] + j[1] * d1[1] * d2[1] + j[2] * d1[2] * d2[2]) / (n1 * n2);
    if k.abs() < 1e-12 {
        return Err(Error::InvalidInput(
            "template has zero projected coupling; the c1 drift vanishes".into(),
        ));
    }
    if (n1 - n2).abs() < 1e-12 {
        return Err(Error::InvalidInput(
            "template field norms must differ to close the transverse loops".into(),
        ));
    }
    let s = 4.0 * m as f64 * k / (n1 - n2);
    if s <= 0.0 {
        return Err(Error::SolverFailure(format!(
            "scale parameter is nonpositive ({s}); swap the template pair or m sign"
        )));
    }
    let t = PI / (4.0 * k);
    let g1 = [s * d1[0], s * d1[1], s * d1[2]];
    let g2 = [s * d2[0], s * d2[1], s * d2[2]];
    let jn = (j[0] * j[0] + j[1] * j[1] + j[2] * j[2]).sqrt();
    let ratio = jn / (s * n1.min(n2));
    let spec = HamiltonianSpec::new(g1, g2, CouplingMatrix::diagonal(j[0], j[1], j[2])?)?;
    Ok(SteeringPlan {
        segments: vec![PlanSegment::Evolve { spec, duration: t, sign: -1.0 }],
        predicted_endpoint: CNOT_CLASS,
        target_class: CNOT_CLASS,
        params: vec![
            ("t", t),
            ("scale", s),
            ("projected_coupling", k),
            ("coupling_ratio", ratio),
            ("m", m as f64),
        ],
    })
}

/// Purely nonlocal steering: the four double-sign-flip images of (Jx,Jy,Jz)
/// are reachable by conjugating with a Pauli on qubit 1, and commuting
/// canonical flows add, so up to three segments draw a polyline to the
/// target.
pub fn plan_nonlocal_polyline(target: WeylPoint, j: [f64; 3]) -> Result<SteeringPlan> {
    if j.iter().all(|x| x.abs() < 1e-12) {
        return Err(Error::InvalidInput("coupling must be nonzero".into()));
    }
    // flip pattern -> Pauli on qubit 1 whose conjugation flips the other two axes
    let flips: [([f64; 3], Option<ComplexMatrix>); 4] = [
        ([1.0, 1.0, 1.0], None),
        ([1.0, -1.0, -1.0], Some(qmath::pauli_x())),
        ([-1.0, 1.0, -1.0], Some(qmath::pauli_y())),
        ([-1.0, -1.0, 1.0], Some(qmath::pauli_z())),
    ];
    let dirs: Vec<[f64; 3]> = flips
        .iter()
        .map(|(f, _)| [f[0] * j[0], f[1] * j[1], f[2] * j[2]])
        .collect();
    let c = target.as_array();
    let mut best: Option<(f64, Vec<(usize, f64)>)> = None;
    for r in 1..=3usize {
        let mut combos: Vec<Vec<usize>> = Vec::new();
        match r {
            1 => combos.extend((0..4).map(|i| vec![i])),
            2 => {
                for i in 0..4 {
                    for k in i + 1..4 {
                        combos.push(vec![i, k]);
                    }
                }
            }
            _ => {
                for i in 0..4 {
                    for k in i + 1..4 {
                        for l in k + 1..4 {
                            combos.push(vec![i, k, l]);
                        }
                    }
                }
            }
        }
        for combo in combos {
            let a = nalgebra::DMatrix::from_fn(3, combo.len(), |row, col| {
                2.0 * dirs[combo[col]][row]
            });
            let rhs = nalgebra::DVector::from_row_slice(&c);
            let svd = nalgebra::SVD::new(a.clone(), true, true);
            let Ok(sol) = svd.solve(&rhs, 1e-12) else { continue };
            if sol.iter().any(|&t| t < -1e-12) {
                continue;
            }
            let resid = (&a * &sol - &rhs).norm();
            if resid > 1e-9 {
                continue;
            }
            let total: f64 = sol.iter().sum();
            if best
                .as_ref()
                .map_or(true, |(bt, segs)| combo.len() < segs.len() || (combo.len() == segs.len() && total < *bt))
            {
                best = Some((
                    total,
                    combo.iter().zip(sol.iter()).map(|(&i, &t)| (i, t.max(0.0))).collect(),
                ));
            }
        }
        if best.is_some() {
            break;
        }
    }
    let (_, legs) = best.ok_or_else(|| {
        Error::SolverFailure(
            "target lies outside the span of the sign-flip images of the coupling".into(),
        )
    })?;
    let spec = HamiltonianSpec::new([0.0; 3], [0.0; 3], CouplingMatrix::diagonal(j[0], j[1], j[2])?)?;
    let mut segments = Vec::new();
    for (i, t) in legs {
        let conj = flips[i].1.as_ref().map(|p| {
            UnitaryMatrix::new(kron(p, &ComplexMatrix::identity(2))).unwrap()
        });
        if let Some(k) = &conj {
            segments.push(PlanSegment::Local { gate: k.clone() });
        }
        segments.push(PlanSegment::Evolve { spec, duration: t, sign: -1.0 });
        if let Some(k) = conj {
            segments.push(PlanSegment::Local { gate: k });
        }
    }
    Ok(SteeringPlan {
        segments,
        predicted_endpoint: target,
        target_class: target,
        params: vec![],
    })
}
