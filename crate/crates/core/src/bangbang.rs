//! Bang-Bang synthesis: alternate between two fixed Hamiltonians to realize
//! an arbitrary single-qubit gate, steering the Bloch image of |1> from the
//! south pole by alternating rotations about z and a tilted axis.

use crate::bloch::{hopf_map, rz, su2_normalize, TAU};
use crate::qmath::{self, expm_hermitian, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Two alternation Hamiltonians: H1 = a sz (a > 0) and a second, linearly
/// independent H2 = b1 sx + b2 sy + b3 sz.
#[derive(Clone, Debug)]
pub struct HamiltonianPair {
    pub h1: HermitianMatrix,
    pub h2: HermitianMatrix,
    pub a: f64,
    pub b_vec: [f64; 3],
}

impl HamiltonianPair {
    pub fn new(h1: HermitianMatrix, h2: HermitianMatrix) -> Result<Self> {
        if h1.dim() != 2 || h2.dim() != 2 {
            return Err(Error::BadDimension(h1.dim().max(h2.dim())));
        }
        let m1 = h1.matrix();
        if m1[(0, 1)].norm() > 1e-12 || m1.trace().norm() > 1e-12 {
            return Err(Error::InvalidInput("H1 must be a multiple of sigma_z".into()));
        }
        let a = m1[(0, 0)].re;
        if a <= 0.0 {
            return Err(Error::InvalidInput(format!("H1 = a*sz requires a > 0, got {a}")));
        }
        let m2 = h2.matrix();
        if m2.trace().norm() > 1e-12 {
            return Err(Error::InvalidInput("H2 must be traceless".into()));
        }
        let b_vec = [m2[(0, 1)].re, -m2[(0, 1)].im, m2[(0, 0)].re];
        if (b_vec[0] * b_vec[0] + b_vec[1] * b_vec[1]).sqrt() < 1e-12 {
            return Err(Error::InvalidInput(
                "H2 proportional to H1: the pair is not bracket-generating".into(),
            ));
        }
        Ok(HamiltonianPair { h1, h2, a, b_vec })
    }
}

/// Standardized frame: k H1 k† = a sz and k H2 k† = b(sin(alpha) sz + cos(alpha) sx).
#[derive(Clone, Debug)]
pub struct StandardizedPair {
    pub k: UnitaryMatrix,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub gamma_bb: f64,
}

/// Alternating switching schedule [t1, t2, ...] starting with H1 (t1 acts
/// first), plus a trailing free-z duration and the exact global phase.
#[derive(Clone, Debug)]
pub struct SwitchSequence {
    pub durations: Vec<f64>,
    pub trailing_z: f64,
    pub global_phase: C64,
}

impl SwitchSequence {
    /// e^{-i H1 trailing_z} ... e^{-i H2 t2} e^{-i H1 t1}
    pub fn propagator(&self, pair: &HamiltonianPair) -> UnitaryMatrix {
        let mut u = UnitaryMatrix::identity(2);
        for (i, &t) in self.durations.iter().enumerate() {
            let h = if i % 2 == 0 { &pair.h1 } else { &pair.h2 };
            u = expm_hermitian(h, t).mul(&u);
        }
        if self.trailing_z != 0.0 {
            u = expm_hermitian(&pair.h1, self.trailing_z).mul(&u);
        }
        u
    }
}

/// Rotate away the sy component of H2: gamma solves -b1 sin(2g) + b2 cos(2g) = 0
/// and k = e^{i sz gamma} maps the pair to the standard frame.
pub fn standardize_pair(pair: &HamiltonianPair) -> Result<StandardizedPair> {
    let [b1, b2, b3] = pair.b_vec;
    let gamma_bb = b2.atan2(b1) / 2.0;
    let r = (b1 * b1 + b2 * b2).sqrt();
    let b = (r * r + b3 * b3).sqrt();
    let alpha = b3.atan2(r);
    // e^{i sz gamma} = rz(-gamma)
    let k = rz(-gamma_bb);
    Ok(StandardizedPair { k, a: pair.a, b, alpha, gamma_bb })
}

/// Upper bound on switchings: ceil(pi / |pi/2 - alpha|).
pub fn max_switches(alpha: f64) -> Result<usize> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::InvalidInput(format!("alpha must lie in [0, pi], got {alpha}")));
    }
    let gap = (PI / 2.0 - alpha).abs();
    if gap < 1e-12 {
        return Err(Error::InvalidInput("alpha = pi/2: rotation axes are parallel".into()));
    }
    Ok(((PI / gap) - 1e-12).ceil() as usize)
}

// ---- Bloch-sphere vector geometry -----------------------------------------

type V3 = [f64; 3];
const ZHAT: V3 = [0.0, 0.0, 1.0];
const SOUTH: V3 = [0.0, 0.0, -1.0];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

fn angle_between(a: V3, b: V3) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

fn rot_z(psi: f64, v: V3) -> V3 {
    let (s, c) = psi.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

/// Rodrigues rotation about unit axis n by angle chi.
fn rot_axis(n: V3, chi: f64, v: V3) -> V3 {
    let (s, c) = chi.sin_cos();
    let nxv = cross(n, v);
    let nv = dot(n, v);
    [
        v[0] * c + nxv[0] * s + n[0] * nv * (1.0 - c),
        v[1] * c + nxv[1] * s + n[1] * nv * (1.0 - c),
        v[2] * c + nxv[2] * s + n[2] * nv * (1.0 - c),
    ]
}

fn azimuth(v: V3) -> f64 {
    if v[0].hypot(v[1]) > 1e-15 {
        v[1].atan2(v[0])
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SegKind {
    /// Rotation about z (Hamiltonian H1).
    Align,
    /// Rotation about the tilted axis (Hamiltonian H2).
    Climb,
}

/// Both rotation angles about n that bring q to the requested colatitude
/// (the target circle intersects q's orbit in at most two points).
fn climb_branches(n: V3, q: V3, theta_next: f64) -> Vec<f64> {
    let nv = dot(n, q);
    let c = nv * n[2];
    let u = q[2] - nv * n[2];
    let v = cross(n, q)[2];
    let r = u.hypot(v);
    if r < 1e-15 {
        return vec![0.0];
    }
    let x = ((theta_next.cos() - c) / r).clamp(-1.0, 1.0);
    let base = v.atan2(u);
    let d = x.acos();
    vec![(base + d).rem_euclid(TAU), (base - d).rem_euclid(TAU)]
}

/// Both z-rotation angles that put q at angular distance rho from the axis
/// (whose colatitude is thn and azimuth is 0).
fn align_branches(n: V3, q: V3, rho: f64, thn: f64) -> Vec<f64> {
    let th = angle_between(q, ZHAT);
    let den = th.sin() * thn.sin();
    let phq = azimuth(q);
    if den < 1e-15 {
        return vec![0.0];
    }
    let _ = n;
    let cdf = ((rho.cos() - th.cos() * thn.cos()) / den).clamp(-1.0, 1.0);
    let d = cdf.acos();
    vec![(d - phq).rem_euclid(TAU), (-d - phq).rem_euclid(TAU)]
}

/// Candidate alternation plans steering the south pole to p for alpha in
/// [0, pi/2). Two endings are considered: finishing on a z-rotation (free
/// azimuth after the last climb) or landing on p with the last climb itself
/// (the climb preserves distance to the tilted axis, so the preceding
/// z-rotation dials that distance in).
fn plan_positive(p: V3, alpha: f64) -> Vec<Vec<(SegKind, f64)>> {
    let n: V3 = [alpha.cos(), 0.0, alpha.sin()];
    let thn = PI / 2.0 - alpha;
    let tht = angle_between(p, ZHAT);
    let rho_t = angle_between(p, n);
    let k_a = (((PI - tht) / (2.0 * thn) - 1e-9).ceil() as i64).max(1) as usize;
    let mut k_b = ((((PI - rho_t) / thn + 1.0) / 2.0 - 1e-9).ceil() as i64).max(2) as usize;
    if (rho_t - (PI - thn)).abs() < 1e-12 {
        k_b = 1;
    }
    let use_b = 2 * k_b < 2 * k_a + 1;

    let descend = |k: usize, goal: f64| -> (V3, Vec<(SegKind, f64)>) {
        let mut th = PI;
        let mut q = SOUTH;
        let mut segs = Vec::new();
        for i in 0..k.saturating_sub(1) {
            let nxt = (th - 2.0 * thn).max(goal);
            if i == 0 {
                let chi = climb_branches(n, q, nxt).into_iter().fold(f64::INFINITY, f64::min);
                q = rot_axis(n, chi, q);
                segs.push((SegKind::Climb, chi));
            } else {
                let rho = (th - thn).abs().max((nxt - thn).abs());
                let psi = align_branches(n, q, rho, thn)[0];
                q = rot_z(psi, q);
                let chi = climb_branches(n, q, nxt).into_iter().fold(f64::INFINITY, f64::min);
                q = rot_axis(n, chi, q);
                segs.push((SegKind::Align, psi));
                segs.push((SegKind::Climb, chi));
            }
            th = nxt;
        }
        (q, segs)
    };

    let mut cands: Vec<Vec<(SegKind, f64)>> = Vec::new();
    if use_b {
        let ilo = (rho_t - thn).abs();
        let ihi = (rho_t + thn).min(TAU - rho_t - thn);
        let rlo = (PI - 2.0 * (k_b as f64 - 1.0) * thn).max(0.0);
        let goal = rlo.max(ilo).min(ihi);
        let (q, segs) = descend(k_b, goal);
        for psi in align_branches(n, q, rho_t, thn) {
            let q1 = rot_z(psi, q);
            let q1p = sub(q1, [n[0] * dot(q1, n), n[1] * dot(q1, n), n[2] * dot(q1, n)]);
            let pp = sub(p, [n[0] * dot(p, n), n[1] * dot(p, n), n[2] * dot(p, n)]);
            let chi = if norm(q1p) < 1e-14 || norm(pp) < 1e-14 {
                0.0
            } else {
                dot(n, cross(q1p, pp)).atan2(dot(q1p, pp)).rem_euclid(TAU)
            };
            let mut s = segs.clone();
            s.push((SegKind::Align, psi));
            s.push((SegKind::Climb, chi));
            cands.push(s);
        }
    } else if k_a == 1 {
        for chi in climb_branches(n, SOUTH, tht) {
            let q = rot_axis(n, chi, SOUTH);
            let pht = if p[0].hypot(p[1]) > 1e-15 { azimuth(p) } else { azimuth(q) };
            cands.push(vec![
                (SegKind::Climb, chi),
                (SegKind::Align, (pht - azimuth(q)).rem_euclid(TAU)),
            ]);
        }
    } else {
        let goal = (PI - 2.0 * (k_a as f64 - 1.0) * thn).max(tht.min(PI));
        let (q0, segs0) = descend(k_a, goal);
        let rho = (goal - thn).abs().max((tht - thn).abs());
        for psi in align_branches(n, q0, rho, thn) {
            let q1 = rot_z(psi, q0);
            for chi in climb_branches(n, q1, tht) {
                let q2 = rot_axis(n, chi, q1);
                let pht = if p[0].hypot(p[1]) > 1e-15 { azimuth(p) } else { azimuth(q2) };
                let mut s = segs0.clone();
                s.push((SegKind::Align, psi));
                s.push((SegKind::Climb, chi));
                s.push((SegKind::Align, (pht - azimuth(q2)).rem_euclid(TAU)));
                cands.push(s);
            }
        }
    }
    // keep only plans that land on p exactly
    cands
        .into_iter()
        .filter(|segs| {
            let mut q = SOUTH;
            for &(kind, a) in segs {
                q = match kind {
                    SegKind::Align => rot_z(a, q),
                    SegKind::Climb => rot_axis(n, a, q),
                };
            }
            norm(sub(q, p)) < 1e-9
        })
        .collect()
}

/// Synthesize the target by alternating e^{-i H1 t} / e^{-i H2 t} pulses.
/// The first duration closes the residual z-fiber, so trailing_z is always 0;
/// global_phase makes phase * propagator an exact match.
pub fn synthesize_bangbang(target: &UnitaryMatrix, pair: &HamiltonianPair) -> Result<SwitchSequence> {
    if target.dim() != 2 {
        return Err(Error::BadDimension(target.dim()));
    }
    let std = standardize_pair(pair)?;
    let (a, b, alpha) = (std.a, std.b, std.alpha);
    let t_std = {
        let su = su2_normalize(target);
        UnitaryMatrix::new(std.k.matrix().mul(su.matrix()).mul(std.k.adjoint().matrix()))?
    };
    let p_img = hopf_map(&t_std);
    let p: V3 = [p_img.x, p_img.y, p_img.z];

    let seg_options: Vec<Vec<(SegKind, f64)>> = if norm(sub(p, SOUTH)) < 1e-13 {
        vec![vec![]]
    } else if alpha >= 0.0 {
        plan_positive(p, alpha)
    } else {
        // mirror through Rz(pi): solve for |alpha| with the reflected target,
        // then negate the climb angles
        let pr: V3 = [-p[0], -p[1], p[2]];
        plan_positive(pr, -alpha)
            .into_iter()
            .map(|segs| {
                segs.into_iter()
                    .map(|(k, v)| match k {
                        SegKind::Align => (k, v),
                        SegKind::Climb => (k, (-v).rem_euclid(TAU)),
                    })
                    .collect()
            })
            .collect()
    };

    let h1s = HermitianMatrix::new(qmath::pauli_z().scale(C64::new(a, 0.0))).unwrap();
    let h2s = HermitianMatrix::new(qmath::pauli_vector([b * alpha.cos(), 0.0, b * alpha.sin()])).unwrap();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for mut segs in seg_options {
        while segs.last().map_or(false, |&(_, v)| v.abs() < 1e-14) {
            segs.pop();
        }
        let mut prod = ComplexMatrix::identity(2);
        for &(kind, v) in &segs {
            let m = match kind {
                SegKind::Align => expm_hermitian(&h1s, v / (2.0 * a)),
                SegKind::Climb => expm_hermitian(&h2s, v / (2.0 * b)),
            };
            prod = m.matrix().mul(&prod);
        }
        let d = prod.adjoint().mul(t_std.matrix());
        if d[(0, 1)].norm() > 1e-9 || d[(1, 0)].norm() > 1e-9 {
            continue;
        }
        let t1 = (-d[(0, 0)].arg() / a).rem_euclid(PI / a);
        let mut durations = vec![t1];
        durations.extend(segs.iter().map(|&(kind, v)| match kind {
            SegKind::Align => v / (2.0 * a),
            SegKind::Climb => v / (2.0 * b),
        }));
        let total: f64 = durations.iter().sum();
        if best.as_ref().map_or(true, |(bt, _)| total < *bt) {
            best = Some((total, durations));
        }
    }
    let (_, durations) = best.ok_or_else(|| {
        Error::SolverFailure("no alternation plan reaches the target Bloch point".into())
    })?;

    let mut seq = SwitchSequence { durations, trailing_z: 0.0, global_phase: C64::new(1.0, 0.0) };
    let u = seq.propagator(pair);
    let tr = u.adjoint().mul(target).matrix().trace();
    let fidelity = tr.norm() / 2.0;
    if fidelity < 1.0 - 1e-9 {
        return Err(Error::SolverFailure(format!(
            "bang-bang composition misses target: fidelity {fidelity}"
        )));
    }
    seq.global_phase = tr / tr.norm();
    Ok(seq)
}
