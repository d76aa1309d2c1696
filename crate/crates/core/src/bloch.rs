//! Quotient-space machinery for single-qubit control: the Hopf map onto the
//! Bloch sphere, z-rotation equivalence, drift standardization, Euler ZXZ
//! angles and the off-resonance reachability cap.

use crate::qmath::{self, expm_hermitian, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64, I, ONE, ZERO};
use crate::{Error, Result};
use std::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

/// Point on the unit sphere of single-qubit states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        BlochPoint {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// Colatitude in [0, pi].
    pub fn theta(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    /// Azimuth in [0, 2*pi); gauge pi/2 at the poles.
    pub fn phi(&self) -> f64 {
        if self.x.abs() < 1e-15 && self.y.abs() < 1e-15 {
            PI / 2.0
        } else {
            self.y.atan2(self.x).rem_euclid(TAU)
        }
    }

    pub fn dist(&self, other: &BlochPoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }
}

/// Euler ZXZ angles: U = e^{-i(phi-pi/2)/2 sz} e^{-i(pi-theta)/2 sx} e^{-i gamma/2 sz},
/// with (theta, phi) the Bloch image of U and gamma closing the residual
/// z-rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerZxz {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
}

impl EulerZxz {
    /// The SU(2) element these angles reconstruct.
    pub fn reconstruct(&self) -> UnitaryMatrix {
        let sz = HermitianMatrix::new(qmath::pauli_z()).unwrap();
        let sx = HermitianMatrix::new(qmath::pauli_x()).unwrap();
        expm_hermitian(&sz, (self.phi - PI / 2.0) / 2.0)
            .mul(&expm_hermitian(&sx, (PI - self.theta) / 2.0))
            .mul(&expm_hermitian(&sz, self.gamma / 2.0))
    }
}

/// Conjugation k bringing a drift Hamiltonian to a*sz.
#[derive(Clone, Debug)]
pub struct DriftStandardization {
    pub k: UnitaryMatrix,
    pub a: f64,
}

/// Bloch image of a unitary: the state U|1> through the Hopf fibration
/// (z, x+iy) = (|z1|^2 - |z2|^2, 2*conj(z1)*z2).
pub fn hopf_map(u: &UnitaryMatrix) -> BlochPoint {
    let m = u.matrix();
    let z1 = m[(0, 1)];
    let z2 = m[(1, 1)];
    let xy = z1.conj() * z2 * 2.0;
    BlochPoint {
        x: xy.re,
        y: xy.im,
        z: z1.norm_sqr() - z2.norm_sqr(),
    }
}

/// True iff U†V is diagonal up to tol, i.e. U and V differ by a z-rotation
/// (and global phase) from the right.
pub fn is_rz_equivalent(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> bool {
    let d = u.adjoint().mul(v);
    d.matrix()[(0, 1)].norm() <= tol && d.matrix()[(1, 0)].norm() <= tol
}

/// Conjugation taking H_d = a1*sx + a2*sy + a3*sz to a*sz, with the explicit
/// closed-form k on the a1^2 + a2^2 != 0 branch.
pub fn standardize_drift(h_d: &HermitianMatrix) -> Result<DriftStandardization> {
    if h_d.dim() != 2 {
        return Err(Error::BadDimension(h_d.dim()));
    }
    let m = h_d.matrix();
    if m.trace().norm() > 1e-12 {
        return Err(Error::InvalidInput("drift must be traceless".into()));
    }
    let a1 = m[(0, 1)].re;
    let a2 = -m[(0, 1)].im;
    let a3 = m[(0, 0)].re;
    let a = (a1 * a1 + a2 * a2 + a3 * a3).sqrt();
    if a == 0.0 {
        return Err(Error::InvalidInput("drift is zero: no field direction".into()));
    }
    let k = if a1 * a1 + a2 * a2 > 0.0 {
        // Columns of k† are the H_d eigenvectors; oriented so k H_d k† = a sz.
        let dmin = (2.0 * a * (a - a3)).sqrt();
        let dplus = (2.0 * a * (a + a3)).sqrt();
        ComplexMatrix::from_rows(
            2,
            &[
                C64::new(a1, -a2) / dmin,
                C64::new(-a1, a2) / dplus,
                C64::new(((a - a3) / (2.0 * a)).sqrt(), 0.0),
                C64::new(((a + a3) / (2.0 * a)).sqrt(), 0.0),
            ],
        )?
        .adjoint()
    } else if a3 > 0.0 {
        ComplexMatrix::identity(2)
    } else {
        qmath::pauli_x()
    };
    Ok(DriftStandardization {
        k: UnitaryMatrix::new(k)?,
        a,
    })
}

/// Divide by det(U)^{1/2} (principal branch) to land in SU(2).
pub fn su2_normalize(u: &UnitaryMatrix) -> UnitaryMatrix {
    let d = u.matrix().det();
    let root = C64::from_polar(d.norm().sqrt(), d.arg() / 2.0);
    u.phase_mul(ONE / root)
}

/// Euler ZXZ angles of an SU(2)-normalized unitary. theta in [0, pi] and phi
/// in [0, 2*pi) come from the Bloch image (phi = pi/2 at the poles); gamma in
/// [0, 4*pi) makes the SU(2) reconstruction exact, not merely projective.
pub fn euler_zxz(u: &UnitaryMatrix) -> EulerZxz {
    let su = su2_normalize(u);
    let p = hopf_map(&su);
    let theta = p.theta();
    let phi = p.phi();
    let sz = HermitianMatrix::new(qmath::pauli_z()).unwrap();
    let sx = HermitianMatrix::new(qmath::pauli_x()).unwrap();
    let outer = expm_hermitian(&sz, (phi - PI / 2.0) / 2.0)
        .mul(&expm_hermitian(&sx, (PI - theta) / 2.0));
    // d = outer† su is diagonal in SU(2): diag(e^{-i gamma/2}, e^{+i gamma/2})
    let d = outer.adjoint().mul(&su);
    let gamma = (-2.0 * d.matrix()[(0, 0)].arg()).rem_euclid(2.0 * TAU);
    EulerZxz { theta, phi, gamma }
}

/// Off-resonance cap: the polar cap z >= threshold is unreachable from the
/// south pole when the drive is detuned.
pub fn unreachable_cap(a_amp: f64, omega0: f64, omega: f64) -> Result<f64> {
    if a_amp < 0.0 {
        return Err(Error::InvalidInput("amplitude must be nonnegative".into()));
    }
    let half = a_amp / 2.0;
    let det = omega0 - omega;
    let denom = half * half + det * det;
    if denom == 0.0 {
        return Err(Error::InvalidInput(
            "A = 0 at exact resonance: cap is undefined (0/0)".into(),
        ));
    }
    Ok((half * half - det * det) / denom)
}

/// The rotation e^{-i a sz t} as an SU(2) matrix, kept here because both the
/// pulse designers and the Bang-Bang synthesizer close fibers with it.
pub fn rz(half_angle: f64) -> UnitaryMatrix {
    UnitaryMatrix::new(
        ComplexMatrix::from_rows(
            2,
            &[(-I * half_angle).exp(), ZERO, ZERO, (I * half_angle).exp()],
        )
        .unwrap(),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::gate_fidelity;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    pub(crate) fn hadamard() -> UnitaryMatrix {
        let s = 1.0 / 2.0_f64.sqrt();
        UnitaryMatrix::new(
            ComplexMatrix::from_rows(
                2,
                &[
                    C64::new(s, 0.0),
                    C64::new(s, 0.0),
                    C64::new(s, 0.0),
                    C64::new(-s, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn random_su2(rng: &mut impl Rng) -> UnitaryMatrix {
        let h = qmath::pauli_vector([
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ]);
        expm_hermitian(&HermitianMatrix::new(h).unwrap(), 1.0)
    }

    #[test]
    fn hopf_south_pole_cases() {
        let p = hopf_map(&UnitaryMatrix::identity(2));
        assert!(p.dist(&BlochPoint { x: 0.0, y: 0.0, z: -1.0 }) < 1e-14);
        for t in [0.1, 1.0, 5.5] {
            let u = rz(1.3 * t);
            let q = hopf_map(&u);
            assert!(q.dist(&BlochPoint { x: 0.0, y: 0.0, z: -1.0 }) < 1e-14);
        }
    }

    #[test]
    fn hopf_hadamard() {
        let p = hopf_map(&hadamard());
        assert_abs_diff_eq!(p.theta(), PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.phi(), PI, epsilon = 1e-12);
    }

    #[test]
    fn rz_equivalence_cases() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let u = random_su2(&mut rng);
        assert!(is_rz_equivalent(&u, &u.mul(&rz(0.35)), 1e-10));
        let sx = UnitaryMatrix::new(qmath::pauli_x()).unwrap();
        assert!(!is_rz_equivalent(&UnitaryMatrix::identity(2), &sx, 1e-10));
    }

    #[test]
    fn rz_equivalence_matches_hopf() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let u = random_su2(&mut rng);
            let v = random_su2(&mut rng);
            let same_fiber = is_rz_equivalent(&u, &v, 1e-9);
            let close = hopf_map(&u).dist(&hopf_map(&v)) < 1e-9;
            assert_eq!(same_fiber, close);
        }
    }

    #[test]
    fn hopf_fiber_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let u = random_su2(&mut rng);
            let t: f64 = rng.gen_range(0.0..10.0);
            assert!(hopf_map(&u).dist(&hopf_map(&u.mul(&rz(t)))) < 1e-12);
        }
    }

    #[test]
    fn standardize_sigma_x() {
        let s = standardize_drift(&HermitianMatrix::new(qmath::pauli_x()).unwrap()).unwrap();
        assert_abs_diff_eq!(s.a, 1.0, epsilon = 1e-14);
        let conj = s.k.matrix().mul(&qmath::pauli_x()).mul(s.k.adjoint().matrix());
        assert!(conj.max_abs_diff(&qmath::pauli_z()) < 1e-12);
    }

    #[test]
    fn standardize_degenerate_branches() {
        let s = standardize_drift(
            &HermitianMatrix::new(qmath::pauli_z().scale(C64::new(5.0, 0.0))).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(s.a, 5.0, epsilon = 1e-14);
        assert!(s.k.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let neg = standardize_drift(
            &HermitianMatrix::new(qmath::pauli_z().scale(C64::new(-2.0, 0.0))).unwrap(),
        )
        .unwrap();
        let conj = neg
            .k
            .matrix()
            .mul(&qmath::pauli_z().scale(C64::new(-2.0, 0.0)))
            .mul(neg.k.adjoint().matrix());
        assert!(conj.max_abs_diff(&qmath::pauli_z().scale(C64::new(2.0, 0.0))) < 1e-12);
        assert!(standardize_drift(&HermitianMatrix::zero(2)).is_err());
    }

    #[test]
    fn standardize_random_property() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let a: [f64; 3] = [
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ];
            let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            if norm < 1e-6 {
                continue;
            }
            let h = HermitianMatrix::new(qmath::pauli_vector(a)).unwrap();
            let s = standardize_drift(&h).unwrap();
            assert_abs_diff_eq!(s.a, norm, epsilon = 1e-12);
            let conj = s.k.matrix().mul(h.matrix()).mul(s.k.adjoint().matrix());
            assert!(conj.max_abs_diff(&qmath::pauli_z().scale(C64::new(norm, 0.0))) < 1e-12);
        }
    }

    #[test]
    fn euler_identity() {
        let e = euler_zxz(&UnitaryMatrix::identity(2));
        assert_abs_diff_eq!(e.theta, PI, epsilon = 1e-12);
        assert_abs_diff_eq!(e.phi, PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.gamma, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn euler_quarter_x_turn() {
        let u = expm_hermitian(&HermitianMatrix::new(qmath::pauli_x()).unwrap(), PI / 4.0);
        let e = euler_zxz(&u);
        assert_abs_diff_eq!(e.theta, PI / 2.0, epsilon = 1e-12);
        assert!(gate_fidelity(&e.reconstruct(), &u).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn euler_hadamard() {
        let e = euler_zxz(&hadamard());
        assert_abs_diff_eq!(e.theta, PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.phi, PI, epsilon = 1e-12);
        assert!(gate_fidelity(&e.reconstruct(), &hadamard()).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn euler_reconstruction_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let u = random_su2(&mut rng);
            let e = euler_zxz(&u);
            assert!(e.theta >= 0.0 && e.theta <= PI);
            assert!(e.phi >= 0.0 && e.phi < TAU);
            assert!(e.gamma >= 0.0 && e.gamma < 2.0 * TAU);
            // SU(2)-exact, not just projective
            let su = su2_normalize(&u);
            assert!(e.reconstruct().matrix().max_abs_diff(su.matrix()) < 1e-11);
        }
    }

    #[test]
    fn cap_special_values() {
        assert_abs_diff_eq!(unreachable_cap(2.0, 10.0, 10.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(unreachable_cap(0.0, 10.0, 9.0).unwrap(), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(unreachable_cap(2.0, 10.0, 9.0).unwrap(), 0.0, epsilon = 1e-14);
        assert!(unreachable_cap(0.0, 10.0, 10.0).is_err());
    }
}
