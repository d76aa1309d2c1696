//! Local-equivalence machinery for two-qubit gates: magic-basis invariants,
//! Weyl-chamber coordinates, canonical gates, and canonicalization of a
//! general exchange coupling to diagonal form by local rotations.

use crate::qmath::{self, expm_hermitian, kron, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use crate::{Error, Result};
use nalgebra::{Matrix3, Matrix4, Vector4};
use std::f64::consts::PI;

/// Chamber coordinates [c1, c2, c3] with pi - c2 >= c1 >= c2 >= c3 >= 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylPoint {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl WeylPoint {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }
}

/// Local invariants in both normalizations. The chamber form is
/// (g1, g2, g3) = (4 cos c1 cos c2 cos c3, 4 sin c1 sin c2 sin c3,
/// cos 2c1 + cos 2c2 + cos 2c3); the Makhlin form is
/// (Re G1, Im G1, G2) with G1 = ((g1 + i g2)/4)^2 and G2 = g3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantTriple {
    pub chamber: [f64; 3],
    pub makhlin: [f64; 3],
}

/// Real 3x3 exchange-coupling matrix J_{ab} in S = sum J_{ab} sa(1) sb(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingMatrix {
    pub j: [[f64; 3]; 3],
}

impl CouplingMatrix {
    pub fn new(j: [[f64; 3]; 3]) -> Result<Self> {
        if j.iter().flatten().all(|x| x.is_finite()) {
            Ok(CouplingMatrix { j })
        } else {
            Err(Error::NonFiniteEntries)
        }
    }

    pub fn diagonal(jx: f64, jy: f64, jz: f64) -> Result<Self> {
        Self::new([[jx, 0.0, 0.0], [0.0, jy, 0.0], [0.0, 0.0, jz]])
    }

    /// The interaction Hamiltonian sum J_{ab} sigma_a x sigma_b.
    pub fn hamiltonian(&self) -> HermitianMatrix {
        let paulis = [qmath::pauli_x(), qmath::pauli_y(), qmath::pauli_z()];
        let mut m = ComplexMatrix::identity(4).scale(C64::new(0.0, 0.0));
        for a in 0..3 {
            for b in 0..3 {
                if self.j[a][b] != 0.0 {
                    m = m.add(&kron(&paulis[a], &paulis[b]).scale(C64::new(self.j[a][b], 0.0)));
                }
            }
        }
        HermitianMatrix::new(m).expect("real combinations of Pauli tensors are Hermitian")
    }
}

/// Magic (Bell) basis change Q.
pub fn magic_basis() -> UnitaryMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    let o = C64::new(s, 0.0);
    let i = C64::new(0.0, s);
    let z = C64::new(0.0, 0.0);
    UnitaryMatrix::new(
        ComplexMatrix::from_rows(4, &[o, z, z, i, z, i, o, z, z, i, -o, z, o, z, z, -i]).unwrap(),
    )
    .unwrap()
}

/// exp(i/2 (c1 sx.sx + c2 sy.sy + c3 sz.sz)).
pub fn canonical_gate(c: [f64; 3]) -> UnitaryMatrix {
    let h = HermitianMatrix::new(
        kron(&qmath::pauli_x(), &qmath::pauli_x())
            .scale(C64::new(0.5 * c[0], 0.0))
            .add(&kron(&qmath::pauli_y(), &qmath::pauli_y()).scale(C64::new(0.5 * c[1], 0.0)))
            .add(&kron(&qmath::pauli_z(), &qmath::pauli_z()).scale(C64::new(0.5 * c[2], 0.0))),
    )
    .unwrap();
    expm_hermitian(&h, -1.0)
}

/// Both invariant normalizations evaluated directly from chamber coordinates.
pub fn invariants_from_weyl(c: [f64; 3]) -> InvariantTriple {
    let g1 = 4.0 * c[0].cos() * c[1].cos() * c[2].cos();
    let g2 = 4.0 * c[0].sin() * c[1].sin() * c[2].sin();
    let g3 = (2.0 * c[0]).cos() + (2.0 * c[1]).cos() + (2.0 * c[2]).cos();
    let big = C64::new(g1 / 4.0, g2 / 4.0);
    let big = big * big;
    InvariantTriple { chamber: [g1, g2, g3], makhlin: [big.re, big.im, g3] }
}

/// Gram matrix m = U_B^T U_B of the magic-basis image of det-normalized U.
fn gram_matrix(u: &UnitaryMatrix) -> Result<ComplexMatrix> {
    if u.dim() != 4 {
        return Err(Error::BadDimension(u.dim()));
    }
    let det = u.matrix().det();
    let root = det.powf(0.25);
    let un = u.matrix().scale(C64::new(1.0, 0.0) / root);
    let q = magic_basis();
    let ub = q.adjoint().matrix().mul(&un).mul(q.matrix());
    Ok(ub.transpose().mul(&ub))
}

/// Local invariants of a two-qubit unitary.
pub fn invariants_from_unitary(u: &UnitaryMatrix) -> Result<InvariantTriple> {
    let m = gram_matrix(u)?;
    let tr = m.trace();
    let tr2 = m.mul(&m).trace();
    let big = tr * tr / 16.0;
    let g2m = ((tr * tr - tr2) / 4.0).re;
    // chamber form via the eigenphase reconstruction, which fixes the branch
    let chamber = invariants_from_weyl(weyl_coordinates(u)?.as_array()).chamber;
    Ok(InvariantTriple { chamber, makhlin: [big.re, big.im, g2m] })
}

/// Eigenphases of a symmetric unitary m: since m = O e^{i Th} O^T with O real
/// orthogonal, Re(m) and Im(m) commute and Re(m) + mu Im(m) is real symmetric
/// with the same eigenvectors; mu is perturbed on accidental degeneracy.
fn symmetric_unitary_eigenphases(m: &ComplexMatrix) -> Result<[f64; 4]> {
    let re = Matrix4::from_fn(|r, c| m[(r, c)].re);
    let im = Matrix4::from_fn(|r, c| m[(r, c)].im);
    for mu in [0.618, -0.377, 1.234, 0.091] {
        let eig = nalgebra::SymmetricEigen::new(re + im * mu);
        let mut phases = [0.0f64; 4];
        let mut ok = true;
        for k in 0..4 {
            let o: Vector4<f64> = eig.eigenvectors.column(k).into();
            let cre = (o.transpose() * re * o)[(0, 0)];
            let cim = (o.transpose() * im * o)[(0, 0)];
            let theta = cim.atan2(cre);
            let (s, c) = theta.sin_cos();
            let res = (re * o - c * o).norm() + (im * o - s * o).norm();
            if res > 1e-8 {
                ok = false;
                break;
            }
            phases[k] = theta;
        }
        if ok {
            return Ok(phases);
        }
    }
    Err(Error::SolverFailure(
        "eigenphase extraction failed for the magic-basis Gram matrix".into(),
    ))
}

/// Chamber coordinates of a two-qubit unitary via Weyl-group folding of the
/// Gram-matrix eigenphases.
pub fn weyl_coordinates(u: &UnitaryMatrix) -> Result<WeylPoint> {
    const PI2: f64 = PI / 2.0;
    const PI4: f64 = PI / 4.0;
    const PI32: f64 = 3.0 * PI / 2.0;
    let m = gram_matrix(u)?;
    let phases = symmetric_unitary_eigenphases(&m)?;
    let darg: [f64; 4] = [
        -phases[0] / 2.0,
        -phases[1] / 2.0,
        -phases[2] / 2.0,
        (phases[0] + phases[1] + phases[2]) / 2.0,
    ];
    let mut cs: Vec<f64> = (0..3)
        .map(|i| ((darg[i] + darg[3]) / 2.0).rem_euclid(2.0 * PI))
        .collect();
    let cst: Vec<f64> = cs
        .iter()
        .map(|&x| {
            let r = x.rem_euclid(PI2);
            r.min(PI2 - r)
        })
        .collect();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| cst[i].partial_cmp(&cst[j]).unwrap());
    let order = [order[1], order[2], order[0]];
    cs = vec![cs[order[0]], cs[order[1]], cs[order[2]]];
    if cs[0] > PI2 {
        cs[0] -= PI32;
    }
    if cs[1] > PI2 {
        cs[1] -= PI32;
    }
    let mut conjs = 0;
    if cs[0] > PI4 {
        cs[0] = PI2 - cs[0];
        conjs += 1;
    }
    if cs[1] > PI4 {
        cs[1] = PI2 - cs[1];
        conjs += 1;
    }
    if cs[2] > PI2 {
        cs[2] -= PI32;
    }
    if conjs == 1 {
        cs[2] = PI2 - cs[2];
    }
    if cs[2] > PI4 {
        cs[2] -= PI2;
    }
    let (mut c1, c2, mut c3) = (2.0 * cs[1], 2.0 * cs[0], 2.0 * cs[2]);
    if c3 < 0.0 {
        c1 = PI - c1;
        c3 = -c3;
    }
    // base plane: of the two Makhlin-equivalent representatives pick c1 <= pi/2
    if c3 < 1e-12 && c1 > PI2 + 1e-12 {
        c1 = PI - c1;
    }
    Ok(WeylPoint { c1, c2, c3 })
}

/// Two gates are locally equivalent iff their Makhlin triples coincide.
pub fn is_locally_equivalent(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> Result<bool> {
    let a = invariants_from_unitary(u)?.makhlin;
    let b = invariants_from_unitary(v)?.makhlin;
    Ok((0..3).all(|i| (a[i] - b[i]).abs() <= tol))
}

/// SU(2) element u with u sigma_a u^dag = sum_b O_{ba} sigma_b, extracted as
/// a quaternion (numerically stable at all rotation angles).
fn lift_so3(o: &Matrix3<f64>) -> UnitaryMatrix {
    let t = o.trace();
    let (w, x, y, z);
    if t > o[(0, 0)] && t > o[(1, 1)] && t > o[(2, 2)] {
        let r = (1.0 + t).sqrt();
        w = r / 2.0;
        x = (o[(2, 1)] - o[(1, 2)]) / (2.0 * r);
        y = (o[(0, 2)] - o[(2, 0)]) / (2.0 * r);
        z = (o[(1, 0)] - o[(0, 1)]) / (2.0 * r);
    } else if o[(0, 0)] >= o[(1, 1)] && o[(0, 0)] >= o[(2, 2)] {
        let r = (1.0 + o[(0, 0)] - o[(1, 1)] - o[(2, 2)]).sqrt();
        x = r / 2.0;
        w = (o[(2, 1)] - o[(1, 2)]) / (2.0 * r);
        y = (o[(0, 1)] + o[(1, 0)]) / (2.0 * r);
        z = (o[(0, 2)] + o[(2, 0)]) / (2.0 * r);
    } else if o[(1, 1)] >= o[(2, 2)] {
        let r = (1.0 - o[(0, 0)] + o[(1, 1)] - o[(2, 2)]).sqrt();
        y = r / 2.0;
        w = (o[(0, 2)] - o[(2, 0)]) / (2.0 * r);
        x = (o[(0, 1)] + o[(1, 0)]) / (2.0 * r);
        z = (o[(1, 2)] + o[(2, 1)]) / (2.0 * r);
    } else {
        let r = (1.0 - o[(0, 0)] - o[(1, 1)] + o[(2, 2)]).sqrt();
        z = r / 2.0;
        w = (o[(1, 0)] - o[(0, 1)]) / (2.0 * r);
        x = (o[(0, 2)] + o[(2, 0)]) / (2.0 * r);
        y = (o[(1, 2)] + o[(2, 1)]) / (2.0 * r);
    }
    // u = w I - i (x sx + y sy + z sz)
    let m = ComplexMatrix::identity(2)
        .scale(C64::new(w, 0.0))
        .sub(&qmath::pauli_vector([x, y, z]).scale(C64::new(0.0, 1.0)));
    UnitaryMatrix::new(m).expect("unit quaternion gives a unitary")
}

/// Diagonalize the coupling by local rotations: J = O1 D O2^T with special
/// orthogonal factors, k = lift(O1^T) x lift(O2^T), k S k^dag = sum Ja sa.sa.
pub fn canonicalize_coupling(coupling: &CouplingMatrix) -> Result<(UnitaryMatrix, [f64; 3])> {
    let j = Matrix3::from_fn(|r, c| coupling.j[r][c]);
    let svd = nalgebra::SVD::new(j, true, true);
    let mut o1 = svd.u.ok_or_else(|| Error::SolverFailure("SVD of coupling failed".into()))?;
    let mut o2 = svd
        .v_t
        .ok_or_else(|| Error::SolverFailure("SVD of coupling failed".into()))?
        .transpose();
    let mut d = [svd.singular_values[0], svd.singular_values[1], svd.singular_values[2]];
    let (s1, s2) = (o1.determinant().signum(), o2.determinant().signum());
    for r in 0..3 {
        o1[(r, 2)] *= s1;
        o2[(r, 2)] *= s2;
    }
    d[2] *= s1 * s2;
    let k = UnitaryMatrix::new(kron(
        lift_so3(&o1.transpose()).matrix(),
        lift_so3(&o2.transpose()).matrix(),
    ))?;
    Ok((k, d))
}
