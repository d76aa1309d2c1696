//! Dense complex linear algebra for 2x2 and 4x4 matrices: Pauli algebra,
//! Hermitian eigendecomposition, matrix exponentials, time-dependent
//! propagation and fidelity metrics.

use crate::{Error, Result, TOL_STRUCTURAL};

pub type C64 = num_complex::Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major dense complex matrix. Dimensions 2 and 4 are the supported
/// carriers; the arithmetic itself is dimension-agnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(dim: usize, rows: &[C64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch(rows.len(), dim * dim));
        }
        let m = ComplexMatrix { dim, data: rows.to_vec() };
        if !m.is_finite() {
            return Err(Error::NonFiniteEntries);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = ONE;
        for col in 0..n {
            let (piv, mag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag == 0.0 {
                return ZERO;
            }
            if piv != col {
                for j in 0..n {
                    let t = a[(col, j)];
                    a[(col, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                for j in col..n {
                    let s = a[(col, j)];
                    a[(r, j)] -= f * s;
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, -I, I, ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ONE, ZERO, ZERO, -ONE]).unwrap()
}

/// a1*sx + a2*sy + a3*sz
pub fn pauli_vector(a: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(
        2,
        &[
            C64::new(a[2], 0.0),
            C64::new(a[0], -a[1]),
            C64::new(a[0], a[1]),
            C64::new(-a[2], 0.0),
        ],
    )
    .unwrap()
}

/// Unitary witness: U U† = I within 1e-12 (Frobenius).
#[derive(Clone, Debug)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFiniteEntries);
        }
        let dev = m.mul(&m.adjoint()).sub(&ComplexMatrix::identity(m.dim())).frobenius_norm();
        if dev > TOL_STRUCTURAL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(self.0.mul(&other.0))
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn phase_mul(&self, phase: C64) -> UnitaryMatrix {
        UnitaryMatrix(self.0.scale(phase))
    }
}

/// Hermitian witness: H = H† within 1e-12.
#[derive(Clone, Debug)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFiniteEntries);
        }
        let dev = m.sub(&m.adjoint()).frobenius_norm();
        if dev > TOL_STRUCTURAL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(HermitianMatrix(m))
    }

    pub fn zero(dim: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Largest row-sum norm, used to pick integrator step counts.
    pub fn norm_bound(&self) -> f64 {
        let n = self.0.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations: returns ascending eigenvalues and the unitary of column
/// eigenvectors V with H = V diag(w) V†.
pub fn hermitian_eig(h: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.dim();
    let mut a = h.matrix().clone();
    // Symmetrize away the (sub-1e-12) constructor slack so the iteration
    // targets an exactly Hermitian matrix.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let m = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-18 * scale {
                    continue;
                }
                let u = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // W = I except W[pp]=c, W[pq]=s*u, W[qp]=-s*conj(u), W[qq]=c.
                for j in 0..n {
                    let ajp = a[(j, p)];
                    let ajq = a[(j, q)];
                    a[(j, p)] = ajp * c - ajq * s * u.conj();
                    a[(j, q)] = ajp * s * u + ajq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s * u;
                    a[(q, j)] = apj * s * u.conj() + aqj * c;
                }
                for j in 0..n {
                    let vjp = v[(j, p)];
                    let vjq = v[(j, q)];
                    v[(j, p)] = vjp * c - vjq * s * u.conj();
                    v[(j, q)] = vjp * s * u + vjq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let w: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vs = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vs[(row, col)] = v[(row, src)];
        }
    }
    (w, vs)
}

/// e^{-iHt} via eigendecomposition.
pub fn expm_hermitian(h: &HermitianMatrix, t: f64) -> UnitaryMatrix {
    let n = h.dim();
    let (w, v) = hermitian_eig(h);
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += v[(i, k)] * (-I * w[k] * t).exp() * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    UnitaryMatrix::new(out).expect("eigendecomposition produced non-unitary exponential")
}

/// Midpoint-exponential (first-order Magnus) propagator for a time-dependent
/// Hamiltonian. Every step is an exact exponential, so the result is unitary
/// for any step count.
pub fn propagate_timedep<F>(field: F, t_f: f64, steps: usize) -> Result<UnitaryMatrix>
where
    F: Fn(f64) -> HermitianMatrix,
{
    if t_f < 0.0 {
        return Err(Error::NegativeDuration(t_f));
    }
    let steps = steps.max(1);
    let dt = t_f / steps as f64;
    let dim = field(0.0).dim();
    let mut u = UnitaryMatrix::identity(dim);
    for i in 0..steps {
        let tm = (i as f64 + 0.5) * dt;
        u = expm_hermitian(&field(tm), dt).mul(&u);
    }
    Ok(u)
}

/// Default step count for desk-scale propagation: ceil(200 * t_f * max||H||).
pub fn default_steps(t_f: f64, h_norm: f64) -> usize {
    ((200.0 * t_f * h_norm).ceil() as usize).max(1)
}

/// Global-phase-insensitive closeness: |tr(U†V)| / dim, equal to 1 iff
/// V = e^{i phi} U.
pub fn gate_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(u.adjoint().mul(v).matrix().trace().norm() / u.dim() as f64)
}

/// Tensor product of two 2x2 matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}
