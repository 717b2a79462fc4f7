//! Dense linear-algebra helpers shared by the rest of the crate.
//!
//! Everything here works on `nalgebra` dynamic matrices; the fixed-size
//! 2×2 helpers are used where per-entry relative accuracy matters
//! (local free-flight propagators, block determinants).

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type RVec = DVector<f64>;
pub type CVec = DVector<Complex64>;

/// Default relative factor for eigenvalue-based checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// How a tolerance is turned into an absolute threshold.
///
/// `Scaled(r)` resolves to `r * (1 + scale)`, `Relative(r)` to `r * scale`,
/// where `scale` is the max-abs entry of the matrix under test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    Scaled(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn resolve(self, scale: f64) -> f64 {
        match self {
            Tolerance::Absolute(t) => t,
            Tolerance::Scaled(r) => r * (1.0 + scale),
            Tolerance::Relative(r) => r * scale,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Scaled(DEFAULT_TOL)
    }
}

impl From<f64> for Tolerance {
    fn from(t: f64) -> Self {
        Tolerance::Absolute(t)
    }
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

pub fn symmetrize(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn is_symmetric(m: &RMat, tol: f64) -> bool {
    m.is_square() && (m - m.transpose()).iter().all(|x| x.abs() <= tol)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

pub fn kron<T: nalgebra::Scalar + Copy + std::ops::Mul<Output = T>>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
) -> DMatrix<T> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Eigenvalues of a Hermitian matrix (order as returned by the solver).
pub fn hermitian_eigenvalues(m: &CMat) -> RVec {
    SymmetricEigen::new(m.clone()).eigenvalues
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).min()
}

/// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix.
///
/// Ties go to the lowest solver index. The eigenvector phase is fixed so
/// that its first non-negligible component is real and positive.
pub fn min_hermitian_eigenpair(m: &CMat) -> (f64, CVec) {
    let eig = SymmetricEigen::new(m.clone());
    let mut best = 0;
    for (i, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev < eig.eigenvalues[best] {
            best = i;
        }
    }
    let mut v: CVec = eig.eigenvectors.column(best).into_owned();
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::new(norm, 0.0);
    }
    let cutoff = 1e-8 * v.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if let Some(lead) = v.iter().find(|z| z.norm() > cutoff).copied() {
        let phase = lead.conj() / lead.norm();
        v *= phase;
    }
    (eig.eigenvalues[best], v)
}

pub fn one_norm(m: &RMat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
pub fn expm(a: &RMat) -> RMat {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    const THETA_13: f64 = 5.371_920_351_148_152;
    const B: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];
    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * 2f64.powi(-squarings);
    let id = RMat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9])
        + &a6 * B[7]
        + &a4 * B[5]
        + &a2 * B[3]
        + &id * B[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8])
        + &a6 * B[6]
        + &a4 * B[4]
        + &a2 * B[2]
        + &id * B[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// `cosh(sqrt(z))`, continued analytically to `cos(sqrt(-z))` for `z < 0`.
pub fn cosh_sqrt(z: f64) -> f64 {
    if z >= 0.0 {
        z.sqrt().cosh()
    } else {
        (-z).sqrt().cos()
    }
}

/// `sinh(sqrt(z)) / sqrt(z)` (and its `sin` continuation), accurate near zero.
pub fn sinhc_sqrt(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        // 1 + z/6 + z²/120 + z³/5040
        1.0 + z / 6.0 * (1.0 + z / 20.0 * (1.0 + z / 42.0))
    } else if z > 0.0 {
        let r = z.sqrt();
        r.sinh() / r
    } else {
        let r = (-z).sqrt();
        r.sin() / r
    }
}

/// `exp(m t)` for a 2×2 matrix in closed form, entrywise accurate.
pub fn expm2(m: &Matrix2<f64>, t: f64) -> Matrix2<f64> {
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let k = m - Matrix2::identity() * half_tr;
    // k is traceless, so k² = -det(k) I.
    let z = -det2(k[(0, 0)], k[(0, 1)], k[(1, 0)], k[(1, 1)]) * t * t;
    let scale = (half_tr * t).exp();
    (Matrix2::identity() * cosh_sqrt(z) + k * (t * sinhc_sqrt(z))) * scale
}

/// `a d - b c` with one rounding (Kahan's fused-multiply-add scheme).
pub fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = b * c;
    let err = (-b).mul_add(c, w);
    let f = a.mul_add(d, -w);
    f + err
}

pub fn det2m(m: &Matrix2<f64>) -> f64 {
    det2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

/// Sum with Neumaier compensation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Relative max-norm distance `|a - b|_max / max(|b|_max, floor)`.
pub fn rel_max_diff(a: &RMat, b: &RMat, floor: f64) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(floor)
}
