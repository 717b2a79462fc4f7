//! Two-mode Gaussian entanglement: PPT test and logarithmic negativity.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, det2m, RMat, Tolerance};
use crate::partial_transpose::state_reflection;
use crate::symplectic::{symplectic_eigenvalues, uncertainty_ok_cov, GaussianState};

/// `V = [[α, γ], [γᵀ, β]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeBlocks {
    pub alpha: Matrix2<f64>,
    pub beta: Matrix2<f64>,
    pub gamma: Matrix2<f64>,
}

impl TwoModeBlocks {
    pub fn from_cov(cov: &RMat) -> Result<Self> {
        if cov.shape() != (4, 4) {
            return Err(Error::InvalidDimension(format!(
                "two-mode covariance must be 4x4, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let block = |r: usize, c: usize| {
            Matrix2::new(cov[(r, c)], cov[(r, c + 1)], cov[(r + 1, c)], cov[(r + 1, c + 1)])
        };
        Ok(Self { alpha: block(0, 0), beta: block(2, 2), gamma: block(0, 2) })
    }

    pub fn to_cov(&self) -> RMat {
        let mut v = RMat::zeros(4, 4);
        for r in 0..2 {
            for c in 0..2 {
                v[(r, c)] = self.alpha[(r, c)];
                v[(r + 2, c + 2)] = self.beta[(r, c)];
                v[(r, c + 2)] = self.gamma[(r, c)];
                v[(r + 2, c)] = self.gamma[(c, r)];
            }
        }
        v
    }

    /// `det α + det β − 2 det γ`, the seralian of the transposed state.
    pub fn delta(&self) -> f64 {
        compensated_sum(&[det2m(&self.alpha), det2m(&self.beta), -2.0 * det2m(&self.gamma)])
    }

    /// `det V` via the Schur complement when `α` is well conditioned.
    pub fn det(&self) -> f64 {
        let da = det2m(&self.alpha);
        if da > 0.0 {
            let adj = Matrix2::new(self.alpha[(1, 1)], -self.alpha[(0, 1)], -self.alpha[(1, 0)], self.alpha[(0, 0)]);
            let schur = self.beta - self.gamma.transpose() * adj * self.gamma / da;
            da * det2m(&schur)
        } else {
            self.to_cov().determinant()
        }
    }
}

/// `Δ² − 4 det V` of the transposed state, expanded around the vacuum in
/// `X = V − I/2` so that the O(1) parts cancel exactly. Also returns `Δ − 1/2`.
fn near_vacuum_invariants(x: &TwoModeBlocks) -> (f64, f64) {
    let (a, b, g) = (x.alpha, x.beta, x.gamma);
    let xm = x.to_cov();
    let (ta, tb) = (a.trace(), b.trace());
    let q = compensated_sum(&[det2m(&a), det2m(&b), -2.0 * det2m(&g)]);
    let t = 0.5 * (ta + tb);
    let minor3 = |skip: usize| {
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        Matrix3::from_fn(|r, c| xm[(idx[r], idx[c])]).determinant()
    };
    let e3 = compensated_sum(&[minor3(0), minor3(1), minor3(2), minor3(3)]);
    let e4 = xm.determinant();
    let half_diff = 0.5 * (ta - tb);
    let radicand = compensated_sum(&[
        half_diff * half_diff,
        (g[(0, 0)] - g[(1, 1)]).powi(2),
        (g[(0, 1)] + g[(1, 0)]).powi(2),
        2.0 * t * q,
        q * q,
        -2.0 * e3,
        -4.0 * e4,
    ]);
    (t + q, radicand)
}

/// `4 ν̃₋² − 1` for the smallest symplectic eigenvalue of the transposed state.
///
/// Near the vacuum (`|V − I/2|_max ≤ 1`) the invariants are expanded in
/// `V − I/2`; otherwise `ν̃₋² = 2 det V / (Δ + √(Δ² − 4 det V))`, which avoids
/// the cancellation of `(Δ − √(Δ² − 4 det V)) / 2`.
fn pt_excess(cov: &RMat) -> Result<f64> {
    let blocks = TwoModeBlocks::from_cov(cov)?;
    let x = TwoModeBlocks::from_cov(&(cov - RMat::identity(4, 4) * 0.5))?;
    let near = crate::linalg::max_abs(&x.to_cov()) <= 1.0;
    let (shift, radicand) = if near {
        near_vacuum_invariants(&x)
    } else {
        let delta = blocks.delta();
        (delta - 0.5, delta * delta - 4.0 * blocks.det())
    };
    let delta = 0.5 + shift;
    if radicand < -1e-9 * delta * delta {
        return Err(Error::NumericalInconsistency(format!(
            "Δ² − 4 det V = {radicand:e} is negative beyond roundoff (Δ = {delta:e})"
        )));
    }
    let root = radicand.max(0.0).sqrt();
    let y = 2.0 * (shift - root);
    if near && y > -0.5 {
        return Ok(y);
    }
    Ok(8.0 * blocks.det() / (delta + root) - 1.0)
}

/// Smallest symplectic eigenvalue of the partially transposed state, squared.
pub fn pt_min_symplectic_sq(cov: &RMat) -> Result<f64> {
    Ok(0.25 * (1.0 + pt_excess(cov)?))
}

/// `max(0, −log₂(2 ν̃₋))` from the covariance.
pub fn log_negativity_cov(cov: &RMat) -> Result<f64> {
    let y = pt_excess(cov)?;
    if y.is_nan() || y <= -1.0 {
        return Err(Error::NumericalInconsistency(format!(
            "partially transposed symplectic eigenvalue squared is {:e}",
            0.25 * (1.0 + y)
        )));
    }
    // −log₂(2ν) = −½ log₂(1 + y)
    Ok((-0.5 * y.ln_1p() / std::f64::consts::LN_2).max(0.0))
}

pub fn log_negativity(state: &GaussianState) -> Result<f64> {
    log_negativity_cov(state.cov())
}

/// Independent path: symplectic spectrum of the reflected covariance.
pub fn log_negativity_oracle(cov: &RMat) -> Result<f64> {
    if cov.shape() != (4, 4) {
        return Err(Error::InvalidDimension("two-mode covariance must be 4x4".into()));
    }
    let p = state_reflection();
    let ev = symplectic_eigenvalues(&(&p * cov * &p))?;
    Ok((-(2.0 * ev[0]).log2()).max(0.0))
}

/// Simon's criterion: the reflected state obeys the uncertainty principle.
pub fn ppt_separable(state: &GaussianState, tol: impl Into<Tolerance>) -> Result<bool> {
    if state.mode_count() != 2 {
        return Err(Error::InvalidDimension("PPT test needs a two-mode state".into()));
    }
    let tol = tol.into();
    if !uncertainty_ok_cov(state.cov(), tol)? {
        return Err(Error::InvalidInput("state violates the uncertainty principle".into()));
    }
    let p = state_reflection();
    let reflected = &p * state.cov() * &p;
    uncertainty_ok_cov(&reflected, tol)
}
