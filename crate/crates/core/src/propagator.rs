//! Time evolution of Gaussian states.
//!
//! Three routes are available:
//!
//! * [`Method::ExactExponential`]: the Van Loan block exponential, exact for
//!   constant generators.
//! * [`Method::AdaptiveRk`]: Dormand–Prince 5(4) on the stacked mean and
//!   covariance, used as an independent oracle.
//! * [`Method::LocalFrameRk`]: the same integrator in the frame co-moving
//!   with the local Hamiltonian blocks. Free-particle spreading is removed
//!   analytically, so weak couplings over long times keep full precision.

use nalgebra::Matrix2;

use crate::entanglement::log_negativity_cov;
use crate::error::{Error, Result};
use crate::lindblad::GaussianGenerator;
use crate::linalg::{expm, expm2, symmetrize, RMat, RVec};
use crate::symplectic::GaussianState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    ExactExponential,
    AdaptiveRk,
    LocalFrameRk,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RkTolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for RkTolerances {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationPlan {
    method: Method,
    times: Vec<f64>,
    rk: RkTolerances,
}

impl PropagationPlan {
    /// Output times must be finite, non-negative and strictly increasing.
    pub fn new(method: Method, times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidInput("time grid is empty".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times[0] < 0.0 {
            return Err(Error::InvalidInput("time grid must be finite and start at t >= 0".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
        }
        Ok(Self { method, times, rk: RkTolerances::default() })
    }

    pub fn with_tolerances(mut self, rk: RkTolerances) -> Self {
        self.rk = rk;
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn tolerances(&self) -> RkTolerances {
        self.rk
    }
}

fn check_sizes(gen: &GaussianGenerator, state: &GaussianState) -> Result<()> {
    if gen.mode_count() != state.mode_count() {
        return Err(Error::InvalidDimension(format!(
            "generator acts on {} modes, state has {}",
            gen.mode_count(),
            state.mode_count()
        )));
    }
    Ok(())
}

/// `exp(A t)` and `∫₀ᵗ e^{As} D e^{Aᵀs} ds` from one block exponential.
fn van_loan(a: &RMat, d: &RMat, t: f64) -> (RMat, RMat) {
    let n = a.nrows();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&(a * t));
    m.view_mut((0, n), (n, n)).copy_from(&(d * t));
    m.view_mut((n, n), (n, n)).copy_from(&(-a.transpose() * t));
    let e = expm(&m);
    let f = e.view((0, 0), (n, n)).into_owned();
    let g = e.view((0, n), (n, n)).into_owned();
    let q = &g * f.transpose();
    (f, q)
}

/// Closed-form evolution to time `t`.
pub fn evolve_exact(gen: &GaussianGenerator, state: &GaussianState, t: f64) -> Result<GaussianState> {
    check_sizes(gen, state)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let (f, q) = van_loan(&gen.drift(), &gen.diffusion(), t);
    let cov = &f * state.cov() * f.transpose() + q;
    GaussianState::new(&f * state.mean(), symmetrize(&cov))
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// State of a linear Gaussian flow, stacked as `(mean, V)`.
#[derive(Clone, Debug)]
struct Flow {
    mean: RVec,
    cov: RMat,
}

impl Flow {
    fn axpy(&self, h: f64, ks: &[Flow], w: &[f64]) -> Flow {
        let mut out = self.clone();
        for (k, &c) in ks.iter().zip(w) {
            if c != 0.0 {
                out.mean.axpy(h * c, &k.mean, 1.0);
                out.cov += &k.cov * (h * c);
            }
        }
        out
    }

    fn error_norm(&self, other: &Flow, err: &Flow, tol: RkTolerances) -> f64 {
        let pairs = self
            .mean
            .iter()
            .zip(other.mean.iter())
            .zip(err.mean.iter())
            .chain(self.cov.iter().zip(other.cov.iter()).zip(err.cov.iter()));
        let mut worst = 0.0_f64;
        for ((y0, y1), e) in pairs {
            let sc = tol.abs + tol.rel * y0.abs().max(y1.abs());
            worst = worst.max(e.abs() / sc);
        }
        worst
    }
}

/// Dormand–Prince integration of `(ṁ, V̇) = f(t, m, V)` through `times`.
fn integrate<F>(mut rhs: F, t0: f64, init: Flow, times: &[f64], tol: RkTolerances) -> Result<Vec<Flow>>
where
    F: FnMut(f64, &Flow) -> Flow,
{
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut y = init;
    let span = times.last().copied().unwrap_or(t0) - t0;
    let mut h = if span > 0.0 { (span * 1e-3).min(1e-2 * (1.0 + t0.abs())) } else { 0.0 };
    let mut k0 = rhs(t, &y);
    let mut steps = 0usize;
    for &target in times {
        while t < target {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Stiffness {
                    t,
                    step: h,
                    detail: format!("exceeded {MAX_STEPS} steps"),
                });
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= 1e-14 * t.abs().max(span) && !last {
                return Err(Error::Stiffness { t, step, detail: "step size underflow".into() });
            }
            let mut ks: Vec<Flow> = Vec::with_capacity(7);
            ks.push(k0.clone());
            for i in 1..7 {
                let yi = y.axpy(step, &ks, &A[i][..i]);
                ks.push(rhs(t + C[i] * step, &yi));
            }
            let mut y5 = y.axpy(step, &ks, &B5);
            y5.cov = symmetrize(&y5.cov);
            let diff: Vec<f64> = B5.iter().zip(B4.iter()).map(|(a, b)| a - b).collect();
            let err = Flow { mean: RVec::zeros(y.mean.len()), cov: RMat::zeros(y.cov.nrows(), y.cov.ncols()) }
                .axpy(step, &ks, &diff);
            let e = y.error_norm(&y5, &err, tol);
            if !e.is_finite() {
                return Err(Error::Stiffness { t, step, detail: "non-finite local error".into() });
            }
            if e <= 1.0 {
                t = if last { target } else { t + step };
                y = y5;
                // first-same-as-last: the seventh stage is f at the new point
                k0 = if last { rhs(t, &y) } else { ks.pop().expect("seven stages") };
                let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || grow < 1.0 {
                    h = step * grow;
                }
            } else {
                h = step * (0.9 * e.powf(-0.2)).clamp(0.1, 1.0);
                if h <= 1e-14 * t.abs().max(span) {
                    return Err(Error::Stiffness { t, step: h, detail: "step size underflow".into() });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// Adaptive Dormand–Prince evolution in the lab frame.
pub fn evolve_rk(
    gen: &GaussianGenerator,
    state: &GaussianState,
    plan: &PropagationPlan,
) -> Result<Vec<GaussianState>> {
    check_sizes(gen, state)?;
    let a = gen.drift();
    let d = gen.diffusion();
    let at = a.transpose();
    let rhs = |_t: f64, y: &Flow| Flow {
        mean: &a * &y.mean,
        cov: symmetrize(&(&a * &y.cov + &y.cov * &at + &d)),
    };
    let init = Flow { mean: state.mean().clone(), cov: state.cov().clone() };
    let flows = integrate(rhs, 0.0, init, plan.times(), plan.tolerances())?;
    flows.into_iter().map(|f| GaussianState::new(f.mean, f.cov)).collect()
}

/// One output of the local-frame integrator.
#[derive(Clone, Debug)]
pub struct LocalFrameSample {
    pub t: f64,
    /// `L(t) = ⊕ exp(ω H_jj t)`, symplectic and block diagonal.
    pub frame: RMat,
    /// State in the co-moving frame: `W = L⁻¹ V L⁻ᵀ`.
    pub local: GaussianState,
}

impl LocalFrameSample {
    /// Lab-frame state `V = L W Lᵀ`.
    pub fn to_lab(&self) -> GaussianState {
        self.local.transformed(&self.frame)
    }
}

fn local_blocks(gen: &GaussianGenerator) -> Vec<Matrix2<f64>> {
    let h = gen.hamiltonian();
    (0..gen.mode_count())
        .map(|j| {
            let b = h.view((2 * j, 2 * j), (2, 2));
            // ω H_jj with ω = [[0, 1], [-1, 0]]
            Matrix2::new(b[(1, 0)], b[(1, 1)], -b[(0, 0)], -b[(0, 1)])
        })
        .collect()
}

fn local_frame(blocks: &[Matrix2<f64>], t: f64) -> RMat {
    let n = blocks.len();
    let mut l = RMat::zeros(2 * n, 2 * n);
    for (j, b) in blocks.iter().enumerate() {
        let e = expm2(b, t);
        for r in 0..2 {
            for c in 0..2 {
                l[(2 * j + r, 2 * j + c)] = e[(r, c)];
            }
        }
    }
    l
}

/// Dormand–Prince evolution in the frame co-moving with the local Hamiltonians.
pub fn evolve_local_frame(
    gen: &GaussianGenerator,
    state: &GaussianState,
    plan: &PropagationPlan,
) -> Result<Vec<LocalFrameSample>> {
    check_sizes(gen, state)?;
    let blocks = local_blocks(gen);
    let n = gen.mode_count();
    let mut a_loc = RMat::zeros(2 * n, 2 * n);
    for (j, b) in blocks.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                a_loc[(2 * j + r, 2 * j + c)] = b[(r, c)];
            }
        }
    }
    let a_int = gen.drift() - a_loc;
    let d = gen.diffusion();
    let rhs = |t: f64, y: &Flow| {
        let l = local_frame(&blocks, t);
        let linv = local_frame(&blocks, -t);
        let at = &linv * &a_int * &l;
        let dt = &linv * &d * linv.transpose();
        let atv = &at * &y.cov;
        Flow { mean: &at * &y.mean, cov: symmetrize(&(&atv + atv.transpose() + dt)) }
    };
    let init = Flow { mean: state.mean().clone(), cov: state.cov().clone() };
    let flows = integrate(rhs, 0.0, init, plan.times(), plan.tolerances())?;
    plan.times()
        .iter()
        .zip(flows)
        .map(|(&t, f)| {
            Ok(LocalFrameSample {
                t,
                frame: local_frame(&blocks, t),
                local: GaussianState::new(f.mean, f.cov)?,
            })
        })
        .collect()
}

/// Lab-frame states at every plan time, by the plan's method.
pub fn evolve(gen: &GaussianGenerator, state: &GaussianState, plan: &PropagationPlan) -> Result<Vec<GaussianState>> {
    match plan.method() {
        Method::ExactExponential => {
            plan.times().iter().map(|&t| evolve_exact(gen, state, t)).collect()
        }
        Method::AdaptiveRk => evolve_rk(gen, state, plan),
        Method::LocalFrameRk => {
            Ok(evolve_local_frame(gen, state, plan)?.iter().map(|s| s.to_lab()).collect())
        }
    }
}

/// `(t, E_N)` along the plan.
///
/// With [`Method::LocalFrameRk`] the negativity is taken from the co-moving
/// state, which has the same value because the frame change is local.
pub fn en_trajectory(
    gen: &GaussianGenerator,
    state: &GaussianState,
    plan: &PropagationPlan,
) -> Result<Vec<(f64, f64)>> {
    if gen.mode_count() != 2 {
        return Err(Error::InvalidDimension("negativity needs a two-mode generator".into()));
    }
    let covs: Vec<RMat> = match plan.method() {
        Method::LocalFrameRk => evolve_local_frame(gen, state, plan)?
            .into_iter()
            .map(|s| s.local.into_parts().1)
            .collect(),
        _ => evolve(gen, state, plan)?.into_iter().map(|s| s.into_parts().1).collect(),
    };
    plan.times()
        .iter()
        .zip(covs)
        .map(|(&t, v)| Ok((t, log_negativity_cov(&v)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, rel_max_diff};
    use crate::sampling::{random_physical_state, random_psd, random_symmetric};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn free_particle() -> GaussianGenerator {
        GaussianGenerator::real(RMat::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]), RMat::zeros(2, 2))
            .unwrap()
    }

    fn random_cp(n: usize, rng: &mut ChaCha8Rng) -> GaussianGenerator {
        GaussianGenerator::new(random_symmetric(2 * n, rng), random_psd(2 * n, 2 * n, rng)).unwrap()
    }

    #[test]
    fn plan_validation() {
        assert!(PropagationPlan::new(Method::AdaptiveRk, vec![]).is_err());
        assert!(PropagationPlan::new(Method::AdaptiveRk, vec![-1.0]).is_err());
        assert!(PropagationPlan::new(Method::AdaptiveRk, vec![1.0, 1.0]).is_err());
        assert!(PropagationPlan::new(Method::AdaptiveRk, vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn zero_generator_is_static() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_physical_state(2, 1.0, &mut rng);
        let z = GaussianGenerator::zero(2);
        let out = evolve_exact(&z, &s, 3.0).unwrap();
        assert!(max_abs(&(out.cov() - s.cov())) < 1e-15);
        let plan = PropagationPlan::new(Method::AdaptiveRk, vec![0.5, 2.0]).unwrap();
        for st in evolve_rk(&z, &s, &plan).unwrap() {
            assert!(max_abs(&(st.cov() - s.cov())) < 1e-15);
        }
        let vac = GaussianState::vacuum(2);
        let en = en_trajectory(&z, &vac, &plan).unwrap();
        assert!(en.iter().all(|&(_, e)| e == 0.0));
    }

    #[test]
    fn ballistic_spreading() {
        let g = free_particle();
        let vac = GaussianState::vacuum(1);
        for t in [0.1, 1.0, 7.0] {
            let v = evolve_exact(&g, &vac, t).unwrap();
            assert!((v.cov()[(0, 0)] - (1.0 + t * t) / 2.0).abs() < 1e-13 * (1.0 + t * t));
        }
        let plan = PropagationPlan::new(Method::LocalFrameRk, vec![1.0, 1e6]).unwrap();
        let out = evolve(&g, &vac, &plan).unwrap();
        assert!((out[1].cov()[(0, 0)] - (1.0 + 1e12) / 2.0).abs() < 1e-6);
    }

    #[test]
    fn position_decoherence_diffuses_momentum() {
        let k1 = 0.25;
        let g = GaussianGenerator::real(RMat::zeros(2, 2), RMat::from_row_slice(2, 2, &[k1, 0.0, 0.0, 0.0]))
            .unwrap();
        let vac = GaussianState::vacuum(1);
        let plan = PropagationPlan::new(Method::AdaptiveRk, vec![0.5, 1.0, 4.0]).unwrap();
        let rk = evolve_rk(&g, &vac, &plan).unwrap();
        for (st, &t) in rk.iter().zip(plan.times()) {
            let ex = evolve_exact(&g, &vac, t).unwrap();
            assert!((ex.cov()[(1, 1)] - (0.5 + k1 * t)).abs() < 1e-14);
            assert!((ex.cov()[(0, 0)] - 0.5).abs() < 1e-15);
            assert!((st.cov()[(1, 1)] - (0.5 + k1 * t)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_matches_rk_on_random_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 1..=3 {
            let g = random_cp(n, &mut rng);
            let s = random_physical_state(n, 1.0, &mut rng);
            let plan = PropagationPlan::new(Method::AdaptiveRk, vec![0.1, 1.0])
                .unwrap()
                .with_tolerances(RkTolerances { abs: 1e-12, rel: 1e-12 });
            let rk = evolve_rk(&g, &s, &plan).unwrap();
            for (st, &t) in rk.iter().zip(plan.times()) {
                let ex = evolve_exact(&g, &s, t).unwrap();
                assert!(rel_max_diff(st.cov(), ex.cov(), 1.0) < 1e-8);
            }
        }
    }

    #[test]
    fn local_frame_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = random_cp(2, &mut rng);
        let s = random_physical_state(2, 0.5, &mut rng);
        let plan = PropagationPlan::new(Method::LocalFrameRk, vec![0.3, 1.2])
            .unwrap()
            .with_tolerances(RkTolerances { abs: 1e-13, rel: 1e-13 });
        let lf = evolve(&g, &s, &plan).unwrap();
        for (st, &t) in lf.iter().zip(plan.times()) {
            let ex = evolve_exact(&g, &s, t).unwrap();
            assert!(rel_max_diff(st.cov(), ex.cov(), 1.0) < 1e-9);
            assert!(rel_max_diff(
                &RMat::from_column_slice(4, 1, st.mean().as_slice()),
                &RMat::from_column_slice(4, 1, ex.mean().as_slice()),
                1.0
            ) < 1e-9);
        }
    }

    #[test]
    fn semigroup_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_cp(2, &mut rng);
        let s = random_physical_state(2, 1.0, &mut rng);
        let once = evolve_exact(&g, &s, 1.1).unwrap();
        let twice = evolve_exact(&g, &evolve_exact(&g, &s, 0.4).unwrap(), 0.7).unwrap();
        assert!(rel_max_diff(once.cov(), twice.cov(), 1.0) < 1e-10);
    }

    #[test]
    fn cp_flow_stays_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let g = random_cp(2, &mut rng);
            let s = random_physical_state(2, 0.0, &mut rng);
            for t in [0.05, 0.5, 2.0] {
                let v = evolve_exact(&g, &s, t).unwrap();
                let m = crate::symplectic::uncertainty_margin(v.cov()).unwrap();
                assert!(m > -1e-9 * (1.0 + max_abs(v.cov())), "{m}");
            }
        }
    }
}
